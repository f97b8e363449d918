//! The object-by-property table the engine works from.
//!
//! Each corpus graph is a row; numerical invariants and Boolean predicates are
//! columns. Undefined invariant values are stored as `None` and skipped by
//! every fit that involves that column.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::Graph;
use crate::graph6::to_graph6;
use crate::invariants::InvariantRegistry;
use crate::predicates::{self, PredicateRegistry};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("at least two numeric columns are required, got {0}")]
    TooFewNumericColumns(usize),
    #[error("duplicate object label {0:?}")]
    DuplicateLabel(String),
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("column {0:?} is not numeric")]
    NotNumeric(String),
    #[error("column {0:?} is not a predicate")]
    NotBoolean(String),
    #[error("cannot compare column {0:?} with itself")]
    SameColumn(String),
    #[error("column {name:?} has {got} entries, expected {expected}")]
    RaggedColumn { name: String, got: usize, expected: usize },
    #[error("table cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericColumn {
    pub name: String,
    pub values: Vec<Option<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanColumn {
    pub name: String,
    pub values: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureTable {
    labels: Vec<String>,
    numeric: Vec<NumericColumn>,
    boolean: Vec<BooleanColumn>,
}

/// A conjunction of predicate names. The empty conjunction selects every row.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hypothesis(BTreeSet<String>);

impl Hypothesis {
    pub fn all() -> Self {
        Hypothesis::default()
    }

    pub fn new<I, S>(predicates: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Hypothesis(predicates.into_iter().map(Into::into).collect())
    }

    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Hypothesis) -> Hypothesis {
        Hypothesis(self.0.union(&other.0).cloned().collect())
    }

    /// Whether every predicate is true for the given lookup.
    pub fn holds(&self, mut value: impl FnMut(&str) -> bool) -> bool {
        self.0.iter().all(|p| value(p))
    }

    /// Phrase used in rendered statements: "connected and cubic".
    pub fn describe(&self) -> String {
        self.0
            .iter()
            .map(|p| predicates::display_name(p))
            .collect::<Vec<_>>()
            .join(" and ")
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("(all)")
        } else {
            f.write_str(&self.0.iter().cloned().collect::<Vec<_>>().join(" ∧ "))
        }
    }
}

/// One `(x, y, row)` triple from [`FeatureTable::select_rows`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectedRow {
    pub x: u64,
    pub y: u64,
    pub row: usize,
}

/// Label for the `index`-th corpus graph.
pub fn object_label(g: &Graph, index: usize) -> String {
    g.label().map_or_else(|| format!("G{}", index + 1), str::to_string)
}

/// Computes every invariant and predicate on every corpus graph.
pub fn build_table(
    corpus: &[Graph],
    invariants: &InvariantRegistry,
    predicates: &PredicateRegistry,
) -> Result<FeatureTable, FeatureError> {
    if corpus.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }
    let rows: Vec<(Vec<Option<u64>>, Vec<bool>)> = corpus
        .par_iter()
        .map(|g| {
            let nums = invariants.iter().map(|inv| (inv.eval)(g).ok()).collect();
            let bools = predicates.iter().map(|p| (p.eval)(g)).collect();
            (nums, bools)
        })
        .collect();

    let numeric = invariants
        .iter()
        .enumerate()
        .map(|(j, inv)| NumericColumn {
            name: inv.name.to_string(),
            values: rows.iter().map(|r| r.0[j]).collect(),
        })
        .collect();
    let boolean = predicates
        .iter()
        .enumerate()
        .map(|(j, p)| BooleanColumn {
            name: p.name.to_string(),
            values: rows.iter().map(|r| r.1[j]).collect(),
        })
        .collect();
    let labels = corpus.iter().enumerate().map(|(i, g)| object_label(g, i)).collect();
    FeatureTable::new(labels, numeric, boolean)
}

/// Content digest of a corpus plus the requested column names; keys the table cache.
pub fn corpus_digest(corpus: &[Graph], invariants: &InvariantRegistry, predicates: &PredicateRegistry) -> String {
    let mut h = Sha256::new();
    for (i, g) in corpus.iter().enumerate() {
        let code = to_graph6(g).unwrap_or_else(|_| format!("{g:?}"));
        h.update(code.as_bytes());
        h.update(b"\t");
        h.update(object_label(g, i).as_bytes());
        h.update(b"\n");
    }
    h.update(b"#invariants");
    for name in invariants.names() {
        h.update(b"\t");
        h.update(name.as_bytes());
    }
    h.update(b"\n#predicates");
    for name in predicates.names() {
        h.update(b"\t");
        h.update(name.as_bytes());
    }
    hex::encode(h.finalize())
}

impl FeatureTable {
    pub fn new(
        labels: Vec<String>,
        numeric: Vec<NumericColumn>,
        boolean: Vec<BooleanColumn>,
    ) -> Result<Self, FeatureError> {
        let n = labels.len();
        if n == 0 {
            return Err(FeatureError::EmptyCorpus);
        }
        if numeric.len() < 2 {
            return Err(FeatureError::TooFewNumericColumns(numeric.len()));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(FeatureError::DuplicateLabel(l.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let columns = numeric
            .iter()
            .map(|c| (&c.name, c.values.len()))
            .chain(boolean.iter().map(|c| (&c.name, c.values.len())));
        for (name, len) in columns {
            if !seen.insert(name.clone()) {
                return Err(FeatureError::DuplicateColumn(name.clone()));
            }
            if len != n {
                return Err(FeatureError::RaggedColumn {
                    name: name.clone(),
                    got: len,
                    expected: n,
                });
            }
        }
        Ok(FeatureTable {
            labels,
            numeric,
            boolean,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn numeric_columns(&self) -> &[NumericColumn] {
        &self.numeric
    }

    pub fn boolean_columns(&self) -> &[BooleanColumn] {
        &self.boolean
    }

    pub fn numeric(&self, name: &str) -> Result<&[Option<u64>], FeatureError> {
        match self.numeric.iter().find(|c| c.name == name) {
            Some(c) => Ok(&c.values),
            None if self.boolean.iter().any(|c| c.name == name) => Err(FeatureError::NotNumeric(name.into())),
            None => Err(FeatureError::UnknownColumn(name.into())),
        }
    }

    pub fn boolean(&self, name: &str) -> Result<&[bool], FeatureError> {
        match self.boolean.iter().find(|c| c.name == name) {
            Some(c) => Ok(&c.values),
            None if self.numeric.iter().any(|c| c.name == name) => Err(FeatureError::NotBoolean(name.into())),
            None => Err(FeatureError::UnknownColumn(name.into())),
        }
    }

    /// Rows on which every predicate of `h` holds.
    pub fn support(&self, h: &Hypothesis) -> Result<BTreeSet<usize>, FeatureError> {
        let cols = h.predicates().map(|p| self.boolean(p)).collect::<Result<Vec<_>, _>>()?;
        Ok((0..self.len()).filter(|&r| cols.iter().all(|c| c[r])).collect())
    }

    /// Rows satisfying `h` on which both `x` and `y` are defined.
    pub fn select_rows(&self, h: &Hypothesis, x: &str, y: &str) -> Result<Vec<SelectedRow>, FeatureError> {
        if x == y {
            return Err(FeatureError::SameColumn(x.into()));
        }
        let xs = self.numeric(x)?;
        let ys = self.numeric(y)?;
        Ok(self
            .support(h)?
            .into_iter()
            .filter_map(|row| {
                Some(SelectedRow {
                    x: xs[row]?,
                    y: ys[row]?,
                    row,
                })
            })
            .collect())
    }

    /// Writes the table as comma-separated text preceded by a `#digest=` line.
    pub fn write_cache<W: Write>(&self, out: W, digest: &str) -> Result<(), FeatureError> {
        let mut out = out;
        writeln!(out, "#digest={digest}")?;
        let mut w = csv::Writer::from_writer(out);
        let header = std::iter::once("label")
            .chain(self.numeric.iter().map(|c| c.name.as_str()))
            .chain(self.boolean.iter().map(|c| c.name.as_str()));
        w.write_record(header).map_err(cache_err)?;
        for r in 0..self.len() {
            let mut record = vec![self.labels[r].clone()];
            record.extend(
                self.numeric
                    .iter()
                    .map(|c| c.values[r].map_or_else(String::new, |v| v.to_string())),
            );
            record.extend(self.boolean.iter().map(|c| c.values[r].to_string()));
            w.write_record(&record).map_err(cache_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a cache written by [`FeatureTable::write_cache`]. Returns `Ok(None)`
    /// when the stored digest differs from `digest` or the columns do not match
    /// the registries.
    pub fn read_cache<R: Read>(
        input: R,
        digest: &str,
        invariants: &InvariantRegistry,
        predicates: &PredicateRegistry,
    ) -> Result<Option<Self>, FeatureError> {
        let mut text = String::new();
        let mut input = input;
        input.read_to_string(&mut text)?;
        let Some((first, body)) = text.split_once('\n') else {
            return Err(FeatureError::Cache("missing digest line".into()));
        };
        let Some(stored) = first.trim_end().strip_prefix("#digest=") else {
            return Err(FeatureError::Cache("missing digest line".into()));
        };
        if stored != digest {
            return Ok(None);
        }
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let header: Vec<String> = reader.headers().map_err(cache_err)?.iter().map(String::from).collect();
        let expected: Vec<&str> = std::iter::once("label")
            .chain(invariants.names())
            .chain(predicates.names())
            .collect();
        if header != expected {
            return Ok(None);
        }
        let k = invariants.len();
        let mut labels = Vec::new();
        let mut numeric: Vec<NumericColumn> = invariants
            .names()
            .map(|n| NumericColumn {
                name: n.into(),
                values: Vec::new(),
            })
            .collect();
        let mut boolean: Vec<BooleanColumn> = predicates
            .names()
            .map(|n| BooleanColumn {
                name: n.into(),
                values: Vec::new(),
            })
            .collect();
        for record in reader.records() {
            let record = record.map_err(cache_err)?;
            labels.push(record[0].to_string());
            for (j, col) in numeric.iter_mut().enumerate() {
                let cell = &record[1 + j];
                let value = if cell.is_empty() {
                    None
                } else {
                    Some(
                        cell.parse()
                            .map_err(|_| FeatureError::Cache(format!("bad number {cell:?}")))?,
                    )
                };
                col.values.push(value);
            }
            for (j, col) in boolean.iter_mut().enumerate() {
                let cell = &record[1 + k + j];
                let value = cell
                    .parse()
                    .map_err(|_| FeatureError::Cache(format!("bad truth value {cell:?}")))?;
                col.values.push(value);
            }
        }
        FeatureTable::new(labels, numeric, boolean).map(Some)
    }
}

fn cache_err(e: csv::Error) -> FeatureError {
    FeatureError::Cache(e.to_string())
}
