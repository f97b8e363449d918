//! Conjecture generation, filtering and ranking.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{object_label, FeatureError, FeatureTable, Hypothesis};
use crate::fit::{fit_linear_bound, Direction, FitPoint, Rational, SharpBoundingFunction};
use crate::graph::Graph;
use crate::invariants::{self, InvariantRegistry};
use crate::predicates::PredicateRegistry;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Table(#[from] FeatureError),
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Generality,
    Dalmatian,
}

impl std::str::FromStr for FilterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "generality" => Ok(FilterKind::Generality),
            "dalmatian" => Ok(FilterKind::Dalmatian),
            other => Err(format!("unknown filter {other:?} (expected generality or dalmatian)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// Properties to bound. Empty means every numeric column.
    pub targets: Vec<String>,
    pub directions: Vec<Direction>,
    /// Largest number of predicates in a hypothesis conjunction.
    pub max_hypothesis_size: usize,
    /// Fewest objects a hypothesis must select to be used.
    pub min_support: usize,
    pub filters: BTreeSet<FilterKind>,
    /// Conjectures kept per (target, direction) after ranking.
    pub top_k: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            targets: Vec::new(),
            directions: vec![Direction::Upper, Direction::Lower],
            max_hypothesis_size: 2,
            min_support: 5,
            filters: BTreeSet::from([FilterKind::Generality]),
            top_k: 10,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.min_support == 0 {
            return Err(EngineError::Config("min_support must be at least 1".into()));
        }
        if self.top_k == 0 {
            return Err(EngineError::Config("top_k must be at least 1".into()));
        }
        if self.directions.is_empty() {
            return Err(EngineError::Config("no directions selected".into()));
        }
        Ok(())
    }
}

/// A bound `target(G) ≤ f(other(G))` (or `≥`) claimed for every graph
/// satisfying `hypothesis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjecture {
    pub target: String,
    pub other: String,
    pub hypothesis: Hypothesis,
    pub bound: SharpBoundingFunction,
    /// Labels of the objects attaining equality.
    pub touch_set: Vec<String>,
    pub touch_number: usize,
    pub support_size: usize,
}

impl Conjecture {
    pub fn direction(&self) -> Direction {
        self.bound.direction
    }

    /// Whether `target_value` and `other_value` satisfy the inequality.
    pub fn holds_for(&self, target_value: u64, other_value: u64) -> bool {
        self.bound.holds(to_rational(other_value), to_rational(target_value))
    }

    pub fn is_tight_for(&self, target_value: u64, other_value: u64) -> bool {
        self.bound.is_tight(to_rational(other_value), to_rational(target_value))
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_conjecture(self))
    }
}

fn to_rational(v: u64) -> Rational {
    Rational::from_integer(v as i64)
}

/// All conjunctions of at most `max_size` of `names`, smallest first.
pub fn enumerate_hypotheses(names: &[String], max_size: usize) -> Vec<Hypothesis> {
    fn extend(names: &[String], start: usize, left: usize, cur: &mut Vec<String>, out: &mut Vec<Hypothesis>) {
        if left == 0 {
            return;
        }
        for i in start..names.len() {
            cur.push(names[i].clone());
            out.push(Hypothesis::new(cur.iter().cloned()));
            extend(names, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![Hypothesis::all()];
    extend(names, 0, max_size, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn resolve_target(table: &FeatureTable, name: &str) -> Result<String, EngineError> {
    let canonical = InvariantRegistry::builtin().resolve(name).unwrap_or(name);
    table.numeric(canonical)?;
    Ok(canonical.to_string())
}

/// Fits a sharp bound for every (target, direction, other property, hypothesis)
/// combination allowed by `config` and keeps the ones touching at least one row.
pub fn generate(table: &FeatureTable, config: &EngineConfig) -> Result<Vec<Conjecture>, EngineError> {
    config.validate()?;
    let targets: Vec<String> = if config.targets.is_empty() {
        table.numeric_columns().iter().map(|c| c.name.clone()).collect()
    } else {
        config
            .targets
            .iter()
            .map(|t| resolve_target(table, t))
            .collect::<Result<_, _>>()?
    };
    let predicate_names: Vec<String> = table.boolean_columns().iter().map(|c| c.name.clone()).collect();
    let hypotheses: Vec<(Hypothesis, usize)> = enumerate_hypotheses(&predicate_names, config.max_hypothesis_size)
        .into_iter()
        .map(|h| {
            let size = table.support(&h)?.len();
            Ok((h, size))
        })
        .collect::<Result<Vec<_>, FeatureError>>()?
        .into_iter()
        .filter(|&(_, size)| size >= config.min_support)
        .collect();

    let mut tasks = Vec::new();
    for target in &targets {
        for &direction in &config.directions {
            for other in table.numeric_columns().iter().map(|c| &c.name) {
                if other == target {
                    continue;
                }
                for (h, support) in &hypotheses {
                    tasks.push((target, direction, other, h, *support));
                }
            }
        }
    }

    let results: Vec<Option<Conjecture>> = tasks
        .into_par_iter()
        .map(|(target, direction, other, h, support_size)| {
            let rows = table.select_rows(h, other, target)?;
            let points: Vec<FitPoint> = rows
                .iter()
                .map(|r| FitPoint::new(r.x as i64, r.y as i64, r.row))
                .collect();
            Ok(fit_linear_bound(&points, direction)
                .filter(|fit| fit.touch_number >= 1)
                .map(|fit| Conjecture {
                    target: target.clone(),
                    other: other.clone(),
                    hypothesis: h.clone(),
                    bound: fit.function,
                    touch_set: fit.touch_set.iter().map(|&r| table.labels()[r].clone()).collect(),
                    touch_number: fit.touch_number,
                    support_size,
                }))
        })
        .collect::<Result<_, FeatureError>>()?;
    let conjectures: Vec<Conjecture> = results.into_iter().flatten().collect();
    self_check(table, &conjectures)?;
    Ok(conjectures)
}

/// Re-checks every inequality and touch count against the table.
pub fn self_check(table: &FeatureTable, conjectures: &[Conjecture]) -> Result<(), EngineError> {
    for c in conjectures {
        let rows = table.select_rows(&c.hypothesis, &c.other, &c.target)?;
        let mut touches = 0;
        for r in &rows {
            if !c.holds_for(r.y, r.x) {
                return Err(EngineError::SelfCheck(format!(
                    "{} fails on {}",
                    render_conjecture(c),
                    table.labels()[r.row]
                )));
            }
            touches += c.is_tight_for(r.y, r.x) as usize;
        }
        if touches == 0 || touches != c.touch_number {
            return Err(EngineError::SelfCheck(format!(
                "{} reports {} touches, table has {touches}",
                render_conjecture(c),
                c.touch_number
            )));
        }
    }
    Ok(())
}

/// Drops a conjecture when another with the same target, direction, other
/// property and identical bound holds on a strictly larger set of objects.
/// Among equal supports only the lexicographically smallest hypothesis stays.
/// Constant bounds are compared across other properties.
pub fn generality_filter(conjectures: Vec<Conjecture>, table: &FeatureTable) -> Result<Vec<Conjecture>, EngineError> {
    let mut supports: HashMap<&Hypothesis, BTreeSet<usize>> = HashMap::new();
    for c in &conjectures {
        if !supports.contains_key(&c.hypothesis) {
            supports.insert(&c.hypothesis, table.support(&c.hypothesis)?);
        }
    }
    type Key<'a> = (&'a str, &'a str, SharpBoundingFunction);
    let mut groups: HashMap<Key, Vec<usize>> = HashMap::new();
    for (i, c) in conjectures.iter().enumerate() {
        // A constant bound says the same thing whichever column it was fit against.
        let other = if c.bound.slope.is_zero() { "" } else { c.other.as_str() };
        groups.entry((&c.target, other, c.bound)).or_default().push(i);
    }
    let mut keep = vec![true; conjectures.len()];
    for members in groups.values() {
        for &j in members {
            let tie = |c: &Conjecture| (c.hypothesis.clone(), std::cmp::Reverse(c.touch_number), c.other.clone());
            let s2 = &supports[&conjectures[j].hypothesis];
            keep[j] = !members.iter().any(|&i| {
                let s1 = &supports[&conjectures[i].hypothesis];
                i != j && s2.is_subset(s1) && (s2.len() < s1.len() || tie(&conjectures[i]) < tie(&conjectures[j]))
            });
        }
    }
    Ok(conjectures
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect())
}

/// Scanning in order within each (target, direction) group, accepts a
/// conjecture only if it is tight on some object no earlier accepted one was.
pub fn dalmatian_filter(conjectures: Vec<Conjecture>) -> Vec<Conjecture> {
    let mut touched: HashMap<(String, Direction), BTreeSet<String>> = HashMap::new();
    conjectures
        .into_iter()
        .filter(|c| {
            let seen = touched.entry((c.target.clone(), c.direction())).or_default();
            let fresh: Vec<&String> = c.touch_set.iter().filter(|l| !seen.contains(*l)).collect();
            if fresh.is_empty() {
                return false;
            }
            seen.extend(fresh.into_iter().cloned());
            true
        })
        .collect()
}

/// Touch number descending, then support descending, then rendered text,
/// then the other property (constant bounds render alike).
pub fn sort_conjectures(mut conjectures: Vec<Conjecture>) -> Vec<Conjecture> {
    let mut keyed: Vec<(String, Conjecture)> = conjectures.drain(..).map(|c| (render_conjecture(&c), c)).collect();
    keyed.sort_by(|(ra, a), (rb, b)| {
        b.touch_number
            .cmp(&a.touch_number)
            .then(b.support_size.cmp(&a.support_size))
            .then_with(|| ra.cmp(rb))
            .then_with(|| a.other.cmp(&b.other))
    });
    keyed.into_iter().map(|(_, c)| c).collect()
}

/// Keeps the first `top_k` conjectures of each (target, direction) group,
/// preserving order.
pub fn truncate_per_group(conjectures: Vec<Conjecture>, top_k: usize) -> Vec<Conjecture> {
    let mut counts: HashMap<(String, Direction), usize> = HashMap::new();
    conjectures
        .into_iter()
        .filter(|c| {
            let n = counts.entry((c.target.clone(), c.direction())).or_default();
            *n += 1;
            *n <= top_k
        })
        .collect()
}

/// Everything a run produces: the raw generated set and the final listing.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub generated: Vec<Conjecture>,
    pub filtered: Vec<Conjecture>,
    pub listing: Vec<Conjecture>,
}

/// generate → generality filter → sort → Dalmatian → truncate.
pub fn run(table: &FeatureTable, config: &EngineConfig) -> Result<RunOutput, EngineError> {
    let generated = generate(table, config)?;
    let mut filtered = generated.clone();
    if config.filters.contains(&FilterKind::Generality) {
        filtered = generality_filter(filtered, table)?;
    }
    filtered = sort_conjectures(filtered);
    if config.filters.contains(&FilterKind::Dalmatian) {
        filtered = dalmatian_filter(filtered);
    }
    let mut listing = truncate_per_group(filtered.clone(), config.top_k);
    listing.sort_by(|a, b| (&a.target, a.direction()).cmp(&(&b.target, b.direction())));
    Ok(RunOutput {
        generated,
        filtered,
        listing,
    })
}

fn format_linear(slope: Rational, intercept: Rational, var: &str) -> String {
    let slope_term = if slope.is_zero() {
        None
    } else if slope.is_one() {
        Some(var.to_string())
    } else if slope == -Rational::one() {
        Some(format!("-{var}"))
    } else {
        Some(format!("{slope}·{var}"))
    };
    match (slope_term, intercept.is_zero()) {
        (None, _) => intercept.to_string(),
        (Some(t), true) => t,
        (Some(t), false) if intercept.is_negative() => format!("{t} - {}", -intercept),
        (Some(t), false) => format!("{t} + {intercept}"),
    }
}

/// Just the inequality: `Z(G) ≤ 2·γ(G)`.
pub fn render_inequality(c: &Conjecture) -> String {
    let lhs = format!("{}(G)", invariants::symbol(&c.target));
    let var = format!("{}(G)", invariants::symbol(&c.other));
    format!(
        "{lhs} {} {}",
        c.direction().relation(),
        format_linear(c.bound.slope, c.bound.intercept, &var)
    )
}

/// `If G is a connected and cubic graph, then Z(G) ≤ 2·γ(G)`.
pub fn render_conjecture(c: &Conjecture) -> String {
    let class = if c.hypothesis.is_empty() {
        "a graph".to_string()
    } else {
        let phrase = c.hypothesis.describe();
        let article = if phrase.starts_with(['a', 'e', 'i', 'o', 'u']) {
            "an"
        } else {
            "a"
        };
        format!("{article} {phrase} graph")
    };
    format!("If G is {class}, then {}", render_inequality(c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub label: String,
    /// Target value.
    pub lhs: Rational,
    /// Bound evaluated at the other property.
    pub rhs: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub counterexample: Option<Counterexample>,
    /// Hypothesis-satisfying graphs that were checked.
    pub checked: usize,
    /// Graphs attaining equality.
    pub touch_number: usize,
    /// Hypothesis-satisfying graphs on which a property was undefined.
    pub skipped: Vec<String>,
}

/// Checks `c` on every graph of `corpus`, stopping at the first violation.
pub fn verify_conjecture(
    c: &Conjecture,
    corpus: &[Graph],
    invariants: &InvariantRegistry,
    predicates: &PredicateRegistry,
) -> Result<VerifyReport, EngineError> {
    let lookup_inv = |name: &str| {
        invariants
            .resolve(name)
            .and_then(|n| invariants.get(n))
            .ok_or_else(|| EngineError::UnknownProperty(name.to_string()))
    };
    let target = lookup_inv(&c.target)?;
    let other = lookup_inv(&c.other)?;
    let preds = c
        .hypothesis
        .predicates()
        .map(|p| {
            predicates
                .get(p)
                .ok_or_else(|| EngineError::UnknownProperty(p.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = VerifyReport::default();
    for (i, g) in corpus.iter().enumerate() {
        if !preds.iter().all(|p| (p.eval)(g)) {
            continue;
        }
        let (Ok(y), Ok(x)) = ((target.eval)(g), (other.eval)(g)) else {
            report.skipped.push(object_label(g, i));
            continue;
        };
        report.checked += 1;
        if !c.holds_for(y, x) {
            report.counterexample = Some(Counterexample {
                label: object_label(g, i),
                lhs: to_rational(y),
                rhs: c.bound.evaluate(to_rational(x)),
            });
            return Ok(report);
        }
        report.touch_number += c.is_tight_for(y, x) as usize;
    }
    Ok(report)
}

/// The first hypothesis-satisfying graph violating `c`, if any.
pub fn find_counterexample(
    c: &Conjecture,
    corpus: &[Graph],
    invariants: &InvariantRegistry,
    predicates: &PredicateRegistry,
) -> Result<Option<Counterexample>, EngineError> {
    Ok(verify_conjecture(c, corpus, invariants, predicates)?.counterexample)
}
