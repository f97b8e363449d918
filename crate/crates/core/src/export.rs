//! JSON Lines export of conjectures, one record per line.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{render_conjecture, Conjecture};
use crate::features::Hypothesis;
use crate::fit::{Direction, Rational, SharpBoundingFunction};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Serialized form of a [`Conjecture`]. Rationals are `[numerator, denominator]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub target: String,
    pub other: String,
    pub direction: Direction,
    pub slope: [i64; 2],
    pub intercept: [i64; 2],
    pub hypothesis: Vec<String>,
    pub touch_number: usize,
    pub support_size: usize,
    pub touch_set: Vec<String>,
    /// Human-readable rendering; ignored on import.
    #[serde(default)]
    pub statement: String,
}

fn pair(r: Rational) -> [i64; 2] {
    [*r.numer(), *r.denom()]
}

fn rational(p: [i64; 2]) -> Result<Rational, String> {
    if p[1] == 0 {
        Err(format!("zero denominator in {}/{}", p[0], p[1]))
    } else {
        Ok(Rational::new(p[0], p[1]))
    }
}

impl From<&Conjecture> for ConjectureRecord {
    fn from(c: &Conjecture) -> Self {
        ConjectureRecord {
            target: c.target.clone(),
            other: c.other.clone(),
            direction: c.direction(),
            slope: pair(c.bound.slope),
            intercept: pair(c.bound.intercept),
            hypothesis: c.hypothesis.predicates().map(String::from).collect(),
            touch_number: c.touch_number,
            support_size: c.support_size,
            touch_set: c.touch_set.clone(),
            statement: render_conjecture(c),
        }
    }
}

impl TryFrom<ConjectureRecord> for Conjecture {
    type Error = String;

    fn try_from(r: ConjectureRecord) -> Result<Self, Self::Error> {
        if r.target == r.other {
            return Err(format!("target and other are both {:?}", r.target));
        }
        Ok(Conjecture {
            bound: SharpBoundingFunction::new(rational(r.slope)?, rational(r.intercept)?, r.direction),
            target: r.target,
            other: r.other,
            hypothesis: Hypothesis::new(r.hypothesis),
            touch_set: r.touch_set,
            touch_number: r.touch_number,
            support_size: r.support_size,
        })
    }
}

pub fn write_export<W: Write>(mut out: W, conjectures: &[Conjecture]) -> Result<(), ExportError> {
    for c in conjectures {
        let line = serde_json::to_string(&ConjectureRecord::from(c)).expect("records serialize");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Parses every non-blank line; malformed records are reported individually.
pub fn read_export(text: &str) -> Vec<Result<Conjecture, ExportError>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let err = |message: String| ExportError::Record { line: i + 1, message };
            let record: ConjectureRecord = serde_json::from_str(l).map_err(|e| err(e.to_string()))?;
            Conjecture::try_from(record).map_err(err)
        })
        .collect()
}
