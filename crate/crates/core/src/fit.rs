//! Sharp linear bounds maximizing the number of equality cases.
//!
//! Given points `(x, y)`, find `f(x) = m·x + b` with `y ≤ f(x)` (upper) or
//! `y ≥ f(x)` (lower) at every point, attaining equality at as many points as
//! possible. A feasible line touching two points with distinct `x` has their
//! pairwise slope, and any feasible line touches no more points than the
//! tight translate of itself, so it is enough to try every pairwise slope
//! (plus slope zero) with its tight intercept. All arithmetic is exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Upper => Direction::Lower,
            Direction::Lower => Direction::Upper,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        }
    }

    /// Inequality sign as it reads in `target ≤ f(other)`.
    pub fn relation(self) -> &'static str {
        match self {
            Direction::Upper => "≤",
            Direction::Lower => "≥",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upper" => Ok(Direction::Upper),
            "lower" => Ok(Direction::Lower),
            other => Err(format!("unknown direction {other:?} (expected upper or lower)")),
        }
    }
}

/// `f(x) = slope·x + intercept`, bounding from the given side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SharpBoundingFunction {
    pub slope: Rational,
    pub intercept: Rational,
    pub direction: Direction,
}

impl SharpBoundingFunction {
    pub fn new(slope: Rational, intercept: Rational, direction: Direction) -> Self {
        SharpBoundingFunction {
            slope,
            intercept,
            direction,
        }
    }

    pub fn evaluate(&self, x: Rational) -> Rational {
        self.slope * x + self.intercept
    }

    /// Whether `y` lies on the permitted side of `f(x)`.
    pub fn holds(&self, x: Rational, y: Rational) -> bool {
        let fx = self.evaluate(x);
        match self.direction {
            Direction::Upper => y <= fx,
            Direction::Lower => y >= fx,
        }
    }

    pub fn is_tight(&self, x: Rational, y: Rational) -> bool {
        self.evaluate(x) == y
    }

    /// The same bound for `-y`.
    pub fn negated(&self) -> Self {
        SharpBoundingFunction::new(-self.slope, -self.intercept, self.direction.flipped())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitPoint {
    pub x: Rational,
    pub y: Rational,
    pub id: usize,
}

impl FitPoint {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>, id: usize) -> Self {
        FitPoint {
            x: x.into(),
            y: y.into(),
            id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitResult {
    pub function: SharpBoundingFunction,
    /// Ids of the points attaining equality, in input order.
    pub touch_set: Vec<usize>,
    pub touch_number: usize,
}

struct Candidate {
    slope: Rational,
    intercept: Rational,
    touches: usize,
    slack: Rational,
}

/// Returns a feasible bound with the largest possible touch number, or `None`
/// for an empty point set.
///
/// Ties on touch number are broken by smaller total slack, then smaller `|m|`,
/// then smaller `m` for upper bounds and larger `m` for lower bounds, so that
/// negating every `y` and flipping the direction yields the negated bound.
pub fn fit_linear_bound(points: &[FitPoint], direction: Direction) -> Option<FitResult> {
    if points.is_empty() {
        return None;
    }
    let mut distinct: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
    for p in points {
        *distinct.entry((p.x, p.y)).or_default() += 1;
    }
    let distinct: Vec<(Rational, Rational, usize)> = distinct.into_iter().map(|((x, y), c)| (x, y, c)).collect();

    let mut slopes = BTreeSet::from([Rational::zero()]);
    for (i, &(x1, y1, _)) in distinct.iter().enumerate() {
        for &(x2, y2, _) in &distinct[i + 1..] {
            if x1 != x2 {
                slopes.insert((y2 - y1) / (x2 - x1));
            }
        }
    }

    let best = slopes
        .into_iter()
        .map(|m| tight_candidate(&distinct, m, direction))
        .min_by(|a, b| rank(a, b, direction))?;

    let function = SharpBoundingFunction::new(best.slope, best.intercept, direction);
    let touch_set: Vec<usize> = points
        .iter()
        .filter(|p| function.is_tight(p.x, p.y))
        .map(|p| p.id)
        .collect();
    debug_assert_eq!(touch_set.len(), best.touches);
    Some(FitResult {
        function,
        touch_number: touch_set.len(),
        touch_set,
    })
}

fn tight_candidate(distinct: &[(Rational, Rational, usize)], m: Rational, direction: Direction) -> Candidate {
    let offsets = distinct.iter().map(|&(x, y, c)| (y - m * x, c));
    let b = match direction {
        Direction::Upper => offsets.clone().map(|(o, _)| o).max(),
        Direction::Lower => offsets.clone().map(|(o, _)| o).min(),
    }
    .expect("nonempty point set");
    let mut touches = 0;
    let mut slack = Rational::zero();
    for (o, c) in offsets {
        if o == b {
            touches += c;
        }
        slack += (b - o).abs() * Rational::from(c as i64);
    }
    Candidate {
        slope: m,
        intercept: b,
        touches,
        slack,
    }
}

/// `Less` means `a` is preferred.
fn rank(a: &Candidate, b: &Candidate, direction: Direction) -> Ordering {
    b.touches
        .cmp(&a.touches)
        .then_with(|| a.slack.cmp(&b.slack))
        .then_with(|| a.slope.abs().cmp(&b.slope.abs()))
        .then_with(|| match direction {
            Direction::Upper => a.slope.cmp(&b.slope),
            Direction::Lower => b.slope.cmp(&a.slope),
        })
}
