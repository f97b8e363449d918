//! Automated conjecturing over graph invariants.
//!
//! A corpus of small graphs is turned into a table of exact invariant values
//! and structural predicates. For every pair of numerical columns, optionally
//! restricted to graphs satisfying a conjunction of predicates, the engine fits
//! the linear upper or lower bound that holds on every row and is attained with
//! equality on as many rows as possible. Surviving inequalities are filtered
//! for generality and ranked by how many graphs attain them.

pub mod engine;
pub mod export;
pub mod features;
pub mod fit;
pub mod graph;
pub mod graph6;
pub mod invariants;
pub mod named;
pub mod predicates;

pub use engine::{Conjecture, EngineConfig, EngineError, FilterKind};
pub use features::{FeatureTable, Hypothesis};
pub use fit::{Direction, FitResult, Rational, SharpBoundingFunction};
pub use graph::Graph;
pub use invariants::InvariantRegistry;
pub use predicates::PredicateRegistry;
