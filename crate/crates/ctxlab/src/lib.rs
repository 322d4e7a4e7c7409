//! Exact-arithmetic analysis of empirical models over measurement covers.
//!
//! The crate works with *measurement covers*: a finite set of two-outcome
//! variables together with a family of jointly measurable contexts. An
//! [`model::EmpiricalModel`] attaches an exact rational distribution to each
//! context; the library classifies such models in the contextuality
//! hierarchy, derives logical Bell inequalities from consistency conditions
//! on propositional formulas, converts between rational, correlation and
//! logical forms of an inequality, and computes complete inequality
//! descriptions of the non-contextual and correlation polytopes by
//! Fourier-Motzkin elimination.
//!
//! All probabilistic computation is exact: probabilities, inequality
//! coefficients and polytope data are arbitrary-precision rationals. Floating
//! point appears only in the [`quantum`] module, which generates model tables
//! from states and observables and then snaps them to rationals.

pub mod contextuality;
mod error;
pub mod inequalities;
pub mod json;
pub mod linear;
pub mod logic;
pub mod model;
pub mod polytope;
pub mod quantum;
pub mod zoo;

pub use error::{Error, Result};

/// Exact rational scalar used throughout the probabilistic layer.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer, used for cleared inequality coefficients.
pub type Int = num_bigint::BigInt;

/// Linear inequality system over exact rationals.
pub type RatSystem = linear::LinearSystem<Rat>;

/// Hard cap on the number of variables in exhaustive enumeration
/// (satisfiability, global sections, incidence matrices). Operations that
/// take an explicit `limit` argument accept larger values at the caller's
/// risk; `2^limit` assignments are visited in the worst case.
pub const DEFAULT_VAR_LIMIT: usize = 24;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Shorthand for an integer rational.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(num.into())
}
