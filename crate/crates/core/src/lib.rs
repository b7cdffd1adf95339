//! Exact computation of rational double Hurwitz cycles.
//!
//! A double Hurwitz cycle is a family, parameterized by an integer vector
//! `x = (x_1, ..., x_n)` with `sum x_i = 0`, of k-dimensional cycles in the
//! moduli of rational stable curves with `n` marks.  This crate computes
//! them in two ways and cross-checks the results:
//!
//! * **classically**, as formal sums of boundary strata weighted by exact
//!   integer polynomials in the `x_i` (module [`classical`]),
//! * **tropically**, as weighted balanced polyhedral complexes inside the
//!   fan of tropical curves (modules [`fan`] and [`tropical`]).
//!
//! Both descriptions are piecewise polynomial in `x`: the parameter space
//! is cut by walls `sum_{i in I} x_i = 0` into chambers (module
//! [`chamber`]), and crossing a wall changes the cycle by an explicit
//! inductive formula which is implemented and verified on both sides
//! (modules [`classical`] and [`tropwc`]).
//!
//! All arithmetic is exact.  The numeric layer is generic over an integer
//! scalar (anything satisfying [`scalar::Scalar`], e.g. `i64` or
//! [`num_bigint::BigInt`]); the domain layer fixes the arbitrary-precision
//! aliases below.

pub mod chamber;
pub mod classical;
pub mod directed;
pub mod error;
pub mod fan;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod serialize;
pub mod trees;
pub mod tropical;
pub mod tropwc;

/// Default exact integer scalar used by the domain modules.
pub type Int = num_bigint::BigInt;
/// Exact rational built on [`Int`]; used for cell geometry and lattice coordinates.
pub type Rat = num_rational::Ratio<Int>;

pub use chamber::{Chamber, RamificationVector, Wall};
pub use classical::{CycleClass, WallCrossingClass};
pub use directed::DirectedTree;
pub use error::{Error, Result};
pub use fan::{AmbientSpace, FanCycle, ModuliFan, PwlFunction};
pub use poly::{IntPolynomial, LinearForm};
pub use trees::LabeledTree;
pub use tropical::{BranchPoints, TropicalCell, TropicalHurwitzCycle};

/// Convenience: `Int` from an `i64`.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Convenience: `Rat` from an `i64`.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}
