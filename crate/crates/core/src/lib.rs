//! Solver for conjunctions of 4-constraints `(x_i - x_j) - (x_p - x_q) <= m`.
//!
//! The production path loads constraints into a [`Matrix2D`], closes it
//! with [`closure::close`] and extracts domains and a witness in
//! [`solver`]. Two brute-force oracles ([`lindep`] and [`fmoracle`]) check
//! verdicts and bounds on small instances.
//!
//! All algorithms are generic over [`Scalar`]; the exact instantiation over
//! [`BigRational`](num_rational::BigRational) is the default and has
//! aliases below.

pub mod bound;
pub mod cli;
pub mod closure;
pub mod constraint;
pub mod error;
pub mod fmoracle;
pub mod lindep;
pub mod matrix2d;
pub mod parse;
pub mod scalar;
pub mod solver;

pub use bound::Bound;
pub use closure::{classify, close, exactness_of, ClosureResult, Exactness, Subclass};
pub use constraint::{Constraint4, NormalVector, Quad};
pub use error::{Error, Result};
pub use matrix2d::Matrix2D;
pub use parse::{parse_atomic, parse_system, ConstraintSystem};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type RationalBound = Bound<Rational>;
pub type RationalConstraint = Constraint4<Rational>;
pub type RationalMatrix = Matrix2D<Rational>;
pub type RationalSystem = ConstraintSystem<Rational>;

pub type F64Bound = Bound<f64>;
pub type F64Constraint = Constraint4<f64>;
pub type F64Matrix = Matrix2D<f64>;
