//! Solution modules of a single homogeneous linear Diophantine equation
//!
//! ```text
//! a_1·X_1 + … + a_n·X_n = 0,    gcd(a_1,…,a_n) = 1
//! ```
//!
//! The crate builds a ℤ-basis of the solution module `S` straight from the
//! coefficients, presents `S` by generators `v(i,j)` and three-term
//! relations, and computes the structure of the quotients `W/S`, `S/S_i`
//! and `S/U_i`. Every result has an independent check through Smith normal
//! forms, Hermite normal forms or brute-force enumeration (see [`oracle`]).
//!
//! Indices in the public API are 1-based.

pub mod basis;
pub mod checks;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod presentation;
pub mod quotients;
pub mod ring;
pub mod sample;
pub mod solution;

pub use basis::{build_basis, verify_basis, BasisMatrix, CertifiedBasis, Rejection};
pub use error::{Error, Result};
pub use matrix::{det_exact, hnf, snf, HnfResult, IntMatrix, SnfResult};
pub use quotients::{DChain, QuotientStructure};
pub use ring::Int;
pub use solution::{Coefficients, IndexSet, MStrategy, SolutionVector};
