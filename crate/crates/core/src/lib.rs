//! Finite-section toolkit for weighted composition operators on the Hardy
//! space H² of the unit disk.
//!
//! Every operator is represented by its N×N matrix in the monomial basis
//! {1, z, z², …}; column j holds the truncated Taylor coefficients of the
//! image of zʲ. On top of that representation the crate provides:
//!
//! - [`moebius`]: exact algebra of linear-fractional self-maps of the disk
//!   (classification, Denjoy–Wolff points, translation numbers, the
//!   half-plane normal forms and the Cowen auxiliary data);
//! - [`hardy`]: coefficient vectors, Toeplitz/composition/weighted
//!   composition matrices and the Cowen adjoint factorization;
//! - [`symmetry`]: conjugations realized as symmetric unitary matrices and
//!   the complex-symmetry test `A·W = W·Aᵀ`, together with the constructors
//!   and factorizations of complex symmetric weighted composition operators;
//! - [`spectra`]: a dense non-Hermitian eigensolver, closed-form spectrum
//!   predictions registered by theorem id, and comparison harnesses;
//! - [`suite`]: the acceptance criteria as a registry of named checks.

pub mod eigen;
pub mod error;
pub mod hardy;
pub mod json;
pub mod matrix;
pub mod moebius;
pub mod scalar;
pub mod series;
pub mod spectra;
pub mod suite;
pub mod symmetry;

pub use error::{Error, Result};
pub use matrix::OpMatrix;
pub use moebius::LFMap;
pub use num_complex::Complex64 as C64;
pub use series::{Poly, Rational};
