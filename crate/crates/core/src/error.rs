use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate linear-fractional map (ad - bc = {0})")]
    Degenerate(C64),
    #[error("map has a pole at z = {0}")]
    PoleAt(C64),
    #[error("map is not a self-map of the unit disk")]
    NotSelfMap,
    #[error("weight has a pole in the closed disk at {0}")]
    PoleInDisk(C64),
    #[error("power series requires a nonzero constant term in the denominator")]
    ZeroConstantTerm,
    #[error("translation number is undefined for the identity map")]
    IdentityMap,
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("symbol sampling resolution {resolution} is below 8N = {required}")]
    Resolution { resolution: usize, required: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("not of the J-symmetric normal form (residual {residual:.3e})")]
    NotJForm { residual: f64 },
    #[error("factor fails the J-symmetry test (residual {residual:.3e})")]
    NotFactorable { residual: f64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("spectrum kind mismatch: {0}")]
    KindMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}
