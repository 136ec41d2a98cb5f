//! Finite sections of Hardy-space operators in the monomial basis.
//!
//! Composition-type matrices are built column by column: column j holds the
//! first N Taylor coefficients of `ψ·φʲ`, obtained by multiplying the running
//! power of the φ series by φ once per column. Truncated multiplication is
//! exact for the retained coefficients, so the only error in the leading
//! block of an operator identity comes from rows and columns cut off by the
//! truncation.

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::matrix::{CoeffVec, OpMatrix};
use crate::moebius::{cowen_triple, LFMap};
use crate::series::{Poly, Rational};
use crate::{Error, Result, C64};

pub use crate::matrix::block_residual;

pub fn taylor_of_rational(num: &Poly, den: &Poly, n: usize) -> Result<CoeffVec> {
    Rational::new(num.clone(), den.clone()).taylor(n).map(CoeffVec)
}

/// First `n` coefficients of the product of two series.
pub fn mul_truncated(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Matrix of `f ↦ ψ·(f∘φ)`.
pub fn weighted_composition_matrix(psi: &Rational, phi: &LFMap, n: usize) -> Result<OpMatrix> {
    if !phi.is_self_map() {
        return Err(Error::NotSelfMap);
    }
    psi.ensure_analytic_on_closed_disk()?;
    let phi_series = Rational::new(Poly::linear(phi.b, phi.a), Poly::linear(phi.d, phi.c)).taylor(n)?;
    let mut column = psi.taylor(n)?;
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let next = mul_truncated(&column, &phi_series, n);
        columns.push(std::mem::replace(&mut column, next));
    }
    Ok(OpMatrix::from_columns(&columns))
}

pub fn composition_matrix(phi: &LFMap, n: usize) -> Result<OpMatrix> {
    weighted_composition_matrix(&Rational::one(), phi, n)
}

/// Lower-triangular Toeplitz matrix of multiplication by an analytic `ψ`.
pub fn toeplitz_matrix_analytic(psi: &Rational, n: usize) -> Result<OpMatrix> {
    weighted_composition_matrix(psi, &LFMap::identity(), n)
}

/// Truncated reproducing kernel `K_w(z) = 1/(1 - w̄ z)`.
pub fn kernel_vector(w: C64, n: usize) -> Result<CoeffVec> {
    if w.norm() >= 1.0 {
        return Err(Error::Domain(format!("kernel point {w} must lie in the open disk")));
    }
    let wb = w.conj();
    let mut out = Vec::with_capacity(n);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..n {
        out.push(p);
        p *= wb;
    }
    Ok(CoeffVec(out))
}

/// `|1 - p z|^power` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusFactor {
    pub p: C64,
    pub power: i32,
}

/// A function on the unit circle of the form `R(z)·Π |1 - p_k z|^{e_k}` with
/// R rational, sampled at a power-of-two resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSymbol {
    pub rational: Rational,
    pub moduli: Vec<ModulusFactor>,
    /// Number of equispaced samples; `None` picks the smallest power of two
    /// that is at least 8N.
    pub resolution: Option<usize>,
}

impl CircleSymbol {
    pub fn rational(r: Rational) -> Self {
        Self { rational: r, moduli: Vec::new(), resolution: None }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn times_modulus(mut self, p: C64, power: i32) -> Self {
        self.moduli.push(ModulusFactor { p, power });
        self
    }

    pub fn with_resolution(mut self, s: usize) -> Self {
        self.resolution = Some(s);
        self
    }

    pub fn eval(&self, z: C64) -> C64 {
        let m: f64 = self.moduli.iter().map(|f| (C64::new(1.0, 0.0) - f.p * z).norm().powi(f.power)).product();
        self.rational.eval(z) * m
    }

    pub fn resolution_for(&self, n: usize) -> Result<usize> {
        let required = 8 * n;
        match self.resolution {
            None => Ok(required.next_power_of_two()),
            Some(s) if s < required => Err(Error::Resolution { resolution: s, required }),
            Some(s) if !s.is_power_of_two() => Err(Error::Domain(format!("resolution {s} is not a power of two"))),
            Some(s) => Ok(s),
        }
    }
}

/// Discrete Fourier coefficients `b̂(k)`, `k = 0..s`, indices taken mod s
/// (so `b̂(-1)` sits at `s - 1`).
pub fn fourier_coefficients(b: &CircleSymbol, s: usize) -> Result<Vec<C64>> {
    let mut buf: Vec<C64> = (0..s)
        .map(|k| b.eval(C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / s as f64)))
        .collect();
    if let Some(bad) = buf.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Domain(format!("symbol is unbounded at sample {bad}")));
    }
    FftPlanner::new().plan_fft_forward(s).process(&mut buf);
    let inv = 1.0 / s as f64;
    Ok(buf.into_iter().map(|v| v * inv).collect())
}

/// Matrix of `T_b f = P(b f)`: entry `(j, k)` is `b̂(j - k)`.
pub fn toeplitz_matrix_symbol(b: &CircleSymbol, n: usize) -> Result<OpMatrix> {
    let s = b.resolution_for(n)?;
    let coeffs = fourier_coefficients(b, s)?;
    let mut rows = vec![vec![C64::new(0.0, 0.0); n]; n];
    for (j, row) in rows.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = coeffs[(j as isize - k as isize).rem_euclid(s as isize) as usize];
        }
    }
    OpMatrix::from_rows(&rows)
}

/// `T_g · C_σ · T_hᴴ` assembled from N-truncations.
pub fn cowen_adjoint_matrix(phi: &LFMap, n: usize) -> Result<OpMatrix> {
    let ct = cowen_triple(phi);
    let tg = toeplitz_matrix_analytic(&ct.g, n)?;
    let cs = composition_matrix(&ct.sigma, n)?;
    let th = toeplitz_matrix_analytic(&Rational::new(ct.h, Poly::constant(C64::new(1.0, 0.0))), n)?;
    tg.mul(&cs)?.mul(&th.adjoint())
}
