//! Spectra of truncated operators and closed-form spectrum predictions.
//!
//! Predictions are produced by a registry of [`SpectrumTheorem`]
//! implementations keyed by a short id; each one checks its hypotheses,
//! builds the operator it talks about and returns a [`SpectrumPrediction`].
//! Eigenvalues of finite sections are only compared point-by-point against
//! point-set predictions: finite sections of non-compact operators need not
//! approximate spiral or disk spectra.

mod theorems;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use crate::eigen::{eigenvalues, EigenResult};
use crate::eigen::sorted_order;
use crate::matrix::OpMatrix;
use crate::moebius::{FixedPointSet, Point};
use crate::{Error, LFMap, Result, C64};

pub use theorems::{
    interior_point_set, parabolic_j_form, predict_cor37, predict_prop38, predict_thm34, predict_thm35,
    predict_thm36, registry, spiral_b_grid, theorem, SpectrumTheorem, TheoremParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    /// `{λ_m} ∪ {0}` with `λ_m → 0`.
    PointSet,
    /// A logarithmic spiral `K e^{-b s}`, `b ≥ 0`, together with 0.
    Spiral,
    /// The closed disk of the given radius; `points` samples its boundary.
    Disk,
    /// Only the spectral radius is predicted; `points` is empty.
    RadiusOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPrediction {
    pub kind: SpectrumKind,
    pub radius: f64,
    pub points: Vec<C64>,
    /// Complex parameters the prediction was computed from (`w`, `t`, …).
    pub params: BTreeMap<String, C64>,
    /// Real-valued cross-checks (alternative formulas, identity residuals).
    pub diagnostics: BTreeMap<String, f64>,
}

impl SpectrumPrediction {
    pub fn new(kind: SpectrumKind, radius: f64, points: Vec<C64>) -> Self {
        Self { kind, radius, points, params: BTreeMap::new(), diagnostics: BTreeMap::new() }
    }

    pub fn param(mut self, key: &str, value: C64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    /// `|radius - max |points||`, or `None` for radius-only predictions.
    pub fn radius_mismatch(&self) -> Option<f64> {
        if self.kind == SpectrumKind::RadiusOnly {
            return None;
        }
        let top = self.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Some((top - self.radius).abs())
    }
}

/// Some iterate of a linear-fractional self-map sends the closed disk into
/// the open disk iff the map has no fixed point on the unit circle.
pub fn power_compact(phi: &LFMap) -> bool {
    let off_circle = |p: Point| match p {
        Point::Finite(z) => (z.norm() - 1.0).abs() > 1e-10,
        Point::Infinity => true,
    };
    match phi.fixed_points() {
        FixedPointSet::All => false,
        FixedPointSet::Double(p) => off_circle(p),
        FixedPointSet::Two(p, q) => off_circle(p) && off_circle(q),
    }
}

/// `s_n = ‖Aⁿ‖^{1/n}` for `n = 1..=n_max`, each norm estimated by 30 power
/// iterations on `(Aⁿ)ᴴAⁿ`. Powers are renormalized at every step and the
/// scale is carried in logarithmic form.
pub fn gelfand_radius(a: &OpMatrix, n_max: usize) -> Result<Vec<f64>> {
    if n_max > 64 {
        return Err(Error::Domain(format!("n_max = {n_max} exceeds 64")));
    }
    let n = a.n();
    let mut power = OpMatrix::identity(n);
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(n_max);
    for k in 1..=n_max {
        power = power.mul(a)?;
        let m = power.max_abs();
        if m == 0.0 {
            out.extend(std::iter::repeat_n(0.0, n_max - k + 1));
            break;
        }
        power = power.scale(C64::new(1.0 / m, 0.0));
        log_scale += m.ln();
        let norm = two_norm_estimate(&power);
        out.push(((norm.ln() + log_scale) / k as f64).exp());
    }
    Ok(out)
}

fn two_norm_estimate(b: &OpMatrix) -> f64 {
    let gram = &b.0.adjoint() * &b.0;
    let n = gram.nrows();
    // A fixed, non-symmetric start vector avoids accidental orthogonality to
    // the dominant singular vector for structured matrices.
    let mut v = nalgebra::DVector::from_fn(n, |i, _| C64::new(1.0, 0.1 * (i as f64 + 1.0).sqrt()));
    v /= C64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..30 {
        let w = &gram * &v;
        lambda = w.norm();
        if lambda == 0.0 {
            return 0.0;
        }
        v = w / C64::new(lambda, 0.0);
    }
    lambda.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub pred: C64,
    pub eig: C64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadingEigen {
    pub leading: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub prediction: SpectrumPrediction,
    pub eigen: LeadingEigen,
    pub pairs: Vec<MatchedPair>,
    pub pass: bool,
}

/// Pairs each of the `k` leading eigenvalues, in modulus order, with the
/// nearest predicted point not yet used.
pub fn compare_spectrum(eig: &EigenResult, pred: &SpectrumPrediction, k: usize, rel_tol: f64) -> Result<ComparisonReport> {
    if pred.kind != SpectrumKind::PointSet {
        return Err(Error::KindMismatch(format!(
            "{:?} predictions are checked through their radius, not point by point",
            pred.kind
        )));
    }
    let leading = eig.leading(k).to_vec();
    let mut used = vec![false; pred.points.len()];
    let mut pairs = Vec::with_capacity(leading.len());
    for &e in &leading {
        let best = (0..pred.points.len())
            .filter(|&i| !used[i])
            .min_by(|&i, &j| (pred.points[i] - e).norm().total_cmp(&(pred.points[j] - e).norm()));
        let Some(i) = best else {
            return Err(Error::Domain(format!("only {} predicted points for k = {k}", pred.points.len())));
        };
        used[i] = true;
        let p = pred.points[i];
        let rel_err = if p.norm() > 0.0 { (p - e).norm() / p.norm() } else { e.norm() };
        pairs.push(MatchedPair { pred: p, eig: e, rel_err });
    }
    let pass = pairs.iter().all(|m| m.rel_err <= rel_tol);
    Ok(ComparisonReport { prediction: pred.clone(), eigen: LeadingEigen { leading }, pairs, pass })
}

/// Largest mismatch between the spectrum of `A²` and the squares of the
/// spectrum of `A`, matched in sorted order, relative to `ρ(A)²`.
pub fn spectral_mapping_residual(a: &OpMatrix) -> Result<f64> {
    let base = eigenvalues(a);
    let squared = eigenvalues(&a.mul(a)?);
    let sq: Vec<C64> = base.eigenvalues.iter().map(|z| z * z).collect();
    let order = sorted_order(&sq);
    let rho2 = sq.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    // Sorting alone can misalign near-equal moduli; pair greedily instead.
    let mut used = vec![false; squared.eigenvalues.len()];
    let mut worst: f64 = 0.0;
    for i in order {
        let target = sq[i];
        let j = (0..used.len())
            .filter(|&j| !used[j])
            .min_by(|&x, &y| {
                (squared.eigenvalues[x] - target).norm().total_cmp(&(squared.eigenvalues[y] - target).norm())
            })
            .expect("same count");
        used[j] = true;
        worst = worst.max((squared.eigenvalues[j] - target).norm() / rho2);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn power_compactness_examples() {
        let nf = LFMap::from_j_form(c(0.2, 0.0), c(0.3, 0.0)).unwrap();
        let composite = nf.compose(&crate::moebius::phi_p(c(0.5, 0.0)).unwrap()).unwrap();
        assert!(power_compact(&composite));
        let parabolic = LFMap::new(c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!(!power_compact(&parabolic));
        assert!(!power_compact(&LFMap::identity()));
    }

    #[test]
    fn gelfand_examples() {
        let d = OpMatrix::from_diagonal(&[c(1.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)]);
        let s = gelfand_radius(&d, 20).unwrap();
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let nil = OpMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let s = gelfand_radius(&nil, 3).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1] == 0.0 && s[2] == 0.0);
        assert!(gelfand_radius(&d, 65).is_err());
    }

    #[test]
    fn comparison_rejects_non_point_sets() {
        let eig = eigenvalues(&OpMatrix::identity(3));
        let pred = SpectrumPrediction::new(SpectrumKind::Disk, 1.0, vec![c(1.0, 0.0)]);
        assert!(matches!(compare_spectrum(&eig, &pred, 1, 1e-4), Err(Error::KindMismatch(_))));
    }

    #[test]
    fn comparison_on_diagonal() {
        let eig = eigenvalues(&OpMatrix::from_diagonal(&[c(0.5, 0.0), c(-0.25, 0.0), c(0.125, 0.0)]));
        let pred =
            SpectrumPrediction::new(SpectrumKind::PointSet, 0.5, vec![c(0.5, 0.0), c(-0.25, 0.0), c(0.125, 0.0), c(0.0, 0.0)]);
        let r = compare_spectrum(&eig, &pred, 3, 1e-10).unwrap();
        assert!(r.pass);
        let wrong = SpectrumPrediction::new(SpectrumKind::PointSet, 0.5, vec![c(0.5, 0.0), c(0.25, 0.0), c(0.0, 0.0)]);
        assert!(!compare_spectrum(&eig, &wrong, 2, 1e-4).unwrap().pass);
    }

    #[test]
    fn spectral_mapping_on_random_matrix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rows: Vec<Vec<C64>> =
            (0..24).map(|_| (0..24).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()).collect();
        let a = OpMatrix::from_rows(&rows).unwrap();
        assert!(spectral_mapping_residual(&a).unwrap() < 1e-8);
    }
}
