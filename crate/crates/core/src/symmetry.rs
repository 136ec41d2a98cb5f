//! Conjugations of H², complex-symmetry tests, and the constructions that
//! produce complex symmetric weighted composition operators.
//!
//! A conjugation `C` is represented by a symmetric unitary matrix `W` with
//! `C v = W·conj(v)`. Under that representation `C T* C = T` is equivalent to
//! the linear identity `A·W = W·Aᵀ` for the matrix `A` of `T`, which is what
//! every test here measures. The standard conjugation `J f(z) = conj(f(z̄))`
//! has `W = I`, so J-symmetry is plain matrix symmetry.

use serde::{Deserialize, Serialize};

use crate::hardy::{composition_matrix, toeplitz_matrix_symbol, weighted_composition_matrix, CircleSymbol};
use crate::matrix::{block_residual, coisometry_residual, isometry_residual, OpMatrix};
use crate::moebius::{phi_p, psi_p, to_j_normal_form, NormalFormJ};
use crate::scalar::is_unimodular;
use crate::series::{Poly, Rational};
use crate::{Error, LFMap, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance for exact (entrywise, truncation-free) J-symmetry.
const EXACT_SYMMETRY_TOL: f64 = 1e-10;
/// Relative tolerance for matching a weight or a map against a closed form.
const MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ConjugationSpec {
    /// `J f(z) = conj(f(z̄))`.
    J,
    /// `C_{ψ_p, φ_p} J`.
    WeightedJ { p: C64, c: C64 },
    /// `C_{λz} J`.
    RotJ { lambda: C64 },
}

impl ConjugationSpec {
    pub fn weighted_j(p: C64, c: C64) -> Result<Self> {
        if p.norm() == 0.0 || p.norm() >= 1.0 {
            return Err(Error::Domain(format!("p = {p} must satisfy 0 < |p| < 1")));
        }
        if !is_unimodular(c, 1e-12) {
            return Err(Error::Domain(format!("c = {c} must be unimodular")));
        }
        Ok(Self::WeightedJ { p, c })
    }

    pub fn rot_j(lambda: C64) -> Result<Self> {
        if !is_unimodular(lambda, 1e-12) {
            return Err(Error::Domain(format!("λ = {lambda} must be unimodular")));
        }
        Ok(Self::RotJ { lambda })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::J => "J",
            Self::WeightedJ { .. } => "WeightedJ",
            Self::RotJ { .. } => "RotJ",
        }
    }

    /// The matrix `W` with `C v = W·conj(v)` on the first `n` coefficients.
    pub fn realize(&self, n: usize) -> Result<OpMatrix> {
        match *self {
            Self::J => Ok(OpMatrix::identity(n)),
            Self::WeightedJ { p, c } => weighted_composition_matrix(&psi_p(p, c)?, &phi_p(p)?, n),
            Self::RotJ { lambda } => composition_matrix(&LFMap::rotation(lambda), n),
        }
    }
}

/// Residuals of the three conjugation axioms for a realized `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// `max |W - Wᵀ|` over the whole matrix.
    pub symmetric: f64,
    /// Block residual of `WᴴW - I`.
    pub unitary: f64,
    /// Block residual of `W·conj(W) - I`, i.e. of applying `C` twice.
    pub involution: f64,
}

pub fn conjugation_axioms(conj: &ConjugationSpec, n: usize, m: usize) -> Result<AxiomReport> {
    let w = conj.realize(n)?;
    Ok(AxiomReport {
        symmetric: w.sub(&w.transpose())?.max_abs(),
        unitary: isometry_residual(&w, m),
        involution: block_residual(&w.mul(&w.conj())?, &OpMatrix::identity(n), m)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[f64; 2]>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub residual: f64,
    pub tol: f64,
    pub verdict: bool,
}

/// `max |A·W - W·Aᵀ|` on the leading `m×m` block.
pub fn c_symmetry_residual(a: &OpMatrix, w: &OpMatrix, m: usize) -> Result<f64> {
    if a.n() != w.n() {
        return Err(Error::Dimension(a.n(), w.n()));
    }
    block_residual(&a.mul(w)?, &w.mul(&a.transpose())?, m)
}

pub fn is_c_symmetric(a: &OpMatrix, conj: &ConjugationSpec, m: usize, tol: f64) -> Result<SymmetryReport> {
    let n = a.n();
    if 2 * m > n {
        return Err(Error::Domain(format!("block size M = {m} exceeds N/2 = {}", n / 2)));
    }
    let residual = c_symmetry_residual(a, &conj.realize(n)?, m)?;
    let pair = |z: C64| Some([z.re, z.im]);
    let (p, c, lambda) = match *conj {
        ConjugationSpec::J => (None, None, None),
        ConjugationSpec::WeightedJ { p, c } => (pair(p), pair(c), None),
        ConjugationSpec::RotJ { lambda } => (None, None, pair(lambda)),
    };
    Ok(SymmetryReport {
        variant: conj.name().to_string(),
        p,
        c,
        lambda,
        n,
        m,
        residual,
        tol,
        verdict: residual < tol,
    })
}

/// Unitary J-symmetric weighted composition operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UnitaryJClass {
    /// `ψ = ψ_p` (with phase c) and `φ = φ_p`.
    UnitaryJSymmetric { p: C64, c: C64 },
    /// `ψ ≡ μ`, `φ(z) = λ z`.
    UnitaryJSymmetricRotation { mu: C64, lambda: C64 },
    Not,
}

/// Matches `(ψ, φ)` coefficient-wise against the two unitary J-symmetric
/// families.
pub fn prop21_classify(psi: &Rational, phi: &LFMap) -> UnitaryJClass {
    let Ok(phi0) = phi.eval(ZERO) else { return UnitaryJClass::Not };
    let psi0 = psi.eval(ZERO);
    if phi0.norm() < MATCH_TOL {
        let lambda = phi.derivative(ZERO).unwrap_or(ZERO);
        let is_rotation = *phi == LFMap::rotation(lambda) && is_unimodular(lambda, MATCH_TOL);
        let is_constant = psi.distance(&Rational::constant(psi0)) < MATCH_TOL;
        if is_rotation && is_constant && is_unimodular(psi0, MATCH_TOL) {
            return UnitaryJClass::UnitaryJSymmetricRotation { mu: psi0, lambda };
        }
        return UnitaryJClass::Not;
    }
    // φ_p(0) = p̄.
    let p = phi0.conj();
    let Ok(candidate) = phi_p(p) else { return UnitaryJClass::Not };
    if *phi != candidate {
        return UnitaryJClass::Not;
    }
    let c = psi0 / (1.0 - p.norm_sqr()).sqrt();
    if !is_unimodular(c, MATCH_TOL) {
        return UnitaryJClass::Not;
    }
    let c = c / c.norm();
    match psi_p(p, c) {
        Ok(w) if psi.distance(&w) < MATCH_TOL => UnitaryJClass::UnitaryJSymmetric { p, c },
        _ => UnitaryJClass::Not,
    }
}

/// Builds `(ψ̃, φ̃)` that is complex symmetric with respect to `conj` from a
/// J-symmetric normal form.
pub fn thm25_construct(conj: &ConjugationSpec, nf: &NormalFormJ) -> Result<(Rational, LFMap)> {
    let psi = nf.weight();
    let phi = nf.map()?;
    match *conj {
        ConjugationSpec::J => Err(Error::Domain("the J variant needs no construction; use the normal form".into())),
        ConjugationSpec::WeightedJ { p, c } => {
            let pp = phi_p(p)?;
            Ok((psi_p(p, c)?.mul(&psi.compose_lf(&pp)), phi.compose(&pp)?))
        }
        ConjugationSpec::RotJ { lambda } => {
            let rot = LFMap::rotation(lambda);
            Ok((psi.compose_lf(&rot), phi.compose(&rot)?))
        }
    }
}

/// The J-symmetric factor recovered from a complex symmetric operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub psi: Rational,
    pub phi: LFMap,
    /// Present only when the factor also matches the J-symmetric normal form.
    pub normal_form: Option<NormalFormJ>,
    /// Entrywise `max |A - Aᵀ|` of the factor's matrix.
    pub symmetry_residual: f64,
}

/// Inverts the construction: `φ = φ̃∘φ_p⁻¹`, `ψ = (ψ̃/ψ_p)∘φ_p⁻¹` (weighted
/// variant) or `φ = φ̃(λ̄z)`, `ψ = ψ̃(λ̄z)` (rotation variant). The factor is
/// accepted only if its `n×n` matrix is symmetric.
pub fn thm25_factor(psi_t: &Rational, phi_t: &LFMap, conj: &ConjugationSpec, n: usize) -> Result<Factorization> {
    let (psi, phi) = match *conj {
        ConjugationSpec::J => (psi_t.clone(), *phi_t),
        ConjugationSpec::WeightedJ { p, c } => {
            let inv = phi_p(p)?.inverse();
            (psi_t.div(&psi_p(p, c)?).compose_lf(&inv), phi_t.compose(&inv)?)
        }
        ConjugationSpec::RotJ { lambda } => {
            let rot = LFMap::rotation(lambda.conj());
            (psi_t.compose_lf(&rot), phi_t.compose(&rot)?)
        }
    };
    let psi = reduce_common_root(psi);
    let a = weighted_composition_matrix(&psi, &phi, n)?;
    let symmetry_residual = a.sub(&a.transpose())?.max_abs();
    if symmetry_residual > EXACT_SYMMETRY_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotFactorable { residual: symmetry_residual });
    }
    let normal_form = to_j_normal_form(&psi, &phi).ok();
    Ok(Factorization { psi, phi, normal_form, symmetry_residual })
}

/// Cancels linear factors shared by numerator and denominator, so that a
/// quotient like `ψ̃/ψ_p` does not keep a spurious root at the origin.
fn reduce_common_root(r: Rational) -> Rational {
    let mut num = trim(r.num);
    let mut den = trim(r.den);
    'outer: loop {
        if den.degree() == 0 || num.degree() == 0 {
            break;
        }
        for root in den.roots() {
            let scale = num.max_abs() * root.norm().max(1.0).powi(num.degree() as i32);
            if num.eval(root).norm() <= 1e-12 * scale {
                num = deflate(&num, root);
                den = deflate(&den, root);
                continue 'outer;
            }
        }
        break;
    }
    Rational::new(num, den)
}

fn trim(mut p: Poly) -> Poly {
    let scale = p.max_abs();
    while p.coeffs.len() > 1 && p.coeffs.last().is_some_and(|c| c.norm() <= 1e-14 * scale) {
        p.coeffs.pop();
    }
    p
}

/// Synthetic division by `(z - root)`, dropping the remainder.
fn deflate(p: &Poly, root: C64) -> Poly {
    let k = p.coeffs.len() - 1;
    let mut q = vec![ZERO; k];
    let mut carry = ZERO;
    for i in (0..k).rev() {
        carry = p.coeffs[i + 1] + carry * root;
        q[i] = carry;
    }
    Poly::new(q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Thm27Verdict {
    #[serde(rename = "unitary-with-conjugation")]
    UnitaryWithConjugation { conjugation: ConjugationSpec, isometry_residual: f64, report: SymmetryReport },
    #[serde(rename = "not-isometry")]
    NotIsometry { isometry_residual: f64 },
    /// An isometric weighted composition operator is unitary and complex
    /// symmetric, so this verdict marks a numerical contradiction.
    #[serde(rename = "isometry-but-not-CS-impossible")]
    IsometryButNotCs { isometry_residual: f64, reason: String },
}

/// Isometry and conjugation test for `C_{ψ,φ}` on the `m×m` block of its
/// `n`-truncation.
pub fn thm27_check(psi: &Rational, phi: &LFMap, n: usize, m: usize) -> Result<Thm27Verdict> {
    const TOL: f64 = 1e-6;
    let a = weighted_composition_matrix(psi, phi, n)?;
    let iso = isometry_residual(&a, m);
    if iso >= TOL {
        return Ok(Thm27Verdict::NotIsometry { isometry_residual: iso });
    }
    let contradiction = |reason: String| Ok(Thm27Verdict::IsometryButNotCs { isometry_residual: iso, reason });
    if !phi.is_automorphism() {
        return contradiction("isometric but the symbol is not an automorphism".into());
    }
    // φ = λ(p - z)/(1 - p̄z) vanishes at p.
    let p = phi.inverse().eval(ZERO)?;
    let conjugation = if p.norm() < MATCH_TOL {
        ConjugationSpec::J
    } else {
        let c = psi.eval(ZERO) / (1.0 - p.norm_sqr()).sqrt();
        let c = c / c.norm();
        match psi_p(p, c) {
            Ok(w) if psi.distance(&w) < MATCH_TOL => {}
            _ => return contradiction(format!("weight is not ψ_p for p = {p}")),
        }
        ConjugationSpec::weighted_j(p, c)?
    };
    let report = is_c_symmetric(&a, &conjugation, m, TOL)?;
    if !report.verdict {
        return contradiction(format!("symmetry residual {:.3e} against {}", report.residual, conjugation.name()));
    }
    Ok(Thm27Verdict::UnitaryWithConjugation { conjugation, isometry_residual: iso, report })
}

/// For a matrix that is block-isometric and complex symmetric, the
/// co-isometry residual. `None` when either hypothesis fails.
pub fn isometric_symmetric_coisometry(a: &OpMatrix, conj: &ConjugationSpec, m: usize, tol: f64) -> Result<Option<f64>> {
    if isometry_residual(a, m) >= tol || !is_c_symmetric(a, conj, m, tol)?.verdict {
        return Ok(None);
    }
    Ok(Some(coisometry_residual(a, m)))
}

/// Symmetry residuals of `A` against `W` and of `U·A` against `U·W`; for a
/// unitary `U` that is itself `W`-symmetric the two verdicts agree.
pub fn transfer_residuals(a: &OpMatrix, u: &OpMatrix, w: &OpMatrix, m: usize) -> Result<(f64, f64)> {
    let before = c_symmetry_residual(a, w, m)?;
    let after = c_symmetry_residual(&u.mul(a)?, &u.mul(w)?, m)?;
    Ok((before, after))
}

/// The Toeplitz operator with unimodular symbol `(p - z)/|1 - p z|`, its
/// candidate conjugation, and the pieces of its construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Example24 {
    pub p: f64,
    pub operator: OpMatrix,
    pub conjugation: ConjugationSpec,
    /// `T_{|1-pz|/(1-p²)^{1/2}}`.
    pub modulus_toeplitz: OpMatrix,
    /// `U_{φ_p} = C_{φ_p}·T_{|1-pz|/(1-p²)^{1/2}}`.
    pub u_phi_p: OpMatrix,
    /// Toeplitz operator of `(1 - p z)/|1 - p z|`, kept for comparison.
    pub alternative_operator: OpMatrix,
}

pub fn example24_operator(p: C64, c: C64, n: usize) -> Result<Example24> {
    if p.im != 0.0 || p.re == 0.0 || p.re.abs() >= 1.0 {
        return Err(Error::Domain(format!("p = {p} must be a nonzero real number in (-1, 1)")));
    }
    let pr = p.re;
    let s = (1.0 - pr * pr).sqrt();
    let conjugation = ConjugationSpec::weighted_j(p, c)?;
    let symbol = CircleSymbol::rational(Rational::new(Poly::linear(p, -ONE), Poly::constant(ONE))).times_modulus(p, -1);
    let alternative = CircleSymbol::rational(Rational::new(Poly::linear(ONE, -p), Poly::constant(ONE))).times_modulus(p, -1);
    let modulus = CircleSymbol::rational(Rational::constant(C64::new(1.0 / s, 0.0))).times_modulus(p, 1);
    let modulus_toeplitz = toeplitz_matrix_symbol(&modulus, n)?;
    let u_phi_p = composition_matrix(&phi_p(p)?, n)?.mul(&modulus_toeplitz)?;
    Ok(Example24 {
        p: pr,
        operator: toeplitz_matrix_symbol(&symbol, n)?,
        conjugation,
        modulus_toeplitz,
        u_phi_p,
        alternative_operator: toeplitz_matrix_symbol(&alternative, n)?,
    })
}

/// Smallest symmetry residual of `A` against `WeightedJ(p, e^{iθ})` over
/// `steps` equispaced phases; returns `(θ, residual)`.
pub fn phase_scan(a: &OpMatrix, p: C64, m: usize, steps: usize) -> Result<(f64, f64)> {
    let mut best = (0.0, f64::INFINITY);
    for k in 0..steps {
        let theta = std::f64::consts::TAU * k as f64 / steps as f64;
        let conj = ConjugationSpec::weighted_j(p, C64::from_polar(1.0, theta))?;
        let r = is_c_symmetric(a, &conj, m, 0.0)?.residual;
        if r < best.1 {
            best = (theta, r);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, I};

    fn nf(a0: f64, a1: f64, b: f64) -> NormalFormJ {
        NormalFormJ::new(c(a0, 0.0), c(a1, 0.0), c(b, 0.0)).unwrap()
    }

    #[test]
    fn j_symmetry_examples() {
        let n = nf(0.2, 0.3, 1.0);
        let a = weighted_composition_matrix(&n.weight(), &n.map().unwrap(), 64).unwrap();
        let r = is_c_symmetric(&a, &ConjugationSpec::J, 32, 1e-12).unwrap();
        assert!(r.verdict, "{r:?}");

        let phi = LFMap::from_j_form(c(0.2, 0.0), c(0.3, 0.0)).unwrap();
        let skew = LFMap::new(phi.a, phi.b, c(-0.3, 0.0) * phi.d, phi.d).unwrap();
        let a = composition_matrix(&skew, 64).unwrap();
        assert!(!is_c_symmetric(&a, &ConjugationSpec::J, 32, 1e-6).unwrap().verdict);

        let d = OpMatrix::from_diagonal(&[c(1.0, 2.0), c(-3.0, 0.5), I]);
        assert!(is_c_symmetric(&d, &ConjugationSpec::J, 1, 1e-15).unwrap().verdict);
        assert!(is_c_symmetric(&d, &ConjugationSpec::J, 2, 1e-15).is_err());
    }

    #[test]
    fn report_json_shape() {
        let a = OpMatrix::identity(8);
        let conj = ConjugationSpec::weighted_j(c(0.3, 0.0), c(1.0, 0.0)).unwrap();
        let r = is_c_symmetric(&a, &conj, 4, 1e-6).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["variant", "p", "c", "N", "M", "residual", "tol", "verdict"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["variant"], "WeightedJ");
    }

    #[test]
    fn conjugation_axioms_hold() {
        for conj in [
            ConjugationSpec::J,
            ConjugationSpec::weighted_j(c(0.3, 0.0), c(1.0, 0.0)).unwrap(),
            ConjugationSpec::weighted_j(C64::from_polar(0.2, 0.7), C64::from_polar(1.0, 2.0)).unwrap(),
            ConjugationSpec::rot_j(C64::from_polar(1.0, 1.1)).unwrap(),
        ] {
            let ax = conjugation_axioms(&conj, 96, 32).unwrap();
            assert!(ax.symmetric < 1e-12, "{conj:?} {ax:?}");
            assert!(ax.unitary < 1e-8, "{conj:?} {ax:?}");
            assert!(ax.involution < 1e-8, "{conj:?} {ax:?}");
        }
        assert!(ConjugationSpec::weighted_j(c(0.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(ConjugationSpec::rot_j(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn prop21_examples() {
        let p = c(0.5, 0.0);
        let class = prop21_classify(&psi_p(p, c(1.0, 0.0)).unwrap(), &phi_p(p).unwrap());
        match class {
            UnitaryJClass::UnitaryJSymmetric { p: q, c: k } => {
                assert!((q - p).norm() < 1e-12 && (k - 1.0).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let class = prop21_classify(&Rational::constant(I), &LFMap::rotation(c(-1.0, 0.0)));
        assert_eq!(class, UnitaryJClass::UnitaryJSymmetricRotation { mu: I, lambda: c(-1.0, 0.0) });

        let rotated = LFMap::rotation(I).compose(&phi_p(p).unwrap()).unwrap();
        assert_eq!(prop21_classify(&psi_p(p, c(1.0, 0.0)).unwrap(), &rotated), UnitaryJClass::Not);

        let q = C64::from_polar(0.6, -2.0);
        let k = C64::from_polar(1.0, 0.4);
        assert!(matches!(
            prop21_classify(&psi_p(q, k).unwrap(), &phi_p(q).unwrap()),
            UnitaryJClass::UnitaryJSymmetric { .. }
        ));
    }

    #[test]
    fn construction_is_symmetric_and_factors_back() {
        let conj = ConjugationSpec::weighted_j(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let (psi_t, phi_t) = thm25_construct(&conj, &nf(0.2, 0.3, 1.0)).unwrap();
        let a = weighted_composition_matrix(&psi_t, &phi_t, 96).unwrap();
        let r = is_c_symmetric(&a, &conj, 32, 1e-6).unwrap();
        assert!(r.verdict, "{r:?}");
        assert!(!is_c_symmetric(&a, &ConjugationSpec::J, 32, 1e-6).unwrap().verdict);

        let f = thm25_factor(&psi_t, &phi_t, &conj, 64).unwrap();
        let back = f.normal_form.unwrap();
        assert!((back.a0 - 0.2).norm() < 1e-10);
        assert!((back.a1 - 0.3).norm() < 1e-10);
        assert!((back.b - 1.0).norm() < 1e-10);
    }

    #[test]
    fn rotation_construction() {
        let conj = ConjugationSpec::rot_j(I).unwrap();
        let (psi_t, phi_t) = thm25_construct(&conj, &nf(0.0, 0.5, 1.0)).unwrap();
        assert!(psi_t.distance(&Rational::one()) < 1e-15);
        assert_eq!(phi_t, LFMap::rotation(c(0.0, 0.5)));

        let (psi_t, phi_t) = thm25_construct(&conj, &nf(0.2, 0.3, 1.0)).unwrap();
        let a = weighted_composition_matrix(&psi_t, &phi_t, 96).unwrap();
        assert!(is_c_symmetric(&a, &conj, 32, 1e-6).unwrap().verdict);
        let f = thm25_factor(&psi_t, &phi_t, &conj, 64).unwrap();
        assert!((f.normal_form.unwrap().a0 - 0.2).norm() < 1e-10);

        assert!(thm25_construct(&ConjugationSpec::J, &nf(0.2, 0.3, 1.0)).is_err());
    }

    #[test]
    fn factor_edge_cases() {
        let p = c(0.5, 0.0);
        let conj = ConjugationSpec::weighted_j(p, c(1.0, 0.0)).unwrap();
        let f = thm25_factor(&psi_p(p, c(1.0, 0.0)).unwrap(), &phi_p(p).unwrap(), &conj, 32).unwrap();
        assert!(f.phi.is_identity());
        assert!(f.psi.distance(&Rational::one()) < 1e-12);

        let err = thm25_factor(&Rational::one(), &phi_p(p).unwrap(), &conj, 32).unwrap_err();
        assert!(matches!(err, Error::NotFactorable { .. }));
    }

    #[test]
    fn thm27_examples() {
        let p = c(0.4, 0.0);
        let phi = LFMap::rotation(I).compose(&phi_p(p).unwrap()).unwrap();
        match thm27_check(&psi_p(p, c(1.0, 0.0)).unwrap(), &phi, 128, 32).unwrap() {
            Thm27Verdict::UnitaryWithConjugation { conjugation: ConjugationSpec::WeightedJ { p: q, c: k }, .. } => {
                assert!((q - p).norm() < 1e-12 && (k - 1.0).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            thm27_check(&Rational::one(), &LFMap::rotation(c(0.5, 0.0)), 64, 32).unwrap(),
            Thm27Verdict::NotIsometry { .. }
        ));
        assert!(matches!(
            thm27_check(&Rational::one(), &LFMap::identity(), 64, 32).unwrap(),
            Thm27Verdict::UnitaryWithConjugation { conjugation: ConjugationSpec::J, .. }
        ));
    }

    #[test]
    fn isometric_symmetric_operators_are_coisometric() {
        let p = c(0.3, 0.0);
        let conj = ConjugationSpec::weighted_j(p, c(1.0, 0.0)).unwrap();
        let w = conj.realize(96).unwrap();
        let co = isometric_symmetric_coisometry(&w, &conj, 32, 1e-6).unwrap().unwrap();
        assert!(co < 1e-6);
    }

    #[test]
    fn transfer_agrees_on_constructed_family() {
        let conj = ConjugationSpec::weighted_j(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let n = nf(0.2, 0.3, 1.0);
        let a = weighted_composition_matrix(&n.weight(), &n.map().unwrap(), 96).unwrap();
        let u = conj.realize(96).unwrap();
        let (before, after) = transfer_residuals(&a, &u, &OpMatrix::identity(96), 32).unwrap();
        assert!(before < 1e-12 && after < 1e-6, "{before} {after}");
    }

    #[test]
    fn example24_pieces() {
        let ex = example24_operator(c(0.4, 0.0), c(1.0, 0.0), 128).unwrap();
        let r = is_c_symmetric(&ex.alternative_operator, &ex.conjugation, 32, 1e-6).unwrap();
        assert!(r.verdict, "{r:?}");
        // The residual is phase-independent: scaling W by c scales it by |c|.
        let (_, best) = phase_scan(&ex.operator, c(0.4, 0.0), 32, 12).unwrap();
        let at_one = is_c_symmetric(&ex.operator, &ex.conjugation, 32, 1e-6).unwrap().residual;
        assert!((best - at_one).abs() < 1e-12);
        assert!(example24_operator(c(0.4, 0.1), c(1.0, 0.0), 16).is_err());
        assert!(example24_operator(c(0.0, 0.0), c(1.0, 0.0), 16).is_err());
    }
}
