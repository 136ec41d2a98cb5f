//! Closed-form spectrum predictors and their registry.

use serde::{Deserialize, Serialize};

use super::{power_compact, SpectrumKind, SpectrumPrediction};
use crate::moebius::{
    build_normal_form, classify_phi_p_boundary, phi_p, psi_p, BoundaryFixing, ClassTag, HalfPlaneForm, NormalFormJ,
};
use crate::series::Rational;
use crate::symmetry::{thm25_construct, ConjugationSpec};
use crate::{Error, LFMap, Result, C64};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Inputs shared by all predictors; each predictor reads the fields it
/// needs and reports the missing ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TheoremParams {
    pub p: Option<C64>,
    /// Phase of `ψ_p`.
    pub c: C64,
    pub a0: Option<C64>,
    pub a1: Option<C64>,
    pub b: Option<C64>,
    pub t: Option<C64>,
    pub psi0: Option<C64>,
    pub lambda: Option<C64>,
    /// Boundary Denjoy–Wolff point of a parabolic normal form.
    pub zeta: Option<C64>,
    pub m_max: usize,
}

impl Default for TheoremParams {
    fn default() -> Self {
        Self { p: None, c: ONE, a0: None, a1: None, b: None, t: None, psi0: None, lambda: None, zeta: None, m_max: 8 }
    }
}

impl TheoremParams {
    fn need(value: Option<C64>, name: &str) -> Result<C64> {
        value.ok_or_else(|| Error::Domain(format!("parameter `{name}` is required")))
    }

    /// The normal form `(a0, a1, b)`; `b` defaults to 1.
    pub fn normal_form(&self) -> Result<NormalFormJ> {
        NormalFormJ::new(Self::need(self.a0, "a0")?, Self::need(self.a1, "a1")?, self.b.unwrap_or(ONE))
    }
}

pub trait SpectrumTheorem: Send + Sync {
    fn id(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// The pair `(ψ, φ)` whose weighted composition operator the prediction
    /// is about.
    fn operator(&self, params: &TheoremParams) -> Result<(Rational, LFMap)>;
    fn predict(&self, params: &TheoremParams) -> Result<SpectrumPrediction>;
}

pub fn registry() -> Vec<Box<dyn SpectrumTheorem>> {
    vec![Box::new(Thm34), Box::new(Thm35), Box::new(Thm36), Box::new(Cor37), Box::new(Prop38)]
}

pub fn theorem(id: &str) -> Option<Box<dyn SpectrumTheorem>> {
    registry().into_iter().find(|t| t.id() == id)
}

/// `{ψ(w) φ'(w)^m : m = 0..=m_max} ∪ {0}` for the interior Denjoy–Wolff
/// point `w` of φ.
pub fn interior_point_set(psi: &Rational, phi: &LFMap, m_max: usize) -> Result<SpectrumPrediction> {
    let an = phi.analyze()?;
    let w = an
        .denjoy_wolff
        .filter(|w| w.norm() < 1.0)
        .ok_or_else(|| Error::Hypothesis("the symbol has no interior Denjoy–Wolff point".into()))?;
    Ok(point_set(psi.eval(w), phi.derivative(w)?, m_max).param("w", w))
}

fn point_set(lead: C64, ratio: C64, m_max: usize) -> SpectrumPrediction {
    let mut points: Vec<C64> = std::iter::successors(Some(lead), |z| Some(z * ratio)).take(m_max + 1).collect();
    points.push(ZERO);
    SpectrumPrediction::new(SpectrumKind::PointSet, lead.norm(), points).param("ratio", ratio)
}

/// J-symmetric parabolic normal form fixing `ζ = ±1` with translation
/// number t and `ψ(0) = psi0`.
pub fn parabolic_j_form(zeta: C64, t: C64, psi0: C64) -> Result<NormalFormJ> {
    let phi = build_normal_form(HalfPlaneForm::Parabolic, zeta, None, t)?;
    NormalFormJ::from_map(&phi, psi0)
}

/// `[0]` followed by 63 logarithmically spaced values up to `8/Re(s)`.
pub fn spiral_b_grid(s: C64) -> Vec<f64> {
    let top = 8.0 / s.re;
    let bottom = top * 1e-3;
    let mut grid = vec![0.0];
    grid.extend((0..63).map(|k| bottom * (top / bottom).powf(k as f64 / 62.0)));
    grid
}

struct Thm34;
struct Thm35;
struct Thm36;
struct Cor37;
struct Prop38;

fn weighted(params: &TheoremParams) -> Result<ConjugationSpec> {
    ConjugationSpec::weighted_j(TheoremParams::need(params.p, "p")?, params.c)
}

impl SpectrumTheorem for Thm34 {
    fn id(&self) -> &'static str {
        "3.4"
    }
    fn summary(&self) -> &'static str {
        "ψ_p·ψ∘φ_p with φ∘φ_p power compact: eigenvalues ψ̃(w)·φ̃'(w)^m"
    }
    fn operator(&self, params: &TheoremParams) -> Result<(Rational, LFMap)> {
        thm25_construct(&weighted(params)?, &params.normal_form()?)
    }
    fn predict(&self, params: &TheoremParams) -> Result<SpectrumPrediction> {
        let p = TheoremParams::need(params.p, "p")?;
        let nf = params.normal_form()?;
        predict_thm34(&nf, p, params.c, params.m_max)
    }
}

pub fn predict_thm34(nf: &NormalFormJ, p: C64, c: C64, m_max: usize) -> Result<SpectrumPrediction> {
    let conj = ConjugationSpec::weighted_j(p, c)?;
    if nf.a1.norm() == 0.0 {
        // φ ≡ a0, so φ̃ ≡ a0 as well and the operator has rank one.
        let w = nf.a0;
        let psi_t = psi_p(p, c)?.eval(w) * nf.weight().eval(phi_p(p)?.eval(w)?);
        return Ok(point_set(psi_t, ZERO, 0).param("w", w).param("p", p));
    }
    let (psi_t, phi_t) = thm25_construct(&conj, nf)?;
    if !power_compact(&phi_t) {
        return Err(Error::Hypothesis(
            "φ∘φ_p has a fixed point on the unit circle, so the operator is not power compact".into(),
        ));
    }
    Ok(interior_point_set(&psi_t, &phi_t, m_max)?.param("p", p))
}

impl SpectrumTheorem for Thm35 {
    fn id(&self) -> &'static str {
        "3.5"
    }
    fn summary(&self) -> &'static str {
        "parabolic φ and φ_p fixing 1: spiral ψ̃(1)·e^{-b(t+t̃)} with radius |ψ_p(1)ψ(1)|"
    }
    fn operator(&self, params: &TheoremParams) -> Result<(Rational, LFMap)> {
        let nf = parabolic_j_form(ONE, TheoremParams::need(params.t, "t")?, params.psi0.unwrap_or(ONE))?;
        thm25_construct(&weighted(params)?, &nf)
    }
    fn predict(&self, params: &TheoremParams) -> Result<SpectrumPrediction> {
        predict_thm35(
            TheoremParams::need(params.p, "p")?,
            TheoremParams::need(params.t, "t")?,
            params.psi0.unwrap_or(ONE),
        )
    }
}

pub fn predict_thm35(p: C64, t: C64, psi0: C64) -> Result<SpectrumPrediction> {
    if classify_phi_p_boundary(p)? != BoundaryFixing::ParabolicFixingOne {
        return Err(Error::Hypothesis(format!("φ_p does not fix 1 (|p| ≠ cos Arg p for p = {p})")));
    }
    let nf = parabolic_j_form(ONE, t, psi0)?;
    let phi = nf.map()?;
    let pp = phi_p(p)?;
    let composite = phi.compose(&pp)?;
    if composite.is_automorphism() {
        return Err(Error::Hypothesis("φ∘φ_p is an automorphism (Re t = 0)".into()));
    }
    let t_tilde = pp.translation_number()?;
    let s = (1.0 - p.norm_sqr()).sqrt();
    // ψ̃(1) = ψ_p(1)·ψ(1) = ψ(0)(1-|p|²)^{1/2}(2+t)/(2(1-p̄)).
    let prefactor = psi0 * s * (2.0 + t) / (2.0 * (ONE - p.conj()));
    let closed = psi0.norm() * s * (2.0 + t).norm() / (2.0 * (ONE - p.conj()).norm());
    let product = (psi_p(p, ONE)?.eval(ONE) * nf.weight().eval(ONE)).norm();
    let rate = t + t_tilde;
    let mut points: Vec<C64> = spiral_b_grid(rate).into_iter().map(|b| prefactor * (-b * rate).exp()).collect();
    points.push(ZERO);
    Ok(SpectrumPrediction::new(SpectrumKind::Spiral, closed, points)
        .param("p", p)
        .param("t", t)
        .param("t_tilde", t_tilde)
        .param("prefactor", prefactor)
        .diagnostic("radius_closed_form", closed)
        .diagnostic("radius_product", product))
}

impl SpectrumTheorem for Thm36 {
    fn id(&self) -> &'static str {
        "3.6"
    }
    fn summary(&self) -> &'static str {
        "parabolic φ fixing -1 and φ_p fixing -1: closed disk"
    }
    fn operator(&self, params: &TheoremParams) -> Result<(Rational, LFMap)> {
        let nf = parabolic_j_form(-ONE, TheoremParams::need(params.t, "t")?, ONE)?;
        thm25_construct(&weighted(params)?, &nf)
    }
    fn predict(&self, params: &TheoremParams) -> Result<SpectrumPrediction> {
        predict_thm36(TheoremParams::need(params.p, "p")?, TheoremParams::need(params.t, "t")?)
    }
}

/// Radius `|2+t|/(2|1+p̄|)·((1-|p|²)/|φ_p'(-1)|)^{1/2}` with the derivative
/// evaluated from the map. The variant with the angle formula `|sin Arg p|`
/// in place of `|φ_p'(-1)|` is reported as a diagnostic.
pub fn predict_thm36(p: C64, t: C64) -> Result<SpectrumPrediction> {
    let BoundaryFixing::HyperbolicDwMinusOne { derivative_modulus, closed_form } = classify_phi_p_boundary(p)? else {
        return Err(Error::Hypothesis(format!("φ_p does not fix -1 (|p| ≠ -cos Arg p for p = {p})")));
    };
    let nf = parabolic_j_form(-ONE, t, ONE)?;
    let expected = crate::series::Rational::new(
        crate::series::Poly::constant(ONE),
        crate::series::Poly::linear(ONE, t / (2.0 + t)),
    );
    if nf.weight().distance(&expected) > 1e-12 {
        return Err(Error::Hypothesis("weight is not 1/(1 + t z/(2+t))".into()));
    }
    let phi = nf.map()?;
    let pp = phi_p(p)?;
    let composite = phi.compose(&pp)?;
    let dp = pp.derivative(-ONE)?;
    let dc = composite.derivative(-ONE)?;
    let s2 = 1.0 - p.norm_sqr();
    let lead = (2.0 + t).norm() / (2.0 * (ONE + p.conj()).norm());
    let radius = lead * (s2 / derivative_modulus).sqrt();
    let n = 64;
    let mut points: Vec<C64> =
        (0..n).map(|k| C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64)).collect();
    points.push(ZERO);
    let tag = composite.analyze()?.class.tag;
    Ok(SpectrumPrediction::new(SpectrumKind::Disk, radius, points)
        .param("p", p)
        .param("t", t)
        .param("phi_p_derivative", dp)
        .param("composite_derivative", dc)
        .diagnostic("derivative_identity_residual", (dc - dp).norm())
        .diagnostic("composite_derivative_modulus", dc.norm())
        .diagnostic("composite_is_hyperbolic", f64::from(u8::from(tag == ClassTag::HyperbolicBoundaryDw)))
        .diagnostic("radius_with_angle_formula", lead * (s2 / closed_form).sqrt()))
}

impl SpectrumTheorem for Cor37 {
    fn id(&self) -> &'static str {
        "3.7"
    }
    fn summary(&self) -> &'static str {
        "spectral radius of a non-automorphic J-symmetric operator from its Denjoy–Wolff point"
    }
    fn operator(&self, params: &TheoremParams) -> Result<(Rational, LFMap)> {
        let nf = match params.zeta {
            Some(zeta) => parabolic_j_form(zeta, TheoremParams::need(params.t, "t")?, params.psi0.unwrap_or(ONE))?,
            None => params.normal_form()?,
        };
        match params.p {
            Some(_) => thm25_construct(&weighted(params)?, &nf),
            None => Ok((nf.weight(), nf.map()?)),
        }
    }
    fn predict(&self, params: &TheoremParams) -> Result<SpectrumPrediction> {
        let (psi, phi) = self.operator(params)?;
        predict_cor37(&psi, &phi)
    }
}

/// Radius only. Interior Denjoy–Wolff point w: `|ψ(w)|`, valid for any
/// pair. Boundary point `w = ±1` (J-form required, t the translation
/// number): `|ψ(0)(2+t)/2|` for `w = 1` and `|ψ(0)(2+t)/(2+2t)|` for
/// `w = -1`. The direct value `|ψ(w)|` is kept as a diagnostic.
pub fn predict_cor37(psi: &Rational, phi: &LFMap) -> Result<SpectrumPrediction> {
    if phi.is_automorphism() {
        return Err(Error::Hypothesis("φ is an automorphism".into()));
    }
    let an = phi.analyze()?;
    let w = an.denjoy_wolff.ok_or_else(|| Error::Hypothesis("φ has no Denjoy–Wolff point".into()))?;
    if w.norm() < 1.0 - 1e-9 {
        let radius = psi.eval(w).norm();
        return Ok(SpectrumPrediction::new(SpectrumKind::RadiusOnly, radius, Vec::new()).param("w", w));
    }
    let nf = crate::moebius::to_j_normal_form(psi, phi)?;
    let t = an.translation_number.ok_or_else(|| Error::Hypothesis("no translation number".into()))?;
    let psi0 = nf.b;
    let radius = if (w - ONE).norm() < 1e-9 {
        (psi0 * (2.0 + t) / 2.0).norm()
    } else if (w + ONE).norm() < 1e-9 {
        (psi0 * (2.0 + t) / (2.0 + 2.0 * t)).norm()
    } else {
        return Err(Error::Hypothesis(format!("boundary Denjoy–Wolff point {w} is not ±1")));
    };
    Ok(SpectrumPrediction::new(SpectrumKind::RadiusOnly, radius, Vec::new())
        .param("w", w)
        .param("t", t)
        .diagnostic("weight_modulus_at_w", psi.eval(w).norm()))
}

impl SpectrumTheorem for Prop38 {
    fn id(&self) -> &'static str {
        "3.8"
    }
    fn summary(&self) -> &'static str {
        "ψ(λz), φ(λz) with no boundary fixed point: eigenvalues ψ(λw)(λφ'(λw))^n"
    }
    fn operator(&self, params: &TheoremParams) -> Result<(Rational, LFMap)> {
        let conj = ConjugationSpec::rot_j(TheoremParams::need(params.lambda, "lambda")?)?;
        thm25_construct(&conj, &params.normal_form()?)
    }
    fn predict(&self, params: &TheoremParams) -> Result<SpectrumPrediction> {
        predict_prop38(TheoremParams::need(params.lambda, "lambda")?, &params.normal_form()?, params.m_max)
    }
}

pub fn predict_prop38(lambda: C64, nf: &NormalFormJ, m_max: usize) -> Result<SpectrumPrediction> {
    let conj = ConjugationSpec::rot_j(lambda)?;
    let phi = nf.map()?;
    if phi.is_automorphism() {
        return Err(Error::Hypothesis("φ is an automorphism".into()));
    }
    let (psi_t, phi_t) = thm25_construct(&conj, nf)?;
    if !power_compact(&phi_t) {
        return Err(Error::Hypothesis("φ(λζ) = ζ for some ζ on the unit circle".into()));
    }
    Ok(interior_point_set(&psi_t, &phi_t, m_max)?.param("lambda", lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigenvalues;
    use crate::hardy::weighted_composition_matrix;
    use crate::scalar::{c, I};
    use crate::spectra::compare_spectrum;

    fn params_34() -> TheoremParams {
        TheoremParams {
            p: Some(c(0.5, 0.0)),
            a0: Some(c(0.2, 0.0)),
            a1: Some(c(0.3, 0.0)),
            b: Some(ONE),
            m_max: 5,
            ..TheoremParams::default()
        }
    }

    #[test]
    fn registry_ids() {
        let ids: Vec<&str> = registry().iter().map(|t| t.id()).collect();
        assert_eq!(ids, ["3.4", "3.5", "3.6", "3.7", "3.8"]);
        assert!(theorem("3.9").is_none());
    }

    #[test]
    fn point_set_matches_truncation() {
        let th = theorem("3.4").unwrap();
        let pred = th.predict(&params_34()).unwrap();
        assert_eq!(pred.points.len(), 7);
        let ratio = pred.params["ratio"];
        for pair in pred.points[..6].windows(2) {
            assert!((pair[1] / pair[0] - ratio).norm() < 1e-14);
        }
        let (psi, phi) = th.operator(&params_34()).unwrap();
        let eig = eigenvalues(&weighted_composition_matrix(&psi, &phi, 96).unwrap());
        assert!(compare_spectrum(&eig, &pred, 5, 1e-4).unwrap().pass);
        assert!(compare_spectrum(&eig, &pred, 1, 1e-4).unwrap().pass);

        let wrong = th.predict(&TheoremParams { p: Some(c(0.45, 0.0)), ..params_34() }).unwrap();
        assert!(!compare_spectrum(&eig, &wrong, 5, 1e-4).unwrap().pass);
    }

    #[test]
    fn degenerate_point_sets() {
        let pred = th34(TheoremParams { a1: Some(ZERO), ..params_34() });
        assert_eq!(pred.points.len(), 2);
        assert_eq!(pred.points[1], ZERO);
        let pred = th34(TheoremParams { m_max: 0, ..params_34() });
        assert_eq!(pred.points.len(), 2);
    }

    fn th34(p: TheoremParams) -> SpectrumPrediction {
        theorem("3.4").unwrap().predict(&p).unwrap()
    }

    #[test]
    fn spiral_radius() {
        let pred = predict_thm35(c(0.5, 0.5), ONE, ONE).unwrap();
        assert!((pred.radius - 1.5).abs() < 1e-12);
        assert!((pred.diagnostics["radius_product"] - 1.5).abs() < 1e-12);
        assert!(pred.radius_mismatch().unwrap() < 1e-10);
        let prefactor = pred.params["prefactor"];
        assert!((pred.points[0] - prefactor).norm() < 1e-15);
        let moduli: Vec<f64> = pred.points[..64].iter().map(|z| z.norm()).collect();
        assert!(moduli.windows(2).all(|w| w[1] < w[0]));
        assert!(predict_thm35(c(0.3, 0.0), ONE, ONE).is_err());
        assert!(predict_thm35(c(0.5, 0.5), c(0.0, 1.0), ONE).is_err());
    }

    #[test]
    fn disk_prediction_uses_the_map_derivative() {
        let pred = predict_thm36(c(-0.5, 0.5), ONE).unwrap();
        assert_eq!(pred.kind, SpectrumKind::Disk);
        assert!(pred.diagnostics["derivative_identity_residual"] < 1e-12);
        // |φ_p'(-1)| = 1, which makes the radius |ψ̃(-1)| = 3/2.
        assert!((pred.radius - 1.5).abs() < 1e-12);
        assert!((pred.diagnostics["radius_with_angle_formula"] - 1.783810).abs() < 1e-5);
        assert!(predict_thm36(c(0.5, 0.5), ONE).is_err());
    }

    #[test]
    fn radius_only_cases() {
        for (zeta, expected) in [(ONE, 1.5), (-ONE, 0.75)] {
            let p = TheoremParams { zeta: Some(zeta), t: Some(ONE), psi0: Some(ONE), ..TheoremParams::default() };
            let pred = theorem("3.7").unwrap().predict(&p).unwrap();
            assert!((pred.radius - expected).abs() < 1e-12, "{zeta} {}", pred.radius);
            assert_eq!(pred.radius_mismatch(), None);
        }
        let nf = NormalFormJ::new(c(0.2, 0.0), c(0.1, 0.0), ONE).unwrap();
        let pred = predict_cor37(&nf.weight(), &nf.map().unwrap()).unwrap();
        let w = pred.params["w"];
        assert!((nf.map().unwrap().eval(w).unwrap() - w).norm() < 1e-14);
        assert!((pred.radius - nf.weight().eval(w).norm()).abs() < 1e-15);
        assert!(predict_cor37(&Rational::one(), &phi_p(c(0.5, 0.0)).unwrap()).is_err());
    }

    #[test]
    fn rotated_point_sets() {
        let nf = NormalFormJ::new(c(0.2, 0.0), c(0.3, 0.0), ONE).unwrap();
        let pred = predict_prop38(I, &nf, 5).unwrap();
        let (psi, phi) = thm25_construct(&ConjugationSpec::rot_j(I).unwrap(), &nf).unwrap();
        let eig = eigenvalues(&weighted_composition_matrix(&psi, &phi, 96).unwrap());
        assert!(compare_spectrum(&eig, &pred, 5, 1e-4).unwrap().pass);

        let one = predict_prop38(ONE, &nf, 5).unwrap();
        let direct = interior_point_set(&nf.weight(), &nf.map().unwrap(), 5).unwrap();
        for (x, y) in one.points.iter().zip(&direct.points) {
            assert!((x - y).norm() < 1e-12);
        }
        let cor = predict_cor37(&nf.weight(), &nf.map().unwrap()).unwrap();
        assert!((one.radius - cor.radius).abs() < 1e-12);
        assert!(predict_prop38(-ONE, &nf, 3).is_ok());
    }
}
