//! Linear-fractional self-maps of the unit disk: algebra, classification,
//! Denjoy–Wolff points, translation numbers and normal forms.
//!
//! A map `z ↦ (a z + b)/(c z + d)` is stored through its coefficient
//! quadruple, scaled so that the largest coefficient has modulus one. Two
//! maps are equal when their quadruples are proportional.

use serde::{Deserialize, Serialize};

use crate::series::{quadratic_roots, Poly, Rational};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Relative size below which the `c` coefficient is treated as zero when
/// solving for fixed points.
const DEGREE_DROP_TOL: f64 = 1e-14;
/// Normalized discriminant below which the two fixed points coincide.
const DOUBLE_ROOT_TOL: f64 = 1e-10;
/// Distance from the unit circle within which a fixed point counts as a
/// boundary point.
const BOUNDARY_TOL: f64 = 1e-9;
const SELF_MAP_TOL: f64 = 1e-10;
const J_FORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LFMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl PartialEq for LFMap {
    fn eq(&self, other: &Self) -> bool {
        self.projective_distance(other) < 1e-12
    }
}

impl LFMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let scale = [a, b, c, d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Degenerate(ZERO));
        }
        let m = Self { a: a / scale, b: b / scale, c: c / scale, d: d / scale };
        let det = m.det();
        if det.norm() < 1e-14 {
            return Err(Error::Degenerate(det));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `z ↦ λ z`.
    pub fn rotation(lambda: C64) -> Self {
        Self::new(lambda, ZERO, ZERO, ONE).expect("nonzero multiplier")
    }

    /// The automorphism `λ (w - z)/(1 - w̄ z)`.
    pub fn automorphism(lambda: C64, w: C64) -> Result<Self> {
        Self::new(-lambda, lambda * w, -w.conj(), ONE)
    }

    /// `a0 + a1 z/(1 - a0 z)`.
    pub fn from_j_form(a0: C64, a1: C64) -> Result<Self> {
        Self::new(a1 - a0 * a0, a0, -a0, ONE)
    }

    pub fn coeffs(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let den = self.c * z + self.d;
        if den.norm() < 1e-15 {
            return Err(Error::PoleAt(z));
        }
        Ok((self.a * z + self.b) / den)
    }

    pub fn derivative(&self, z: C64) -> Result<C64> {
        let den = self.c * z + self.d;
        if den.norm() < 1e-15 {
            return Err(Error::PoleAt(z));
        }
        Ok(self.det() / (den * den))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LFMap) -> Result<LFMap> {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (inner.a, inner.b, inner.c, inner.d);
        LFMap::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    pub fn inverse(&self) -> LFMap {
        LFMap::new(self.d, -self.b, -self.c, self.a).expect("adjugate of a nondegenerate map")
    }

    /// Largest 2×2 minor of the stacked coefficient quadruples; zero iff the
    /// maps coincide.
    pub fn projective_distance(&self, other: &LFMap) -> f64 {
        let x = self.coeffs();
        let y = other.coeffs();
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                worst = worst.max((x[i] * y[j] - x[j] * y[i]).norm());
            }
        }
        worst
    }

    pub fn is_identity(&self) -> bool {
        self.projective_distance(&LFMap::identity()) < 1e-13
    }

    /// The pole `-d/c`, or `None` when the map is affine.
    pub fn pole(&self) -> Option<C64> {
        (self.c.norm() > DEGREE_DROP_TOL).then(|| -self.d / self.c)
    }

    /// Center and radius of the image of the unit circle, or `None` when the
    /// image is a line (pole on the circle).
    pub fn image_circle(&self) -> Option<(C64, f64)> {
        if let Some(p) = self.pole() {
            if (p.norm() - 1.0).abs() < 1e-12 {
                return None;
            }
        }
        let pts: Vec<C64> = [ONE, C64::new(-0.5, 3f64.sqrt() / 2.0), C64::new(-0.5, -(3f64.sqrt()) / 2.0)]
            .iter()
            .map(|&z| self.eval(z))
            .collect::<Result<_>>()
            .ok()?;
        let center = circumcenter(pts[0], pts[1], pts[2])?;
        Some((center, (pts[0] - center).norm()))
    }

    /// Exact test that the map sends the open disk into itself: the pole
    /// lies outside the closed disk, `|φ(0)| < 1`, and the image circle of
    /// ∂𝔻 lies in the closed disk.
    pub fn is_self_map(&self) -> bool {
        if let Some(p) = self.pole() {
            if p.norm() <= 1.0 + 1e-12 {
                return false;
            }
        }
        let Ok(at_zero) = self.eval(ZERO) else { return false };
        if at_zero.norm() >= 1.0 {
            return false;
        }
        match self.image_circle() {
            Some((center, radius)) => center.norm() + radius <= 1.0 + SELF_MAP_TOL,
            None => false,
        }
    }

    /// Largest modulus over `samples` equispaced points of the unit circle.
    pub fn boundary_sup_sampled(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let z = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / samples as f64);
                self.eval(z).map(|w| w.norm()).unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }

    /// `true` when the image of the unit circle is the unit circle itself.
    pub fn is_automorphism(&self) -> bool {
        self.is_self_map()
            && match self.image_circle() {
                Some((center, radius)) => center.norm() < 1e-9 && (radius - 1.0).abs() < 1e-9,
                None => false,
            }
    }

    /// Roots of `c z² + (d - a) z - b = 0`, with the point at infinity
    /// reported when the degree drops.
    pub fn fixed_points(&self) -> FixedPointSet {
        if self.is_identity() {
            return FixedPointSet::All;
        }
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if c.norm() < DEGREE_DROP_TOL {
            if (d - a).norm() < DEGREE_DROP_TOL {
                return FixedPointSet::Double(Point::Infinity);
            }
            return FixedPointSet::Two(Point::Finite(b / (d - a)), Point::Infinity);
        }
        let disc = (d - a) * (d - a) + 4.0 * b * c;
        if disc.norm() < DOUBLE_ROOT_TOL {
            return FixedPointSet::Double(Point::Finite((a - d) / (2.0 * c)));
        }
        let (r1, r2) = quadratic_roots(c, d - a, -b);
        FixedPointSet::Two(Point::Finite(r1), Point::Finite(r2))
    }

    /// Multiplier at a fixed point; at infinity this is `d/a` for affine maps.
    pub fn multiplier(&self, p: Point) -> Result<C64> {
        match p {
            Point::Finite(z) => self.derivative(z),
            Point::Infinity => Ok(self.d / self.a),
        }
    }

    /// Conjugates by `T(z) = (ζ + z)/(ζ - z)`, which sends ζ to infinity and
    /// the disk onto the right half-plane. For a map fixing ζ the result is
    /// affine, `w ↦ r w + t`; returns `(r, t)`.
    pub fn half_plane_model(&self, zeta: C64) -> (C64, C64) {
        let t = [ONE, zeta, -ONE, zeta];
        let t_inv = [zeta, -zeta, ONE, ONE];
        let m = mat_mul(mat_mul(t, self.coeffs()), t_inv);
        (m[0] / m[3], m[1] / m[3])
    }

    pub fn analyze(&self) -> Result<MapAnalysis> {
        if !self.is_self_map() {
            return Err(Error::NotSelfMap);
        }
        let automorphism = self.is_automorphism();
        let mut out = MapAnalysis {
            fixed_points: Vec::new(),
            double: false,
            denjoy_wolff: None,
            class: MapClass { tag: ClassTag::Identity, is_automorphism: automorphism },
            boundary_point: None,
            translation_number: None,
            multiplier_r: None,
        };
        let (p1, p2) = match self.fixed_points() {
            FixedPointSet::All => return Ok(out),
            FixedPointSet::Double(p) => {
                out.double = true;
                out.fixed_points.push(FixedPoint { point: p, multiplier: self.multiplier(p)? });
                let Point::Finite(zeta) = p else {
                    return Err(Error::NotSelfMap);
                };
                let (_, t) = self.half_plane_model(zeta);
                out.class.tag = ClassTag::Parabolic;
                out.denjoy_wolff = Some(zeta);
                out.boundary_point = Some(zeta);
                out.translation_number = Some(t);
                return Ok(out);
            }
            FixedPointSet::Two(p1, p2) => (p1, p2),
        };
        for p in [p1, p2] {
            out.fixed_points.push(FixedPoint { point: p, multiplier: self.multiplier(p)? });
        }
        let finite = |p: Point| match p {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        };
        let on_circle = |z: C64| (z.norm() - 1.0).abs() < BOUNDARY_TOL;
        let interior = [p1, p2].into_iter().filter_map(finite).find(|z| z.norm() < 1.0 - BOUNDARY_TOL);
        let boundary: Vec<C64> = [p1, p2].into_iter().filter_map(finite).filter(|&z| on_circle(z)).collect();

        if let Some(w) = interior {
            let m = self.derivative(w)?;
            if (m.norm() - 1.0).abs() < 1e-9 {
                out.class.tag = ClassTag::Elliptic;
                return Ok(out);
            }
            out.denjoy_wolff = Some(w);
            if let Some(&zeta) = boundary.first() {
                // The boundary point is repelling; the normal form is read
                // off the Cowen auxiliary map, for which ζ is attracting.
                let sigma = cowen_triple(self).sigma;
                let (r, t) = sigma.half_plane_model(zeta);
                out.class.tag = ClassTag::HyperbolicInteriorDw;
                out.boundary_point = Some(zeta);
                out.translation_number = Some(t);
                out.multiplier_r = Some(r.re);
            } else {
                out.class.tag = ClassTag::LoxodromicOther;
            }
            return Ok(out);
        }

        let zeta = boundary
            .iter()
            .copied()
            .map(|z| (z, self.derivative(z).map(|m| m.norm()).unwrap_or(f64::INFINITY)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .filter(|&(_, m)| m <= 1.0 + 1e-12)
            .map(|(z, _)| z)
            .ok_or_else(|| Error::Domain("no attracting fixed point in the closed disk".into()))?;
        let (r, t) = self.half_plane_model(zeta);
        out.class.tag = ClassTag::HyperbolicBoundaryDw;
        out.denjoy_wolff = Some(zeta);
        out.boundary_point = Some(zeta);
        out.translation_number = Some(t);
        out.multiplier_r = Some(r.re);
        Ok(out)
    }

    /// Translation number of the half-plane model; for maps with interior
    /// Denjoy–Wolff point and a boundary fixed point this is the translation
    /// number of the Cowen auxiliary map.
    pub fn translation_number(&self) -> Result<C64> {
        let an = self.analyze()?;
        if an.class.tag == ClassTag::Identity {
            return Err(Error::IdentityMap);
        }
        an.translation_number
            .ok_or_else(|| Error::Domain(format!("no boundary fixed point ({:?})", an.class.tag)))
    }
}

fn mat_mul(x: [C64; 4], y: [C64; 4]) -> [C64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn circumcenter(p: C64, q: C64, r: C64) -> Option<C64> {
    let (b, c) = (q - p, r - p);
    let denom = 2.0 * (b.re * c.im - b.im * c.re);
    if denom.abs() < 1e-300 {
        return None;
    }
    let (bb, cc) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * bb - b.im * cc) / denom;
    let uy = (b.re * cc - c.re * bb) / denom;
    Some(p + C64::new(ux, uy))
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Point {
    Finite(C64),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPointSet {
    /// The identity fixes every point.
    All,
    Double(Point),
    Two(Point, Point),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassTag {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "elliptic")]
    Elliptic,
    #[serde(rename = "parabolic")]
    Parabolic,
    #[serde(rename = "hyperbolic-DW-interior")]
    HyperbolicInteriorDw,
    #[serde(rename = "hyperbolic-DW-boundary")]
    HyperbolicBoundaryDw,
    #[serde(rename = "loxodromic-other")]
    LoxodromicOther,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapClass {
    pub tag: ClassTag,
    pub is_automorphism: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: Point,
    pub multiplier: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapAnalysis {
    pub fixed_points: Vec<FixedPoint>,
    /// The two fixed points coincide.
    pub double: bool,
    pub denjoy_wolff: Option<C64>,
    pub class: MapClass,
    /// Boundary fixed point ζ used for the half-plane model.
    pub boundary_point: Option<C64>,
    pub translation_number: Option<C64>,
    pub multiplier_r: Option<f64>,
}

/// The three half-plane parametrizations of non-elliptic maps with a
/// boundary fixed point ζ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfPlaneForm {
    /// Hyperbolic, Denjoy–Wolff point ζ on the circle: `w ↦ r w + t`.
    #[serde(rename = "eq3")]
    BoundaryHyperbolic,
    /// Hyperbolic with interior Denjoy–Wolff point; `(r, t)` belong to the
    /// Cowen auxiliary map.
    #[serde(rename = "eq4")]
    InteriorHyperbolic,
    /// Parabolic: `w ↦ w + t`.
    #[serde(rename = "eq5")]
    Parabolic,
}

pub fn build_normal_form(form: HalfPlaneForm, zeta: C64, r: Option<f64>, t: C64) -> Result<LFMap> {
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("ζ = {zeta} is not unimodular")));
    }
    if t.re < -1e-15 {
        return Err(Error::Domain(format!("Re(t) = {} is negative", t.re)));
    }
    let need_r = || -> Result<f64> {
        match r {
            Some(r) if r > 1.0 => Ok(r),
            _ => Err(Error::Domain(format!("r = {r:?} must be a real number > 1"))),
        }
    };
    let zb = zeta.conj();
    match form {
        HalfPlaneForm::BoundaryHyperbolic => {
            let r = need_r()?;
            LFMap::new((1.0 + r) - t, (r - 1.0 + t) * zeta, (r - 1.0 - t) * zb, (1.0 + r) + t)
        }
        HalfPlaneForm::InteriorHyperbolic => {
            let r = need_r()?;
            if t.re <= 0.0 {
                return Err(Error::Domain("Re(t) must be positive for an interior Denjoy–Wolff point".into()));
            }
            let tb = t.conj();
            LFMap::new((1.0 + r) - tb, -(r - 1.0 - tb) * zeta, -(r - 1.0 + tb) * zb, (1.0 + r) + tb)
        }
        HalfPlaneForm::Parabolic => LFMap::new(2.0 - t, t * zeta, -t * zb, 2.0 + t),
    }
}

/// `φ_p(z) = (p̄/p)(p - z)/(1 - p̄ z)` for `0 < |p| < 1`.
pub fn phi_p(p: C64) -> Result<LFMap> {
    if p.norm() == 0.0 || p.norm() >= 1.0 {
        return Err(Error::Domain(format!("p = {p} must satisfy 0 < |p| < 1")));
    }
    LFMap::automorphism(p.conj() / p, p)
}

/// `ψ_p(z) = c (1 - |p|²)^{1/2}/(1 - p̄ z)` for `|p| < 1`, `|c| = 1`.
pub fn psi_p(p: C64, c: C64) -> Result<Rational> {
    if p.norm() >= 1.0 {
        return Err(Error::Domain(format!("p = {p} must lie in the open disk")));
    }
    if (c.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("c = {c} must be unimodular")));
    }
    let s = (1.0 - p.norm_sqr()).sqrt();
    Ok(Rational::new(Poly::constant(c * s), Poly::linear(ONE, -p.conj())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryFixing {
    ParabolicFixingOne,
    HyperbolicDwMinusOne {
        /// `|φ_p'(-1)|` evaluated from the map.
        derivative_modulus: f64,
        /// The closed form `|sin(Arg p)|`. It disagrees with
        /// `derivative_modulus`, which is always 1 on this branch.
        closed_form: f64,
    },
    Neither,
}

/// Decides whether `φ_p` fixes 1 (parabolic) or -1 (hyperbolic with
/// Denjoy–Wolff point -1) from the angle condition `|p| = ±cos(Arg p)`.
pub fn classify_phi_p_boundary(p: C64) -> Result<BoundaryFixing> {
    if p.norm() == 0.0 {
        return Err(Error::Domain("p must be nonzero".into()));
    }
    let (modulus, theta) = p.to_polar();
    if (modulus - theta.cos()).abs() < 1e-12 {
        return Ok(BoundaryFixing::ParabolicFixingOne);
    }
    if (modulus + theta.cos()).abs() < 1e-12 {
        let derivative_modulus = phi_p(p)?.derivative(-ONE)?.norm();
        let s2 = theta.sin().powi(2);
        let c2 = theta.cos().powi(2);
        let closed_form = (s2 * s2 / (s2 * s2 + s2 * c2)).sqrt();
        return Ok(BoundaryFixing::HyperbolicDwMinusOne { derivative_modulus, closed_form });
    }
    Ok(BoundaryFixing::Neither)
}

/// The J-symmetric normal form `ψ = b/(1 - a0 z)`,
/// `φ = a0 + a1 z/(1 - a0 z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormJ {
    pub a0: C64,
    pub a1: C64,
    pub b: C64,
}

impl NormalFormJ {
    pub fn new(a0: C64, a1: C64, b: C64) -> Result<Self> {
        if a0.norm() >= 1.0 {
            return Err(Error::Domain(format!("a0 = {a0} must lie in the open disk")));
        }
        Ok(Self { a0, a1, b })
    }

    /// Fails for `a1 = 0`, where the symbol is the constant `a0`.
    pub fn map(&self) -> Result<LFMap> {
        LFMap::from_j_form(self.a0, self.a1)
    }

    pub fn weight(&self) -> Rational {
        Rational::j_weight(self.b, self.a0)
    }

    /// Recovers `(a0, a1)` from a map in J-form.
    pub fn from_map(phi: &LFMap, b: C64) -> Result<Self> {
        let residual = j_form_map_residual(phi)?;
        if residual > J_FORM_TOL {
            return Err(Error::NotJForm { residual });
        }
        Self::new(phi.b / phi.d, phi.det() / (phi.d * phi.d), b)
    }
}

/// `|c/d + b/d|`: vanishes iff `φ = a0 + a1 z/(1 - a0 z)` with `a0 = φ(0)`.
pub fn j_form_map_residual(phi: &LFMap) -> Result<f64> {
    if phi.d.norm() < 1e-15 {
        return Err(Error::PoleAt(ZERO));
    }
    Ok((phi.c / phi.d + phi.b / phi.d).norm())
}

/// Residual of `ψ ≡ ψ(0)/(1 - a0 z)`, by cross-multiplication.
pub fn j_form_weight_residual(psi: &Rational, a0: C64) -> Result<f64> {
    let den0 = psi.den.eval(ZERO);
    if den0.norm() < 1e-15 * psi.den.max_abs().max(1e-300) {
        return Err(Error::ZeroConstantTerm);
    }
    let b = psi.num.eval(ZERO) / den0;
    let lhs = psi.num.mul(&Poly::linear(ONE, -a0));
    let diff = lhs.sub(&psi.den.scale(b));
    let scale = psi.den.max_abs() * b.norm().max(1.0);
    Ok(diff.max_abs() / scale)
}

/// Matches `(ψ, φ)` against the J-symmetric normal form.
pub fn to_j_normal_form(psi: &Rational, phi: &LFMap) -> Result<NormalFormJ> {
    let map_res = j_form_map_residual(phi)?;
    let a0 = phi.b / phi.d;
    let weight_res = j_form_weight_residual(psi, a0)?;
    let residual = map_res.max(weight_res);
    if residual > J_FORM_TOL {
        return Err(Error::NotJForm { residual });
    }
    NormalFormJ::new(a0, phi.det() / (phi.d * phi.d), psi.eval(ZERO))
}

/// Cowen's auxiliary data for `C_φ* = T_g C_σ T_h*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CowenTriple {
    /// `σ(z) = (ā z - c̄)/(-b̄ z + d̄)`.
    pub sigma: LFMap,
    /// `g(z) = 1/(-b̄ z + d̄)`.
    pub g: Rational,
    /// `h(z) = c z + d`.
    pub h: Poly,
}

pub fn cowen_triple(m: &LFMap) -> CowenTriple {
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    CowenTriple {
        sigma: LFMap::new(a.conj(), -c.conj(), -b.conj(), d.conj()).expect("conjugate determinant is nonzero"),
        g: Rational::new(Poly::constant(ONE), Poly::linear(d.conj(), -b.conj())),
        h: Poly::linear(d, c),
    }
}
