//! Polynomials, rational functions and truncated power series with complex
//! coefficients.

use serde::{Deserialize, Serialize};

use crate::moebius::LFMap;
use crate::{Error, Result, C64};

/// Coefficients in ascending order: `coeffs[k]` multiplies zᵏ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![C64::new(0.0, 0.0)] } else { coeffs };
        Self { coeffs }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1·z`.
    pub fn linear(c0: C64, c1: C64) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Poly, f: impl Fn(C64, C64) -> C64) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|k| f(self.coeffs.get(k).copied().unwrap_or(zero), other.coeffs.get(k).copied().unwrap_or(zero)))
                .collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Degree after discarding trailing coefficients below `1e-14·max|c|`.
    pub fn degree(&self) -> usize {
        let cut = 1e-14 * self.max_abs();
        self.coeffs.iter().rposition(|c| c.norm() > cut).unwrap_or(0)
    }

    /// All complex roots. Degrees one and two use closed forms; higher
    /// degrees use the eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<C64> {
        let deg = self.degree();
        let c = &self.coeffs[..=deg];
        match deg {
            0 => Vec::new(),
            1 => vec![-c[0] / c[1]],
            2 => {
                let (r1, r2) = quadratic_roots(c[2], c[1], c[0]);
                vec![r1, r2]
            }
            _ => {
                let lead = c[deg];
                let mut m = nalgebra::DMatrix::<C64>::zeros(deg, deg);
                for k in 0..deg {
                    m[(0, k)] = -c[deg - 1 - k] / lead;
                    if k + 1 < deg {
                        m[(k + 1, k)] = C64::new(1.0, 0.0);
                    }
                }
                crate::eigen::eigenvalues_of(&m).values
            }
        }
    }
}

/// Roots of `a z² + b z + c = 0` (a ≠ 0), computed without cancellation.
pub fn quadratic_roots(a: C64, b: C64, c: C64) -> (C64, C64) {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Choose the sign that avoids subtracting nearly equal numbers.
    let q = if (b.conj() * disc).re >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
    if q.norm() == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    (q / a, c / q)
}

/// A rational function `num / den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Self {
        Self { num, den }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(Poly::constant(c), Poly::constant(C64::new(1.0, 0.0)))
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `b / (1 - a0·z)`, the weight of a J-symmetric normal form.
    pub fn j_weight(b: C64, a0: C64) -> Self {
        Self::new(Poly::constant(b), Poly::linear(C64::new(1.0, 0.0), -a0))
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Rational) -> Rational {
        Rational::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    /// Scale-free distance between two rational functions:
    /// `‖p₁q₂ - p₂q₁‖ / (‖p₁q₂‖ + ‖p₂q₁‖)` on coefficients, zero iff they agree.
    pub fn distance(&self, other: &Rational) -> f64 {
        let x = self.num.mul(&other.den);
        let y = other.num.mul(&self.den);
        let scale = x.max_abs() + y.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        x.sub(&y).max_abs() / scale
    }

    /// `self ∘ m`, homogenized so that no division is performed.
    pub fn compose_lf(&self, m: &LFMap) -> Rational {
        let k = self.num.coeffs.len().max(self.den.coeffs.len()) - 1;
        let top = Poly::linear(m.b, m.a);
        let bottom = Poly::linear(m.d, m.c);
        let mut top_pow = vec![Poly::constant(C64::new(1.0, 0.0))];
        let mut bottom_pow = vec![Poly::constant(C64::new(1.0, 0.0))];
        for i in 0..k {
            top_pow.push(top_pow[i].mul(&top));
            bottom_pow.push(bottom_pow[i].mul(&bottom));
        }
        let homogenize = |p: &Poly| {
            let mut acc = Poly::constant(C64::new(0.0, 0.0));
            for (i, &ci) in p.coeffs.iter().enumerate() {
                acc = acc.add(&top_pow[i].mul(&bottom_pow[k - i]).scale(ci));
            }
            acc
        };
        Rational::new(homogenize(&self.num), homogenize(&self.den))
    }

    /// Truncated Taylor coefficients at the origin by long division.
    pub fn taylor(&self, n: usize) -> Result<Vec<C64>> {
        let d0 = self.den.coeffs[0];
        if d0.norm() <= 1e-300 || d0.norm() <= 1e-15 * self.den.max_abs() {
            return Err(Error::ZeroConstantTerm);
        }
        let zero = C64::new(0.0, 0.0);
        let den = &self.den.coeffs;
        let mut out = vec![zero; n];
        for k in 0..n {
            let mut s = self.num.coeffs.get(k).copied().unwrap_or(zero);
            for j in 1..den.len().min(k + 1) {
                s -= den[j] * out[k - j];
            }
            out[k] = s / d0;
        }
        Ok(out)
    }

    /// Non-removable poles: roots of the denominator at which the numerator
    /// does not also vanish.
    pub fn poles(&self) -> Vec<C64> {
        let scale = self.num.max_abs().max(1e-300);
        self.den
            .roots()
            .into_iter()
            .filter(|&r| {
                let rn = r.norm().max(1.0);
                let bound = rn.powi(self.num.coeffs.len() as i32);
                self.num.eval(r).norm() > 1e-9 * scale * bound
            })
            .collect()
    }

    /// Fails with the offending pole if the function is not analytic on a
    /// neighbourhood of the closed unit disk.
    pub fn ensure_analytic_on_closed_disk(&self) -> Result<()> {
        match self.poles().into_iter().find(|p| p.norm() <= 1.0 + 1e-12) {
            Some(p) => Err(Error::PoleInDisk(p)),
            None => Ok(()),
        }
    }
}
