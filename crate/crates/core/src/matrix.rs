//! Dense complex matrices in the monomial basis and truncated coefficient
//! vectors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Truncated Taylor coefficients; index n holds the coefficient of zⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVec(pub Vec<C64>);

impl CoeffVec {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// ℓ² norm, which is the H² norm of the truncated function.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_dvector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.0)
    }
}

/// An N×N operator matrix; column j holds the coefficients of the image of zʲ.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix(pub DMatrix<C64>);

impl OpMatrix {
    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// From row-major rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(n, bad.len()));
        }
        Ok(Self(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let n = cols.len();
        Self(DMatrix::from_fn(n, n, |i, j| cols[j][i]))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn mul(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.check_same(other)?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn sub(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.check_same(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, s: C64) -> OpMatrix {
        Self(&self.0 * s)
    }

    pub fn apply(&self, v: &CoeffVec) -> Result<CoeffVec> {
        if v.len() != self.n() {
            return Err(Error::Dimension(self.n(), v.len()));
        }
        Ok(CoeffVec((&self.0 * v.to_dvector()).iter().copied().collect()))
    }

    pub fn column(&self, j: usize) -> CoeffVec {
        CoeffVec(self.0.column(j).iter().copied().collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Leading `m×m` block.
    pub fn block(&self, m: usize) -> OpMatrix {
        let m = m.min(self.n());
        Self(self.0.view((0, 0), (m, m)).into_owned())
    }

    fn check_same(&self, other: &OpMatrix) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension(self.n(), other.n()));
        }
        Ok(())
    }

    /// Row-major CSV, each entry written as an `re,im` pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n() {
            let row: Vec<String> = (0..self.n())
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{},{}", crate::json::fmt_f64(z.re), crate::json::fmt_f64(z.im))
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Row-major rows of `[re, im]` pairs.
    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.get(i, j)).collect()).collect()
    }
}

impl Serialize for OpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            rows: Vec<Vec<C64>>,
        }
        Repr { n: self.n(), rows: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: Vec<Vec<C64>>,
        }
        let r = Repr::deserialize(d)?;
        OpMatrix::from_rows(&r.rows).map_err(serde::de::Error::custom)
    }
}

/// Largest entrywise difference on the leading `m×m` block.
pub fn block_residual(a: &OpMatrix, b: &OpMatrix, m: usize) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::Dimension(a.n(), b.n()));
    }
    let m = m.min(a.n());
    let mut worst: f64 = 0.0;
    for j in 0..m {
        for i in 0..m {
            worst = worst.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    Ok(worst)
}

/// Block residual of `AᴴA - I`.
pub fn isometry_residual(a: &OpMatrix, m: usize) -> f64 {
    let p = a.adjoint().mul(a).expect("square");
    block_residual(&p, &OpMatrix::identity(a.n()), m).expect("same size")
}

/// Block residual of `AAᴴ - I`.
pub fn coisometry_residual(a: &OpMatrix, m: usize) -> f64 {
    let p = a.mul(&a.adjoint()).expect("square");
    block_residual(&p, &OpMatrix::identity(a.n()), m).expect("same size")
}
