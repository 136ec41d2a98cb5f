//! Dense non-Hermitian eigensolver: balancing, Householder reduction to
//! Hessenberg form, and implicitly shifted complex QR iteration to a full
//! Schur form `A = Z T Zᴴ`. Eigenvectors come from back-substitution on T.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{OpMatrix, C64};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Sorted by descending modulus, then ascending argument.
    pub eigenvalues: Vec<C64>,
    /// `‖A v - λ v‖ / ‖v‖` for the computed eigenvector of each eigenvalue.
    pub residuals: Vec<f64>,
    /// Residual divided by the Frobenius norm of A.
    pub backward_errors: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl EigenResult {
    pub fn leading(&self, k: usize) -> &[C64] {
        &self.eigenvalues[..k.min(self.eigenvalues.len())]
    }
}

pub struct Schur {
    pub t: DMatrix<C64>,
    pub z: DMatrix<C64>,
    pub converged: bool,
    pub iterations: usize,
}

pub(crate) struct RawEigen {
    pub values: Vec<C64>,
}

/// Eigenvalues only, without sorting or eigenvectors.
pub(crate) fn eigenvalues_of(m: &DMatrix<C64>) -> RawEigen {
    let mut h = m.clone();
    balance(&mut h);
    let s = schur_in_place(h, false);
    RawEigen { values: (0..s.t.nrows()).map(|i| s.t[(i, i)]).collect() }
}

/// All eigenvalues of `a` with per-eigenpair residuals.
pub fn eigenvalues(a: &OpMatrix) -> EigenResult {
    let n = a.n();
    let mut h = a.0.clone();
    let scaling = balance(&mut h);
    let s = schur_in_place(h, true);
    let values: Vec<C64> = (0..n).map(|i| s.t[(i, i)]).collect();
    let fro = a.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let tnorm = s.t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);

    let mut residuals = Vec::with_capacity(n);
    for k in 0..n {
        let y = triangular_eigenvector(&s.t, k, tnorm);
        let mut v = &s.z * y;
        for (vi, di) in v.iter_mut().zip(&scaling) {
            *vi *= *di;
        }
        let vn = v.norm();
        let r = &a.0 * &v - v.map(|x| x * values[k]);
        residuals.push(if vn > 0.0 { r.norm() / vn } else { f64::INFINITY });
    }

    let order = sorted_order(&values);
    let eigenvalues: Vec<C64> = order.iter().map(|&i| values[i]).collect();
    let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
    let backward_errors = residuals.iter().map(|r| r / fro).collect();
    EigenResult { eigenvalues, residuals, backward_errors, converged: s.converged, iterations: s.iterations }
}

/// Indices sorted by descending modulus; runs of moduli equal to within a
/// relative 1e-12 are ordered by ascending argument.
pub fn sorted_order(values: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].norm().total_cmp(&values[i].norm()).then(i.cmp(&j)));
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() {
            let (p, q) = (values[idx[end - 1]].norm(), values[idx[end]].norm());
            if (p - q).abs() > 1e-12 * p.max(q) {
                break;
            }
            end += 1;
        }
        idx[start..end].sort_by(|&i, &j| values[i].arg().total_cmp(&values[j].arg()).then(i.cmp(&j)));
        start = end;
    }
    idx
}

/// Diagonal similarity `D⁻¹ A D` with power-of-two entries that equalizes
/// row and column norms. Returns the diagonal of D.
fn balance(a: &mut DMatrix<C64>) -> Vec<f64> {
    let n = a.nrows();
    let mut d = vec![1.0; n];
    let l1 = |z: C64| z.re.abs() + z.im.abs();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(a[(j, i)]);
                    r += l1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / 2.0 {
                cc *= 2.0;
                rr /= 2.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 2.0;
                rr *= 2.0;
                f /= 2.0;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            return d;
        }
    }
}

/// Reduces to Hessenberg form and runs the shifted QR iteration. With
/// `want_z` the unitary factor is accumulated.
fn schur_in_place(mut h: DMatrix<C64>, want_z: bool) -> Schur {
    let n = h.nrows();
    let mut z = if want_z { DMatrix::identity(n, n) } else { DMatrix::zeros(0, 0) };
    hessenberg(&mut h, want_z.then_some(&mut z));
    let (converged, iterations) = qr_iterate(&mut h, want_z.then_some(&mut z));
    Schur { t: h, z, converged, iterations }
}

fn hessenberg(a: &mut DMatrix<C64>, mut z: Option<&mut DMatrix<C64>>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: DVector<C64> = a.view((k + 1, k), (n - k - 1, 1)).column(0).into_owned();
        let xnorm = x.norm();
        if xnorm == 0.0 {
            continue;
        }
        let tail: f64 = x.iter().skip(1).map(|v| v.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|e| e.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;
        // Left: rows k+1.., columns k..
        for j in k..n {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                s += v[i].conj() * a[(k + 1 + i, j)];
            }
            s *= beta;
            for i in 0..v.len() {
                a[(k + 1 + i, j)] -= v[i] * s;
            }
        }
        // Right: all rows, columns k+1..
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for l in 0..v.len() {
                s += a[(i, k + 1 + l)] * v[l];
            }
            s *= beta;
            for l in 0..v.len() {
                a[(i, k + 1 + l)] -= s * v[l].conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
        a[(k + 1, k)] = alpha;
        if let Some(z) = z.as_deref_mut() {
            for i in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for l in 0..v.len() {
                    s += z[(i, k + 1 + l)] * v[l];
                }
                s *= beta;
                for l in 0..v.len() {
                    z[(i, k + 1 + l)] -= s * v[l].conj();
                }
            }
        }
    }
}

/// `(c, s, r)` with `[c s; -s̄ c]·[x; y] = [r; 0]`, c real.
fn givens(x: C64, y: C64) -> (f64, C64, C64) {
    if y.norm() == 0.0 {
        return (1.0, C64::new(0.0, 0.0), x);
    }
    if x.norm() == 0.0 {
        return (0.0, y.conj() / y.norm(), C64::new(y.norm(), 0.0));
    }
    let norm = x.norm().hypot(y.norm());
    let phase = x / x.norm();
    (x.norm() / norm, phase * y.conj() / norm, phase * norm)
}

fn qr_iterate(h: &mut DMatrix<C64>, mut z: Option<&mut DMatrix<C64>>) -> (bool, usize) {
    let n = h.nrows();
    if n == 0 {
        return (true, 0);
    }
    let hnorm = h.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let max_iter = 30 * n.max(1);
    let mut total = 0;
    let mut ihi = n - 1;
    let mut its = 0;
    loop {
        // Find the start of the active unreduced block.
        let mut ilo = ihi;
        while ilo > 0 {
            let sub = h[(ilo, ilo - 1)].norm();
            let mut diag = h[(ilo, ilo)].norm() + h[(ilo - 1, ilo - 1)].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= EPS * diag || sub < f64::MIN_POSITIVE {
                h[(ilo, ilo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            ilo -= 1;
        }
        if ilo == ihi {
            if ihi == 0 {
                return (true, total);
            }
            ihi -= 1;
            its = 0;
            continue;
        }
        if total >= max_iter {
            return (false, total);
        }
        total += 1;
        its += 1;

        let shift = if its % 10 == 0 {
            // Exceptional shift to break cycles.
            h[(ihi, ihi)] + C64::new(0.75 * h[(ihi, ihi - 1)].norm(), 0.0)
        } else {
            let a = h[(ihi - 1, ihi - 1)];
            let b = h[(ihi - 1, ihi)];
            let c = h[(ihi, ihi - 1)];
            let d = h[(ihi, ihi)];
            let half_tr = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
            let (l1, l2) = (half_tr + disc, half_tr - disc);
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };

        let mut x = h[(ilo, ilo)] - shift;
        let mut y = h[(ilo + 1, ilo)];
        for k in ilo..ihi {
            let (c, s, _) = givens(x, y);
            let col0 = if k > ilo { k - 1 } else { k };
            for j in col0..n {
                let (u, v) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = u * c + s * v;
                h[(k + 1, j)] = -s.conj() * u + v * c;
            }
            let row_end = (k + 2).min(ihi);
            for i in 0..=row_end {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * c + v * s.conj();
                h[(i, k + 1)] = -u * s + v * c;
            }
            if let Some(z) = z.as_deref_mut() {
                for i in 0..n {
                    let (u, v) = (z[(i, k)], z[(i, k + 1)]);
                    z[(i, k)] = u * c + v * s.conj();
                    z[(i, k + 1)] = -u * s + v * c;
                }
            }
            if k > ilo {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
            if k + 1 < ihi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
}

/// Solves `(T - t_kk I) y = 0` with `y_k = 1` by back-substitution,
/// perturbing tiny pivots and rescaling to avoid overflow.
fn triangular_eigenvector(t: &DMatrix<C64>, k: usize, tnorm: f64) -> DVector<C64> {
    let n = t.nrows();
    let lambda = t[(k, k)];
    let small = EPS * tnorm;
    let mut y = DVector::<C64>::zeros(n);
    y[k] = C64::new(1.0, 0.0);
    for j in (0..k).rev() {
        let mut s = C64::new(0.0, 0.0);
        for l in j + 1..=k {
            s += t[(j, l)] * y[l];
        }
        let mut pivot = t[(j, j)] - lambda;
        if pivot.norm() < small {
            pivot = C64::new(small.max(f64::MIN_POSITIVE), 0.0);
        }
        y[j] = -s / pivot;
        if y[j].norm() > 1e100 {
            let f = 1.0 / y[j].norm();
            for l in j..=k {
                y[l] *= f;
            }
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use rand::{Rng, SeedableRng};

    fn random_matrix(n: usize, seed: u64) -> OpMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        OpMatrix(DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
    }

    #[test]
    fn diagonal_matrix() {
        let a = OpMatrix::from_diagonal(&[c(0.25, 0.0), c(1.0, 0.0), c(0.5, 0.0)]);
        let e = eigenvalues(&a);
        assert!(e.converged);
        let expected = [1.0, 0.5, 0.25];
        for (got, want) in e.eigenvalues.iter().zip(expected) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn nilpotent_two_by_two() {
        let a = OpMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let e = eigenvalues(&a);
        assert_eq!(e.eigenvalues, vec![c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn random_matrices_have_small_residuals_and_correct_trace() {
        for (n, seed) in [(5, 1), (17, 2), (40, 3), (64, 4)] {
            let a = random_matrix(n, seed);
            let e = eigenvalues(&a);
            assert!(e.converged);
            assert_eq!(e.eigenvalues.len(), n);
            let trace: C64 = (0..n).map(|i| a.get(i, i)).sum();
            let sum: C64 = e.eigenvalues.iter().sum();
            assert!((trace - sum).norm() < 1e-10 * n as f64);
            assert!(e.residuals.iter().all(|&r| r < 1e-10), "{:?}", e.residuals);
        }
    }

    #[test]
    fn ordering_breaks_modulus_ties_by_argument() {
        let vals = [c(0.0, 1.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(2.0, 0.0)];
        let order = sorted_order(&vals);
        let sorted: Vec<C64> = order.iter().map(|&i| vals[i]).collect();
        assert_eq!(sorted, vec![c(2.0, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn agrees_with_nalgebra_schur() {
        // Independent check against nalgebra's complex Schur decomposition.
        let a = random_matrix(24, 11);
        let e = eigenvalues(&a);
        let reference = nalgebra::linalg::Schur::new(a.0.clone()).eigenvalues().expect("complex Schur form");
        let mut theirs: Vec<C64> = reference.iter().copied().collect();
        for ours in &e.eigenvalues {
            let (pos, dist) = theirs
                .iter()
                .enumerate()
                .map(|(i, t)| (i, (t - ours).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            assert!(dist < 1e-10, "{ours} unmatched ({dist})");
            theirs.swap_remove(pos);
        }
    }

    #[test]
    fn badly_scaled_matrix_is_balanced() {
        let a = OpMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1e6, 0.0), c(0.0, 0.0)],
            vec![c(1e-6, 0.0), c(2.0, 0.0), c(1e6, 0.0)],
            vec![c(0.0, 0.0), c(1e-6, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let e = eigenvalues(&a);
        let trace: C64 = e.eigenvalues.iter().sum();
        assert!((trace - c(6.0, 0.0)).norm() < 1e-10);
        assert!(e.residuals.iter().all(|&r| r < 1e-8));
    }
}
