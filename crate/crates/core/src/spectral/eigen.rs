//! Householder tridiagonalization followed by implicit QL with Wilkinson
//! shifts (the EISPACK `tred2`/`tql2` pair).

use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::SymMatrix;
use crate::math;
use crate::{Error, Result};

/// Eigenvalues in ascending order with orthonormal eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    values: Vec<f64>,
    /// Row-major `n×n`; column `j` is the eigenvector of `values[j]`.
    vectors: Vec<f64>,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|i| self.vectors[i * n + j]).collect()
    }

    /// Component `i` of eigenvector `j`.
    pub fn component(&self, i: usize, j: usize) -> f64 {
        self.vectors[i * self.len() + j]
    }

    /// `max_j ‖Mψ_j − E_jψ_j‖₂`.
    pub fn max_residual(&self, m: &SymMatrix) -> f64 {
        (0..self.len())
            .map(|j| {
                let psi = self.eigenvector(j);
                let mpsi = m.mul_vec(&psi);
                math::sqrt(
                    mpsi.iter()
                        .zip(&psi)
                        .map(|(a, b)| {
                            let r = a - self.values[j] * b;
                            r * r
                        })
                        .sum(),
                )
            })
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} |⟨ψ_i, ψ_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = (0..n).map(|i| self.component(i, a) * self.component(i, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max(math::abs(dot - target));
            }
        }
        worst
    }
}

fn check_symmetric(m: &SymMatrix) -> Result<()> {
    match m.asymmetry() {
        Some((row, col)) => Err(Error::NotSymmetric { row, col }),
        None => Ok(()),
    }
}

/// Full eigen-decomposition of a symmetric matrix.
pub fn eig_symmetric(m: &SymMatrix) -> Result<EigenSystem> {
    check_symmetric(m)?;
    let n = m.dim();
    let mut v = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return Ok(EigenSystem {
            values: d,
            vectors: v,
        });
    }
    tred2(n, &mut v, &mut d, &mut e, true);
    tql2(n, &mut d, &mut e, Some(&mut v))?;
    Ok(EigenSystem {
        values: d,
        vectors: v,
    })
}

/// Eigenvalues only, ascending. Same reduction as [`eig_symmetric`] without
/// accumulating the transformations.
pub fn eigenvalues_symmetric(m: &SymMatrix) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let n = m.dim();
    if m.is_diagonal() {
        let mut d = m.diagonal();
        d.sort_by(f64::total_cmp);
        return Ok(d);
    }
    let mut v = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e, false);
    tql2(n, &mut d, &mut e, None)?;
    Ok(d)
}

/// Reduces `v` to tridiagonal form; `d` gets the diagonal and `e[1..]` the
/// sub-diagonal. With `accumulate`, `v` ends up holding the orthogonal
/// transformation.
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let idx = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += math::abs(d[k]);
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
                v[idx(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = math::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for j in 0..n {
            d[j] = v[idx(j, j)];
        }
        e[0] = 0.0;
        return;
    }

    for i in 0..n - 1 {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = 0.0;
    }
    v[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

const MAX_SWEEPS_PER_VALUE: usize = 60;

/// Implicit QL on the tridiagonal `(d, e)`; sorts ascending on exit.
fn tql2(n: usize, d: &mut [f64], e: &mut [f64], mut v: Option<&mut [f64]>) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(math::abs(d[l]) + math::abs(e[l]));
        let mut m = l;
        while m < n {
            if math::abs(e[m]) <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS_PER_VALUE {
                    return Err(Error::NoConvergence);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = math::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = math::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        for k in 0..n {
                            let row = k * n;
                            h = v[row + i + 1];
                            v[row + i + 1] = s * v[row + i] + c * h;
                            v[row + i] = c * v[row + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if math::abs(e[l]) <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort keeps eigenvector columns paired with their values.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            if let Some(v) = v.as_deref_mut() {
                for row in 0..n {
                    v.swap(row * n + i, row * n + k);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cyclic Jacobi rotations; an independent eigenvalue oracle.
    fn jacobi_eigenvalues(m: &SymMatrix) -> Vec<f64> {
        let n = m.dim();
        let mut a = m.as_slice().to_vec();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum();
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        d.sort_by(f64::total_cmp);
        d
    }

    fn random_symmetric(n: usize, entries: &[f64]) -> SymMatrix {
        let mut m = SymMatrix::zeros(n);
        let mut it = entries.iter().cycle();
        for i in 0..n {
            for j in i..n {
                m.set_sym(i, j, *it.next().unwrap());
            }
        }
        m
    }

    #[test]
    fn two_by_two_flip() {
        let m = SymMatrix::from_row_major(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let es = eig_symmetric(&m).unwrap();
        assert!((es.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((es.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_is_sorted() {
        let m = SymMatrix::from_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(eig_symmetric(&m).unwrap().eigenvalues(), &[1.0, 2.0, 3.0]);
        assert_eq!(eigenvalues_symmetric(&m).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn three_site_path() {
        let m = SymMatrix::from_row_major(3, vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        let es = eig_symmetric(&m).unwrap();
        let expected = jacobi_eigenvalues(&m);
        let r2 = 2f64.sqrt();
        for (got, want) in es.eigenvalues().iter().zip([-r2, 0.0, r2]) {
            assert!((got - want).abs() < 1e-10);
        }
        for (got, want) in es.eigenvalues().iter().zip(&expected) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SymMatrix::from_row_major(2, vec![0.0, 1.0, 2.0, 0.0]).unwrap();
        assert_eq!(eig_symmetric(&m), Err(Error::NotSymmetric { row: 0, col: 1 }));
        assert!(eigenvalues_symmetric(&m).is_err());
    }

    #[test]
    fn single_and_empty() {
        let m = SymMatrix::from_diagonal(&[4.5]);
        let es = eig_symmetric(&m).unwrap();
        assert_eq!(es.eigenvalues(), &[4.5]);
        assert_eq!(es.eigenvector(0), vec![1.0]);
        assert!(eig_symmetric(&SymMatrix::zeros(0)).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn residual_and_orthonormality(
            n in 1usize..24,
            entries in proptest::collection::vec(-5.0f64..5.0, 1..300),
        ) {
            let m = random_symmetric(n, &entries);
            let es = eig_symmetric(&m).unwrap();
            let scale = 1.0 + m.frobenius_norm();
            prop_assert!(es.max_residual(&m) <= 1e-10 * scale);
            prop_assert!(es.orthonormality_defect() <= 1e-10);
            prop_assert!(es.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
            let trace_gap = (m.trace() - es.eigenvalues().iter().sum::<f64>()).abs();
            prop_assert!(trace_gap <= 1e-9 * scale);
        }

        #[test]
        fn agrees_with_jacobi_and_values_only(
            n in 1usize..16,
            entries in proptest::collection::vec(-3.0f64..3.0, 1..200),
        ) {
            let m = random_symmetric(n, &entries);
            let full = eig_symmetric(&m).unwrap();
            let values = eigenvalues_symmetric(&m).unwrap();
            let oracle = jacobi_eigenvalues(&m);
            for i in 0..n {
                prop_assert!((full.eigenvalues()[i] - oracle[i]).abs() < 1e-9);
                prop_assert!((values[i] - oracle[i]).abs() < 1e-9);
            }
        }
    }
}
