//! Hermitian eigendecomposition.
//!
//! Householder reduction of the complex Hermitian matrix to a complex
//! tridiagonal form, a diagonal phase change that makes the tridiagonal real,
//! then implicit QL iterations with Wilkinson-style shifts.

use super::{ComplexMatrix, C64};
use crate::{Error, Result, STATE_TOL};

/// Eigenvalues in ascending order with the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let max_asymmetry = m.max_asymmetry();
    if max_asymmetry > STATE_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { max_asymmetry });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.rows();
    let tri = tridiagonalize(m, true);
    let mut diag = tri.diag;
    let mut off = tri.off;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut diag, &mut off, Some(&mut z))?;

    // z holds eigenvectors of the real tridiagonal as rows; lift them back.
    let q = tri.q.expect("requested accumulation");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let zk = &z[k * n..(k + 1) * n];
        for i in 0..n {
            let qrow = q.row(i);
            let mut acc = C64::new(0.0, 0.0);
            for (j, &zkj) in zk.iter().enumerate() {
                acc += qrow[j] * tri.phases[j] * zkj;
            }
            vectors[(i, col)] = acc;
        }
    }
    Ok(HermitianEigen {
        values: order.iter().map(|&k| diag[k]).collect(),
        vectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let tri = tridiagonalize(m, false);
    let mut diag = tri.diag;
    let mut off = tri.off;
    tridiagonal_ql(&mut diag, &mut off, None)?;
    diag.sort_by(|a, b| a.total_cmp(b));
    Ok(diag)
}

struct Tridiagonal {
    diag: Vec<f64>,
    /// off[i] couples i and i+1; off[n-1] = 0.
    off: Vec<f64>,
    /// Unitary phases making the tridiagonal real.
    phases: Vec<C64>,
    /// Product of the Householder reflectors, if requested.
    q: Option<ComplexMatrix>,
}

fn tridiagonalize(m: &ComplexMatrix, accumulate: bool) -> Tridiagonal {
    let n = m.rows();
    let mut a = m.hermitian_part().into_vec();
    let mut reflectors: Vec<(usize, Vec<C64>, f64)> = Vec::new();
    let zero = C64::new(0.0, 0.0);

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<C64> = (0..len).map(|i| a[(k + 1 + i) * n + k]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm_sqr;

        // p = beta * S v over the trailing block S = a[k+1.., k+1..]
        let base = k + 1;
        let mut p = vec![zero; len];
        for i in 0..len {
            let row = &a[(base + i) * n + base..(base + i) * n + n];
            let mut acc = zero;
            for (s, vj) in row.iter().zip(&v) {
                acc += s * vj;
            }
            p[i] = acc * beta;
        }
        let vp: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let kfac = vp.re * beta * 0.5;
        let q: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kfac).collect();
        for i in 0..len {
            let vi = v[i];
            let qi = q[i];
            let row = &mut a[(base + i) * n + base..(base + i) * n + n];
            for (j, s) in row.iter_mut().enumerate() {
                *s -= vi * q[j].conj() + qi * v[j].conj();
            }
        }
        a[base * n + k] = alpha;
        a[k * n + base] = alpha.conj();
        for i in 1..len {
            a[(base + i) * n + k] = zero;
            a[k * n + base + i] = zero;
        }
        if accumulate {
            reflectors.push((base, v, beta));
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let s = a[(i + 1) * n + i];
        let mag = s.norm();
        off[i] = mag;
        phases[i + 1] = if mag > 0.0 { phases[i] * (s / mag) } else { phases[i] };
    }

    let q = accumulate.then(|| {
        let mut q = ComplexMatrix::identity(n);
        let qd = q.as_mut_slice();
        for (base, v, beta) in reflectors.iter().rev() {
            // Q <- H Q with H = I - beta v v† acting on rows base..
            let len = v.len();
            let mut w = vec![zero; n];
            for i in 0..len {
                let vi = v[i].conj();
                let row = &qd[(base + i) * n..(base + i + 1) * n];
                for (wj, qij) in w.iter_mut().zip(row) {
                    *wj += vi * qij;
                }
            }
            for i in 0..len {
                let f = v[i] * *beta;
                let row = &mut qd[(base + i) * n..(base + i + 1) * n];
                for (qij, wj) in row.iter_mut().zip(&w) {
                    *qij -= f * wj;
                }
            }
        }
        q
    });

    Tridiagonal {
        diag,
        off,
        phases,
        q,
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix. `z`, when given,
/// accumulates the rotations into rows (row k is eigenvector k on return).
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for k in 0..n {
                        let t = zi1[k];
                        zi1[k] = s * zi[k] + c * t;
                        zi[k] = c * zi[k] - s * t;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m.hermitian_part()
    }

    fn check_decomposition(m: &ComplexMatrix, eig: &HermitianEigen, tol: f64) {
        let n = m.rows();
        for k in 0..n {
            let v = eig.vector(k);
            let mv = m.matvec(&v);
            for i in 0..n {
                assert!((mv[i] - v[i] * eig.values[k]).norm() < tol, "residual k={k}");
            }
        }
        let gram = eig.vectors.adjoint().matmul(&eig.vectors);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) < tol);
    }

    #[test]
    fn diagonal_input_sorted() {
        let m = ComplexMatrix::from_real(3, 3, &[3., 0., 0., 0., 1., 0., 0., 0., 2.]).unwrap();
        let eig = eig_hermitian(&m).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
        check_decomposition(&m, &eig, 1e-12);
    }

    #[test]
    fn pauli_x_spectrum() {
        let sx = ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap();
        let eig = eig_hermitian(&sx).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let m = random_hermitian(8, 11);
        let eig = eig_hermitian(&m).unwrap();
        check_decomposition(&m, &eig, 1e-8);
        let lambda = ComplexMatrix::from_diag(
            &eig.values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>(),
        );
        let rebuilt = eig.vectors.matmul(&lambda).matmul(&eig.vectors.adjoint());
        assert!(rebuilt.max_abs_diff(&m) < 1e-8);
    }

    #[test]
    fn larger_matrix_and_eigvals_path_agree() {
        let m = random_hermitian(60, 3);
        let eig = eig_hermitian(&m).unwrap();
        check_decomposition(&m, &eig, 1e-9);
        let vals = eigvals_hermitian(&m).unwrap();
        for (a, b) in vals.iter().zip(&eig.values) {
            assert!((a - b).abs() < 1e-10);
        }
        // trace check
        let tr: f64 = vals.iter().sum();
        assert!((tr - m.trace().re).abs() < 1e-10);
    }

    #[test]
    fn degenerate_spectrum() {
        let m = ComplexMatrix::identity(5).scale_real(2.5);
        let eig = eig_hermitian(&m).unwrap();
        assert!(eig.values.iter().all(|&x| (x - 2.5).abs() < 1e-14));
        check_decomposition(&m, &eig, 1e-12);
    }

    #[test]
    fn non_hermitian_rejected_with_asymmetry() {
        let m = ComplexMatrix::from_real(2, 2, &[1., 2., 0., 1.]).unwrap();
        match eig_hermitian(&m) {
            Err(Error::NotHermitian { max_asymmetry }) => assert!((max_asymmetry - 2.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn one_by_one() {
        let m = ComplexMatrix::from_real(1, 1, &[4.0]).unwrap();
        let eig = eig_hermitian(&m).unwrap();
        assert_eq!(eig.values, vec![4.0]);
    }
}
