//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::spectrum::Spectrum;

/// Hermiticity check applied before diagonalization.
pub const HERMITIAN_TOL: f64 = 1e-10;

const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub spectrum: Spectrum,
    /// Column `k` is the eigenvector for `spectrum.values()[k]`.
    pub vectors: Option<ComplexMatrix>,
}

/// Eigenvalues (decreasing) and optionally eigenvectors of a Hermitian matrix.
pub fn hermitian_spectrum(m: &ComplexMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    m.ensure_hermitian(HERMITIAN_TOL)?;
    let (values, vectors) = jacobi(m, want_vectors);

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let vectors = vectors.map(|v| ComplexMatrix::from_fn(v.dim(), |i, j| v[(i, order[j])]));

    Ok(HermitianEigen {
        spectrum: Spectrum::from_sorted_unchecked(sorted),
        vectors,
    })
}

/// Eigenvalues only, decreasing.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    Ok(hermitian_spectrum(m, false)?.spectrum)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.dim();
    // symmetrize so tiny input asymmetry does not leak into the rotations
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let modulus = apq.norm();
                if modulus < f64::MIN_POSITIVE {
                    continue;
                }
                // phase W = diag(.., e^{-iφ} at q, ..) makes a_pq real and positive
                let phase = apq / modulus;
                for k in 0..n {
                    a[(k, q)] *= phase.conj();
                }
                for k in 0..n {
                    a[(q, k)] *= phase;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        v[(k, q)] *= phase.conj();
                    }
                }

                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * modulus);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * s;
                        v[(k, q)] = vkp * s + vkq * c;
                    }
                }
            }
        }
    }

    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}
