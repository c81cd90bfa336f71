//! Dense square complex matrices and the tensor-product toolkit.
//!
//! Entries are stored row-major. For a bipartite space `C^d1 ⊗ C^d2` the
//! basis vector `e_i ⊗ e_j` has flat index `i * d2 + j`; every routine in
//! this crate uses that convention.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless `entries.len() == dim²`.
    pub fn from_vec(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Matrix unit `e_ij = |e_i⟩⟨e_j|`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(i, j)] = ONE;
        m
    }

    /// Rank-one operator `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(
            u.len(),
            v.len(),
            "outer product of vectors of unequal length"
        );
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    /// The swap operator `F(x ⊗ y) = y ⊗ x` on `C^d ⊗ C^d`.
    pub fn swap(d: usize) -> Self {
        let mut m = Self::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                m[(i * d + j, j * d + i)] = ONE;
            }
        }
        m
    }

    /// Projector onto the maximally entangled vector `(1/√d) Σ e_i ⊗ e_i`.
    pub fn max_entangled_projector(d: usize) -> Self {
        let mut m = Self::zeros(d * d);
        let w = Complex64::new(1.0 / d as f64, 0.0);
        for i in 0..d {
            for j in 0..d {
                m[(i * d + i, j * d + j)] = w;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M†|` over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "matrix-vector dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Commutator `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor == ZERO {
                    continue;
                }
                for k in col..n {
                    let v = a[col * n + k];
                    a[r * n + k] -= factor * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product: `(a ⊗ b)[(i1,i2),(j1,j2)] = a[i1,j1] · b[i2,j2]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for i1 in 0..da {
        for j1 in 0..da {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for i2 in 0..db {
                for j2 in 0..db {
                    out[(i1 * db + i2, j1 * db + j2)] = x * b[(i2, j2)];
                }
            }
        }
    }
    out
}

fn check_bipartite(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<()> {
    if m.dim != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            actual: m.dim,
        });
    }
    Ok(())
}

/// Partial trace of an operator on `C^d1 ⊗ C^d2` over the chosen factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    d1: usize,
    d2: usize,
    over: Subsystem,
) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    Ok(match over {
        Subsystem::Second => ComplexMatrix::from_fn(d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Subsystem::First => ComplexMatrix::from_fn(d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
    })
}

/// Partial transpose of an operator on `C^d1 ⊗ C^d2` on the chosen factor.
pub fn partial_transpose(
    m: &ComplexMatrix,
    d1: usize,
    d2: usize,
    on: Subsystem,
) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    let mut out = ComplexMatrix::zeros(m.dim);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    let (src_row, src_col) = match on {
                        Subsystem::Second => (i * d2 + l, j * d2 + k),
                        Subsystem::First => (j * d2 + k, i * d2 + l),
                    };
                    out[(i * d2 + k, j * d2 + l)] = m[(src_row, src_col)];
                }
            }
        }
    }
    Ok(out)
}
