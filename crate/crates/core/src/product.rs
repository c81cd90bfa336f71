//! Output of `Λ_t ⊗ Λ_t` on Schmidt-diagonal inputs.
//!
//! For `ψ(λ) = Σ √λ_i e_i ⊗ e_i` the output
//! `X(λ) = t² ρ(λ) + t(1−t)/d (diag λ ⊗ 𝟙 + 𝟙 ⊗ diag λ) + ((1−t)/d)² 𝟙`
//! is block diagonal: each `e_i ⊗ e_j` with `i ≠ j` is an eigenvector with
//! eigenvalue `η_ij`, and the span of `{e_i ⊗ e_i}` carries the `d × d` block
//! `X̂(λ)`. The generic route [`product_output_generic`] sums the channel
//! images of matrix units directly and serves as the independent check.

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::{apply, ChannelSpec, Family};
use crate::eigen::{eigenvalues, hermitian_spectrum};
use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix, ZERO};
use crate::simplex::SimplexPoint;
use crate::spectrum::{entropy_contribution, Spectrum};

/// `ρ(λ) = |ψ(λ)⟩⟨ψ(λ)|` with `ψ(λ) = Σ √λ_i e_i ⊗ e_i`.
pub fn schmidt_input(lambda: &SimplexPoint) -> ComplexMatrix {
    let d = lambda.dim();
    let mut psi = vec![ZERO; d * d];
    for (i, &w) in lambda.weights().iter().enumerate() {
        psi[i * d + i] = Complex64::new(w.sqrt(), 0.0);
    }
    ComplexMatrix::outer(&psi, &psi)
}

fn ensure_tdep_cp(t: f64, d: usize) -> Result<()> {
    ChannelSpec::transpose_depolarising(d, t).ensure_cp()
}

fn check_lambda(d: usize, lambda: &SimplexPoint) -> Result<()> {
    if lambda.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: lambda.dim(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ProductOutput {
    pub t: f64,
    pub d: usize,
    pub lambda: SimplexPoint,
    /// `X(λ)` on `C^d ⊗ C^d`.
    pub full_matrix: ComplexMatrix,
    /// `η_ij` for `i ≠ j`, row-major over ordered pairs.
    pub eta: Vec<f64>,
    /// `X̂(λ)`, the restriction to `span{e_i ⊗ e_i}`.
    pub block: ComplexMatrix,
}

impl ProductOutput {
    /// Spectrum of `X(λ)` assembled from `η` and the block.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(Spectrum::new(self.eta.clone()).merge(&eigenvalues(&self.block)?))
    }
}

/// Spectrum of `X(λ)` without forming the `d² × d²` matrix.
pub fn output_spectrum(t: f64, d: usize, lambda: &SimplexPoint) -> Result<Spectrum> {
    check_lambda(d, lambda)?;
    Ok(Spectrum::new(eta_values(t, d, lambda))
        .merge(&eigenvalues(&restricted_block(t, d, lambda))?))
}

/// Closed-form `X(λ)` for `Λ_t ⊗ Λ_t`.
pub fn product_output(t: f64, d: usize, lambda: &SimplexPoint) -> Result<ProductOutput> {
    ensure_tdep_cp(t, d)?;
    check_lambda(d, lambda)?;
    let df = d as f64;
    let marginal = ComplexMatrix::diag(lambda.weights());
    let identity = ComplexMatrix::identity(d);
    let cross = &kron(&marginal, &identity) + &kron(&identity, &marginal);
    let noise = ((1.0 - t) / df).powi(2);

    let mut x = &schmidt_input(lambda).scale(t * t) + &cross.scale(t * (1.0 - t) / df);
    for i in 0..d * d {
        x[(i, i)] += Complex64::new(noise, 0.0);
    }
    Ok(ProductOutput {
        t,
        d,
        lambda: lambda.clone(),
        full_matrix: x,
        eta: eta_values(t, d, lambda),
        block: restricted_block(t, d, lambda),
    })
}

/// `(Φ₁ ⊗ Φ₂)(M)` for an arbitrary operator `M` on `C^d ⊗ C^d`, by applying
/// `id ⊗ Φ₂` to each block and then `Φ₁ ⊗ id` to each slice.
pub fn apply_product(
    spec1: &ChannelSpec,
    spec2: &ChannelSpec,
    m: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if spec1.d != spec2.d {
        return Err(Error::DimensionMismatch {
            expected: spec1.d,
            actual: spec2.d,
        });
    }
    let d = spec1.d;
    if m.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            actual: m.dim(),
        });
    }
    let mut stage = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let blk = ComplexMatrix::from_fn(d, |k, l| m[(i * d + k, j * d + l)]);
            let image = apply(spec2, &blk)?;
            for k in 0..d {
                for l in 0..d {
                    stage[(i * d + k, j * d + l)] = image[(k, l)];
                }
            }
        }
    }
    let mut out = ComplexMatrix::zeros(d * d);
    for k in 0..d {
        for l in 0..d {
            let slice = ComplexMatrix::from_fn(d, |i, j| stage[(i * d + k, j * d + l)]);
            let image = apply(spec1, &slice)?;
            for i in 0..d {
                for j in 0..d {
                    out[(i * d + k, j * d + l)] = image[(i, j)];
                }
            }
        }
    }
    Ok(out)
}

/// `Σ_ij √(λ_i λ_j) Φ₁(e_ij) ⊗ Φ₂(e_ij)`, summed term by term.
pub fn product_output_generic(
    spec1: &ChannelSpec,
    spec2: &ChannelSpec,
    lambda: &SimplexPoint,
) -> Result<ComplexMatrix> {
    if spec1.d != spec2.d {
        return Err(Error::DimensionMismatch {
            expected: spec1.d,
            actual: spec2.d,
        });
    }
    let d = spec1.d;
    check_lambda(d, lambda)?;
    let w = lambda.weights();
    let mut out = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let amp = (w[i] * w[j]).sqrt();
            if amp == 0.0 {
                continue;
            }
            let e = ComplexMatrix::unit(d, i, j);
            out += &kron(&apply(spec1, &e)?, &apply(spec2, &e)?).scale(amp);
        }
    }
    Ok(out)
}

/// `η_ij = t(1−t)(λ_i + λ_j)/d + ((1−t)/d)²` for ordered pairs `i ≠ j`. Defined for any `t`.
pub fn eta_values(t: f64, d: usize, lambda: &SimplexPoint) -> Vec<f64> {
    let df = d as f64;
    let w = lambda.weights();
    let noise = ((1.0 - t) / df).powi(2);
    let mut out = Vec::with_capacity(d * (d - 1));
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(t * (1.0 - t) * (w[i] + w[j]) / df + noise);
            }
        }
    }
    out
}

/// `Σ_{i≠j} η_ij` over the `d(d−1)` ordered pairs: `(d−1)(1−t²)/d`, independent of `λ`.
pub fn eta_sum(t: f64, d: usize) -> f64 {
    let df = d as f64;
    (df - 1.0) * (1.0 - t * t) / df
}

/// `X̂(λ) = t² |√λ⟩⟨√λ| + (2t(1−t)/d) diag(λ) + ((1−t)/d)² 𝟙`.
pub fn restricted_block(t: f64, d: usize, lambda: &SimplexPoint) -> ComplexMatrix {
    let df = d as f64;
    let w = lambda.weights();
    let noise = ((1.0 - t) / df).powi(2);
    ComplexMatrix::from_fn(d, |i, j| {
        let mut v = t * t * (w[i] * w[j]).sqrt();
        if i == j {
            v += 2.0 * t * (1.0 - t) / df * w[i] + noise;
        }
        Complex64::new(v, 0.0)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropySplit {
    /// `−Σ_{i≠j} η_ij ln η_ij`.
    pub s1: f64,
    /// Entropy contribution of the spectrum of `X̂(λ)`.
    pub s2: f64,
    pub total: f64,
}

/// Entropy of `X(λ)` split into the off-diagonal and block contributions, in nats.
pub fn entropy_split(t: f64, d: usize, lambda: &SimplexPoint) -> Result<EntropySplit> {
    ensure_tdep_cp(t, d)?;
    check_lambda(d, lambda)?;
    let s1 = entropy_contribution(&eta_values(t, d, lambda))?;
    let block = hermitian_spectrum(&restricted_block(t, d, lambda), false)?.spectrum;
    let s2 = entropy_contribution(block.values())?;
    Ok(EntropySplit {
        s1,
        s2,
        total: s1 + s2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NsdCheck {
    /// The criterion is only meaningful for `t < 0`.
    pub applicable: bool,
    pub holds: bool,
    /// Largest eigenvalue of `X̂(λ) − ((1−t)/d)² 𝟙`.
    pub max_shifted_eigenvalue: f64,
}

pub const NSD_TOL: f64 = 1e-12;

/// Negative semidefiniteness of the shifted block `X̂(λ) − ((1−t)/d)² 𝟙`.
/// For `t ≥ 0` the check is reported as not applicable and passing.
pub fn nsd_criterion(t: f64, d: usize, lambda: &SimplexPoint) -> Result<NsdCheck> {
    nsd_criterion_with_tol(t, d, lambda, NSD_TOL)
}

pub fn nsd_criterion_with_tol(
    t: f64,
    d: usize,
    lambda: &SimplexPoint,
    tol: f64,
) -> Result<NsdCheck> {
    check_lambda(d, lambda)?;
    let max = max_shifted_block_eigenvalue(t, d, lambda)?;
    let applicable = t < 0.0;
    Ok(NsdCheck {
        applicable,
        holds: !applicable || max <= tol,
        max_shifted_eigenvalue: max,
    })
}

pub fn max_shifted_block_eigenvalue(t: f64, d: usize, lambda: &SimplexPoint) -> Result<f64> {
    let noise = ((1.0 - t) / d as f64).powi(2);
    let mut shifted = restricted_block(t, d, lambda);
    for i in 0..d {
        shifted[(i, i)] -= Complex64::new(noise, 0.0);
    }
    Ok(eigenvalues(&shifted)?.max())
}

/// `t(2 + (d−2)t)/d`: the single nonzero eigenvalue of the shifted block at a vertex.
pub fn vertex_shifted_eigenvalue(t: f64, d: usize) -> f64 {
    let df = d as f64;
    t * (2.0 + (df - 2.0) * t) / df
}

/// `−2/(d²−2)`: below this value the shifted block stops being negative semidefinite
/// at the uniform point.
pub fn nsd_threshold(d: usize) -> f64 {
    let df = d as f64;
    -2.0 / (df * df - 2.0)
}

/// `Λ_t` on `C^d`.
pub fn tdep(d: usize, t: f64) -> ChannelSpec {
    ChannelSpec::new(Family::TransposeDepolarising, d, t)
}
