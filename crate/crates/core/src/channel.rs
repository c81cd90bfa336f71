//! The trace map, the depolarising family `Δ_t(A) = tA + (1-t)τ(A)` and the
//! transpose depolarising family `Λ_t(A) = tAᵀ + (1-t)τ(A)`, with their Choi
//! matrices and the CP / TP / PPT predicates.
//!
//! Choi matrices are ordered as (input copy ⊗ output): `C(Φ) = Σ_ij e_ij ⊗ Φ(e_ij)`.
//! The basis conjugation `J` (with `J e_i = e_i`) is trivial in the computational
//! basis, so the first factor carries plain matrix units. Transposes are taken in
//! the computational basis as well.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{eigenvalues, hermitian_spectrum};
use crate::error::{Error, Result};
use crate::matrix::{kron, partial_trace, partial_transpose, ComplexMatrix, Subsystem};
use crate::random::{random_pure_state, stream};
use crate::spectrum::{von_neumann_entropy, LogBase, Spectrum};

/// Slack used when testing whether `t` lies in a closed parameter interval.
pub const RANGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Trace,
    Depolarising,
    TransposeDepolarising,
}

impl Family {
    pub fn short_name(self) -> &'static str {
        match self {
            Family::Trace => "trace",
            Family::Depolarising => "dep",
            Family::TransposeDepolarising => "tdep",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" => Ok(Family::Trace),
            "dep" | "depolarising" => Ok(Family::Depolarising),
            "tdep" | "transpose-depolarising" => Ok(Family::TransposeDepolarising),
            other => Err(Error::InvalidArgument(format!(
                "unknown channel family {other:?}"
            ))),
        }
    }
}

/// Closed parameter interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo - RANGE_TOL && t <= self.hi + RANGE_TOL
    }
}

/// Channel family, dimension and parameter. Specs outside the CP range are
/// representable; the predicates classify them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub family: Family,
    pub d: usize,
    pub t: f64,
}

impl ChannelSpec {
    pub fn trace_map(d: usize) -> Self {
        Self {
            family: Family::Trace,
            d,
            t: 0.0,
        }
    }

    pub fn depolarising(d: usize, t: f64) -> Self {
        Self {
            family: Family::Depolarising,
            d,
            t,
        }
    }

    pub fn transpose_depolarising(d: usize, t: f64) -> Self {
        Self {
            family: Family::TransposeDepolarising,
            d,
            t,
        }
    }

    pub fn new(family: Family, d: usize, t: f64) -> Self {
        match family {
            Family::Trace => Self::trace_map(d),
            _ => Self { family, d, t },
        }
    }

    /// Weight on the identity / transpose part; zero for the trace map.
    pub fn weight(&self) -> f64 {
        match self.family {
            Family::Trace => 0.0,
            _ => self.t,
        }
    }

    pub fn cp_range(&self) -> Interval {
        cp_range(self.family, self.d)
    }

    pub fn is_cp_parameter(&self) -> bool {
        self.cp_range().contains(self.weight())
    }

    pub fn ensure_cp(&self) -> Result<()> {
        let range = self.cp_range();
        if !range.contains(self.weight()) {
            return Err(Error::NotCp {
                t: self.t,
                lo: range.lo,
                hi: range.hi,
            });
        }
        Ok(())
    }
}

/// Parameter interval on which the family is completely positive.
pub fn cp_range(family: Family, d: usize) -> Interval {
    let df = d as f64;
    match family {
        Family::Trace => Interval { lo: 0.0, hi: 0.0 },
        Family::Depolarising => Interval {
            lo: -1.0 / (df * df - 1.0),
            hi: 1.0,
        },
        Family::TransposeDepolarising => Interval {
            lo: -1.0 / (df - 1.0),
            hi: 1.0 / (df + 1.0),
        },
    }
}

fn check_dim(expected: usize, m: &ComplexMatrix) -> Result<()> {
    if m.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: m.dim(),
        });
    }
    Ok(())
}

/// Applies the channel to an arbitrary `d × d` matrix.
pub fn apply(spec: &ChannelSpec, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(spec.d, a)?;
    let t = spec.weight();
    let d = spec.d as f64;
    let noise = a.trace() * ((1.0 - t) / d);
    let mut out = match spec.family {
        Family::Trace => ComplexMatrix::zeros(spec.d),
        Family::Depolarising => a.scale(t),
        Family::TransposeDepolarising => a.transpose().scale(t),
    };
    for i in 0..spec.d {
        out[(i, i)] += noise;
    }
    Ok(out)
}

/// Choi matrix `C(Φ)` with `Tr₂ C = 𝟙` for trace-preserving maps.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    /// Dimension of each tensor factor.
    pub d: usize,
}

impl ChoiMatrix {
    pub fn new(matrix: ComplexMatrix, d: usize) -> Result<Self> {
        check_dim(d * d, &matrix)?;
        Ok(Self { matrix, d })
    }
}

/// `C(Φ) = Σ_ij e_ij ⊗ Φ(e_ij)`, assembled by applying the channel to matrix units.
pub fn choi(spec: &ChannelSpec) -> ChoiMatrix {
    let d = spec.d;
    let mut c = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let image =
                apply(spec, &ComplexMatrix::unit(d, i, j)).expect("matrix unit has dimension d");
            for k in 0..d {
                for l in 0..d {
                    c[(i * d + k, j * d + l)] = image[(k, l)];
                }
            }
        }
    }
    ChoiMatrix { matrix: c, d }
}

/// Inverse of [`choi`]: `Φ(A) = Tr₁[(Aᵀ ⊗ 𝟙) C]`.
pub fn apply_from_choi(c: &ChoiMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(c.d, a)?;
    let lifted = kron(&a.transpose(), &ComplexMatrix::identity(c.d));
    partial_trace(&lifted.matmul(&c.matrix), c.d, c.d, Subsystem::First)
}

/// Outcome of a positivity test with the eigenvalue that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityCheck {
    pub holds: bool,
    pub min_eigenvalue: f64,
}

/// Choi's criterion: completely positive iff `C(Φ) ≥ 0`.
pub fn is_cp(c: &ChoiMatrix, tol: f64) -> Result<PositivityCheck> {
    let min_eigenvalue = eigenvalues(&c.matrix)?.min();
    Ok(PositivityCheck {
        holds: min_eigenvalue >= -tol,
        min_eigenvalue,
    })
}

/// Trace preservation: `‖Tr₂ C − 𝟙‖_F ≤ tol`.
pub fn is_tp(c: &ChoiMatrix, tol: f64) -> bool {
    let reduced =
        partial_trace(&c.matrix, c.d, c.d, Subsystem::Second).expect("choi matrix is d² × d²");
    (&reduced - &ComplexMatrix::identity(c.d)).frobenius_norm() <= tol
}

/// Positivity of the partial transpose (on the output factor) of the Choi matrix.
pub fn is_ppt(c: &ChoiMatrix, tol: f64) -> Result<PositivityCheck> {
    c.matrix.ensure_hermitian(crate::eigen::HERMITIAN_TOL)?;
    let pt = partial_transpose(&c.matrix, c.d, c.d, Subsystem::Second)?;
    let min_eigenvalue = eigenvalues(&pt)?.min();
    Ok(PositivityCheck {
        holds: min_eigenvalue >= -tol,
        min_eigenvalue,
    })
}

/// Minimal output entropy of a single covariant channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleMinEntropy {
    /// In nats.
    pub entropy: f64,
    /// Output spectrum for any pure input.
    pub spectrum: Spectrum,
    /// Number of random pure inputs used to confirm input independence.
    pub cross_checked: usize,
    /// Largest deviation of a cross-check output entropy from `entropy`.
    pub cross_check_deviation: f64,
}

pub const DEFAULT_CROSS_CHECKS: usize = 200;

/// Output spectrum of a pure input: `{t + (1-t)/d}` and `(1-t)/d` with multiplicity `d-1`.
pub fn pure_output_spectrum(spec: &ChannelSpec) -> Spectrum {
    let t = spec.weight();
    let d = spec.d as f64;
    let base = (1.0 - t) / d;
    let mut values = vec![base; spec.d];
    values[0] = t + base;
    Spectrum::new(values)
}

/// Minimal output entropy with the default 200-input cross-check (seed 0).
pub fn s_min_single(spec: &ChannelSpec) -> Result<SingleMinEntropy> {
    s_min_single_with(spec, DEFAULT_CROSS_CHECKS, 0)
}

pub fn s_min_single_with(
    spec: &ChannelSpec,
    cross_checks: usize,
    seed: u64,
) -> Result<SingleMinEntropy> {
    spec.ensure_cp()?;
    let spectrum = pure_output_spectrum(spec);
    let entropy = von_neumann_entropy(&spectrum, LogBase::Natural)?;

    let mut rng = stream(seed, 0);
    let mut deviation = 0.0_f64;
    for _ in 0..cross_checks {
        let psi = random_pure_state(spec.d, &mut rng);
        let out = apply(spec, &ComplexMatrix::outer(&psi, &psi))?;
        let s = von_neumann_entropy(&hermitian_spectrum(&out, false)?.spectrum, LogBase::Natural)?;
        deviation = deviation.max((s - entropy).abs());
    }
    Ok(SingleMinEntropy {
        entropy,
        spectrum,
        cross_checked: cross_checks,
        cross_check_deviation: deviation,
    })
}

/// Holevo capacity `ln d − S_min` of an invariant channel with irreducible output representation.
pub fn holevo_capacity_invariant(spec: &ChannelSpec) -> Result<f64> {
    let s = s_min_single_with(spec, 0, 0)?;
    Ok((spec.d as f64).ln() - s.entropy)
}

/// Closed forms `C(Δ_t) = t d P + ((1-t)/d) 𝟙` and `C(Λ_t) = t F + ((1-t)/d) 𝟙`.
pub fn choi_closed_form(spec: &ChannelSpec) -> ChoiMatrix {
    let d = spec.d;
    let t = spec.weight();
    let df = d as f64;
    let structured = match spec.family {
        Family::Trace => ComplexMatrix::zeros(d * d),
        Family::Depolarising => ComplexMatrix::max_entangled_projector(d).scale(t * df),
        Family::TransposeDepolarising => ComplexMatrix::swap(d).scale(t),
    };
    let mut m = structured;
    for i in 0..d * d {
        m[(i, i)] += Complex64::new((1.0 - t) / df, 0.0);
    }
    ChoiMatrix { matrix: m, d }
}
