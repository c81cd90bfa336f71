//! Decreasingly ordered spectra, von Neumann entropy and the majorization order.

use serde::Serialize;

use crate::error::{Error, Result};

/// Eigenvalues that may be slightly negative from round-off are clamped to zero
/// inside this window; anything more negative is an error.
pub const NEGATIVITY_TOL: f64 = 1e-8;
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Real eigenvalues sorted in decreasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub(crate) fn from_sorted_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        Self { values }
    }

    /// Union of two spectra as multisets.
    pub fn merge(&self, other: &Spectrum) -> Spectrum {
        let mut v = self.values.clone();
        v.extend_from_slice(&other.values);
        Spectrum::new(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn prefix_sums(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    /// Largest elementwise distance to another spectrum of the same length.
    pub fn max_distance(&self, other: &Spectrum) -> f64 {
        assert_eq!(self.dim(), other.dim(), "spectra of unequal length");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }
}

/// `-Σ p ln p` over the given values with `0 ln 0 = 0`. Values down to
/// `-NEGATIVITY_TOL` are treated as zero. No normalization is required, so this
/// also yields the contribution of a part of a spectrum.
pub fn entropy_contribution(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in values {
        if p < -NEGATIVITY_TOL || p.is_nan() {
            return Err(Error::NegativeEigenvalue(p));
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// Von Neumann entropy of a density-matrix spectrum.
pub fn von_neumann_entropy(s: &Spectrum, base: LogBase) -> Result<f64> {
    if let Some(&p) = s
        .values
        .iter()
        .find(|&&p| p < -NEGATIVITY_TOL || p.is_nan())
    {
        return Err(Error::InvalidSpectrum(format!(
            "eigenvalue {p:e} is negative"
        )));
    }
    let total = s.sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidSpectrum(format!(
            "eigenvalues sum to {total}, not 1"
        )));
    }
    let nats = entropy_contribution(&s.values)?;
    Ok(base.from_nats(nats.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MajorizationRelation {
    FirstMoreMixed,
    SecondMoreMixed,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationVerdict {
    pub relation: MajorizationRelation,
    /// Largest absolute difference between corresponding prefix sums.
    pub max_partial_sum_gap: f64,
    /// First prefix index at which `a` fails to be more mixed than `b`.
    pub first_violation: Option<usize>,
}

/// Compares `a` and `b` in the "more mixed" order: `a ≻ b` when every prefix sum of
/// `a` is at most the corresponding prefix sum of `b` and the totals agree.
pub fn more_mixed(a: &Spectrum, b: &Spectrum, tol: f64) -> Result<MajorizationVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let (ta, tb) = (a.sum(), b.sum());
    if (ta - tb).abs() > tol {
        return Err(Error::TraceMismatch {
            first: ta,
            second: tb,
        });
    }

    let pa = a.prefix_sums();
    let pb = b.prefix_sums();
    let mut first_violation = None;
    let mut b_violated = false;
    let mut gap = 0.0_f64;
    // the final prefix is the trace, already checked above
    for k in 0..pa.len() {
        let diff = pa[k] - pb[k];
        gap = gap.max(diff.abs());
        if diff > tol && first_violation.is_none() {
            first_violation = Some(k);
        }
        if -diff > tol {
            b_violated = true;
        }
    }

    let relation = match (first_violation.is_none(), !b_violated) {
        (true, true) => MajorizationRelation::Equal,
        (true, false) => MajorizationRelation::FirstMoreMixed,
        (false, true) => MajorizationRelation::SecondMoreMixed,
        (false, false) => MajorizationRelation::Incomparable,
    };
    Ok(MajorizationVerdict {
        relation,
        max_partial_sum_gap: gap,
        first_violation,
    })
}
