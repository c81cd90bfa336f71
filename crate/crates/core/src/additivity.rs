//! Additivity of minimal output entropy for `Λ_t ⊗ Λ_t`.
//!
//! By covariance the product output entropy depends only on the Schmidt weights
//! `λ` of the input, so `S_min(Λ_t ⊗ Λ_t)` is the minimum of
//! `λ ↦ S(X(λ))` over the probability simplex. Additivity holds iff that minimum
//! is attained at a vertex, where it equals `2 S_min(Λ_t)`.
//!
//! Parallel branches (multistart runs, conjecture pairs, pure-state samples,
//! sweep rows) draw from generators derived from `(seed, branch index)` and are
//! reduced in index order, so results are bit-identical across runs and thread
//! counts.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{
    choi, cp_range, is_cp, is_ppt, s_min_single_with, ChannelSpec, Family, RANGE_TOL,
};
use crate::eigen::eigenvalues;
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::product::{
    apply_product, entropy_split, max_shifted_block_eigenvalue, nsd_threshold, output_spectrum,
    tdep,
};
use crate::random::{random_pure_state, random_simplex, stream};
use crate::simplex::SimplexPoint;
use crate::spectrum::{more_mixed, von_neumann_entropy, LogBase, MajorizationRelation, Spectrum};

/// `|gap|` below which additivity is declared, in nats.
pub const ADDITIVITY_TOL: f64 = 1e-7;
/// Weight above which an optimizer iterate is snapped to the vertex.
pub const VERTEX_SNAP: f64 = 1e-9;
/// Prefix-sum slack in the majorization conjecture test.
pub const MM_TOL: f64 = 1e-11;

const NSD_STREAM: u64 = 1 << 40;

/// The PPT interval `R₁ = [−1/(d²−1), 1/(d+1)]` on which `Λ_t` is entanglement breaking.
pub fn ppt_range(d: usize) -> crate::channel::Interval {
    let df = d as f64;
    crate::channel::Interval {
        lo: -1.0 / (df * df - 1.0),
        hi: 1.0 / (df + 1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// `t ∈ R₁`: the Choi state is PPT, hence separable and the channel entanglement breaking.
    PptEntanglementBreaking,
    /// `−2/(d²−2) ≤ t < −1/(d²−1)`: the shifted block is negative semidefinite.
    NsdCriterion,
    /// No analytic argument covers `t`; the report is numerical evidence only.
    NumericalOnly,
}

impl Certificate {
    pub fn for_parameter(t: f64, d: usize) -> Self {
        if ppt_range(d).contains(t) {
            Certificate::PptEntanglementBreaking
        } else if t >= nsd_threshold(d) - RANGE_TOL && t < ppt_range(d).lo {
            Certificate::NsdCriterion
        } else {
            Certificate::NumericalOnly
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::PptEntanglementBreaking => "ppt-entanglement-breaking",
            Certificate::NsdCriterion => "nsd-criterion",
            Certificate::NumericalOnly => "numerical-only",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AdditiveWithinTol,
    ViolationCandidate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AdditiveWithinTol => "additive-within-tol",
            Verdict::ViolationCandidate => "violation-candidate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexMinimum {
    pub lambda: SimplexPoint,
    pub value: f64,
    /// Total number of starting points, fixed plus random.
    pub n_starts: usize,
}

/// Deterministic start points: the `d` vertices, the uniform point and every edge midpoint.
pub fn fixed_starts(d: usize) -> Vec<SimplexPoint> {
    let mut starts: Vec<SimplexPoint> = (0..d).map(|k| SimplexPoint::vertex(d, k)).collect();
    starts.push(SimplexPoint::uniform(d));
    for i in 0..d {
        for j in i + 1..d {
            starts.push(SimplexPoint::edge_midpoint(d, i, j));
        }
    }
    starts
}

fn softmax(logits: &[f64]) -> SimplexPoint {
    // the last logit is pinned at zero
    let max = logits.iter().copied().fold(0.0, f64::max);
    let mut w: Vec<f64> = logits.iter().map(|x| (x - max).exp()).collect();
    w.push((-max).exp());
    SimplexPoint::normalized(w).expect("softmax weights are positive")
}

fn logits_of(lambda: &SimplexPoint) -> Vec<f64> {
    const FLOOR: f64 = 1e-12;
    let w = lambda.weights();
    let last = w[w.len() - 1].max(FLOOR).ln();
    w[..w.len() - 1]
        .iter()
        .map(|x| x.max(FLOOR).ln() - last)
        .collect()
}

/// Local refinement from one start. Returns the better of the start and the refined point.
fn refine(t: f64, d: usize, start: SimplexPoint) -> Result<(SimplexPoint, f64)> {
    let start_value = entropy_split(t, d, &start)?.total;
    if start.near_vertex(VERTEX_SNAP).is_some() {
        return Ok((start, start_value));
    }

    let objective = |x: &[f64]| entropy_split(t, d, &softmax(x)).map_or(f64::INFINITY, |s| s.total);
    let result = nelder_mead(
        objective,
        &logits_of(&start),
        NelderMeadOptions::default(),
        |x| softmax(x).near_vertex(VERTEX_SNAP).is_some(),
    );

    let mut candidate = softmax(&result.x);
    let mut value = result.value;
    if let Some(k) = candidate.near_vertex(VERTEX_SNAP) {
        candidate = SimplexPoint::vertex(d, k);
        value = entropy_split(t, d, &candidate)?.total;
    }
    Ok(if value < start_value {
        (candidate, value)
    } else {
        (start, start_value)
    })
}

/// Minimizes `λ ↦ S(X(λ))` over the simplex by multistart Nelder–Mead in softmax coordinates.
pub fn minimize_over_simplex(
    t: f64,
    d: usize,
    n_starts: usize,
    seed: u64,
) -> Result<SimplexMinimum> {
    tdep(d, t).ensure_cp()?;
    let mut starts = fixed_starts(d);
    let n_random = n_starts.saturating_sub(starts.len());
    starts.extend((0..n_random).map(|k| random_simplex(d, &mut stream(seed, k as u64))));
    let total = starts.len();

    let results: Vec<(SimplexPoint, f64)> = starts
        .into_par_iter()
        .map(|s| refine(t, d, s))
        .collect::<Result<_>>()?;

    let (lambda, value) = results
        .into_iter()
        .reduce(|best, next| if next.1 < best.1 { next } else { best })
        .expect("at least one start");
    Ok(SimplexMinimum {
        lambda,
        value,
        n_starts: total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditivityOptions {
    pub n_starts: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for AdditivityOptions {
    fn default() -> Self {
        Self {
            n_starts: 50,
            seed: 0,
            tol: ADDITIVITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub d: usize,
    pub t: f64,
    pub s_min_single: f64,
    pub best_lambda: SimplexPoint,
    pub s_min_product: f64,
    /// `s_min_product − 2 s_min_single`.
    pub gap: f64,
    pub n_starts: usize,
    pub seed: u64,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

pub fn additivity_report(t: f64, d: usize, opts: &AdditivityOptions) -> Result<AdditivityReport> {
    let single = s_min_single_with(&tdep(d, t), 0, opts.seed)?;
    let min = minimize_over_simplex(t, d, opts.n_starts, opts.seed)?;
    let gap = min.value - 2.0 * single.entropy;
    Ok(AdditivityReport {
        d,
        t,
        s_min_single: single.entropy,
        best_lambda: min.lambda,
        s_min_product: min.value,
        gap,
        n_starts: min.n_starts,
        seed: opts.seed,
        verdict: if gap.abs() < opts.tol {
            Verdict::AdditiveWithinTol
        } else {
            Verdict::ViolationCandidate
        },
        certificate: Certificate::for_parameter(t, d),
    })
}

/// One failure of `λ′ ≻ λ ⇒ X(λ′) ≻ X(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MmCounterexample {
    /// Branch index; `mixing_pair(seed, pair_index, d)` regenerates the pair.
    pub pair_index: u64,
    pub lambda: SimplexPoint,
    pub lambda_prime: SimplexPoint,
    /// First prefix (0-based) where the spectrum of `X(λ′)` exceeds that of `X(λ)`.
    pub prefix_index: usize,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MmVerdict {
    pub d: usize,
    pub t: f64,
    pub seed: u64,
    pub n_pairs: usize,
    pub counterexamples: Vec<MmCounterexample>,
    pub pass: bool,
}

/// Applies `x_i, x_j ← s x_i + (1−s) x_j, (1−s) x_i + s x_j`.
pub fn t_transform(lambda: &SimplexPoint, i: usize, j: usize, s: f64) -> SimplexPoint {
    let mut w = lambda.weights().to_vec();
    let (a, b) = (w[i], w[j]);
    w[i] = s * a + (1.0 - s) * b;
    w[j] = (1.0 - s) * a + s * b;
    SimplexPoint::new(w).expect("T-transforms preserve the simplex")
}

/// Pair `(λ, λ′)` with `λ ~ Dirichlet` and `λ′` obtained from `λ` by between 1 and
/// `3d` random T-transforms, so that `λ′ ≻ λ`.
pub fn mixing_pair(seed: u64, pair_index: u64, d: usize) -> (SimplexPoint, SimplexPoint) {
    use rand::Rng;
    let mut rng = stream(seed, pair_index);
    let lambda = random_simplex(d, &mut rng);
    let mut mixed = lambda.clone();
    if d >= 2 {
        let count = rng.random_range(1..=3 * d);
        for _ in 0..count {
            let i = rng.random_range(0..d);
            let j = (i + rng.random_range(1..d)) % d;
            let s: f64 = rng.random();
            mixed = t_transform(&mixed, i, j, s);
        }
    }
    (lambda, mixed)
}

/// Checks the majorization monotonicity of `λ ↦ spectrum X(λ)` on `n_pairs` random pairs.
pub fn mm_test(t: f64, d: usize, n_pairs: usize, seed: u64) -> Result<MmVerdict> {
    tdep(d, t).ensure_cp()?;
    let outcomes: Vec<Option<MmCounterexample>> = (0..n_pairs as u64)
        .into_par_iter()
        .map(|k| {
            let (lambda, lambda_prime) = mixing_pair(seed, k, d);
            check_pair(t, d, k, lambda, lambda_prime)
        })
        .collect::<Result<_>>()?;
    let counterexamples: Vec<MmCounterexample> = outcomes.into_iter().flatten().collect();
    Ok(MmVerdict {
        d,
        t,
        seed,
        n_pairs,
        pass: counterexamples.is_empty(),
        counterexamples,
    })
}

/// `Ok(None)` when `X(λ′) ≻ X(λ)` holds for the pair.
pub fn check_pair(
    t: f64,
    d: usize,
    pair_index: u64,
    lambda: SimplexPoint,
    lambda_prime: SimplexPoint,
) -> Result<Option<MmCounterexample>> {
    let out = output_spectrum(t, d, &lambda)?;
    let out_prime = output_spectrum(t, d, &lambda_prime)?;
    let verdict = more_mixed(&out_prime, &out, MM_TOL)?;
    Ok(match verdict.relation {
        MajorizationRelation::FirstMoreMixed | MajorizationRelation::Equal => None,
        _ => {
            let k = verdict
                .first_violation
                .expect("a failed relation has a violating prefix");
            let excess = out_prime.prefix_sums()[k] - out.prefix_sums()[k];
            Some(MmCounterexample {
                pair_index,
                lambda,
                lambda_prime,
                prefix_index: k,
                excess,
            })
        }
    })
}

/// Entropy of `(Λ_t ⊗ Λ_t)(|ψ⟩⟨ψ|)` for a pure state `ψ` on `C^d ⊗ C^d`.
pub fn product_entropy_of_pure_state(
    t: f64,
    d: usize,
    psi: &[num_complex::Complex64],
) -> Result<f64> {
    let spec = tdep(d, t);
    let out = apply_product(&spec, &spec, &ComplexMatrix::outer(psi, psi))?;
    von_neumann_entropy(&eigenvalues(&out)?, LogBase::Natural)
}

/// Minimum product output entropy over `n` Haar-random pure inputs; `+∞` when `n = 0`.
pub fn pure_state_scan(t: f64, d: usize, n: usize, seed: u64) -> Result<f64> {
    tdep(d, t).ensure_cp()?;
    let values: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|k| {
            let psi = random_pure_state(d * d, &mut stream(seed, k));
            product_entropy_of_pure_state(t, d, &psi)
        })
        .collect::<Result<_>>()?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

/// Position of `t` relative to the analytic thresholds for `Λ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// `−1/(d−1) ≤ t < −2/(d²−2)`: additivity not covered by an analytic argument.
    Missing,
    NsdBoundary,
    Nsd,
    PptBoundary,
    Ppt,
    OutOfRange,
}

impl Region {
    pub fn classify(t: f64, d: usize) -> Self {
        let near = |a: f64| (t - a).abs() <= RANGE_TOL;
        let r1 = ppt_range(d);
        let nsd = nsd_threshold(d);
        if !cp_range(Family::TransposeDepolarising, d).contains(t) {
            Region::OutOfRange
        } else if near(nsd) {
            Region::NsdBoundary
        } else if near(r1.lo) || near(r1.hi) {
            Region::PptBoundary
        } else if r1.contains(t) {
            Region::Ppt
        } else if t > nsd {
            Region::Nsd
        } else {
            Region::Missing
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Missing => "missing",
            Region::NsdBoundary => "nsd-boundary",
            Region::Nsd => "nsd",
            Region::PptBoundary => "ppt-boundary",
            Region::Ppt => "ppt",
            Region::OutOfRange => "out-of-range",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub n_starts: usize,
    /// Random simplex points probed for the worst shifted block eigenvalue.
    pub n_lambda: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            n_starts: 50,
            n_lambda: 200,
            seed: 0,
            tol: ADDITIVITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub d: usize,
    pub t: f64,
    pub region: Region,
    pub cp: bool,
    pub cp_min_eig: f64,
    pub ppt_min_eig: f64,
    /// Largest shifted block eigenvalue over the probed `λ` (vertices, uniform, random).
    pub nsd_max_shifted: f64,
    /// `None` when `t` is outside the CP range.
    pub gap: Option<f64>,
    pub certificate: Option<Certificate>,
    pub seed: u64,
}

fn worst_shifted_eigenvalue(t: f64, d: usize, opts: &ScanOptions) -> Result<f64> {
    let mut rng = stream(opts.seed, NSD_STREAM);
    let mut probes = fixed_starts(d);
    probes.extend((0..opts.n_lambda).map(|_| random_simplex(d, &mut rng)));
    probes
        .iter()
        .map(|l| max_shifted_block_eigenvalue(t, d, l))
        .try_fold(f64::NEG_INFINITY, |acc, v| v.map(|v| acc.max(v)))
}

pub fn threshold_row(t: f64, d: usize, opts: &ScanOptions) -> Result<ThresholdRow> {
    let c = choi(&tdep(d, t));
    let cp = is_cp(&c, RANGE_TOL)?;
    let ppt = is_ppt(&c, RANGE_TOL)?;
    let region = Region::classify(t, d);
    let in_range = region != Region::OutOfRange;
    let gap = if in_range {
        let report = additivity_report(
            t,
            d,
            &AdditivityOptions {
                n_starts: opts.n_starts,
                seed: opts.seed,
                tol: opts.tol,
            },
        )?;
        Some(report.gap)
    } else {
        None
    };
    Ok(ThresholdRow {
        d,
        t,
        region,
        cp: in_range,
        cp_min_eig: cp.min_eigenvalue,
        ppt_min_eig: ppt.min_eigenvalue,
        nsd_max_shifted: worst_shifted_eigenvalue(t, d, opts)?,
        gap,
        certificate: in_range.then(|| Certificate::for_parameter(t, d)),
        seed: opts.seed,
    })
}

/// One row per grid point, in grid order. Out-of-range points are flagged, not dropped.
pub fn threshold_scan(d: usize, t_grid: &[f64], opts: &ScanOptions) -> Result<Vec<ThresholdRow>> {
    t_grid
        .par_iter()
        .map(|&t| threshold_row(t, d, opts))
        .collect()
}

/// Output spectrum of `Λ_t ⊗ Λ_t` on the product of two basis states.
pub fn vertex_output_spectrum(t: f64, d: usize) -> Spectrum {
    let single = crate::channel::pure_output_spectrum(&ChannelSpec::transpose_depolarising(d, t));
    let v = single.values();
    Spectrum::new(
        v.iter()
            .flat_map(|a| v.iter().map(move |b| a * b))
            .collect(),
    )
}
