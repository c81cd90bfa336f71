//! Invariant projectors and the commutant test for the two SU(d) output
//! representations: identical (`U ↦ U`) and conjugate (`U ↦ Ū`).
//!
//! A channel is invariant iff its Choi matrix commutes with `Ū ⊗ α_out(U)` for
//! all `U`, which in both cases here is a two-block, multiplicity-free
//! representation. The invariant Choi matrices are then exactly the linear
//! combinations `Σ c_k P_k` of the block projectors.

use serde::Serialize;

use crate::channel::{choi, ChannelSpec, ChoiMatrix};
use crate::matrix::{kron, ComplexMatrix};
use crate::random::{haar_unitary, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// `α_out(U) = U`: the depolarising channels.
    Identical,
    /// `α_out(U) = Ū`: the transpose depolarising channels.
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepCase {
    pub rep: Representation,
    pub d: usize,
}

impl RepCase {
    pub fn identical(d: usize) -> Self {
        assert!(d >= 2, "representation dimension must be at least 2");
        Self {
            rep: Representation::Identical,
            d,
        }
    }

    pub fn conjugate(d: usize) -> Self {
        assert!(d >= 2, "representation dimension must be at least 2");
        Self {
            rep: Representation::Conjugate,
            d,
        }
    }

    /// `K(U) = Ū ⊗ α_out(U)`.
    pub fn twirl_operator(&self, u: &ComplexMatrix) -> ComplexMatrix {
        let ubar = u.conj();
        match self.rep {
            Representation::Identical => kron(&ubar, u),
            Representation::Conjugate => kron(&ubar, &ubar),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProjectorSet {
    pub case: RepCase,
    /// `[P, P⊥]` for the identical case, `[P_s, P_a]` for the conjugate case.
    pub projectors: Vec<ComplexMatrix>,
    pub ranks: Vec<usize>,
}

pub fn invariant_projectors(case: RepCase) -> ProjectorSet {
    let d = case.d;
    let identity = ComplexMatrix::identity(d * d);
    match case.rep {
        Representation::Identical => {
            let p = ComplexMatrix::max_entangled_projector(d);
            let perp = &identity - &p;
            ProjectorSet {
                case,
                projectors: vec![p, perp],
                ranks: vec![1, d * d - 1],
            }
        }
        Representation::Conjugate => {
            let f = ComplexMatrix::swap(d);
            let sym = (&identity + &f).scale(0.5);
            let anti = (&identity - &f).scale(0.5);
            ProjectorSet {
                case,
                projectors: vec![sym, anti],
                ranks: vec![d * (d + 1) / 2, d * (d - 1) / 2],
            }
        }
    }
}

/// Largest `‖[C, K(U)]‖_F` over `n_samples` Haar-random `U ∈ SU(d)`.
pub fn verify_invariance(c: &ChoiMatrix, case: RepCase, n_samples: usize, seed: u64) -> f64 {
    assert_eq!(
        c.d, case.d,
        "choi matrix and representation dimensions differ"
    );
    let mut rng = stream(seed, 0);
    (0..n_samples)
        .map(|_| {
            let u = haar_unitary(case.d, &mut rng);
            c.matrix
                .commutator(&case.twirl_operator(&u))
                .frobenius_norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectorDecomposition {
    pub coefficients: Vec<f64>,
    /// `‖C − Σ c_k P_k‖_F`.
    pub residual: f64,
}

/// Coefficients `c_k = Tr(C P_k) / rank P_k` of the projection onto the invariant span.
pub fn choi_projector_decomposition(c: &ChoiMatrix, case: RepCase) -> ProjectorDecomposition {
    let set = invariant_projectors(case);
    let mut reconstruction = ComplexMatrix::zeros(c.matrix.dim());
    let coefficients: Vec<f64> = set
        .projectors
        .iter()
        .zip(&set.ranks)
        .map(|(p, &rank)| {
            let ck = c.matrix.matmul(p).trace().re / rank as f64;
            reconstruction += &p.scale(ck);
            ck
        })
        .collect();
    ProjectorDecomposition {
        coefficients,
        residual: (&c.matrix - &reconstruction).frobenius_norm(),
    }
}

/// The channels whose Choi matrices are the normalized projectors `(d / rank P_k) P_k`.
pub fn extreme_channels(case: RepCase) -> Vec<ChannelSpec> {
    let d = case.d as f64;
    match case.rep {
        Representation::Identical => vec![
            ChannelSpec::depolarising(case.d, 1.0),
            ChannelSpec::depolarising(case.d, -1.0 / (d * d - 1.0)),
        ],
        Representation::Conjugate => vec![
            ChannelSpec::transpose_depolarising(case.d, 1.0 / (d + 1.0)),
            ChannelSpec::transpose_depolarising(case.d, -1.0 / (d - 1.0)),
        ],
    }
}

/// At `d = 2` the conjugate representation is equivalent to the identical one via
/// `Y = [[0, 1], [-1, 0]]`, mapping `Λ_t` onto `Δ_{-t}`. Returns
/// `‖(𝟙⊗Y) C(Λ_t) (𝟙⊗Y)† − C(Δ_{−t})‖_F`.
pub fn d2_family_equivalence(t: f64) -> f64 {
    let y = ComplexMatrix::from_real(2, &[0.0, 1.0, -1.0, 0.0]).expect("2x2");
    let w = kron(&ComplexMatrix::identity(2), &y);
    let rotated = choi(&ChannelSpec::transpose_depolarising(2, t))
        .matrix
        .conjugate_by(&w);
    (&rotated - &choi(&ChannelSpec::depolarising(2, -t)).matrix).frobenius_norm()
}
