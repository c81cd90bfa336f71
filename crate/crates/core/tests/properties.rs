mod common;

use common::*;
use covchan::additivity::{additivity_report, check_pair, mixing_pair, mm_test, AdditivityOptions};
use covchan::channel::{choi, cp_range, is_cp, is_tp, Family};
use covchan::covariance::{choi_projector_decomposition, invariant_projectors, RepCase};
use covchan::eigen::eigenvalues;
use covchan::product::{nsd_threshold, output_spectrum};
use covchan::random::{random_hermitian, stream};
use covchan::{
    more_mixed, ChannelSpec, ComplexMatrix, MajorizationRelation, SimplexPoint, Spectrum,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partial_transpose_identities(d1 in 1..=4usize, d2 in 1..=4usize, seed in any::<u64>()) {
        check_partial_transpose_identities(d1, d2, seed)?;
    }

    #[test]
    fn spectrum_is_unitarily_invariant(d in 1..=8usize, seed in any::<u64>()) {
        check_unitary_invariance(d, seed)?;
    }

    #[test]
    fn kron_spectrum_is_product_of_spectra(seed in any::<u64>()) {
        check_kron_spectra(seed)?;
    }

    #[test]
    fn eigenvalues_agree_with_nalgebra(d in 1..=8usize, seed in any::<u64>()) {
        let m = random_hermitian(d, &mut stream(seed, 0));
        let ours = eigenvalues(&m).unwrap();
        let reference = DMatrix::from_fn(d, d, |i, j| m[(i, j)]).symmetric_eigenvalues();
        prop_assert!(ours.max_distance(&Spectrum::new(reference.iter().copied().collect())) < 1e-10);
    }

    #[test]
    fn majorization_matches_subset_oracle((a, b) in spectrum_pair()) {
        check_majorization_oracle(&a, &b)?;
    }

    #[test]
    fn closed_form_product_output_matches_generic((d, t, lambda) in tdep_point(5)) {
        check_closed_form_vs_generic(d, t, &lambda)?;
    }

    #[test]
    fn product_spectrum_splits_into_eta_and_block((d, t, lambda) in tdep_point(5)) {
        check_spectrum_decomposition(d, t, &lambda)?;
    }

    #[test]
    fn product_entropy_depends_only_on_schmidt_coefficients(
        (d, t, _) in tdep_point(4),
        seed in any::<u64>(),
    ) {
        check_schmidt_invariance(d, t, seed)?;
    }

    #[test]
    fn off_diagonal_entropy_is_concave(
        (d, t, lambda, mu) in (2..=5usize).prop_flat_map(|d| {
            let r = cp_range(Family::TransposeDepolarising, d);
            (Just(d), r.lo..=r.hi, simplex(d), simplex(d))
        }),
        alpha in 0.0..=1.0f64,
    ) {
        check_s1_concavity(d, t, &lambda, &mu, alpha)?;
    }

    #[test]
    fn choi_partial_transpose_duality(d in 2..=6usize, t in -1.0..=1.0f64) {
        check_choi_duality(d, t)?;
    }

    #[test]
    fn apply_agrees_with_choi_route(spec in any_spec(5)) {
        check_apply_matches_choi(&spec)?;
    }

    #[test]
    fn maps_are_covariant(d in 2..=5usize, t in -1.0..=1.0f64, seed in any::<u64>()) {
        check_map_covariance(d, t, seed)?;
    }

    #[test]
    fn every_choi_matrix_is_trace_preserving(spec in any_spec(6)) {
        prop_assert!(is_tp(&choi(&spec), 1e-12));
    }

    #[test]
    fn invariant_choi_marginal_is_maximally_mixed(spec in any_spec(6)) {
        let c = choi(&spec);
        let marginal = covchan::partial_trace(&c.matrix, spec.d, spec.d, covchan::Subsystem::Second).unwrap();
        let target = ComplexMatrix::identity(spec.d);
        prop_assert!((&marginal - &target).max_abs() < 1e-12);
    }

    #[test]
    fn decomposition_reconstructs_invariant_choi(spec in any_spec(6)) {
        let case = match spec.family {
            Family::TransposeDepolarising => RepCase::conjugate(spec.d),
            _ => RepCase::identical(spec.d),
        };
        prop_assert!(choi_projector_decomposition(&choi(&spec), case).residual < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn entropy_is_schur_concave(d in 2..=6usize, seed in any::<u64>(), index in 0..1000u64) {
        check_schur_concavity(d, seed, index)?;
    }

    #[test]
    fn mixing_pairs_are_comparable(d in 2..=6usize, seed in any::<u64>(), index in any::<u64>()) {
        let (lambda, mixed) = mixing_pair(seed, index, d);
        let v = more_mixed(
            &Spectrum::new(mixed.weights().to_vec()),
            &Spectrum::new(lambda.weights().to_vec()),
            1e-11,
        ).unwrap();
        prop_assert!(matches!(v.relation, MajorizationRelation::FirstMoreMixed | MajorizationRelation::Equal));
    }
}

#[test]
fn cp_predicate_matches_cp_range() {
    for family in [Family::Depolarising, Family::TransposeDepolarising] {
        for d in 2..=6 {
            let r = cp_range(family, d);
            for k in 0..=20 {
                let t = r.lo + (r.hi - r.lo) * k as f64 / 20.0;
                assert!(
                    is_cp(&choi(&ChannelSpec::new(family, d, t)), 1e-12)
                        .unwrap()
                        .holds,
                    "{family} d={d} t={t}"
                );
            }
            for t in [r.lo - 1e-6, r.hi + 1e-6] {
                assert!(
                    !is_cp(&choi(&ChannelSpec::new(family, d, t)), 1e-12)
                        .unwrap()
                        .holds,
                    "{family} d={d} t={t}"
                );
            }
        }
    }
}

#[test]
fn projectors_are_complete_and_orthogonal() {
    for d in 2..=6 {
        for case in [RepCase::identical(d), RepCase::conjugate(d)] {
            let set = invariant_projectors(case);
            let (p, q) = (&set.projectors[0], &set.projectors[1]);
            assert!((&(p + q) - &ComplexMatrix::identity(d * d)).max_abs() < 1e-12);
            assert!((&p.matmul(p) - p).max_abs() < 1e-12);
            assert!((&q.matmul(q) - q).max_abs() < 1e-12);
            assert!(p.matmul(q).max_abs() < 1e-12);
        }
    }
}

#[test]
fn additivity_reports_are_deterministic() {
    let opts = AdditivityOptions {
        n_starts: 12,
        seed: 5,
        ..Default::default()
    };
    for t in [-0.45, -0.2, 0.1] {
        let a = additivity_report(t, 3, &opts).unwrap();
        let b = additivity_report(t, 3, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.s_min_product.to_bits(), b.s_min_product.to_bits());
    }
}

#[test]
fn mixing_to_uniform_raises_top_output_eigenvalue_below_nsd_threshold() {
    let (vertex, uniform) = (SimplexPoint::vertex(3, 0), SimplexPoint::uniform(3));
    let top = |l: &SimplexPoint| output_spectrum(-0.5, 3, l).unwrap().max();
    assert!((top(&vertex) - 0.25).abs() < 1e-14);
    assert!((top(&uniform) - 1.0 / 3.0).abs() < 1e-14);
    assert!(check_pair(-0.5, 3, 0, vertex, uniform).unwrap().is_some());
}

#[test]
fn majorization_monotonicity_holds_from_nsd_threshold_up() {
    for d in [3, 4] {
        let hi = cp_range(Family::TransposeDepolarising, d).hi;
        for k in 0..=4 {
            let t = nsd_threshold(d) + (hi - nsd_threshold(d)) * k as f64 / 4.0;
            let v = mm_test(t, d, 2000, 1).unwrap();
            assert!(v.pass, "d={d} t={t}: {:?}", v.counterexamples.first());
        }
    }
}
