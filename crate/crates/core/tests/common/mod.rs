#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use covchan::additivity::mixing_pair;
use covchan::channel::{apply, apply_from_choi, choi, cp_range, Family};
use covchan::eigen::eigenvalues;
use covchan::product::{
    entropy_split, output_spectrum, product_output, product_output_generic, tdep,
};
use covchan::random::{haar_unitary, random_hermitian, random_pure_state, random_simplex, stream};
use covchan::{
    kron, more_mixed, partial_trace, partial_transpose, von_neumann_entropy, ChannelSpec,
    ComplexMatrix, LogBase, MajorizationRelation, SimplexPoint, Spectrum, Subsystem,
};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use serde_json::Value;

pub type CheckResult = Result<(), TestCaseError>;

pub fn covchan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covchan"))
        .args(args)
        .output()
        .expect("covchan binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

pub fn load_schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("schema is valid JSON")
}

const SCHEMA_KEYWORDS: [&str; 11] = [
    "$schema",
    "title",
    "type",
    "required",
    "additionalProperties",
    "properties",
    "items",
    "enum",
    "minimum",
    "minItems",
    "maxItems",
];

/// Validates `doc` against the JSON Schema subset used by the shipped schema files.
/// Any keyword outside that subset is reported as an error rather than ignored.
pub fn validate(schema: &Value, doc: &Value) -> Result<(), String> {
    validate_at(schema, doc, "$")
}

fn type_matches(v: &Value, name: &str) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        "boolean" => v.is_boolean(),
        "string" => v.is_string(),
        "null" => v.is_null(),
        _ => false,
    }
}

fn validate_at(schema: &Value, doc: &Value, path: &str) -> Result<(), String> {
    let schema = schema
        .as_object()
        .ok_or_else(|| format!("{path}: schema is not an object"))?;
    if let Some(k) = schema
        .keys()
        .find(|k| !SCHEMA_KEYWORDS.contains(&k.as_str()))
    {
        return Err(format!("{path}: unsupported schema keyword {k}"));
    }
    if let Some(allowed) = schema.get("enum") {
        if !allowed.as_array().is_some_and(|a| a.contains(doc)) {
            return Err(format!("{path}: {doc} not in {allowed}"));
        }
    }
    if let Some(ty) = schema.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{path}: malformed type {ty}")),
        };
        if !names.iter().any(|n| type_matches(doc, n)) {
            return Err(format!("{path}: {doc} is not of type {ty}"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), doc.as_f64()) {
        if x < min {
            return Err(format!("{path}: {x} below minimum {min}"));
        }
    }
    if let Some(obj) = doc.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing required field {key}"));
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (key, value) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => validate_at(sub, value, &format!("{path}.{key}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected field {key}"));
                }
                None => {}
            }
        }
    }
    if let Some(items) = doc.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                return Err(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
            if (items.len() as u64) > max {
                return Err(format!("{path}: more than {max} items"));
            }
        }
        if let Some(sub) = schema.get("items") {
            for (i, item) in items.iter().enumerate() {
                validate_at(sub, item, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

// Strategies

pub fn simplex(d: usize) -> impl Strategy<Value = SimplexPoint> {
    prop_oneof![
        4 => prop::collection::vec(1e-6..1.0f64, d).prop_map(|w| SimplexPoint::normalized(w).unwrap()),
        1 => (0..d).prop_map(move |k| SimplexPoint::vertex(d, k)),
    ]
}

fn tdep_t(d: usize) -> impl Strategy<Value = f64> {
    let r = cp_range(Family::TransposeDepolarising, d);
    r.lo..=r.hi
}

/// `(d, t, λ)` with `t` in the CP range of `Λ_t`.
pub fn tdep_point(max_d: usize) -> impl Strategy<Value = (usize, f64, SimplexPoint)> {
    (2..=max_d).prop_flat_map(|d| (Just(d), tdep_t(d), simplex(d)))
}

pub fn any_family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Trace),
        Just(Family::Depolarising),
        Just(Family::TransposeDepolarising)
    ]
}

/// A channel spec with `t` anywhere in `[−1.5, 1.5]`, CP or not.
pub fn any_spec(max_d: usize) -> impl Strategy<Value = ChannelSpec> {
    (any_family(), 2..=max_d, -1.5..1.5f64).prop_map(|(f, d, t)| ChannelSpec::new(f, d, t))
}

// Property checks shared by the property suites and the acceptance run

fn hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    random_hermitian(dim, &mut stream(seed, 1))
}

pub fn check_partial_transpose_identities(d1: usize, d2: usize, seed: u64) -> CheckResult {
    let m = hermitian(d1 * d2, seed);
    for side in [Subsystem::First, Subsystem::Second] {
        let twice =
            partial_transpose(&partial_transpose(&m, d1, d2, side).unwrap(), d1, d2, side).unwrap();
        prop_assert!((&twice - &m).max_abs() < 1e-15);
    }
    let pt2 = partial_transpose(&m, d1, d2, Subsystem::Second).unwrap();
    let pt1 = partial_transpose(&m, d1, d2, Subsystem::First).unwrap();
    let kept2 = partial_trace(&pt2, d1, d2, Subsystem::First).unwrap();
    let expected2 = partial_trace(&m, d1, d2, Subsystem::First)
        .unwrap()
        .transpose();
    prop_assert!((&kept2 - &expected2).max_abs() < 1e-13);
    let kept1 = partial_trace(&pt1, d1, d2, Subsystem::Second).unwrap();
    let expected1 = partial_trace(&m, d1, d2, Subsystem::Second)
        .unwrap()
        .transpose();
    prop_assert!((&kept1 - &expected1).max_abs() < 1e-13);
    let traced = partial_trace(&pt2, d1, d2, Subsystem::Second).unwrap();
    let plain = partial_trace(&m, d1, d2, Subsystem::Second).unwrap();
    prop_assert!((&traced - &plain).max_abs() < 1e-13);
    Ok(())
}

pub fn check_unitary_invariance(d: usize, seed: u64) -> CheckResult {
    let m = hermitian(d, seed);
    let u = haar_unitary(d, &mut stream(seed, 2));
    let a = eigenvalues(&m).unwrap();
    let b = eigenvalues(&m.conjugate_by(&u)).unwrap();
    prop_assert!(a.max_distance(&b) < 1e-10, "{:?} vs {:?}", a, b);
    Ok(())
}

pub fn check_schur_concavity(d: usize, seed: u64, index: u64) -> CheckResult {
    let (lambda, mixed) = mixing_pair(seed, index, d);
    let (a, b) = (
        Spectrum::new(mixed.weights().to_vec()),
        Spectrum::new(lambda.weights().to_vec()),
    );
    let verdict = more_mixed(&a, &b, 1e-12).unwrap();
    prop_assert!(matches!(
        verdict.relation,
        MajorizationRelation::FirstMoreMixed | MajorizationRelation::Equal
    ));
    let ha = von_neumann_entropy(&a, LogBase::Natural).unwrap();
    let hb = von_neumann_entropy(&b, LogBase::Natural).unwrap();
    prop_assert!(ha >= hb - 1e-12, "{ha} < {hb}");
    Ok(())
}

pub fn check_kron_spectra(seed: u64) -> CheckResult {
    let a = hermitian(3, seed);
    let b = random_hermitian(3, &mut stream(seed, 3));
    let sa = eigenvalues(&a).unwrap();
    let sb = eigenvalues(&b).unwrap();
    let products: Vec<f64> = sa
        .values()
        .iter()
        .flat_map(|x| sb.values().iter().map(move |y| x * y))
        .collect();
    let direct = eigenvalues(&kron(&a, &b)).unwrap();
    prop_assert!(direct.max_distance(&Spectrum::new(products)) < 1e-10);
    Ok(())
}

/// Brute force: `a ≻ b` iff for every k the largest sum of k entries of `a` is at most
/// that of `b`, found by enumerating all subsets.
pub fn brute_force_relation(a: &[f64], b: &[f64], tol: f64) -> MajorizationRelation {
    let n = a.len();
    let mut best_a = vec![f64::NEG_INFINITY; n + 1];
    let mut best_b = vec![f64::NEG_INFINITY; n + 1];
    for mask in 0u32..(1 << n) {
        let k = mask.count_ones() as usize;
        let pick = |v: &[f64]| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| v[i])
                .sum::<f64>()
        };
        best_a[k] = best_a[k].max(pick(a));
        best_b[k] = best_b[k].max(pick(b));
    }
    let a_above = (1..=n).any(|k| best_a[k] - best_b[k] > tol);
    let b_above = (1..=n).any(|k| best_b[k] - best_a[k] > tol);
    match (a_above, b_above) {
        (false, false) => MajorizationRelation::Equal,
        (false, true) => MajorizationRelation::FirstMoreMixed,
        (true, false) => MajorizationRelation::SecondMoreMixed,
        (true, true) => MajorizationRelation::Incomparable,
    }
}

/// Pairs of equal-trace spectra: comparable ones from T-transforms, arbitrary ones from
/// independent draws, plus exact ties.
pub fn spectrum_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=6usize, any::<u64>(), 0..3u8).prop_map(|(d, seed, kind)| {
        let (lambda, mixed) = mixing_pair(seed, 0, d);
        match kind {
            0 => (mixed.weights().to_vec(), lambda.weights().to_vec()),
            1 => (
                lambda.weights().to_vec(),
                random_simplex(d, &mut stream(seed, 9)).weights().to_vec(),
            ),
            _ => (lambda.weights().to_vec(), lambda.weights().to_vec()),
        }
    })
}

pub fn check_majorization_oracle(a: &[f64], b: &[f64]) -> CheckResult {
    let tol = 1e-11;
    let verdict = more_mixed(&Spectrum::new(a.to_vec()), &Spectrum::new(b.to_vec()), tol).unwrap();
    prop_assert_eq!(verdict.relation, brute_force_relation(a, b, tol));
    Ok(())
}

pub fn check_closed_form_vs_generic(d: usize, t: f64, lambda: &SimplexPoint) -> CheckResult {
    let spec = tdep(d, t);
    let closed = product_output(t, d, lambda).unwrap().full_matrix;
    let generic = product_output_generic(&spec, &spec, lambda).unwrap();
    let diff = (&closed - &generic).frobenius_norm();
    prop_assert!(diff < 1e-12, "‖Δ‖_F = {diff}");
    Ok(())
}

/// `ψ = (U ⊗ V) Σ √λ_i e_i⊗e_i` for Haar `U, V`; returns `(ψ, λ)`.
pub fn rotated_schmidt_state(d: usize, lambda: &SimplexPoint, seed: u64) -> Vec<Complex64> {
    let u = haar_unitary(d, &mut stream(seed, 4));
    let v = haar_unitary(d, &mut stream(seed, 5));
    let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
    for (i, w) in lambda.weights().iter().enumerate() {
        psi[i * d + i] = Complex64::new(w.sqrt(), 0.0);
    }
    kron(&u, &v).mul_vec(&psi)
}

pub fn check_schmidt_invariance(d: usize, t: f64, seed: u64) -> CheckResult {
    let psi = random_pure_state(d * d, &mut stream(seed, 6));
    let rho = ComplexMatrix::outer(&psi, &psi);
    let reduced = partial_trace(&rho, d, d, Subsystem::Second).unwrap();
    let weights: Vec<f64> = eigenvalues(&reduced)
        .unwrap()
        .values()
        .iter()
        .map(|x| x.max(0.0))
        .collect();
    let lambda = SimplexPoint::normalized(weights).unwrap();
    let direct = covchan::additivity::product_entropy_of_pure_state(t, d, &psi).unwrap();
    let split = entropy_split(t, d, &lambda).unwrap().total;
    prop_assert!((direct - split).abs() < 1e-9, "{direct} vs {split}");

    let rotated = rotated_schmidt_state(d, &lambda, seed);
    let again = covchan::additivity::product_entropy_of_pure_state(t, d, &rotated).unwrap();
    prop_assert!((again - split).abs() < 1e-9, "{again} vs {split}");
    Ok(())
}

pub fn check_s1_concavity(
    d: usize,
    t: f64,
    lambda: &SimplexPoint,
    mu: &SimplexPoint,
    alpha: f64,
) -> CheckResult {
    let mix: Vec<f64> = lambda
        .weights()
        .iter()
        .zip(mu.weights())
        .map(|(x, y)| alpha * x + (1.0 - alpha) * y)
        .collect();
    let mix = SimplexPoint::normalized(mix).unwrap();
    let s = |p: &SimplexPoint| entropy_split(t, d, p).unwrap().s1;
    prop_assert!(s(&mix) >= alpha * s(lambda) + (1.0 - alpha) * s(mu) - 1e-10);
    Ok(())
}

pub fn check_spectrum_decomposition(d: usize, t: f64, lambda: &SimplexPoint) -> CheckResult {
    let x = product_output(t, d, lambda).unwrap();
    let direct = eigenvalues(&x.full_matrix).unwrap();
    let assembled = output_spectrum(t, d, lambda).unwrap();
    prop_assert!(direct.max_distance(&assembled) < 1e-10);
    prop_assert!((x.full_matrix.trace().re - 1.0).abs() < 1e-12);
    prop_assert!(x.full_matrix.trace().im.abs() < 1e-12);
    Ok(())
}

pub fn check_choi_duality(d: usize, t: f64) -> CheckResult {
    let lam = choi(&ChannelSpec::transpose_depolarising(d, t)).matrix;
    let del = choi(&ChannelSpec::depolarising(d, t)).matrix;
    let pt = partial_transpose(&lam, d, d, Subsystem::Second).unwrap();
    prop_assert!((&pt - &del).max_abs() < 1e-14);
    Ok(())
}

pub fn check_apply_matches_choi(spec: &ChannelSpec) -> CheckResult {
    let c = choi(spec);
    for i in 0..spec.d {
        for j in 0..spec.d {
            let e = ComplexMatrix::unit(spec.d, i, j);
            let a = apply(spec, &e).unwrap();
            let b = apply_from_choi(&c, &e).unwrap();
            prop_assert!((&a - &b).max_abs() < 1e-12);
        }
    }
    Ok(())
}

pub fn check_map_covariance(d: usize, t: f64, seed: u64) -> CheckResult {
    let a = hermitian(d, seed);
    let u = haar_unitary(d, &mut stream(seed, 7));
    let lam = ChannelSpec::transpose_depolarising(d, t);
    let lhs = apply(&lam, &a.conjugate_by(&u)).unwrap();
    let rhs = apply(&lam, &a).unwrap().conjugate_by(&u.conj());
    prop_assert!((&lhs - &rhs).max_abs() < 1e-10);

    let del = ChannelSpec::depolarising(d, t);
    let lhs = apply(&del, &a.conjugate_by(&u)).unwrap();
    let rhs = apply(&del, &a).unwrap().conjugate_by(&u);
    prop_assert!((&lhs - &rhs).max_abs() < 1e-10);
    Ok(())
}
