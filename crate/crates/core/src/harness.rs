//! Command implementations behind the `covchan` binary.
//!
//! Each command returns its document (JSON value or CSV text) together with the
//! process exit code, so the binary only parses flags and writes bytes. Exit
//! codes: 0 success, 2 invalid arguments, 3 a parameter outside the CP range,
//! 4 a majorization counterexample was found.

use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::additivity::{
    additivity_report, mm_test, threshold_scan, AdditivityOptions, AdditivityReport, MmVerdict,
    ScanOptions, ThresholdRow, MM_TOL,
};
use crate::channel::{choi, is_cp, is_ppt, is_tp, s_min_single, ChannelSpec, Family};
use crate::covariance::{choi_projector_decomposition, RepCase};
use crate::error::{Error, Result};
use crate::product::tdep;
use crate::spectrum::LogBase;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CP: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

/// Tolerance for the CP / TP / PPT predicates in `info`.
pub const INFO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// Output of one command invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub exit_code: i32,
}

/// Evenly spaced grid with both endpoints; a single step yields `[from]`.
pub fn t_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if from.is_nan() || to.is_nan() || from > to {
        return Err(Error::InvalidArgument(format!(
            "t-from {from} exceeds t-to {to}"
        )));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                to
            } else {
                from + (to - from) * k as f64 / n
            }
        })
        .collect())
}

/// Decimal with 17 significant digits, so that parsing it back recovers the same bits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn csv_document(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn json_document<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

pub fn validate_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    Ok(())
}

/// Inspects one channel: CP/TP/PPT status, invariant decomposition, `S_min` and capacity.
pub fn cmd_info(spec: &ChannelSpec, log_base: LogBase, format: Format) -> Result<Outcome> {
    cmd_info_with_tol(spec, INFO_TOL, log_base, format)
}

pub fn cmd_info_with_tol(
    spec: &ChannelSpec,
    tol: f64,
    log_base: LogBase,
    format: Format,
) -> Result<Outcome> {
    validate_dimension(spec.d)?;
    let c = choi(spec);
    let cp = is_cp(&c, tol)?;
    let tp = is_tp(&c, tol);
    let ppt = is_ppt(&c, tol)?;
    let case = match spec.family {
        Family::TransposeDepolarising => RepCase::conjugate(spec.d),
        _ => RepCase::identical(spec.d),
    };
    let coeffs = choi_projector_decomposition(&c, case).coefficients;

    let cp_param = spec.is_cp_parameter();
    let (s_min, holevo) = if cp_param {
        let s = s_min_single(spec)?.entropy;
        (
            Some(log_base.from_nats(s)),
            Some(log_base.from_nats((spec.d as f64).ln() - s)),
        )
    } else {
        (None, None)
    };

    let doc = json!({
        "d": spec.d,
        "t": spec.weight(),
        "family": spec.family.short_name(),
        "cp": cp.holds,
        "cp_min_eig": cp.min_eigenvalue,
        "tp": tp,
        "ppt": ppt.holds,
        "ppt_min_eig": ppt.min_eigenvalue,
        "choi_coeffs": coeffs,
        "s_min": s_min,
        "holevo_capacity": holevo,
        "log_base": log_base_label(log_base),
    });
    let body = match format {
        Format::Json => json_document(&doc),
        Format::Csv => csv_document(
            &[
                "d",
                "t",
                "family",
                "cp",
                "cp_min_eig",
                "tp",
                "ppt",
                "ppt_min_eig",
                "choi_coeffs",
                "s_min",
                "holevo_capacity",
            ],
            vec![vec![
                spec.d.to_string(),
                fmt_num(spec.weight()),
                spec.family.short_name().into(),
                cp.holds.to_string(),
                fmt_num(cp.min_eigenvalue),
                tp.to_string(),
                ppt.holds.to_string(),
                fmt_num(ppt.min_eigenvalue),
                coeffs
                    .iter()
                    .map(|&c| fmt_num(c))
                    .collect::<Vec<_>>()
                    .join(";"),
                opt_num(s_min),
                opt_num(holevo),
            ]],
        ),
    };
    Ok(Outcome {
        body,
        exit_code: if cp_param { EXIT_OK } else { EXIT_NOT_CP },
    })
}

fn log_base_label(base: LogBase) -> &'static str {
    match base {
        LogBase::Natural => "e",
        LogBase::Two => "2",
    }
}

/// One row of the additivity table; `report` is absent when `t` is outside the CP range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityRow {
    pub d: usize,
    pub t: f64,
    pub cp: bool,
    pub s_min: Option<f64>,
    pub s_min_product: Option<f64>,
    pub gap: Option<f64>,
    pub certificate: Option<String>,
    pub verdict: Option<String>,
    pub best_lambda: Option<Vec<f64>>,
    pub n_starts: usize,
    pub seed: u64,
}

impl AdditivityRow {
    fn from_report(r: &AdditivityReport, base: LogBase) -> Self {
        Self {
            d: r.d,
            t: r.t,
            cp: true,
            s_min: Some(base.from_nats(r.s_min_single)),
            s_min_product: Some(base.from_nats(r.s_min_product)),
            gap: Some(base.from_nats(r.gap)),
            certificate: Some(r.certificate.to_string()),
            verdict: Some(r.verdict.to_string()),
            best_lambda: Some(r.best_lambda.weights().to_vec()),
            n_starts: r.n_starts,
            seed: r.seed,
        }
    }
}

pub const ADDITIVITY_COLUMNS: [&str; 10] = [
    "d",
    "t",
    "cp",
    "s_min",
    "s_min_product",
    "gap",
    "certificate",
    "verdict",
    "n_starts",
    "seed",
];

/// Additivity reports over a grid of `t`; rows outside the CP range are kept and flagged.
pub fn cmd_additivity(
    d: usize,
    grid: &[f64],
    opts: &AdditivityOptions,
    log_base: LogBase,
    format: Format,
) -> Result<Outcome> {
    validate_dimension(d)?;
    let rows: Vec<AdditivityRow> = grid
        .iter()
        .map(|&t| {
            if tdep(d, t).is_cp_parameter() {
                additivity_report(t, d, opts).map(|r| AdditivityRow::from_report(&r, log_base))
            } else {
                Ok(AdditivityRow {
                    d,
                    t,
                    cp: false,
                    s_min: None,
                    s_min_product: None,
                    gap: None,
                    certificate: None,
                    verdict: None,
                    best_lambda: None,
                    n_starts: 0,
                    seed: opts.seed,
                })
            }
        })
        .collect::<Result<_>>()?;
    let any_out = rows.iter().any(|r| !r.cp);

    let body = match format {
        Format::Json => json_document(&rows),
        Format::Csv => csv_document(
            &ADDITIVITY_COLUMNS,
            rows.iter()
                .map(|r| {
                    vec![
                        r.d.to_string(),
                        fmt_num(r.t),
                        r.cp.to_string(),
                        opt_num(r.s_min),
                        opt_num(r.s_min_product),
                        opt_num(r.gap),
                        r.certificate.clone().unwrap_or_default(),
                        r.verdict.clone().unwrap_or_default(),
                        r.n_starts.to_string(),
                        r.seed.to_string(),
                    ]
                })
                .collect(),
        ),
    };
    Ok(Outcome {
        body,
        exit_code: if any_out { EXIT_NOT_CP } else { EXIT_OK },
    })
}

/// Randomized test of majorization monotonicity. The JSON document carries every
/// counterexample with its pair index so it can be regenerated from the seed.
pub fn cmd_mm(d: usize, t: f64, n_pairs: usize, seed: u64, format: Format) -> Result<Outcome> {
    validate_dimension(d)?;
    let started = Instant::now();
    let verdict: MmVerdict = mm_test(t, d, n_pairs, seed)?;
    let runtime = started.elapsed().as_secs_f64();
    let exit_code = if verdict.pass {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    };

    let body = match format {
        Format::Json => json_document(&json!({
            "d": verdict.d,
            "t": verdict.t,
            "seed": verdict.seed,
            "n_pairs": verdict.n_pairs,
            "tolerance": MM_TOL,
            "pass": verdict.pass,
            "counterexamples": verdict.counterexamples,
            "runtime_seconds": runtime,
        })),
        Format::Csv => csv_document(
            &[
                "d",
                "t",
                "seed",
                "pair_index",
                "prefix_index",
                "excess",
                "lambda",
                "lambda_prime",
            ],
            verdict
                .counterexamples
                .iter()
                .map(|c| {
                    let join =
                        |w: &[f64]| w.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(";");
                    vec![
                        d.to_string(),
                        fmt_num(t),
                        seed.to_string(),
                        c.pair_index.to_string(),
                        c.prefix_index.to_string(),
                        fmt_num(c.excess),
                        join(c.lambda.weights()),
                        join(c.lambda_prime.weights()),
                    ]
                })
                .collect(),
        ),
    };
    Ok(Outcome { body, exit_code })
}

pub const SWEEP_COLUMNS: [&str; 11] = [
    "d",
    "t",
    "region",
    "cp",
    "cp_min_eig",
    "ppt_min_eig",
    "nsd_max_shifted",
    "gap",
    "certificate",
    "n_starts",
    "seed",
];

/// Threshold classification table over a grid of `t`.
pub fn cmd_sweep(
    d: usize,
    grid: &[f64],
    opts: &ScanOptions,
    log_base: LogBase,
    format: Format,
) -> Result<Outcome> {
    validate_dimension(d)?;
    let rows: Vec<ThresholdRow> = threshold_scan(d, grid, opts)?;
    let any_out = rows.iter().any(|r| !r.cp);
    let body = match format {
        Format::Json => json_document(
            &rows
                .iter()
                .map(|r| {
                    json!({
                        "d": r.d,
                        "t": r.t,
                        "region": r.region,
                        "cp": r.cp,
                        "cp_min_eig": r.cp_min_eig,
                        "ppt_min_eig": r.ppt_min_eig,
                        "nsd_max_shifted": r.nsd_max_shifted,
                        "gap": r.gap.map(|g| log_base.from_nats(g)),
                        "certificate": r.certificate,
                        "n_starts": opts.n_starts,
                        "seed": r.seed,
                    })
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => csv_document(
            &SWEEP_COLUMNS,
            rows.iter()
                .map(|r| {
                    vec![
                        r.d.to_string(),
                        fmt_num(r.t),
                        r.region.to_string(),
                        r.cp.to_string(),
                        fmt_num(r.cp_min_eig),
                        fmt_num(r.ppt_min_eig),
                        fmt_num(r.nsd_max_shifted),
                        opt_num(r.gap.map(|g| log_base.from_nats(g))),
                        r.certificate.map(|c| c.to_string()).unwrap_or_default(),
                        opts.n_starts.to_string(),
                        r.seed.to_string(),
                    ]
                })
                .collect(),
        ),
    };
    Ok(Outcome {
        body,
        exit_code: if any_out { EXIT_NOT_CP } else { EXIT_OK },
    })
}
