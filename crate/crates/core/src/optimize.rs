//! Derivative-free Nelder–Mead descent.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    /// Stop when the largest vertex distance from the best vertex drops below this.
    pub diameter_tol: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            diameter_tol: 1e-10,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when `stop` requested early termination.
    pub stopped: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn combine(a: &[f64], b: &[f64], weight: f64) -> Vec<f64> {
    // a + weight * (a - b)
    a.iter().zip(b).map(|(x, y)| x + weight * (x - y)).collect()
}

/// Minimizes `f` from `x0`. `stop` is consulted with the best point after each
/// iteration and may end the run early.
pub fn nelder_mead<F, S>(
    mut f: F,
    x0: &[f64],
    opts: NelderMeadOptions,
    mut stop: S,
) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
    S: FnMut(&[f64]) -> bool,
{
    let n = x0.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    let mut stopped = false;
    while iterations < opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if stop(&simplex[0].0) {
            stopped = true;
            break;
        }
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let (worst, worst_value) = simplex[n].clone();
        let best_value = simplex[0].1;
        let second_worst_value = simplex[n - 1].1;

        let reflected = combine(&centroid, &worst, REFLECT);
        let fr = eval(&reflected);
        if fr < best_value {
            let expanded = combine(&centroid, &worst, EXPAND);
            let fe = eval(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < second_worst_value {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst_value {
            let x = combine(&centroid, &worst, CONTRACT);
            let v = eval(&x);
            (x, v)
        } else {
            let x = combine(&centroid, &worst, -CONTRACT);
            let v = eval(&x);
            (x, v)
        };
        if fc < worst_value.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, x)| b + SHRINK * (x - b))
                .collect();
            let v = eval(&x);
            *vertex = (x, v);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        value,
        iterations,
        converged,
        stopped,
    }
}
