//! Seeded sampling: Haar unitaries, flat Dirichlet simplex points, random pure states.
//!
//! Every sampler takes the generator explicitly. [`stream`] derives independent,
//! reproducible generators for parallel branches from a `(seed, index)` pair.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::matrix::ComplexMatrix;
use crate::simplex::SimplexPoint;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for branch `index` of a computation seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniformly distributed unit vector in `C^n`.
pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Gram-Schmidt QR with one reorthogonalization pass. Returns `Q` and the diagonal of `R`.
fn qr_columns(g: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = g.dim();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
    let mut r_diag = Vec::with_capacity(n);
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(q, a)| q.conj() * a)
                    .sum();
                let qk = cols[k].clone();
                for (a, q) in cols[j].iter_mut().zip(&qk) {
                    *a -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut cols[j] {
            *a /= norm;
        }
        r_diag.push(Complex64::new(norm, 0.0));
    }
    (ComplexMatrix::from_fn(n, |i, j| cols[j][i]), r_diag)
}

/// Haar-distributed element of SU(d).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "unitary dimension must be positive");
    let g = ComplexMatrix::from_fn(d, |_, _| complex_gaussian(rng));
    let (q, r_diag) = qr_columns(&g);
    // column phase correction by the phase of diag(R)
    let phases: Vec<Complex64> = r_diag.iter().map(|r| r / r.norm()).collect();
    let u = ComplexMatrix::from_fn(d, |i, j| q[(i, j)] * phases[j]);
    let det = u.determinant();
    let root = Complex64::from_polar(1.0, det.arg() / d as f64);
    u.scale_complex(root.conj())
}

/// Flat Dirichlet(1, ..., 1) point from normalized exponential variates.
pub fn random_simplex<R: Rng + ?Sized>(d: usize, rng: &mut R) -> SimplexPoint {
    assert!(d >= 1, "simplex dimension must be positive");
    if d == 1 {
        return SimplexPoint::vertex(1, 0);
    }
    let draws: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut weights: Vec<f64> = draws.iter().map(|x| x / total).collect();
    // push the residual rounding onto the largest weight so the sum is 1 to the ulp
    let residual = 1.0 - weights.iter().sum::<f64>();
    let imax = weights
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    weights[imax] += residual;
    SimplexPoint::new(weights).expect("normalized exponentials lie on the simplex")
}

/// Random Hermitian matrix with Gaussian entries (GUE-like scaling).
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, |_, _| complex_gaussian(rng));
    (&g + &g.adjoint()).scale(0.5)
}
