use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SIMPLEX_TOL: f64 = 1e-12;

/// A probability vector `λ`: the squared Schmidt coefficients of a bipartite pure state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint {
    weights: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSimplex("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
            return Err(Error::InvalidSimplex(format!("negative or NaN weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidSimplex(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// Rescales nonnegative weights to unit sum.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidSimplex(format!("weights sum to {total}")));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn vertex(d: usize, k: usize) -> Self {
        assert!(k < d, "vertex index out of range");
        let mut weights = vec![0.0; d];
        weights[k] = 1.0;
        Self { weights }
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            weights: vec![1.0 / d as f64; d],
        }
    }

    /// Midpoint of the edge between vertices `i` and `j`.
    pub fn edge_midpoint(d: usize, i: usize, j: usize) -> Self {
        let mut weights = vec![0.0; d];
        weights[i] = 0.5;
        weights[j] = 0.5;
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Index of the vertex this point coincides with, if any weight exceeds `1 - tol`.
    pub fn near_vertex(&self, tol: f64) -> Option<usize> {
        self.weights.iter().position(|&w| w > 1.0 - tol)
    }

    /// Distance (max norm) to the closest vertex.
    pub fn distance_to_nearest_vertex(&self) -> f64 {
        let max = self.weights.iter().copied().fold(0.0, f64::max);
        1.0 - max
    }
}
