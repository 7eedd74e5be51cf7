//! Friendship bias: mean neighbour degree minus own degree.

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::measure::EmpiricalMeasure;
use crate::special::CompensatedSum;
use rayon::prelude::*;
use serde::Serialize;

/// `S / d - d` for `d > 0`, else 0.
///
/// Graph vertices and limit-tree roots both go through this function so that
/// equal integer inputs give bit-identical atoms on either side.
pub fn bias_value(neighbor_degree_sum: u128, degree: u64) -> f64 {
    if degree == 0 {
        0.0
    } else {
        let d = degree as f64;
        neighbor_degree_sum as f64 / d - d
    }
}

/// `Σ_j A_ij d_j` with `A_ii` equal to the number of self-loops at `i`.
fn neighbor_degree_sum(g: &MultiGraph, i: usize) -> u128 {
    let degrees = g.degrees();
    let off_diagonal: u128 = g
        .neighbors(i)
        .map(|(j, m)| m as u128 * degrees[j] as u128)
        .sum();
    off_diagonal + g.loops(i) as u128 * degrees[i] as u128
}

pub fn friendship_bias(g: &MultiGraph, i: usize) -> Result<f64> {
    if i >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: i, n: g.n() });
    }
    Ok(bias_value(neighbor_degree_sum(g, i), g.degree(i)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasVector {
    pub values: Vec<f64>,
}

impl BiasVector {
    pub fn of(g: &MultiGraph) -> Self {
        let values = (0..g.n())
            .into_par_iter()
            .map(|i| bias_value(neighbor_degree_sum(g, i), g.degree(i)))
            .collect();
        BiasVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &v in &self.values {
            acc.add(v);
        }
        acc.value() / self.values.len() as f64
    }
}

/// The empirical law of the per-vertex biases (mass `1/n` per vertex).
pub fn bias_distribution(g: &MultiGraph) -> EmpiricalMeasure {
    EmpiricalMeasure::from_samples(&BiasVector::of(g).values)
}

pub fn average_bias(g: &MultiGraph) -> f64 {
    BiasVector::of(g).mean()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParadoxCertificate {
    pub avg: f64,
    pub nonneg: bool,
    pub rewrite_avg: f64,
    pub all_components_regular: bool,
}

/// Average bias computed directly and through the symmetric square form
/// `(1/2n) Σ_ij A_ij (sqrt(d_j/d_i) - sqrt(d_i/d_j))^2`.
pub fn paradox_certificate(g: &MultiGraph) -> Result<ParadoxCertificate> {
    if !g.is_loopless() {
        return Err(Error::SelfLoopPresent {
            loops: g.total_loops(),
        });
    }
    let avg = average_bias(g);
    let degrees = g.degrees();
    let mut acc = CompensatedSum::new();
    for i in 0..g.n() {
        let di = degrees[i] as f64;
        for (j, m) in g.neighbors(i) {
            let dj = degrees[j] as f64;
            let diff = (dj / di).sqrt() - (di / dj).sqrt();
            acc.add(m as f64 * diff * diff);
        }
    }
    let rewrite_avg = acc.value() / (2.0 * g.n() as f64);
    Ok(ParadoxCertificate {
        avg,
        nonneg: avg >= -1e-12,
        rewrite_avg,
        all_components_regular: g.all_components_regular(),
    })
}
