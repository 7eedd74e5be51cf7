//! Monte Carlo estimation over graph replicates and limit-tree samples.
//!
//! Work is cut into fixed-size chunks, each with its own random stream, and
//! partial results are merged by a fixed pairwise tree. The output is
//! therefore identical for any number of worker threads.

use crate::bias::BiasVector;
use crate::error::{Error, Result};
use crate::generators::ModelConfig;
use crate::limit::TreeSampler;
use crate::measure::{kolmogorov_distance, EmpiricalMeasure};
use crate::rng::{stream, Domain};
use crate::special::CompensatedSum;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Samples per random stream for limit-tree batches.
pub const CHUNK: u64 = 1 << 14;

/// Thresholds reported in [`SummaryStats::tail_counts`].
pub const DEFAULT_TAIL_POINTS: [f64; 6] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub n_samples: u64,
    pub mean: f64,
    pub second_moment: f64,
    /// Fraction of samples with bias `>= 0`.
    pub significance: f64,
    pub se_mean: f64,
    pub se_second_moment: f64,
    pub se_significance: f64,
    /// `(x, fraction of samples >= x)`.
    pub tail_counts: Vec<(f64, f64)>,
}

impl SummaryStats {
    pub fn variance(&self) -> f64 {
        self.second_moment - self.mean * self.mean
    }

    /// One row of the experiments table; `n = None` marks a limit-tree row.
    pub fn csv_row(&self, model: &str, param: &str, n: Option<usize>, replicates: u64) -> String {
        let n = n.map_or_else(|| "inf".to_string(), |n| n.to_string());
        format!(
            "{model},{param},{n},{replicates},{},{},{},{},{}",
            self.mean,
            self.second_moment,
            self.significance,
            self.se_mean,
            self.se_significance
        )
    }
}

pub const EXPERIMENT_HEADER: &str = "model,param,n,replicates,mean,m2,significance,se_mean,se_sig";

/// Running sums that merge exactly the same way regardless of scheduling.
#[derive(Clone, Debug)]
struct Accumulator {
    count: u64,
    sum: CompensatedSum,
    sum2: CompensatedSum,
    sum4: CompensatedSum,
    nonneg: u64,
    tail: Vec<u64>,
}

impl Accumulator {
    fn new(tail_points: usize) -> Self {
        Accumulator {
            count: 0,
            sum: CompensatedSum::new(),
            sum2: CompensatedSum::new(),
            sum4: CompensatedSum::new(),
            nonneg: 0,
            tail: vec![0; tail_points],
        }
    }

    fn push(&mut self, x: f64, points: &[f64]) {
        self.count += 1;
        let x2 = x * x;
        self.sum.add(x);
        self.sum2.add(x2);
        self.sum4.add(x2 * x2);
        if x >= 0.0 {
            self.nonneg += 1;
        }
        for (c, &p) in self.tail.iter_mut().zip(points) {
            if x >= p {
                *c += 1;
            }
        }
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        self.count += other.count;
        self.sum.add(other.sum.value());
        self.sum2.add(other.sum2.value());
        self.sum4.add(other.sum4.value());
        self.nonneg += other.nonneg;
        for (a, b) in self.tail.iter_mut().zip(other.tail) {
            *a += b;
        }
        self
    }

    fn finish(&self, points: &[f64]) -> SummaryStats {
        let n = self.count as f64;
        let mean = self.sum.value() / n;
        let m2 = self.sum2.value() / n;
        let m4 = self.sum4.value() / n;
        let sig = self.nonneg as f64 / n;
        SummaryStats {
            n_samples: self.count,
            mean,
            second_moment: m2,
            significance: sig,
            se_mean: ((m2 - mean * mean).max(0.0) / n).sqrt(),
            se_second_moment: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
            se_significance: (sig * (1.0 - sig) / n).sqrt(),
            tail_counts: points
                .iter()
                .zip(&self.tail)
                .map(|(&p, &c)| (p, c as f64 / n))
                .collect(),
        }
    }
}

/// Merges `items` left to right in a balanced binary tree.
fn pairwise<T, F: Fn(T, T) -> T + Copy>(mut items: Vec<T>, merge: F) -> Option<T> {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(merge(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}

fn summarize(values: &[f64], points: &[f64]) -> Accumulator {
    let mut acc = Accumulator::new(points.len());
    for &x in values {
        acc.push(x, points);
    }
    acc
}

/// Pools the per-vertex biases of `replicates` independent graphs.
pub fn run_graph_experiment(
    config: &ModelConfig,
    n: usize,
    replicates: u64,
    master_seed: u64,
) -> Result<SummaryStats> {
    let points = DEFAULT_TAIL_POINTS;
    let parts = graph_replicates(config, n, replicates, master_seed, |g| {
        summarize(&BiasVector::of(g).values, &points)
    })?;
    Ok(pairwise(parts, Accumulator::merge).unwrap().finish(&points))
}

/// Runs `f` on each replicate graph, in replicate order.
pub fn graph_replicates<T, F>(
    config: &ModelConfig,
    n: usize,
    replicates: u64,
    master_seed: u64,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&crate::graph::MultiGraph) -> T + Sync,
{
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be at least 1".into()));
    }
    config.validate()?;
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(master_seed, Domain::Graph, r);
            config.generate(n, &mut rng).map(|g| f(&g))
        })
        .collect()
}

/// All biases of `replicates` graphs, replicate by replicate.
pub fn graph_bias_samples(
    config: &ModelConfig,
    n: usize,
    replicates: u64,
    master_seed: u64,
) -> Result<Vec<f64>> {
    let parts = graph_replicates(config, n, replicates, master_seed, |g| BiasVector::of(g).values)?;
    Ok(parts.concat())
}

fn chunk_sizes(n_samples: u64) -> Vec<(u64, u64)> {
    (0..n_samples.div_ceil(CHUNK))
        .map(|c| (c, CHUNK.min(n_samples - c * CHUNK)))
        .collect()
}

/// Summary of `n_samples` root biases drawn from `sampler`.
pub fn run_sampler_experiment(
    sampler: &TreeSampler,
    n_samples: u64,
    master_seed: u64,
) -> Result<SummaryStats> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
    }
    let points = DEFAULT_TAIL_POINTS;
    let parts: Vec<Accumulator> = chunk_sizes(n_samples)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = stream(master_seed, Domain::Limit, c);
            let mut acc = Accumulator::new(points.len());
            for _ in 0..len {
                acc.push(sampler.sample_root(&mut rng).1, &points);
            }
            acc
        })
        .collect();
    Ok(pairwise(parts, Accumulator::merge).unwrap().finish(&points))
}

pub fn run_limit_experiment(
    config: &ModelConfig,
    n_samples: u64,
    master_seed: u64,
) -> Result<SummaryStats> {
    run_sampler_experiment(&TreeSampler::for_model(config)?, n_samples, master_seed)
}

/// `n_samples` draws of `(d_phi, delta)`, in stream order.
pub fn sample_roots(sampler: &TreeSampler, n_samples: u64, master_seed: u64) -> Vec<(u64, f64)> {
    let parts: Vec<Vec<(u64, f64)>> = chunk_sizes(n_samples)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = stream(master_seed, Domain::Limit, c);
            (0..len).map(|_| sampler.sample_root(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

pub fn limit_bias_samples(sampler: &TreeSampler, n_samples: u64, master_seed: u64) -> Vec<f64> {
    sample_roots(sampler, n_samples, master_seed)
        .into_iter()
        .map(|(_, d)| d)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Least-squares line through `(log x, log P{X >= x})` on a geometric grid of
/// 20 points from `x_min` up to where the tail has dropped a thousandfold.
pub fn tail_exponent_fit(samples: &EmpiricalMeasure, x_min: f64) -> Result<TailFit> {
    let start = samples.tail(x_min);
    if !(x_min > 0.0) || start == 0.0 {
        return Err(Error::InsufficientTail { x_min });
    }
    let floor = start * 1e-3;
    let x_max = samples
        .atoms()
        .iter()
        .rev()
        .find(|a| samples.tail(a.value) >= floor)
        .map_or(x_min, |a| a.value);
    tail_exponent_fit_range(samples, x_min, x_max, 20)
}

pub fn tail_exponent_fit_range(
    samples: &EmpiricalMeasure,
    x_min: f64,
    x_max: f64,
    grid_points: usize,
) -> Result<TailFit> {
    let atoms_above = samples.atoms().len() - samples.atoms().partition_point(|a| a.value < x_min);
    if !(x_min > 0.0 && x_max > x_min) || grid_points < 10 || atoms_above < 10 {
        return Err(Error::InsufficientTail { x_min });
    }
    let ratio = (x_max / x_min).ln() / (grid_points - 1) as f64;
    let pts: Vec<(f64, f64)> = (0..grid_points)
        .map(|i| x_min * (ratio * i as f64).exp())
        .map(|x| (x, samples.tail(x)))
        .filter(|&(_, t)| t > 0.0)
        .map(|(x, t)| (x.ln(), t.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(Error::InsufficientTail { x_min });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(TailFit {
        slope,
        intercept: my - slope * mx,
        r2,
        points: pts.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub kolmogorov: f64,
    pub mean: f64,
    pub significance: f64,
}

pub const CONVERGENCE_HEADER: &str = "n,kolmogorov,mean,significance";

/// Distance between the pooled graph bias law at each `n` and a limit-tree
/// sample of size `tree_samples`.
pub fn convergence_study(
    config: &ModelConfig,
    n_grid: &[usize],
    replicates: u64,
    master_seed: u64,
    tree_samples: u64,
) -> Result<Vec<ConvergenceRow>> {
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n_grid must be strictly ascending".into()));
    }
    let sampler = TreeSampler::for_model(config)?;
    let limit = EmpiricalMeasure::from_samples(&limit_bias_samples(&sampler, tree_samples, master_seed));
    n_grid
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let seed = master_seed.wrapping_add((i as u64 + 1) << 32);
            let values = graph_bias_samples(config, n, replicates, seed)?;
            let acc = summarize(&values, &[]);
            let stats = acc.finish(&[]);
            let mu_n = EmpiricalMeasure::from_samples(&values);
            Ok(ConvergenceRow {
                n,
                kolmogorov: kolmogorov_distance(&mu_n, &limit),
                mean: stats.mean,
                significance: stats.significance,
            })
        })
        .collect()
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CONVERGENCE_HEADER}").unwrap();
    for r in rows {
        writeln!(out, "{},{},{},{}", r.n, r.kolmogorov, r.mean, r.significance).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::OffspringLaw;
    use crate::generators::DegreeSource;

    #[test]
    fn pairwise_merge_order_is_fixed() {
        let v: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let merged = pairwise(v, |a, b| format!("({a}{b})")).unwrap();
        assert_eq!(merged, "(((01)(23))4)");
    }

    #[test]
    fn accumulator_matches_direct_formulas() {
        let xs = [-1.0, 0.0, 2.0, 3.5, -0.5];
        let s = summarize(&xs, &[1.0, 3.0]).finish(&[1.0, 3.0]);
        assert_eq!(s.n_samples, 5);
        assert!((s.mean - 0.8).abs() < 1e-15);
        assert!((s.second_moment - (1.0 + 4.0 + 12.25 + 0.25) / 5.0).abs() < 1e-15);
        assert!((s.significance - 0.6).abs() < 1e-15);
        assert_eq!(s.tail_counts, vec![(1.0, 0.4), (3.0, 0.2)]);
    }

    #[test]
    fn regular_cm_bias_comes_from_loops_only() {
        // A vertex of degree 3 with a loop has bias (3 + 3)/3 - 3 = -1; every
        // other vertex sees only degree-3 neighbours.
        let config = ModelConfig::Cm {
            degrees: DegreeSource::Law(OffspringLaw::PointMass { k: 3 }),
        };
        let per_graph = graph_replicates(&config, 1000, 3, 1, |g| {
            let b = BiasVector::of(g);
            (0..g.n()).all(|i| b.values[i] == if g.loops(i) > 0 { -1.0 } else { 0.0 })
        })
        .unwrap();
        assert!(per_graph.into_iter().all(|ok| ok));
        let s = run_limit_experiment(&config, 10_000, 1).unwrap();
        assert_eq!((s.mean, s.significance), (0.0, 1.0));
        let rows = convergence_study(&config, &[100, 1000], 2, 1, 10_000).unwrap();
        assert!(rows.iter().all(|r| r.kolmogorov < 0.05));
    }

    #[test]
    fn synthetic_power_law_slope() {
        // Quantiles of a Pareto law with tail x^{-2}.
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|i| (1.0 - (i as f64 + 0.5) / n as f64).powf(-0.5)).collect();
        let fit = tail_exponent_fit(&EmpiricalMeasure::from_samples(&xs), 1.0).unwrap();
        assert!((fit.slope + 2.0).abs() < 0.05, "{fit:?}");
        assert!(fit.r2 > 0.99);
        let few = EmpiricalMeasure::from_samples(&[1.0, 2.0]);
        assert!(matches!(tail_exponent_fit(&few, 1.0), Err(Error::InsufficientTail { .. })));
    }

    #[test]
    fn limit_experiment_is_chunk_deterministic() {
        let config = ModelConfig::Her { lambda: 1.0 };
        let a = run_limit_experiment(&config, 50_000, 3).unwrap();
        let b = run_limit_experiment(&config, 50_000, 3).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| run_limit_experiment(&config, 50_000, 3).unwrap());
        assert_eq!(a, c);
    }
}
