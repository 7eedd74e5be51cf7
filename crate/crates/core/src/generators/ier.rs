use super::skip_pairs;
use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::kernel::KernelFunction;
use rand::Rng;

/// Pair `{i, j}` present with probability `min(lambda f(i/n) f(j/n) / n, 1)`
/// (vertices numbered from 1 in the kernel argument). Pairs are proposed at
/// the uniform rate `min(lambda M^2 / n, 1)` and thinned.
pub fn gen_ier<R: Rng + ?Sized>(
    n: usize,
    lambda: f64,
    kernel: &KernelFunction,
    rng: &mut R,
) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let nf = n as f64;
    let weights: Vec<f64> = (1..=n).map(|i| kernel.eval(i as f64 / nf)).collect();
    let mut top = 0.0f64;
    for (i, &w) in weights.iter().enumerate() {
        if !(w >= kernel.m_minus() && w <= kernel.m_plus()) {
            return Err(Error::KernelInvalid(format!(
                "f({}/{n}) = {w} outside [{}, {}]",
                i + 1,
                kernel.m_minus(),
                kernel.m_plus()
            )));
        }
        top = top.max(w);
    }
    let p_max = (lambda * top * top / nf).min(1.0);
    let mut edges = Vec::new();
    skip_pairs(n, p_max, rng, |rng, v, w| {
        let p = (lambda * weights[v] * weights[w] / nf).min(1.0);
        if p >= p_max || rng.random::<f64>() * p_max < p {
            edges.push((w, v));
        }
    });
    MultiGraph::from_edges(n, edges)
}
