use super::skip_pairs;
use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use rand::Rng;

/// Each pair present independently with probability `min(lambda / n, 1)`.
pub fn gen_her<R: Rng + ?Sized>(n: usize, lambda: f64, rng: &mut R) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let p = (lambda / n as f64).min(1.0);
    let mut edges = Vec::with_capacity((p * n as f64 * n as f64 / 2.0 * 1.1) as usize + 16);
    skip_pairs(n, p, rng, |_, v, w| edges.push((w, v)));
    MultiGraph::from_edges(n, edges)
}
