use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use rand::Rng;

/// Preferential attachment with one edge per step and self-loops allowed.
///
/// Vertex 1 starts with a self-loop. With `t` vertices present, the new
/// vertex loops onto itself with probability `(1+δ)/(t(2+δ)+1+δ)` and
/// otherwise attaches to vertex `i` with probability proportional to
/// `d_i + δ`.
///
/// The weight `d_i + δ` splits as `(d_i - 1) + (1 + δ)`, both non-negative
/// for `δ >= -1`. The first part is sampled from an urn holding each vertex
/// `d_i - 1` times (`t` entries in total), the second uniformly over vertices.
/// All probabilities are exact and each step is O(1).
pub fn gen_pam<R: Rng + ?Sized>(n: usize, delta: f64, rng: &mut R) -> Result<MultiGraph> {
    if !(delta >= -1.0 && delta.is_finite()) {
        return Err(Error::DeltaOutOfRange {
            delta,
            bound: ">= -1",
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut edges = Vec::with_capacity(n);
    let mut urn: Vec<u32> = Vec::with_capacity(n);
    edges.push((0, 0));
    urn.push(0);
    let self_mass = 1.0 + delta;
    for t in 1..n {
        let tf = t as f64;
        let total = tf * (2.0 + delta) + self_mass;
        let u = rng.random::<f64>() * total;
        let target = if u < self_mass {
            t
        } else if u - self_mass < tf {
            urn[rng.random_range(0..urn.len())] as usize
        } else {
            rng.random_range(0..t)
        };
        edges.push((t, target));
        // The target gains one unit of degree; a looping newcomer has degree 2.
        urn.push(target as u32);
    }
    MultiGraph::from_edges(n, edges)
}
