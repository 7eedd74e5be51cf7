use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::law::OffspringLaw;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    pub degrees: Vec<u64>,
    /// Whether the last entry was incremented to make the sum even.
    pub repaired: bool,
}

/// `n` i.i.d. draws from `law`; an odd total is fixed by adding one to the
/// last degree.
pub fn sample_degree_sequence<R: Rng + ?Sized>(
    law: &OffspringLaw,
    n: usize,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let zero = law.pmf(0);
    if zero > 0.0 {
        return Err(Error::LawSupportsZero { mass: zero });
    }
    let sampler = law.sampler()?;
    let mut degrees: Vec<u64> = (0..n).map(|_| sampler.sample(rng)).collect();
    let odd = degrees.iter().fold(0u64, |acc, &d| acc ^ (d & 1)) == 1;
    if odd {
        *degrees.last_mut().unwrap() += 1;
    }
    Ok(DegreeSequence {
        degrees,
        repaired: odd,
    })
}

/// Uniform pairing of half-edges. Loops and parallel edges are kept.
pub fn gen_cm<R: Rng + ?Sized>(degrees: &[u64], rng: &mut R) -> Result<MultiGraph> {
    let sum = degrees
        .iter()
        .try_fold(0u64, |acc, &d| acc.checked_add(d))
        .ok_or_else(|| Error::InvalidParameter("degree sum overflows".into()))?;
    if sum % 2 == 1 {
        return Err(Error::OddDegreeSum { sum });
    }
    let mut stubs: Vec<u32> = Vec::with_capacity(sum as usize);
    for (i, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(i as u32, d as usize));
    }
    stubs.shuffle(rng);
    let edges = stubs.chunks_exact(2).map(|p| (p[0] as usize, p[1] as usize));
    MultiGraph::from_edges(degrees.len(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn degrees_are_preserved() {
        let mut rng = seeded(4);
        for _ in 0..50 {
            let g = gen_cm(&[2, 2, 2], &mut rng).unwrap();
            assert_eq!(g.degrees(), &[2, 2, 2]);
        }
        let g = gen_cm(&[1, 1], &mut rng).unwrap();
        assert_eq!(g.multiplicity(0, 1), 1);
        let degs = [5, 1, 3, 3, 2, 0, 4];
        assert_eq!(gen_cm(&degs, &mut rng).unwrap().degrees(), &degs);
    }

    #[test]
    fn odd_sum_is_rejected() {
        assert_eq!(
            gen_cm(&[1, 2], &mut seeded(0)).unwrap_err(),
            Error::OddDegreeSum { sum: 3 }
        );
    }

    #[test]
    fn parity_repair() {
        let law = OffspringLaw::PointMass { k: 3 };
        let even = sample_degree_sequence(&law, 4, &mut seeded(0)).unwrap();
        assert_eq!(even.degrees, vec![3, 3, 3, 3]);
        assert!(!even.repaired);
        let odd = sample_degree_sequence(&law, 5, &mut seeded(0)).unwrap();
        assert_eq!(odd.degrees, vec![3, 3, 3, 3, 4]);
        assert!(odd.repaired);
        let err = sample_degree_sequence(&OffspringLaw::Poisson { mean: 1.0 }, 5, &mut seeded(0));
        assert!(matches!(err, Err(Error::LawSupportsZero { .. })));
    }
}
