//! Depth-two samplers for the local limits of the four graph models.
//!
//! The bias of the root only depends on its degree and on the number of
//! children of each neighbour, so trees are never grown past the second
//! generation.

use crate::bias::bias_value;
use crate::error::{Error, Result};
use crate::generators::{DegreeSource, ModelConfig};
use crate::kernel::{KernelFunction, DEFAULT_QUAD_POINTS};
use crate::law::{poisson_draw, LawSampler, OffspringLaw};
use rand::Rng;
use rand_distr::{Binomial, Distribution, Gamma};
use serde::Serialize;

/// One draw of the root degree, the neighbours' offspring counts and the
/// resulting root bias.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSample {
    pub d_phi: u64,
    pub child_offspring: Vec<u64>,
    pub delta: f64,
}

impl LimitSample {
    pub fn new(child_offspring: Vec<u64>) -> Self {
        let d_phi = child_offspring.len() as u64;
        let delta = root_bias(d_phi, sum_plus_one(&child_offspring));
        LimitSample {
            d_phi,
            child_offspring,
            delta,
        }
    }
}

fn sum_plus_one(children: &[u64]) -> u128 {
    children.iter().map(|&d| d as u128 + 1).sum()
}

/// `(1/d) Σ (d_j + 1) - d`, zero for a childless root.
pub fn root_bias(d_phi: u64, neighbor_degree_sum: u128) -> f64 {
    bias_value(neighbor_degree_sum, d_phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeLabel {
    Root,
    Old,
    Young,
}

/// Type of a vertex in the Pólya point tree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolyaNodeState {
    pub age: f64,
    pub gamma: f64,
    pub label: NodeLabel,
}

/// `κ(a) = a^{-1/(2+δ)} - 1`, the expected number of younger children of a
/// vertex of age `a` per unit of its gamma strength.
pub fn kappa(age: f64, delta: f64) -> f64 {
    age.powf(-1.0 / (2.0 + delta)) - 1.0
}

#[derive(Clone, Debug)]
pub enum TreeSampler {
    GaltonWatson {
        root: LawSampler,
        child: LawSampler,
        /// Set when the child law is Poisson, so sums can be drawn directly.
        child_poisson_mean: Option<f64>,
    },
    Inhomogeneous {
        lambda: f64,
        beta1: f64,
        kernel: KernelFunction,
        /// Piece probabilities under `f/β_1` and piece values, for
        /// piecewise-constant kernels.
        pieces: Option<(Vec<f64>, Vec<f64>)>,
    },
    Polya {
        delta: f64,
        gamma_young: Gamma<f64>,
        gamma_old: Gamma<f64>,
    },
}

impl TreeSampler {
    pub fn galton_watson(root: &OffspringLaw, child: &OffspringLaw) -> Result<Self> {
        let child_poisson_mean = match child {
            OffspringLaw::Poisson { mean } => Some(*mean),
            _ => None,
        };
        Ok(TreeSampler::GaltonWatson {
            root: root.sampler()?,
            child: child.sampler()?,
            child_poisson_mean,
        })
    }

    pub fn inhomogeneous(lambda: f64, kernel: &KernelFunction) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        let beta1 = kernel.beta(1.0, DEFAULT_QUAD_POINTS);
        let pieces = kernel
            .piece_values()
            .map(|values| (kernel.piece_probabilities(), values.to_vec()));
        Ok(TreeSampler::Inhomogeneous {
            lambda,
            beta1,
            kernel: kernel.clone(),
            pieces,
        })
    }

    pub fn polya(delta: f64) -> Result<Self> {
        if !(delta > -1.0 && delta.is_finite()) {
            return Err(Error::DeltaOutOfRange {
                delta,
                bound: "> -1",
            });
        }
        Ok(TreeSampler::Polya {
            delta,
            gamma_young: Gamma::new(1.0 + delta, 1.0).unwrap(),
            gamma_old: Gamma::new(2.0 + delta, 1.0).unwrap(),
        })
    }

    /// The limit of `config`: Poisson GW for HER, the multi-type Poisson tree
    /// for IER, the `(p, p*)` tree for CM and the Pólya point tree for PAM.
    /// An explicit CM sequence uses its empirical degree law.
    pub fn for_model(config: &ModelConfig) -> Result<Self> {
        config.validate()?;
        match config {
            ModelConfig::Her { lambda } => {
                let law = OffspringLaw::Poisson { mean: *lambda };
                Self::galton_watson(&law, &law)
            }
            ModelConfig::Ier { lambda, kernel } => Self::inhomogeneous(*lambda, kernel),
            ModelConfig::Cm { degrees } => {
                let law = match degrees {
                    DegreeSource::Law(law) => law.clone(),
                    DegreeSource::Sequence { sequence } => OffspringLaw::empirical(sequence)?,
                };
                Self::galton_watson(&law, &law.size_biased()?)
            }
            ModelConfig::Pam { delta } => Self::polya(*delta),
        }
    }

    /// Root degree and root bias, without keeping the children.
    pub fn sample_root<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, f64) {
        match self {
            TreeSampler::GaltonWatson {
                root,
                child,
                child_poisson_mean,
            } => {
                let d_phi = root.sample(rng);
                let sum = match child_poisson_mean {
                    Some(m) => poisson_draw(rng, d_phi as f64 * m) as u128,
                    None => (0..d_phi).map(|_| child.sample(rng) as u128).sum(),
                };
                (d_phi, root_bias(d_phi, sum + d_phi as u128))
            }
            TreeSampler::Inhomogeneous {
                lambda,
                beta1,
                kernel,
                pieces: Some((probs, values)),
            } => {
                let q: f64 = rng.random();
                let d_phi = poisson_draw(rng, lambda * beta1 * kernel.eval(q));
                // Split the children over pieces (multinomial by successive
                // binomials); within a piece the offspring total is Poisson.
                let mut left = d_phi;
                let mut mass_left = 1.0;
                let mut sum = 0u128;
                for (i, (&p, &v)) in probs.iter().zip(values).enumerate() {
                    if left == 0 {
                        break;
                    }
                    let count = if i + 1 == probs.len() || p >= mass_left {
                        left
                    } else {
                        Binomial::new(left, (p / mass_left).min(1.0)).unwrap().sample(rng)
                    };
                    sum += poisson_draw(rng, count as f64 * lambda * beta1 * v) as u128;
                    left -= count;
                    mass_left -= p;
                }
                (d_phi, root_bias(d_phi, sum + d_phi as u128))
            }
            _ => {
                let s = self.sample(rng);
                (s.d_phi, s.delta)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LimitSample {
        match self {
            TreeSampler::GaltonWatson { root, child, .. } => {
                let d_phi = root.sample(rng);
                LimitSample::new((0..d_phi).map(|_| child.sample(rng)).collect())
            }
            TreeSampler::Inhomogeneous {
                lambda,
                beta1,
                kernel,
                ..
            } => {
                let q: f64 = rng.random();
                let d_phi = poisson_draw(rng, lambda * beta1 * kernel.eval(q));
                let children = (0..d_phi)
                    .map(|_| {
                        let t = kernel.sample_biased_type(rng);
                        poisson_draw(rng, lambda * beta1 * kernel.eval(t))
                    })
                    .collect();
                LimitSample::new(children)
            }
            TreeSampler::Polya { .. } => self.sample_polya(rng).0,
        }
    }

    /// A Pólya point tree draw together with the types of the root and of its
    /// children (old child first).
    pub fn sample_polya<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> (LimitSample, PolyaNodeState, Vec<PolyaNodeState>) {
        let TreeSampler::Polya {
            delta,
            gamma_young,
            gamma_old,
        } = self
        else {
            panic!("sample_polya called on a non-Pólya sampler");
        };
        let delta = *delta;
        let a = 1.0 - rng.random::<f64>();
        let root = PolyaNodeState {
            age: a,
            gamma: gamma_young.sample(rng),
            label: NodeLabel::Root,
        };
        let young = poisson_draw(rng, root.gamma * kappa(a, delta));

        let mut states = Vec::with_capacity(young as usize + 1);
        let mut children = Vec::with_capacity(young as usize + 1);

        let u = 1.0 - rng.random::<f64>();
        let old = PolyaNodeState {
            age: u.powf((2.0 + delta) / (1.0 + delta)) * a,
            gamma: gamma_old.sample(rng),
            label: NodeLabel::Old,
        };
        children.push(1u64.saturating_add(poisson_draw(rng, old.gamma * kappa(old.age, delta))));
        states.push(old);

        let root_scale = a.powf(1.0 / (2.0 + delta));
        for _ in 0..young {
            let v: f64 = rng.random();
            let age = (root_scale + v * (1.0 - root_scale)).powf(2.0 + delta).max(a);
            let child = PolyaNodeState {
                age,
                gamma: gamma_young.sample(rng),
                label: NodeLabel::Young,
            };
            children.push(poisson_draw(rng, child.gamma * kappa(age, delta)));
            states.push(child);
        }
        (LimitSample::new(children), root, states)
    }
}

pub fn sample_delta_gw<R: Rng + ?Sized>(
    root_law: &OffspringLaw,
    child_law: &OffspringLaw,
    rng: &mut R,
) -> Result<LimitSample> {
    Ok(TreeSampler::galton_watson(root_law, child_law)?.sample(rng))
}

pub fn sample_delta_ier<R: Rng + ?Sized>(
    lambda: f64,
    kernel: &KernelFunction,
    rng: &mut R,
) -> Result<LimitSample> {
    Ok(TreeSampler::inhomogeneous(lambda, kernel)?.sample(rng))
}

pub fn sample_delta_pam<R: Rng + ?Sized>(delta: f64, rng: &mut R) -> Result<LimitSample> {
    Ok(TreeSampler::polya(delta)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn regular_tree_has_zero_bias() {
        let mut rng = seeded(1);
        let root = OffspringLaw::PointMass { k: 4 };
        let child = OffspringLaw::PointMass { k: 3 };
        for _ in 0..100 {
            let s = sample_delta_gw(&root, &child, &mut rng).unwrap();
            assert_eq!(s.delta, 0.0);
            assert_eq!(s.child_offspring, vec![3; 4]);
        }
    }

    #[test]
    fn delta_matches_definition() {
        let s = LimitSample::new(vec![0, 2, 5]);
        assert_eq!(s.d_phi, 3);
        assert!((s.delta - ((1.0 + 3.0 + 6.0) / 3.0 - 3.0)).abs() < 1e-15);
        assert_eq!(LimitSample::new(vec![]).delta, 0.0);
    }

    #[test]
    fn kappa_shape() {
        for &d in &[-0.5, 0.0, 2.0] {
            assert_eq!(kappa(1.0, d), 0.0);
            let mut prev = f64::INFINITY;
            for i in 1..100 {
                let k = kappa(i as f64 / 100.0, d);
                assert!(k < prev);
                prev = k;
            }
        }
    }

    #[test]
    fn polya_age_ordering() {
        let sampler = TreeSampler::polya(0.5).unwrap();
        let mut rng = seeded(6);
        for _ in 0..2000 {
            let (s, root, kids) = sampler.sample_polya(&mut rng);
            assert_eq!(s.d_phi as usize, kids.len());
            assert_eq!(kids[0].label, NodeLabel::Old);
            assert!(kids[0].age <= root.age);
            assert!(kids[1..].iter().all(|c| c.label == NodeLabel::Young && c.age >= root.age));
            assert!(s.child_offspring[0] >= 1);
        }
        assert!(TreeSampler::polya(-1.0).is_err());
    }

    #[test]
    fn fast_and_full_paths_agree_in_law() {
        let law = OffspringLaw::Poisson { mean: 1.5 };
        let sampler = TreeSampler::galton_watson(&law, &law).unwrap();
        let kernel = KernelFunction::two_block(1.0, 2.0, 0.5).unwrap();
        let ier = TreeSampler::inhomogeneous(1.0, &kernel).unwrap();
        let mut rng = seeded(10);
        let n = 200_000;
        for s in [&sampler, &ier] {
            let fast = (0..n).filter(|_| s.sample_root(&mut rng).1 >= 0.0).count() as f64 / n as f64;
            let full = (0..n).filter(|_| s.sample(&mut rng).delta >= 0.0).count() as f64 / n as f64;
            let se = (2.0 * fast * (1.0 - fast) / n as f64).sqrt();
            assert!((fast - full).abs() < 4.0 * se, "{fast} vs {full}");
        }
    }
}
