//! Random graph generators: homogeneous and inhomogeneous Erdős–Rényi,
//! configuration model, and preferential attachment with self-loops.

mod cm;
mod her;
mod ier;
mod pam;

pub use cm::{gen_cm, sample_degree_sequence, DegreeSequence};
pub use her::gen_her;
pub use ier::gen_ier;
pub use pam::gen_pam;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::kernel::KernelFunction;
use crate::law::OffspringLaw;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Where configuration-model degrees come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreeSource {
    Sequence { sequence: Vec<u64> },
    Law(OffspringLaw),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelConfig {
    Her { lambda: f64 },
    Ier { lambda: f64, kernel: KernelFunction },
    Cm { degrees: DegreeSource },
    Pam { delta: f64 },
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelConfig::Her { lambda } | ModelConfig::Ier { lambda, .. } => {
                if !(*lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "lambda must be positive and finite, got {lambda}"
                    )));
                }
            }
            ModelConfig::Cm { degrees } => match degrees {
                DegreeSource::Sequence { sequence } => {
                    if sequence.is_empty() {
                        return Err(Error::InvalidParameter("empty degree sequence".into()));
                    }
                    let sum: u64 = sequence.iter().sum();
                    if sum % 2 == 1 {
                        return Err(Error::OddDegreeSum { sum });
                    }
                }
                DegreeSource::Law(law) => {
                    law.validate()?;
                    let zero = law.pmf(0);
                    if zero > 0.0 {
                        return Err(Error::LawSupportsZero { mass: zero });
                    }
                }
            },
            ModelConfig::Pam { delta } => {
                if !(*delta >= -1.0 && delta.is_finite()) {
                    return Err(Error::DeltaOutOfRange {
                        delta: *delta,
                        bound: ">= -1",
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::Her { .. } => "her",
            ModelConfig::Ier { .. } => "ier",
            ModelConfig::Cm { .. } => "cm",
            ModelConfig::Pam { .. } => "pam",
        }
    }

    /// Short parameter label for tables, e.g. `lambda=2`.
    pub fn param_label(&self) -> String {
        match self {
            ModelConfig::Her { lambda } | ModelConfig::Ier { lambda, .. } => format!("lambda={lambda}"),
            ModelConfig::Pam { delta } => format!("delta={delta}"),
            ModelConfig::Cm { degrees } => match degrees {
                DegreeSource::Sequence { sequence } => format!("sequence[{}]", sequence.len()),
                DegreeSource::Law(law) => law_label(law),
            },
        }
    }

    /// One graph on `n` vertices. An explicit CM degree sequence fixes `n`
    /// and the argument is ignored.
    pub fn generate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<MultiGraph> {
        self.validate()?;
        match self {
            ModelConfig::Her { lambda } => gen_her(n, *lambda, rng),
            ModelConfig::Ier { lambda, kernel } => gen_ier(n, *lambda, kernel, rng),
            ModelConfig::Cm { degrees } => match degrees {
                DegreeSource::Sequence { sequence } => gen_cm(sequence, rng),
                DegreeSource::Law(law) => {
                    let seq = sample_degree_sequence(law, n, rng)?;
                    gen_cm(&seq.degrees, rng)
                }
            },
            ModelConfig::Pam { delta } => gen_pam(n, *delta, rng),
        }
    }
}

fn law_label(law: &OffspringLaw) -> String {
    match law {
        OffspringLaw::Poisson { mean } => format!("poisson:{mean}"),
        OffspringLaw::Zeta { tau } => format!("zeta:{tau}"),
        OffspringLaw::ShiftedZeta { tau } => format!("shifted-zeta:{tau}"),
        OffspringLaw::PointMass { k } => format!("point:{k}"),
        OffspringLaw::TwoPoint { low, high, p_low } => {
            format!("twopoint:{low}:{p_low}:{high}:{}", 1.0 - p_low)
        }
        OffspringLaw::Binomial { n, p } => format!("binomial:{n}:{p}"),
        OffspringLaw::Geometric { q } => format!("geometric:{q}"),
        OffspringLaw::Table { pmf } => format!("table[{}]", pmf.len()),
    }
}

/// Visits the pairs `(v, w)`, `w < v < n`, each included independently with
/// probability `p`, in `O(n + pairs)` time by geometric skipping.
fn skip_pairs<R, F>(n: usize, p: f64, rng: &mut R, mut visit: F)
where
    R: Rng + ?Sized,
    F: FnMut(&mut R, usize, usize),
{
    if n < 2 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                visit(rng, v, w);
            }
        }
        return;
    }
    let log_q = (-p).ln_1p();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = rng.random();
        let skip = ((-r).ln_1p() / log_q).floor();
        w += 1 + skip.min(i64::MAX as f64 / 4.0) as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            visit(rng, v, w as usize);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn skipping_is_uniform_over_pairs() {
        let n = 12;
        let mut hits = vec![0u32; n * n];
        let mut rng = seeded(3);
        let reps = 20_000;
        for _ in 0..reps {
            skip_pairs(n, 0.3, &mut rng, |_, v, w| hits[v * n + w] += 1);
        }
        for v in 1..n {
            for w in 0..v {
                let f = hits[v * n + w] as f64 / reps as f64;
                assert!((f - 0.3).abs() < 0.015, "pair ({v},{w}): {f}");
            }
        }
    }

    #[test]
    fn config_json_forms() {
        let c: ModelConfig = serde_json::from_str(r#"{"model":"her","lambda":2.0}"#).unwrap();
        assert_eq!(c, ModelConfig::Her { lambda: 2.0 });
        let c: ModelConfig =
            serde_json::from_str(r#"{"model":"cm","degrees":{"law":"zeta","tau":3.5}}"#).unwrap();
        assert_eq!(c.param_label(), "zeta:3.5");
        let c: ModelConfig =
            serde_json::from_str(r#"{"model":"cm","degrees":{"sequence":[1,1,3]}}"#).unwrap();
        assert!(matches!(c.validate(), Err(Error::OddDegreeSum { sum: 5 })));
        let c: ModelConfig = serde_json::from_str(
            r#"{"model":"ier","lambda":1.0,"kernel":{"type":"piecewise-constant","breakpoints":[0.5],"values":[1,2]}}"#,
        )
        .unwrap();
        assert_eq!(c.name(), "ier");
        assert!(ModelConfig::Pam { delta: -1.5 }.validate().is_err());
        assert!(ModelConfig::Her { lambda: 0.0 }.validate().is_err());
    }
}
