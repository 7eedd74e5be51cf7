//! Probability laws on the non-negative integers used as degree and
//! offspring distributions.

use crate::error::{Error, Result};
use crate::special::{ln_gamma, poisson_pmf, poisson_tails, zeta, zeta_tail, CompensatedSum};
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Binomial, Distribution, Geometric, Normal, Poisson, Zeta};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum OffspringLaw {
    Poisson { mean: f64 },
    /// `p_k = k^{-tau} / ζ(tau)` on `k >= 1`.
    Zeta { tau: f64 },
    /// `Z - 1` for `Z ~ Zeta(tau)`: `p_k = (k+1)^{-tau} / ζ(tau)` on `k >= 0`.
    ShiftedZeta { tau: f64 },
    PointMass { k: u64 },
    /// Mass `p_low` at `low` and `1 - p_low` at `high`.
    #[serde(alias = "bimodal")]
    TwoPoint { low: u64, high: u64, p_low: f64 },
    Binomial { n: u64, p: f64 },
    /// `p_k = (1 - q) q^k` on `k >= 0`.
    Geometric { q: f64 },
    /// Explicit finite pmf, index = value.
    Table { pmf: Vec<f64> },
}

const SUPPORT_CAP: u64 = 1 << 40;

impl OffspringLaw {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLaw(msg));
        match *self {
            OffspringLaw::Poisson { mean } if !(mean >= 0.0 && mean.is_finite()) => {
                bad(format!("Poisson mean must be finite and >= 0, got {mean}"))
            }
            OffspringLaw::Zeta { tau } | OffspringLaw::ShiftedZeta { tau } if !(tau > 1.0) => {
                bad(format!("zeta exponent must exceed 1, got {tau}"))
            }
            OffspringLaw::TwoPoint { p_low, .. } if !(0.0..=1.0).contains(&p_low) => {
                bad(format!("two-point weight must lie in [0, 1], got {p_low}"))
            }
            OffspringLaw::Binomial { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("binomial p must lie in [0, 1], got {p}"))
            }
            OffspringLaw::Geometric { q } if !(0.0..1.0).contains(&q) => {
                bad(format!("geometric q must lie in [0, 1), got {q}"))
            }
            OffspringLaw::Table { ref pmf } => {
                if pmf.is_empty() || pmf.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
                    return bad("table entries must be finite and non-negative".into());
                }
                let total: f64 = pmf.iter().sum();
                if (total - 1.0).abs() > 1e-10 {
                    return bad(format!("table sums to {total}, expected 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Empirical law of a finite sample of integers.
    pub fn empirical(values: &[u64]) -> Result<Self> {
        let max = *values
            .iter()
            .max()
            .ok_or_else(|| Error::InvalidLaw("empty degree sequence".into()))?;
        let mut counts = vec![0u64; max as usize + 1];
        for &v in values {
            counts[v as usize] += 1;
        }
        let n = values.len() as f64;
        Ok(OffspringLaw::Table {
            pmf: counts.into_iter().map(|c| c as f64 / n).collect(),
        })
    }

    pub fn pmf(&self, k: u64) -> f64 {
        match *self {
            OffspringLaw::Poisson { mean } => poisson_pmf(mean, k),
            OffspringLaw::Zeta { tau } => {
                if k == 0 {
                    0.0
                } else {
                    (k as f64).powf(-tau) / zeta(tau)
                }
            }
            OffspringLaw::ShiftedZeta { tau } => (k as f64 + 1.0).powf(-tau) / zeta(tau),
            OffspringLaw::PointMass { k: at } => {
                if k == at {
                    1.0
                } else {
                    0.0
                }
            }
            OffspringLaw::TwoPoint { low, high, p_low } => {
                let mut p = 0.0;
                if k == low {
                    p += p_low;
                }
                if k == high {
                    p += 1.0 - p_low;
                }
                p
            }
            OffspringLaw::Binomial { n, p } => binomial_pmf(n, p, k),
            OffspringLaw::Geometric { q } => (1.0 - q) * q.powf(k as f64),
            OffspringLaw::Table { ref pmf } => pmf.get(k as usize).copied().unwrap_or(0.0),
        }
    }

    /// `P{X >= k}`.
    pub fn tail(&self, k: u64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        match *self {
            OffspringLaw::Poisson { mean } => poisson_tails(mean, k).upper,
            OffspringLaw::Zeta { tau } => zeta_tail(tau, k).value / zeta(tau),
            OffspringLaw::ShiftedZeta { tau } => zeta_tail(tau, k + 1).value / zeta(tau),
            OffspringLaw::Geometric { q } => q.powf(k as f64),
            OffspringLaw::Binomial { n, p } => {
                if k > n {
                    return 0.0;
                }
                let mut acc = CompensatedSum::new();
                for j in k..=n {
                    acc.add(binomial_pmf(n, p, j));
                }
                acc.value().min(1.0)
            }
            _ => {
                let max = self.support_max().expect("finite support");
                let mut acc = CompensatedSum::new();
                for j in k..=max {
                    acc.add(self.pmf(j));
                }
                acc.value().min(1.0)
            }
        }
    }

    /// `P{X <= k}`.
    pub fn cdf(&self, k: u64) -> f64 {
        1.0 - self.tail(k + 1)
    }

    pub fn support_max(&self) -> Option<u64> {
        match *self {
            OffspringLaw::PointMass { k } => Some(k),
            OffspringLaw::TwoPoint { low, high, p_low } => Some(if p_low < 1.0 {
                low.max(high)
            } else {
                low
            }),
            OffspringLaw::Binomial { n, .. } => Some(n),
            OffspringLaw::Table { ref pmf } => Some(pmf.len() as u64 - 1),
            OffspringLaw::Poisson { mean } if mean == 0.0 => Some(0),
            _ => None,
        }
    }

    /// Smallest `K` with `P{X > K} <= eps`, or `None` if it exceeds 2^40.
    pub fn support_bound(&self, eps: f64) -> Option<u64> {
        if let Some(max) = self.support_max() {
            return Some(max);
        }
        if self.tail(SUPPORT_CAP + 1) > eps {
            return None;
        }
        let (mut lo, mut hi) = (0u64, 1u64);
        while self.tail(hi + 1) > eps {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.tail(mid + 1) > eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(if self.tail(lo + 1) <= eps { lo } else { hi })
    }

    /// `E[X^power]`, `+inf` when the series diverges. Negative powers need
    /// `P{X = 0} = 0`.
    pub fn moment(&self, power: i32) -> Result<f64> {
        if power < 0 && self.pmf(0) > 0.0 {
            return Err(Error::LawSupportsZero { mass: self.pmf(0) });
        }
        let p = power as f64;
        let value = match *self {
            OffspringLaw::Poisson { mean: l } => match power {
                0 => 1.0,
                1 => l,
                2 => l + l * l,
                3 => l * l * l + 3.0 * l * l + l,
                _ => self.numeric_moment(power),
            },
            OffspringLaw::Zeta { tau } => {
                if tau - p > 1.0 {
                    zeta(tau - p) / zeta(tau)
                } else {
                    f64::INFINITY
                }
            }
            OffspringLaw::ShiftedZeta { tau } => {
                if power < 0 {
                    return Err(Error::LawSupportsZero { mass: self.pmf(0) });
                }
                // E[(Z-1)^p] by binomial expansion over moments of Z.
                let base = OffspringLaw::Zeta { tau };
                let mut acc = 0.0;
                let mut binom = 1.0;
                for j in 0..=power {
                    let zm = base.moment(j)?;
                    if zm.is_infinite() {
                        return Ok(f64::INFINITY);
                    }
                    let sign = if (power - j) % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * binom * zm;
                    binom = binom * (power - j) as f64 / (j + 1) as f64;
                }
                acc
            }
            OffspringLaw::Geometric { q } => match power {
                0 => 1.0,
                1 => q / (1.0 - q),
                2 => q * (1.0 + q) / (1.0 - q).powi(2),
                3 => q * (1.0 + 4.0 * q + q * q) / (1.0 - q).powi(3),
                _ => self.numeric_moment(power),
            },
            _ => self.numeric_moment(power),
        };
        Ok(value)
    }

    fn numeric_moment(&self, power: i32) -> f64 {
        let upper = match self.support_max() {
            Some(m) => m,
            None => self
                .support_bound(1e-20)
                .expect("numeric moments need a light tail")
                .saturating_mul(2)
                .max(64),
        };
        let mut acc = CompensatedSum::new();
        for k in 0..=upper {
            let w = self.pmf(k);
            if w > 0.0 {
                acc.add(w * (k as f64).powi(power));
            }
        }
        acc.value()
    }

    pub fn mean(&self) -> f64 {
        self.moment(1).expect("first moment is always defined")
    }

    /// The law of the number of further children of a vertex reached along
    /// an edge: `p*_k = (k + 1) p_{k+1} / E[X]`.
    pub fn size_biased(&self) -> Result<Self> {
        let mean = self.mean();
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::InvalidLaw(format!(
                "size-biasing needs a finite positive mean, got {mean}"
            )));
        }
        Ok(match *self {
            OffspringLaw::Poisson { mean } => OffspringLaw::Poisson { mean },
            OffspringLaw::Zeta { tau } => OffspringLaw::ShiftedZeta { tau: tau - 1.0 },
            OffspringLaw::PointMass { k } => OffspringLaw::PointMass { k: k - 1 },
            OffspringLaw::TwoPoint { low, high, p_low } if low != high => {
                let wl = low as f64 * p_low;
                let wh = high as f64 * (1.0 - p_low);
                if wl == 0.0 {
                    OffspringLaw::PointMass { k: high - 1 }
                } else if wh == 0.0 {
                    OffspringLaw::PointMass { k: low - 1 }
                } else {
                    OffspringLaw::TwoPoint {
                        low: low - 1,
                        high: high - 1,
                        p_low: wl / (wl + wh),
                    }
                }
            }
            OffspringLaw::TwoPoint { low, .. } => OffspringLaw::PointMass { k: low - 1 },
            OffspringLaw::Binomial { n, p } => OffspringLaw::Binomial { n: n - 1, p },
            _ => {
                let upper = match self.support_max() {
                    Some(m) => m,
                    None => self.support_bound(1e-18).ok_or_else(|| {
                        Error::InvalidLaw("tail too heavy to tabulate".into())
                    })?,
                };
                let mut pmf: Vec<f64> = (0..upper)
                    .map(|k| (k + 1) as f64 * self.pmf(k + 1) / mean)
                    .collect();
                if pmf.is_empty() {
                    pmf.push(1.0);
                }
                let total: f64 = pmf.iter().sum();
                pmf.iter_mut().for_each(|p| *p /= total);
                OffspringLaw::Table { pmf }
            }
        })
    }

    pub fn sampler(&self) -> Result<LawSampler> {
        self.validate()?;
        Ok(match *self {
            OffspringLaw::Poisson { mean } => {
                if mean == 0.0 {
                    LawSampler::Constant(0)
                } else {
                    LawSampler::Poisson(Poisson::new(mean).map_err(|e| {
                        Error::InvalidLaw(format!("Poisson({mean}): {e}"))
                    })?)
                }
            }
            OffspringLaw::Zeta { tau } => LawSampler::Zeta(Zeta::new(tau).unwrap(), 0),
            OffspringLaw::ShiftedZeta { tau } => LawSampler::Zeta(Zeta::new(tau).unwrap(), 1),
            OffspringLaw::PointMass { k } => LawSampler::Constant(k),
            OffspringLaw::TwoPoint { low, high, p_low } => {
                LawSampler::TwoPoint { low, high, p_low }
            }
            OffspringLaw::Binomial { n, p } => LawSampler::Binomial(Binomial::new(n, p).unwrap()),
            OffspringLaw::Geometric { q } => LawSampler::Geometric(Geometric::new(1.0 - q).unwrap()),
            OffspringLaw::Table { ref pmf } => LawSampler::Table(
                WeightedAliasIndex::new(pmf.clone())
                    .map_err(|e| Error::InvalidLaw(format!("table: {e}")))?,
            ),
        })
    }

    /// Parses the compact command-line form, e.g. `poisson:2`, `zeta:3.5`,
    /// `point:3`, `twopoint:1:0.2:20:0.8`, `bimodal:0.1:9:10`,
    /// `binomial:10:0.5`, `geometric:0.5`, `table:0.25:0.5:0.25`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let mut parts = spec.split(':');
        let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();
        let bad = || Error::Config(format!("cannot parse distribution '{spec}'"));
        let float = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let int = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
        let need = |count: usize| if args.len() == count { Ok(()) } else { Err(bad()) };
        let law = match kind.as_str() {
            "poisson" => {
                need(1)?;
                OffspringLaw::Poisson { mean: float(args[0])? }
            }
            "zeta" => {
                need(1)?;
                OffspringLaw::Zeta { tau: float(args[0])? }
            }
            "point" | "point-mass" => {
                need(1)?;
                OffspringLaw::PointMass { k: int(args[0])? }
            }
            "twopoint" | "two-point" => {
                need(4)?;
                let (pa, pb) = (float(args[1])?, float(args[3])?);
                if (pa + pb - 1.0).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "two-point weights {pa} + {pb} do not sum to 1"
                    )));
                }
                OffspringLaw::TwoPoint {
                    low: int(args[0])?,
                    p_low: pa,
                    high: int(args[2])?,
                }
            }
            "bimodal" => {
                need(3)?;
                OffspringLaw::TwoPoint {
                    p_low: float(args[0])?,
                    low: int(args[1])?,
                    high: int(args[2])?,
                }
            }
            "binomial" => {
                need(2)?;
                OffspringLaw::Binomial {
                    n: int(args[0])?,
                    p: float(args[1])?,
                }
            }
            "geometric" => {
                need(1)?;
                OffspringLaw::Geometric { q: float(args[0])? }
            }
            "table" => {
                if args.is_empty() {
                    return Err(bad());
                }
                OffspringLaw::Table {
                    pmf: args.iter().map(|s| float(s)).collect::<Result<_>>()?,
                }
            }
            _ => return Err(bad()),
        };
        law.validate()?;
        Ok(law)
    }
}

fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let (n, k) = (n as f64, k as f64);
    (ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
        + k * p.ln()
        + (n - k) * (-p).ln_1p())
    .exp()
}

/// Pre-built sampler for an [`OffspringLaw`].
#[derive(Clone, Debug)]
pub enum LawSampler {
    Constant(u64),
    Poisson(Poisson<f64>),
    /// Zeta draw minus the shift.
    Zeta(Zeta<f64>, u64),
    TwoPoint { low: u64, high: u64, p_low: f64 },
    Binomial(Binomial),
    Geometric(Geometric),
    Table(WeightedAliasIndex<f64>),
}

impl LawSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            LawSampler::Constant(k) => *k,
            LawSampler::Poisson(d) => d.sample(rng) as u64,
            // `as` saturates, so an infinite draw becomes u64::MAX.
            LawSampler::Zeta(d, shift) => (d.sample(rng) as u64).saturating_sub(*shift),
            LawSampler::TwoPoint { low, high, p_low } => {
                if rng.random::<f64>() < *p_low {
                    *low
                } else {
                    *high
                }
            }
            LawSampler::Binomial(d) => d.sample(rng),
            LawSampler::Geometric(d) => d.sample(rng),
            LawSampler::Table(d) => d.sample(rng) as u64,
        }
    }
}

/// One Poisson draw with a per-call mean. Means beyond 1e15 use the normal
/// approximation, whose relative error there is far below f64 resolution of
/// the count.
pub fn poisson_draw<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    if !mean.is_finite() {
        return u64::MAX;
    }
    if mean < 1e15 {
        Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
    } else {
        let z: f64 = Normal::new(0.0, 1.0).unwrap().sample(rng);
        (mean + mean.sqrt() * z).max(0.0) as u64
    }
}
