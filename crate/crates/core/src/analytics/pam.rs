use super::{Interval, McEstimate};
use crate::error::{Error, Result};
use crate::limit::kappa;
use crate::rng::{stream, Domain};
use crate::special::{ln_gamma, ln_gamma_ratio, poisson_tails, CompensatedSum, SeriesResult};
use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;

const MAX_TERMS: u64 = 100_000_000;

fn check_delta(delta: f64) -> Result<()> {
    if delta > -1.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::DeltaOutOfRange {
            delta,
            bound: "delta > -1",
        })
    }
}

/// `P{d_φ = k} = (2+δ)Γ(3+2δ)Γ(k+δ) / (Γ(1+δ)Γ(k+3+2δ))`, zero for `k = 0`.
pub fn pam_root_pmf(delta: f64, k: u64) -> Result<f64> {
    check_delta(delta)?;
    if k == 0 {
        return Ok(0.0);
    }
    let ln = (2.0 + delta).ln() + ln_gamma(3.0 + 2.0 * delta) - ln_gamma(1.0 + delta)
        + ln_gamma_ratio(k as f64, delta, 3.0 + 2.0 * delta);
    Ok(ln.exp())
}

/// `P{d_φ >= k} = Γ(3+2δ)Γ(k+δ) / (Γ(1+δ)Γ(k+2+2δ))` for `k >= 1`.
pub fn pam_root_tail(delta: f64, k: u64) -> Result<f64> {
    check_delta(delta)?;
    if k <= 1 {
        return Ok(1.0);
    }
    let ln = ln_gamma(3.0 + 2.0 * delta) - ln_gamma(1.0 + delta)
        + ln_gamma_ratio(k as f64, delta, 2.0 + 2.0 * delta);
    Ok(ln.exp())
}

/// `p_δ = E[1/d_φ]`, summed until `P{d_φ > K}/(K+1)` drops below `tol`.
pub fn pam_p_delta(delta: f64, tol: f64) -> Result<SeriesResult> {
    check_delta(delta)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let mut acc = CompensatedSum::new();
    let mut pmf = pam_root_pmf(delta, 1)?;
    let mut k = 1u64;
    loop {
        acc.add(pmf / k as f64);
        let rest = pam_root_tail(delta, k + 1)? / (k + 1) as f64;
        if rest <= tol || k >= MAX_TERMS {
            return Ok(SeriesResult {
                value: acc.value(),
                truncation_bound: rest + 1e-15 * acc.value(),
                terms_used: k,
            });
        }
        k += 1;
        // Resynchronise the recurrence now and then to stop drift.
        pmf = if k.is_multiple_of(4096) {
            pam_root_pmf(delta, k)?
        } else {
            pmf * (k as f64 - 1.0 + delta) / (k as f64 + 2.0 + 2.0 * delta)
        };
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeanEnclosure {
    Finite(Interval),
    Infinite,
}

/// `E[Δ_φ] ∈ (2+δ)/δ (1/2 + p_δ) + [-(1-p_δ), 0]` for `δ > 0`, infinite
/// otherwise. The series error in `p_δ` widens the interval.
pub fn pam_mean_interval(delta: f64, tol: f64) -> Result<MeanEnclosure> {
    check_delta(delta)?;
    if delta <= 0.0 {
        return Ok(MeanEnclosure::Infinite);
    }
    let p = pam_p_delta(delta, tol)?;
    let (pv, e) = (p.value, p.truncation_bound);
    let scale = (2.0 + delta) / delta;
    let centre = scale * (0.5 + pv);
    Ok(MeanEnclosure::Finite(Interval {
        lo: centre - (1.0 - pv) - (scale + 1.0) * e,
        hi: centre + scale * e,
    }))
}

/// Predicted power-law exponents of `μ([x, ∞))`: the lower bound always, the
/// upper bound for `δ >= -1/2` only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailExponents {
    pub lower_exp: f64,
    pub upper_exp: Option<f64>,
}

pub fn pam_tail_exponents(delta: f64) -> Result<TailExponents> {
    check_delta(delta)?;
    let tau = 3.0 + delta;
    let lower_exp = if delta < 0.0 { 3.0 * tau - 4.0 } else { 2.0 * tau - 1.0 };
    let upper_exp = if delta < -0.5 {
        None
    } else if delta < 0.0 {
        Some(3.0 - tau)
    } else if delta == 0.0 {
        Some(1.0)
    } else {
        Some(tau - 3.0)
    };
    Ok(TailExponents {
        lower_exp,
        upper_exp,
    })
}

/// `E[Δ_φ²] < ∞` iff `δ > 1`.
pub fn pam_second_moment_finite(delta: f64) -> Result<bool> {
    check_delta(delta)?;
    Ok(delta > 1.0)
}

/// `Σ_{k<=k_max} P{d_φ = k} P{d_1 >= k(k-1) | d_φ = k}`, where `d_1` counts
/// the children of the root's older neighbour.
///
/// Given `d_φ = k` the root age is `u^{2+δ}` with `u ~ Beta(3+2δ, k)`. The
/// Poisson layer is integrated out exactly, so only the ages and the gamma
/// strength of the older neighbour are sampled.
pub fn pam_significance_lower_bound(
    delta: f64,
    k_max: u64,
    samples_per_k: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_delta(delta)?;
    if k_max == 0 || samples_per_k < 2 {
        return Err(Error::InvalidParameter(
            "need k_max >= 1 and at least 2 samples per k".into(),
        ));
    }
    let gamma_old = Gamma::new(2.0 + delta, 1.0)
        .map_err(|e| Error::InvalidParameter(format!("gamma law: {e}")))?;
    let terms: Vec<Result<(f64, f64)>> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let w = pam_root_pmf(delta, k)?;
            if k == 1 {
                return Ok((w, 0.0));
            }
            let beta = Beta::new(3.0 + 2.0 * delta, k as f64)
                .map_err(|e| Error::InvalidParameter(format!("beta law: {e}")))?;
            // d_1 = 1 + Poisson(Γκ(age)), so d_1 >= k(k-1) iff the Poisson part
            // reaches k(k-1) - 1.
            let need = k * (k - 1) - 1;
            let mut rng = stream(seed, Domain::Fig5, k);
            let mut sum = CompensatedSum::new();
            let mut sq = CompensatedSum::new();
            for _ in 0..samples_per_k {
                let root_age = beta.sample(&mut rng).powf(2.0 + delta);
                let u = 1.0 - rng.random::<f64>();
                let age = u.powf((2.0 + delta) / (1.0 + delta)) * root_age;
                let mean = gamma_old.sample(&mut rng) * kappa(age, delta);
                let q = poisson_tails(mean, need).upper;
                sum.add(q);
                sq.add(q * q);
            }
            let n = samples_per_k as f64;
            let m = sum.value() / n;
            let var = ((sq.value() - n * m * m) / (n - 1.0)).max(0.0);
            Ok((w * m, w * w * var / n))
        })
        .collect();
    let mut est = CompensatedSum::new();
    let mut var = 0.0;
    for t in terms {
        let (e, v) = t?;
        est.add(e);
        var += v;
    }
    Ok(McEstimate {
        estimate: est.value(),
        std_err: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_closed_forms() {
        for &d in &[-0.9, -0.5, 0.0, 0.7, 2.0, 10.0] {
            let p1 = pam_root_pmf(d, 1).unwrap();
            assert!((p1 - (2.0 + d) / (3.0 + 2.0 * d)).abs() < 1e-13);
            let mut s = 0.0;
            for k in 1..=2000 {
                s += pam_root_pmf(d, k).unwrap();
            }
            let tail = pam_root_tail(d, 2001).unwrap();
            assert!((s + tail - 1.0).abs() < 1e-10, "delta={d}");
            assert!((1.0 - pam_root_tail(d, 2).unwrap() - p1).abs() < 1e-13);
        }
        assert!((pam_root_pmf(0.0, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(pam_root_pmf(-1.0, 3).is_err());
    }

    #[test]
    fn pmf_power_law() {
        let d = 0.5;
        let k = 1_000_000u64;
        let r = pam_root_pmf(d, 2 * k).unwrap() / pam_root_pmf(d, k).unwrap();
        assert!((r.log2() + 3.0 + d).abs() < 1e-4);
    }

    #[test]
    fn mean_interval_shape() {
        assert_eq!(pam_mean_interval(-0.5, 1e-10).unwrap(), MeanEnclosure::Infinite);
        assert_eq!(pam_mean_interval(0.0, 1e-10).unwrap(), MeanEnclosure::Infinite);
        let p = pam_p_delta(2.0, 1e-12).unwrap().value;
        let MeanEnclosure::Finite(i) = pam_mean_interval(2.0, 1e-12).unwrap() else {
            panic!()
        };
        assert!(i.lo <= i.hi);
        assert!((i.width() - (1.0 - p)).abs() < 1e-9);
        assert!(0.0 < 1.0 - p && 1.0 - p < 1.0);
    }

    #[test]
    fn exponent_cases() {
        let e = pam_tail_exponents(0.0).unwrap();
        assert_eq!((e.lower_exp, e.upper_exp), (5.0, Some(1.0)));
        assert_eq!(pam_tail_exponents(1.0).unwrap().upper_exp, Some(1.0));
        assert_eq!(pam_tail_exponents(-0.75).unwrap().upper_exp, None);
        assert_eq!(pam_tail_exponents(-0.5).unwrap().upper_exp, Some(0.5));
        assert_eq!(pam_tail_exponents(-0.5).unwrap().lower_exp, 3.5);
    }

    #[test]
    fn lower_bound_matches_direct_tree_simulation() {
        use crate::limit::TreeSampler;
        use crate::rng::seeded;
        let delta = 1.0;
        let a = pam_significance_lower_bound(delta, 3, 200_000, 9).unwrap();
        assert_eq!(a, pam_significance_lower_bound(delta, 3, 200_000, 9).unwrap());
        let one = pam_significance_lower_bound(delta, 1, 2, 9).unwrap();
        assert!((one.estimate - 0.6).abs() < 1e-13 && one.std_err == 0.0);

        let sampler = TreeSampler::polya(delta).unwrap();
        let mut rng = seeded(5);
        let n = 1_000_000;
        let mut hits = 0u64;
        for _ in 0..n {
            let (s, _, _) = sampler.sample_polya(&mut rng);
            let k = s.d_phi;
            if (1..=3).contains(&k) && s.child_offspring[0] >= k * (k - 1) {
                hits += 1;
            }
        }
        let f = hits as f64 / n as f64;
        let se = (f * (1.0 - f) / n as f64).sqrt();
        assert!((f - a.estimate).abs() < 4.0 * (se + a.std_err), "{f} vs {a:?}");
    }
}
