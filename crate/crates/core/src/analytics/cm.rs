use super::{Interval, Moments};
use crate::error::{Error, Result};
use crate::law::OffspringLaw;
use crate::special::{zeta, zeta_tail};

/// `E[Δ] = Var(D)/E[D]` and
/// `E[Δ²] = ((E[D³]E[D] - E[D²]²) E[1/D] + E[D²] Var(D)) / E[D]²`.
pub fn cm_moments(law: &OffspringLaw) -> Result<Moments> {
    law.validate()?;
    let zero = law.pmf(0);
    if zero > 0.0 {
        return Err(Error::LawSupportsZero { mass: zero });
    }
    let e1 = law.moment(1)?;
    if !e1.is_finite() {
        return Err(Error::InvalidLaw("degree law has infinite mean".into()));
    }
    let e2 = law.moment(2)?;
    let e3 = law.moment(3)?;
    let inv = law.moment(-1)?;
    let var = e2 - e1 * e1;
    let m1 = if var.is_finite() { var / e1 } else { f64::INFINITY };
    let m2 = if !e3.is_finite() {
        f64::INFINITY
    } else {
        ((e3 * e1 - e2 * e2) * inv + e2 * var) / (e1 * e1)
    };
    Ok(Moments { m1, m2 })
}

/// Bounds on `μ([0, ∞))` for zeta(τ) degrees using roots of degree at most
/// `k_max`:
/// lower `Σ p_k P{d_1 >= k(k-1)}`, upper
/// `min(1, Σ k p_k P{d_1 >= k-1} + P{D > k_max})`, where `d_1` has the
/// size-biased law and `P{d_1 >= m} = ζ_{m+1}(τ-1)/ζ(τ-1)`.
pub fn zeta_cm_significance_bounds(tau: f64, k_max: u64) -> Result<Interval> {
    if !(tau > 2.0 && tau.is_finite()) {
        return Err(Error::TauOutOfRange { tau });
    }
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let z = zeta(tau);
    let zb = zeta(tau - 1.0);
    let biased_tail = |m: u64| zeta_tail(tau - 1.0, m + 1).value / zb;
    let mut lo = 0.0;
    let mut hi = 0.0;
    for k in 1..=k_max {
        let p = (k as f64).powf(-tau) / z;
        lo += p * biased_tail(k * (k - 1));
        hi += k as f64 * p * biased_tail(k - 1);
    }
    hi += zeta_tail(tau, k_max + 1).value / z;
    Ok(Interval {
        lo,
        hi: hi.min(1.0),
    })
}

/// `p + (1-p) (M2(1-p) / (M1 p + M2(1-p)))^{M2}` for degrees `M1` w.p. `p`
/// and `M2` otherwise.
pub fn bimodal_significance(p: f64, m1: u64, m2: u64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) || m1 == 0 || m1 > m2 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < p < 1 and 1 <= M1 <= M2, got p={p}, M1={m1}, M2={m2}"
        )));
    }
    if m1 == m2 {
        return Ok(1.0);
    }
    let (a, b) = (m1 as f64, m2 as f64);
    let q = b * (1.0 - p) / (a * p + b * (1.0 - p));
    Ok(p + (1.0 - p) * q.powf(b))
}

/// Magnitude of the power-law tail exponent, `τ - 2`.
pub fn cm_tail_exponent(tau: f64) -> Result<f64> {
    if !(tau > 2.0) {
        return Err(Error::TauOutOfRange { tau });
    }
    Ok(tau - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::gw_significance_exact;

    #[test]
    fn zeta_four_mean() {
        let m = cm_moments(&OffspringLaw::Zeta { tau: 4.0 }).unwrap();
        let (z2, z3, z4) = (zeta(2.0), zeta(3.0), zeta(4.0));
        let want = (z2 * z4 - z3 * z3) / (z3 * z4);
        assert!((m.m1 - want).abs() < 1e-12);
        assert!((m.m1 - 0.2578).abs() < 1e-4);
        assert!(m.m2.is_infinite());
    }

    #[test]
    fn regular_and_variance_inequality() {
        let m = cm_moments(&OffspringLaw::PointMass { k: 4 }).unwrap();
        assert_eq!((m.m1, m.m2), (0.0, 0.0));
        for law in [
            OffspringLaw::TwoPoint { low: 1, high: 5, p_low: 0.3 },
            OffspringLaw::Zeta { tau: 5.5 },
            OffspringLaw::Table { pmf: vec![0.0, 0.2, 0.5, 0.3] },
        ] {
            let m = cm_moments(&law).unwrap();
            let var_d = law.moment(2).unwrap() - law.mean().powi(2);
            assert!(m.m2 - m.m1 * m.m1 >= var_d - 1e-12, "{law:?}");
        }
        assert!(cm_moments(&OffspringLaw::Poisson { mean: 2.0 }).is_err());
    }

    #[test]
    fn bimodal_examples() {
        assert_eq!(bimodal_significance(0.3, 4, 4).unwrap(), 1.0);
        let v = bimodal_significance(0.1, 9, 10).unwrap();
        assert!((v - (0.1 + 0.9 * (10.0f64 / 11.0).powi(10))).abs() < 1e-15);
        assert!(v < 0.5);
        for &p in &[0.01, 0.3, 0.9] {
            assert!(bimodal_significance(p, 1, 7).unwrap() > 0.5);
        }
        let law = OffspringLaw::TwoPoint { low: 2, high: 6, p_low: 0.4 };
        let exact = gw_significance_exact(&law, &law.size_biased().unwrap(), 1e-13).unwrap();
        assert!((exact.value - bimodal_significance(0.4, 2, 6).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn zeta_bounds_shape() {
        for &tau in &[2.01, 2.1, 2.5, 3.0, 4.0, 6.0, 10.0, 50.0] {
            let b = zeta_cm_significance_bounds(tau, 200).unwrap();
            assert!(b.lo <= b.hi && b.lo > 0.5, "{tau}: {b:?}");
        }
        assert!(zeta_cm_significance_bounds(2.0, 200).is_err());
        assert_eq!(cm_tail_exponent(3.0).unwrap(), 1.0);
        assert_eq!(cm_tail_exponent(4.0).unwrap(), 2.0);
    }
}
