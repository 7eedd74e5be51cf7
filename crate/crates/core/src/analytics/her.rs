use super::Moments;
use crate::error::{Error, Result};
use crate::law::OffspringLaw;
use crate::special::{poisson_inverse_moment, poisson_pmf, poisson_tails, CompensatedSum, SeriesResult};
use std::f64::consts::{E, PI};

/// `μ([0, ∞))` for the Poisson(λ) tree:
/// `Σ_k P{Poi(λ) = k} P{Poi(λk) >= k(k-1)}`.
pub fn her_significance(lambda: f64, tol: f64) -> Result<SeriesResult> {
    her_tail_series(lambda, 0.0, tol)
}

/// `μ([x, ∞)) = Σ_k P{Poi(λ) = k} P{Poi(λk) >= k(k-1) + kx}`, plus the
/// `k = 0` atom when `x <= 0`.
pub fn her_tail_series(lambda: f64, x: f64, tol: f64) -> Result<SeriesResult> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let root = OffspringLaw::Poisson { mean: lambda };
    let k_max = root.support_bound(tol / 2.0).ok_or(Error::TruncationFailure {
        tol,
        reason: "Poisson root tail".into(),
    })?;
    let mut acc = CompensatedSum::new();
    let mut bound = root.tail(k_max + 1);
    if x <= 0.0 {
        acc.add(poisson_pmf(lambda, 0));
    }
    for k in 1..=k_max {
        let w = poisson_pmf(lambda, k);
        if w == 0.0 {
            continue;
        }
        let kf = k as f64;
        let t = kf * (kf - 1.0) + kf * x;
        let m = if t <= 0.0 { 0 } else { t.ceil() as u64 };
        let tails = poisson_tails(lambda * kf, m);
        acc.add(w * tails.upper);
        bound += w * tails.error;
    }
    let value = acc.value();
    Ok(SeriesResult {
        value,
        truncation_bound: bound + 4.0 * f64::EPSILON * value,
        terms_used: k_max + 1,
    })
}

/// `E[Δ] = 1 - (λ+1)e^{-λ}` and
/// `E[Δ²] = λ(Σ_{k>=1} k^{-1} P{Poi(λ)=k} + 1) - (λ+1)² e^{-λ} + 1`.
pub fn her_moments(lambda: f64) -> Result<Moments> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let e = (-lambda).exp();
    // 1 - e^{-λ} - λe^{-λ} without losing the leading terms for small λ.
    let m1 = -(-lambda).exp_m1() - lambda * e;
    let inv = poisson_inverse_moment(lambda).value;
    let m2 = lambda * (inv + 1.0) - (lambda + 1.0).powi(2) * e + 1.0;
    Ok(Moments { m1, m2 })
}

/// `(2πx)^{-1/2} λ e^{-2λ} exp(-x log(x / (λe)))`, defined for `x > λe`.
pub fn her_tail_asymptote(lambda: f64, x: f64) -> Result<f64> {
    let bound = lambda * E;
    if !(x > bound) {
        return Err(Error::DomainError { x, bound });
    }
    let ln = -0.5 * (2.0 * PI * x).ln() + lambda.ln() - 2.0 * lambda - x * (x / bound).ln();
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_closed_forms() {
        let m = her_moments(2.0).unwrap();
        assert!((m.m1 - (1.0 - 3.0 * (-2.0f64).exp())).abs() < 1e-15);
        let tiny = her_moments(1e-8).unwrap();
        assert!(tiny.m1.abs() < 1e-6 && tiny.m2.abs() < 1e-6);
        assert!((her_moments(50.0).unwrap().m1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn small_and_large_lambda() {
        assert!(her_significance(1e-6, 1e-12).unwrap().value >= 0.999);
        let v = her_significance(500.0, 1e-10).unwrap().value;
        assert!((0.5..=0.55).contains(&v), "{v}");
    }

    #[test]
    fn asymptote_formula() {
        let v = her_tail_asymptote(1.0, 10.0).unwrap();
        let want = -10.0 * (10.0f64 / E).ln() - 2.0 + (1.0 / (20.0 * PI).sqrt()).ln();
        assert!((v.ln() - want).abs() < 1e-12);
        assert!(her_tail_asymptote(1.0, 2.0).is_err());
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let y = her_tail_asymptote(1.5, 4.1 + i as f64 * 0.5).unwrap();
            assert!(y < prev);
            prev = y;
        }
    }
}
