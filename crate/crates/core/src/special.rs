//! Special functions: log-gamma ratios, Poisson probabilities and tails in
//! log space, and the Hurwitz-type tail sums of the Riemann zeta function.
//!
//! The Poisson density follows Loader's saddle-point form
//! `exp(-stirlerr(k) - bd0(k, m)) / sqrt(2 pi k)`, which keeps full relative
//! precision when both `k` and the mean are in the millions.

use serde::Serialize;
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// A truncated series together with a certified bound on what was left out.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub truncation_bound: f64,
    pub terms_used: u64,
}

impl SeriesResult {
    pub fn exact(value: f64) -> Self {
        SeriesResult {
            value,
            truncation_bound: 0.0,
            terms_used: 0,
        }
    }
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn stirling_correction(z: f64) -> f64 {
    let z2 = z * z;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z
}

/// `ln Γ(x + a) - ln Γ(x + b)`, stable for large `x`.
pub fn ln_gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    let z1 = x + a;
    let z2 = x + b;
    if z1.min(z2) < 20.0 {
        return ln_gamma(z1) - ln_gamma(z2);
    }
    let d = a - b;
    (z1 - 0.5) * (d / z2).ln_1p() + d * z2.ln() - d + stirling_correction(z1)
        - stirling_correction(z2)
}

/// `ln k! - [(k + 1/2) ln k - k + ln sqrt(2 pi)]` for integer `k >= 1`.
fn stirlerr(k: u64) -> f64 {
    let n = k as f64;
    if k <= 15 {
        ln_gamma(n + 1.0) - (n + 0.5) * n.ln() + n - LN_SQRT_2PI
    } else {
        stirling_correction(n)
    }
}

/// Deviance term `x ln(x / m) + m - x`, computed without cancellation.
fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let v2 = v * v;
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `ln P{X = k}` for `X ~ Poisson(mean)`.
pub fn poisson_ln_pmf(mean: f64, k: u64) -> f64 {
    if mean <= 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if k == 0 {
        return -mean;
    }
    let x = k as f64;
    -stirlerr(k) - bd0(x, mean) - 0.5 * (2.0 * PI * x).ln()
}

pub fn poisson_pmf(mean: f64, k: u64) -> f64 {
    poisson_ln_pmf(mean, k).exp()
}

/// Both tails of a Poisson law at a threshold, with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonTails {
    /// `P{X >= k}`
    pub upper: f64,
    /// `P{X < k}`
    pub lower: f64,
    pub error: f64,
}

const REL_STOP: f64 = 1e-17;

/// Tails of `Poisson(mean)` at `k`. Whichever side of `k` lies away from the
/// mean is summed directly from `k` outward; the other is its complement.
pub fn poisson_tails(mean: f64, k: u64) -> PoissonTails {
    if k == 0 {
        return PoissonTails {
            upper: 1.0,
            lower: 0.0,
            error: 0.0,
        };
    }
    if mean <= 0.0 {
        return PoissonTails {
            upper: 0.0,
            lower: 1.0,
            error: 0.0,
        };
    }
    if k as f64 > mean {
        let ln_first = poisson_ln_pmf(mean, k);
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut j = k as f64;
        let remainder = loop {
            let r = mean / (j + 1.0);
            term *= r;
            sum += term;
            j += 1.0;
            if term < REL_STOP * sum {
                let r = mean / (j + 1.0);
                break term * r / (1.0 - r);
            }
        };
        let scale = ln_first.exp();
        let upper = (scale * sum).min(1.0);
        PoissonTails {
            upper,
            lower: 1.0 - upper,
            error: scale * remainder + 4.0 * f64::EPSILON * upper,
        }
    } else {
        let ln_first = poisson_ln_pmf(mean, k - 1);
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut j = (k - 1) as f64;
        let mut remainder = 0.0;
        while j > 0.0 {
            let r = j / mean;
            term *= r;
            sum += term;
            j -= 1.0;
            if term < REL_STOP * sum {
                let r = j / mean;
                remainder = term * r / (1.0 - r);
                break;
            }
        }
        let scale = ln_first.exp();
        let lower = (scale * sum).min(1.0);
        PoissonTails {
            upper: 1.0 - lower,
            lower,
            error: scale * remainder + 4.0 * f64::EPSILON,
        }
    }
}

/// `Σ_{k>=1} k^{-1} P{X = k}` for `X ~ Poisson(mean)`.
pub fn poisson_inverse_moment(mean: f64) -> SeriesResult {
    if mean <= 0.0 {
        return SeriesResult::exact(0.0);
    }
    let start = mean.floor().max(1.0) as u64;
    let first = poisson_pmf(mean, start) / start as f64;
    let mut acc = CompensatedSum::new();
    acc.add(first);
    let mut terms = 1u64;
    let mut bound = 0.0;

    // Upward: ratio mean k / (k+1)^2 < 1 once k >= mean.
    let mut term = first;
    let mut k = start as f64;
    loop {
        let r = mean * k / ((k + 1.0) * (k + 1.0));
        term *= r;
        k += 1.0;
        acc.add(term);
        terms += 1;
        if term < REL_STOP * acc.value() || term == 0.0 {
            let r = mean * k / ((k + 1.0) * (k + 1.0));
            bound += term * r / (1.0 - r);
            break;
        }
    }

    // Downward to k = 1. The 1/k factor can make terms grow for small k, so
    // stop early only when the whole remaining Poisson mass is negligible.
    let mut term = first;
    let mut k = start;
    while k > 1 {
        let kf = k as f64;
        term *= kf * kf / (mean * (kf - 1.0));
        k -= 1;
        acc.add(term);
        terms += 1;
        if term < 1e-20 * acc.value() {
            let rest = poisson_tails(mean, k).lower;
            if rest < REL_STOP * acc.value() {
                bound += rest;
                break;
            }
        }
    }
    SeriesResult {
        value: acc.value(),
        truncation_bound: bound + 4.0 * f64::EPSILON * acc.value(),
        terms_used: terms,
    }
}

/// `ζ_m(s) = Σ_{j>=m} j^{-s}` for `s > 1`, `m >= 1`.
///
/// Sums explicitly up to `N = max(m, 32)` and closes with an Euler-Maclaurin
/// tail. Because `x^{-s}` is completely monotone the error is bounded by the
/// first omitted correction term, which is what `truncation_bound` reports.
pub fn zeta_tail(s: f64, m: u64) -> SeriesResult {
    assert!(s > 1.0, "zeta_tail requires s > 1");
    let m = m.max(1);
    let n = m.max(32);
    let mut acc = CompensatedSum::new();
    for j in m..n {
        acc.add((j as f64).powf(-s));
    }
    let nf = n as f64;
    let base = nf.powf(-s);
    let inv = 1.0 / nf;
    let inv2 = inv * inv;
    let mut rising = s;
    let mut tail = nf * base / (s - 1.0) + 0.5 * base;
    tail += rising * base * inv / 12.0;
    rising *= (s + 1.0) * (s + 2.0);
    tail -= rising * base * inv * inv2 / 720.0;
    rising *= (s + 3.0) * (s + 4.0);
    tail += rising * base * inv * inv2 * inv2 / 30240.0;
    rising *= (s + 5.0) * (s + 6.0);
    let omitted = rising * base * inv * inv2 * inv2 * inv2 / 1_209_600.0;
    acc.add(tail);
    let value = acc.value();
    SeriesResult {
        value,
        truncation_bound: omitted + 4.0 * f64::EPSILON * value,
        terms_used: n - m + 4,
    }
}

pub fn zeta(s: f64) -> f64 {
    zeta_tail(s, 1).value
}

/// Elementary bracket `∫_m^∞ x^{-s} dx <= ζ_m(s) <= m^{-s} + ∫_m^∞ x^{-s} dx`.
pub fn zeta_tail_bracket(s: f64, m: u64) -> (f64, f64) {
    let mf = m.max(1) as f64;
    let integral = mf.powf(1.0 - s) / (s - 1.0);
    (integral, integral + mf.powf(-s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_pmf(mean: f64, k: u64) -> f64 {
        let mut p = (-mean).exp();
        for j in 1..=k {
            p *= mean / j as f64;
        }
        p
    }

    #[test]
    fn pmf_matches_direct_product() {
        for &mean in &[0.3, 1.0, 4.5, 20.0, 100.0] {
            for k in 0..200u64 {
                let want = naive_pmf(mean, k);
                let got = poisson_pmf(mean, k);
                if want > 1e-250 {
                    assert!(
                        ((got - want) / want).abs() < 1e-12,
                        "mean {mean} k {k}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn pmf_sums_to_one_at_large_mean() {
        let mean = 2.5e5;
        let mut acc = CompensatedSum::new();
        for k in 240_000..260_000u64 {
            acc.add(poisson_pmf(mean, k));
        }
        assert!((acc.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tails_agree_with_direct_summation() {
        for &mean in &[0.5, 3.0, 17.0, 60.0] {
            for k in 0..150u64 {
                let lower: f64 = (0..k).map(|j| naive_pmf(mean, j)).sum();
                let t = poisson_tails(mean, k);
                assert!((t.lower - lower).abs() < 1e-13, "mean {mean} k {k}");
                assert!((t.upper + t.lower - 1.0).abs() < 1e-15);
                assert!(t.error >= 0.0 && t.error < 1e-14);
            }
        }
    }

    #[test]
    fn far_upper_tail_keeps_relative_precision() {
        // P{Poisson(1) >= 30} is dominated by its first term.
        let t = poisson_tails(1.0, 30);
        let first = naive_pmf(1.0, 30);
        assert!(t.upper > first && t.upper < first * 1.04);
        assert_eq!(poisson_tails(5.0, 0).upper, 1.0);
        assert_eq!(poisson_tails(0.0, 3).upper, 0.0);
    }

    #[test]
    fn inverse_moment_matches_direct_sum() {
        for &mean in &[0.01, 0.7, 2.0, 9.0, 55.0] {
            let want: f64 = (1..400u64).map(|k| naive_pmf(mean, k) / k as f64).sum();
            let got = poisson_inverse_moment(mean);
            assert!((got.value - want).abs() < 1e-14, "mean {mean}");
        }
    }

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(3.0) - 1.202_056_903_159_594_2).abs() < 1e-14);
        // ζ(1.1) = 10.5844484649508098...
        assert!((zeta(1.1) - 10.584_448_464_950_81).abs() < 1e-11);
    }

    #[test]
    fn zeta_tail_sits_inside_integral_bracket() {
        for &s in &[1.1, 1.5, 2.5, 7.0] {
            for &m in &[1u64, 2, 10, 57, 1000, 40_000] {
                let t = zeta_tail(s, m).value;
                let (lo, hi) = zeta_tail_bracket(s, m);
                assert!(lo <= t && t <= hi, "s {s} m {m}: {lo} {t} {hi}");
            }
        }
    }

    #[test]
    fn zeta_tail_consistent_with_partial_sums() {
        let s = 2.3;
        let head: f64 = (1..100u64).map(|j| (j as f64).powf(-s)).sum();
        assert!((zeta(s) - head - zeta_tail(s, 100).value).abs() < 1e-14);
    }

    #[test]
    fn gamma_ratio_matches_lgamma() {
        for &x in &[25.0, 300.0, 1e4] {
            let direct = ln_gamma(x + 0.3) - ln_gamma(x + 3.6);
            assert!((ln_gamma_ratio(x, 0.3, 3.6) - direct).abs() < 1e-10);
        }
        assert!((ln_gamma_ratio(2.0, 0.5, 1.0) - (ln_gamma(2.5) - ln_gamma(3.0))).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-17);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-14).abs() < 1e-20);
    }
}
