//! Series, closed forms and quadratures for the limiting bias law.

mod cm;
mod gw;
mod her;
mod ier;
mod pam;

pub use cm::{bimodal_significance, cm_moments, cm_tail_exponent, zeta_cm_significance_bounds};
pub use gw::{conjecture_probability, gw_significance_exact, gw_tail_exact};
pub use her::{her_moments, her_significance, her_tail_asymptote, her_tail_series};
pub use ier::{
    ier_beta_x_asymptote, ier_limit_significance, ier_moments, ier_significance_mc, BetaAsymptote,
    BetaCase,
};
pub use pam::{
    pam_mean_interval, pam_p_delta, pam_root_pmf, pam_root_tail, pam_second_moment_finite,
    pam_significance_lower_bound, pam_tail_exponents, MeanEnclosure, TailExponents,
};

use serde::Serialize;

/// First and second moments of the limiting root bias. Either may be
/// `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub m1: f64,
    pub m2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn widen(&self, by: f64) -> Interval {
        Interval {
            lo: self.lo - by,
            hi: self.hi + by,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A Monte Carlo estimate and its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_err: f64,
}
