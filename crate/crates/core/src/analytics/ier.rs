use super::{McEstimate, Moments};
use crate::error::{Error, Result};
use crate::estimation::run_sampler_experiment;
use crate::kernel::KernelFunction;
use crate::limit::TreeSampler;
use crate::special::poisson_inverse_moment;
use serde::Serialize;

/// Direct simulation of the multi-type tree.
pub fn ier_significance_mc(
    lambda: f64,
    kernel: &KernelFunction,
    n_samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    let stats = run_sampler_experiment(&TreeSampler::inhomogeneous(lambda, kernel)?, n_samples, seed)?;
    Ok(McEstimate {
        estimate: stats.significance,
        std_err: stats.se_significance,
    })
}

/// `P{f(Q) < f(Q')} + P{f(Q) = f(Q')}/2` with `Q` uniform and `Q'` of density
/// `f/β_1`. Exact for piecewise-constant kernels.
pub fn ier_limit_significance(kernel: &KernelFunction, quad_points: usize) -> f64 {
    let mut atoms = kernel.value_atoms(quad_points);
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let beta1: f64 = atoms.iter().map(|(v, w)| v * w).sum();
    let mut below = 0.0; // uniform mass strictly below the current value
    let mut total = 0.0;
    let mut i = 0;
    while i < atoms.len() {
        let v = atoms[i].0;
        let (mut uniform, mut biased) = (0.0, 0.0);
        while i < atoms.len() && atoms[i].0 == v {
            uniform += atoms[i].1;
            biased += atoms[i].1 * v / beta1;
            i += 1;
        }
        total += biased * (below + 0.5 * uniform);
        below += uniform;
    }
    total
}

/// Closed-form first and second moments of the root bias.
pub fn ier_moments(lambda: f64, kernel: &KernelFunction, quad_points: usize) -> Result<Moments> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let b1 = kernel.beta(1.0, quad_points);
    let b2 = kernel.beta(2.0, quad_points);
    let b3 = kernel.beta(3.0, quad_points);
    let rate = lambda * b1;
    let exp_int = kernel.integrate(|v| (-rate * v).exp(), quad_points);
    // 1 - ∫e^{-λβ1 f} kept separately to avoid cancellation for small λ.
    let one_minus_exp = kernel.integrate(|v| -(-rate * v).exp_m1(), quad_points);
    let inv_int = kernel.integrate(|v| poisson_inverse_moment(rate * v).value, quad_points);
    let l = lambda;
    let m1 = one_minus_exp - l * b2 * exp_int + l * (b2 - b1 * b1);
    let m2 = l * (b2 + l * (b1 * b3 - b2 * b2)) * inv_int
        - (l * l * b2 * b2 + 2.0 * l * b2 + 1.0) * exp_int
        + l * l * (b2 * b2 - b2 * b1 * b1)
        + l * (2.0 * b2 - b1 * b1)
        + 1.0;
    Ok(Moments { m1, m2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaCase {
    /// `f = M_+` on a set of positive measure.
    FlatMax,
    /// `M_+ - f(y) ≍ |y - y*|^α` near a single maximiser.
    AlphaPower,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaAsymptote {
    pub case: BetaCase,
    pub description: String,
    /// Predicted exponent `e` in `β_x / M_+^x ≍ x^e`.
    pub predicted_exponent: f64,
    /// Least-squares slope of `log(β_x / M_+^x)` against `log x`.
    pub fitted_exponent: f64,
    pub plateau_measure: f64,
    /// `(x, β_x / M_+^x)` on the fit grid.
    pub ratios: Vec<(f64, f64)>,
}

/// Growth of `β_x = ∫ f^x` as `x → ∞`, checked by quadrature on a
/// geometric grid `x ∈ [10, 1000]`.
pub fn ier_beta_x_asymptote(
    kernel: &KernelFunction,
    case: BetaCase,
    alpha: Option<f64>,
    quad_points: usize,
) -> Result<BetaAsymptote> {
    let plateau = kernel.plateau_measure(1e-12, quad_points);
    let grid_cell = if kernel.is_piecewise_constant() { 0.0 } else { 2.0 / quad_points as f64 };
    let (predicted, description) = match case {
        BetaCase::FlatMax => {
            if plateau <= grid_cell {
                return Err(Error::CaseMismatch(
                    "kernel does not attain its maximum on a set of positive measure".into(),
                ));
            }
            (0.0, "beta_x ~ M+^x".to_string())
        }
        BetaCase::AlphaPower => {
            let a = alpha.filter(|a| *a > 0.0).ok_or_else(|| {
                Error::CaseMismatch("alpha-power case needs alpha > 0".into())
            })?;
            if plateau > grid_cell {
                return Err(Error::CaseMismatch(format!(
                    "kernel is flat at its maximum on a set of measure {plateau}"
                )));
            }
            (-1.0 / a, format!("beta_x ~ x^(-1/{a}) M+^x"))
        }
    };
    let top = kernel.m_plus_attained(quad_points);
    let points = 20;
    let ratios: Vec<(f64, f64)> = (0..points)
        .map(|i| 10.0 * 100f64.powf(i as f64 / (points - 1) as f64))
        .map(|x| (x, kernel.integrate(|v| (v / top).powf(x), quad_points)))
        .collect();
    let logs: Vec<(f64, f64)> = ratios.iter().map(|&(x, r)| (x.ln(), r.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(BetaAsymptote {
        case,
        description,
        predicted_exponent: predicted,
        fitted_exponent: sxy / sxx,
        plateau_measure: plateau,
        ratios,
    })
}
