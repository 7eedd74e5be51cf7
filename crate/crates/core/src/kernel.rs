//! Positive bounded kernels `f: [0,1] -> (0, inf)` for the inhomogeneous
//! random graph.

use crate::error::{Error, Result};
use crate::special::CompensatedSum;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default number of midpoint nodes for quadrature.
pub const DEFAULT_QUAD_POINTS: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum KernelShape {
    /// `values[i]` on `[breakpoints[i-1], breakpoints[i])`, with implicit
    /// outer breakpoints 0 and 1. The last piece is closed at 1.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// `Σ_i coefficients[i] x^i`.
    Polynomial { coefficients: Vec<f64> },
    /// Linear interpolation through `values` on equally spaced nodes `0..=1`.
    Tabulated { values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelShape", into = "KernelShape")]
pub struct KernelFunction {
    shape: KernelShape,
    m_minus: f64,
    m_plus: f64,
    /// Cumulative `∫ f` over pieces; only for piecewise-constant kernels.
    piece_mass: Vec<f64>,
}

impl TryFrom<KernelShape> for KernelFunction {
    type Error = Error;

    fn try_from(shape: KernelShape) -> Result<Self> {
        KernelFunction::new(shape)
    }
}

impl From<KernelFunction> for KernelShape {
    fn from(k: KernelFunction) -> Self {
        k.shape
    }
}

impl KernelFunction {
    pub fn new(shape: KernelShape) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::KernelInvalid(msg.to_string()));
        let (m_minus, m_plus) = match &shape {
            KernelShape::PiecewiseConstant { breakpoints, values } => {
                if values.len() != breakpoints.len() + 1 {
                    return invalid("piecewise-constant kernel needs one more value than breakpoints");
                }
                let mut prev = 0.0;
                for &b in breakpoints {
                    if !(b > prev && b < 1.0) {
                        return invalid("breakpoints must increase strictly inside (0, 1)");
                    }
                    prev = b;
                }
                min_max(values)
            }
            KernelShape::Polynomial { coefficients } => {
                if coefficients.is_empty() {
                    return invalid("polynomial kernel needs at least one coefficient");
                }
                // Grid extremes widened by the Lipschitz constant times the
                // half spacing enclose the true range.
                let grid = DEFAULT_QUAD_POINTS;
                let values: Vec<f64> = (0..=grid)
                    .map(|i| horner(coefficients, i as f64 / grid as f64))
                    .collect();
                let (lo, hi) = min_max(&values);
                let lipschitz: f64 = coefficients
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| i as f64 * c.abs())
                    .sum();
                let margin = lipschitz * 0.5 / grid as f64;
                (lo - margin, hi + margin)
            }
            KernelShape::Tabulated { values } => {
                if values.is_empty() {
                    return invalid("tabulated kernel needs at least one value");
                }
                min_max(values)
            }
        };
        if !(m_minus > 0.0) || !m_plus.is_finite() {
            return Err(Error::KernelInvalid(format!(
                "kernel range [{m_minus}, {m_plus}] must be positive and bounded"
            )));
        }
        let piece_mass = match &shape {
            KernelShape::PiecewiseConstant { breakpoints, values } => {
                let mut acc = 0.0;
                pieces(breakpoints)
                    .zip(values)
                    .map(|((a, b), v)| {
                        acc += (b - a) * v;
                        acc
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(KernelFunction {
            shape,
            m_minus,
            m_plus,
            piece_mass,
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(KernelShape::PiecewiseConstant {
            breakpoints: vec![],
            values: vec![c],
        })
    }

    /// `a` on `[0, split)`, `b` on `[split, 1]`.
    pub fn two_block(a: f64, b: f64, split: f64) -> Result<Self> {
        Self::new(KernelShape::PiecewiseConstant {
            breakpoints: vec![split],
            values: vec![a, b],
        })
    }

    pub fn shape(&self) -> &KernelShape {
        &self.shape
    }

    pub fn m_minus(&self) -> f64 {
        self.m_minus
    }

    pub fn m_plus(&self) -> f64 {
        self.m_plus
    }

    pub fn is_piecewise_constant(&self) -> bool {
        matches!(self.shape, KernelShape::PiecewiseConstant { .. })
    }

    pub fn is_constant(&self) -> bool {
        match &self.shape {
            KernelShape::PiecewiseConstant { values, .. } | KernelShape::Tabulated { values } => {
                values.iter().all(|&v| v == values[0])
            }
            KernelShape::Polynomial { coefficients } => coefficients[1..].iter().all(|&c| c == 0.0),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.shape {
            KernelShape::PiecewiseConstant { breakpoints, values } => {
                values[breakpoints.partition_point(|&b| b <= x)]
            }
            KernelShape::Polynomial { coefficients } => horner(coefficients, x),
            KernelShape::Tabulated { values } => {
                if values.len() == 1 {
                    return values[0];
                }
                let t = x.clamp(0.0, 1.0) * (values.len() - 1) as f64;
                let i = (t.floor() as usize).min(values.len() - 2);
                let w = t - i as f64;
                values[i] * (1.0 - w) + values[i + 1] * w
            }
        }
    }

    /// The law of `f(U)` for uniform `U`, as `(value, mass)` atoms: exact for
    /// piecewise-constant kernels, a midpoint grid otherwise.
    pub fn value_atoms(&self, quad_points: usize) -> Vec<(f64, f64)> {
        match &self.shape {
            KernelShape::PiecewiseConstant { breakpoints, values } => pieces(breakpoints)
                .zip(values)
                .map(|((a, b), &v)| (v, b - a))
                .collect(),
            _ => {
                let n = quad_points.max(1);
                let h = 1.0 / n as f64;
                (0..n).map(|i| (self.eval((i as f64 + 0.5) * h), h)).collect()
            }
        }
    }

    /// `∫_0^1 g(f(x)) dx`.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, quad_points: usize) -> f64 {
        let mut acc = CompensatedSum::new();
        for (v, w) in self.value_atoms(quad_points) {
            acc.add(w * g(v));
        }
        acc.value()
    }

    /// `β_m = ∫_0^1 f(x)^m dx` for real `m`.
    pub fn beta(&self, m: f64, quad_points: usize) -> f64 {
        self.integrate(|v| v.powf(m), quad_points)
    }

    /// Draw from the density `f / β_1`: inversion over pieces for
    /// piecewise-constant kernels, rejection against `M_+` otherwise.
    pub fn sample_biased_type<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.shape {
            KernelShape::PiecewiseConstant { breakpoints, .. } => {
                let (piece, frac) = self.sample_biased_piece(rng);
                let a = if piece == 0 { 0.0 } else { breakpoints[piece - 1] };
                let b = breakpoints.get(piece).copied().unwrap_or(1.0);
                a + frac * (b - a)
            }
            _ => loop {
                let x: f64 = rng.random();
                if rng.random::<f64>() * self.m_plus < self.eval(x) {
                    return x;
                }
            },
        }
    }

    /// Piece index drawn with probability proportional to its `∫ f`, and a
    /// uniform position within it. Piecewise-constant kernels only.
    pub(crate) fn sample_biased_piece<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, f64) {
        let total = *self.piece_mass.last().expect("piecewise-constant kernel");
        let u = rng.random::<f64>() * total;
        let piece = self
            .piece_mass
            .partition_point(|&c| c <= u)
            .min(self.piece_mass.len() - 1);
        (piece, rng.random())
    }

    /// Piece values for piecewise-constant kernels.
    pub(crate) fn piece_values(&self) -> Option<&[f64]> {
        match &self.shape {
            KernelShape::PiecewiseConstant { values, .. } => Some(values),
            _ => None,
        }
    }

    pub(crate) fn piece_probabilities(&self) -> Vec<f64> {
        let total = *self.piece_mass.last().expect("piecewise-constant kernel");
        let mut prev = 0.0;
        self.piece_mass
            .iter()
            .map(|&c| {
                let p = (c - prev) / total;
                prev = c;
                p
            })
            .collect()
    }

    /// Lebesgue measure of `{x : f(x) >= M_+ (1 - rel_tol)}`.
    pub fn plateau_measure(&self, rel_tol: f64, quad_points: usize) -> f64 {
        let level = self.m_plus_attained(quad_points) * (1.0 - rel_tol);
        self.value_atoms(quad_points)
            .into_iter()
            .filter(|&(v, _)| v >= level)
            .map(|(_, w)| w)
            .sum()
    }

    /// Largest value over the quadrature atoms (the exact supremum for
    /// piecewise-constant and tabulated kernels).
    pub fn m_plus_attained(&self, quad_points: usize) -> f64 {
        match &self.shape {
            KernelShape::Polynomial { .. } => {
                let n = quad_points.max(1);
                (0..=n)
                    .map(|i| self.eval(i as f64 / n as f64))
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            _ => self.m_plus,
        }
    }
}

fn pieces(breakpoints: &[f64]) -> impl Iterator<Item = (f64, f64)> + '_ {
    let starts = std::iter::once(0.0).chain(breakpoints.iter().copied());
    let ends = breakpoints.iter().copied().chain(std::iter::once(1.0));
    starts.zip(ends)
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}
