//! Exact root-bias tails of a two-generation Galton–Watson tree.
//!
//! With root degree `k` and child offspring `d_1..d_k`, the root bias is at
//! least `x` iff `S_k = Σ d_j >= k(k-1) + kx`. The law of `S_k` is built by
//! repeated convolution of the child pmf, keeping only values below the
//! largest threshold that will ever be queried.

use crate::error::{Error, Result};
use crate::law::OffspringLaw;
use crate::special::{CompensatedSum, SeriesResult};

/// Largest convolution length and total multiply-add budget.
const MAX_LEN: u64 = 20_000_000;
const MAX_WORK: f64 = 4e9;

pub fn gw_significance_exact(
    root_law: &OffspringLaw,
    child_law: &OffspringLaw,
    tol: f64,
) -> Result<SeriesResult> {
    gw_tail_exact(root_law, child_law, 0.0, tol)
}

/// `P{X_0 = 0} + Σ_k P{X_0 = k} P{X_1 + ... + X_k >= k(k-1)}` with all
/// `X_i` i.i.d. from `law`.
pub fn conjecture_probability(law: &OffspringLaw, tol: f64) -> Result<SeriesResult> {
    gw_significance_exact(law, law, tol)
}

fn threshold(k: u64, x: f64) -> u64 {
    let t = (k as f64) * (k as f64 - 1.0) + k as f64 * x;
    if t <= 0.0 {
        0
    } else {
        t.ceil() as u64
    }
}

/// `P{Δ_φ >= x}` for root law `root_law` and child law `child_law`.
pub fn gw_tail_exact(
    root_law: &OffspringLaw,
    child_law: &OffspringLaw,
    x: f64,
    tol: f64,
) -> Result<SeriesResult> {
    root_law.validate()?;
    child_law.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let fail = |reason: String| Error::TruncationFailure { tol, reason };

    let k_max = root_law
        .support_bound(tol / 4.0)
        .ok_or_else(|| fail("root law tail is too heavy to truncate".into()))?;
    let mut bound = root_law.tail(k_max + 1);

    let len = threshold(k_max, x);
    if len > MAX_LEN {
        return Err(fail(format!(
            "thresholds up to {len} exceed the convolution length limit"
        )));
    }
    let len = len as usize;

    // Child values at or above `len` can never help a sum stay below a
    // threshold, so only the part below `len` matters. Beyond that, cut where
    // the child tail is negligible and charge k * tail to the bound.
    let eps = tol / (4.0 * k_max.max(1) as f64);
    let cut = match child_law.support_bound(eps) {
        Some(b) => (b as usize + 1).min(len),
        None => len,
    };
    let child_loss = if cut < len { child_law.tail(cut as u64) } else { 0.0 };
    let child: Vec<f64> = (0..cut as u64).map(|v| child_law.pmf(v)).collect();

    // Mass dropped from the low end of the running sum, at most `drop_budget`
    // per step. Dropped mass could still fall below a later threshold, so it
    // is charged to the bound too.
    let drop_budget = tol / (8.0 * k_max.max(1) as f64);
    let mut dropped = 0.0;
    let mut offset = 0usize;
    let mut cur: Vec<f64> = vec![1.0];
    let mut work = 0.0;

    let mut acc = CompensatedSum::new();
    acc.add(if x <= 0.0 { root_law.pmf(0) } else { 0.0 });
    let mut terms = 1u64;

    for k in 1..=k_max {
        if !cur.is_empty() && !child.is_empty() {
            let out_len = (cur.len() + child.len() - 1).min(len.saturating_sub(offset));
            work += (cur.len() * child.len()) as f64;
            if work > MAX_WORK {
                return Err(fail("convolution work budget exhausted".into()));
            }
            let mut next = vec![0.0; out_len];
            for (i, &a) in cur.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let upto = child.len().min(out_len.saturating_sub(i));
                for (v, &b) in child[..upto].iter().enumerate() {
                    next[i + v] += a * b;
                }
            }
            cur = next;
            let mut lead = 0;
            let mut step_drop = 0.0;
            while lead < cur.len() && step_drop + cur[lead] <= drop_budget {
                step_drop += cur[lead];
                lead += 1;
            }
            if lead > 0 {
                cur.drain(..lead);
                offset += lead;
                dropped += step_drop;
            }
        } else {
            // Everything lies at or above `len` (or the child law is cut to
            // nothing): the sum never falls below any threshold.
            cur.clear();
        }

        let pk = root_law.pmf(k);
        if pk == 0.0 {
            continue;
        }
        let m = threshold(k, x) as usize;
        let mut below = CompensatedSum::new();
        for (i, &w) in cur.iter().enumerate() {
            if offset + i >= m {
                break;
            }
            below.add(w);
        }
        let p = (1.0 - below.value()).clamp(0.0, 1.0);
        acc.add(pk * p);
        bound += pk * (dropped + k as f64 * child_loss);
        terms += 1;
    }
    let value = acc.value();
    Ok(SeriesResult {
        value,
        truncation_bound: bound + 8.0 * f64::EPSILON * (terms as f64),
        terms_used: terms,
    })
}
