//! Finite weighted point measures on the real line.

use crate::special::CompensatedSum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub value: f64,
    pub weight: f64,
}

/// Atoms sorted by value, with strictly positive weights and distinct values.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure {
    atoms: Vec<Atom>,
    cumulative: Vec<f64>,
    total: f64,
}

impl EmpiricalMeasure {
    /// Uniform weights `1/len` on the samples; equal samples share one atom.
    pub fn from_samples(samples: &[f64]) -> Self {
        assert!(!samples.is_empty(), "empirical measure needs at least one sample");
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
        let n = sorted.len() as f64;
        let mut atoms: Vec<Atom> = Vec::new();
        let mut run = 0usize;
        for (i, &x) in sorted.iter().enumerate() {
            run += 1;
            if i + 1 == sorted.len() || sorted[i + 1] != x {
                atoms.push(Atom {
                    value: x,
                    weight: run as f64 / n,
                });
                run = 0;
            }
        }
        Self::from_sorted_atoms(atoms)
    }

    /// Arbitrary positive weights; zero-weight entries are dropped.
    pub fn from_weighted<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<(f64, f64)> = pairs.into_iter().filter(|&(_, w)| w > 0.0).collect();
        assert!(!raw.is_empty(), "empirical measure needs positive mass");
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("NaN atom"));
        let mut atoms: Vec<Atom> = Vec::with_capacity(raw.len());
        for (value, weight) in raw {
            match atoms.last_mut() {
                Some(last) if last.value == value => last.weight += weight,
                _ => atoms.push(Atom { value, weight }),
            }
        }
        Self::from_sorted_atoms(atoms)
    }

    fn from_sorted_atoms(atoms: Vec<Atom>) -> Self {
        let mut acc = CompensatedSum::new();
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc.add(a.weight);
                acc.value()
            })
            .collect();
        EmpiricalMeasure {
            atoms,
            cumulative,
            total: acc.value(),
        }
    }

    /// A single atom of unit mass.
    pub fn dirac(x: f64) -> Self {
        Self::from_weighted([(x, 1.0)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Normalised mass of `(-inf, x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        let idx = self.atoms.partition_point(|a| a.value <= x);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1] / self.total
        }
    }

    /// Normalised mass of `[x, inf)`.
    pub fn tail(&self, x: f64) -> f64 {
        let idx = self.atoms.partition_point(|a| a.value < x);
        if idx == 0 {
            1.0
        } else {
            (self.total - self.cumulative[idx - 1]).max(0.0) / self.total
        }
    }

    pub fn moment(&self, power: i32) -> f64 {
        let mut acc = CompensatedSum::new();
        for a in &self.atoms {
            acc.add(a.weight * a.value.powi(power));
        }
        acc.value() / self.total
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.moment(2) - m * m
    }

    pub fn min(&self) -> f64 {
        self.atoms[0].value
    }

    pub fn max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].value
    }
}

/// `sup_x |F_a(x) - F_b(x)|` over the merged atom grid.
pub fn kolmogorov_distance(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> f64 {
    let (mut i, mut j) = (0, 0);
    let (xa, xb) = (a.atoms(), b.atoms());
    let mut fa = 0.0;
    let mut fb = 0.0;
    let mut sup: f64 = 0.0;
    while i < xa.len() || j < xb.len() {
        let next = match (xa.get(i), xb.get(j)) {
            (Some(p), Some(q)) => p.value.min(q.value),
            (Some(p), None) => p.value,
            (None, Some(q)) => q.value,
            (None, None) => unreachable!(),
        };
        while i < xa.len() && xa[i].value == next {
            fa = a.cumulative[i] / a.total;
            i += 1;
        }
        while j < xb.len() && xb[j].value == next {
            fb = b.cumulative[j] / b.total;
            j += 1;
        }
        sup = sup.max((fa - fb).abs());
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn queries_on_small_measure() {
        let m = EmpiricalMeasure::from_samples(&[1.0, -1.0, 1.0]);
        assert_eq!(m.atoms().len(), 2);
        assert!((m.cdf(-1.0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.cdf(-1.5), 0.0);
        assert!((m.cdf(1.0) - 1.0).abs() < 1e-15);
        assert!((m.tail(0.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.tail(-5.0), 1.0);
        assert_eq!(m.tail(1.5), 0.0);
        assert!((m.mean() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_trivial_cases() {
        let a = EmpiricalMeasure::from_samples(&[0.0, 1.0, 2.5]);
        assert_eq!(kolmogorov_distance(&a, &a), 0.0);
        let d0 = EmpiricalMeasure::dirac(0.0);
        let d1 = EmpiricalMeasure::dirac(1.0);
        assert_eq!(kolmogorov_distance(&d0, &d1), 1.0);
    }

    #[test]
    fn kolmogorov_against_brute_force_grid() {
        let a = EmpiricalMeasure::from_samples(&[0.0, 0.5, 0.5, 3.0]);
        let b = EmpiricalMeasure::from_weighted([(0.5, 2.0), (1.0, 1.0), (-1.0, 1.0)]);
        let grid = [-2.0, -1.0, 0.0, 0.5, 1.0, 3.0, 4.0];
        let brute = grid
            .iter()
            .map(|&x| (a.cdf(x) - b.cdf(x)).abs())
            .fold(0.0, f64::max);
        assert!((kolmogorov_distance(&a, &b) - brute).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn cdf_is_monotone_and_normalised(xs in prop::collection::vec(-50i32..50, 1..200)) {
            let samples: Vec<f64> = xs.iter().map(|&x| x as f64 / 4.0).collect();
            let m = EmpiricalMeasure::from_samples(&samples);
            prop_assert!((m.total() - 1.0).abs() <= 1e-12);
            let mut prev = 0.0;
            for a in m.atoms() {
                prop_assert!(a.weight > 0.0);
                let f = m.cdf(a.value);
                prop_assert!(f >= prev);
                prev = f;
                prop_assert!((m.tail(a.value) + m.cdf(a.value) - a.weight / m.total() - 1.0).abs() < 1e-12);
            }
            prop_assert!((prev - 1.0).abs() < 1e-12);
        }

        #[test]
        fn kolmogorov_is_symmetric_and_bounded(
            xs in prop::collection::vec(-20i32..20, 1..60),
            ys in prop::collection::vec(-20i32..20, 1..60),
        ) {
            let a = EmpiricalMeasure::from_samples(&xs.iter().map(|&x| x as f64).collect::<Vec<_>>());
            let b = EmpiricalMeasure::from_samples(&ys.iter().map(|&x| x as f64).collect::<Vec<_>>());
            let d = kolmogorov_distance(&a, &b);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
            prop_assert_eq!(d, kolmogorov_distance(&b, &a));
        }
    }
}
