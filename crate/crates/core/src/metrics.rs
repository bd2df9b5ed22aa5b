//! Complexity distributions, the CDF area score, expressivity, and Spearman
//! rank correlation with a t-approximation p-value.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lz::{BitString, LzScore};
use crate::special;

/// Empirical probability mass over observed complexity values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityDistribution {
    support: Vec<f64>,
    mass: Vec<f64>,
    trials: usize,
}

impl ComplexityDistribution {
    /// Sorted unique complexity values.
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn min(&self) -> f64 {
        self.support[0]
    }

    pub fn max(&self) -> f64 {
        self.support[self.support.len() - 1]
    }

    /// `(complexity, probability)` pairs in ascending complexity.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.mass.iter().copied())
    }
}

/// Frequency of each distinct score divided by the number of scores.
pub fn empirical_distribution(scores: &[LzScore]) -> Result<ComplexityDistribution> {
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut values: Vec<f64> = scores.iter().map(|s| s.value()).collect();
    values.sort_by(f64::total_cmp);

    let trials = values.len();
    let mut support = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for v in values {
        match support.last() {
            Some(&last) if last == v => *counts.last_mut().unwrap() += 1,
            _ => {
                support.push(v);
                counts.push(1);
            }
        }
    }
    let mass = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    Ok(ComplexityDistribution { support, mass, trials })
}

/// Right-continuous step CDF: `F(x) = cumulative[i]` for `support[i] <= x < support[i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    pub points: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl StepCdf {
    pub fn eval(&self, x: f64) -> f64 {
        // Number of support points <= x.
        let idx = self.points.partition_point(|&p| p <= x);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }
}

pub fn cdf(dist: &ComplexityDistribution) -> StepCdf {
    let mut acc = 0.0;
    let mut cumulative: Vec<f64> = dist
        .mass
        .iter()
        .map(|m| {
            acc += m;
            acc
        })
        .collect();
    // Absorb rounding so the last step is exactly one.
    if let Some(last) = cumulative.last_mut() {
        *last = 1.0;
    }
    StepCdf { points: dist.support.clone(), cumulative }
}

/// Area under the step CDF over `[c_min, c_max]`.
pub fn auc(dist: &ComplexityDistribution, c_min: f64, c_max: f64) -> Result<f64> {
    if !(c_min <= dist.min() && c_max >= dist.max()) {
        return Err(Error::RangeExcludesSupport);
    }
    let f = cdf(dist);
    let area = f
        .points
        .iter()
        .zip(&f.cumulative)
        .enumerate()
        .map(|(i, (&x, &level))| {
            let next = f.points.get(i + 1).copied().unwrap_or(c_max);
            level * (next - x)
        })
        .sum();
    Ok(area)
}

/// Fraction of distinct strings among `functions`.
pub fn expressivity(functions: &[BitString]) -> Result<f64> {
    let first = functions.first().ok_or(Error::EmptyInput)?;
    if let Some(bad) = functions.iter().find(|f| f.len() != first.len()) {
        return Err(Error::LengthMismatch { expected: first.len(), got: bad.len() });
    }
    let unique: BTreeSet<&[u8]> = functions.iter().map(BitString::as_bits).collect();
    Ok(unique.len() as f64 / functions.len() as f64)
}

/// Correlation coefficient with two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Positions i..j hold ranks i+1..=j.
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

fn has_ties(values: &[f64]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).any(|w| w[0] == w[1])
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / libm::sqrt(sxx * syy)
}

/// Spearman's rank correlation.
///
/// Without ties this is `1 - 6 Σd² / (n(n²-1))`; with ties it is the Pearson
/// correlation of average ranks. The p-value is two-sided, from
/// `t = ρ sqrt((n-2)/(1-ρ²))` against Student's t with `n-2` degrees of freedom.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), got: y.len() });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewSamples { need: 3, got: n });
    }
    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if constant(x) || constant(y) {
        return Err(Error::UndefinedCorrelation);
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let rho = if has_ties(x) || has_ties(y) {
        pearson(&rx, &ry)
    } else {
        let nf = n as f64;
        let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
        1.0 - 6.0 * d2 / (nf * (nf * nf - 1.0))
    };
    let rho = rho.clamp(-1.0, 1.0);
    Ok(CorrelationResult { rho, p_value: t_test_p_value(rho, n), n })
}

fn t_test_p_value(rho: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let denom = 1.0 - rho * rho;
    if denom <= 0.0 {
        return 0.0;
    }
    let t = rho * libm::sqrt(df / denom);
    special::student_t_two_sided(t, df).clamp(0.0, 1.0)
}
