//! Estimators over simulated SINR samples and a Kolmogorov–Smirnov test.

use crate::error::{Error, Result};

use super::EmpiricalSinr;

/// A binomial proportion with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportion {
    pub estimate: f64,
    pub std_err: f64,
    pub count: usize,
}

impl Proportion {
    fn from_counts(hits: usize, count: usize) -> Self {
        if count == 0 {
            return Self {
                estimate: f64::NAN,
                std_err: f64::NAN,
                count,
            };
        }
        let p = hits as f64 / count as f64;
        Self {
            estimate: p,
            std_err: (p * (1.0 - p) / count as f64).sqrt(),
            count,
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

impl MeanEstimate {
    fn from_values(values: impl Iterator<Item = f64>) -> Self {
        let mut n = 0usize;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for v in values {
            n += 1;
            let delta = v - mean;
            mean += delta / n as f64;
            m2 += delta * (v - mean);
        }
        match n {
            0 => Self {
                mean: f64::NAN,
                std_err: f64::NAN,
                count: 0,
            },
            1 => Self {
                mean,
                std_err: f64::NAN,
                count: 1,
            },
            _ => Self {
                mean,
                std_err: (m2 / (n - 1) as f64 / n as f64).sqrt(),
                count: n,
            },
        }
    }
}

/// Empirical outage `P[SINR ≤ τ]` on a threshold grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    pub taus: Vec<f64>,
    pub overall: Vec<Proportion>,
    /// `per_tier[k-1][i]` conditions on serving tier `k`.
    pub per_tier: Vec<Vec<Proportion>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRate {
    pub overall: MeanEstimate,
    pub per_tier: Vec<MeanEstimate>,
}

/// Fraction of samples with SINR at or below each threshold, overall and per serving tier.
pub fn empirical_cdf(samples: &EmpiricalSinr, taus: &[f64]) -> Result<EmpiricalCdf> {
    if samples.samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let k = samples.tiers;
    let mut sorted_all: Vec<f64> = samples.samples.iter().map(|s| s.sinr).collect();
    let mut sorted_tier: Vec<Vec<f64>> = vec![Vec::new(); k];
    for s in &samples.samples {
        sorted_tier[s.tier - 1].push(s.sinr);
    }
    sorted_all.sort_by(f64::total_cmp);
    for v in &mut sorted_tier {
        v.sort_by(f64::total_cmp);
    }
    let count_le = |v: &[f64], tau: f64| v.partition_point(|&x| x <= tau);
    let overall = taus
        .iter()
        .map(|&t| Proportion::from_counts(count_le(&sorted_all, t), sorted_all.len()))
        .collect();
    let per_tier = sorted_tier
        .iter()
        .map(|v| {
            taus.iter()
                .map(|&t| Proportion::from_counts(count_le(v, t), v.len()))
                .collect()
        })
        .collect();
    Ok(EmpiricalCdf {
        taus: taus.to_vec(),
        overall,
        per_tier,
    })
}

/// Mean of `ln(1 + SINR)` overall and per serving tier.
pub fn empirical_rate(samples: &EmpiricalSinr) -> Result<EmpiricalRate> {
    if samples.samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let overall = MeanEstimate::from_values(samples.samples.iter().map(|s| s.rate));
    let per_tier = (1..=samples.tiers)
        .map(|k| {
            MeanEstimate::from_values(samples.samples.iter().filter(|s| s.tier == k).map(|s| s.rate))
        })
        .collect();
    Ok(EmpiricalRate { overall, per_tier })
}

/// One-sample Kolmogorov–Smirnov statistic of `data` against `cdf`.
///
/// `data` is sorted in place. `cdf` is called once per sample, in ascending order.
pub fn ks_statistic(data: &mut [f64], mut cdf: impl FnMut(f64) -> f64) -> f64 {
    data.sort_by(f64::total_cmp);
    let n = data.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in data.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    sup
}

/// Asymptotic p-value of a KS statistic `d` from `n` samples, using the
/// Stephens small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    kolmogorov_survival(lambda)
}

/// `P[K > λ]` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
