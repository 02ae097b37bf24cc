//! Kendall tau-b with tie correction, six-decimal granularity, normal
//! confidence intervals, and the aggregate correlation / granularity tables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::centrality::Measure;

/// Decimal places used when deciding whether two scores are tied.
pub const GRANULARITY_DECIMALS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {min} values, got {got}")]
    TooShort { min: usize, got: usize },
    #[error("NaN at position {0}")]
    NotANumber(usize),
    #[error("confidence level {0} outside (0, 1)")]
    BadConfidence(f64),
}

/// Pair classification counts behind tau-b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    pub concordant: u64,
    pub discordant: u64,
    /// Tied in `x` only.
    pub ties_x: u64,
    /// Tied in `y` only.
    pub ties_y: u64,
    /// Tied in both; counted in neither denominator term.
    pub ties_both: u64,
}

impl PairCounts {
    /// `(C - D) / sqrt((C + D + Tx)(C + D + Ty))`, with both-constant inputs
    /// scored 1 and exactly-one-constant inputs scored 0.
    pub fn tau_b(&self) -> f64 {
        let cd = self.concordant + self.discordant;
        let left = cd + self.ties_x;
        let right = cd + self.ties_y;
        match (left == 0, right == 0) {
            (true, true) => 1.0,
            (true, false) | (false, true) => 0.0,
            (false, false) => {
                (self.concordant as f64 - self.discordant as f64)
                    / ((left as u128 * right as u128) as f64).sqrt()
            }
        }
    }
}

#[inline]
fn cmp_f64(a: f64, b: f64) -> Ordering {
    // NaN is rejected up front; -0.0 and 0.0 must compare equal
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

fn check_inputs(x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(StatsError::TooShort {
            min: 2,
            got: x.len(),
        });
    }
    if let Some(i) = x.iter().chain(y).position(|v| v.is_nan()) {
        return Err(StatsError::NotANumber(i % x.len()));
    }
    Ok(())
}

/// Kendall tau-b in O(n log n) (Knight's merge-sort algorithm).
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    Ok(pair_counts(x, y)?.tau_b())
}

/// Pair counts by sorting on `x`, then counting the swaps a merge sort on
/// `y` performs.
pub fn pair_counts(x: &[f64], y: &[f64]) -> Result<PairCounts, StatsError> {
    check_inputs(x, y)?;
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_f64(x[a], x[b]).then(cmp_f64(y[a], y[b])));

    let tied_pairs = |len: u64| len * len.saturating_sub(1) / 2;
    let mut tx = 0u64; // pairs tied in x, including joint ties
    let mut txy = 0u64;
    let mut run_x = 1u64;
    let mut run_xy = 1u64;
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        if cmp_f64(x[a], x[b]) == Ordering::Equal {
            run_x += 1;
            if cmp_f64(y[a], y[b]) == Ordering::Equal {
                run_xy += 1;
            } else {
                txy += tied_pairs(run_xy);
                run_xy = 1;
            }
        } else {
            tx += tied_pairs(run_x);
            txy += tied_pairs(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    tx += tied_pairs(run_x);
    txy += tied_pairs(run_xy);

    let mut ys: Vec<f64> = order.iter().map(|&i| y[i]).collect();
    let mut buffer = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buffer);

    let mut ty = 0u64;
    let mut run_y = 1u64;
    for w in ys.windows(2) {
        if cmp_f64(w[0], w[1]) == Ordering::Equal {
            run_y += 1;
        } else {
            ty += tied_pairs(run_y);
            run_y = 1;
        }
    }
    ty += tied_pairs(run_y);

    let total = tied_pairs(n as u64);
    let untied = total + txy - tx - ty;
    let discordant = swaps;
    Ok(PairCounts {
        concordant: untied - discordant,
        discordant,
        ties_x: tx - txy,
        ties_y: ty - txy,
        ties_both: txy,
    })
}

/// Stable merge sort returning the number of strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(left, bl) + merge_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if cmp_f64(v[j], v[i]) == Ordering::Less {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// O(n^2) reference: classifies every pair directly.
pub fn pair_counts_exhaustive(x: &[f64], y: &[f64]) -> Result<PairCounts, StatsError> {
    check_inputs(x, y)?;
    let mut c = PairCounts::default();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            match (cmp_f64(x[i], x[j]), cmp_f64(y[i], y[j])) {
                (Ordering::Equal, Ordering::Equal) => c.ties_both += 1,
                (Ordering::Equal, _) => c.ties_x += 1,
                (_, Ordering::Equal) => c.ties_y += 1,
                (a, b) if a == b => c.concordant += 1,
                _ => c.discordant += 1,
            }
        }
    }
    Ok(c)
}

/// Kendall tau-b by exhaustive pair counting.
pub fn kendall_tau_b_exhaustive(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    Ok(pair_counts_exhaustive(x, y)?.tau_b())
}

/// Six-decimal text form of `x`, rounding halves away from zero.
///
/// A binary double sits exactly halfway between two six-decimal values only
/// when `128 x` is an odd integer; those are rounded explicitly, everything
/// else is already rounded correctly by the formatter.
pub fn round6_key(x: f64) -> String {
    let y = x * 128.0;
    let key = if y.fract() == 0.0 && y.abs() < 2f64.powi(53) && y % 2.0 != 0.0 {
        format!("{:.6}", (x * 1e6).round() / 1e6)
    } else {
        format!("{x:.6}")
    };
    match key.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => key,
    }
}

/// Number of distinct values after six-decimal rounding.
pub fn distinct_count(values: &[f64]) -> usize {
    values
        .iter()
        .map(|&v| round6_key(v))
        .collect::<HashSet<_>>()
        .len()
}

/// Percentage of distinct six-decimal values.
pub fn granularity(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    100.0 * distinct_count(values) as f64 / values.len() as f64
}

/// Rounds every value to six decimals, so float noise between symmetric
/// vertices does not break ties.
pub fn round6_values(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| {
            round6_key(v)
                .parse::<f64>()
                .expect("formatted float parses")
        })
        .collect()
}

/// Two-sided standard normal quantile for `confidence`, e.g. 2.5758 at 0.99.
pub fn z_score(confidence: f64) -> Result<f64, StatsError> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(StatsError::BadConfidence(confidence));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(0.5 + confidence / 2.0))
}

/// Mean and normal-approximation half-width `z * s / sqrt(n)`.
pub fn mean_ci(samples: &[f64], confidence: f64) -> Result<(f64, f64), StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::TooShort {
            min: 2,
            got: samples.len(),
        });
    }
    let z = z_score(confidence)?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, z * var.sqrt() / n.sqrt()))
}

/// Mean, and half-width when at least two samples exist.
pub fn mean_with_optional_ci(samples: &[f64], confidence: f64) -> (f64, Option<f64>) {
    match mean_ci(samples, confidence) {
        Ok((mean, half)) => (mean, Some(half)),
        Err(_) => (
            samples.iter().sum::<f64>() / samples.len().max(1) as f64,
            None,
        ),
    }
}

/// Per-metric count of networks where the metric's distinct-value count
/// equals the best among all metrics; ties reward every maximal metric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestTally {
    pub best: Vec<usize>,
    pub networks: usize,
}

impl BestTally {
    pub fn percentages(&self) -> Vec<f64> {
        self.best
            .iter()
            .map(|&b| {
                if self.networks == 0 {
                    0.0
                } else {
                    100.0 * b as f64 / self.networks as f64
                }
            })
            .collect()
    }
}

/// `per_network_counts[i][m]` is metric `m`'s distinct count on network `i`.
pub fn best_granularity_tally(per_network_counts: &[Vec<usize>]) -> BestTally {
    let metrics = per_network_counts.first().map_or(0, Vec::len);
    let mut best = vec![0; metrics];
    for counts in per_network_counts {
        assert_eq!(counts.len(), metrics, "every network needs all metrics");
        let max = counts.iter().copied().max().unwrap_or(0);
        for (slot, &c) in best.iter_mut().zip(counts) {
            if c == max {
                *slot += 1;
            }
        }
    }
    BestTally {
        best,
        networks: per_network_counts.len(),
    }
}

/// Mean tau-b for one metric pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairStat {
    pub mean: f64,
    pub count: usize,
    pub half_width: Option<f64>,
}

/// Mean tau-b per metric pair over a set of networks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCorrelationMatrix {
    pub measures: Vec<Measure>,
    /// Row-major `measures.len()^2`; `None` where no samples exist.
    cells: Vec<Option<PairStat>>,
}

impl RankCorrelationMatrix {
    /// Aggregates `(a, b, tau)` samples. Sample order is the caller's
    /// canonical order, which fixes the floating-point summation order.
    pub fn from_samples<I>(measures: &[Measure], samples: I, confidence: f64) -> Self
    where
        I: IntoIterator<Item = (Measure, Measure, f64)>,
    {
        let k = measures.len();
        let pos = |m: Measure| measures.iter().position(|&x| x == m);
        let mut buckets: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        let mut networks_seen = 0usize;
        for (a, b, tau) in samples {
            if let (Some(i), Some(j)) = (pos(a), pos(b)) {
                if i != j {
                    buckets.entry((i.min(j), i.max(j))).or_default().push(tau);
                }
            }
        }
        let mut cells = vec![None; k * k];
        for ((i, j), taus) in buckets {
            let (mean, half_width) = mean_with_optional_ci(&taus, confidence);
            networks_seen = networks_seen.max(taus.len());
            let stat = PairStat {
                mean,
                count: taus.len(),
                half_width,
            };
            cells[i * k + j] = Some(stat);
            cells[j * k + i] = Some(stat);
        }
        for i in 0..k {
            cells[i * k + i] = Some(PairStat {
                mean: 1.0,
                count: networks_seen,
                half_width: Some(0.0),
            });
        }
        RankCorrelationMatrix {
            measures: measures.to_vec(),
            cells,
        }
    }

    pub fn get(&self, a: Measure, b: Measure) -> Option<PairStat> {
        let i = self.measures.iter().position(|&m| m == a)?;
        let j = self.measures.iter().position(|&m| m == b)?;
        self.cells[i * self.measures.len() + j]
    }

    pub fn mean(&self, a: Measure, b: Measure) -> Option<f64> {
        self.get(a, b).map(|s| s.mean)
    }

    /// True when every pair of the eight measures has a value.
    pub fn is_complete(&self) -> bool {
        Measure::ALL
            .iter()
            .all(|&a| Measure::ALL.iter().all(|&b| self.get(a, b).is_some()))
    }
}

/// Distinct counts of every metric on one network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkGranularity {
    pub n: usize,
    /// Aligned with the report's measure list.
    pub distinct: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricGranularity {
    pub measure: Measure,
    pub mean_percent: f64,
    pub half_width: Option<f64>,
    pub best: usize,
}

/// Granularity statistics for one group of networks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GranularityReport {
    pub networks: usize,
    pub metrics: Vec<MetricGranularity>,
}

impl GranularityReport {
    pub fn from_networks(
        measures: &[Measure],
        networks: &[NetworkGranularity],
        confidence: f64,
    ) -> Self {
        let counts: Vec<Vec<usize>> = networks.iter().map(|n| n.distinct.clone()).collect();
        let tally = best_granularity_tally(&counts);
        let metrics = measures
            .iter()
            .enumerate()
            .map(|(m, &measure)| {
                let percents: Vec<f64> = networks
                    .iter()
                    .map(|net| 100.0 * net.distinct[m] as f64 / net.n as f64)
                    .collect();
                let (mean_percent, half_width) = mean_with_optional_ci(&percents, confidence);
                MetricGranularity {
                    measure,
                    mean_percent,
                    half_width,
                    best: tally.best.get(m).copied().unwrap_or(0),
                }
            })
            .collect();
        GranularityReport {
            networks: networks.len(),
            metrics,
        }
    }

    pub fn metric(&self, measure: Measure) -> Option<&MetricGranularity> {
        self.metrics.iter().find(|m| m.measure == measure)
    }

    pub fn best_percent(&self, measure: Measure) -> Option<f64> {
        let m = self.metric(measure)?;
        Some(if self.networks == 0 {
            0.0
        } else {
            100.0 * m.best as f64 / self.networks as f64
        })
    }
}
