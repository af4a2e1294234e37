//! Rank tests, kernel density estimates and sample summaries.
//!
//! Both Wilcoxon tests are two-sided. Small samples get an exact p-value
//! from the permutation distribution of the rank statistic, computed by a
//! subset-sum recurrence over doubled midranks so ties stay in integer
//! arithmetic. Larger samples use the normal approximation with tie and
//! continuity corrections.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Largest combined sample size for which the rank-sum test is exact.
pub const RANK_SUM_EXACT_MAX: usize = 20;
/// Largest number of non-zero differences for which the signed-rank test
/// is exact.
pub const SIGNED_RANK_EXACT_MAX: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    RankSum,
    SignedRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMode {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: TestMethod,
    pub mode: TestMode,
    /// Mann-Whitney U of the first sample, or W+ for the signed-rank test.
    pub statistic: f64,
    /// Normal-approximation z (continuity corrected). Reported in exact
    /// mode as well.
    pub z: f64,
    /// Two-sided p-value in (0, 1].
    pub p_value: f64,
    /// Observations entering the test: n1 + n2, or the number of pairs.
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    /// Pairs with zero difference, dropped before ranking.
    pub zeros_dropped: usize,
    /// |z| / sqrt(n), absent for degenerate results.
    pub effect_size_r: Option<f64>,
    /// No variation to rank: every value (or difference) is tied.
    pub degenerate: bool,
}

/// One row of the results CSV export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestRecord {
    pub label: String,
    pub method: TestMethod,
    pub mode: TestMode,
    pub statistic: f64,
    pub z: f64,
    pub p_value: f64,
    pub effect_size_r: Option<f64>,
    pub n: usize,
    pub degenerate: bool,
}

impl TestResult {
    pub fn record(&self, label: impl Into<String>) -> TestRecord {
        TestRecord {
            label: label.into(),
            method: self.method,
            mode: self.mode,
            statistic: self.statistic,
            z: self.z,
            p_value: self.p_value,
            effect_size_r: self.effect_size_r,
            n: self.n,
            degenerate: self.degenerate,
        }
    }
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("{what} contains a non-finite value")));
    }
    Ok(())
}

/// Midranks (1-based, ties averaged) and the sizes of the tie groups.
pub fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share ranks i+1..=j
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        ties.push(j - i);
        i = j;
    }
    (ranks, ties)
}

fn tie_term(ties: &[usize]) -> f64 {
    ties.iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum()
}

fn two_sided_normal(z: f64) -> f64 {
    let p = erfc(z.abs() / std::f64::consts::SQRT_2);
    p.clamp(f64::MIN_POSITIVE, 1.0)
}

fn continuity_z(stat: f64, mean: f64, sd: f64) -> f64 {
    let diff = stat - mean;
    if sd == 0.0 {
        return 0.0;
    }
    if diff.abs() <= 0.5 {
        0.0
    } else {
        (diff - 0.5 * diff.signum()) / sd
    }
}

/// Doubled midranks are integers; the recurrences below count subsets by
/// their doubled rank sum.
fn doubled(ranks: &[f64]) -> Vec<usize> {
    ranks.iter().map(|r| (2.0 * r).round() as usize).collect()
}

/// Exact two-sided p for the rank sum of a size-`k` subset.
/// `observed` and the returned tail are in doubled-rank units.
fn exact_rank_sum_p(ranks2: &[usize], k: usize, observed: usize) -> f64 {
    let total: usize = ranks2.iter().sum();
    let max_sum = total;
    // counts[j][s]: subsets of size j with doubled sum s
    let mut counts = vec![vec![0f64; max_sum + 1]; k + 1];
    counts[0][0] = 1.0;
    for (idx, &r) in ranks2.iter().enumerate() {
        let upper = k.min(idx + 1);
        for j in (1..=upper).rev() {
            let (lo, hi) = counts.split_at_mut(j);
            let prev = &lo[j - 1];
            let cur = &mut hi[0];
            for s in (r..=max_sum).rev() {
                if prev[s - r] != 0.0 {
                    cur[s] += prev[s - r];
                }
            }
        }
    }
    let n = ranks2.len();
    // mean doubled sum = k (n + 1); compare 2|S - mean| in integers
    let mean2 = k * (n + 1);
    let dev = |s: usize| (s as i64 - mean2 as i64).unsigned_abs();
    let obs_dev = dev(observed);
    let all: f64 = counts[k].iter().sum();
    let tail: f64 = counts[k]
        .iter()
        .enumerate()
        .filter(|(s, _)| dev(*s) >= obs_dev)
        .map(|(_, c)| c)
        .sum();
    (tail / all).min(1.0)
}

/// Exact two-sided p for the signed-rank statistic W+ (doubled units).
fn exact_signed_rank_p(ranks2: &[usize], observed: usize) -> f64 {
    let total: usize = ranks2.iter().sum();
    let mut counts = vec![0f64; total + 1];
    counts[0] = 1.0;
    for &r in ranks2 {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let dev = |s: usize| (2 * s as i64 - total as i64).unsigned_abs();
    let obs_dev = dev(observed);
    let all: f64 = counts.iter().sum();
    let tail: f64 = counts
        .iter()
        .enumerate()
        .filter(|(s, _)| dev(*s) >= obs_dev)
        .map(|(_, c)| c)
        .sum();
    (tail / all).min(1.0)
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney U) test.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument(
            "rank-sum test needs at least one value in each sample".into(),
        ));
    }
    check_finite(a, "first sample")?;
    check_finite(b, "second sample")?;

    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u = r1 - (n1 * (n1 + 1)) as f64 / 2.0;

    let (nf1, nf2, nf) = (n1 as f64, n2 as f64, n as f64);
    let mean = nf1 * nf2 / 2.0;
    let var = if n > 1 {
        nf1 * nf2 / 12.0 * ((nf + 1.0) - tie_term(&ties) / (nf * (nf - 1.0)))
    } else {
        0.0
    };
    let degenerate = ties.len() == 1;
    let z = continuity_z(u, mean, var.max(0.0).sqrt());

    let mode = if n <= RANK_SUM_EXACT_MAX {
        TestMode::Exact
    } else {
        TestMode::NormalApprox
    };
    let p_value = if degenerate {
        1.0
    } else {
        match mode {
            TestMode::Exact => {
                let ranks2 = doubled(&ranks);
                let observed: usize = ranks2[..n1].iter().sum();
                exact_rank_sum_p(&ranks2, n1, observed)
            }
            TestMode::NormalApprox => two_sided_normal(z),
        }
    };

    Ok(TestResult {
        method: TestMethod::RankSum,
        mode,
        statistic: u,
        z,
        p_value,
        n,
        n1,
        n2,
        zeros_dropped: 0,
        effect_size_r: (!degenerate).then(|| (z.abs() / nf.sqrt()).min(1.0)),
        degenerate,
    })
}

/// Two-sided Wilcoxon signed-rank test on paired observations.
///
/// Differences are `x - y`; zero differences are dropped and tallied in
/// `zeros_dropped`. The effect size uses the total number of pairs.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> Result<TestResult> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(
            "signed-rank test needs at least one pair".into(),
        ));
    }
    let flat: Vec<f64> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    check_finite(&flat, "pairs")?;

    let diffs: Vec<f64> = pairs.iter().map(|&(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let zeros = pairs.len() - diffs.len();
    let m = diffs.len();

    if m == 0 {
        return Ok(TestResult {
            method: TestMethod::SignedRank,
            mode: TestMode::Exact,
            statistic: 0.0,
            z: 0.0,
            p_value: 1.0,
            n: pairs.len(),
            n1: 0,
            n2: 0,
            zeros_dropped: zeros,
            effect_size_r: None,
            degenerate: true,
        });
    }

    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = midranks(&abs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();

    let mf = m as f64;
    let mean = mf * (mf + 1.0) / 4.0;
    let var = mf * (mf + 1.0) * (2.0 * mf + 1.0) / 24.0 - tie_term(&ties) / 48.0;
    let z = continuity_z(w_plus, mean, var.max(0.0).sqrt());

    let mode = if m <= SIGNED_RANK_EXACT_MAX {
        TestMode::Exact
    } else {
        TestMode::NormalApprox
    };
    let p_value = match mode {
        TestMode::Exact => {
            let ranks2 = doubled(&ranks);
            let observed: usize = diffs
                .iter()
                .zip(&ranks2)
                .filter(|(d, _)| **d > 0.0)
                .map(|(_, r)| r)
                .sum();
            exact_signed_rank_p(&ranks2, observed)
        }
        TestMode::NormalApprox => two_sided_normal(z),
    };

    Ok(TestResult {
        method: TestMethod::SignedRank,
        mode,
        statistic: w_plus,
        z,
        p_value,
        n: pairs.len(),
        n1: m,
        n2: 0,
        zeros_dropped: zeros,
        effect_size_r: Some((z.abs() / (pairs.len() as f64).sqrt()).min(1.0)),
        degenerate: false,
    })
}

/// Mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// `sd / sqrt(n)` with the n-1 standard deviation; `None` when n < 2.
    pub se: Option<f64>,
}

pub fn summarize(sample: &[f64]) -> Result<Summary> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("cannot summarize an empty sample".into()));
    }
    let n = sample.len();
    let mean = sample.iter().sum::<f64>() / n as f64;
    let se = (n >= 2).then(|| sample_sd(sample, mean) / (n as f64).sqrt());
    Ok(Summary { n, mean, se })
}

fn sample_sd(sample: &[f64], mean: f64) -> f64 {
    let ss: f64 = sample.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (sample.len() - 1) as f64).sqrt()
}

/// Linear-interpolation quantile (the usual "type 7" definition).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule of thumb: `0.9 * min(sd, IQR / 1.34) * n^(-1/5)`.
/// Falls back to `sd` when the IQR is zero.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData("bandwidth needs at least two samples".into()));
    }
    check_finite(samples, "samples")?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let sd = sample_sd(samples, mean);
    if sd == 0.0 {
        return Err(Error::InvalidArgument(
            "samples have zero variance; pass an explicit bandwidth".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * n.powf(-0.2))
}

/// Gaussian kernel density estimate evaluated at each grid point.
pub fn kde_gaussian(samples: &[f64], grid: &[f64], bandwidth: Option<f64>) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(
            "density estimate needs at least two samples".into(),
        ));
    }
    check_finite(samples, "samples")?;
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {h}"))),
        None => silverman_bandwidth(samples)?,
    };
    let norm = 1.0 / (samples.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    Ok(grid
        .iter()
        .map(|&x| {
            let s: f64 = samples
                .iter()
                .map(|&xi| {
                    let u = (x - xi) / h;
                    (-0.5 * u * u).exp()
                })
                .sum();
            s * norm
        })
        .collect())
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|i| lo + step * i as f64).collect()
        }
    }
}

/// Grid spanning the sample range padded by `pad` bandwidths on each side.
pub fn kde_grid(samples: &[f64], bandwidth: f64, pad: f64, points: usize) -> Vec<f64> {
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    linspace(lo - pad * bandwidth, hi + pad * bandwidth, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute force over every assignment of pooled ranks to the first sample.
    fn enumerate_rank_sum(a: &[f64], b: &[f64]) -> f64 {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let (ranks, _) = midranks(&pooled);
        let n = pooled.len();
        let k = a.len();
        let mean = k as f64 * (n as f64 + 1.0) / 2.0;
        let obs: f64 = ranks[..k].iter().sum();
        let (mut hit, mut all) = (0u64, 0u64);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            all += 1;
            if (s - mean).abs() >= (obs - mean).abs() - 1e-9 {
                hit += 1;
            }
        }
        hit as f64 / all as f64
    }

    #[test]
    fn midranks_average_ties() {
        let (r, t) = midranks(&[1.0, 2.0, 2.0, 4.0, 5.0]);
        assert_eq!(r, [1.0, 2.5, 2.5, 4.0, 5.0]);
        assert_eq!(t, [1, 2, 1, 1]);
    }

    #[test]
    fn rank_sum_fully_separated() {
        let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.mode, TestMode::Exact);
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 0.1).abs() < 1e-15);
        assert!((enumerate_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rank_sum_identical_samples() {
        let a = [3.0, 1.0, 4.0, 1.5, 9.0];
        let r = wilcoxon_rank_sum(&a, &a).unwrap();
        assert_eq!(r.statistic, 12.5);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_sum_all_tied_is_degenerate() {
        let r = wilcoxon_rank_sum(&[2.0, 2.0], &[2.0, 2.0, 2.0]).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 1.0);
        assert!(r.effect_size_r.is_none());
    }

    #[test]
    fn rank_sum_exact_matches_enumeration_with_ties() {
        let a = [1.0, 2.0, 2.0, 5.0, 7.0];
        let b = [2.0, 3.0, 5.0, 8.0, 8.0, 9.0];
        let r = wilcoxon_rank_sum(&a, &b).unwrap();
        assert!((r.p_value - enumerate_rank_sum(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn rank_sum_rejects_empty() {
        assert!(wilcoxon_rank_sum(&[], &[1.0]).is_err());
        assert!(wilcoxon_rank_sum(&[f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn signed_rank_six_positive() {
        let pairs: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64 + 0.5, 0.0)).collect();
        let r = wilcoxon_signed_rank(&pairs).unwrap();
        assert_eq!(r.mode, TestMode::Exact);
        assert_eq!(r.statistic, 21.0);
        assert_eq!(r.p_value, 0.03125);
    }

    #[test]
    fn signed_rank_zero_differences() {
        let pairs = [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)];
        let r = wilcoxon_signed_rank(&pairs).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.zeros_dropped, 3);

        let r = wilcoxon_signed_rank(&[(1.0, 1.0), (3.0, 1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(r.zeros_dropped, 1);
        assert_eq!(r.n, 3);
    }

    #[test]
    fn signed_rank_swap_negates_statistic_keeps_p() {
        let pairs = [
            (1.0, 0.2),
            (0.4, 1.1),
            (2.0, 0.1),
            (0.9, 0.3),
            (0.5, 0.45),
            (3.0, 1.0),
            (0.1, 0.4),
        ];
        let swapped: Vec<(f64, f64)> = pairs.iter().map(|&(x, y)| (y, x)).collect();
        let r = wilcoxon_signed_rank(&pairs).unwrap();
        let s = wilcoxon_signed_rank(&swapped).unwrap();
        let m = 7.0;
        assert_eq!(r.statistic + s.statistic, m * (m + 1.0) / 2.0);
        assert!((r.p_value - s.p_value).abs() < 1e-15);
        assert!((r.z + s.z).abs() < 1e-12);
    }

    #[test]
    fn normal_mode_above_threshold() {
        let a: Vec<f64> = (0..15).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..15).map(|i| i as f64 + 0.5).collect();
        let r = wilcoxon_rank_sum(&a, &b).unwrap();
        assert_eq!(r.mode, TestMode::NormalApprox);
        assert!(r.p_value > 0.5);
    }

    #[test]
    fn summaries() {
        let s = summarize(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!((s.mean, s.se), (2.0, Some(0.0)));
        let s = summarize(&[1.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.se), (2.0, Some(1.0)));
        let s = summarize(&[5.0]).unwrap();
        assert_eq!((s.mean, s.se), (5.0, None));
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn kde_symmetric_pair() {
        let grid = linspace(-3.0, 3.0, 61);
        let d = kde_gaussian(&[-1.0, 1.0], &grid, None).unwrap();
        for i in 0..grid.len() {
            assert!((d[i] - d[grid.len() - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn kde_zero_variance_needs_bandwidth() {
        let err = kde_gaussian(&[1.0, 1.0, 1.0], &[1.0], None).unwrap_err();
        assert!(err.to_string().contains("explicit bandwidth"));
        let d = kde_gaussian(&[1.0, 1.0, 1.0], &[1.0], Some(0.5)).unwrap();
        assert!(d[0] > 0.0);
    }

    #[test]
    fn silverman_known_value() {
        // sd = 1.5811, IQR = 2 -> 1.4925; min is 1.4925
        let h = silverman_bandwidth(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let expected = 0.9 * (2.0f64 / 1.34) * 5f64.powf(-0.2);
        assert!((h - expected).abs() < 1e-12);
    }
}
