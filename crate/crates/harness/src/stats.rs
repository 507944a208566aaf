//! Statistics for paired trial comparisons.
//!
//! The exact Wilcoxon signed-rank test operates on paired differences
//! `d_t = a_t - b_t`.  Zero differences are discarded, the remaining
//! magnitudes receive average ranks (ties share the mean of the positions
//! they occupy), and the reported statistic is `min(T+, T-)` where `T+`
//! sums the ranks of positive differences.  The two-sided p-value is exact:
//! the null distribution of `T+` is enumerated over all `2^n` sign
//! assignments and `p = min(1, 2 min(P(T+ <= t), P(T+ >= t)))` for the
//! observed `t`.
//!
//! Multiple scan points are corrected with the Benjamini-Hochberg step-up:
//! `p~_(i) = min_{j >= i} (m p_(j) / j)` capped at one, which is monotone
//! non-decreasing in `i` by construction.
//!
//! Bootstrap bands resample whole trials with replacement and report
//! percentile envelopes of the resampled mean curve.

use crate::error::{HarnessError, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest sample size for which the exact null distribution is enumerated.
pub const MAX_EXACT_PAIRS: usize = 25;

/// Outcome of the exact signed-rank test.
#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonOutcome {
    /// `min(T+, T-)` over the nonzero differences.
    pub statistic: f64,
    /// Exact two-sided p-value.
    pub p_value: f64,
    /// Number of nonzero differences actually ranked.
    pub pairs_used: usize,
}

/// Exact two-sided Wilcoxon signed-rank test on paired differences.
///
/// Differences equal to zero are dropped.  Errors if every difference is
/// zero (the test is undefined) or if more than [`MAX_EXACT_PAIRS`] nonzero
/// pairs remain.
pub fn wilcoxon_signed_rank(differences: &[f64]) -> Result<WilcoxonOutcome> {
    if differences.iter().any(|d| !d.is_finite()) {
        return Err(HarnessError::Numerical(
            "signed-rank test received a non-finite difference".into(),
        ));
    }
    let nonzero: Vec<f64> = differences.iter().copied().filter(|d| *d != 0.0).collect();
    if nonzero.is_empty() {
        return Err(HarnessError::Numerical(
            "signed-rank test is undefined when every paired difference is zero".into(),
        ));
    }
    if nonzero.len() > MAX_EXACT_PAIRS {
        return Err(HarnessError::Numerical(format!(
            "exact signed-rank enumeration supports at most {} nonzero pairs, got {}",
            MAX_EXACT_PAIRS,
            nonzero.len()
        )));
    }
    let n = nonzero.len();

    // Rank |d| ascending with average ranks on ties; twice the average rank
    // is always an integer, so scaled ranks stay exact.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| nonzero[i].abs().total_cmp(&nonzero[j].abs()));
    let mut scaled_rank = vec![0u64; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && nonzero[order[end]].abs() == nonzero[order[start]].abs() {
            end += 1;
        }
        // Positions start+1 ..= end (1-based); average rank = (first+last)/2.
        let doubled = (start + 1 + end) as u64;
        for &idx in &order[start..end] {
            scaled_rank[idx] = doubled;
        }
        start = end;
    }

    let scaled_total: u64 = scaled_rank.iter().sum();
    let scaled_positive: u64 = nonzero
        .iter()
        .zip(&scaled_rank)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let statistic = (scaled_positive.min(scaled_total - scaled_positive)) as f64 / 2.0;

    // Null distribution of the scaled T+ by subset-sum counting.
    let mut counts = vec![0.0f64; scaled_total as usize + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in &scaled_rank {
        let r = r as usize;
        reach += r;
        for s in (r..=reach).rev() {
            counts[s] += counts[s - r];
        }
    }
    let total = 2f64.powi(n as i32);
    let observed = scaled_positive as usize;
    let below: f64 = counts[..=observed].iter().sum();
    let above: f64 = counts[observed..].iter().sum();
    let p_value = (2.0 * (below.min(above)) / total).min(1.0);

    Ok(WilcoxonOutcome {
        statistic,
        p_value,
        pairs_used: n,
    })
}

/// Benjamini-Hochberg step-up adjustment.
///
/// Returns adjusted p-values in the original order, each capped at one and
/// monotone along the sorted sequence.
pub fn benjamini_hochberg(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(HarnessError::Numerical(
            "step-up adjustment needs at least one p-value".into(),
        ));
    }
    for &p in raw {
        if !(0.0..=1.0).contains(&p) {
            return Err(HarnessError::Numerical(format!(
                "p-value {p} outside [0, 1]"
            )));
        }
    }
    let m = raw.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for k in (0..m).rev() {
        let candidate = (m as f64) * raw[order[k]] / (k as f64 + 1.0);
        running = running.min(candidate).min(1.0);
        adjusted[order[k]] = running;
    }
    Ok(adjusted)
}

/// Percentile envelope of a resampled mean curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapBand {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Percentile bootstrap band over per-trial curves.
///
/// Each resample draws `curves.len()` whole trials with replacement and
/// averages them pointwise; the band is the `(1 - confidence)/2` and
/// `(1 + confidence)/2` percentiles of those means at each position.
pub fn bootstrap_band(
    curves: &[Vec<f64>],
    confidence: f64,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapBand> {
    if curves.len() < 2 {
        return Err(HarnessError::Numerical(
            "bootstrap band needs at least two trials".into(),
        ));
    }
    let len = curves[0].len();
    if len == 0 || curves.iter().any(|c| c.len() != len) {
        return Err(HarnessError::Numerical(
            "bootstrap trials must share a common nonzero length".into(),
        ));
    }
    if !(0.0..1.0).contains(&confidence) || confidence <= 0.0 {
        return Err(HarnessError::Numerical(format!(
            "confidence {confidence} outside (0, 1)"
        )));
    }
    if resamples == 0 {
        return Err(HarnessError::Numerical(
            "bootstrap needs at least one resample".into(),
        ));
    }

    let trials = curves.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means = vec![vec![0.0f64; resamples]; len];
    for r in 0..resamples {
        let mut acc = vec![0.0f64; len];
        for _ in 0..trials {
            let pick = rng.gen_range(0..trials);
            for (slot, value) in acc.iter_mut().zip(&curves[pick]) {
                *slot += value;
            }
        }
        for (pos, slot) in acc.iter().enumerate() {
            means[pos][r] = slot / trials as f64;
        }
    }

    let lo_q = (1.0 - confidence) / 2.0;
    let hi_q = (1.0 + confidence) / 2.0;
    let mut lower = Vec::with_capacity(len);
    let mut upper = Vec::with_capacity(len);
    for samples in &mut means {
        samples.sort_by(|a, b| a.total_cmp(b));
        lower.push(quantile_sorted(samples, lo_q));
        upper.push(quantile_sorted(samples, hi_q));
    }
    Ok(BootstrapBand { lower, upper })
}

/// Linear-interpolation quantile of an ascending slice.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let last = sorted.len() - 1;
    let pos = q * last as f64;
    let below = pos.floor() as usize;
    let above = pos.ceil() as usize;
    if below == above {
        sorted[below]
    } else {
        let frac = pos - below as f64;
        sorted[below] * (1.0 - frac) + sorted[above] * frac
    }
}

/// Gaussian smoothing with reflected boundaries.
///
/// The kernel has radius `ceil(4 sigma)` and is normalized over its window;
/// `sigma = 0` returns the input unchanged.  Intended for exported plot
/// curves only — metrics are always computed on raw data.
pub fn gaussian_smooth(values: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(HarnessError::Numerical(format!(
            "smoothing width {sigma} must be finite and nonnegative"
        )));
    }
    if sigma == 0.0 || values.is_empty() {
        return Ok(values.to_vec());
    }
    let radius = (4.0 * sigma).ceil() as i64;
    let mut kernel = Vec::with_capacity(2 * radius as usize + 1);
    for k in -radius..=radius {
        kernel.push((-0.5 * (k as f64 / sigma).powi(2)).exp());
    }
    let norm: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= norm;
    }

    let len = values.len() as i64;
    let reflect = |mut idx: i64| -> usize {
        // Mirror with edge repetition: ... c b a | a b c ... | c b a ...
        loop {
            if idx < 0 {
                idx = -idx - 1;
            } else if idx >= len {
                idx = 2 * len - 1 - idx;
            } else {
                return idx as usize;
            }
        }
    };

    let mut smoothed = Vec::with_capacity(values.len());
    for center in 0..len {
        let mut acc = 0.0;
        for (slot, k) in (-radius..=radius).enumerate() {
            acc += kernel[slot] * values[reflect(center + k)];
        }
        smoothed.push(acc);
    }
    Ok(smoothed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_same_sign_differences_give_exact_textbook_p() {
        let diffs: Vec<f64> = (1..=10).map(|k| -(k as f64) * 0.01).collect();
        let out = wilcoxon_signed_rank(&diffs).unwrap();
        assert_eq!(out.statistic, 0.0);
        assert_eq!(out.p_value, 0.001953125);
        assert_eq!(out.pairs_used, 10);
    }

    #[test]
    fn single_pair_is_never_significant() {
        let out = wilcoxon_signed_rank(&[0.3]).unwrap();
        assert_eq!(out.p_value, 1.0);
        assert_eq!(out.pairs_used, 1);
    }

    #[test]
    fn zero_differences_are_dropped_and_all_zero_is_an_error() {
        let out = wilcoxon_signed_rank(&[0.0, -0.5, 0.0]).unwrap();
        assert_eq!(out.pairs_used, 1);
        assert!(wilcoxon_signed_rank(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn exact_enumeration_matches_brute_force_with_ties() {
        let diffs = [0.4, -0.2, 0.2, 0.7, -0.1];
        let out = wilcoxon_signed_rank(&diffs).unwrap();

        // Brute force: ranks of |d| = [0.1, 0.2, 0.2, 0.4, 0.7]
        // -> 1, 2.5, 2.5, 4, 5 assigned back to the input order.
        let ranks = [4.0, 2.5, 2.5, 5.0, 1.0];
        let observed: f64 = diffs
            .iter()
            .zip(&ranks)
            .filter(|(d, _)| **d > 0.0)
            .map(|(_, r)| *r)
            .sum();
        let total: f64 = ranks.iter().sum();
        assert_eq!(out.statistic, observed.min(total - observed));

        let mut below = 0usize;
        let mut above = 0usize;
        for mask in 0..32u32 {
            let t: f64 = (0..5)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| ranks[b])
                .sum();
            if t <= observed {
                below += 1;
            }
            if t >= observed {
                above += 1;
            }
        }
        let expected = (2.0 * below.min(above) as f64 / 32.0).min(1.0);
        assert!((out.p_value - expected).abs() < 1e-15);
    }

    #[test]
    fn step_up_adjustment_matches_hand_computation() {
        let mut raw = vec![0.001953125; 23];
        raw.extend([0.01953125, 0.064453125, 0.083984375]);
        let adjusted = benjamini_hochberg(&raw).unwrap();
        for &a in &adjusted[..23] {
            assert!((a - 26.0 * 0.001953125 / 23.0).abs() < 1e-15);
        }
        assert!((adjusted[23] - 26.0 * 0.01953125 / 24.0).abs() < 1e-15);
        assert!((adjusted[24] - 26.0 * 0.064453125 / 25.0).abs() < 1e-15);
        assert!((adjusted[25] - 0.083984375).abs() < 1e-15);
        // Monotone along the sorted order and capped at one.
        let mut sorted = adjusted.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        for pair in sorted.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
        assert!(sorted.iter().all(|a| *a <= 1.0));
    }

    #[test]
    fn identical_trials_give_a_zero_width_band() {
        let curve = vec![0.3, 0.1, 0.05];
        let curves = vec![curve.clone(); 5];
        let band = bootstrap_band(&curves, 0.95, 500, 11).unwrap();
        for (lo, hi) in band.lower.iter().zip(&band.upper) {
            assert_eq!(lo, hi);
        }
        assert_eq!(band.lower, curve);
    }

    #[test]
    fn bootstrap_is_deterministic_in_the_seed_and_brackets_the_mean() {
        let curves = vec![
            vec![1.0, 2.0],
            vec![1.5, 1.0],
            vec![0.5, 2.5],
            vec![1.2, 1.8],
        ];
        let a = bootstrap_band(&curves, 0.9, 300, 42).unwrap();
        let b = bootstrap_band(&curves, 0.9, 300, 42).unwrap();
        assert_eq!(a, b);
        let c = bootstrap_band(&curves, 0.9, 300, 43).unwrap();
        assert_ne!(a, c);
        for pos in 0..2 {
            let mean: f64 = curves.iter().map(|t| t[pos]).sum::<f64>() / 4.0;
            assert!(a.lower[pos] <= mean && mean <= a.upper[pos]);
        }
    }

    #[test]
    fn smoothing_impulse_reproduces_the_sampled_kernel() {
        let mut curve = vec![0.0; 17];
        curve[8] = 1.0;
        let smoothed = gaussian_smooth(&curve, 2.0).unwrap();
        let sigma = 2.0f64;
        let weights: Vec<f64> = (-8i64..=8).map(|k| (-0.5 * (k as f64 / sigma).powi(2)).exp()).collect();
        let norm: f64 = weights.iter().sum();
        for (k, w) in weights.iter().enumerate() {
            assert!((smoothed[k] - w / norm).abs() < 1e-10);
        }
    }

    #[test]
    fn smoothing_preserves_constants_and_zero_width_is_identity() {
        let curve = vec![0.7; 9];
        let smoothed = gaussian_smooth(&curve, 1.3).unwrap();
        for v in &smoothed {
            assert!((v - 0.7).abs() < 1e-12);
        }
        let raw = vec![0.2, -0.4, 0.9];
        assert_eq!(gaussian_smooth(&raw, 0.0).unwrap(), raw);
    }
}
