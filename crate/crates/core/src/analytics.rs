//! Point-to-point scaling approximations and ensemble statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ensemble summary at one sweep-axis value. The 68 % range is the
/// 16th–84th percentile band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStat {
    pub parameter: f64,
    pub mean: f64,
    pub p16: f64,
    pub p84: f64,
    pub count: usize,
}

/// Percentile of already-sorted data with linear interpolation between order
/// statistics (`rank = q·(n-1)`).
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let rank = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn ensemble_stats(samples: &[f64], parameter: f64) -> Result<EnsembleStat> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(EnsembleStat {
        parameter,
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        p16: percentile_sorted(&sorted, 0.16),
        p84: percentile_sorted(&sorted, 0.84),
        count: sorted.len(),
    })
}

/// Spectral efficiency of an `n_s`-span link relative to a single span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLaw {
    /// `log2(1 + snr1 / n_s)`
    pub exact: f64,
    /// `log2(snr1) - log2(n_s)`
    pub approx: f64,
}

pub fn ptp_log_approx(snr1: f64, n_s: usize) -> Result<LogLaw> {
    if !(snr1 > 0.0) || n_s == 0 {
        return Err(Error::InvalidArgument(format!(
            "need snr1 > 0 and n_s >= 1, got {snr1}, {n_s}"
        )));
    }
    let n = n_s as f64;
    Ok(LogLaw {
        exact: (1.0 + snr1 / n).log2(),
        approx: snr1.log2() - n.log2(),
    })
}

/// Summed high-SNR spectral efficiency of two links with `n_s - Δ` and `n_s + Δ` spans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLinkAverage {
    /// `log2(snr1/(n_s-Δ)) + log2(snr1/(n_s+Δ))`
    pub sum_form: f64,
    /// `2·log2(snr1) - log2(n_s² - Δ²)`
    pub closed_form: f64,
}

pub fn two_link_average(snr1: f64, n_s: f64, delta_n: f64) -> Result<TwoLinkAverage> {
    if !(snr1 > 0.0) || !(delta_n >= 0.0) || !(delta_n < n_s) {
        return Err(Error::InvalidArgument(format!(
            "need snr1 > 0 and 0 <= Δ < n_s, got snr1={snr1}, n_s={n_s}, Δ={delta_n}"
        )));
    }
    Ok(TwoLinkAverage {
        sum_form: (snr1 / (n_s - delta_n)).log2() + (snr1 / (n_s + delta_n)).log2(),
        closed_form: 2.0 * snr1.log2() - (n_s * n_s - delta_n * delta_n).log2(),
    })
}

/// Least-squares line `y = slope·x + intercept` with coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument("need at least two paired points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("x values are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - (slope * a + intercept)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_samples() {
        let s = ensemble_stats(&[5.0, 5.0, 5.0], 1.0).unwrap();
        assert_eq!((s.mean, s.p16, s.p84, s.count), (5.0, 5.0, 5.0, 3));
        assert!(ensemble_stats(&[], 0.0).is_err());
    }

    #[test]
    fn percentiles_interpolate() {
        let s = ensemble_stats(&[4.0, 1.0, 3.0, 2.0, 5.0], 0.0).unwrap();
        // rank 0.64 and 3.36 over [1..5]
        assert!((s.p16 - 1.64).abs() < 1e-12);
        assert!((s.p84 - 4.36).abs() < 1e-12);
        assert!((s.mean - 3.0).abs() < 1e-12);
    }

    #[test]
    fn log_law_values() {
        let l = ptp_log_approx(1000.0, 10).unwrap();
        assert!((l.exact - 101f64.log2()).abs() < 1e-12);
        assert!((l.exact - 6.658).abs() < 1e-3);
        assert!((l.approx - 6.644).abs() < 1e-3);
        let big = ptp_log_approx(1e12, 1).unwrap();
        assert!((big.exact - big.approx).abs() < 1e-9);
        assert!(ptp_log_approx(0.0, 1).is_err());
        assert!(ptp_log_approx(1.0, 0).is_err());
    }

    #[test]
    fn two_link_values() {
        let t = two_link_average(1000.0, 10.0, 5.0).unwrap();
        assert!((t.closed_form - 13.70).abs() < 5e-3, "{}", t.closed_form);
        assert!((t.sum_form - t.closed_form).abs() < 1e-12);
        let zero = two_link_average(1000.0, 10.0, 0.0).unwrap();
        assert!((zero.closed_form - 2.0 * (1000f64.log2() - 10f64.log2())).abs() < 1e-12);
        assert!(two_link_average(1000.0, 10.0, 10.0).is_err());
        let a = two_link_average(1000.0, 10.0, 2.0).unwrap().closed_form;
        let b = two_link_average(1000.0, 10.0, 3.0).unwrap().closed_form;
        assert!(b > a);
    }

    #[test]
    fn fit_recovers_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!((f.intercept + 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }
}
