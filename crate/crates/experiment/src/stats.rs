//! Descriptive statistics, the one-tailed Welch test and t intervals.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Mean, sample standard deviation and range of one sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Describe {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl Describe {
    /// `None` for an empty sample. A single value has `sd = 0`.
    pub fn of(sample: &[f64]) -> Option<Self> {
        if sample.is_empty() {
            return None;
        }
        let n = sample.len();
        let mean = mean(sample);
        let sd = variance(sample).map_or(0.0, f64::sqrt);
        let min = sample.iter().copied().fold(f64::INFINITY, f64::min);
        let max = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Self { n, mean, sd, min, max })
    }
}

pub fn mean(sample: &[f64]) -> f64 {
    sample.iter().sum::<f64>() / sample.len() as f64
}

/// Unbiased sample variance; `None` below two values.
pub fn variance(sample: &[f64]) -> Option<f64> {
    if sample.len() < 2 {
        return None;
    }
    let m = mean(sample);
    Some(sample.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (sample.len() - 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    /// Welch-Satterthwaite degrees of freedom.
    pub df: f64,
    /// Probability of a `t` at least this low if the means were equal.
    pub p: f64,
}

impl TTest {
    pub fn significant(&self, alpha: f64) -> bool {
        self.p < alpha
    }
}

/// One-tailed Welch test of `mean(a) < mean(b)`.
///
/// Both samples need at least two values. When neither sample varies the
/// result is decided by the means alone: `p = 0.5` if they are equal, 0 or 1
/// otherwise.
pub fn welch_one_tailed(a: &[f64], b: &[f64]) -> Option<TTest> {
    let (va, vb) = (variance(a)?, variance(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let diff = mean(a) - mean(b);
    let se2 = sa + sb;
    if se2 == 0.0 {
        let p = if diff < 0.0 {
            0.0
        } else if diff > 0.0 {
            1.0
        } else {
            0.5
        };
        let t = if diff == 0.0 { 0.0 } else { diff.signum() * f64::INFINITY };
        return Some(TTest { t, df: na + nb - 2.0, p });
    }
    let t = diff / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).ok()?;
    Some(TTest { t, df, p: dist.cdf(t) })
}

/// Symmetric t interval on the mean at the given confidence (e.g. 0.95).
pub fn confidence_interval(sample: &[f64], confidence: f64) -> Option<(f64, f64)> {
    let v = variance(sample)?;
    let n = sample.len() as f64;
    let dist = StudentsT::new(0.0, 1.0, n - 1.0).ok()?;
    let q = dist.inverse_cdf(0.5 + confidence / 2.0);
    let half = q * (v / n).sqrt();
    let m = mean(sample);
    Some((m - half, m + half))
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn describe_small_sample() {
        let d = Describe::of(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_abs_diff_eq!(d.mean, 5.0);
        assert_abs_diff_eq!(d.sd, (32.0f64 / 7.0).sqrt(), epsilon = 1e-12);
        assert_eq!((d.min, d.max), (2.0, 9.0));
        assert!(Describe::of(&[]).is_none());
    }

    #[test]
    fn identical_samples_are_even() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(welch_one_tailed(&a, &a).unwrap().p, 0.5, epsilon = 1e-12);
        let c = [3.0, 3.0, 3.0];
        assert_eq!(welch_one_tailed(&c, &c).unwrap().p, 0.5);
        assert_eq!(welch_one_tailed(&[1.0, 1.0], &c).unwrap().p, 0.0);
        assert!(welch_one_tailed(&[1.0], &c).is_none());
    }
}
