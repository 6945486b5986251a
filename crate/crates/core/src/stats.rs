//! Streaming moments, normality tests and the small density toolkit used to
//! draw the standardized Zagreb histogram.

use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::error::{Error, Result};

/// Minimum sample size accepted by the normality tests.
pub const MIN_TEST_SAMPLE: usize = 20;

/// Kolmogorov-Smirnov coefficient for α = 0.01: critical value `1.63/√n`.
pub const KS_COEFFICIENT_001: f64 = 1.63;

/// χ² with 2 degrees of freedom, upper 1% point.
pub const JB_CRITICAL_001: f64 = 9.21;

/// Welford one-pass mean/variance with min and max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for RunningMoments {
    fn default() -> Self {
        Self::new()
    }
}

impl RunningMoments {
    pub fn new() -> Self {
        Self {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&self, other: &RunningMoments) -> RunningMoments {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * self.count as f64 * other.count as f64 / count as f64;
        RunningMoments {
            count,
            mean,
            m2,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased variance; `None` with fewer than two observations.
    pub fn variance(&self) -> Option<f64> {
        (self.count > 1).then(|| self.m2 / (self.count - 1) as f64)
    }

    pub fn std_dev(&self) -> Option<f64> {
        self.variance().map(f64::sqrt)
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> Option<f64> {
        self.std_dev().map(|sd| sd / (self.count as f64).sqrt())
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = RunningMoments::new();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

/// Standard normal CDF, `Φ(x) = erfc(-x/√2)/2`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Outcome of a goodness-of-fit test at a fixed level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

/// One-sample Kolmogorov-Smirnov test against N(0, 1).
pub fn ks_normality(sample: &[f64]) -> Result<TestResult> {
    if sample.len() < MIN_TEST_SAMPLE {
        return Err(Error::UndersizedSample {
            needed: MIN_TEST_SAMPLE,
            given: sample.len(),
        });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = normal_cdf(x);
            let above = (i + 1) as f64 / n - cdf;
            let below = cdf - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let critical_value = KS_COEFFICIENT_001 / n.sqrt();
    Ok(TestResult {
        statistic,
        critical_value,
        alpha: 0.01,
        reject: statistic >= critical_value,
    })
}

/// Sample skewness and kurtosis from biased central moments.
pub fn skewness_kurtosis(sample: &[f64]) -> Result<(f64, f64)> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in sample {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    if m2 <= 0.0 {
        return Err(Error::ZeroVariance {
            context: "sample has no spread",
        });
    }
    Ok((m3 / m2.powf(1.5), m4 / (m2 * m2)))
}

/// Jarque-Bera test: `n/6 (S² + (K - 3)²/4)` against χ²₂ at α = 0.01.
pub fn jarque_bera(sample: &[f64]) -> Result<TestResult> {
    if sample.len() < MIN_TEST_SAMPLE {
        return Err(Error::UndersizedSample {
            needed: MIN_TEST_SAMPLE,
            given: sample.len(),
        });
    }
    let (skew, kurt) = skewness_kurtosis(sample)?;
    let n = sample.len() as f64;
    let statistic = n / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0);
    Ok(TestResult {
        statistic,
        critical_value: JB_CRITICAL_001,
        alpha: 0.01,
        reject: statistic >= JB_CRITICAL_001,
    })
}

/// Empirical CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    /// Fraction of the sample `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        let below = self.sorted.partition_point(|&v| v <= x);
        below as f64 / self.sorted.len() as f64
    }

    /// `(x, F(x))` at each distinct sample value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &x) in self.sorted.iter().enumerate() {
            let level = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = level,
                _ => out.push((x, level)),
            }
        }
        out
    }
}

/// Equal-width histogram over `[lo, hi]`; the top edge belongs to the last bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bar heights scaled so the bars have unit area.
    pub fn densities(&self) -> Vec<f64> {
        let scale = self.total() as f64 * self.bin_width();
        self.counts.iter().map(|&c| c as f64 / scale).collect()
    }
}

pub fn histogram(sample: &[f64], bins: usize) -> Result<Histogram> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
    }
    let mut lo = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in sample {
        let bin = (((x - lo) / width) as usize).min(bins - 1);
        counts[bin] += 1;
    }
    Ok(Histogram { lo, hi, counts })
}

/// Number of grid points in a [`kde`] curve.
pub const KDE_POINTS: usize = 512;

/// Gaussian kernel density estimate on an evenly spaced grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeCurve {
    pub bandwidth: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl KdeCurve {
    /// Trapezoid-rule area under the curve.
    pub fn integral(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0)
            .sum()
    }
}

/// Silverman's rule `h = 1.06 sd n^(-1/5)`, evaluated on 512 points over
/// `[min - 3h, max + 3h]`.
pub fn kde(sample: &[f64]) -> Result<KdeCurve> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let moments: RunningMoments = sample.iter().copied().collect();
    let sd = moments.std_dev().unwrap_or(0.0);
    if sd <= 0.0 {
        return Err(Error::ZeroVariance {
            context: "kernel bandwidth is zero",
        });
    }
    let n = sample.len() as f64;
    let bandwidth = 1.06 * sd * n.powf(-0.2);
    let lo = moments.min() - 3.0 * bandwidth;
    let hi = moments.max() + 3.0 * bandwidth;
    let step = (hi - lo) / (KDE_POINTS - 1) as f64;
    let norm = 1.0 / (n * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    let xs: Vec<f64> = (0..KDE_POINTS).map(|i| lo + step * i as f64).collect();
    let ys = xs
        .iter()
        .map(|&x| {
            let s: f64 = sample
                .iter()
                .map(|&v| {
                    let u = (x - v) / bandwidth;
                    (-0.5 * u * u).exp()
                })
                .sum();
            s * norm
        })
        .collect();
    Ok(KdeCurve { bandwidth, xs, ys })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp1};
    use statrs::distribution::{ContinuousCDF, Normal};

    fn normal_quantiles(n: usize) -> Vec<f64> {
        let normal = Normal::new(0.0, 1.0).unwrap();
        (1..=n)
            .map(|i| normal.inverse_cdf((i as f64 - 0.5) / n as f64))
            .collect()
    }

    #[test]
    fn running_moments_match_two_pass() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        let acc: RunningMoments = xs.iter().copied().collect();
        assert_eq!(acc.mean(), 5.0);
        assert!((acc.variance().unwrap() - 32.0 / 7.0).abs() < 1e-12);
        assert_eq!((acc.min(), acc.max()), (2.0, 9.0));

        let left: RunningMoments = xs[..3].iter().copied().collect();
        let right: RunningMoments = xs[3..].iter().copied().collect();
        let merged = left.merge(&right);
        assert!((merged.mean() - acc.mean()).abs() < 1e-12);
        assert!((merged.variance().unwrap() - acc.variance().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn single_observation_has_no_variance() {
        let acc: RunningMoments = [3.5].into_iter().collect();
        assert_eq!(acc.mean(), 3.5);
        assert_eq!(acc.variance(), None);
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-12, "{:e}", normal_cdf(1.959963984540054) - 0.975);
        assert!((normal_cdf(-1.0) - 0.15865525393145707).abs() < 1e-12);
    }

    #[test]
    fn ks_examples() {
        let r = 500;
        let perfect = ks_normality(&normal_quantiles(r)).unwrap();
        assert!(perfect.statistic <= 0.5 / r as f64 + 1e-9);
        assert!(!perfect.reject);
        assert!((perfect.critical_value - 1.63 / (500f64).sqrt()).abs() < 1e-15);

        let zeros = ks_normality(&vec![0.0; r]).unwrap();
        assert!((zeros.statistic - 0.5).abs() < 1e-12);
        assert!(zeros.reject);

        assert_eq!(
            ks_normality(&[0.0; 5]),
            Err(Error::UndersizedSample { needed: 20, given: 5 })
        );
    }

    #[test]
    fn jarque_bera_examples() {
        let perfect = jarque_bera(&normal_quantiles(500)).unwrap();
        assert!(perfect.statistic < 1.0, "{}", perfect.statistic);
        assert!(!perfect.reject);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let skewed: Vec<f64> = (0..500)
            .map(|_| {
                let e: f64 = Exp1.sample(&mut rng);
                (e - 1.0) * 3.0 + 10.0
            })
            .collect();
        let r = jarque_bera(&skewed).unwrap();
        assert!(r.reject && r.statistic > 9.21);

        // kurtosis 1, excess -2: 500/6 · 4/4
        let two_point: Vec<f64> = (0..500).map(|i| if i % 2 == 0 { -1.0 } else { 1.0 }).collect();
        let r = jarque_bera(&two_point).unwrap();
        assert!((r.statistic - 500.0 / 6.0).abs() < 1e-9);
        assert!(r.reject);

        assert!(matches!(jarque_bera(&[1.0; 30]), Err(Error::ZeroVariance { .. })));
        assert!(matches!(jarque_bera(&[1.0; 3]), Err(Error::UndersizedSample { .. })));
    }

    #[test]
    fn ecdf_examples() {
        let e = Ecdf::new(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(e.eval(0.0), 0.75);
        assert_eq!(e.eval(-1.0), 0.0);
        assert_eq!(e.eval(1.0), 1.0);
        assert_eq!(e.steps(), vec![(0.0, 0.75), (1.0, 1.0)]);
        assert_eq!(Ecdf::new(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(histogram(&[1.0, 2.0, 3.0, 4.0], 2).unwrap().counts, vec![2, 2]);
        let h = histogram(&[0.3, -1.2, 2.5, 0.0], 1).unwrap();
        assert_eq!(h.counts, vec![4]);
        assert!((h.densities()[0] * h.bin_width() - 1.0).abs() < 1e-12);
        assert!(histogram(&[], 3).is_err());
        assert!(histogram(&[1.0], 0).is_err());
        let flat = histogram(&[2.0, 2.0], 4).unwrap();
        assert_eq!(flat.total(), 2);
    }

    #[test]
    fn kde_integrates_to_one() {
        let curve = kde(&normal_quantiles(500)).unwrap();
        assert_eq!(curve.xs.len(), KDE_POINTS);
        assert!((curve.integral() - 1.0).abs() < 0.01, "{}", curve.integral());
        let h = 1.06 * RunningMoments::from_iter(normal_quantiles(500)).std_dev().unwrap() * 500f64.powf(-0.2);
        assert!((curve.bandwidth - h).abs() < 1e-15);
        assert!(kde(&[1.0, 1.0]).is_err());
        assert!(kde(&[]).is_err());
    }
}
