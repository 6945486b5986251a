//! Seeded Monte Carlo runs over independent caterpillar replicates.
//!
//! Replicate `r` always draws from substream `(seed, r)`. Replicates are
//! evaluated in parallel, collected in replicate order and folded
//! sequentially, so a summary is bit-identical for any thread count.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caterpillar::{grow_counts, sample_direct, simulate, Caterpillar, RngSeed};
use crate::error::{Error, Result};
use crate::indices::{self, IndexKind, IndexValue};
use crate::stats::{self, RunningMoments, TestResult};
use crate::theory::{self, TheoryValue};

/// Default cap on retained per-replicate values (all indices together).
pub const DEFAULT_RETENTION_CAP: usize = 50_000_000;

/// How each replicate is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// `n` uniform growth steps.
    Sequential,
    /// One multinomial draw via conditional binomials.
    Direct,
}

impl Sampler {
    pub fn draw(self, m: usize, n: u64, seed: RngSeed) -> Result<Caterpillar> {
        match self {
            Sampler::Sequential => simulate(m, n, seed),
            Sampler::Direct => sample_direct(m, n, seed),
        }
    }
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sampler::Sequential => "sequential",
            Sampler::Direct => "direct",
        })
    }
}

impl FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(Sampler::Sequential),
            "direct" => Ok(Sampler::Direct),
            other => Err(Error::InvalidArgument(format!("unknown sampler '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: u64,
    pub replications: usize,
    pub seed: u64,
    pub indices: Vec<IndexKind>,
    pub sampler: Sampler,
    /// `None` uses rayon's default pool.
    pub threads: Option<usize>,
    /// Keep every per-replicate value in the summary.
    pub retain_samples: bool,
    pub retention_cap: usize,
}

impl ExperimentConfig {
    pub fn new(m: usize, n: u64, replications: usize, seed: u64, indices: Vec<IndexKind>) -> Self {
        Self {
            m,
            n,
            replications,
            seed,
            indices,
            sampler: Sampler::Sequential,
            threads: None,
            retain_samples: true,
            retention_cap: DEFAULT_RETENTION_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::SpineTooShort { m: self.m });
        }
        if self.replications == 0 {
            return Err(Error::InvalidArgument("replications must be at least 1".into()));
        }
        if self.indices.is_empty() {
            return Err(Error::InvalidArgument("no indices requested".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        let requested = self.replications.saturating_mul(self.indices.len());
        if self.retain_samples && requested > self.retention_cap {
            return Err(Error::RetentionCap {
                requested,
                cap: self.retention_cap,
            });
        }
        Ok(())
    }
}

/// Empirical mean set against a closed-form mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryComparison {
    pub formula: String,
    pub theory_mean: f64,
    pub empirical_mean: f64,
    pub std_error: Option<f64>,
    /// `(empirical - theory)/se`; `None` when the standard error is zero or undefined.
    pub z_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSummary {
    pub kind: IndexKind,
    pub moments: RunningMoments,
    pub sample: Option<Vec<f64>>,
    pub theory: Option<TheoryComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub ks: TestResult,
    pub jarque_bera: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub indices: Vec<IndexSummary>,
    /// Zagreb values standardized by the exact finite-n mean and variance.
    pub zagreb_standardized: Option<Vec<f64>>,
    pub normality: Option<NormalityReport>,
}

impl ExperimentSummary {
    pub fn index(&self, kind: IndexKind) -> Option<&IndexSummary> {
        self.indices.iter().find(|s| s.kind == kind)
    }
}

/// Closed-form mean available for `kind` at `(m, n)`, if any.
pub fn theory_mean(kind: IndexKind, m: u64, n: u64) -> Option<TheoryValue> {
    match kind {
        IndexKind::Hoover => theory::hoover_mean(m, n).ok(),
        IndexKind::Zagreb => theory::zagreb_mean(m, n).ok(),
        IndexKind::Randic(1.0) => theory::randic_mean(m, n).ok(),
        IndexKind::Wiener => theory::wiener_mean(m, n).ok(),
        IndexKind::HyperWiener => theory::hyper_wiener_mean_corrected(m, n).ok(),
        _ => None,
    }
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(count) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(count)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Per-replicate index values, row `r` from substream `(seed, r)`.
pub fn replicate_values(cfg: &ExperimentConfig) -> Result<Vec<Vec<IndexValue>>> {
    cfg.validate()?;
    let rows: Result<Vec<Vec<IndexValue>>> = in_pool(cfg.threads, || {
        (0..cfg.replications)
            .into_par_iter()
            .map(|r| {
                let c = cfg.sampler.draw(cfg.m, cfg.n, RngSeed::new(cfg.seed, r as u64))?;
                Ok(cfg
                    .indices
                    .iter()
                    .map(|&kind| indices::evaluate(&c, kind))
                    .collect())
            })
            .collect()
    })?;
    rows
}

pub fn run_mc(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let rows = replicate_values(cfg)?;
    let (m, n) = (cfg.m as u64, cfg.n);

    let mut summaries = Vec::with_capacity(cfg.indices.len());
    for (col, &kind) in cfg.indices.iter().enumerate() {
        let column: Vec<f64> = rows.iter().map(|row| row[col].value).collect();
        let moments: RunningMoments = column.iter().copied().collect();
        let theory = theory_mean(kind, m, n).map(|t| {
            let theory_mean = t.to_f64();
            let std_error = moments.std_error();
            let z_score = std_error
                .filter(|se| *se > 0.0)
                .map(|se| (moments.mean() - theory_mean) / se);
            TheoryComparison {
                formula: t.source.to_string(),
                theory_mean,
                empirical_mean: moments.mean(),
                std_error,
                z_score,
            }
        });
        summaries.push(IndexSummary {
            kind,
            moments,
            sample: cfg.retain_samples.then_some(column),
            theory,
        });
    }

    let zagreb_standardized = summaries
        .iter()
        .find(|s| s.kind == IndexKind::Zagreb)
        .and_then(|s| s.sample.as_deref())
        .and_then(|sample| standardize_zagreb(sample, cfg.m, cfg.n).ok());
    let normality = zagreb_standardized
        .as_deref()
        .filter(|z| z.len() >= stats::MIN_TEST_SAMPLE)
        .and_then(|z| {
            Some(NormalityReport {
                ks: stats::ks_normality(z).ok()?,
                jarque_bera: stats::jarque_bera(z).ok()?,
            })
        });

    Ok(ExperimentSummary {
        config: cfg.clone(),
        indices: summaries,
        zagreb_standardized,
        normality,
    })
}

/// `(z - E[Z_n]) / sqrt(Var[Z_n])` with the exact finite-n moments.
pub fn standardize_zagreb(sample: &[f64], m: usize, n: u64) -> Result<Vec<f64>> {
    let variance = theory::zagreb_variance(m as u64, n)?;
    if variance.value.is_zero() || variance.value < num_rational::BigRational::zero() {
        return Err(Error::ZeroVariance {
            context: "zagreb variance is zero at this (m, n)",
        });
    }
    let mean = theory::zagreb_mean(m as u64, n)?.to_f64();
    let sd = variance.to_f64().sqrt();
    Ok(sample.iter().map(|z| (z - mean) / sd).collect())
}

/// One sequential growth path observed at `n = 1, 2, 4, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub kind: IndexKind,
    pub scale_exponent: u32,
    /// `(n, index / n^scale_exponent)`.
    pub checkpoints: Vec<(u64, f64)>,
    /// Largest absolute change between consecutive checkpoints among the last three.
    pub stabilization: f64,
}

impl Trajectory {
    /// Absolute changes between consecutive checkpoints.
    pub fn successive_differences(&self) -> Vec<f64> {
        self.checkpoints
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).abs())
            .collect()
    }

    pub fn last(&self) -> Option<f64> {
        self.checkpoints.last().map(|c| c.1)
    }
}

/// Follows one path to `n_max`, recording `index/n^scale_exponent` at powers
/// of two (and at `n_max` itself).
pub fn trajectory_check(
    m: usize,
    n_max: u64,
    seed: RngSeed,
    kind: IndexKind,
    scale_exponent: u32,
) -> Result<Trajectory> {
    let mut current = Caterpillar::new_spine(m)?;
    let mut rng = seed.rng();
    let mut checkpoints = Vec::new();
    let mut target = 1u64;
    while target <= n_max {
        let counts = grow_counts(current.leaf_counts().to_vec(), target - current.n(), &mut rng);
        current = Caterpillar::from_counts(counts)?;
        let scaled = indices::evaluate(&current, kind).value / (target as f64).powi(scale_exponent as i32);
        checkpoints.push((target, scaled));
        if target == n_max {
            break;
        }
        target = (target * 2).min(n_max);
    }
    let tail = &checkpoints[checkpoints.len().saturating_sub(3)..];
    let stabilization = tail
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).abs())
        .fold(0.0, f64::max);
    Ok(Trajectory {
        kind,
        scale_exponent,
        checkpoints,
        stabilization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_replicate_has_no_variance() {
        let cfg = ExperimentConfig::new(3, 10, 1, 4, vec![IndexKind::Zagreb, IndexKind::Hoover]);
        let s = run_mc(&cfg).unwrap();
        let z = s.index(IndexKind::Zagreb).unwrap();
        assert_eq!(z.moments.count(), 1);
        assert_eq!(z.moments.variance(), None);
        assert_eq!(z.sample.as_ref().unwrap()[0], z.moments.mean());
        assert!(s.normality.is_none());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut cfg = ExperimentConfig::new(
            7,
            300,
            64,
            99,
            vec![IndexKind::Zagreb, IndexKind::Randic(-0.5), IndexKind::Wiener],
        );
        cfg.threads = Some(1);
        let one = run_mc(&cfg).unwrap();
        cfg.threads = Some(4);
        let four = run_mc(&cfg).unwrap();
        assert_eq!(one.indices, four.indices);
        assert_eq!(one.zagreb_standardized, four.zagreb_standardized);
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(1, 10, 5, 0, vec![IndexKind::Zagreb]);
        assert!(matches!(run_mc(&cfg), Err(Error::SpineTooShort { m: 1 })));
        cfg.m = 3;
        cfg.replications = 0;
        assert!(run_mc(&cfg).is_err());
        cfg.replications = 10;
        cfg.retention_cap = 5;
        assert!(matches!(run_mc(&cfg), Err(Error::RetentionCap { requested: 10, cap: 5 })));
        cfg.retain_samples = false;
        let s = run_mc(&cfg).unwrap();
        assert!(s.index(IndexKind::Zagreb).unwrap().sample.is_none());
    }

    #[test]
    fn standardize_examples() {
        let z = standardize_zagreb(&[12.0, 10.0, 10.0, 12.0], 2, 2).unwrap();
        assert_eq!(z, vec![1.0, -1.0, -1.0, 1.0]);
        let mean = theory::zagreb_mean(5, 40).unwrap().to_f64();
        assert!(standardize_zagreb(&[mean; 3], 5, 40).unwrap().iter().all(|v| *v == 0.0));
        assert!(matches!(
            standardize_zagreb(&[6.0], 3, 0),
            Err(Error::ZeroVariance { .. })
        ));
        // Var[Z_1] = 2(4m - 8)/m² vanishes at m = 2
        assert!(standardize_zagreb(&[6.0], 2, 1).is_err());
    }

    #[test]
    fn sampler_names() {
        assert_eq!("direct".parse::<Sampler>().unwrap(), Sampler::Direct);
        assert_eq!(Sampler::Sequential.to_string(), "sequential");
        assert!("bogus".parse::<Sampler>().is_err());
    }

    #[test]
    fn theory_rows_follow_validity() {
        assert!(theory_mean(IndexKind::Randic(1.0), 2, 5).is_none());
        assert!(theory_mean(IndexKind::Randic(1.0), 3, 5).is_some());
        assert!(theory_mean(IndexKind::Randic(0.5), 3, 5).is_none());
        assert!(theory_mean(IndexKind::DegreeGini, 3, 5).is_none());
    }

    #[test]
    fn trajectory_checkpoints() {
        let t = trajectory_check(4, 100, RngSeed::new(1, 0), IndexKind::Zagreb, 2).unwrap();
        let ns: Vec<u64> = t.checkpoints.iter().map(|c| c.0).collect();
        assert_eq!(ns, vec![1, 2, 4, 8, 16, 32, 64, 100]);
        assert_eq!(t.successive_differences().len(), 7);
    }

    #[test]
    fn zagreb_path_settles_near_inverse_spine() {
        let m = 5;
        let t = trajectory_check(m, 1 << 16, RngSeed::new(2019, 0), IndexKind::Zagreb, 2).unwrap();
        let last = t.last().unwrap();
        assert!((last - 0.2).abs() < 0.04, "{last}");
    }

    #[test]
    fn randic_path_stabilizes() {
        // R_n/n² moves by O(n^{-1/2}) per doubling; the last-three window at
        // 2^16 should sit well below the same window at 2^10.
        let seed = RngSeed::new(2019, 0);
        let full = trajectory_check(5, 1 << 16, seed, IndexKind::Randic(1.0), 2).unwrap();
        let early = trajectory_check(5, 1 << 10, seed, IndexKind::Randic(1.0), 2).unwrap();
        assert_eq!(early.checkpoints[..], full.checkpoints[..early.checkpoints.len()]);
        assert!(full.stabilization < early.stabilization / 2.0, "{full:?}");
        let diffs = full.successive_differences();
        let k = diffs.len();
        assert_eq!(full.stabilization, diffs[k - 1].max(diffs[k - 2]));
    }

    #[test]
    fn wiener_path_is_bounded() {
        let m = 5u64;
        let bound = 10.0 * theory::wiener_limit(m).unwrap().to_f64();
        let t = trajectory_check(m as usize, 1 << 14, RngSeed::new(3, 0), IndexKind::Wiener, 2).unwrap();
        assert!(t.checkpoints.iter().all(|&(_, v)| v > 0.0));
        // the fixed spine term dominates early checkpoints
        assert!(t.checkpoints.iter().filter(|c| c.0 >= 64).all(|&(_, v)| v < bound));
    }
}
