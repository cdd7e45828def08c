//! Seeded parallel trial harness and the statistics used to compare
//! simulated rates and distributions with their limits.
//!
//! Trial `i` of a batch with seed `s` always draws from `s.substream(i)`
//! and results are gathered in index order, so reports do not depend on the
//! number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::Seed;
use crate::solver::SearchBudget;

pub mod csv;
mod experiments;

pub use experiments::*;

/// `z` for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Batch parameters shared by every experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trials {
    pub trials: usize,
    pub seed: Seed,
    pub budget: SearchBudget,
    /// Worker threads; 0 uses the available parallelism.
    pub workers: usize,
}

impl Trials {
    pub fn new(trials: usize, seed: Seed) -> Self {
        Trials {
            trials,
            seed,
            budget: SearchBudget::UNLIMITED,
            workers: 0,
        }
    }

    pub fn budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Runs `f(i, seed.substream(i))` for `i < count` on `workers` threads and
/// returns the results in index order.
pub fn run_trials<T, F>(count: usize, seed: Seed, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, Seed) -> T + Sync + Send,
{
    let job = || {
        (0..count)
            .into_par_iter()
            .map(|i| f(i, seed.substream(i as u64)))
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Success rate over the decided trials of a batch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: usize,
    pub successes: usize,
    pub timeouts: usize,
    pub seed: Seed,
}

impl EstimateReport {
    /// `outcomes[i]` is `None` for a trial that ran out of budget.
    pub fn from_outcomes(outcomes: &[Option<bool>], seed: Seed) -> Result<Self> {
        let timeouts = outcomes.iter().filter(|o| o.is_none()).count();
        let decided = outcomes.len() - timeouts;
        if decided == 0 {
            return Err(Error::UndefinedRate { trials: outcomes.len() });
        }
        let successes = outcomes.iter().filter(|o| **o == Some(true)).count();
        let (ci_lo, ci_hi) = wilson(successes, decided, Z95);
        Ok(EstimateReport {
            rate: successes as f64 / decided as f64,
            ci_lo,
            ci_hi,
            trials: outcomes.len(),
            successes,
            timeouts,
            seed,
        })
    }

    pub fn decided(&self) -> usize {
        self.trials - self.timeouts
    }
}

/// One histogram bin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bin<T> {
    pub value: T,
    pub count: u64,
}

/// Sorted histogram of the given values.
pub fn histogram<T: PartialOrd + Copy>(values: &[T]) -> Vec<Bin<T>> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("histogram values must be ordered"));
    let mut out: Vec<Bin<T>> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some(b) if b.value == x => b.count += 1,
            _ => out.push(Bin { value: x, count: 1 }),
        }
    }
    out
}

fn mass<T>(bins: &[Bin<T>]) -> u64 {
    bins.iter().map(|b| b.count).sum()
}

pub fn poisson_pmf(k: u64, mu: f64) -> f64 {
    if mu == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mu.ln() - mu - libm::lgamma(k as f64 + 1.0)).exp()
}

/// Total variation distance between a count histogram and `Po(mu)`. The
/// Poisson mass above the largest observed value counts as unmatched.
pub fn tv_poisson(bins: &[Bin<u64>], mu: f64) -> f64 {
    let total = mass(bins) as f64;
    let Some(top) = bins.last().map(|b| b.value) else {
        return 1.0;
    };
    let mut it = bins.iter().peekable();
    let (mut diff, mut covered) = (0.0, 0.0);
    for k in 0..=top {
        let emp = match it.peek() {
            Some(b) if b.value == k => it.next().unwrap().count as f64 / total,
            _ => 0.0,
        };
        let q = poisson_pmf(k, mu);
        covered += q;
        diff += (emp - q).abs();
    }
    (0.5 * (diff + (1.0 - covered).max(0.0))).min(1.0)
}

/// Kolmogorov-Smirnov distance between a histogram of non-negative reals and
/// the squashed normal `TNor(mu, sigma2)`, including its atom at 0.
pub fn ks_tnor(bins: &[Bin<f64>], mu: f64, sigma2: f64) -> f64 {
    let total = mass(bins) as f64;
    let sigma = sigma2.sqrt();
    let cdf = |x: f64| crate::theory::tnor_cdf(x, mu, sigma2);
    let left = |x: f64| {
        if x > 0.0 {
            crate::theory::normal_cdf((x - mu) / sigma)
        } else {
            0.0
        }
    };
    let (mut d, mut below) = (0.0f64, 0u64);
    for b in bins {
        let before = below as f64 / total;
        below += b.count;
        let after = below as f64 / total;
        d = d.max((before - left(b.value)).abs()).max((after - cdf(b.value)).abs());
    }
    d.min(1.0)
}

/// Reference law of a [`DistributionReport`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Reference {
    Poisson { mu: f64 },
    Tnor { mu: f64, sigma2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    Tv,
    Ks,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Empirical {
    Counts(Vec<Bin<u64>>),
    Reals(Vec<Bin<f64>>),
}

/// Empirical distribution against a reference law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub empirical: Empirical,
    pub reference: Reference,
    pub distance_kind: DistanceKind,
    pub distance: f64,
    /// Mean of the raw counts behind the histogram.
    pub mean: f64,
    pub std_err: f64,
    pub trials: usize,
    pub timeouts: usize,
    pub seed: Seed,
}

impl DistributionReport {
    /// Recomputes the distance from the stored histogram.
    pub fn recompute_distance(&self) -> Result<f64> {
        match (&self.empirical, self.reference) {
            (Empirical::Counts(b), Reference::Poisson { mu }) => Ok(tv_poisson(b, mu)),
            (Empirical::Reals(b), Reference::Tnor { mu, sigma2 }) => Ok(ks_tnor(b, mu, sigma2)),
            _ => domain("histogram type does not match the reference law"),
        }
    }
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
