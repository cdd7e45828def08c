use serde::{Deserialize, Serialize};

use super::{histogram, mean_and_se, run_trials, tv_poisson, ks_tnor, Bin, DistanceKind, DistributionReport, Empirical, EstimateReport, Reference, Trials};
use crate::error::{domain, Error, Result};
use crate::graph::{gen_gnp, Graph, ProbPair, Seed};
use crate::solver::{contains_induced, count_induced_subsets, mcis_size, McisOutcome, Outcome3};
use crate::theory::{n_n, poisson_mean_mu, sigma2, threshold_n_star};

fn check_sizes(n: usize, big_n: usize) -> Result<()> {
    if n > big_n {
        return domain(format!("pattern size n = {n} exceeds target size N = {big_n}"));
    }
    Ok(())
}

fn decision(o: Outcome3) -> Option<bool> {
    match o {
        Outcome3::Yes => Some(true),
        Outcome3::No => Some(false),
        Outcome3::Timeout { .. } => None,
    }
}

/// `P(G(n, p1) is an induced subgraph of G(N, p2))`.
pub fn estimate_containment(n: usize, big_n: usize, pp: ProbPair, t: Trials) -> Result<EstimateReport> {
    check_sizes(n, big_n)?;
    let outcomes = run_trials(t.trials, t.seed, t.workers, |_, s| containment_trial(n, big_n, pp, t, s));
    EstimateReport::from_outcomes(&outcomes, t.seed)
}

fn containment_trial(n: usize, big_n: usize, pp: ProbPair, t: Trials, s: Seed) -> Option<bool> {
    let h = gen_gnp(n, pp.p1(), s.substream(0)).expect("validated probability");
    let g = gen_gnp(big_n, pp.p2(), s.substream(1)).expect("validated probability");
    decision(contains_induced(&h, &g, t.budget))
}

/// Grid coordinates `1/(k+1), .., k/(k+1)`.
pub fn grid_points(k: usize) -> Vec<f64> {
    (1..=k).map(|i| i as f64 / (k + 1) as f64).collect()
}

/// One heatmap cell: pattern density `x`, target density `y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatCell {
    pub x: f64,
    pub y: f64,
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub trials: usize,
    pub timeouts: usize,
    /// `None` when every trial of the cell timed out.
    pub estimate: Option<EstimateReport>,
}

/// Containment rates over a `grid_k x grid_k` grid of `(p1, p2)`, rows by
/// `p2` then columns by `p1`. Cell `c` uses seed `seed.substream(c)`.
pub fn heatmap_containment(big_n: usize, n: usize, grid_k: usize, t: Trials) -> Result<Vec<HeatCell>> {
    check_sizes(n, big_n)?;
    if grid_k < 2 {
        return domain(format!("grid must have at least 2 points per axis, got {grid_k}"));
    }
    let pts = grid_points(grid_k);
    let cells: Vec<(f64, f64)> = pts.iter().flat_map(|&y| pts.iter().map(move |&x| (x, y))).collect();
    let per = t.trials;
    let flat = run_trials(cells.len() * per, t.seed, t.workers, |i, _| {
        let (c, j) = (i / per, i % per);
        let (x, y) = cells[c];
        let pp = ProbPair::new(x, y).expect("grid points lie inside (0, 1)");
        containment_trial(n, big_n, pp, t, t.seed.substream(c as u64).substream(j as u64))
    });
    Ok(cells
        .iter()
        .enumerate()
        .map(|(c, &(x, y))| {
            let outcomes = &flat[c * per..(c + 1) * per];
            HeatCell {
                x,
                y,
                n,
                big_n,
                trials: per,
                timeouts: outcomes.iter().filter(|o| o.is_none()).count(),
                estimate: EstimateReport::from_outcomes(outcomes, t.seed.substream(c as u64)).ok(),
            }
        })
        .collect())
}

fn copy_counts(n: usize, big_n: usize, pp: ProbPair, t: Trials) -> (Vec<u64>, usize) {
    let raw = run_trials(t.trials, t.seed, t.workers, |_, s| {
        let h = gen_gnp(n, pp.p1(), s.substream(0)).expect("validated probability");
        let g = gen_gnp(big_n, pp.p2(), s.substream(1)).expect("validated probability");
        count_induced_subsets(&h, &g, t.budget).value()
    });
    let timeouts = raw.iter().filter(|x| x.is_none()).count();
    (raw.into_iter().flatten().collect(), timeouts)
}

/// Number of induced copies of `G(n, p1)` in `G(N, 1/2)` against `Po(mu)`.
pub fn copy_count_distribution(n: usize, big_n: usize, pp: ProbPair, t: Trials) -> Result<DistributionReport> {
    check_sizes(n, big_n)?;
    if n == 0 {
        return domain("pattern must have at least one vertex");
    }
    if pp.p2() != 0.5 {
        return domain("the Poisson comparison needs p2 = 1/2; use the log statistic otherwise");
    }
    let (xs, timeouts) = copy_counts(n, big_n, pp, t);
    if xs.is_empty() {
        return Err(Error::UndefinedRate { trials: t.trials });
    }
    let mu = poisson_mean_mu(big_n as u64, n as u64);
    let bins = histogram(&xs);
    let (mean, std_err) = mean_and_se(&xs.iter().map(|&x| x as f64).collect::<Vec<_>>());
    Ok(DistributionReport {
        distance: tv_poisson(&bins, mu),
        empirical: Empirical::Counts(bins),
        reference: Reference::Poisson { mu },
        distance_kind: DistanceKind::Tv,
        mean,
        std_err,
        trials: t.trials,
        timeouts,
        seed: t.seed,
    })
}

/// `ln(1 + X) / ln N` against `TNor(-c, sigma^2)` with `c = n - (2 log_a N + 1)`.
pub fn log_copy_statistic(n: usize, big_n: usize, pp: ProbPair, t: Trials) -> Result<DistributionReport> {
    check_sizes(n, big_n)?;
    if n == 0 || big_n < 2 {
        return domain("need n >= 1 and N >= 2");
    }
    if pp.p2() == 0.5 {
        return domain("p2 = 1/2 has a Poisson limit; use the copy-count distribution");
    }
    let (xs, timeouts) = copy_counts(n, big_n, pp, t);
    if xs.is_empty() {
        return Err(Error::UndefinedRate { trials: t.trials });
    }
    let ln_n = (big_n as f64).ln();
    let ys: Vec<f64> = xs.iter().map(|&x| (x as f64).ln_1p() / ln_n).collect();
    let c = n as f64 - threshold_n_star(pp, big_n as u64);
    let s2 = sigma2(pp);
    let bins = histogram(&ys);
    let (mean, std_err) = mean_and_se(&ys);
    Ok(DistributionReport {
        distance: ks_tnor(&bins, -c, s2),
        empirical: Empirical::Reals(bins),
        reference: Reference::Tnor { mu: -c, sigma2: s2 },
        distance_kind: DistanceKind::Ks,
        mean,
        std_err,
        trials: t.trials,
        timeouts,
        seed: t.seed,
    })
}

/// Sizes of maximum common induced subgraphs of `G(N, p1)` and `G(N, p2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McisReport {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub histogram: Vec<Bin<u64>>,
    /// Best sizes found by trials that ran out of budget (lower bounds).
    pub timeout_incumbents: Vec<u64>,
    /// Predicted two-point window, when `N >= 16`.
    pub interval: Option<(i64, i64)>,
    pub slack: i64,
    pub hits: usize,
    /// Fraction of exact trials inside the window widened by `slack`.
    pub hit_rate: Option<f64>,
    /// `max - min + 1` over the exact sizes.
    pub support_width: Option<u64>,
    #[serde(rename = "n_N")]
    pub n_n: Option<f64>,
    pub trials: usize,
    pub timeouts: usize,
    pub seed: Seed,
}

pub const DEFAULT_SLACK: i64 = 1;

pub fn mcis_concentration(big_n: usize, pp: ProbPair, t: Trials, slack: i64) -> Result<McisReport> {
    if slack < 0 {
        return domain("slack must be non-negative");
    }
    let raw = run_trials(t.trials, t.seed, t.workers, |_, s| {
        let g1 = gen_gnp(big_n, pp.p1(), s.substream(0)).expect("validated probability");
        let g2 = gen_gnp(big_n, pp.p2(), s.substream(1)).expect("validated probability");
        mcis_size(&g1, &g2, t.budget)
    });
    let exact: Vec<u64> = raw.iter().filter_map(|o| o.exact()).map(|x| x as u64).collect();
    let timeout_incumbents: Vec<u64> = raw
        .iter()
        .filter_map(|o| match o {
            McisOutcome::Timeout { incumbent, .. } => Some(*incumbent as u64),
            McisOutcome::Exact { .. } => None,
        })
        .collect();
    if exact.is_empty() && t.trials > 0 {
        return Err(Error::UndefinedRate { trials: t.trials });
    }
    let loc = if big_n >= 16 { Some(n_n(pp, big_n as u64)?) } else { None };
    let interval = loc.as_ref().map(|r| (r.interval_lo, r.interval_hi));
    let hits = match interval {
        Some((lo, hi)) => exact
            .iter()
            .filter(|&&x| (lo - slack..=hi + slack).contains(&(x as i64)))
            .count(),
        None => 0,
    };
    let support_width = exact.iter().max().zip(exact.iter().min()).map(|(a, b)| a - b + 1);
    Ok(McisReport {
        big_n,
        histogram: histogram(&exact),
        timeout_incumbents,
        interval,
        slack,
        hits,
        hit_rate: interval.map(|_| hits as f64 / exact.len() as f64),
        support_width,
        n_n: loc.map(|r| r.n_n),
        trials: t.trials,
        timeouts: t.trials - exact.len(),
        seed: t.seed,
    })
}

/// `P(H is an induced subgraph of G(N, p2))` for one fixed `H`.
pub fn fixed_pattern_containment(h: &Graph, big_n: usize, p2: f64, t: Trials) -> Result<EstimateReport> {
    check_sizes(h.n(), big_n)?;
    ProbPair::new(0.5, p2)?;
    let outcomes = run_trials(t.trials, t.seed, t.workers, |_, s| {
        let g = gen_gnp(big_n, p2, s.substream(1)).expect("validated probability");
        decision(contains_induced(h, &g, t.budget))
    });
    EstimateReport::from_outcomes(&outcomes, t.seed)
}
