//! Exact membership tests for the pseudorandom graph classes and estimates of
//! how often random graphs belong to them.
//!
//! * `A_n`: every induced subgraph on at least `n - n^{2/3}` vertices is
//!   asymmetric.
//! * `E_{n,m}`: every vertex set `L` spans `C(|L|,2) m / C(n,2)` edges up to
//!   `n^{2/3} (n - |L|)`.
//! * `F_{n,p}`: the edge count is `C(n,2) p` up to `n^{4/3}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{choose2, gen_gnm, gen_gnp, induced_subgraph, Graph, Seed};
use crate::montecarlo::{run_trials, EstimateReport, Trials};
use crate::solver::is_asymmetric;

pub const CHECK_A_MAX_N: usize = 40;
pub const CHECK_E_MAX_N: usize = 24;

/// Outcome of a membership test; `witness` is a violating vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl PropertyVerdict {
    fn yes() -> Self {
        PropertyVerdict { holds: true, witness: None }
    }

    fn no(witness: Vec<usize>) -> Self {
        PropertyVerdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Smallest subset size constrained by `A_n`: `ceil(n - n^{2/3})`.
pub fn a_min_size(n: usize) -> usize {
    let t = n as f64 - (n as f64).powf(2.0 / 3.0);
    t.ceil().max(0.0) as usize
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// A set on which swapping two vertices is an automorphism, as large as
/// possible: drop everything that tells some pair `u, v` apart.
fn transposition_witness(g: &Graph, min_size: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut best: Option<(usize, usize, usize)> = None;
    for u in 0..n {
        for v in u + 1..n {
            let diff = (0..n).filter(|&w| w != u && w != v && g.has_edge(u, w) != g.has_edge(v, w)).count();
            if n - diff >= min_size && best.map_or(true, |b| diff < b.2) {
                best = Some((u, v, diff));
            }
        }
    }
    let (u, v, _) = best?;
    Some((0..n).filter(|&w| w == u || w == v || g.has_edge(u, w) == g.has_edge(v, w)).collect())
}

/// Membership in `A_n`, by enumerating subsets from the largest size down.
pub fn check_a(g: &Graph) -> Result<PropertyVerdict> {
    let n = g.n();
    if n > CHECK_A_MAX_N {
        return Err(Error::SizeLimit {
            what: "check_A",
            limit: CHECK_A_MAX_N,
            n,
        });
    }
    let t = a_min_size(n).max(1);
    if t > n {
        return Ok(PropertyVerdict::yes());
    }
    if !is_asymmetric(g) {
        return Ok(PropertyVerdict::no((0..n).collect()));
    }
    if let Some(w) = transposition_witness(g, t) {
        return Ok(PropertyVerdict::no(w));
    }
    for k in (t..n).rev() {
        let mut c: Vec<usize> = (0..k).collect();
        loop {
            if !is_asymmetric(&induced_subgraph(g, &c)?) {
                return Ok(PropertyVerdict::no(c));
            }
            if !next_combination(&mut c, n) {
                break;
            }
        }
    }
    Ok(PropertyVerdict::yes())
}

/// `|e(L) - C(|L|,2) m / C(n,2)|` and the allowance `n^{2/3} (n - |L|)`.
pub fn e_deviation(n: usize, m: usize, size: usize, edges: usize) -> (f64, f64) {
    let pairs = choose2(n);
    let expected = if pairs == 0 {
        0.0
    } else {
        choose2(size) as f64 * m as f64 / pairs as f64
    };
    ((edges as f64 - expected).abs(), (n as f64).powf(2.0 / 3.0) * (n - size) as f64)
}

/// Membership in `E_{n,m}` by a Gray-code walk over all vertex sets.
pub fn check_e(g: &Graph, m: usize) -> Result<PropertyVerdict> {
    let n = g.n();
    if n > CHECK_E_MAX_N {
        return Err(Error::SizeLimit {
            what: "check_E",
            limit: CHECK_E_MAX_N,
            n,
        });
    }
    if m != g.edge_count() {
        return domain(format!("m = {m} but the graph has {} edges", g.edge_count()));
    }
    let rows: Vec<u32> = (0..n).map(|u| g.row(u).first().copied().unwrap_or(0) as u32).collect();
    // per size: (min edges, mask), (max edges, mask)
    let mut lo = vec![(usize::MAX, 0u32); n + 1];
    let mut hi = vec![(0usize, 0u32); n + 1];
    let (mut mask, mut edges) = (0u32, 0usize);
    for i in 1u32..(1u32 << n) {
        let v = i.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let touched = (rows[v] & mask & !bit).count_ones() as usize;
        if mask & bit == 0 {
            mask |= bit;
            edges += touched;
        } else {
            mask &= !bit;
            edges -= touched;
        }
        let size = mask.count_ones() as usize;
        if edges < lo[size].0 {
            lo[size] = (edges, mask);
        }
        if edges >= hi[size].0 {
            hi[size] = (edges, mask);
        }
    }
    for size in 1..=n {
        for (e, mk) in [lo[size], hi[size]] {
            let (dev, allow) = e_deviation(n, m, size, e);
            if dev > allow {
                return Ok(PropertyVerdict::no((0..n).filter(|&v| mk >> v & 1 == 1).collect()));
            }
        }
    }
    Ok(PropertyVerdict::yes())
}

/// Membership in `F_{n,p}`: `|e(g) - C(n,2) p| <= n^{4/3}`.
pub fn check_f(g: &Graph, p: f64) -> Result<PropertyVerdict> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("p = {p} must lie in [0, 1]"));
    }
    let n = g.n();
    let dev = (g.edge_count() as f64 - choose2(n) as f64 * p).abs();
    Ok(if dev <= (n as f64).powf(4.0 / 3.0) {
        PropertyVerdict::yes()
    } else {
        PropertyVerdict::no((0..n).collect())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    A,
    E,
    F,
    AE,
    AF,
    /// The whole graph has no non-trivial automorphism.
    Asymmetric,
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().replace(['&', '+', '-', '_'], "").as_str() {
            "A" => Property::A,
            "E" => Property::E,
            "F" => Property::F,
            "AE" => Property::AE,
            "AF" => Property::AF,
            "ASYMMETRIC" => Property::Asymmetric,
            _ => return domain(format!("unknown property '{s}' (expected A, E, F, AE, AF or asymmetric)")),
        })
    }
}

/// Random graph model to sample from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GraphModel {
    Gnp { n: usize, p: f64 },
    Gnm { n: usize, m: usize },
}

impl GraphModel {
    pub fn n(&self) -> usize {
        match *self {
            GraphModel::Gnp { n, .. } | GraphModel::Gnm { n, .. } => n,
        }
    }

    pub fn sample(&self, seed: Seed) -> Result<Graph> {
        match *self {
            GraphModel::Gnp { n, p } => gen_gnp(n, p, seed),
            GraphModel::Gnm { n, m } => gen_gnm(n, m, seed),
        }
    }

    /// Edge density used by `F`.
    pub fn density(&self) -> f64 {
        match *self {
            GraphModel::Gnp { p, .. } => p,
            GraphModel::Gnm { n, m } if choose2(n) > 0 => m as f64 / choose2(n) as f64,
            GraphModel::Gnm { .. } => 0.0,
        }
    }
}

pub fn check_property(prop: Property, g: &Graph, p: f64) -> Result<PropertyVerdict> {
    let both = |a: PropertyVerdict, b: &dyn Fn() -> Result<PropertyVerdict>| if a.holds { b() } else { Ok(a) };
    match prop {
        Property::A => check_a(g),
        Property::E => check_e(g, g.edge_count()),
        Property::F => check_f(g, p),
        Property::AE => both(check_a(g)?, &|| check_e(g, g.edge_count())),
        Property::AF => both(check_a(g)?, &|| check_f(g, p)),
        Property::Asymmetric => Ok(if is_asymmetric(g) {
            PropertyVerdict::yes()
        } else {
            PropertyVerdict::no((0..g.n()).collect())
        }),
    }
}

/// Fraction of sampled graphs with the property.
pub fn estimate_property_rate(prop: Property, model: GraphModel, t: Trials) -> Result<EstimateReport> {
    let n = model.n();
    if matches!(prop, Property::A | Property::AE | Property::AF) && n > CHECK_A_MAX_N {
        return Err(Error::SizeLimit {
            what: "check_A",
            limit: CHECK_A_MAX_N,
            n,
        });
    }
    if matches!(prop, Property::E | Property::AE) && n > CHECK_E_MAX_N {
        return Err(Error::SizeLimit {
            what: "check_E",
            limit: CHECK_E_MAX_N,
            n,
        });
    }
    model.sample(t.seed)?;
    let p = model.density();
    let verdicts = run_trials(t.trials, t.seed, t.workers, |_, s| {
        let g = model.sample(s).expect("model validated above");
        check_property(prop, &g, p).map(|v| Some(v.holds))
    });
    let outcomes = verdicts.into_iter().collect::<Result<Vec<_>>>()?;
    EstimateReport::from_outcomes(&outcomes, t.seed)
}
