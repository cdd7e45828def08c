//! The `b` function family, the implicit `x^(i)_N` candidates and the
//! max-min location `n_N` of the common induced subgraph size.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::threshold::epsilon_n;
use crate::error::{domain, Result};
use crate::graph::ProbPair;

/// `x ln(x / y)` with `0 ln 0 = 0`.
fn xlnxy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// Expected edge density of a common induced subgraph.
pub fn phat(pp: ProbPair) -> f64 {
    let (p1, p2) = (pp.p1(), pp.p2());
    p1 * p2 / (p1 * p2 + (1.0 - p1) * (1.0 - p2))
}

/// Evaluators for `b0`, `b1`, `b2` and `g` at a fixed `(p1, p2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BFamily {
    pub pp: ProbPair,
}

impl BFamily {
    pub fn new(pp: ProbPair) -> Self {
        BFamily { pp }
    }

    pub fn phat(&self) -> f64 {
        phat(self.pp)
    }

    pub fn ln_b0(&self, p: f64) -> f64 {
        let (p1, p2) = (self.pp.p1(), self.pp.p2());
        xlnxy(p, p1 * p2) + xlnxy(1.0 - p, (1.0 - p1) * (1.0 - p2))
    }

    /// `ln b_i(p)` for `i` in `{1, 2}`: the relative entropy of `p` from `p_i`.
    pub fn ln_bi(&self, i: usize, p: f64) -> f64 {
        let q = match i {
            1 => self.pp.p1(),
            2 => self.pp.p2(),
            _ => panic!("b index must be 1 or 2, got {i}"),
        };
        xlnxy(p, q) + xlnxy(1.0 - p, 1.0 - q)
    }

    pub fn b0(&self, p: f64) -> f64 {
        self.ln_b0(p).exp()
    }

    pub fn b1(&self, p: f64) -> f64 {
        self.ln_bi(1, p).exp()
    }

    pub fn b2(&self, p: f64) -> f64 {
        self.ln_bi(2, p).exp()
    }

    /// `g(p) = max(ln b0, 2 ln b1, 2 ln b2)`.
    pub fn g(&self, p: f64) -> f64 {
        self.ln_b0(p).max(2.0 * self.ln_bi(1, p)).max(2.0 * self.ln_bi(2, p))
    }
}

pub fn b_family(pp: ProbPair) -> BFamily {
    BFamily::new(pp)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimum of a unimodal `f` on `[lo, hi]`.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

impl BFamily {
    fn d_ln_b0(&self, p: f64) -> f64 {
        let (p1, p2) = (self.pp.p1(), self.pp.p2());
        (p / (p1 * p2)).ln() - ((1.0 - p) / ((1.0 - p1) * (1.0 - p2))).ln()
    }

    fn d_ln_bi(&self, i: usize, p: f64) -> f64 {
        let q = if i == 1 { self.pp.p1() } else { self.pp.p2() };
        (p / q).ln() - ((1.0 - p) / (1.0 - q)).ln()
    }

    /// Right derivative of `g`.
    fn dg_right(&self, p: f64) -> f64 {
        let pieces = [
            (self.ln_b0(p), self.d_ln_b0(p)),
            (2.0 * self.ln_bi(1, p), 2.0 * self.d_ln_bi(1, p)),
            (2.0 * self.ln_bi(2, p), 2.0 * self.d_ln_bi(2, p)),
        ];
        let top = pieces.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
        pieces
            .iter()
            .filter(|x| x.0 >= top - 1e-15 * top.abs().max(1.0))
            .map(|x| x.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Unique minimiser of the convex `g` on `[0, 1]`.
///
/// Golden section to `1e-10`, then bisection on the sign of the right
/// derivative.
pub fn g_minimizer_p0(pp: ProbPair) -> f64 {
    let fam = BFamily::new(pp);
    let guess = golden_min(|p| fam.g(p), 0.0, 1.0, 1e-10);
    let (mut lo, mut hi) = ((guess - 1e-6).max(f64::MIN_POSITIVE), (guess + 1e-6).min(1.0 - f64::EPSILON));
    if fam.dg_right(lo) >= 0.0 || fam.dg_right(hi) < 0.0 {
        return guess;
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if fam.dg_right(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `4 log_b N - 2 log_b log_b N - 2 log_b(4/e) + 1` with `b = b0(p)`.
pub fn x0_n(pp: ProbPair, p: f64, big_n: f64) -> f64 {
    let lb = BFamily::new(pp).ln_b0(p);
    let log_b = |x: f64| x.ln() / lb;
    4.0 * log_b(big_n) - 2.0 * log_b(log_b(big_n)) - 2.0 * log_b(4.0 / E) + 1.0
}

/// Solution `x` of `e N = x b^((x - 1) / 2)`; exactly `e N` when `b = 1`.
pub fn xi_n(b: f64, big_n: f64) -> f64 {
    if b == 1.0 {
        return E * big_n;
    }
    xi_n_ln(b.ln(), big_n)
}

/// [`xi_n`] with `ln b` given directly, which avoids rounding `b` near 1.
pub fn xi_n_ln(lb: f64, big_n: f64) -> f64 {
    if lb <= 0.0 {
        return E * big_n;
    }
    let target = 1.0 + big_n.ln();
    // log of x b^((x-1)/2) minus log of eN, increasing in x
    let phi = |x: f64| x.ln() + 0.5 * (x - 1.0) * lb - target;
    let mut lo = 1.0;
    let mut hi = 2.0;
    while phi(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = phi(mid);
        if v.abs() <= 1e-12 {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `2 log_b N - 2 log_b log_b N - 2 log_b(2/e) + 1`.
pub fn xi_asymptotic(b: f64, big_n: f64) -> f64 {
    let lb = b.ln();
    let log_b = |x: f64| x.ln() / lb;
    2.0 * log_b(big_n) - 2.0 * log_b(log_b(big_n)) - 2.0 * log_b(2.0 / E) + 1.0
}

/// The three candidates `(x0, x1, x2)` at `p`.
pub fn candidates(pp: ProbPair, p: f64, big_n: f64) -> [f64; 3] {
    let fam = BFamily::new(pp);
    [
        x0_n(pp, p, big_n),
        xi_n_ln(fam.ln_bi(1, p), big_n),
        xi_n_ln(fam.ln_bi(2, p), big_n),
    ]
}

fn envelope(pp: ProbPair, p: f64, big_n: f64) -> f64 {
    let [a, b, c] = candidates(pp, p, big_n);
    a.min(b).min(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    A,
    B1,
    B2,
}

impl Region {
    /// Tag after exchanging `p1` and `p2`.
    pub fn mirrored(self) -> Region {
        match self {
            Region::A => Region::A,
            Region::B1 => Region::B2,
            Region::B2 => Region::B1,
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::A => "A",
            Region::B1 => "B1",
            Region::B2 => "B2",
        })
    }
}

/// Region of `(p1, p2)` together with the minimiser `p0` of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionInfo {
    pub region: Region,
    pub p0: f64,
    /// Both B conditions held; the root with the smaller `g` was kept.
    pub ambiguous: bool,
}

/// Root of `2 ln b_i - ln b0` between `p_hat` (where it is `>= 0`) and
/// `p_i` (where it is `< 0`).
fn b_root(fam: &BFamily, i: usize) -> f64 {
    let h = |p: f64| 2.0 * fam.ln_bi(i, p) - fam.ln_b0(p);
    let pi = if i == 1 { fam.pp.p1() } else { fam.pp.p2() };
    let (mut pos, mut neg) = (fam.phat(), pi);
    for _ in 0..200 {
        let mid = 0.5 * (pos + neg);
        if mid == pos || mid == neg {
            break;
        }
        if h(mid) >= 0.0 {
            pos = mid;
        } else {
            neg = mid;
        }
    }
    0.5 * (pos + neg)
}

pub fn classify_region(pp: ProbPair) -> RegionInfo {
    let fam = BFamily::new(pp);
    let ph = fam.phat();
    let l0 = fam.ln_b0(ph);
    let b1 = 2.0 * fam.ln_bi(1, ph) >= l0;
    let b2 = 2.0 * fam.ln_bi(2, ph) >= l0;
    match (b1, b2) {
        (false, false) => RegionInfo {
            region: Region::A,
            p0: ph,
            ambiguous: false,
        },
        (true, false) => RegionInfo {
            region: Region::B1,
            p0: b_root(&fam, 1),
            ambiguous: false,
        },
        (false, true) => RegionInfo {
            region: Region::B2,
            p0: b_root(&fam, 2),
            ambiguous: false,
        },
        (true, true) => {
            let (r1, r2) = (b_root(&fam, 1), b_root(&fam, 2));
            let (region, p0) = if fam.g(r1) <= fam.g(r2) { (Region::B1, r1) } else { (Region::B2, r2) };
            RegionInfo { region, p0, ambiguous: true }
        }
    }
}

/// Maximiser of `min(x0, x1, x2)` over `[0, 1]`.
fn maximise_envelope(pp: ProbPair, big_n: f64) -> f64 {
    const TOL: f64 = 1e-8;
    const GRID: usize = 10_000;
    let f = |p: f64| -envelope(pp, p, big_n);
    let mut best = golden_min(f, 0.0, 1.0, TOL);
    let mut best_val = f(best);
    let mut grid_best = (0, f64::INFINITY);
    for k in 0..=GRID {
        let v = f(k as f64 / GRID as f64);
        if v < grid_best.1 {
            grid_best = (k, v);
        }
    }
    if grid_best.1 < best_val - TOL {
        let k = grid_best.0 as f64;
        let lo = ((k - 1.0) / GRID as f64).max(0.0);
        let hi = ((k + 1.0) / GRID as f64).min(1.0);
        let p = golden_min(f, lo, hi, TOL);
        let (v, vk) = (f(p), grid_best.1);
        (best, best_val) = if v <= vk { (p, v) } else { (k / GRID as f64, vk) };
    }
    debug_assert!(best_val.is_finite());
    best
}

/// `(floor(n_N - eps_N), floor(n_N + eps_N))`.
pub fn two_point_interval(pp: ProbPair, big_n: u64) -> Result<(i64, i64)> {
    let r = n_n(pp, big_n)?;
    Ok((r.interval_lo, r.interval_hi))
}

/// Smallest `N = 2^k` from which `x0(p_hat) < min(x1(p_hat), x2(p_hat))`
/// holds for every larger power of two up to `2^1000`. `None` outside region A.
pub fn x0_dominance_onset(pp: ProbPair) -> Option<f64> {
    if classify_region(pp).region != Region::A {
        return None;
    }
    let ph = phat(pp);
    let mut onset = None;
    for k in (4..=1000).rev() {
        let big_n = 2f64.powi(k);
        let [a, b, c] = candidates(pp, ph, big_n);
        if a < b.min(c) {
            onset = Some(big_n);
        } else {
            break;
        }
    }
    onset
}

/// Location of the largest common induced subgraph of two independent
/// random graphs on `N` vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McisLocationReport {
    pub p1: f64,
    pub p2: f64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub region: Region,
    pub ambiguous: bool,
    pub p_opt: f64,
    pub p0: f64,
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    #[serde(rename = "n_N")]
    pub n_n: f64,
    pub interval_lo: i64,
    pub interval_hi: i64,
    #[serde(rename = "eps_N")]
    pub eps_n: f64,
    /// See [`x0_dominance_onset`].
    pub x0_dominance_from: Option<f64>,
}

pub fn n_n(pp: ProbPair, big_n: u64) -> Result<McisLocationReport> {
    if big_n < 16 {
        return domain(format!("N = {big_n} too small, need N >= 16"));
    }
    let nf = big_n as f64;
    let info = classify_region(pp);
    let p_opt = maximise_envelope(pp, nf);
    let [x0, x1, x2] = candidates(pp, p_opt, nf);
    let value = x0.min(x1).min(x2);
    let eps = epsilon_n(nf);
    Ok(McisLocationReport {
        p1: pp.p1(),
        p2: pp.p2(),
        big_n,
        region: info.region,
        ambiguous: info.ambiguous,
        p_opt,
        p0: info.p0,
        x0,
        x1,
        x2,
        n_n: value,
        interval_lo: (value - eps).floor() as i64,
        interval_hi: (value + eps).floor() as i64,
        eps_n: eps,
        x0_dominance_from: x0_dominance_onset(pp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(a: f64, b: f64) -> ProbPair {
        ProbPair::new(a, b).unwrap()
    }

    #[test]
    fn phat_examples() {
        assert_eq!(phat(pp(0.5, 0.5)), 0.5);
        assert!((phat(pp(0.3, 0.7)) - 0.5).abs() < 1e-15);
        assert!((phat(pp(0.2, 0.2)) - 1.0 / 17.0).abs() < 1e-15);
    }

    #[test]
    fn b_family_examples() {
        let f = b_family(pp(0.5, 0.5));
        assert!((f.b0(0.5) - 2.0).abs() < 1e-15);
        assert!((f.b1(0.5) - 1.0).abs() < 1e-15);
        assert!((f.b2(0.5) - 1.0).abs() < 1e-15);
        assert!((f.g(0.5) - 2f64.ln()).abs() < 1e-15);
        assert!((f.b0(0.0) - 4.0).abs() < 1e-14);
        assert!((f.b0(1.0) - 4.0).abs() < 1e-14);
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            let fam = b_family(pp(p, p));
            let want = 1.0 / (p * p + (1.0 - p) * (1.0 - p));
            assert!((fam.b0(fam.phat()) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn b_family_bounds_and_convexity() {
        for (p1, p2) in [(0.1, 0.9), (0.5, 0.05), (0.33, 0.71), (0.8, 0.8)] {
            let fam = b_family(pp(p1, p2));
            assert_eq!(fam.b1(p1), 1.0);
            assert_eq!(fam.b2(p2), 1.0);
            let n = 400;
            for k in 0..=n {
                let p = k as f64 / n as f64;
                assert!(fam.b0(p) > 1.0);
                assert!(fam.b1(p) >= 1.0 && fam.b2(p) >= 1.0);
                if k > 0 && k < n {
                    let (a, b) = ((k - 1) as f64 / n as f64, (k + 1) as f64 / n as f64);
                    assert!(fam.g(p) <= 0.5 * (fam.g(a) + fam.g(b)) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn p0_examples() {
        assert!((g_minimizer_p0(pp(0.5, 0.5)) - 0.5).abs() < 1e-9);
        assert!((g_minimizer_p0(pp(0.3, 0.7)) - 0.5).abs() < 1e-9);
        for (p1, p2) in [(0.2, 0.6), (0.5, 0.05), (0.9, 0.4)] {
            let q = pp(p1, p2);
            let fam = b_family(q);
            let p0 = g_minimizer_p0(q);
            assert!(fam.g(p0) <= fam.g(p0 + 1e-6) + 1e-15);
            assert!(fam.g(p0) <= fam.g(p0 - 1e-6) + 1e-15);
            assert!((classify_region(q).p0 - p0).abs() < 1e-6, "{p1} {p2}");
        }
    }

    #[test]
    fn x0_examples() {
        assert!((x0_n(pp(0.5, 0.5), 0.5, 1000.0) - 33.11457).abs() < 1e-4);
        // x0 decreases as b0 grows: move p away from p_hat
        let q = pp(0.4, 0.6);
        let ph = phat(q);
        assert!(x0_n(q, ph, 1e6) > x0_n(q, ph + 0.1, 1e6));
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_n(1.0, 10.0), 10.0 * E);
        assert!((xi_n(2.0, 20.0 / E) - 5.0).abs() < 1e-9);
        let x = xi_n(2.0, 1000.0);
        assert!((x - 15.85).abs() < 0.01);
        assert!((x * 2f64.powf((x - 1.0) / 2.0) / (1000.0 * E) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn xi_asymptotic_examples() {
        let d6 = (xi_n(2.0, 1e6) - xi_asymptotic(2.0, 1e6)).abs();
        let d9 = (xi_n(2.0, 1e9) - xi_asymptotic(2.0, 1e9)).abs();
        assert!(d6 <= 0.5 && d9 < d6);
        let k: f64 = 7.0;
        let want = 2.0 * k - 2.0 * k.ln() - 2.0 * (2.0f64.ln() - 1.0) + 1.0;
        assert!((xi_asymptotic(E, k.exp()) - want).abs() < 1e-12);
    }

    #[test]
    fn regions() {
        assert_eq!(classify_region(pp(0.5, 0.5)).region, Region::A);
        assert_eq!(classify_region(pp(0.5, 0.05)).region, Region::B1);
        assert_eq!(classify_region(pp(0.05, 0.5)).region, Region::B2);
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            assert_eq!(classify_region(pp(p, p)).region, Region::A);
        }
    }

    #[test]
    fn location_equal_densities() {
        let r = n_n(pp(0.5, 0.5), 1000).unwrap();
        assert_eq!(r.region, Region::A);
        assert!((r.p_opt - 0.5).abs() < 1e-6);
        assert!((r.n_n - x0_n(pp(0.5, 0.5), 0.5, 1000.0)).abs() < 1e-6);
        assert!((r.eps_n - 0.540_713_374_560_06).abs() < 1e-12);
        assert!(r.interval_lo <= r.interval_hi);
        assert!(n_n(pp(0.5, 0.5), 15).is_err());
    }

    #[test]
    fn location_swap_symmetry() {
        let a = n_n(pp(0.5, 0.05), 10_000).unwrap();
        let b = n_n(pp(0.05, 0.5), 10_000).unwrap();
        assert_eq!(a.region, Region::B1);
        assert_eq!(b.region, Region::B2);
        assert!((a.n_n - b.n_n).abs() < 1e-6);
    }

    #[test]
    fn epsilon_at_sixteen() {
        let l = 16f64.ln();
        assert!((epsilon_n(16.0) - l.ln().powi(2) / l).abs() < 1e-15);
    }

    #[test]
    fn x0_dominates_for_large_n_in_region_a() {
        let q = pp(0.4, 0.45);
        let n0 = x0_dominance_onset(q).unwrap();
        let [a, b, c] = candidates(q, phat(q), n0 * 8.0);
        assert!(a < b.min(c));
        assert_eq!(x0_dominance_onset(pp(0.5, 0.05)), None);
    }
}
