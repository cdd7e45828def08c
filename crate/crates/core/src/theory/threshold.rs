//! Containment threshold, limiting laws and first-moment quantities.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::{choose2, ProbPair};

/// Standard normal CDF, `Phi(x) = erfc(-x / sqrt 2) / 2`.
///
/// `erfc` is the FreeBSD msun rational approximation (via `libm`), accurate
/// to about one ulp, so the absolute error stays below 1e-16.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `ln a = -p1 ln p2 - (1 - p1) ln(1 - p2)`.
pub fn ln_base_a(pp: ProbPair) -> f64 {
    -pp.p1() * pp.p2().ln() - (1.0 - pp.p1()) * (1.0 - pp.p2()).ln()
}

/// `a = 1 / (p2^p1 (1 - p2)^(1 - p1))`.
pub fn base_a(pp: ProbPair) -> f64 {
    ln_base_a(pp).exp()
}

/// `n* = 2 log_a N + 1`.
pub fn threshold_n_star(pp: ProbPair, big_n: u64) -> f64 {
    2.0 * (big_n as f64).ln() / ln_base_a(pp) + 1.0
}

/// `sigma^2 = 2 p1 (1 - p1) log_a^2(1/p2 - 1)`; exactly zero at `p2 = 1/2`.
pub fn sigma2(pp: ProbPair) -> f64 {
    if pp.p2() == 0.5 {
        return 0.0;
    }
    let l = (1.0 / pp.p2() - 1.0).ln() / ln_base_a(pp);
    2.0 * pp.p1() * (1.0 - pp.p1()) * l * l
}

/// Edge-asymmetry slope `psi = log_a(p2 / (1 - p2))`.
pub fn psi(pp: ProbPair) -> f64 {
    (pp.p2() / (1.0 - pp.p2())).ln() / ln_base_a(pp)
}

/// Window width `(ln ln N)^2 / ln N`.
pub fn epsilon_n(big_n: f64) -> f64 {
    let l = big_n.ln();
    l.ln().powi(2) / l
}

/// Limiting containment probability `P(Normal(0, sigma^2) >= c)`.
pub fn limit_f(pp: ProbPair, c: f64) -> Result<f64> {
    let s2 = sigma2(pp);
    if s2 == 0.0 {
        return domain("p2 = 1/2 gives a degenerate limit (sigma^2 = 0); use the two-point threshold instead");
    }
    Ok(1.0 - normal_cdf(c / s2.sqrt()))
}

/// CDF of the squashed normal: zero below 0, `Phi((x - mu)/sigma)` from 0 on.
pub fn tnor_cdf(x: f64, mu: f64, sigma2: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        normal_cdf((x - mu) / sigma2.sqrt())
    }
}

/// `ln (N)_n`, the log falling factorial.
pub fn ln_falling_factorial(big_n: u64, n: u64) -> f64 {
    (0..n).map(|i| ((big_n - i) as f64).ln()).sum()
}

/// `(N)_n` as an exact integer.
pub fn falling_factorial(big_n: u64, n: u64) -> BigUint {
    (0..n).fold(BigUint::one(), |acc, i| acc * BigUint::from(big_n - i))
}

/// Largest `n` for which [`poisson_mean_mu`] uses exact rational arithmetic.
pub const EXACT_MU_MAX_N: u64 = 12;

/// Poisson mean `mu = (N)_n 2^{-C(n,2)}`.
pub fn poisson_mean_mu(big_n: u64, n: u64) -> f64 {
    assert!(n >= 1 && n <= big_n, "need 1 <= n <= N");
    let k = choose2(n as usize) as i32;
    if n <= EXACT_MU_MAX_N {
        // (N)_n / 2^k exactly, then a single rounding
        let num = falling_factorial(big_n, n);
        let bits = num.bits() as i32;
        if bits <= 1000 {
            return num.to_f64().unwrap() * 2f64.powi(-k);
        }
    }
    (ln_falling_factorial(big_n, n) - k as f64 * std::f64::consts::LN_2).exp()
}

/// `ln E X_H = ln( (N)_n p^m (1-p)^{C(n,2)-m} / |Aut H| )`.
pub fn expected_copies_log(big_n: u64, n: u64, m: u64, p: f64, aut: f64) -> f64 {
    let pairs = choose2(n as usize) as f64;
    ln_falling_factorial(big_n, n) + m as f64 * p.ln() + (pairs - m as f64) * (1.0 - p).ln() - aut.ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContainmentVerdict {
    ZeroWHP,
    OneWHP,
    Indeterminate,
}

/// Classifies `psi * delta_m - c_N` against `+-eps_N` for a fixed pattern
/// with `n` vertices and `m` edges.
pub fn fixed_pattern_statistic(n: u64, m: u64, big_n: u64, pp: ProbPair) -> f64 {
    let pairs = choose2(n as usize) as f64;
    let delta_m = (m as f64 - pairs * pp.p1()) / (n as f64 / 2.0);
    let c_n = n as f64 - threshold_n_star(pp, big_n);
    psi(pp) * delta_m - c_n
}

pub fn predict_fixed_pattern_containment(n: u64, m: u64, big_n: u64, pp: ProbPair) -> Result<ContainmentVerdict> {
    if m as usize > choose2(n as usize) {
        return domain(format!("m = {m} exceeds C({n},2)"));
    }
    if big_n < 3 {
        return domain("N must be at least 3");
    }
    let s = fixed_pattern_statistic(n, m, big_n, pp);
    let eps = epsilon_n(big_n as f64);
    Ok(if s >= eps {
        ContainmentVerdict::OneWHP
    } else if s <= -eps {
        ContainmentVerdict::ZeroWHP
    } else {
        ContainmentVerdict::Indeterminate
    })
}

/// Threshold quantities for one `(p1, p2, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub p1: f64,
    pub p2: f64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub a: f64,
    pub n_star: f64,
    pub sigma2: f64,
    pub psi: f64,
    #[serde(rename = "eps_N")]
    pub eps_n: f64,
}

impl ThresholdReport {
    pub fn new(pp: ProbPair, big_n: u64) -> Result<Self> {
        if big_n < 2 {
            return domain(format!("N = {big_n} too small, need N >= 2"));
        }
        Ok(ThresholdReport {
            p1: pp.p1(),
            p2: pp.p2(),
            big_n,
            a: base_a(pp),
            n_star: threshold_n_star(pp, big_n),
            sigma2: sigma2(pp),
            psi: psi(pp),
            eps_n: epsilon_n(big_n as f64),
        })
    }

    /// `f(c)`; `None` when `p2 = 1/2`.
    pub fn f(&self, c: f64) -> Option<f64> {
        (self.sigma2 > 0.0).then(|| 1.0 - normal_cdf(c / self.sigma2.sqrt()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(a: f64, b: f64) -> ProbPair {
        ProbPair::new(a, b).unwrap()
    }

    #[test]
    fn base_a_examples() {
        assert_eq!(base_a(pp(0.3, 0.5)), 2.0);
        assert!((base_a(pp(0.5, 0.3)) - 1.0 / 0.21f64.sqrt()).abs() < 1e-12);
        assert!((base_a(pp(0.5, 0.3)) - 2.182178902359924).abs() < 1e-12);
        assert!((base_a(pp(0.5, 0.7)) - base_a(pp(0.5, 0.3))).abs() < 1e-12);
    }

    #[test]
    fn n_star_examples() {
        assert!((threshold_n_star(pp(0.5, 0.5), 150) - (2.0 * 150f64.log2() + 1.0)).abs() < 1e-12);
        assert!((threshold_n_star(pp(0.5, 0.5), 150) - 15.457637380991763).abs() < 1e-9);
        assert!((threshold_n_star(pp(0.5, 0.5), 2) - 3.0).abs() < 1e-12);
        // 2 ln 150 / ln(1/sqrt 0.21) + 1
        assert!((threshold_n_star(pp(0.5, 0.3), 150) - 13.842443).abs() < 1e-5);
    }

    #[test]
    fn normal_cdf_reference_values() {
        // high-precision references
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
        assert!((normal_cdf(2.0) - 0.977_249_868_051_820_8).abs() < 1e-14);
        assert!((normal_cdf(-3.0) - 0.001_349_898_031_630_094_6).abs() < 1e-15);
    }

    #[test]
    fn limit_f_examples() {
        let q = pp(0.3, 0.2);
        assert!((limit_f(q, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(limit_f(q, 50.0).unwrap() < 1e-12);
        assert!(limit_f(q, -50.0).unwrap() > 1.0 - 1e-12);
        assert!(limit_f(q, 1.0).unwrap() > limit_f(q, 1.1).unwrap());
        assert!(limit_f(pp(0.3, 0.5), 0.0).is_err());
        // unit variance: f(1) = 1 - Phi(1)
        let s = sigma2(q).sqrt();
        assert!((limit_f(q, s).unwrap() - 0.158_655_253_931_457_05).abs() < 1e-12);
    }

    #[test]
    fn tnor_examples() {
        assert_eq!(tnor_cdf(-0.1, 3.0, 2.0), 0.0);
        assert!((tnor_cdf(0.0, 0.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((tnor_cdf(1.0, -1.0, 1.0) - 0.977_249_868_051_820_8).abs() < 1e-12);
    }

    #[test]
    fn sigma2_properties() {
        assert_eq!(sigma2(pp(0.37, 0.5)), 0.0);
        assert!(sigma2(pp(0.37, 0.4)) > 0.0);
        // a itself moves under p2 <-> 1-p2 unless p1 = 1/2
        assert!((sigma2(pp(0.37, 0.4)) - sigma2(pp(0.37, 0.6))).abs() > 1e-3);
        assert!((sigma2(pp(0.5, 0.4)) - sigma2(pp(0.5, 0.6))).abs() < 1e-14);
    }

    #[test]
    fn mu_examples() {
        assert_eq!(poisson_mean_mu(5, 1), 5.0);
        assert_eq!(poisson_mean_mu(3, 3), 0.75);
        // (30)_10 = 109027350432000, 2^45 = 35184372088832
        assert_eq!(falling_factorial(30, 10), BigUint::from(109_027_350_432_000u64));
        let exact = 109_027_350_432_000f64 / 35_184_372_088_832f64;
        assert_eq!(poisson_mean_mu(30, 10), exact);
        assert!((exact - 3.098_743_673_945_137).abs() < 1e-12);
        // log-space branch agrees
        let ln = ln_falling_factorial(30, 10) - 45.0 * std::f64::consts::LN_2;
        assert!((ln.exp() - exact).abs() < 1e-12);
    }

    #[test]
    fn expected_copies_examples() {
        assert!((expected_copies_log(5, 2, 1, 0.5, 2.0) - 5f64.ln()).abs() < 1e-12);
        let e = expected_copies_log(30, 10, 45, 0.5, 1.0);
        assert!((e - poisson_mean_mu(30, 10).ln()).abs() < 1e-12);
        let d = expected_copies_log(40, 7, 9, 0.3, 1.0) - expected_copies_log(40, 7, 9, 0.3, 6.0);
        assert!((d - 6f64.ln()).abs() < 1e-12);
        assert!(expected_copies_log(1_000_000, 60, 900, 0.5, 1.0).is_finite());
    }

    #[test]
    fn predictions() {
        // p2 = 1/2: psi = 0, verdict decided by -c_N alone
        let half = pp(0.5, 0.5);
        assert_eq!(psi(half), 0.0);
        let n_far = (threshold_n_star(half, 150) + 10.0).round() as u64;
        let m = (choose2(n_far as usize) as f64 * 0.5).round() as u64;
        assert_eq!(predict_fixed_pattern_containment(n_far, m, 150, half).unwrap(), ContainmentVerdict::ZeroWHP);
        assert_eq!(predict_fixed_pattern_containment(10, 23, 150, half).unwrap(), ContainmentVerdict::OneWHP);

        let q = pp(0.5, 0.3);
        let s = fixed_pattern_statistic(14, 46, 150, q);
        assert!((s - (-0.2351)).abs() < 5e-3, "{s}");
        assert!((epsilon_n(150.0) - 0.518_317).abs() < 1e-5);
        assert_eq!(predict_fixed_pattern_containment(14, 46, 150, q).unwrap(), ContainmentVerdict::Indeterminate);
        assert!(predict_fixed_pattern_containment(4, 7, 150, q).is_err());
    }

    #[test]
    fn report_rejects_small_n() {
        assert!(ThresholdReport::new(pp(0.5, 0.5), 1).is_err());
        let r = ThresholdReport::new(pp(0.5, 0.5), 150).unwrap();
        assert_eq!(r.sigma2, 0.0);
        assert!(r.f(0.0).is_none());
    }
}
