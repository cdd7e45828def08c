//! CSV output. Comment lines starting with `#` carry the run configuration.

use std::io::{self, Write};

use super::{Bin, EstimateReport, HeatCell};

pub const CONTAINMENT_HEADER: &str = "x,y,n,N,trials,rate,ci_lo,ci_hi,timeouts";
pub const DISTRIBUTION_HEADER: &str = "value,count";

/// Formats `x` with 9 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (8 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

fn write_meta(w: &mut impl Write, meta: &[(String, String)]) -> io::Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

impl HeatCell {
    /// Wraps a single estimate as a one-cell table.
    pub fn single(x: f64, y: f64, n: usize, big_n: usize, r: EstimateReport) -> Self {
        HeatCell {
            x,
            y,
            n,
            big_n,
            trials: r.trials,
            timeouts: r.timeouts,
            estimate: Some(r),
        }
    }
}

/// Rows `x,y,n,N,trials,rate,ci_lo,ci_hi,timeouts`; rate fields are empty
/// for cells without a decided trial.
pub fn write_containment(w: &mut impl Write, meta: &[(String, String)], cells: &[HeatCell]) -> io::Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "{CONTAINMENT_HEADER}")?;
    for c in cells {
        let (rate, lo, hi) = match c.estimate {
            Some(e) => (fmt_num(e.rate), fmt_num(e.ci_lo), fmt_num(e.ci_hi)),
            None => (String::new(), String::new(), String::new()),
        };
        writeln!(w, "{},{},{},{},{},{rate},{lo},{hi},{}", fmt_num(c.x), fmt_num(c.y), c.n, c.big_n, c.trials, c.timeouts)?;
    }
    Ok(())
}

pub trait CsvValue {
    fn csv(&self) -> String;
}

impl CsvValue for u64 {
    fn csv(&self) -> String {
        self.to_string()
    }
}

impl CsvValue for f64 {
    fn csv(&self) -> String {
        fmt_num(*self)
    }
}

/// Rows `value,count`.
pub fn write_distribution<T: CsvValue>(w: &mut impl Write, meta: &[(String, String)], bins: &[Bin<T>]) -> io::Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "{DISTRIBUTION_HEADER}")?;
    for b in bins {
        writeln!(w, "{},{}", b.value.csv(), b.count)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Seed;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_num(0.95), "0.950000000");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_num(15.457637380991763), "15.4576374");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.5e-9), "1.50000000e-9");
        assert_eq!(fmt_num(123456789.0), "123456789");
    }

    #[test]
    fn containment_layout() {
        let r = EstimateReport::from_outcomes(&[Some(true), Some(false), None], Seed::new(1)).unwrap();
        let mut out = Vec::new();
        let meta = vec![("seed".to_string(), "1".to_string())];
        write_containment(&mut out, &meta, &[HeatCell::single(0.5, 0.5, 3, 9, r)]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# seed=1");
        assert_eq!(lines[1], CONTAINMENT_HEADER);
        assert!(lines[2].starts_with("0.500000000,0.500000000,3,9,3,0.500000000,"));
        assert!(lines[2].ends_with(",1"));
    }
}
