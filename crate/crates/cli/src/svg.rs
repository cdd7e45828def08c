use std::fmt::Write;

use rgiso_core::montecarlo::HeatCell;
use rgiso_core::theory::{threshold_n_star, Region, RegionInfo};
use rgiso_core::ProbPair;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;
const CONTOUR_COLUMNS: usize = 240;
const CONTOUR_SCAN: usize = 400;

fn open(title: &str) -> String {
    let full = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
    )
    .unwrap();
    writeln!(s, "<title>{title}</title>").unwrap();
    s
}

fn close(mut s: String) -> String {
    let (lo, hi) = (MARGIN, MARGIN + SIZE);
    writeln!(s, r#"<rect x="{lo}" y="{lo}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">p1</text>"#, lo + SIZE / 2.0, hi + 28.0).unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 14 {})">p2</text>"#,
        lo + SIZE / 2.0,
        lo + SIZE / 2.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

fn px(x: f64) -> f64 {
    MARGIN + x * SIZE
}

fn py(y: f64) -> f64 {
    MARGIN + (1.0 - y) * SIZE
}

/// Cell rectangle for grid index `(i, j)` with `i` along p1 and `j` along p2.
fn cell_rect(k: usize, i: usize, j: usize) -> (f64, f64, f64) {
    let w = SIZE / k as f64;
    (MARGIN + i as f64 * w, MARGIN + (k - 1 - j) as f64 * w, w)
}

fn gray(rate: Option<f64>) -> String {
    match rate {
        Some(r) => {
            let v = (255.0 * (1.0 - r.clamp(0.0, 1.0))).round() as u8;
            format!("rgb({v},{v},{v})")
        }
        None => "rgb(255,0,0)".to_string(),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

/// Roots in `y` of `n*(x, y) = n` for a fixed `x`, in increasing order.
pub fn contour_roots(x: f64, n: f64, big_n: u64) -> Vec<f64> {
    let h = |y: f64| threshold_n_star(ProbPair::new(x, y).expect("inside (0,1)"), big_n) - n;
    let ys: Vec<f64> = (1..CONTOUR_SCAN).map(|i| i as f64 / CONTOUR_SCAN as f64).collect();
    let mut roots = Vec::new();
    for w in ys.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (mut fa, fb) = (h(a), h(b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            let fm = h(m);
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

/// Grayscale containment heatmap with the dashed `n*(p1, p2) = n` curve.
pub fn heatmap(k: usize, n: usize, big_n: usize, cells: &[HeatCell]) -> String {
    let mut s = open(&format!("containment rate, n={n}, N={big_n}"));
    writeln!(s, r#"<g id="cells">"#).unwrap();
    for (idx, c) in cells.iter().enumerate() {
        let (i, j) = (idx % k, idx / k);
        let (x0, y0, w) = cell_rect(k, i, j);
        let rate = c.estimate.map(|e| e.rate);
        writeln!(
            s,
            r#"<rect class="cell" x="{}" y="{}" width="{}" height="{}" fill="{}" data-p1="{}" data-p2="{}" data-rate="{}"/>"#,
            fmt(x0),
            fmt(y0),
            fmt(w),
            fmt(w),
            gray(rate),
            c.x,
            c.y,
            rate.map_or(String::new(), |r| r.to_string())
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();

    // Lower and upper branches as separate polylines, broken where a column has no root.
    let mut branches: [Vec<Vec<(f64, f64)>>; 2] = [vec![Vec::new()], vec![Vec::new()]];
    for col in 1..CONTOUR_COLUMNS {
        let x = col as f64 / CONTOUR_COLUMNS as f64;
        let roots = contour_roots(x, n as f64, big_n as u64);
        let (lo, hi) = match roots.as_slice() {
            [a, b, ..] => (Some(*a), Some(*b)),
            [a] if *a < x => (Some(*a), None),
            [a] => (None, Some(*a)),
            [] => (None, None),
        };
        for (b, r) in [lo, hi].into_iter().enumerate() {
            match r {
                Some(y) => branches[b].last_mut().unwrap().push((x, y)),
                None if !branches[b].last().unwrap().is_empty() => branches[b].push(Vec::new()),
                None => {}
            }
        }
    }
    writeln!(s, r#"<g id="threshold" fill="none" stroke="rgb(200,30,30)" stroke-width="2" stroke-dasharray="6,4">"#).unwrap();
    for line in branches.iter().flatten().filter(|l| l.len() >= 2) {
        let pts: Vec<String> = line.iter().map(|&(x, y)| format!("{},{}", fmt(px(x)), fmt(py(y)))).collect();
        writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" ")).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    close(s)
}

fn region_color(r: Region) -> &'static str {
    match r {
        Region::A => "rgb(90,140,200)",
        Region::B1 => "rgb(230,160,60)",
        Region::B2 => "rgb(110,180,110)",
    }
}

/// Region tags over the grid; ambiguous cells are outlined.
pub fn region_map(k: usize, cells: &[(f64, f64, RegionInfo)]) -> String {
    let mut s = open("MCIS regions");
    writeln!(s, r#"<g id="cells">"#).unwrap();
    for (idx, (x, y, r)) in cells.iter().enumerate() {
        let (i, j) = (idx % k, idx / k);
        let (x0, y0, w) = cell_rect(k, i, j);
        let stroke = if r.ambiguous { r#" stroke="black" stroke-width="1.5""# } else { "" };
        writeln!(
            s,
            r#"<rect class="cell" x="{}" y="{}" width="{}" height="{}" fill="{}"{stroke} data-p1="{x}" data-p2="{y}" data-region="{}"/>"#,
            fmt(x0),
            fmt(y0),
            fmt(w),
            fmt(w),
            region_color(r.region),
            r.region
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    close(s)
}
