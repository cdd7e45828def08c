//! `rgiso`: threshold and concentration reports, simulations and figures for
//! induced subgraphs of random graphs.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rgiso_core::montecarlo::{self, csv, Empirical, HeatCell, Trials};
use rgiso_core::pseudorandom::{self, GraphModel, Property};
use rgiso_core::solver::SearchBudget;
use rgiso_core::theory::{self, ThresholdReport};
use rgiso_core::{gen_gnm, gen_gnp, Graph, ProbPair, Seed};

mod output;
mod svg;

use output::{Meta, Sink, UsageError};

#[derive(Parser, Debug)]
#[command(name = "rgiso", version, about = "Induced subgraphs of random graphs: theory, simulation, figures")]
struct Cli {
    /// Worker threads for simulations (0 = all cores).
    #[arg(long, global = true, env = "RGISO_WORKERS", default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Containment threshold quantities for G(n,p1) inside G(N,p2).
    Threshold(ThresholdArgs),
    /// Location of the maximum common induced subgraph size.
    McisLocation(PairArgs),
    /// Region tags (A, B1, B2) over a grid of the unit square.
    RegionMap(RegionMapArgs),
    /// Monte Carlo experiments.
    Simulate(SimulateArgs),
    /// Containment rates over a (p1, p2) grid, as CSV plus optional SVG.
    Heatmap(HeatmapArgs),
    /// Pseudorandomness verdicts for one graph.
    CheckPseudorandom(CheckArgs),
}

#[derive(Args, Debug, Clone)]
struct PairArgs {
    #[arg(long)]
    p1: f64,
    #[arg(long)]
    p2: f64,
    #[arg(long = "N")]
    big_n: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Number of f(c) samples over [-5 sigma, 5 sigma].
    #[arg(long, default_value_t = 21)]
    samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug)]
struct RegionMapArgs {
    #[arg(long, default_value_t = 21)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Containment,
    Copies,
    Mcis,
    FixedPattern,
    Pseudorandom,
}

#[derive(Args, Debug, Clone)]
struct SimulateArgs {
    #[arg(value_enum)]
    mode: Mode,
    /// Pattern size.
    #[arg(long)]
    n: Option<usize>,
    /// Target size.
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// Edge count (fixed-pattern, pseudorandom with G(n,m)).
    #[arg(long)]
    m: Option<usize>,
    /// Edge probability (pseudorandom with G(n,p)).
    #[arg(long)]
    p: Option<f64>,
    /// Property for pseudorandom: A, E, F, AE, AF or asymmetric.
    #[arg(long, default_value = "A")]
    property: String,
    /// Fixed pattern as an edge-list file (fixed-pattern mode).
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CPU-time budget per trial in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
    /// Widening of the two-point window (mcis mode).
    #[arg(long, default_value_t = montecarlo::DEFAULT_SLACK)]
    slack: i64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HeatmapArgs {
    #[arg(long = "N")]
    big_n: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 9)]
    grid: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    budget_ms: Option<u64>,
    /// CSV destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG rendering here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Edge-list file; otherwise a graph is sampled from --n with --p or --m.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn budget(ms: Option<u64>) -> SearchBudget {
    ms.map_or(SearchBudget::UNLIMITED, SearchBudget::millis)
}

fn need<T: Copy>(v: Option<T>, flag: &str, mode: &str) -> Result<T> {
    v.ok_or_else(|| UsageError(format!("{mode} needs --{flag}")).into())
}

fn cmd_threshold(a: &ThresholdArgs) -> Result<()> {
    let pp = ProbPair::new(a.pair.p1, a.pair.p2)?;
    let r = ThresholdReport::new(pp, a.pair.big_n)?;
    let samples: Vec<Value> = if r.sigma2 > 0.0 && a.samples >= 2 {
        let s = r.sigma2.sqrt();
        (0..a.samples)
            .map(|i| {
                let c = -5.0 * s + 10.0 * s * i as f64 / (a.samples - 1) as f64;
                json!({ "c": c, "f": r.f(c) })
            })
            .collect()
    } else {
        Vec::new()
    };
    let meta = Meta::new("threshold")
        .set("p1", a.pair.p1)
        .set("p2", a.pair.p2)
        .set("N", a.pair.big_n);
    let mut report = serde_json::to_value(r)?;
    report["f_samples"] = Value::Array(samples);
    Sink::open(a.pair.out.as_deref())?.json(&meta, report)
}

fn cmd_mcis_location(a: &PairArgs) -> Result<()> {
    let pp = ProbPair::new(a.p1, a.p2)?;
    let r = theory::n_n(pp, a.big_n)?;
    let meta = Meta::new("mcis-location").set("p1", a.p1).set("p2", a.p2).set("N", a.big_n);
    Sink::open(a.out.as_deref())?.json(&meta, serde_json::to_value(r)?)
}

fn cmd_region_map(a: &RegionMapArgs) -> Result<()> {
    if a.grid < 8 {
        return Err(rgiso_core::Error::Domain(format!("region map needs --grid >= 8, got {}", a.grid)).into());
    }
    let pts = montecarlo::grid_points(a.grid);
    let cells: Vec<(f64, f64, theory::RegionInfo)> = pts
        .iter()
        .flat_map(|&y| pts.iter().map(move |&x| (x, y)))
        .map(|(x, y)| (x, y, theory::classify_region(ProbPair::new(x, y).expect("grid inside (0,1)"))))
        .collect();
    let meta = Meta::new("region-map").set("grid", a.grid);
    let mut sink = Sink::open(a.out.as_deref())?;
    match a.format {
        Format::Csv => {
            let mut text = meta.csv_header();
            text.push_str("p1,p2,region,p0,ambiguous\n");
            for (x, y, r) in &cells {
                text.push_str(&format!("{},{},{},{},{}\n", csv::fmt_num(*x), csv::fmt_num(*y), r.region, csv::fmt_num(r.p0), r.ambiguous));
            }
            sink.text(&text)
        }
        Format::Svg => sink.text(&svg::region_map(a.grid, &cells)),
        Format::Json => {
            let rows: Vec<Value> = cells
                .iter()
                .map(|(x, y, r)| json!({ "p1": x, "p2": y, "region": r.region, "p0": r.p0, "ambiguous": r.ambiguous }))
                .collect();
            sink.json(&meta, Value::Array(rows))
        }
    }
}

fn sim_meta(a: &SimulateArgs) -> Meta {
    let mode = a.mode.to_possible_value().expect("no skipped variants").get_name().to_string();
    Meta::new("simulate")
        .set("mode", mode)
        .opt("n", a.n)
        .opt("N", a.big_n)
        .opt("p1", a.p1)
        .opt("p2", a.p2)
        .opt("m", a.m)
        .opt("p", a.p)
        .set("trials", a.trials)
        .set("seed", a.seed)
        .opt("budget_ms", a.budget_ms)
}

fn cmd_simulate(a: &SimulateArgs, workers: usize) -> Result<()> {
    let t = Trials::new(a.trials, Seed::new(a.seed))
        .budget(budget(a.budget_ms))
        .workers(workers);
    let mut meta = sim_meta(a);
    let mode = a.mode.to_possible_value().expect("no skipped variants").get_name().to_string();
    let format = a.format.unwrap_or(if a.mode == Mode::Pseudorandom { Format::Json } else { Format::Csv });
    if format == Format::Svg {
        return Err(UsageError("simulate writes csv or json".into()).into());
    }
    let mut sink = Sink::open(a.out.as_deref())?;
    match a.mode {
        Mode::Containment => {
            let (n, big_n) = (need(a.n, "n", &mode)?, need(a.big_n, "N", &mode)?);
            let (p1, p2) = (need(a.p1, "p1", &mode)?, need(a.p2, "p2", &mode)?);
            let r = montecarlo::estimate_containment(n, big_n, ProbPair::new(p1, p2)?, t)?;
            match format {
                Format::Json => sink.json(&meta, serde_json::to_value(r)?),
                _ => sink.containment(&meta, &[HeatCell::single(p1, p2, n, big_n, r)]),
            }
        }
        Mode::Copies => {
            let (n, big_n) = (need(a.n, "n", &mode)?, need(a.big_n, "N", &mode)?);
            let pp = ProbPair::new(need(a.p1, "p1", &mode)?, need(a.p2, "p2", &mode)?)?;
            let r = if pp.p2() == 0.5 {
                montecarlo::copy_count_distribution(n, big_n, pp, t)?
            } else {
                montecarlo::log_copy_statistic(n, big_n, pp, t)?
            };
            match format {
                Format::Json => sink.json(&meta, serde_json::to_value(&r)?),
                _ => {
                    meta = meta
                        .set("reference", serde_json::to_value(r.reference)?)
                        .set("distance", r.distance)
                        .set("timeouts", r.timeouts);
                    match &r.empirical {
                        Empirical::Counts(b) => sink.distribution(&meta, b),
                        Empirical::Reals(b) => sink.distribution(&meta, b),
                    }
                }
            }
        }
        Mode::Mcis => {
            let big_n = need(a.big_n, "N", &mode)?;
            let pp = ProbPair::new(need(a.p1, "p1", &mode)?, need(a.p2, "p2", &mode)?)?;
            let r = montecarlo::mcis_concentration(big_n, pp, t, a.slack)?;
            meta = meta.set("slack", a.slack);
            match format {
                Format::Json => sink.json(&meta, serde_json::to_value(&r)?),
                _ => {
                    meta = meta.set("timeouts", r.timeouts).set("hit_rate", r.hit_rate);
                    sink.distribution(&meta, &r.histogram)
                }
            }
        }
        Mode::FixedPattern => {
            let big_n = need(a.big_n, "N", &mode)?;
            let p2 = need(a.p2, "p2", &mode)?;
            let h = match &a.graph {
                Some(path) => read_graph(path)?,
                None => gen_gnm(need(a.n, "n", &mode)?, need(a.m, "m", &mode)?, Seed::new(a.seed).substream(u64::MAX))?,
            };
            let pairs = rgiso_core::graph::choose2(h.n());
            let density = if pairs == 0 { 0.5 } else { h.edge_count() as f64 / pairs as f64 };
            let prediction = match ProbPair::new(density, p2) {
                Ok(pp) if big_n >= 3 => Some(theory::predict_fixed_pattern_containment(h.n() as u64, h.edge_count() as u64, big_n as u64, pp)?),
                _ => None,
            };
            let r = montecarlo::fixed_pattern_containment(&h, big_n, p2, t)?;
            meta = meta.set("pattern_n", h.n()).set("pattern_m", h.edge_count()).set("prediction", serde_json::to_value(prediction)?);
            match format {
                Format::Json => sink.json(&meta, serde_json::to_value(r)?),
                _ => sink.containment(&meta, &[HeatCell::single(density, p2, h.n(), big_n, r)]),
            }
        }
        Mode::Pseudorandom => {
            let n = need(a.n, "n", &mode)?;
            let model = match (a.p, a.m) {
                (Some(p), None) => GraphModel::Gnp { n, p },
                (None, Some(m)) => GraphModel::Gnm { n, m },
                _ => return Err(UsageError("pseudorandom needs exactly one of --p or --m".into()).into()),
            };
            let prop: Property = a.property.parse()?;
            let r = pseudorandom::estimate_property_rate(prop, model, t)?;
            meta = meta.set("property", serde_json::to_value(prop)?);
            match format {
                Format::Json => sink.json(&meta, serde_json::to_value(r)?),
                _ => {
                    let x = model.density();
                    sink.containment(&meta, &[HeatCell::single(x, x, n, n, r)])
                }
            }
        }
    }
}

fn cmd_heatmap(a: &HeatmapArgs, workers: usize) -> Result<()> {
    let t = Trials::new(a.trials, Seed::new(a.seed))
        .budget(budget(a.budget_ms))
        .workers(workers);
    let cells = montecarlo::heatmap_containment(a.big_n, a.n, a.grid, t)?;
    let meta = Meta::new("heatmap")
        .set("N", a.big_n)
        .set("n", a.n)
        .set("grid", a.grid)
        .set("trials", a.trials)
        .set("seed", a.seed)
        .opt("budget_ms", a.budget_ms);
    Sink::open(a.out.as_deref())?.containment(&meta, &cells)?;
    if let Some(path) = &a.svg {
        let text = svg::heatmap(a.grid, a.n, a.big_n, &cells);
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn read_graph(path: &std::path::Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.parse()?)
}

fn cmd_check(a: &CheckArgs) -> Result<()> {
    let seed = Seed::new(a.seed);
    let g = match (&a.graph, a.n, a.p, a.m) {
        (Some(path), None, None, None) => read_graph(path)?,
        (None, Some(n), Some(p), None) => gen_gnp(n, p, seed)?,
        (None, Some(n), None, Some(m)) => gen_gnm(n, m, seed)?,
        _ => return Err(UsageError("give either --graph, or --n with exactly one of --p / --m".into()).into()),
    };
    let pairs = rgiso_core::graph::choose2(g.n());
    let p = a.p.unwrap_or(if pairs == 0 { 0.0 } else { g.edge_count() as f64 / pairs as f64 });
    let verdict = |r: rgiso_core::Result<pseudorandom::PropertyVerdict>| -> Result<Value> {
        Ok(match r {
            Ok(v) => serde_json::to_value(v)?,
            Err(e @ rgiso_core::Error::SizeLimit { .. }) => json!({ "skipped": e.to_string() }),
            Err(e) => return Err(e.into()),
        })
    };
    let report = json!({
        "n": g.n(),
        "m": g.edge_count(),
        "p": p,
        "asymmetric": rgiso_core::solver::is_asymmetric(&g),
        "A": verdict(pseudorandom::check_a(&g))?,
        "E": verdict(pseudorandom::check_e(&g, g.edge_count()))?,
        "F": verdict(pseudorandom::check_f(&g, p))?,
    });
    let meta = Meta::new("check-pseudorandom")
        .opt("graph", a.graph.as_ref().map(|p| p.display().to_string()))
        .opt("n", a.n)
        .opt("p", a.p)
        .opt("m", a.m)
        .set("seed", a.seed);
    Sink::open(a.out.as_deref())?.json(&meta, report)
}

fn run(cli: Cli) -> Result<()> {
    match &cli.cmd {
        Command::Threshold(a) => cmd_threshold(a),
        Command::McisLocation(a) => cmd_mcis_location(a),
        Command::RegionMap(a) => cmd_region_map(a),
        Command::Simulate(a) => cmd_simulate(a, cli.workers),
        Command::Heatmap(a) => cmd_heatmap(a, cli.workers),
        Command::CheckPseudorandom(a) => cmd_check(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(output::exit_code(&e))
        }
    }
}
