//! Command-line front end: `fit`, `influence`, `simulate` and `bench`.

pub mod input;
pub mod plot;
pub mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bench::{run_scaling, ScalingConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimator::epb_fit;
use crate::inference::{analytic_ci, bootstrap_ci, VarianceMode};
use crate::influence::influence_scores;
use crate::select::SelectionParams;
use crate::sim::simulate;

pub use input::{load_columns, ColumnRef, Columns, HeaderMode};
pub use report::{FitReport, FitRow, InfluenceReport, InfluenceRow, IntervalOut};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    AnalyticNull,
    AnalyticDaniels,
    Bootstrap,
    /// Bootstrap and the Daniels analytic interval.
    Both,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::AnalyticNull => "analytic-null",
            Method::AnalyticDaniels => "analytic-daniels",
            Method::Bootstrap => "bootstrap",
            Method::Both => "both",
        }
    }

    fn bootstrap(self) -> bool {
        matches!(self, Method::Bootstrap | Method::Both)
    }

    fn analytic(self) -> Option<VarianceMode> {
        match self {
            Method::AnalyticNull => Some(VarianceMode::Null),
            Method::AnalyticDaniels | Method::Both => Some(VarianceMode::Daniels),
            Method::Bootstrap => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub x: ColumnRef,
    pub y: ColumnRef,
    pub group: Option<ColumnRef>,
    pub header: HeaderMode,
    pub level: f64,
    pub method: Method,
    pub bootstrap_replicates: usize,
    pub seed: u64,
    pub format: Format,
    pub plot_dir: Option<PathBuf>,
    /// Record wall-clock time per group; off makes output reproducible byte for byte.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, x: ColumnRef, y: ColumnRef) -> Self {
        RunConfig {
            input: input.into(),
            x,
            y,
            group: None,
            header: HeaderMode::Auto,
            level: 0.95,
            method: Method::Both,
            bootstrap_replicates: 1000,
            seed: 1,
            format: Format::Json,
            plot_dir: None,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidArgument(format!("level must be in (0, 1), got {}", self.level)));
        }
        if self.method.bootstrap() && self.bootstrap_replicates < 2 {
            return Err(Error::InvalidArgument("bootstrap needs B >= 2".into()));
        }
        Ok(())
    }

    fn load(&self) -> Result<Columns> {
        load_columns(&self.input, &self.x, &self.y, self.group.as_ref(), self.header)
    }
}

fn fit_group(cfg: &RunConfig, name: String, xs: Vec<f64>, ys: Vec<f64>) -> FitRow {
    let n = xs.len();
    let mut row = FitRow {
        group: name.clone(),
        n,
        slope: None,
        intercept: None,
        kendall_tau: None,
        ci_bootstrap: None,
        ci_analytic: None,
        time_s: None,
        warnings: Vec::new(),
        error: None,
    };
    if n < 2 {
        row.error = Some(Error::GroupTooSmall { group: name, n }.to_string());
        return row;
    }
    let start = Instant::now();
    let params = SelectionParams::with_seed(cfg.seed);
    let result = (|| -> Result<()> {
        let d = Dataset::new(xs, ys)?;
        let fit = epb_fit(&d, &params)?;
        row.slope = Some(fit.slope);
        row.intercept = Some(fit.intercept);
        row.kendall_tau = Some(fit.kendall_tau);
        row.warnings = fit.warnings;
        if cfg.method.bootstrap() {
            let ci = bootstrap_ci(&d, cfg.bootstrap_replicates, cfg.level, cfg.seed)?;
            row.ci_bootstrap = Some(IntervalOut {
                lo: ci.lo,
                hi: ci.hi,
                variance: None,
                sigma_tau: None,
                redraws: ci.bootstrap.map(|b| b.redraws),
            });
        }
        if let Some(mode) = cfg.method.analytic() {
            let ci = analytic_ci(&d, fit.slope, cfg.level, mode, &params)?;
            for w in ci.warnings {
                if !row.warnings.contains(&w) {
                    row.warnings.push(w);
                }
            }
            row.ci_analytic = Some(IntervalOut {
                lo: ci.lo,
                hi: ci.hi,
                variance: Some(match mode {
                    VarianceMode::Null => "null",
                    VarianceMode::Daniels => "daniels",
                }),
                sigma_tau: ci.analytic.map(|a| a.sigma_tau),
                redraws: None,
            });
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    if cfg.timing {
        row.time_s = Some(start.elapsed().as_secs_f64());
    }
    row
}

/// Fits the whole dataset (`ALL`) and each group, groups in lexicographic order.
pub fn cmd_fit(cfg: &RunConfig) -> Result<FitReport> {
    cfg.validate()?;
    let cols = cfg.load()?;
    let mut jobs = vec![("ALL".to_string(), cols.xs.clone(), cols.ys.clone())];
    if let Some(groups) = &cols.groups {
        let mut by_group: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        for (i, g) in groups.iter().enumerate() {
            let e = by_group.entry(g.as_str()).or_default();
            e.0.push(cols.xs[i]);
            e.1.push(cols.ys[i]);
        }
        jobs.extend(by_group.into_iter().map(|(g, (x, y))| (g.to_string(), x, y)));
    }
    let rows = jobs
        .into_par_iter()
        .map(|(name, xs, ys)| fit_group(cfg, name, xs, ys))
        .collect();
    Ok(FitReport {
        settings: report::FitSettings {
            method: cfg.method.name(),
            level: cfg.level,
            bootstrap_replicates: cfg.method.bootstrap().then_some(cfg.bootstrap_replicates),
            seed: cfg.seed,
            quantile_rule: "linear interpolation between order statistics",
            intercept_rule: "lower median of y - slope * x",
        },
        groups: rows,
    })
}

/// Influence scores of every observation at the whole-data slope; writes
/// `influence_index.svg` and `influence_scatter.svg` when a plot directory is set.
pub fn cmd_influence(cfg: &RunConfig) -> Result<InfluenceReport> {
    let cols = cfg.load()?;
    let d = Dataset::new(cols.xs.clone(), cols.ys.clone())?;
    let fit = epb_fit(&d, &SelectionParams::with_seed(cfg.seed))?;
    let scores = influence_scores(&d, fit.slope)?;
    let observations = (0..d.len())
        .map(|i| InfluenceRow {
            index: i + 1,
            group: cols.groups.as_ref().map(|g| g[i].clone()),
            x: cols.xs[i],
            y: cols.ys[i],
            tau: scores.tau[i],
            tau_scaled: scores.tau_scaled[i],
        })
        .collect();
    let report = InfluenceReport {
        slope: fit.slope,
        intercept: fit.intercept,
        trend_window: plot::trend_window(d.len()),
        observations,
    };
    if let Some(dir) = &cfg.plot_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("influence_index.svg"), plot::influence_index_svg(&scores.tau_scaled))?;
        std::fs::write(
            dir.join("influence_scatter.svg"),
            plot::influence_scatter_svg(d.xs(), d.ys(), &scores.tau_scaled, fit.slope, fit.intercept),
        )?;
    }
    Ok(report)
}

/// CSV with columns `x,y` drawn from `Y = X + e`.
pub fn cmd_simulate(n: usize, seed: u64) -> Result<String> {
    let d = simulate(n, seed)?;
    let mut out = String::from("x,y\n");
    for p in d.iter() {
        out.push_str(&format!("{:?},{:?}\n", p.x, p.y));
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(name = "epb", version, about = "Equivariant Passing-Bablok regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Slope, intercept and confidence intervals, overall and per group.
    Fit(FitArgs),
    /// Per-observation influence scores and diagnostic plots.
    Influence(InfluenceArgs),
    /// Simulated data from Y = X + e, X ~ N(0, 1), e ~ N(0, 0.01).
    Simulate(SimulateArgs),
    /// Timing of the fast estimator (and optionally the naive one).
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Column name or 1-based position.
    #[arg(long, default_value = "1")]
    pub x: String,
    #[arg(long, default_value = "2")]
    pub y: String,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, value_enum, default_value_t = HeaderMode::Auto)]
    pub header: HeaderMode,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Bootstrap replicates.
    #[arg(long = "B", default_value_t = 1000)]
    pub b: usize,
    /// Leave out wall-clock times so repeated runs are byte-identical.
    #[arg(long)]
    pub no_time: bool,
}

#[derive(Debug, Args)]
pub struct InfluenceArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also time the naive estimator up to this size (at most 10000).
    #[arg(long, default_value_t = 0)]
    pub naive_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn config(data: DataArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(data.input, data.x.parse()?, data.y.parse()?);
    cfg.group = data.group.map(|g| g.parse()).transpose()?;
    cfg.header = data.header;
    cfg.seed = data.seed;
    cfg.format = data.format;
    Ok(cfg)
}

/// What a command printed and the status it should exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub status: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_degenerate() {
        EXIT_DEGENERATE
    } else {
        EXIT_INPUT
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let stdout = match cli.command {
        Command::Fit(a) => {
            let mut cfg = config(a.data)?;
            cfg.level = a.level;
            cfg.method = a.method;
            cfg.bootstrap_replicates = a.b;
            cfg.timing = !a.no_time;
            let report = cmd_fit(&cfg)?;
            let status = if report.groups[0].slope.is_none() { EXIT_DEGENERATE } else { 0 };
            let stdout = match cfg.format {
                Format::Json => report.to_json(),
                Format::Tsv => report.to_tsv(),
            };
            return Ok(Outcome { stdout, status });
        }
        Command::Influence(a) => {
            let mut cfg = config(a.data)?;
            cfg.plot_dir = a.plot_dir;
            let report = cmd_influence(&cfg)?;
            match cfg.format {
                Format::Json => report.to_json(),
                Format::Tsv => report.to_tsv(),
            }
        }
        Command::Simulate(a) => {
            let csv = cmd_simulate(a.n, a.seed)?;
            match a.output {
                Some(path) => {
                    std::fs::write(path, csv)?;
                    String::new()
                }
                None => csv,
            }
        }
        Command::Bench(a) => {
            let table = run_scaling(&ScalingConfig {
                sizes: a.sizes,
                replicates: a.replicates,
                seed: a.seed,
                naive_max: a.naive_max,
            })?;
            match a.format {
                Format::Json => table.to_json() + "\n",
                Format::Tsv => table.to_csv().replace(',', "\t"),
            }
        }
    };
    Ok(Outcome { stdout, status: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn cfg(f: &tempfile::NamedTempFile) -> RunConfig {
        let mut c = RunConfig::new(f.path(), ColumnRef::Index(1), ColumnRef::Index(2));
        c.timing = false;
        c.bootstrap_replicates = 50;
        c
    }

    #[test]
    fn fig1_fit_row() {
        let f = csv("0.5,2\n1,3\n2,1\n");
        let mut c = cfg(&f);
        c.method = Method::Bootstrap;
        let r = cmd_fit(&c).unwrap();
        assert_eq!(r.groups.len(), 1);
        assert_eq!(r.groups[0].group, "ALL");
        assert_eq!(r.groups[0].slope, Some(2.0));
        assert_eq!(r.groups[0].intercept, Some(1.0));
    }

    #[test]
    fn constant_group_matches_all() {
        let f = csv("g,x,y\nA,0,0.1\nA,1,1.2\nA,2,1.9\nA,3,3.2\nA,4,3.9\n");
        let mut c = RunConfig::new(f.path(), "x".parse().unwrap(), "y".parse().unwrap());
        c.group = Some("g".parse().unwrap());
        c.timing = false;
        c.bootstrap_replicates = 40;
        let r = cmd_fit(&c).unwrap();
        assert_eq!(r.groups.len(), 2);
        let (all, a) = (&r.groups[0], &r.groups[1]);
        assert_eq!(a.group, "A");
        assert_eq!((all.slope, all.intercept, &all.ci_bootstrap), (a.slope, a.intercept, &a.ci_bootstrap));
        assert_eq!(all.ci_analytic, a.ci_analytic);
    }

    #[test]
    fn small_groups_are_reported_not_fatal() {
        let f = csv("g,x,y\nA,0,0\nA,1,1\nA,2,2\nB,5,5\n");
        let mut c = RunConfig::new(f.path(), "x".parse().unwrap(), "y".parse().unwrap());
        c.group = Some("g".parse().unwrap());
        c.method = Method::AnalyticNull;
        let r = cmd_fit(&c).unwrap();
        assert_eq!(r.groups.iter().map(|g| g.group.as_str()).collect::<Vec<_>>(), ["ALL", "A", "B"]);
        assert!(r.groups[1].error.is_none());
        assert!(r.groups[2].error.as_deref().unwrap().contains("only 1"));
        assert!(r.groups[0].time_s.is_some());
    }

    #[test]
    fn json_and_tsv_agree() {
        let f = csv("x,y\n0,0.1\n1,1.2\n2,1.9\n3,3.2\n4,3.9\n5,5.3\n");
        let r = cmd_fit(&cfg(&f)).unwrap();
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let tsv = r.to_tsv();
        let row: Vec<&str> = tsv.lines().nth(1).unwrap().split('\t').collect();
        let g = &json["groups"][0];
        let four = |v: &serde_json::Value| format!("{:.4}", v.as_f64().unwrap());
        assert_eq!(row[2], four(&g["slope"]));
        assert_eq!(row[3], four(&g["ci_bootstrap"]["lo"]));
        assert_eq!(row[6], four(&g["ci_analytic"]["hi"]));
        assert_eq!(row[8], four(&g["intercept"]));
    }

    #[test]
    fn fit_output_is_reproducible() {
        let f = csv("x,y\n0,0.1\n1,1.2\n2,1.9\n3,3.2\n4,3.9\n5,5.3\n6,5.8\n");
        let a = cmd_fit(&cfg(&f)).unwrap().to_json();
        let b = cmd_fit(&cfg(&f)).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn influence_table_and_plots() {
        let f = csv("x,y\n0.5,2\n1,3\n2,1\n");
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(&f);
        c.plot_dir = Some(dir.path().join("plots"));
        let r = cmd_influence(&c).unwrap();
        assert_eq!(r.tau_scaled(), vec![-0.5, 0.0, -0.5]);
        assert!(dir.path().join("plots/influence_index.svg").exists());
        assert!(dir.path().join("plots/influence_scatter.svg").exists());
        assert!(r.to_tsv().starts_with("index\tgroup\tx\ty\ttau\ttau_scaled\n1\tNA\t0.5000"));
    }

    #[test]
    fn simulate_is_reproducible() {
        let a = cmd_simulate(10, 7).unwrap();
        assert_eq!(a, cmd_simulate(10, 7).unwrap());
        assert_eq!(a.lines().count(), 11);
    }

    #[test]
    fn config_validation() {
        let f = csv("0,0\n1,1\n");
        let mut c = cfg(&f);
        c.level = 1.5;
        assert!(cmd_fit(&c).is_err());
        let mut c = cfg(&f);
        c.bootstrap_replicates = 1;
        assert!(cmd_fit(&c).is_err());
        c.method = Method::AnalyticNull;
        assert!(cmd_fit(&c).is_ok());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::FileNotFound("x".into())), EXIT_INPUT);
        assert_eq!(exit_code(&Error::NoValidPairs), EXIT_DEGENERATE);
    }

    fn invoke(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("epb").chain(args.iter().copied())).unwrap();
        run(cli)
    }

    #[test]
    fn command_line_fit() {
        let f = csv("x,y\n0.5,2\n1,3\n2,1\n");
        let p = f.path().to_str().unwrap();
        let out = invoke(&["fit", "--input", p, "--method", "analytic-null", "--format", "tsv", "--no-time"]).unwrap();
        assert_eq!(out.status, 0);
        let row: Vec<&str> = out.stdout.lines().nth(1).unwrap().split('\t').collect();
        assert_eq!(&row[..3], ["ALL", "3", "2.0000"]);
        assert_eq!(row[8], "1.0000");
        let a = invoke(&["fit", "--input", p, "--B", "50", "--no-time"]).unwrap();
        let b = invoke(&["fit", "--input", p, "--B", "50", "--no-time"]).unwrap();
        assert_eq!(a.stdout, b.stdout);
        let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["groups"][0]["slope"], 2.0);
    }

    #[test]
    fn command_line_degenerate_and_bad_input() {
        let f = csv("1,0\n1,1\n1,2\n");
        let p = f.path().to_str().unwrap();
        let out = invoke(&["fit", "--input", p, "--method", "analytic-null"]).unwrap();
        assert_eq!(out.status, EXIT_DEGENERATE);
        assert!(out.stdout.contains("\"error\""));

        let bad = csv("x,y\n1,2\n2,oops\n3,4\n");
        let e = invoke(&["fit", "--input", bad.path().to_str().unwrap()]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
        assert!(e.to_string().contains('3'), "{e}");

        let e = invoke(&["fit", "--input", "/nonexistent/file.csv"]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
        let e = invoke(&["fit", "--input", p, "--y", "missing"]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
    }

    #[test]
    fn command_line_simulate_and_bench() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sim.csv");
        let out = invoke(&["simulate", "--n", "25", "--seed", "5", "--output", path.to_str().unwrap()]).unwrap();
        assert!(out.stdout.is_empty());
        let written = std::fs::read_to_string(&path).unwrap();
        assert_eq!(written, invoke(&["simulate", "--n", "25", "--seed", "5"]).unwrap().stdout);
        assert!(written.starts_with("x,y\n"));

        let out = invoke(&["bench", "--sizes", "200", "--replicates", "1", "--naive-max", "200", "--format", "tsv"]).unwrap();
        assert_eq!(out.stdout.lines().count(), 2, "{}", out.stdout);
    }

    #[test]
    fn command_line_influence_flags_leverage_point() {
        let base = crate::sim::LinearModel::default().sample(26, 8).unwrap();
        let mut text = String::from("x,y\n");
        for p in base.iter() {
            text.push_str(&format!("{},{}\n", p.x, p.y));
        }
        text.push_str("4,7\n");
        let f = csv(&text);
        let out = invoke(&["influence", "--input", f.path().to_str().unwrap()]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let obs = v["observations"].as_array().unwrap();
        assert_eq!(obs.len(), 27);
        let top = obs
            .iter()
            .max_by(|a, b| {
                let t = |o: &serde_json::Value| o["tau_scaled"].as_f64().unwrap().abs();
                t(a).total_cmp(&t(b))
            })
            .unwrap();
        assert_eq!(top["index"], 27);
    }
}
