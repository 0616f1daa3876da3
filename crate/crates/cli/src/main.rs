//! `hypnorm`: command-line front end for the hypnorm toolkit.
//!
//! Output goes to stdout as JSON (`command`, `anchors`, `rows`, `checks`) or
//! as CSV rows. Exit status is 0 when every check passes, 1 when a check
//! fails and 2 on usage errors.

mod grid;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hypnorm::bounds::{self, NormDatum};
use hypnorm::families::{self, CoverFamilyParams, FillingFamilyParams, GluingFamilyParams};
use hypnorm::specfun;
use hypnorm::verify::{self, Check, Suite, VerifyConfig};

use grid::{int_grid, real_grid, GridArg};

#[derive(Parser, Debug)]
#[command(name = "hypnorm", version, about = "Thurston vs harmonic norm toolkit")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Tolerance override, `name=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol, global = true)]
    tol: Vec<(String, f64)>,
    /// Nodes per axis for 3D quadrature (at least 4).
    #[arg(long, default_value_t = verify::VerifyConfig::default().order, global = true)]
    quad_order: usize,
    /// Seed for randomised sweeps.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate ν(r), its asymptotic ratios and the sup-norm branch constants.
    Nu(NuArgs),
    /// Run a named invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Emit per-n rows for one of the example families.
    Family {
        #[command(subcommand)]
        kind: FamilyKind,
    },
}

#[derive(Args, Debug)]
struct NuArgs {
    #[arg(long = "r")]
    r: GridArg<f64>,
    #[command(flatten)]
    spacing: Spacing,
}

#[derive(Args, Debug, Clone, Copy)]
struct Spacing {
    /// Space range values geometrically.
    #[arg(long)]
    log_grid: bool,
    /// Number of values a real range, or a log-spaced integer range, is split into.
    #[arg(long, default_value_t = 13)]
    points: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Ball,
    Tube,
    Dfbound,
    Homalg,
    Bns,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Ball => Suite::Ball,
            SuiteArg::Tube => Suite::Tube,
            SuiteArg::Dfbound => Suite::Dfbound,
            SuiteArg::Homalg => Suite::Homalg,
            SuiteArg::Bns => Suite::Bns,
        }
    }
}

#[derive(Subcommand, Debug)]
enum FamilyKind {
    /// Finite covers of a base manifold.
    Covers {
        #[arg(long)]
        degrees: GridArg<u64>,
        #[arg(long, default_value_t = families::VOL_W)]
        vol: f64,
        #[arg(long, default_value_t = 0.5)]
        inj: f64,
        #[arg(long, default_value_t = 1.0)]
        thurston: f64,
        #[arg(long, default_value_t = 2.0)]
        harmonic: f64,
    },
    /// Dehn fillings with shrinking core geodesics.
    Filling {
        #[arg(long)]
        n: GridArg<u64>,
        #[command(flatten)]
        spacing: Spacing,
        #[arg(long, default_value_t = 1.0)]
        th_alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        th_beta: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = families::VOL_W)]
        vol_w: f64,
    },
    /// Gluings of fibered blocks along the monodromy.
    Gluing {
        #[arg(long)]
        n: GridArg<u64>,
        #[command(flatten)]
        spacing: Spacing,
        #[arg(long, default_value_t = families::VOL_BLOCK)]
        vol_block: f64,
        #[arg(long, default_value_t = hypnorm::homalg::lambda())]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        th_unit: f64,
    },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad tolerance value {v:?}: {e}"))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(format!("tolerance must be a nonnegative number, got {v}"));
    }
    Ok((k.trim().to_string(), v))
}

/// Tolerances used by the `nu` and `family` commands.
const CLI_TOLERANCES: [(&str, f64); 5] = [
    ("branch_constant", 0.01),
    ("cover_ratio", 1e-12),
    ("band", 0.1),
    ("rate_ln", 0.002),
    ("rate_paper", 0.001),
];

struct Tolerances(BTreeMap<String, f64>);

impl Tolerances {
    fn get(&self, name: &str) -> f64 {
        self.0.get(name).copied().unwrap_or_else(|| {
            CLI_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .expect("known tolerance")
        })
    }
}

#[derive(Serialize)]
struct Report {
    command: String,
    anchors: Vec<String>,
    rows: Vec<Value>,
    checks: Vec<Check>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<hypnorm::Error> for Failure {
    fn from(e: hypnorm::Error) -> Self {
        match e {
            hypnorm::Error::Domain { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn check(name: &str, anchor: &str, value: f64, tol: f64, pass: bool) -> Check {
    Check {
        name: name.to_string(),
        anchor: anchor.to_string(),
        value,
        tol,
        pass,
    }
}

const ANCHOR_NU: &str = "nu asymptotics and monotonicity";
const ANCHOR_BRANCH: &str = "sup-norm branch constants";
const ANCHOR_COVERS: &str = "cover family ratio invariance";
const ANCHOR_FILLING: &str = "filling family norm growth n sqrt(log n)";
const ANCHOR_GLUING: &str = "gluing family exponential norm growth";
const ANCHOR_SANDWICH: &str = "two-sided harmonic norm bound";

fn cmd_nu(args: &NuArgs, tol: &Tolerances) -> Result<Report, Failure> {
    let rs = real_grid(&args.r, args.spacing.log_grid, args.spacing.points).map_err(Failure::Usage)?;
    if rs.iter().any(|r| !(*r > 0.0)) {
        return Err(Failure::Usage("radii must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for &r in &rs {
        let nu = specfun::nu(r)?;
        values.push((r, nu));
        rows.push(json!({
            "r": r,
            "nu": nu,
            "ratio_small": nu / (4.0 * PI * r.powi(3) / 3.0),
            "ratio_large": nu / (6.0 * PI * r),
        }));
    }
    let mut checks = Vec::new();
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    sorted.dedup_by(|a, b| a.0 == b.0);
    let increasing = sorted.windows(2).all(|w| w[1].1 > w[0].1);
    checks.push(check("nu strictly increasing on grid", ANCHOR_NU, f64::from(u8::from(increasing)), 0.0, increasing));

    let half = bounds::MARGULIS_MU / 2.0;
    let thin = (bounds::MARGULIS_MU / specfun::nu(half)?).sqrt();
    let t = tol.get("branch_constant");
    checks.push(check("sqrt(0.29/nu(0.145)) vs 4.78", ANCHOR_BRANCH, thin, t, (thin - 4.78).abs() <= t));
    let mut thick: f64 = 0.0;
    for i in 0..=400 {
        let eps = half * (50.0 / half).powf(f64::from(i) / 400.0);
        thick = thick.max((eps / specfun::nu(eps)?).sqrt());
    }
    checks.push(check("max sqrt(eps/nu(eps)) on [0.145, 50] below 3.5", ANCHOR_BRANCH, thick, 3.5, thick < 3.5));
    Ok(Report {
        command: "nu".into(),
        anchors: vec![ANCHOR_NU.into(), ANCHOR_BRANCH.into()],
        rows,
        checks,
    })
}

fn cmd_verify(suite: Suite, cfg: &VerifyConfig) -> Result<Report, Failure> {
    let checks = verify::run_suite(suite, cfg)?;
    let rows = checks
        .iter()
        .map(|c| json!({"name": c.name, "anchor": c.anchor, "value": c.value, "tol": c.tol, "pass": c.pass}))
        .collect();
    Ok(Report {
        command: format!("verify {suite}"),
        anchors: suite.anchors().iter().map(|s| s.to_string()).collect(),
        rows,
        checks,
    })
}

fn sandwich_checks(data: &[(u64, NormDatum, f64)], check_lower: bool) -> Check {
    let mut worst_upper: f64 = 0.0;
    let mut ok = true;
    for (_, d, value) in data {
        let s = bounds::sandwich_value(d, *value);
        ok &= s.upper_ok && (!check_lower || s.lower_ok);
        worst_upper = worst_upper.max(value / s.upper);
    }
    check("pi th/sqrt(vol) <= value <= 10 pi th/sqrt(inj)", ANCHOR_SANDWICH, worst_upper, 1.0, ok)
}

fn cmd_family(kind: &FamilyKind, tol: &Tolerances) -> Result<Report, Failure> {
    match kind {
        FamilyKind::Covers {
            degrees,
            vol,
            inj,
            thurston,
            harmonic,
        } => {
            let degrees = int_grid(degrees, false, 0).map_err(Failure::Usage)?;
            let base = NormDatum::new(*vol, *inj, *thurston, Some(*harmonic))?;
            let rows_data = families::cover_family(&CoverFamilyParams { base, degrees })?;
            let rows = rows_data
                .iter()
                .map(|r| {
                    let b = bounds::thm_main_bounds(&r.datum).expect("validated datum");
                    json!({
                        "degree": r.degree,
                        "vol": r.datum.vol,
                        "inj": r.datum.inj,
                        "thurston": r.datum.thurston,
                        "harmonic": r.datum.harmonic,
                        "lower": b.lower,
                        "upper": b.upper,
                        "ratio": r.ratio,
                    })
                })
                .collect();
            let ratios: Vec<f64> = rows_data.iter().map(|r| r.ratio).collect();
            let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let spread = max / min - 1.0;
            let t = tol.get("cover_ratio");
            let mut checks = vec![check("max/min ratio - 1", ANCHOR_COVERS, spread, t, spread <= t)];
            let data: Vec<_> = rows_data
                .iter()
                .map(|r| (r.degree, r.datum, r.datum.harmonic.unwrap_or(0.0)))
                .collect();
            checks.push(sandwich_checks(&data, true));
            Ok(Report {
                command: "family covers".into(),
                anchors: vec![ANCHOR_COVERS.into(), ANCHOR_SANDWICH.into()],
                rows,
                checks,
            })
        }
        FamilyKind::Filling {
            n,
            spacing,
            th_alpha,
            th_beta,
            c1,
            c2,
            vol_w,
        } => {
            let ns = int_grid(n, spacing.log_grid, spacing.points).map_err(Failure::Usage)?;
            let p = FillingFamilyParams {
                th_alpha: *th_alpha,
                th_beta: *th_beta,
                c1: *c1,
                c2: *c2,
                vol_w: *vol_w,
            };
            let data = ns
                .iter()
                .map(|&n| families::filling_family(&p, n))
                .collect::<Result<Vec<_>, _>>()?;
            let (kr, kn) = (p.ratio_growth_constant(), p.norm_growth_constant());
            let mut rows = Vec::new();
            let mut band_ok = true;
            let mut worst: f64 = 0.0;
            for row in &data {
                let ln_n = (row.n as f64).ln();
                let ratio_band = row.ratio / ln_n.sqrt() / kr;
                let growth_band = row.harmonic_lower / (row.n as f64 * ln_n.sqrt()) / kn;
                for v in [ratio_band, growth_band] {
                    worst = worst.max((v - 1.0).abs());
                }
                band_ok &= (ratio_band - 1.0).abs() <= tol.get("band") && (growth_band - 1.0).abs() <= tol.get("band");
                rows.push(json!({
                    "n": row.n,
                    "vol": row.datum.vol,
                    "inj": row.datum.inj,
                    "thurston": row.datum.thurston,
                    "core_length": row.core_length,
                    "depth": row.depth,
                    "harmonic_lower": row.harmonic_lower,
                    "upper": bounds::thm_main_bounds(&row.datum)?.upper,
                    "ratio": row.ratio,
                    "ratio_over_sqrt_log_n": row.ratio / ln_n.sqrt(),
                    "harmonic_over_n_sqrt_log_n": row.harmonic_lower / (row.n as f64 * ln_n.sqrt()),
                }));
            }
            let increasing = data.windows(2).all(|w| w[1].ratio > w[0].ratio);
            let t = tol.get("band");
            let mut checks = vec![
                check("band deviation from sqrt(pi/c1) laws", ANCHOR_FILLING, worst, t, band_ok),
                check("ratio increasing in n", ANCHOR_FILLING, f64::from(u8::from(increasing)), 0.0, increasing),
            ];
            let sandwich: Vec<_> = data.iter().map(|r| (r.n, r.datum, r.harmonic_lower)).collect();
            checks.push(sandwich_checks(&sandwich, true));
            Ok(Report {
                command: "family filling".into(),
                anchors: vec![ANCHOR_FILLING.into(), ANCHOR_SANDWICH.into()],
                rows,
                checks,
            })
        }
        FamilyKind::Gluing {
            n,
            spacing,
            vol_block,
            lambda,
            th_unit,
        } => {
            let ns = int_grid(n, spacing.log_grid, spacing.points).map_err(Failure::Usage)?;
            let p = GluingFamilyParams {
                vol_block: *vol_block,
                lambda: *lambda,
                th_unit: *th_unit,
            };
            let data = ns
                .iter()
                .map(|&n| families::gluing_family(&p, n))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = data
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "vol": r.vol,
                        "log_th_lower": r.log_th_lower,
                        "rate_ln": r.rate_ln,
                        "rate_paper": r.rate_paper,
                    })
                })
                .collect();
            let last = data.last().expect("nonempty grid");
            let target = p.asymptotic_rate();
            let t = tol.get("rate_ln");
            let mut checks = vec![check(
                &format!("rate_ln at n={} vs ln(lambda)/vol_block = {target:.6}", last.n),
                ANCHOR_GLUING,
                last.rate_ln,
                t,
                (last.rate_ln - target).abs() <= t,
            )];
            let t = tol.get("rate_paper");
            checks.push(check(
                "rate_paper = lambda/vol_block vs 0.348",
                ANCHOR_GLUING,
                last.rate_paper,
                t,
                (last.rate_paper - 0.348).abs() <= t,
            ));
            Ok(Report {
                command: "family gluing".into(),
                anchors: vec![ANCHOR_GLUING.into()],
                rows,
                checks,
            })
        }
    }
}

fn render(report: &Report, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => serde_json::to_string_pretty(report)
            .map(|s| s + "\n")
            .map_err(|e| Failure::Runtime(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(Value::Object(first)) = report.rows.first() {
                w.write_record(first.keys()).map_err(|e| Failure::Runtime(e.to_string()))?;
                for row in &report.rows {
                    let Value::Object(map) = row else { continue };
                    let cells = map.values().map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    });
                    w.write_record(cells).map_err(|e| Failure::Runtime(e.to_string()))?;
                }
            }
            let bytes = w.into_inner().map_err(|e| Failure::Runtime(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let known = |k: &str| {
        verify::DEFAULT_TOLERANCES.iter().any(|(n, _)| *n == k) || CLI_TOLERANCES.iter().any(|(n, _)| *n == k)
    };
    let mut overrides = BTreeMap::new();
    for (k, v) in &cli.tol {
        if !known(k) {
            return Err(Failure::Usage(format!("unknown tolerance {k:?}")));
        }
        overrides.insert(k.clone(), *v);
    }
    if cli.quad_order < 4 {
        return Err(Failure::Usage(format!("--quad-order must be at least 4, got {}", cli.quad_order)));
    }
    let tol = Tolerances(overrides.clone());
    match &cli.command {
        Command::Nu(args) => cmd_nu(args, &tol),
        Command::Verify { suite } => {
            let cfg = VerifyConfig {
                order: cli.quad_order,
                seed: cli.seed,
                tolerances: overrides
                    .into_iter()
                    .filter(|(k, _)| verify::DEFAULT_TOLERANCES.iter().any(|(n, _)| n == k))
                    .collect(),
            };
            cmd_verify((*suite).into(), &cfg)
        }
        Command::Family { kind } => cmd_family(kind, &tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = match render(&report, cli.format) {
        Ok(t) => t,
        Err(Failure::Usage(msg) | Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(1);
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: value {} (tol {})", c.name, c.value, c.tol);
    }
    if report.checks.iter().all(|c| c.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
