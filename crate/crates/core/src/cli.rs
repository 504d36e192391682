//! Command-line front end: argument parsing, run configuration, output.
//!
//! Exit codes: 0 when every checked claim holds, 1 when a violation (or a
//! failed numerical evaluation) was found, 2 for usage or configuration errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ball_measure::{standard_lemma3_grid, verify_lemma1, verify_lemma3_multi};
use crate::compare::{
    compare_with, counterexample, harness, search_constant, ComparisonResult, HarnessOutput, HarnessRow, HarnessSpec,
    RadialKind, SearchSpec, C0,
};
use crate::error::Error;
use crate::format::fmt17;
use crate::laplace_jd::{bessel_oracle_b_grid, verify_bessel_oracle, verify_jd_claims, verify_lemma3_reduced, JdGrid, JdTolerances};
use crate::report::VerificationReport;
use crate::sphere_sum::{radial_mixture_distribution_with, verify_lemma4, CoefficientVector, EngineConfig, RadialLaw};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spheretail", version, about = "Tails of norms of sums of sphere-uniform vectors against Gaussian tails")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Grid and engine resolution.
    #[arg(long, value_enum, default_value_t = Preset::Full, global = true)]
    pub grid_preset: Preset,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Override every claim's margin tolerance (must be > 0).
    #[arg(long, allow_hyphen_values = true, global = true)]
    pub tol: Option<f64>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Test hook: flip the sign of one family of inequality margins.
    #[arg(long, hide = true, global = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the special-function and Gaussian-measure inequalities on grids.
    VerifyLemmas,
    /// Survival function of the norm of one sum.
    Tail {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Also write the full (r, cdf) table as CSV here.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Sphere side against Gaussian side, for one instance or the seeded harness.
    Compare {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Harness only: draw a radial law of this kind per instance.
        #[arg(long, value_enum, conflicts_with = "coeffs")]
        mixture: Option<MixtureArg>,
        /// Harness only: number of random instances.
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Empirical search for the largest ratio.
    SearchConstant {
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        /// Number of distribution builds.
        #[arg(long, default_value_t = 400)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
    },
    /// Rademacher vectors along one axis against the Gaussian side as d grows.
    Counterexample {
        #[arg(long, default_value_t = 100)]
        m: u32,
        #[arg(long, default_value_t = 200)]
        d_max: u32,
    },
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub d: Option<u32>,
    /// Comma-separated coefficients.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
    /// Comma-separated evaluation points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<f64>>,
    /// const:r | ball | twopoint:r1,r2,p
    #[arg(long)]
    pub radial: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MixtureArg {
    Constant,
    Ball,
    Twopoint,
}

impl From<MixtureArg> for RadialKind {
    fn from(m: MixtureArg) -> Self {
        match m {
            MixtureArg::Constant => RadialKind::Constant,
            MixtureArg::Ball => RadialKind::Ball,
            MixtureArg::Twopoint => RadialKind::TwoPoint,
        }
    }
}

/// Validated run settings shared by every command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub preset: Preset,
    pub seed: u64,
    pub tol: Option<f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub inject_fault: bool,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Error> {
        let c = &cli.common;
        if let Some(t) = c.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("--tol must be finite and > 0, got {t}")));
            }
        }
        if c.threads == Some(0) {
            return Err(Error::Config("--threads must be >= 1".into()));
        }
        let command = match cli.command {
            Command::VerifyLemmas => "verify-lemmas",
            Command::Tail { .. } => "tail",
            Command::Compare { .. } => "compare",
            Command::SearchConstant { .. } => "search-constant",
            Command::Counterexample { .. } => "counterexample",
        };
        Ok(Self {
            command,
            preset: c.grid_preset,
            seed: c.seed,
            tol: c.tol,
            out: c.out.clone(),
            format: c.format,
            threads: c.threads,
            inject_fault: c.inject_fault,
        })
    }

    fn engine(&self) -> EngineConfig {
        match self.preset {
            Preset::Quick => EngineConfig::fast(),
            Preset::Full => EngineConfig::standard(),
        }
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// What a command produced: text to emit and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    let go = || dispatch(&cli.command, &cfg);
    let result = match cfg.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(go),
            Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
        },
        None => go(),
    };
    match result {
        Ok(out) => match emit(&cfg, &out.text) {
            Ok(()) => out.code,
            Err(e) => {
                eprintln!("cannot write output: {e}");
                EXIT_CONFIG
            }
        },
        Err(e) => {
            eprintln!("{e}");
            match e {
                Error::Config(_) | Error::Domain { .. } => EXIT_CONFIG,
                _ => EXIT_VIOLATION,
            }
        }
    }
}

fn emit(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.out {
        Some(p) => fs::write(p, text),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, Error> {
    match cmd {
        Command::VerifyLemmas => cmd_verify_lemmas(cfg),
        Command::Tail { instance, table } => cmd_tail(cfg, instance, table.as_ref()),
        Command::Compare {
            instance,
            mixture,
            instances,
        } => cmd_compare(cfg, instance, *mixture, *instances),
        Command::SearchConstant {
            d,
            m_max,
            budget,
            restarts,
        } => cmd_search_constant(cfg, *d, *m_max, *budget, *restarts),
        Command::Counterexample { m, d_max } => cmd_counterexample(cfg, *m, *d_max),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serialises");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn join17(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt17(x)).collect::<Vec<_>>().join(";")
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ReportsEnvelope<'a> {
    config: &'a RunConfig,
    pass: bool,
    reports: &'a [VerificationReport],
}

fn reports_output(cfg: &RunConfig, reports: &[VerificationReport]) -> Result<Outcome, Error> {
    let pass = reports.iter().all(|r| r.pass);
    let text = match cfg.format {
        Format::Json => json(&ReportsEnvelope {
            config: cfg,
            pass,
            reports,
        }),
        Format::Csv => csv_text(
            &["claim", "grid", "worst_margin", "worst_point", "tolerance", "pass", "points_checked"],
            reports.iter().map(|r| {
                let pt = r
                    .worst_point
                    .iter()
                    .map(|(k, v)| format!("{k}={}", fmt17(*v)))
                    .collect::<Vec<_>>()
                    .join(";");
                vec![
                    r.claim.clone(),
                    r.grid.clone(),
                    fmt17(r.worst_margin),
                    pt,
                    fmt17(r.tolerance),
                    r.pass.to_string(),
                    r.points_checked.to_string(),
                ]
            }),
        )?,
    };
    Ok(Outcome {
        text,
        code: if pass { EXIT_PASS } else { EXIT_VIOLATION },
    })
}

/// All grid checks. `full` uses the acceptance grids, `quick` a subset.
pub fn cmd_verify_lemmas_reports(cfg: &RunConfig) -> Result<Vec<VerificationReport>, Error> {
    let full = cfg.preset == Preset::Full;
    let mut reports = Vec::new();

    let (r1, _) = verify_lemma1(if full { 10_000 } else { 1_000 })?;
    reports.extend(r1);

    let grid = if full { JdGrid::standard() } else { JdGrid::quick() };
    let mut tol = JdTolerances::default();
    if let Some(t) = cfg.tol {
        tol = JdTolerances {
            recursion: t,
            normalized_recursion: t,
            margin: t,
            equality_at_zero: t,
        };
    }
    reports.extend(verify_jd_claims(&grid, tol, cfg.inject_fault));

    let (d_hi, bs) = if full {
        (60, bessel_oracle_b_grid())
    } else {
        (12, vec![1e-3, 0.1, 1.0, 10.0, 100.0, 500.0])
    };
    reports.extend(verify_bessel_oracle(-1, d_hi, &bs, cfg.tol_or(1e-9)));

    let offsets: Vec<f64> = if full {
        (0..=40).map(|k| f64::from(k) / 4.0).collect()
    } else {
        vec![0.0, 0.5, 2.0, 10.0]
    };
    let reduced_grid = if full {
        JdGrid {
            d_min: 2,
            d_max: 30,
            b_values: grid.b_values.clone(),
        }
    } else {
        grid.clone()
    };
    reports.extend(verify_lemma3_reduced(&reduced_grid, &offsets, cfg.tol_or(1e-9)));

    let (dims, a_grid, _) = standard_lemma3_grid();
    let dims: Vec<u32> = if full { dims } else { vec![2, 3, 5, 10] };
    let a_grid: Vec<f64> = if full { a_grid } else { a_grid.into_iter().step_by(5).collect() };
    reports.extend(verify_lemma3_multi(
        &dims,
        &a_grid,
        |d| offsets.iter().map(|o| f64::from(d + 2).sqrt() + o).collect(),
        cfg.tol_or(1e-9),
    )?);

    let l4_dims: &[u32] = if full { &[2, 3, 5, 8] } else { &[2, 3] };
    reports.extend(verify_lemma4(l4_dims, &cfg.engine(), cfg.tol_or(1e-6))?);
    Ok(reports)
}

fn cmd_verify_lemmas(cfg: &RunConfig) -> Result<Outcome, Error> {
    let reports = cmd_verify_lemmas_reports(cfg)?;
    reports_output(cfg, &reports)
}

// ---------------------------------------------------------------------------

fn instance_from(args: &InstanceArgs) -> Result<(CoefficientVector, RadialLaw), Error> {
    let d = args.d.ok_or_else(|| Error::Config("--d is required".into()))?;
    let a = args
        .coeffs
        .clone()
        .ok_or_else(|| Error::Config("--coeffs is required".into()))?;
    let c = CoefficientVector::new(d, a)?;
    let radial = match &args.radial {
        Some(s) => RadialLaw::parse(s)?,
        None => RadialLaw::default(),
    };
    Ok((c, radial))
}

fn t_list(args: &InstanceArgs) -> Result<Vec<f64>, Error> {
    let ts = args.t.clone().unwrap_or_default();
    if let Some(t) = ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::Config(format!("--t values must be finite and >= 0, got {t}")));
    }
    Ok(ts)
}

#[derive(Serialize)]
struct TailOutput {
    config: RunConfig,
    survival: Vec<SurvivalPoint>,
    distribution: crate::sphere_sum::DistributionEnvelope,
}

#[derive(Serialize)]
struct SurvivalPoint {
    t: f64,
    survival: f64,
}

fn cmd_tail(cfg: &RunConfig, args: &InstanceArgs, table: Option<&PathBuf>) -> Result<Outcome, Error> {
    let (c, radial) = instance_from(args)?;
    let ts = t_list(args)?;
    let dist = radial_mixture_distribution_with(&c, radial, &cfg.engine())?;
    let survival: Vec<SurvivalPoint> = ts
        .iter()
        .map(|&t| SurvivalPoint {
            t,
            survival: dist.survival(t),
        })
        .collect();
    if let Some(p) = table {
        fs::write(p, dist.to_csv()).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display())))?;
    }
    let text = match cfg.format {
        Format::Json => json(&TailOutput {
            config: cfg.clone(),
            survival,
            distribution: dist.envelope(),
        }),
        // with no --t, the CSV is the distribution table itself
        Format::Csv if ts.is_empty() => dist.to_csv(),
        Format::Csv => csv_text(
            &["t", "survival"],
            survival.iter().map(|s| vec![fmt17(s.t), fmt17(s.survival)]),
        )?,
    };
    Ok(Outcome { text, code: EXIT_PASS })
}

// ---------------------------------------------------------------------------

const ROW_HEADER: [&str; 11] = [
    "d", "m", "coefficients", "t", "lhs", "rhs", "ratio", "regime", "radial", "log_ratio", "log_space",
];

fn row_fields(d: u32, m: usize, a: &[f64], radial: &str, r: &ComparisonResult) -> Vec<String> {
    vec![
        d.to_string(),
        m.to_string(),
        join17(a),
        fmt17(r.t),
        fmt17(r.lhs),
        fmt17(r.rhs),
        fmt17(r.ratio),
        r.regime.label().to_string(),
        radial.to_string(),
        fmt17(r.log_ratio),
        r.log_space.to_string(),
    ]
}

#[derive(Serialize)]
struct CompareSummary<'a> {
    config: &'a RunConfig,
    constant: f64,
    instances: usize,
    rows: usize,
    max_ratio: f64,
    witness: Option<&'a HarnessRow>,
    pass: bool,
    trivial_bound_pass: bool,
}

fn cmd_compare(
    cfg: &RunConfig,
    args: &InstanceArgs,
    mixture: Option<MixtureArg>,
    instances: Option<usize>,
) -> Result<Outcome, Error> {
    let out: HarnessOutput = if args.coeffs.is_some() || args.d.is_some() {
        let (c, radial) = instance_from(args)?;
        let dist = radial_mixture_distribution_with(&c, radial, &cfg.engine())?;
        let ts = t_list(args)?;
        let ts = if ts.is_empty() {
            crate::compare::harness_t_grid(&dist, &c)
        } else {
            ts
        };
        let rows = ts
            .iter()
            .map(|&t| {
                Ok(HarnessRow {
                    instance: 0,
                    d: c.d,
                    m: c.m(),
                    coefficients: c.a.clone(),
                    radial: radial.label(),
                    result: compare_with(&dist, &c, t)?,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let mut trivial = true;
        for &t in &ts {
            if crate::compare::proof_thresholds(&c, t)?.trivial_bound_holds == Some(false) {
                trivial = false;
            }
        }
        crate::compare::summarize_rows(rows, trivial)
    } else {
        let mut spec = match cfg.preset {
            Preset::Quick => HarnessSpec::quick(cfg.seed),
            Preset::Full => HarnessSpec::standard(cfg.seed),
        };
        if let Some(n) = instances {
            if n == 0 {
                return Err(Error::Config("--instances must be >= 1".into()));
            }
            spec.instances = n;
        }
        let radial = match (&args.radial, mixture) {
            (Some(_), Some(_)) => return Err(Error::Config("--radial and --mixture are exclusive".into())),
            (Some(s), None) => Some(RadialLaw::parse(s)?),
            _ => None,
        };
        match radial {
            Some(law) => crate::compare::harness_fixed(&spec, law, &cfg.engine())?,
            None => harness(&spec, mixture.map(RadialKind::from), &cfg.engine())?,
        }
    };
    let ok = out.pass && out.trivial_bound_pass;
    let text = match cfg.format {
        Format::Json => json(&CompareSummary {
            config: cfg,
            constant: C0,
            instances: out.rows.iter().map(|r| r.instance).max().map_or(0, |k| k + 1),
            rows: out.rows.len(),
            max_ratio: out.max_ratio,
            witness: out.witness.as_ref(),
            pass: out.pass,
            trivial_bound_pass: out.trivial_bound_pass,
        }),
        Format::Csv => csv_text(
            &ROW_HEADER,
            out.rows
                .iter()
                .map(|r| row_fields(r.d, r.m, &r.coefficients, &r.radial, &r.result)),
        )?,
    };
    Ok(Outcome {
        text,
        code: if ok { EXIT_PASS } else { EXIT_VIOLATION },
    })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SearchOutput<'a> {
    config: &'a RunConfig,
    #[serde(flatten)]
    result: &'a crate::compare::SearchResult,
}

fn cmd_search_constant(cfg: &RunConfig, d: u32, m_max: usize, budget: usize, restarts: usize) -> Result<Outcome, Error> {
    if d < 2 {
        return Err(Error::Config(format!("--d must be >= 2, got {d}")));
    }
    let spec = SearchSpec {
        d,
        m_max,
        budget,
        seed: cfg.seed,
        restarts,
    };
    let r = search_constant(&spec, &EngineConfig::fast())?;
    let text = match cfg.format {
        Format::Json => json(&SearchOutput { config: cfg, result: &r }),
        Format::Csv => {
            let mut rows = vec![
                vec![
                    "search".to_string(),
                    fmt17(r.best_ratio),
                    fmt17(r.witness.t),
                    join17(&r.witness.coefficients),
                ],
                vec![
                    "witness-full-resolution".to_string(),
                    fmt17(r.witness_full_resolution.ratio),
                    fmt17(r.witness_full_resolution.t),
                    join17(&r.witness_full_resolution.coefficients),
                ],
            ];
            for (name, ratio) in &r.families {
                rows.push(vec![format!("family:{name}"), fmt17(*ratio), String::new(), String::new()]);
            }
            csv_text(&["source", "empirical_best_ratio", "t", "coefficients"], rows)?
        }
    };
    Ok(Outcome {
        text,
        code: if r.within_c0 { EXIT_PASS } else { EXIT_VIOLATION },
    })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CounterexampleOutput<'a> {
    config: &'a RunConfig,
    constant: f64,
    #[serde(flatten)]
    table: &'a crate::compare::CounterexampleTable,
}

/// Exit 1 when the table fails to show the crossing or the Gaussian side is
/// not decreasing on the grid.
fn cmd_counterexample(cfg: &RunConfig, m: u32, d_max: u32) -> Result<Outcome, Error> {
    if d_max < 2 {
        return Err(Error::Config(format!("--d-max must be >= 2, got {d_max}")));
    }
    let ds: Vec<u32> = (2..=d_max).collect();
    let tab = counterexample(m, &ds)?;
    let text = match cfg.format {
        Format::Json => json(&CounterexampleOutput {
            config: cfg,
            constant: C0,
            table: &tab,
        }),
        Format::Csv => csv_text(
            &["m", "t", "d", "lhs", "rhs", "ratio", "exceeds_c0"],
            tab.rows.iter().map(|r| {
                vec![
                    tab.m.to_string(),
                    fmt17(tab.t),
                    r.d.to_string(),
                    fmt17(tab.lhs),
                    fmt17(r.rhs),
                    fmt17(r.ratio),
                    r.exceeds_c0.to_string(),
                ]
            }),
        )?,
    };
    let ok = tab.crossing_d.is_some() && tab.rhs_decreasing;
    Ok(Outcome {
        text,
        code: if ok { EXIT_PASS } else { EXIT_VIOLATION },
    })
}
