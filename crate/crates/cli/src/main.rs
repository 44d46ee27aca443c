//! `symdom`: identity suites, Denjoy–Wolff experiments, orbits, horoball
//! grids and named demos.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use symdom::config::{FactorSpec, RunConfig};
use symdom::demos::{demo, NAMES};
use symdom::dynamics::{
    bidisc_appendix_suite, denjoy_wolff_report, hilbert_alternative, limit_functions, wolff, ReportOptions, ReportRun,
    Scenario, SelfMap, Verdict,
};
use symdom::horofunction::{horoball_grid, HorofunctionData};
use symdom::verify::verify_factor;
use symdom::{Execution, Factor, Tolerances};

use output::{grid_csv, indexed_path, orbit_csv, write_atomic, write_json};

/// Hororadii used when the configuration lists none.
const DEFAULT_RADII: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Parser)]
#[command(name = "symdom", version, about = "Bounded symmetric domains: triple identities and Denjoy–Wolff experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; overrides the configuration's outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed; overrides the configuration's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override NAME=VALUE; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Run every stage sequentially.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized triple and boundary identity suites on a factor.
    Verify {
        /// Factor spec, e.g. '{"type":"polydisc","d":3}'.
        #[arg(long)]
        factor: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Wolff construction and Denjoy–Wolff report.
    Wolff {
        #[command(flatten)]
        common: Common,
    },
    /// Orbit CSV per start.
    Orbit {
        #[command(flatten)]
        common: Common,
    },
    /// Horofunction and horoball membership on a slice grid.
    Horoball {
        #[command(flatten)]
        common: Common,
    },
    /// Runs a named scenario and writes its artifacts to a directory.
    Demo {
        /// Scenario name; see --list.
        name: Option<String>,
        /// List the scenarios.
        #[arg(long)]
        list: bool,
        /// Print the scenario's configuration and exit.
        #[arg(long)]
        print_config: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Failures split by exit code.
enum Failure {
    /// Invalid configuration or arguments: exit 2.
    Usage(anyhow::Error),
    /// Runtime failure: exit 1.
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SYMDOM_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { factor, trials, common } => cmd_verify(factor.as_deref(), trials, &common),
        Command::Wolff { common } => cmd_wolff(&common),
        Command::Orbit { common } => cmd_orbit(&common),
        Command::Horoball { common } => cmd_horoball(&common),
        Command::Demo {
            name,
            list,
            print_config,
            common,
        } => cmd_demo(name.as_deref(), list, print_config, &common),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

impl Common {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    /// Configuration from `--config` with the command-line overrides applied.
    fn load(&self) -> Result<RunConfig, Failure> {
        let path = self.config.as_ref().ok_or_else(|| usage(anyhow!("--config is required")))?;
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(usage)?;
        let cfg = RunConfig::from_json(&text).map_err(usage)?;
        self.apply(cfg)
    }

    fn apply(&self, mut cfg: RunConfig) -> Result<RunConfig, Failure> {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        for t in &self.tol {
            cfg.tolerances.apply_assignment(t).map_err(usage)?;
        }
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }

    fn tolerances(&self) -> Result<Tolerances, Failure> {
        let mut tol = Tolerances::default();
        for t in &self.tol {
            tol.apply_assignment(t).map_err(usage)?;
        }
        Ok(tol)
    }

    /// `--out`, else the configured path.
    fn out(&self, configured: &Option<String>) -> Option<PathBuf> {
        self.out.clone().or_else(|| configured.as_ref().map(PathBuf::from))
    }
}

fn cmd_verify(factor: Option<&str>, trials: usize, common: &Common) -> Outcome {
    let (factor, seed, tol) = match (factor, &common.config) {
        (Some(spec), None) => {
            let f = FactorSpec::from_json(spec).and_then(|s| s.build()).map_err(usage)?;
            (f, common.seed.unwrap_or(0), common.tolerances()?)
        }
        (None, Some(_)) => {
            let cfg = common.load()?;
            (cfg.build_factor().map_err(usage)?, cfg.seed, cfg.tolerances)
        }
        _ => return Err(usage(anyhow!("verify needs exactly one of --factor and --config"))),
    };
    let report = verify_factor(&factor, trials, seed, &tol, common.exec());
    if let Some(path) = &common.out {
        write_json(path, &report)?;
    }
    for c in &report.checks {
        println!(
            "{:<28} max residual {:>10.3e}  tol {:>8.1e}  {}",
            c.name,
            c.max_residual,
            c.tolerance,
            if c.passed { "ok" } else { "FAIL" }
        );
        if let Some(e) = &c.error {
            println!("{:<28} first error: {e}", "");
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    println!("{}: {passed}/{} identity checks passed ({} trials, seed {seed})", report.factor, report.checks.len(), trials);
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn report_options(cfg: &RunConfig, factor: &Factor, exec: Execution) -> Result<ReportOptions, Failure> {
    let starts = cfg.starts(factor).map_err(usage)?;
    let mut opts = ReportOptions::new(starts, cfg.tolerances, cfg.seed, exec);
    if let Some(s) = &cfg.schedule {
        opts.wolff.schedule = s.clone();
    }
    opts.wolff.samples = cfg.samples;
    opts.iterations = cfg.iterations;
    Ok(opts)
}

fn map_of(cfg: &RunConfig) -> Result<(Factor, SelfMap), Failure> {
    let factor = cfg.build_factor().map_err(usage)?;
    let f = cfg.self_map(&factor).map_err(usage)?;
    Ok((factor, f))
}

fn run_report(cfg: &RunConfig, exec: Execution) -> Result<(Factor, SelfMap, ReportOptions, ReportRun), Failure> {
    let (factor, f) = map_of(cfg)?;
    let opts = report_options(cfg, &factor, exec)?;
    let run = denjoy_wolff_report(&f, &opts).map_err(|e| Failure::Run(e.into()))?;
    Ok((factor, f, opts, run))
}

fn verdict_code(run: &ReportRun) -> ExitCode {
    if run.report.fixed_point.verdict == Verdict::Indeterminate {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_wolff(common: &Common) -> Outcome {
    let cfg = common.load()?;
    let (_, _, _, run) = run_report(&cfg, common.exec())?;
    match common.out(&cfg.outputs.report) {
        Some(path) => {
            write_json(&path, &run.report)?;
            println!("{}", run.report.conclusion.message);
        }
        None => {
            println!("{}", serde_json::to_string_pretty(&run.report).map_err(anyhow::Error::from)?);
            eprintln!("{}", run.report.conclusion.message);
        }
    }
    Ok(verdict_code(&run))
}

fn cmd_orbit(common: &Common) -> Outcome {
    let cfg = common.load()?;
    let (factor, f) = map_of(&cfg)?;
    let starts = cfg.starts(&factor).map_err(usage)?;
    let orbits = limit_functions(&f, &starts, cfg.iterations, cfg.tolerances.cluster_tol, common.exec())
        .map_err(|e| Failure::Run(e.into()))?;
    match common.out(&cfg.outputs.orbit_csv) {
        Some(path) => {
            for (k, o) in orbits.iter().enumerate() {
                let p = indexed_path(&path, k, orbits.len());
                write_atomic(&p, &orbit_csv(o)?)?;
                log::info!("wrote {}", p.display());
            }
        }
        None if orbits.len() == 1 => print!("{}", String::from_utf8_lossy(&orbit_csv(&orbits[0])?)),
        None => return Err(usage(anyhow!("{} starts need --out for one CSV per start", orbits.len()))),
    }
    Ok(ExitCode::SUCCESS)
}

/// The configured horofunction, else the one built by the Wolff construction.
fn horofunction_of(cfg: &RunConfig, factor: &Factor, exec: Execution) -> Result<HorofunctionData, Failure> {
    if let Some(h) = cfg.horofunction(factor).map_err(usage)? {
        return Ok(h);
    }
    let (_, f) = map_of(cfg).map_err(|_| usage(anyhow!("horoball needs a horofunction or a map")))?;
    let opts = report_options(cfg, factor, exec)?;
    let w = wolff(&f, &opts.wolff).map_err(|e| Failure::Run(e.into()))?;
    w.horofunction()
        .cloned()
        .ok_or_else(|| Failure::Run(anyhow!("the map is not fixed-point free; no horofunction ({:?})", w.evidence.verdict)))
}

fn horoball_rows(cfg: &RunConfig, factor: &Factor, exec: Execution) -> Result<(Vec<u8>, usize), Failure> {
    let slice = cfg
        .slice
        .as_ref()
        .ok_or_else(|| usage(anyhow!("horoball needs a slice")))?
        .build(factor)
        .map_err(usage)?;
    let radii = cfg.radii.clone().unwrap_or_else(|| DEFAULT_RADII.to_vec());
    let data = horofunction_of(cfg, factor, exec)?;
    let rows = horoball_grid(&data, &slice, &radii, exec).map_err(|e| Failure::Run(e.into()))?;
    let clipped = rows.iter().filter(|r| !r.inside_ball).count();
    Ok((grid_csv(&rows, &radii)?, clipped))
}

fn cmd_horoball(common: &Common) -> Outcome {
    let cfg = common.load()?;
    let factor = cfg.build_factor().map_err(usage)?;
    let (csv, clipped) = horoball_rows(&cfg, &factor, common.exec())?;
    if clipped > 0 {
        log::warn!("{clipped} grid points lie outside the ball and are flagged");
    }
    match common.out(&cfg.outputs.grid_csv) {
        Some(path) => write_atomic(&path, &csv)?,
        None => print!("{}", String::from_utf8_lossy(&csv)),
    }
    Ok(ExitCode::SUCCESS)
}

fn scenario(name: &str) -> Option<Scenario> {
    Scenario::ALL.into_iter().find(|s| s.demo_name() == name)
}

fn cmd_demo(name: Option<&str>, list: bool, print_config: bool, common: &Common) -> Outcome {
    if list {
        for n in NAMES {
            let d = demo(n).map_err(|e| Failure::Run(e.into()))?;
            println!("{n:<22} {}", d.description);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let name = name.ok_or_else(|| usage(anyhow!("demo needs a name; see --list")))?;
    let d = demo(name).map_err(usage)?;
    let cfg = common.apply(d.config)?;
    if print_config {
        println!("{}", cfg.to_json());
        return Ok(ExitCode::SUCCESS);
    }
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from(name));
    let exec = common.exec();
    write_atomic(&dir.join("config.json"), format!("{}\n", cfg.to_json()).as_bytes())?;
    let (factor, f, opts, run) = run_report(&cfg, exec)?;
    write_json(&dir.join("report.json"), &run.report)?;
    for (k, o) in run.orbits.iter().enumerate() {
        write_atomic(&dir.join(format!("orbit_{k}.csv")), &orbit_csv(o)?)?;
    }
    if let Some(o) = &run.designated {
        write_atomic(&dir.join("orbit_a0.csv"), &orbit_csv(o)?)?;
    }
    if run.wolff.horofunction().is_some() {
        let (csv, _) = horoball_rows(&cfg, &factor, exec)?;
        write_atomic(&dir.join("horoball.csv"), &csv)?;
    }
    if let Some(s) = scenario(name) {
        let appendix = bidisc_appendix_suite(s, &f, &opts).map_err(|e| Failure::Run(e.into()))?;
        write_json(&dir.join("appendix.json"), &appendix)?;
        println!(
            "appendix: dichotomy {}, decay {}, capture {}",
            appendix.dichotomy_holds, appendix.decay_holds, appendix.capture_holds
        );
    }
    if factor.is_hilbert() {
        let alt = hilbert_alternative(&f, &opts.starts, opts.iterations, &opts.wolff, cfg.tolerances.capture)
            .map_err(|e| Failure::Run(e.into()))?;
        write_json(&dir.join("alternative.json"), &alt)?;
        println!("alternative: {:?}", alt.alternative);
    }
    if let Some(h) = &run.report.hypothesis {
        println!("hypothesis: {}", h.label());
    }
    println!("{}: {}", name, run.report.conclusion.message);
    log::info!("artifacts in {}", dir.display());
    Ok(verdict_code(&run))
}
