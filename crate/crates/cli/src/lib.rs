//! Command-line front end: argument parsing, spectrum caching and the task runners.

pub mod cache;
pub mod config;
pub mod tasks;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use robin_weyl::acceptance::Tier;
use robin_weyl::Error;

use config::{parse_point, FemSettings, GridSpec, ProblemSpec, RunConfig, TaskConfig};

/// Exit code for an acceptance suite with a failing criterion.
pub const EXIT_ACCEPTANCE: u8 = 1;
/// Exit code for malformed input, unsupported requests and I/O failures.
pub const EXIT_INPUT: u8 = 2;
/// Exit code for a request beyond the certified part of a spectrum.
pub const EXIT_CERTIFICATE: u8 = 3;
/// Exit code for a numerical method that failed to converge.
pub const EXIT_NUMERICAL: u8 = 4;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Certificate { .. } => EXIT_CERTIFICATE,
        Error::NoConvergence(_) | Error::Quadrature(_) | Error::BracketFailure(_) | Error::NotPositiveDefinite { .. } => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Parser)]
#[command(name = "robin-weyl", version, about = "Robin Laplacian spectra and their two-term Weyl asymptotics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// spectrum cache directory
    #[arg(long, env = "ROBIN_WEYL_CACHE")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Problem {
    /// domain JSON file
    #[arg(long)]
    pub domain: PathBuf,
    /// σ JSON file; defaults to the σ in the domain file, then to Neumann
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    /// FEM mesh subdivisions for polygons
    #[arg(long, default_value_t = 32)]
    pub mesh: usize,
    /// FEM eigenvalue count for polygons
    #[arg(long, default_value_t = 200)]
    pub count: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// eigenvalues below a cutoff
    Spectrum {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        cutoff: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Riesz means against the two-term law on a λ grid
    Riesz {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// start:stop:points[,log]
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// heat trace against the two-term law on a t grid
    HeatTrace {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// running averages of λ_n(σ) − λ_n(0)
    Gaps {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        cutoff: f64,
        /// number of gaps; defaults to every certified one
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Cesàro-smoothed λ^{-d/2}-scaled spectral function at a point
    Density {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        grid: String,
        /// x or x,y
        #[arg(long)]
        point: String,
        #[command(flatten)]
        common: Common,
    },
    /// Duhamel approximation of the heat kernel against the eigenfunction expansion
    Duhamel {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        point: String,
        /// second kernel argument; defaults to --point
        #[arg(long)]
        point2: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// growth of the negative-eigenvalue Riesz sum under σ → sσ
    LtProbe {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// comma-separated scale factors
        #[arg(long)]
        scales: String,
        #[command(flatten)]
        common: Common,
    },
    /// Riesz-difference and gap-average sides on synthetic sequences
    Tauberian {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        coefficient: f64,
        #[arg(long, default_value_t = 5.0)]
        offset: f64,
        #[arg(long, default_value_t = 10.0)]
        perturbation: f64,
        #[arg(long, default_value_t = 0.25)]
        decay: f64,
        #[command(flatten)]
        common: Common,
    },
    /// acceptance suite
    Verify {
        /// quick or full
        #[arg(long, default_value = "quick")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
}

fn grid(s: &str) -> robin_weyl::Result<Vec<f64>> {
    GridSpec::parse(s)?.values()
}

fn problem(p: &Problem) -> robin_weyl::Result<(Option<ProblemSpec>, FemSettings)> {
    Ok((Some(ProblemSpec::load(&p.domain, p.sigma.as_deref())?), FemSettings { mesh: p.mesh, count: p.count }))
}

impl Command {
    /// Loads input files and turns the arguments into a [`RunConfig`].
    pub fn into_config(self) -> robin_weyl::Result<RunConfig> {
        let none = (None, FemSettings { mesh: 32, count: 200 });
        let ((problem, fem), task, common) = match self {
            Command::Spectrum { problem: p, cutoff, common } => (problem(&p)?, TaskConfig::Spectrum { cutoff }, common),
            Command::Riesz { problem: p, gamma, grid: g, common } => (problem(&p)?, TaskConfig::Riesz { gamma, grid: grid(&g)? }, common),
            Command::HeatTrace { problem: p, grid: g, common } => (problem(&p)?, TaskConfig::HeatTrace { grid: grid(&g)? }, common),
            Command::Gaps { problem: p, cutoff, n, common } => (problem(&p)?, TaskConfig::Gaps { cutoff, count: n }, common),
            Command::Density { problem: p, grid: g, point, common } => (problem(&p)?, TaskConfig::Density { grid: grid(&g)?, point: parse_point(&point)? }, common),
            Command::Duhamel { problem: p, j, grid: g, point, point2, common } => {
                let point = parse_point(&point)?;
                let point2 = match point2 {
                    Some(s) => parse_point(&s)?,
                    None => point.clone(),
                };
                (problem(&p)?, TaskConfig::Duhamel { j, grid: grid(&g)?, point, point2 }, common)
            }
            Command::LtProbe { problem: p, gamma, scales, common } => (problem(&p)?, TaskConfig::LtProbe { gamma, scales: parse_point(&scales)? }, common),
            Command::Tauberian { n, alpha, coefficient, offset, perturbation, decay, common } => {
                (none, TaskConfig::Tauberian { n, alpha, coefficient, offset, perturbation, decay }, common)
            }
            Command::Verify { suite, common } => {
                let suite = Tier::parse(&suite).ok_or_else(|| Error::Parse(format!("suite must be quick or full, got '{suite}'")))?;
                (none, TaskConfig::Verify { suite }, common)
            }
        };
        Ok(RunConfig { problem, task, fem, out: common.out, cache: common.cache })
    }
}

fn write_log(out: &Path, task: &str, started: f64, elapsed: f64, summary: Option<&tasks::RunSummary>, error: Option<&Error>) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    let mut f = std::fs::File::create(out.join("run.log"))?;
    writeln!(f, "task={task}")?;
    writeln!(f, "started_unix={started:.3}")?;
    writeln!(f, "elapsed_seconds={elapsed:.3}")?;
    writeln!(f, "version={}", env!("CARGO_PKG_VERSION"))?;
    if let Some(s) = summary {
        writeln!(f, "cache_hit={}", s.cache_hit)?;
        writeln!(f, "artifacts={}", s.artifacts.join(","))?;
    }
    if let Some(e) = error {
        writeln!(f, "error={e}")?;
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> u8 {
    let config = match cli.command.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let clock = Instant::now();
    let result = tasks::run(&config);
    let elapsed = clock.elapsed().as_secs_f64();
    let code = match &result {
        Ok(s) => {
            for line in &s.lines {
                println!("{line}");
            }
            for a in &s.artifacts {
                println!("wrote {}", config.out.join(a).display());
            }
            if s.acceptance_pass {
                0
            } else {
                EXIT_ACCEPTANCE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(e)
        }
    };
    if let Err(e) = write_log(&config.out, config.task.name(), started, elapsed, result.as_ref().ok(), result.as_ref().err()) {
        eprintln!("warning: could not write run.log: {e}");
    }
    code
}
