use std::path::{Path, PathBuf};

use robin_weyl::domains::{BoundarySpec, DomainDocument};
use robin_weyl::{BoundaryData, Domain, Error, Result};

/// `start:stop:points[,log]`, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (body, log) = match s.rsplit_once(',') {
            Some((b, "log")) => (b, true),
            Some((_, flag)) => return Err(Error::Parse(format!("grid flag must be 'log', got '{flag}'"))),
            None => (s, false),
        };
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid must read start:stop:points[,log], got '{s}'")));
        }
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| Error::Parse(format!("grid value '{v}': {e}")));
        let points = parts[2].trim().parse::<usize>().map_err(|e| Error::Parse(format!("grid points '{}': {e}", parts[2])))?;
        let g = Self { start: num(parts[0])?, stop: num(parts[1])?, points, log };
        g.values()?;
        Ok(g)
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 1 && self.start == self.stop {
            return Ok(vec![self.start]);
        }
        robin_weyl::asymptotics::grid(self.start, self.stop, self.points, self.log)
    }
}

/// Domain geometry and σ as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub document: DomainDocument,
    pub sigma: BoundarySpec,
}

impl ProblemSpec {
    /// Reads the domain file and the σ file; σ falls back to the one embedded in the domain
    /// document, then to Neumann (σ = 0).
    pub fn load(domain: &Path, sigma: Option<&Path>) -> Result<Self> {
        let document = DomainDocument::from_json(&read(domain)?).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", domain.display())),
            other => other,
        })?;
        let sigma = match sigma {
            Some(p) => serde_json::from_str::<BoundarySpec>(&read(p)?).map_err(|e| Error::Parse(format!("{}: line {} column {}: {e}", p.display(), e.line(), e.column())))?,
            None => document.sigma.clone().unwrap_or(BoundarySpec::Constant(0.0)),
        };
        Ok(Self { document, sigma })
    }

    pub fn build(&self) -> Result<(Domain, BoundaryData)> {
        let domain: Domain = self.document.domain.build()?;
        let sigma = self.sigma.build(&domain)?;
        Ok((domain, sigma))
    }
}

fn read(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

/// What one invocation should do.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskConfig {
    Spectrum { cutoff: f64 },
    Riesz { gamma: f64, grid: Vec<f64> },
    HeatTrace { grid: Vec<f64> },
    Gaps { cutoff: f64, count: Option<usize> },
    Density { grid: Vec<f64>, point: Vec<f64> },
    Duhamel { j: usize, grid: Vec<f64>, point: Vec<f64>, point2: Vec<f64> },
    LtProbe { gamma: f64, scales: Vec<f64> },
    Tauberian { n: usize, alpha: f64, coefficient: f64, offset: f64, perturbation: f64, decay: f64 },
    Verify { suite: robin_weyl::acceptance::Tier },
}

impl TaskConfig {
    pub fn name(&self) -> &'static str {
        match self {
            TaskConfig::Spectrum { .. } => "spectrum",
            TaskConfig::Riesz { .. } => "riesz",
            TaskConfig::HeatTrace { .. } => "heat-trace",
            TaskConfig::Gaps { .. } => "gaps",
            TaskConfig::Density { .. } => "density",
            TaskConfig::Duhamel { .. } => "duhamel",
            TaskConfig::LtProbe { .. } => "lt-probe",
            TaskConfig::Tauberian { .. } => "tauberian",
            TaskConfig::Verify { .. } => "verify",
        }
    }
}

/// FEM settings for polygons, which have no closed-form spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FemSettings {
    pub mesh: usize,
    pub count: usize,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Option<ProblemSpec>,
    pub task: TaskConfig,
    pub fem: FemSettings,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
}

impl RunConfig {
    /// Checks that grids increase, cutoffs are positive and the task has what it needs.
    pub fn validate(&self) -> Result<()> {
        let increasing = |g: &[f64]| !g.is_empty() && g.iter().all(|v| v.is_finite()) && g.windows(2).all(|w| w[1] > w[0]);
        let positive = |v: f64, what: &str| if v > 0.0 && v.is_finite() { Ok(()) } else { Err(Error::InvalidArgument(format!("{what} must be positive, got {v}"))) };
        let needs_problem = !matches!(self.task, TaskConfig::Tauberian { .. } | TaskConfig::Verify { .. });
        if needs_problem && self.problem.is_none() {
            return Err(Error::InvalidArgument(format!("{} needs --domain", self.task.name())));
        }
        match &self.task {
            TaskConfig::Spectrum { cutoff } | TaskConfig::Gaps { cutoff, .. } => positive(*cutoff, "cutoff")?,
            TaskConfig::Riesz { gamma, grid } => {
                if !(*gamma >= 0.0) {
                    return Err(Error::InvalidArgument(format!("gamma must be ≥ 0, got {gamma}")));
                }
                if !increasing(grid) {
                    return Err(Error::InvalidArgument("λ grid must be strictly increasing".into()));
                }
            }
            TaskConfig::HeatTrace { grid } | TaskConfig::Density { grid, .. } | TaskConfig::Duhamel { grid, .. } => {
                if !increasing(grid) || grid[0] <= 0.0 {
                    return Err(Error::InvalidArgument("grid must be positive and strictly increasing".into()));
                }
            }
            TaskConfig::LtProbe { gamma, scales } => {
                positive(*gamma, "gamma")?;
                if !increasing(scales) || scales[0] <= 0.0 {
                    return Err(Error::InvalidArgument("scales must be positive and strictly increasing".into()));
                }
            }
            TaskConfig::Tauberian { n, alpha, coefficient, .. } => {
                positive(*alpha, "alpha")?;
                positive(*coefficient, "coefficient")?;
                if *n < 2 {
                    return Err(Error::InvalidArgument("tauberian needs N ≥ 2".into()));
                }
            }
            TaskConfig::Verify { .. } => {}
        }
        Ok(())
    }
}

/// Parses `x` or `x,y`.
pub fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|v| v.trim().parse::<f64>().map_err(|e| Error::Parse(format!("point coordinate '{v}': {e}")))).collect()
}
