use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use robin_weyl::acceptance::{run_criterion, selected, CriterionReport, Tier};
use robin_weyl::asymptotics::{
    gap_constant, heat_two_term, lt_scaling_probe, semiclassical, tauberian_equivalence_harness, weyl_two_term, AsymptoticReport, FitMode,
    SlopeBound, SyntheticSequence, ENVELOPE_BINS,
};
use robin_weyl::fem::{assemble, solve_eigen, structured_mesh};
use robin_weyl::heat_kernel::{duhamel_error_decay, write_kernel_csv, KernelMethod, KernelRow};
use robin_weyl::model_spectra::model_spectrum;
use robin_weyl::stats::{heat_trace, riesz_mean, write_stat_table, GapSequence, SpectralFunction, StatRow};
use robin_weyl::{BoundaryData, Domain, Error, HeatKernelEvaluator, Result, Spectrum};

use crate::cache::{cache_key, cached_spectrum};
use crate::config::{FemSettings, ProblemSpec, RunConfig, TaskConfig};

/// Files written and whether the acceptance suite (if run) passed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub artifacts: Vec<String>,
    pub cache_hit: bool,
    pub acceptance_pass: bool,
    pub lines: Vec<String>,
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let p = dir.join(name);
    File::create(&p).map(BufWriter::new).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn table(dir: &Path, name: &str, var: &str, comment: &str, rows: &[StatRow]) -> Result<()> {
    let mut w = create(dir, name)?;
    write_stat_table(&mut w, var, comment, rows)?;
    w.flush()?;
    Ok(())
}

fn solver_id(domain: &Domain, fem: FemSettings) -> String {
    match domain {
        Domain::Polygon { .. } => format!("fem-p1-n{}-k{}", fem.mesh, fem.count),
        _ => "exact".into(),
    }
}

fn compute_spectrum(domain: &Domain, sigma: &BoundaryData, cutoff: f64, fem: FemSettings) -> Result<Spectrum> {
    match domain {
        Domain::Polygon { .. } => {
            let op = assemble(&structured_mesh(domain, fem.mesh)?, sigma)?;
            let count = fem.count.min(op.size());
            Ok(solve_eigen(&op, count)?.spectrum.truncated(cutoff))
        }
        _ => model_spectrum(domain, sigma, cutoff),
    }
}

fn spectrum(problem: &ProblemSpec, domain: &Domain, sigma: &BoundaryData, cutoff: f64, cfg: &RunConfig) -> Result<(Spectrum, bool)> {
    let solver = solver_id(domain, cfg.fem);
    let key = cache_key(&problem.document.domain, &problem.sigma, &solver, cutoff);
    cached_spectrum(cfg.cache.as_deref(), &key, || compute_spectrum(domain, sigma, cutoff, cfg.fem))
}

fn describe(problem: &ProblemSpec) -> String {
    let d = serde_json::to_string(&problem.document.domain).unwrap_or_default();
    let s = serde_json::to_string(&problem.sigma).unwrap_or_default();
    format!("domain={d} sigma={s}")
}

fn boundary_hits(domain: &Domain, x: &[f64]) -> usize {
    let lengths: Vec<f64> = match domain {
        Domain::Interval { length } => vec![*length],
        Domain::Rectangle { width, height } => vec![*width, *height],
        _ => return 0,
    };
    x.iter().zip(&lengths).filter(|(c, l)| c.abs() <= 1e-12 * **l || (**c - **l).abs() <= 1e-12 * **l).count()
}

/// Runs one task and writes its artifacts into `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let out = cfg.out.as_path();
    let mut summary = RunSummary { artifacts: Vec::new(), cache_hit: false, acceptance_pass: true, lines: Vec::new() };
    let loaded = match &cfg.problem {
        Some(p) => Some((p, p.build()?)),
        None => None,
    };
    match &cfg.task {
        TaskConfig::Spectrum { cutoff } => {
            let (p, (domain, sigma)) = loaded.expect("validated");
            let (spec, hit) = spectrum(p, &domain, &sigma, *cutoff, cfg)?;
            summary.cache_hit = hit;
            let mut w = create(out, "spectrum.csv")?;
            robin_weyl::model_spectra::write_spectrum_csv(&spec, &mut w)?;
            w.flush()?;
            summary.artifacts.push("spectrum.csv".into());
            summary.lines.push(format!("{} eigenvalues, complete below {:.6e}", spec.len(), spec.complete_below));
        }
        TaskConfig::Riesz { gamma, grid } => {
            let (p, (domain, sigma)) = loaded.expect("validated");
            let top = grid[grid.len() - 1];
            let (spec, hit) = spectrum(p, &domain, &sigma, top.max(1.0), cfg)?;
            summary.cache_hit = hit;
            let mut rows = Vec::with_capacity(grid.len());
            for &l in grid {
                let value = riesz_mean(&spec, *gamma, l)?;
                let prediction = weyl_two_term(&domain, *gamma, l)?.total();
                rows.push(StatRow { x: l, value, prediction, remainder: value - prediction });
            }
            table(out, "riesz.csv", "lambda", &format!("riesz gamma={gamma:.16e} {}", describe(p)), &rows)?;
            summary.artifacts.push("riesz.csv".into());
            let bound = SlopeBound::Below(gamma + (domain.dim() as f64 - 1.0) / 2.0);
            let mode = FitMode::Envelope { bins_per_decade: ENVELOPE_BINS };
            if let Ok(report) = report_from_rows("riesz_mean", &rows, mode, bound) {
                write_json(out, "riesz.json", &report)?;
                summary.artifacts.push("riesz.json".into());
            }
        }
        TaskConfig::HeatTrace { grid } => {
            let (p, (domain, sigma)) = loaded.expect("validated");
            let (spec, hit) = spectrum(p, &domain, &sigma, 50.0 / grid[0], cfg)?;
            summary.cache_hit = hit;
            let mut rows = Vec::with_capacity(grid.len());
            for &t in grid {
                let value = heat_trace(&spec, t)?.value;
                let prediction = heat_two_term(&domain, t)?.total();
                rows.push(StatRow { x: t, value, prediction, remainder: value - prediction });
            }
            table(out, "heat_trace.csv", "t", &format!("heat trace {}", describe(p)), &rows)?;
            summary.artifacts.push("heat_trace.csv".into());
            let bound = SlopeBound::Above(-(domain.dim() as f64 - 1.0) / 2.0);
            if let Ok(report) = report_from_rows("heat_trace", &rows, FitMode::Raw, bound) {
                write_json(out, "heat_trace.json", &report)?;
                summary.artifacts.push("heat_trace.json".into());
            }
        }
        TaskConfig::Gaps { cutoff, count } => {
            let (p, (domain, sigma)) = loaded.expect("validated");
            let (robin, hit_a) = spectrum(p, &domain, &sigma, *cutoff, cfg)?;
            let neumann_problem = ProblemSpec { document: p.document.clone(), sigma: robin_weyl::domains::BoundarySpec::Constant(0.0) };
            let (neumann, hit_b) = spectrum(&neumann_problem, &domain, &BoundaryData::neumann(&domain), *cutoff, cfg)?;
            summary.cache_hit = hit_a && hit_b;
            let seq = GapSequence::new(&robin, &neumann);
            let n = count.unwrap_or(seq.len());
            if n == 0 || n > seq.len() {
                return Err(Error::Certificate { requested: n as f64, complete_below: seq.len() as f64 });
            }
            let target = gap_constant(&domain, &sigma);
            let rows: Vec<StatRow> =
                (0..n).map(|i| StatRow { x: (i + 1) as f64, value: seq.running_means[i], prediction: target, remainder: seq.running_means[i] - target }).collect();
            table(out, "gaps.csv", "n", &format!("running gap average {}", describe(p)), &rows)?;
            summary.artifacts.push("gaps.csv".into());
            summary.lines.push(format!("gap average over {n} = {:.10} (limit {target})", seq.running_means[n - 1]));
        }
        TaskConfig::Density { grid, point } => {
            let (p, (domain, sigma)) = loaded.expect("validated");
            let top = grid[grid.len() - 1];
            let sf = SpectralFunction::new(&domain, &sigma, point, 2.0 * top)?;
            let bulk = semiclassical::<f64>(0.0, sf.dim as i32)?;
            let prediction = bulk * 2f64.powi(boundary_hits(&domain, point) as i32);
            let mut rows = Vec::with_capacity(grid.len());
            for &l in grid {
                let value = sf.smoothed(l)?;
                rows.push(StatRow { x: l, value, prediction, remainder: value - prediction });
            }
            let pt: Vec<String> = point.iter().map(|c| format!("{c:.16e}")).collect();
            table(out, "density.csv", "lambda", &format!("smoothed spectral function at ({}) {}", pt.join(","), describe(p)), &rows)?;
            summary.artifacts.push("density.csv".into());
        }
        TaskConfig::Duhamel { j, grid, point, point2 } => {
            let (_, (domain, sigma)) = loaded.expect("validated");
            let t_min = grid[0];
            let exact = HeatKernelEvaluator::new(&domain, &sigma, KernelMethod::EigenExpansion, t_min)?;
            let approx = HeatKernelEvaluator::new(&domain, &sigma, KernelMethod::Duhamel(*j), t_min)?;
            let pad = |v: &[f64]| [v[0], v.get(1).copied().unwrap_or(0.0)];
            let mut rows = Vec::with_capacity(2 * grid.len());
            for &t in grid {
                for ev in [&exact, &approx] {
                    rows.push(KernelRow { t, x: pad(point), xp: pad(point2), method: ev.method.name(), value: ev.eval(t, point, point2)? });
                }
            }
            let mut w = create(out, "kernel.csv")?;
            write_kernel_csv(&mut w, &rows)?;
            w.flush()?;
            summary.artifacts.push("kernel.csv".into());
            if grid.len() >= 2 && !sigma.is_neumann() {
                let report = duhamel_error_decay(&domain, &sigma, *j, point, point2, grid)?;
                write_json(out, "duhamel.json", &report)?;
                summary.artifacts.push("duhamel.json".into());
                summary.lines.push(format!("error decay slope {:.4} (r² {:.4})", report.fit.slope, report.fit.r2));
            }
        }
        TaskConfig::LtProbe { gamma, scales } => {
            let (_, (domain, sigma)) = loaded.expect("validated");
            let probe = lt_scaling_probe(&domain, &sigma, *gamma, scales, 0.1)?;
            write_json(out, "lt_probe.json", &probe)?;
            summary.artifacts.push("lt_probe.json".into());
            summary.lines.push(match probe.fit {
                Some(f) => format!("growth exponent {:.4} against bound {}", f.slope, probe.bound),
                None => "no negative spectrum".into(),
            });
        }
        TaskConfig::Tauberian { n, alpha, coefficient, offset, perturbation, decay } => {
            let a = SyntheticSequence::power(*coefficient, *alpha);
            let d = offset / coefficient.powf(1.0 / alpha);
            let families = [a.shifted(*offset), a, a.shifted(*offset).perturbed(*perturbation, *decay)];
            let expected = [d, 0.0, d];
            let mut reports = Vec::new();
            for (b, e) in families.iter().zip(expected) {
                reports.push(tauberian_equivalence_harness(&a, b, *alpha, *coefficient, e, *n, 0.02)?);
            }
            write_json(out, "tauberian.json", &reports)?;
            summary.artifacts.push("tauberian.json".into());
        }
        TaskConfig::Verify { suite } => {
            let reports: Vec<CriterionReport> = selected(*suite)
                .iter()
                .map(|c| {
                    let r = run_criterion(c);
                    eprintln!("{}", r.line());
                    r
                })
                .collect();
            summary.acceptance_pass = reports.iter().all(|r| r.pass);
            #[derive(Serialize)]
            struct VerifyReport<'a> {
                suite: Tier,
                pass: bool,
                criteria: &'a [CriterionReport],
            }
            write_json(out, "verify.json", &VerifyReport { suite: *suite, pass: summary.acceptance_pass, criteria: &reports })?;
            summary.artifacts.push("verify.json".into());
        }
    }
    Ok(summary)
}

fn report_from_rows(statistic: &str, rows: &[StatRow], mode: FitMode, bound: SlopeBound) -> Result<AsymptoticReport> {
    AsymptoticReport::new(
        statistic,
        rows.iter().map(|r| r.x).collect(),
        rows.iter().map(|r| r.value).collect(),
        rows.iter().map(|r| r.prediction).collect(),
        mode,
        bound,
    )
}
