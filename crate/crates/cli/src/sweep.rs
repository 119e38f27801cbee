use std::path::PathBuf;

use anyhow::{bail, Context};
use qverify_core::frontend::Synthetic;
use qverify_core::solvers::{normalize_trace, FilterPolynomial, OptimizerKind, Problem};
use qverify_core::{format_assignment, Verdict};

use crate::args::{parse_range, SolverKind, SweepArgs};
use crate::instance::{Instance, InstanceSource};
use crate::output::{write_atomic, Csv};
use crate::pipeline::{prepare, run_problem, PipelineRun};

#[derive(Clone, Debug)]
pub struct GridPoint {
    pub instance: usize,
    pub solver: SolverKind,
    pub optimizer: Option<OptimizerKind>,
    pub seed: u64,
}

/// Outcome of one grid point; `Err` holds the error message.
#[derive(Debug)]
pub struct GridResult {
    pub point: GridPoint,
    pub run: Result<PipelineRun, String>,
}

#[derive(Debug, Default)]
pub struct SweepSummary {
    pub results: Vec<GridResult>,
    pub files: Vec<PathBuf>,
}

/// Enumerate the grid in a fixed order. The filter solver's rate does not
/// depend on the seed, so it runs once per instance; brute force likewise.
pub fn grid(n_instances: usize, args: &SweepArgs) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for instance in 0..n_instances {
        for &solver in &args.solvers {
            let optimizers: Vec<Option<OptimizerKind>> = if solver.uses_optimizer() {
                args.optimizers.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            let seeds = match solver {
                SolverKind::Brute | SolverKind::Qsvt => 1,
                _ => args.seeds,
            };
            for optimizer in optimizers {
                for s in 0..seeds {
                    points.push(GridPoint { instance, solver, optimizer, seed: args.common.seed + s });
                }
            }
        }
    }
    points
}

fn run_point(point: &GridPoint, instances: &[(Instance, Problem)], args: &SweepArgs) -> GridResult {
    let (instance, problem) = &instances[point.instance];
    let config = args.common.config(point.solver, point.optimizer.unwrap_or(OptimizerKind::TrustRegion), point.seed);
    let run = run_problem(&instance.name, problem, &config, args.common.oracle_budget).map_err(|e| format!("{e:#}"));
    GridResult { point: point.clone(), run }
}

#[cfg(feature = "parallel")]
fn run_grid(points: &[GridPoint], instances: &[(Instance, Problem)], args: &SweepArgs) -> Vec<GridResult> {
    use rayon::prelude::*;
    points.par_iter().map(|p| run_point(p, instances, args)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_grid(points: &[GridPoint], instances: &[(Instance, Problem)], args: &SweepArgs) -> Vec<GridResult> {
    points.iter().map(|p| run_point(p, instances, args)).collect()
}

fn verdict_text(v: &Verdict) -> &'static str {
    v.label()
}

fn optimizer_name(o: Option<OptimizerKind>) -> String {
    o.map_or(String::new(), |k| k.name().to_string())
}

fn convergence_csv(results: &[GridResult]) -> Csv {
    let mut csv = Csv::with_header(&["instance", "solver", "optimizer", "seed", "iteration", "normalized_value"]);
    for r in results {
        let Ok(run) = &r.run else { continue };
        if !r.point.solver.uses_optimizer() {
            continue;
        }
        let trace = &run.report.convergence_trace;
        let values = match run.optimum() {
            Some(opt) => normalize_trace(trace, opt),
            None => trace.clone(),
        };
        for (iteration, value) in values {
            csv.row([
                run.instance.clone(),
                r.point.solver.name().to_string(),
                optimizer_name(r.point.optimizer),
                r.point.seed.to_string(),
                iteration.to_string(),
                value.to_string(),
            ]);
        }
    }
    csv
}

fn rates_csv(results: &[GridResult], instances: &[(Instance, Problem)]) -> Csv {
    let mut csv = Csv::with_header(&["instance", "n_qubits", "gap_estimated", "gap_exact", "degree", "rate", "verdict"]);
    for r in results.iter().filter(|r| r.point.solver == SolverKind::Qsvt) {
        let (instance, problem) = &instances[r.point.instance];
        let gap_exact = problem.gap.exact.map_or(String::new(), |g| g.to_string());
        let (degree, rate, verdict) = match &r.run {
            Ok(run) => {
                let stats = run.report.qsvt.as_ref();
                (
                    stats.map_or(String::new(), |s| s.degree.to_string()),
                    stats.map_or(String::new(), |s| s.rate.to_string()),
                    verdict_text(&run.report.verdict).to_string(),
                )
            }
            Err(_) => (String::new(), String::new(), "error".to_string()),
        };
        csv.row([
            instance.name.clone(),
            problem.qubo.n().to_string(),
            problem.gap.estimated.to_string(),
            gap_exact,
            degree,
            rate,
            verdict,
        ]);
    }
    csv
}

fn runs_csv(results: &[GridResult]) -> Csv {
    let mut csv = Csv::with_header(&["instance", "solver", "optimizer", "seed", "verdict", "witness", "best_value", "shots_used"]);
    for r in results {
        let (instance, verdict, witness, best, shots) = match &r.run {
            Ok(run) => (
                run.instance.clone(),
                verdict_text(&run.report.verdict).to_string(),
                run.report
                    .verdict
                    .witness()
                    .map_or(String::new(), |w| format_assignment(w, run.problem.formula.num_variables() as usize)),
                run.report.best_value.to_string(),
                run.report.shots_used.to_string(),
            ),
            Err(_) => (String::new(), "error".to_string(), String::new(), String::new(), String::new()),
        };
        csv.row([
            instance,
            r.point.solver.name().to_string(),
            optimizer_name(r.point.optimizer),
            r.point.seed.to_string(),
            verdict,
            witness,
            best,
            shots,
        ]);
    }
    csv
}

/// `(d, δ, arctan(1 + log2 μ))` over the grid, `δ = 1/k`.
pub fn heatmap_csv(degrees: &[u32], gap_denominators: &[u32]) -> anyhow::Result<Csv> {
    let mut csv = Csv::with_header(&["d", "delta", "quality"]);
    for &k in gap_denominators {
        if k < 2 {
            bail!("gap denominators must be at least 2");
        }
        let gap = 1.0 / k as f64;
        for &d in degrees {
            let f = FilterPolynomial::new(d, gap)?;
            csv.row([d.to_string(), gap.to_string(), (1.0 + f.log2_mu()).atan().to_string()]);
        }
    }
    Ok(csv)
}

pub fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<SweepSummary> {
    std::fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let mut summary = SweepSummary::default();

    let heatmap = match &args.heatmap_degrees {
        Some(d) => {
            let degrees = parse_range(d).map_err(anyhow::Error::msg)?;
            let gaps = parse_range(&args.heatmap_gaps).map_err(anyhow::Error::msg)?;
            Some(heatmap_csv(&degrees, &gaps)?)
        }
        None => None,
    };

    if !args.no_grid {
        if args.instances.is_empty() || args.solvers.is_empty() || args.seeds == 0 {
            bail!("empty grid: need at least one instance, solver and seed");
        }
        if args.optimizers.is_empty() && args.solvers.iter().any(|s| s.uses_optimizer()) {
            bail!("variational solvers need at least one optimizer");
        }
        let instances = args
            .instances
            .iter()
            .map(|spec| {
                let source = InstanceSource::Synthetic(spec.trim().parse::<Synthetic>()?);
                let instance = source.load()?;
                let problem = prepare(&instance, args.common.oracle_budget)?;
                Ok((instance, problem))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let points = grid(instances.len(), args);
        summary.results = crate::with_jobs(args.common.jobs, || run_grid(&points, &instances, args))?;
        for r in &summary.results {
            if let Err(e) = &r.run {
                eprintln!("warning: {e}");
            }
        }

        let mut outputs = vec![("runs.csv", runs_csv(&summary.results))];
        if args.solvers.iter().any(|s| s.uses_optimizer()) {
            outputs.push(("convergence.csv", convergence_csv(&summary.results)));
        }
        if args.solvers.contains(&SolverKind::Qsvt) {
            outputs.push(("rates.csv", rates_csv(&summary.results, &instances)));
        }
        for (name, csv) in outputs {
            let path = args.out_dir.join(name);
            write_atomic(&path, &csv.into_bytes())?;
            summary.files.push(path);
        }
    }
    if let Some(csv) = heatmap {
        let path = args.out_dir.join("heatmap.csv");
        write_atomic(&path, &csv.into_bytes())?;
        summary.files.push(path);
    }
    Ok(summary)
}
