use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use qverify_core::frontend::{Check, FrontendError, Synthetic};
use qverify_core::solvers::normalize_trace;
use qverify_core::{format_assignment, SolverConfig};

use crate::args::VerifyArgs;
use crate::exit;
use crate::instance::InstanceSource;
use crate::output::{write_atomic, Csv};
use crate::pipeline::{run_pipeline, OracleCheck, PipelineRun};
use crate::report::RunReport;

pub fn source(args: &VerifyArgs) -> anyhow::Result<InstanceSource> {
    if let Some(path) = &args.source {
        let checks = args
            .checks
            .iter()
            .map(|c| c.parse::<Check>())
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(InstanceSource::Source {
            path: path.clone(),
            checks,
            unwind: args.unwind,
            flags: args.checker_flags.clone(),
        });
    }
    if let Some(path) = &args.dimacs {
        return Ok(InstanceSource::Dimacs(path.clone()));
    }
    let spec = args.synthetic.as_deref().context("one of --source, --dimacs or --synthetic is required")?;
    Ok(InstanceSource::Synthetic(spec.parse::<Synthetic>()?))
}

pub fn solver_config(args: &VerifyArgs) -> anyhow::Result<SolverConfig> {
    match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing solver configuration {}", path.display()))
        }
        None => Ok(args.common.config(args.solver, args.optimizer, args.common.seed)),
    }
}

/// `report.json` → `report.trace.csv`
fn trace_path(out: &Path) -> PathBuf {
    out.with_extension("trace.csv")
}

fn write_trace(run: &PipelineRun, path: &Path) -> anyhow::Result<()> {
    let raw = &run.report.convergence_trace;
    let mut csv = Csv::with_header(&["iteration", "value", "normalized_value"]);
    let normalized = run.optimum().map(|opt| normalize_trace(raw, opt));
    for (k, &(iteration, value)) in raw.iter().enumerate() {
        let norm = normalized.as_ref().map_or(String::new(), |n| n[k].1.to_string());
        csv.row([iteration.to_string(), value.to_string(), norm]);
    }
    write_atomic(path, &csv.into_bytes())
}

/// Run the pipeline and print a summary; returns `true` when a flaw was
/// found.
pub fn verify(args: &VerifyArgs, out: &mut impl Write) -> anyhow::Result<bool> {
    let source = source(args)?;
    let config = solver_config(args)?;
    let budget = args.common.oracle_budget;
    let run = crate::with_jobs(args.common.jobs, || -> anyhow::Result<PipelineRun> {
        let instance = source.load()?;
        run_pipeline(&instance, &config, budget)
    })??;

    let p = &run.problem;
    writeln!(out, "instance: {} ({})", run.instance, p.formula.provenance())?;
    writeln!(
        out,
        "reduction: {} CNF variables, {} QUBO variables ({} auxiliary), M = {}, gap >= {}{}",
        p.formula.num_variables(),
        p.qubo.n(),
        p.qubo.num_auxiliary(),
        p.gap.bound_m,
        p.gap.estimated,
        p.gap.exact.map_or(String::new(), |g| format!(", exact gap {g}")),
    )?;
    writeln!(out, "solver: {}", run.config.name())?;
    if let Some(q) = &run.report.qsvt {
        writeln!(out, "filter: degree {} at gap {}, rate {:.6}", q.degree, q.gap, q.rate)?;
    }
    match run.report.verdict.witness() {
        Some(w) => {
            let width = p.formula.num_variables() as usize;
            writeln!(out, "verdict: flaw found")?;
            writeln!(out, "witness: {}", format_assignment(w, width))?;
            let vars: Vec<String> = (1..=width).map(|v| format!("x{v}={}", w >> (v - 1) & 1)).collect();
            writeln!(out, "assignment: {}", vars.join(" "))?;
        }
        None => writeln!(out, "verdict: no flaw found within budget")?,
    }
    match run.oracle {
        Some(OracleCheck::Agrees { .. }) => writeln!(out, "oracle: agrees")?,
        Some(OracleCheck::SolverMissed) => writeln!(out, "oracle: a solution exists that the solver did not find")?,
        None => writeln!(out, "oracle: skipped (over budget)")?,
    }

    if let Some(path) = &args.out {
        let trace_file = if run.report.convergence_trace.is_empty() || !matches!(run.config, SolverConfig::Qaoa { .. } | SolverConfig::Vqe { .. }) {
            None
        } else {
            let tp = trace_path(path);
            write_trace(&run, &tp)?;
            Some(tp.display().to_string())
        };
        let json = serde_json::to_string_pretty(&RunReport::new(&run, trace_file))?;
        write_atomic(path, format!("{json}\n").as_bytes())?;
    }
    Ok(run.report.verdict.is_sat())
}

/// Exit-code wrapper around [`verify`].
pub fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> u8 {
    match verify(args, out) {
        Ok(true) => exit::FLAW,
        Ok(false) => exit::NO_FLAW,
        Err(e) => {
            if let Some(FrontendError::CheckerUnavailable(exe)) = e.downcast_ref::<FrontendError>() {
                eprintln!("skipped: model checker `{exe}` is not available (set QVERIFY_CHECKER or install it)");
                return exit::CHECKER_UNAVAILABLE;
            }
            eprintln!("error: {e:#}");
            exit::ERROR
        }
    }
}
