use serde::Serialize;

use qverify_core::{format_assignment, GapInfo, Provenance, SolverConfig};

use crate::pipeline::PipelineRun;

/// JSON report of one `verify` run.
#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub instance: &'a str,
    pub provenance: &'a Provenance,
    pub n_cnf_vars: u32,
    pub n_qubo_vars: usize,
    pub n_aux: usize,
    pub gap: &'a GapInfo,
    pub solver: &'static str,
    pub config: &'a SolverConfig,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_file: Option<String>,
    pub seed: Option<u64>,
    pub duration_ms: u64,
}

impl<'a> RunReport<'a> {
    pub fn new(run: &'a PipelineRun, trace_file: Option<String>) -> Self {
        let p = &run.problem;
        let width = p.formula.num_variables() as usize;
        RunReport {
            instance: &run.instance,
            provenance: p.formula.provenance(),
            n_cnf_vars: p.formula.num_variables(),
            n_qubo_vars: p.qubo.n(),
            n_aux: p.qubo.num_auxiliary(),
            gap: &p.gap,
            solver: run.config.name(),
            config: &run.config,
            verdict: run.report.verdict.label(),
            witness: run.report.verdict.witness().map(|w| format_assignment(w, width)),
            rate: run.report.qsvt.as_ref().map(|q| q.rate),
            trace_file,
            seed: run.report.seed.map(|s| s.0),
            duration_ms: run.duration.as_millis() as u64,
        }
    }
}
