use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qverify_core::solvers::{OptimizerKind, OptimizerSpec, SolverConfig};
use qverify_core::RunSeed;

#[derive(Parser, Debug)]
#[command(name = "qverify", version, about = "Decide reachability of software errors with simulated quantum solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one instance through reduction and a solver.
    Verify(VerifyArgs),
    /// Run an experiment grid and write CSV data.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    Brute,
    Qaoa,
    Vqe,
    Grover,
    Qsvt,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Brute => "brute",
            SolverKind::Qaoa => "qaoa",
            SolverKind::Vqe => "vqe",
            SolverKind::Grover => "grover",
            SolverKind::Qsvt => "qsvt",
        }
    }

    pub fn uses_optimizer(self) -> bool {
        matches!(self, SolverKind::Qaoa | SolverKind::Vqe)
    }
}

/// Settings shared by `verify` and `sweep`.
#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Measurement shots for the final sampling (per schedule point for Grover).
    #[arg(long, default_value_t = 1024)]
    pub shots: usize,
    /// QAOA layers p, or ansatz layers for VQE.
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    /// Half degree d of the filter polynomial (degree 2d); chosen from the gap when absent.
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
    /// Root seed for all randomness.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Exhaustive budget in variables for the oracle cross-check, exact gaps
    /// and brute force.
    #[arg(long, default_value_t = 20)]
    pub oracle_budget: usize,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl SolverArgs {
    pub fn config(&self, solver: SolverKind, optimizer: OptimizerKind, seed: u64) -> SolverConfig {
        let seed = RunSeed(seed);
        let optimizer = OptimizerSpec::new(optimizer, self.max_iterations);
        match solver {
            SolverKind::Brute => SolverConfig::Brute { budget: self.oracle_budget },
            SolverKind::Qaoa => SolverConfig::Qaoa { layers: self.layers, optimizer, shots: self.shots, seed },
            SolverKind::Vqe => SolverConfig::Vqe { layers: self.layers, optimizer, shots: self.shots, seed },
            SolverKind::Grover => SolverConfig::Grover { shots: self.shots, seed },
            SolverKind::Qsvt => SolverConfig::Qsvt { d: self.degree, shots: self.shots, seed },
        }
    }
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("input").required(true).args(["source", "dimacs", "synthetic"])))]
pub struct VerifyArgs {
    /// C source file handed to the bounded model checker.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// DIMACS CNF file.
    #[arg(long)]
    pub dimacs: Option<PathBuf>,
    /// Synthetic instance, `name[:param]` (e.g. `unique`, `xor:3`, `addition:1`).
    #[arg(long)]
    pub synthetic: Option<String>,
    /// Property to check (repeatable); all properties when omitted.
    #[arg(long = "check", value_name = "CHECK")]
    pub checks: Vec<String>,
    /// Loop unwinding depth for the model checker.
    #[arg(long, default_value_t = 1)]
    pub unwind: u32,
    /// TOML table mapping check names to checker flags.
    #[arg(long)]
    pub checker_flags: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SolverKind::Brute)]
    pub solver: SolverKind,
    /// spsa or trust-region.
    #[arg(long, default_value = "trust-region")]
    pub optimizer: OptimizerKind,
    #[command(flatten)]
    pub common: SolverArgs,
    /// JSON solver configuration; replaces the solver flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Comma-separated synthetic instances.
    #[arg(long, value_delimiter = ',', default_value = "addition")]
    pub instances: Vec<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "qaoa,vqe")]
    pub solvers: Vec<SolverKind>,
    #[arg(long, value_delimiter = ',', default_value = "spsa,trust-region")]
    pub optimizers: Vec<OptimizerKind>,
    /// Number of seeds per grid point: `seed, seed + 1, …`.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    /// Skip the solver grid (heatmap only).
    #[arg(long)]
    pub no_grid: bool,
    /// Half degrees for heatmap.csv, e.g. `1..60` (inclusive) or `1,2,8`.
    #[arg(long)]
    pub heatmap_degrees: Option<String>,
    /// Gap denominators k (gap 1/k) for heatmap.csv.
    #[arg(long, default_value = "2..20")]
    pub heatmap_gaps: String,
    #[command(flatten)]
    pub common: SolverArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// `a..b` (inclusive) or a comma-separated list of integers.
pub fn parse_range(text: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("malformed range `{text}` (expected `a..b` or `a,b,c`)");
    let values: Vec<u32> = if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if values.is_empty() || values.contains(&0) {
        return Err(bad());
    }
    Ok(values)
}
