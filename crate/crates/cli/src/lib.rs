//! Command-line front end: load an instance, reduce it, run a solver and
//! report; or run experiment grids and write CSV data.

pub mod args;
pub mod instance;
pub mod output;
pub mod pipeline;
pub mod report;
pub mod sweep;
pub mod verify;

use args::{Cli, Command};

/// Process exit codes.
pub mod exit {
    /// No flaw found within the solver's budget.
    pub const NO_FLAW: u8 = 0;
    /// Flaw found; a verified witness was printed.
    pub const FLAW: u8 = 1;
    pub const ERROR: u8 = 2;
    /// The external model checker is not installed.
    pub const CHECKER_UNAVAILABLE: u8 = 77;
}

pub fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Verify(a) => verify::cmd_verify(&a, &mut std::io::stdout().lock()),
        Command::Sweep(a) => match sweep::cmd_sweep(&a) {
            Ok(summary) => {
                for path in &summary.files {
                    println!("wrote {}", path.display());
                }
                exit::NO_FLAW
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                exit::ERROR
            }
        },
    }
}

/// Run `f` on a pool of `jobs` threads (all cores when `None`).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = jobs {
            builder = builder.num_threads(j.max(1));
        }
        Ok(builder.build()?.install(f))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        Ok(f())
    }
}
