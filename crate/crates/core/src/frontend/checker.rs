use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::str::FromStr;

use super::{parse_dimacs, CnfFormula, FrontendError, Provenance};

/// Overrides [`CheckerConfig::checker_executable`] when set.
pub const CHECKER_ENV: &str = "QVERIFY_CHECKER";

const DEFAULT_FLAGS: &str = include_str!("checks.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Bounds,
    Overflow,
    DivByZero,
    Pointer,
    Conversion,
    Nan,
    MemoryLeak,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Bounds,
        Check::Overflow,
        Check::DivByZero,
        Check::Pointer,
        Check::Conversion,
        Check::Nan,
        Check::MemoryLeak,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Bounds => "bounds",
            Check::Overflow => "overflow",
            Check::DivByZero => "div-by-zero",
            Check::Pointer => "pointer",
            Check::Conversion => "conversion",
            Check::Nan => "nan",
            Check::MemoryLeak => "memory-leak",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = FrontendError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| FrontendError::InvalidConfig(format!("unknown check `{s}`")))
    }
}

/// Mapping from [`Check`] to checker command-line flags.
#[derive(Clone, Debug)]
pub struct FlagTable(BTreeMap<Check, Vec<String>>);

impl FlagTable {
    pub fn parse(text: &str) -> Result<Self, FrontendError> {
        let raw: BTreeMap<String, Vec<String>> =
            toml::from_str(text).map_err(|e| FrontendError::InvalidConfig(e.to_string()))?;
        let table = raw
            .into_iter()
            .map(|(k, v)| Ok((k.parse::<Check>()?, v)))
            .collect::<Result<BTreeMap<_, _>, FrontendError>>()?;
        Ok(FlagTable(table))
    }

    pub fn load(path: &Path) -> Result<Self, FrontendError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn flags(&self, check: Check) -> Result<&[String], FrontendError> {
        self.0
            .get(&check)
            .map(Vec::as_slice)
            .ok_or_else(|| FrontendError::InvalidConfig(format!("no flags configured for `{check}`")))
    }
}

impl Default for FlagTable {
    fn default() -> Self {
        FlagTable::parse(DEFAULT_FLAGS).expect("built-in flag table is valid")
    }
}

#[derive(Clone, Debug)]
pub struct CheckerConfig {
    pub source_path: PathBuf,
    pub checks: BTreeSet<Check>,
    pub unwind_depth: u32,
    pub checker_executable: PathBuf,
    pub flags: FlagTable,
}

impl CheckerConfig {
    pub fn new(source_path: impl Into<PathBuf>, checks: impl IntoIterator<Item = Check>) -> Self {
        CheckerConfig {
            source_path: source_path.into(),
            checks: checks.into_iter().collect(),
            unwind_depth: 1,
            checker_executable: PathBuf::from("cbmc"),
            flags: FlagTable::default(),
        }
    }

    /// Executable actually run: the environment override, else the
    /// configured path.
    pub fn executable(&self) -> PathBuf {
        std::env::var_os(CHECKER_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .unwrap_or_else(|| self.checker_executable.clone())
    }

    /// `<source> --dimacs <per-check flags> --unwind <k>`
    pub fn arguments(&self) -> Result<Vec<String>, FrontendError> {
        if self.checks.is_empty() {
            return Err(FrontendError::InvalidConfig("no checks selected".into()));
        }
        if self.unwind_depth == 0 {
            return Err(FrontendError::InvalidConfig("unwind depth must be at least 1".into()));
        }
        let mut args = vec![self.source_path.display().to_string(), "--dimacs".to_string()];
        for &check in &self.checks {
            args.extend(self.flags.flags(check)?.iter().cloned());
        }
        args.push("--unwind".into());
        args.push(self.unwind_depth.to_string());
        Ok(args)
    }
}

/// The DIMACS part of the checker's stdout: everything from the `p cnf`
/// header on. Status chatter printed before it is dropped.
fn extract_dimacs(stdout: &str) -> Option<&str> {
    let mut offset = 0;
    for line in stdout.split_inclusive('\n') {
        if line.trim_start().starts_with("p cnf") {
            return Some(&stdout[offset..]);
        }
        offset += line.len();
    }
    None
}

/// Run the external checker and parse the formula it emits. The result is
/// satisfiable exactly when a flagged error is reachable within the unwind
/// depth.
pub fn run_model_checker(config: &CheckerConfig) -> Result<CnfFormula, FrontendError> {
    let args = config.arguments()?;
    if !config.source_path.is_file() {
        return Err(FrontendError::InvalidConfig(format!(
            "source file {} does not exist",
            config.source_path.display()
        )));
    }
    let exe = config.executable();
    let output = Command::new(&exe).args(&args).output().map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound | std::io::ErrorKind::PermissionDenied => {
            FrontendError::CheckerUnavailable(exe.display().to_string())
        }
        _ => FrontendError::Io(e),
    })?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    match extract_dimacs(&stdout) {
        Some(text) => Ok(parse_dimacs(text)?.with_provenance(Provenance::ModelChecker)),
        None => Err(FrontendError::CheckerFailed {
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        }),
    }
}
