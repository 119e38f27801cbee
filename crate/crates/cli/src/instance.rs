use std::path::{Path, PathBuf};

use qverify_core::frontend::{
    parse_dimacs, run_model_checker, Check, CheckerConfig, FlagTable, FrontendError, Synthetic,
};
use qverify_core::CnfFormula;

/// Where an instance comes from.
#[derive(Clone, Debug)]
pub enum InstanceSource {
    Source { path: PathBuf, checks: Vec<Check>, unwind: u32, flags: Option<PathBuf> },
    Dimacs(PathBuf),
    Synthetic(Synthetic),
}

#[derive(Clone, Debug)]
pub struct Instance {
    /// Display name: synthetic spec or file path.
    pub name: String,
    pub formula: CnfFormula,
}

impl InstanceSource {
    pub fn name(&self) -> String {
        match self {
            InstanceSource::Source { path, .. } | InstanceSource::Dimacs(path) => path.display().to_string(),
            InstanceSource::Synthetic(s) => s.to_string(),
        }
    }

    pub fn load(&self) -> Result<Instance, FrontendError> {
        let formula = match self {
            InstanceSource::Source { path, checks, unwind, flags } => {
                let mut config = CheckerConfig::new(path, checks.iter().copied());
                if config.checks.is_empty() {
                    config.checks = Check::ALL.iter().copied().collect();
                }
                config.unwind_depth = *unwind;
                if let Some(f) = flags {
                    config.flags = FlagTable::load(f)?;
                }
                run_model_checker(&config)?
            }
            InstanceSource::Dimacs(path) => read_dimacs(path)?,
            InstanceSource::Synthetic(s) => s.generate()?,
        };
        Ok(Instance { name: self.name(), formula })
    }
}

fn read_dimacs(path: &Path) -> Result<CnfFormula, FrontendError> {
    parse_dimacs(&std::fs::read_to_string(path)?)
}
