//! Batch interpreter for session scripts: parsing, name resolution,
//! execution and deterministic reports.

pub mod report;
pub mod run;
pub mod session;
pub mod syntax;

use clalg::gb::DEFAULT_SPAIR_BUDGET;

pub use report::{exit_code, to_json, to_text, Report};
pub use syntax::{parse, Script, ScriptError};

pub const DEFAULT_EMAX: u32 = 4;

#[derive(Clone, Debug)]
pub struct Flags {
    /// Frobenius bound for tight closures that do not set their own.
    pub emax: u32,
    /// S-pair budget per command.
    pub budget: u64,
    /// Base seed for randomized instances.
    pub seed: u64,
    pub parallel: bool,
    /// Record wall-clock time per command (makes reports nondeterministic).
    pub timing: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            emax: DEFAULT_EMAX,
            budget: DEFAULT_SPAIR_BUDGET,
            seed: 0,
            parallel: false,
            timing: false,
        }
    }
}

/// Parses, compiles and runs a script.
pub fn run_script(text: &str, flags: &Flags) -> Result<Vec<Report>, ScriptError> {
    let script = parse(text)?;
    let session = session::compile(&script, flags)?;
    Ok(run::run(&session, flags))
}
