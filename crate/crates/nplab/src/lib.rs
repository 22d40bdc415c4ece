//! Library side of the `nplab` command line: the NPLC cache file format,
//! scan rows with CSV/JSON serialization, grids, and the scan runner.

pub mod grid;
pub mod nplc;
pub mod report;
pub mod rows;
pub mod runner;

/// Exit codes: 0 ok, 1 bound violated through range end (a signal, not an
/// error), 2 tool/input/format error, 3 tolerance budget unmeetable.
pub mod exit_codes {
    pub const OK: u8 = 0;
    pub const VIOLATIONS_PERSIST: u8 = 1;
    pub const TOOL_ERROR: u8 = 2;
    pub const BUDGET: u8 = 3;
}

/// Map an error to the exit-code contract.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(core_err) = err.downcast_ref::<nplab_core::Error>() {
        match core_err {
            nplab_core::Error::CacheBudget { .. }
            | nplab_core::Error::TailBudget { .. }
            | nplab_core::Error::QuadratureBudget { .. } => exit_codes::BUDGET,
            _ => exit_codes::TOOL_ERROR,
        }
    } else {
        exit_codes::TOOL_ERROR
    }
}
