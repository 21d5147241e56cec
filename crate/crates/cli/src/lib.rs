//! Experiment runner for the crossnorm verification suites.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{Args, Suite, SuiteConfig};
pub use report::Report;

/// Exit status when a proved statement is certifiably violated.
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Sizes the global worker pool from `CROSSNORM_THREADS`, if set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CROSSNORM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("CROSSNORM_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}
