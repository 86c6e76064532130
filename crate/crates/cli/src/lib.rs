//! Command-line driver: argument parsing, report files, mesh export, and
//! the randomized property suites behind `verify`.

pub mod commands;
pub mod report;
pub mod suites;

pub use commands::{run, Outcome, RunConfig};

/// Caps the global rayon pool at `REIFENBERG_THREADS` when it is set.
pub fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("REIFENBERG_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("REIFENBERG_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()?;
    }
    Ok(())
}
