pub mod attnmask;
pub mod mask;
pub mod pipeline;
pub mod project;

use anyhow::Result;

/// Print a machine-readable report to stdout.
pub fn emit_report<T: serde::Serialize>(report: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(())
}
