//! Report envelope and output helpers.
//!
//! Every report embeds the config digest, the effective seed, and the
//! tool version; nothing time- or host-dependent goes in, so rerunning a
//! config byte-reproduces its outputs.

use serde::Serialize;
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_digest: String,
    pub seed: u64,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(config_digest: String, seed: u64, report: T) -> Self {
        Self {
            tool: "mitiq-forge",
            version: env!("CARGO_PKG_VERSION"),
            config_digest,
            seed,
            report,
        }
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Writes CSV text built from a header and row formatter.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> anyhow::Result<()> {
    let mut out = String::with_capacity(header.len() + rows.iter().map(|r| r.len() + 1).sum::<usize>() + 1);
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
