//! Digest-keyed disk cache under the output directory.
//!
//! Optimized circuits and measurement results are pure functions of their
//! provenance digest, so reruns skip straight to the report stage. The
//! layout is flat: `cache/circuits/<digest>.circuit` and
//! `cache/measurements/<digest>.json`.

use mitiq_forge_core::circuit::Circuit;
use std::path::{Path, PathBuf};

pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(out_dir: &Path) -> anyhow::Result<Self> {
        let root = out_dir.join("cache");
        std::fs::create_dir_all(root.join("circuits"))?;
        std::fs::create_dir_all(root.join("measurements"))?;
        Ok(Self { root })
    }

    pub fn load_circuit(&self, digest: &str) -> Option<Circuit> {
        let path = self.root.join("circuits").join(format!("{digest}.circuit"));
        let text = std::fs::read_to_string(path).ok()?;
        Circuit::from_text(&text).ok()
    }

    pub fn store_circuit(&self, digest: &str, circuit: &Circuit) -> anyhow::Result<()> {
        let path = self.root.join("circuits").join(format!("{digest}.circuit"));
        std::fs::write(path, circuit.to_text())?;
        Ok(())
    }

    pub fn load_measurement(&self, digest: &str) -> Option<(f64, f64)> {
        let path = self
            .root
            .join("measurements")
            .join(format!("{digest}.json"));
        let text = std::fs::read_to_string(path).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        Some((v.get("value")?.as_f64()?, v.get("sigma")?.as_f64()?))
    }

    pub fn store_measurement(&self, digest: &str, value: f64, sigma: f64) -> anyhow::Result<()> {
        let path = self
            .root
            .join("measurements")
            .join(format!("{digest}.json"));
        let body = serde_json::json!({ "value": value, "sigma": sigma });
        std::fs::write(path, serde_json::to_string(&body)?)?;
        Ok(())
    }
}
