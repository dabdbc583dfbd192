//! Artifact helpers: config hashing and the output conventions shared by
//! all subcommands — JSON artifacts carry `{config_hash, results}` at the
//! top level, CSV artifacts start with a `# {"config_hash": ...}` line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// FNV-1a over the raw config bytes, printed as 16 hex digits.
pub fn config_hash(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

pub struct ArtifactWriter {
    out_dir: PathBuf,
    hash: String,
    pub written: Vec<String>,
}

impl ArtifactWriter {
    pub fn new(out_dir: &Path, hash: String) -> std::io::Result<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(ArtifactWriter {
            out_dir: out_dir.to_path_buf(),
            hash,
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// CSV artifact: config-hash metadata line, then whatever `body` emits.
    pub fn write_csv(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> std::io::Result<PathBuf> {
        let mut buf = Vec::new();
        writeln!(buf, "# {{\"config_hash\":\"{}\"}}", self.hash)?;
        body(&mut buf)?;
        let path = self.path(name);
        fs::write(&path, buf)?;
        self.written.push(name.to_string());
        Ok(path)
    }

    /// JSON artifact with the standard top level.
    pub fn write_json(
        &mut self,
        name: &str,
        results: serde_json::Value,
    ) -> std::io::Result<PathBuf> {
        let doc = serde_json::json!({
            "config_hash": self.hash,
            "results": results,
        });
        let path = self.path(name);
        fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
        self.written.push(name.to_string());
        Ok(path)
    }

    /// Raw artifact (e.g. JSON lines) with the hash carried in a sidecar
    /// manifest rather than inline.
    pub fn write_raw(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> std::io::Result<PathBuf> {
        let mut buf = Vec::new();
        body(&mut buf)?;
        let path = self.path(name);
        fs::write(&path, buf)?;
        self.written.push(name.to_string());
        Ok(path)
    }

    /// Run manifest listing every artifact with the config hash.
    pub fn finish(mut self, experiment: &str) -> std::io::Result<()> {
        let artifacts = std::mem::take(&mut self.written);
        let doc = serde_json::json!({
            "config_hash": self.hash,
            "results": {
                "experiment": experiment,
                "artifacts": artifacts,
            }
        });
        fs::write(
            self.path("run.json"),
            format!("{}\n", serde_json::to_string_pretty(&doc)?),
        )
    }
}
