//! Run manifest: flat key=value text naming every output of a command.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

pub struct Manifest {
    command: String,
    config_hash: Option<String>,
    seed: Option<u64>,
    outputs: Vec<PathBuf>,
    extra: Vec<(String, String)>,
    started: Instant,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            config_hash: None,
            seed: None,
            outputs: Vec::new(),
            extra: Vec::new(),
            started: Instant::now(),
        }
    }

    /// Hash of the configuration text; stable across platforms for
    /// identical bytes.
    pub fn set_config_text(&mut self, text: &str) {
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        self.config_hash = Some(hex_string(&h.finalize()));
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn add_field(&mut self, key: &str, value: impl ToString) {
        self.extra.push((key.to_string(), value.to_string()));
    }

    /// Write `manifest.txt` into `dir` and return its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, String> {
        let mut body = String::new();
        let _ = writeln!(body, "command={}", self.command);
        let _ = writeln!(body, "version={}", env!("CARGO_PKG_VERSION"));
        if let Some(h) = &self.config_hash {
            let _ = writeln!(body, "config_hash={h}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(body, "seed={s}");
        }
        for (k, v) in &self.extra {
            let _ = writeln!(body, "{k}={v}");
        }
        for (i, p) in self.outputs.iter().enumerate() {
            let _ = writeln!(body, "output_{i}={}", p.display());
        }
        let _ = writeln!(body, "wall_time_s={}", self.started.elapsed().as_secs_f64());
        let path = dir.join("manifest.txt");
        std::fs::write(&path, body).map_err(|e| format!("cannot write manifest: {e}"))?;
        Ok(path)
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}
