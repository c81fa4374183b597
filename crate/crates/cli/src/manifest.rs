//! Run manifest: what was run, on which inputs, with which parameters.
//! Nothing time- or host-dependent goes in, so equal manifests mean equal
//! outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Default)]
pub struct Manifest {
    command: String,
    inputs: Vec<(PathBuf, String)>,
    params: Vec<(String, String)>,
    outputs: Vec<PathBuf>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest { command: command.to_string(), ..Default::default() }
    }

    /// Reads an input file, recording its digest.
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let digest = Sha256::digest(text.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        self.inputs.push((path.to_path_buf(), hex));
        Ok(text)
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn render(&self) -> String {
        let mut s = format!("# manifest\ncommand={}\n", self.command);
        for (p, d) in &self.inputs {
            let _ = writeln!(s, "input={} sha256={d}", p.display());
        }
        for (k, v) in &self.params {
            let _ = writeln!(s, "{k}={v}");
        }
        for p in &self.outputs {
            let _ = writeln!(s, "output={}", p.display());
        }
        s
    }
}
