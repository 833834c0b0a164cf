use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use kickmix_core::{ModelParams, SpectralSeries};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Collapse, Experiment};
use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the run directory.
    pub path: String,
    pub experiment: Experiment,
    /// Model the file was computed from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ModelParams>,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputManifest {
    pub experiment: Experiment,
    pub files: Vec<ManifestEntry>,
}

/// Writes run outputs and records each of them for the manifest.
pub struct RunWriter {
    dir: PathBuf,
    experiment: Experiment,
    files: Vec<ManifestEntry>,
}

impl RunWriter {
    pub fn create(dir: &Path, experiment: Experiment) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), experiment, files: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn put(&mut self, name: &str, body: &[u8], params: Option<&ModelParams>) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        self.files.push(ManifestEntry {
            path: name.to_string(),
            experiment: self.experiment,
            params: params.cloned(),
            sha256: sha256_hex(body),
        });
        Ok(path)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T, params: Option<&ModelParams>) -> Result<PathBuf, CliError> {
        let mut body = serde_json::to_string_pretty(value).expect("output types serialize");
        body.push('\n');
        self.put(name, body.as_bytes(), params)
    }

    pub fn csv(&mut self, name: &str, body: &str, params: Option<&ModelParams>) -> Result<PathBuf, CliError> {
        self.put(name, body.as_bytes(), params)
    }

    /// Writes a series as CSV, see [`series_csv`].
    pub fn series(
        &mut self,
        name: &str,
        series: &SpectralSeries,
        collapse: Option<(Collapse, usize)>,
        params: Option<&ModelParams>,
    ) -> Result<PathBuf, CliError> {
        let body = series_csv(series, collapse)?;
        self.csv(name, &body, params)
    }

    /// Writes the manifest. Nothing may be written after this.
    pub fn finish(self) -> Result<OutputManifest, CliError> {
        let manifest = OutputManifest { experiment: self.experiment, files: self.files };
        let path = self.dir.join(MANIFEST_NAME);
        let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        body.push('\n');
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        Ok(manifest)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// `t,K,K_over_2t` and, with a collapse at chain length `L`, the scaled
/// columns `t_scaled,K_scaled`.
pub fn series_csv(series: &SpectralSeries, collapse: Option<(Collapse, usize)>) -> Result<String, CliError> {
    if series.is_empty() {
        return Err(kickmix_core::Error::InvalidParams("cannot emit an empty series".into()).into());
    }
    let scale = collapse.map(|(c, l)| c.scale(l));
    let mut out = String::from("t,K,K_over_2t");
    if scale.is_some() {
        out.push_str(",t_scaled,K_scaled");
    }
    out.push('\n');
    for (&t, (&k, r)) in series.t_grid.iter().zip(series.k.iter().zip(series.k_over_2t())) {
        let _ = write!(out, "{t},{k:.16e},{r:.16e}");
        if let Some(s) = scale {
            let _ = write!(out, ",{:.16e},{:.16e}", t as f64 / s, k / s);
        }
        out.push('\n');
    }
    Ok(out)
}
