//! Flat `key = value` run files. Keys mirror the long flag names with
//! dashes replaced by underscores; flags given on the command line win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub g: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub delta_c: Option<f64>,
    pub delta_0: Option<f64>,
    pub mode: Option<String>,
    #[serde(rename = "F")]
    pub fidelities: Option<Vec<f64>>,
    pub rounds: Option<usize>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    pub amplitudes: Option<Vec<f64>>,
    pub circuit: Option<bool>,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
