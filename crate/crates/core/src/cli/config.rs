//! Flat TOML experiment manifests. Keys mirror the long flags (`x_max` for
//! `--x-max`); a flag given on the command line wins over the file.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub surface: Option<String>,
    /// `key=value` pairs, as for `--param`.
    pub param: Option<Vec<String>>,
    #[serde(rename = "C")]
    pub c_field: Option<String>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub family: Option<String>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub c: Option<f64>,
    pub branch: Option<String>,
    pub x_max: Option<f64>,
    pub curve_out: Option<PathBuf>,
    pub suite: Option<String>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
