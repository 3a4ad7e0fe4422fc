use std::path::Path;

use anyhow::Context;
use serde::Deserialize;

/// Defaults read from a TOML file. Keys are the long flag names; flags on
/// the command line take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub horizon: Option<usize>,
    pub exact: Option<bool>,
    pub mode: Option<String>,
    pub max_plans: Option<usize>,
    pub enum_cap: Option<usize>,
    pub state_cap: Option<usize>,
    pub jobs: Option<usize>,
    pub solver: Option<String>,
    pub pretty: Option<bool>,
    pub no_timing: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
