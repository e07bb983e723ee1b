use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use convlab::lab::Convention;
use convlab::VerdictRule;
use serde::Deserialize;

/// Optional run parameters read from a TOML file. Command-line flags win over
/// the file, the file wins over built-in defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub degree: Option<u32>,
    pub backend: Option<BackendKind>,
    pub precision: Option<usize>,
    pub curve: Option<String>,
    pub series: Option<PathBuf>,
    pub grid: Option<String>,
    pub samples: Option<Vec<String>>,
    pub targets: Option<Vec<String>>,
    pub sequence: Option<Vec<String>>,
    pub count: Option<u32>,
    pub convention: Option<Convention>,
    pub set: Option<String>,
    pub h: Option<f64>,
    pub rungs: Option<Vec<usize>>,
    /// Cutting-plane budget of each Chebyshev solve.
    pub minimax_rounds: Option<usize>,
    pub minimax_tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub profile_out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub cases: Option<u32>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub rule: VerdictRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Rational,
    Float,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Rejects runs whose output would overwrite one of their inputs.
pub fn check_distinct(out: Option<&Path>, inputs: &[Option<&Path>]) -> Result<()> {
    let Some(out) = out else { return Ok(()) };
    let key = |p: &Path| std::fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf());
    for input in inputs.iter().flatten() {
        if key(out) == key(input) {
            bail!(convlab::Error::Precondition(format!(
                "output {} would overwrite an input",
                out.display()
            )));
        }
    }
    Ok(())
}
