//! Run configuration: one JSON document, or the equivalent command-line
//! flags, with flags taking precedence field by field.
//!
//! Every artifact embeds the resolved configuration, so a run can be
//! repeated from its own output.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use pekar1d::SolveOptions;

use crate::Failure;

/// Which effective model a ladder minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Self-interaction kernel plus the averaged Coulomb well.
    Polaron,
    /// Averaged Coulomb well only.
    Hydrogenic,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Polaron => write!(f, "polaron"),
            ModelKind::Hydrogenic => write!(f, "hydrogenic"),
        }
    }
}

/// Which artifact kinds a command writes, where both exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

/// Uniform sampling grid request.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: f64,
    pub n: usize,
}

/// One run, fully described. Unknown keys are rejected so that a typo in a
/// config file fails loudly instead of silently running defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    /// Field value for `potential`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<f64>,
    /// Field ladder for `ladder`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    /// Window half-widths L for the `potential` footer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows: Option<Vec<f64>>,
    /// Point masses (location, weight) of the perturbing potential W.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<(f64, f64)>>,
    /// Allow `solve` to run the alpha = 0 point-well model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_well: Option<bool>,
    /// Restrict `verify` to the sub-second subset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quick: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_grad: Option<f64>,
    /// Base path of the artifacts; the command name when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    /// Parse a config file; serde diagnostics name the offending key.
    pub fn from_file(path: &Path) -> Result<RunConfig, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("bad config {}: {e}", path.display())))
    }

    /// Solver options with any configured overrides applied.
    pub fn solve_options(&self) -> SolveOptions {
        let mut opts = SolveOptions::default();
        if let Some(m) = self.max_iter {
            opts.max_iter = m;
        }
        if let Some(t) = self.tol_energy {
            opts.tol_energy = t;
        }
        if let Some(t) = self.tol_grad {
            opts.tol_grad = t;
        }
        opts
    }

    /// Model parameters, defaulting to alpha = beta = 1.
    pub fn params(&self) -> (f64, f64) {
        (self.alpha.unwrap_or(1.0), self.beta.unwrap_or(1.0))
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or(OutputFormat::Both)
    }

    /// Artifact base path: configured, or the command name.
    pub fn output_base(&self, command: &str) -> String {
        self.output.clone().unwrap_or_else(|| command.to_string())
    }
}
