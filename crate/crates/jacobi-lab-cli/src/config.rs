use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Eval,
    Gram,
    Kernel,
    Atom,
    Sharpness,
    L1,
    Asympt,
    Exponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Every experiment option. A config file supplies a base layer that
/// command-line flags override field by field.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Command to run when none is given on the command line.
    #[arg(skip)]
    pub command: Option<CommandName>,

    /// Basis family: trig-polynomial, trig-function, sym-trig-polynomial, sym-trig-function, q-polynomial.
    #[arg(long, global = true)]
    pub family: Option<String>,

    /// Command-specific mode (sharpness setting, L¹ setting, kernel mode, atom kind, exponent setting).
    #[arg(long, global = true)]
    pub setting: Option<String>,

    /// Asymptotic formula: hilb, derivative, darboux, darboux-function.
    #[arg(long, global = true)]
    pub formula: Option<String>,

    /// α per axis.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,

    /// β per axis.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta: Option<Vec<f64>>,

    /// Dimension, where it cannot be read off α and β.
    #[arg(long, global = true)]
    pub d: Option<usize>,

    /// Largest degree, matrix size or atom K.
    #[arg(long, global = true)]
    pub k_max: Option<usize>,

    /// Coefficient cutoff for `atom`.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,

    #[arg(long, global = true, value_delimiter = ',')]
    pub k_grid: Option<Vec<usize>>,

    #[arg(long, global = true, value_delimiter = ',')]
    pub r_grid: Option<Vec<f64>>,

    #[arg(long, global = true, value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,

    #[arg(long, global = true, value_delimiter = ',')]
    pub theta_grid: Option<Vec<f64>>,

    /// Second kernel argument per axis.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Option<Vec<f64>>,

    /// Abel parameter of a kernel slice.
    #[arg(long, global = true)]
    pub r: Option<f64>,

    /// Poisson time of a kernel slice.
    #[arg(long, global = true)]
    pub t: Option<f64>,

    /// Derivative order j of the kernel comparand.
    #[arg(long, global = true)]
    pub j: Option<u32>,

    #[arg(long, global = true)]
    pub epsilon: Option<f64>,

    #[arg(long, global = true)]
    pub delta: Option<f64>,

    #[arg(long, global = true)]
    pub c: Option<f64>,

    /// L^q exponent for (1,q)-atom validation.
    #[arg(long, global = true)]
    pub q: Option<f64>,

    /// Use the θ-derivative of the kernel in L² profiles.
    #[arg(long, global = true)]
    pub derivative: Option<bool>,

    /// Sum with the admissible exponent itself.
    #[arg(long, global = true)]
    pub critical: Option<bool>,

    /// Relative tolerance of quadratures.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Accuracy threshold of `gram` and upper bound on C for kernel ratios.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub min_slope: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub max_slope: Option<f64>,

    #[arg(long, global = true)]
    pub min_r_squared: Option<f64>,

    #[arg(long, global = true)]
    pub require_non_cauchy: Option<bool>,

    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// `self` with every field set in `flags` replaced.
    pub fn merged(mut self, flags: &ExperimentConfig) -> Self {
        overlay!(
            self, flags, command, family, setting, formula, alpha, beta, d, k_max, cutoff, k_grid, r_grid, t_grid,
            theta_grid, phi, r, t, j, epsilon, delta, c, q, derivative, critical, rel_tol, threshold, min_slope,
            max_slope, min_r_squared, require_non_cauchy, output, format
        );
        self
    }
}

/// Parses a kebab-case name into any enum that deserializes from one.
pub fn parse_name<T: DeserializeOwned>(field: &str, value: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(value.to_string()))
        .map_err(|_| CliError::Config(format!("unknown {field} '{value}'")))
}

pub fn required<T: Clone>(field: &str, value: &Option<T>) -> Result<T, CliError> {
    value.clone().ok_or_else(|| CliError::Config(format!("missing required option '{field}'")))
}
