//! Experiment configuration, read from TOML.
//!
//! ```toml
//! [model]
//! family = "LOG_SPECTRUM"   # DIAG_JORDAN | JORDAN_PAIRS | LOG_SPECTRUM
//! order = 1                 # difference order of the weighted norm
//! # max_index = 1601        # omitted: smallest adequate truncation
//! mu = [1.0, 0.0]           # resolvent point, [re, im]
//!
//! [time_grid]
//! t_min = 1.0
//! t_max = 200.0
//! points = 17
//! spacing = "GEOMETRIC"     # LINEAR | GEOMETRIC
//!
//! [contour]                 # optional overrides of the automatic circles
//! # radius = 0.1
//! # nodes = 64
//!
//! [tolerances]
//! norm_tol = 1e-10
//! proj_tol = 1e-8
//!
//! [theorem]
//! eigenvalues = 5
//! translation_shift = 1.0
//!
//! [fit]                     # optional window, defaults to t >= e^2
//! # t_min = 10.0
//! # t_max = 1000.0
//!
//! [output]
//! directory = "out"
//! formats = ["CSV", "JSON"]
//! ```

use std::path::{Path, PathBuf};

use semilab::asymptotics::TimeGrid;
use semilab::models::{check_truncation, required_max_index};
use semilab::{Complex64, Family, ModelSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub time_grid: TimeGrid,
    #[serde(default)]
    pub contour: ContourOverrides,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub theorem: TheoremConfig,
    #[serde(default)]
    pub fit: FitWindow,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: Family,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_index: Option<usize>,
    #[serde(default = "default_mu")]
    pub mu: Complex64,
}

fn default_order() -> u32 {
    1
}

fn default_mu() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub norm_tol: f64,
    pub proj_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm_tol: 1e-10,
            proj_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremConfig {
    /// How many eigenvalues on the imaginary axis to test, lowest first.
    pub eigenvalues: usize,
    /// Translation `t` in `f(t + s) / f(s)`.
    pub translation_shift: f64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        Self {
            eigenvalues: 5,
            translation_shift: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitWindow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
}

impl FitWindow {
    pub fn window(&self) -> Option<(f64, f64)> {
        match (self.t_min, self.t_max) {
            (None, None) => None,
            (lo, hi) => Some((
                lo.unwrap_or(std::f64::consts::E.powi(2)),
                hi.unwrap_or(f64::INFINITY),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

impl ExperimentConfig {
    /// Built-in experiment for a family: `[1, 1000]` for the block models and
    /// `[1, 200]` for the log-spectrum model, on `sqrt 2` geometric grids.
    pub fn default_for(family: Family, order: u32) -> Self {
        let t_max = match family {
            Family::LogSpectrum => 200.0,
            Family::DiagJordan | Family::JordanPairs => 1000.0,
        };
        Self {
            model: ModelConfig {
                family,
                order,
                max_index: None,
                mu: default_mu(),
            },
            time_grid: TimeGrid::geometric_sqrt2(1.0, t_max),
            contour: ContourOverrides::default(),
            tolerances: Tolerances::default(),
            theorem: TheoremConfig::default(),
            fit: FitWindow::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn to_toml_string(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Serialize(e.to_string()))
    }

    /// Checks the config and returns the model it describes. An omitted
    /// `max_index` becomes the smallest adequate one; `max_dim` caps the
    /// resulting dimension.
    pub fn resolve(&self, max_dim: Option<usize>) -> Result<ModelSpec, CliError> {
        let field = |name: &str, msg: String| CliError::Config {
            path: name.to_string(),
            message: msg,
        };
        self.time_grid
            .validate()
            .map_err(|e| field("time_grid", e.to_string()))?;
        let tol = self.tolerances;
        for (name, v) in [("tolerances.norm_tol", tol.norm_tol), ("tolerances.proj_tol", tol.proj_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(field(name, format!("must be positive, got {v}")));
            }
        }
        if let Some(r) = self.contour.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(field("contour.radius", format!("must be positive, got {r}")));
            }
        }
        if let Some(n) = self.contour.nodes {
            if n < 16 || !n.is_multiple_of(2) {
                return Err(field("contour.nodes", format!("must be even and at least 16, got {n}")));
            }
        }
        if self.theorem.eigenvalues == 0 {
            return Err(field("theorem.eigenvalues", "must be at least 1".into()));
        }
        if !(self.theorem.translation_shift.is_finite() && self.theorem.translation_shift > 0.0) {
            return Err(field("theorem.translation_shift", "must be positive".into()));
        }
        if let Some((lo, hi)) = self.fit.window() {
            if !(lo >= std::f64::consts::E) || !(hi >= lo) {
                return Err(field("fit", format!("window must satisfy e <= t_min <= t_max, got [{lo}, {hi}]")));
            }
        }
        if self.output.formats.is_empty() {
            return Err(field("output.formats", "at least one format is required".into()));
        }
        if !(self.model.mu.re.is_finite() && self.model.mu.im.is_finite()) {
            return Err(field("model.mu", "must be finite".into()));
        }

        let (family, order, t_max) = (self.model.family, self.model.order, self.time_grid.t_max);
        let required = required_max_index(family, order, t_max);
        let spec = ModelSpec {
            family,
            order,
            max_index: self.model.max_index.unwrap_or(required),
            mu_default: self.model.mu,
        };
        check_truncation(&spec, t_max)?;
        if let Some(cap) = max_dim {
            let required_dim = ModelSpec {
                max_index: required,
                ..spec
            }
            .dim();
            if required_dim > cap {
                return Err(CliError::DimensionCap {
                    t_max,
                    required,
                    required_dim,
                    cap,
                });
            }
            if spec.dim() > cap {
                return Err(CliError::Usage(format!(
                    "model.max_index = {} gives dim {} above the cap {cap}; the smallest adequate max_index is {required}",
                    spec.max_index,
                    spec.dim()
                )));
            }
        }
        Ok(spec)
    }
}
