//! Run reports and their rendering.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use semilab::asymptotics::{Envelope, RateFit, TranslationCheck};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Self::Fail)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pass => f.write_str("PASS"),
            Self::Fail => f.write_str("FAIL"),
            Self::Skipped(reason) => write!(f, "SKIPPED({reason})"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PASS" => Ok(Self::Pass),
            "FAIL" => Ok(Self::Fail),
            _ => s
                .strip_prefix("SKIPPED(")
                .and_then(|r| r.strip_suffix(')'))
                .map(|r| Self::Skipped(r.to_string()))
                .ok_or_else(|| format!("unknown verdict {s:?}")),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    pub fn new(verdict: Verdict, detail: impl Into<String>) -> Self {
        Self {
            verdict,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSummary {
    /// `(t, log f(t))`
    pub knots: Vec<(f64, f64)>,
    pub a_estimate: f64,
    pub max_second_divided_difference: f64,
    pub max_excess: f64,
    pub translation_shift: f64,
    /// `(s, f(shift + s) / f(s))`
    pub translation: Vec<(f64, f64)>,
}

impl EnvelopeSummary {
    pub fn new(env: &Envelope<f64>, samples: &[(f64, f64)], shift: f64, translation: &TranslationCheck<f64>) -> Self {
        Self {
            knots: env.knots.clone(),
            a_estimate: env.a_estimate,
            max_second_divided_difference: env.max_second_divided_difference(),
            max_excess: env.max_excess(samples),
            translation_shift: shift,
            translation: translation.curve.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSummary {
    pub eigenvalue: (f64, f64),
    pub center: (f64, f64),
    pub radius: f64,
    pub nodes: usize,
    pub rank: usize,
    pub trace: (f64, f64),
    pub idempotency_defect: f64,
    pub commutation_defect: f64,
    pub refinement_change: f64,
    /// `(t, ||T(t) P|| / f(t))`
    pub decay: Vec<(f64, f64)>,
    pub decay_slope: Option<f64>,
    pub decaying: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Echo of the inputs; re-running with it reproduces the report.
    pub config: serde_json::Value,
    pub config_hash: String,
    pub seed: u64,
    pub samples: BTreeMap<String, Vec<(f64, f64)>>,
    pub fits: BTreeMap<String, RateFit<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<EnvelopeSummary>,
    pub projections: Vec<ProjectionSummary>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    pub verdicts: BTreeMap<String, Check>,
    /// Wall-clock seconds per phase.
    pub timings: BTreeMap<String, f64>,
    pub version: String,
}

impl RunReport {
    pub fn new(command: &str, config: serde_json::Value, seed: u64) -> Self {
        let config_hash = hex::encode(Sha256::digest(config.to_string().as_bytes()));
        Self {
            command: command.to_string(),
            config,
            config_hash,
            seed,
            samples: BTreeMap::new(),
            fits: BTreeMap::new(),
            envelope: None,
            projections: Vec::new(),
            details: serde_json::Value::Null,
            verdicts: BTreeMap::new(),
            timings: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn verdict(&mut self, name: &str, verdict: Verdict, detail: impl Into<String>) {
        self.verdicts.insert(name.to_string(), Check::new(verdict, detail));
    }

    pub fn failures(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, c)| c.verdict.is_fail())
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// 0 when every verdict passed or was skipped, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        u8::from(!self.failures().is_empty())
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Serialize(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::MalformedReport {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Human-readable table of verdicts and fitted constants.
    pub fn render(&self) -> String {
        let mut out = format!("{} (version {}, config {})\n", self.command, self.version, &self.config_hash[..12]);
        if !self.fits.is_empty() {
            out.push_str("\nfits\n");
            let width = self.fits.keys().map(String::len).max().unwrap_or(0);
            for (name, fit) in &self.fits {
                out.push_str(&format!(
                    "  {name:<width$}  {:?} coefficient {:.6} exponent {:.6} spread {:.4} trend {:+.4} on [{}, {}]\n",
                    fit.family, fit.coefficient, fit.exponent_or_scale, fit.spread, fit.trend_slope, fit.window.0, fit.window.1
                ));
            }
        }
        out.push_str("\nverdicts\n");
        let width = self.verdicts.keys().map(String::len).max().unwrap_or(0);
        for (name, check) in &self.verdicts {
            out.push_str(&format!("  {name:<width$}  {:<8} {}\n", check.verdict.to_string(), check.detail));
        }
        out
    }
}
