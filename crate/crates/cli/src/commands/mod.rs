//! The subcommands. Each returns an [`Outcome`](crate::output::Outcome)
//! and leaves persistence to the caller.

mod hardy;
mod simulate;
mod theorem;
mod witness;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use semilab::asymptotics::{fit_rate, NormSamples, RateFamily};
use semilab::LabError;

pub use hardy::hardy;
pub use simulate::simulate;
pub use theorem::theorem_check;
pub use witness::{witness, DEFAULT_TIMES};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{RunReport, Verdict};

/// Flags shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub max_dim: Option<usize>,
    /// Record wall-clock timings; off for byte-identical reruns.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            out: None,
            seed: 42,
            max_dim: None,
            timings: true,
        }
    }
}

pub(crate) struct Stopwatch {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, f64>,
}

impl Stopwatch {
    pub(crate) fn new(enabled: bool) -> Self {
        Self {
            enabled,
            last: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    pub(crate) fn lap(&mut self, name: &str) {
        let now = Instant::now();
        if self.enabled {
            self.laps.insert(name.to_string(), (now - self.last).as_secs_f64());
        }
        self.last = now;
    }

    pub(crate) fn finish(self) -> BTreeMap<String, f64> {
        self.laps
    }
}

pub(crate) fn config_json(cfg: &ExperimentConfig) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(cfg).map_err(|e| CliError::Serialize(e.to_string()))
}

/// Fits `samples` and stores the fit under `name`; a window with too few
/// samples yields `None` and a SKIPPED verdict under `check`.
pub(crate) fn record_fit(
    report: &mut RunReport,
    name: &str,
    check: &str,
    samples: &NormSamples<f64>,
    family: RateFamily,
    window: Option<(f64, f64)>,
) -> Result<Option<semilab::RateFit64>, CliError> {
    match fit_rate(samples, family, window) {
        Ok(fit) => {
            report.fits.insert(name.to_string(), fit);
            Ok(Some(fit))
        }
        Err(e @ LabError::InsufficientSamples { .. }) => {
            report.verdict(check, Verdict::Skipped(e.to_string()), "");
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub(crate) fn within(v: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&v)
}
