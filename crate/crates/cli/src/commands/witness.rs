use semilab::asymptotics::witness_lower_bound;
use semilab::{Model64, ModelSpec};

use super::{RunOptions, Stopwatch};
use crate::error::CliError;
use crate::output::{Outcome, Table};
use crate::report::{RunReport, Verdict};

pub const WITNESS_HEADER: [&str; 3] = ["t", "raw_ratio", "normalized"];
pub const DEFAULT_TIMES: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

/// Largest accepted `M0 / m0` for the normalized witness values.
const BRACKET_LIMIT: f64 = 5.0;

/// Evaluates the tent-vector bound on the first-order log-spectrum model at
/// each time. `dim` defaults to `ceil(8 max t)`.
pub fn witness(times: &[f64], dim: Option<usize>, tol: f64, opts: &RunOptions) -> Result<Outcome, CliError> {
    if times.is_empty() {
        return Err(CliError::Usage("at least one time is required".into()));
    }
    let mut ts = times.to_vec();
    ts.sort_by(f64::total_cmp);
    let t_max = ts[ts.len() - 1];
    let dim = dim.unwrap_or((8.0 * t_max).ceil() as usize);
    if let Some(cap) = opts.max_dim {
        if dim > cap {
            return Err(CliError::DimensionCap {
                t_max,
                required: (8.0 * t_max).ceil() as usize + 1,
                required_dim: (8.0 * t_max).ceil() as usize,
                cap,
            });
        }
    }
    let mut clock = Stopwatch::new(opts.timings);
    let model = Model64::build(ModelSpec::log_spectrum(1, dim + 1))?;
    let bounds = ts
        .iter()
        .map(|&t| witness_lower_bound(&model, t, tol))
        .collect::<Result<Vec<_>, _>>()?;
    clock.lap("witness");

    let config = serde_json::json!({ "t": ts, "dim": dim, "norm_tol": tol });
    let mut report = RunReport::new("witness", config, opts.seed);
    report.samples.insert("raw_ratio".into(), bounds.iter().map(|b| (b.t, b.raw)).collect());
    report
        .samples
        .insert("normalized".into(), bounds.iter().map(|b| (b.t, b.normalized)).collect());
    report.details = serde_json::to_value(&bounds).map_err(|e| CliError::Serialize(e.to_string()))?;

    let lo = bounds.iter().map(|b| b.normalized).fold(f64::INFINITY, f64::min);
    let hi = bounds.iter().map(|b| b.normalized).fold(0.0, f64::max);
    report.verdict(
        "witness_bracket",
        Verdict::from_bool(lo > 0.0 && hi / lo <= BRACKET_LIMIT),
        format!("raw * log t / t in [{lo:.4}, {hi:.4}], ratio {:.4} (limit {BRACKET_LIMIT})", hi / lo),
    );

    let integral: Vec<_> = bounds.iter().filter(|b| (2.0 * b.t).fract() == 0.0).collect();
    if integral.is_empty() {
        report.verdict("witness_norm", Verdict::Skipped("no t with integer 2t".into()), "");
    } else {
        let worst = integral
            .iter()
            .map(|b| (b.witness_norm_sq - (4.0 * b.t + 2.0)).abs())
            .fold(0.0, f64::max);
        report.verdict(
            "witness_norm",
            Verdict::from_bool(worst <= 1e-9 * (4.0 * t_max + 2.0)),
            format!("|x|^2 = 4t + 2 at integer 2t, largest deviation {worst:.3e}"),
        );
    }

    let below = bounds.iter().all(|b| b.raw <= b.operator_norm * (1.0 + 10.0 * tol));
    report.verdict(
        "witness_below_operator_norm",
        Verdict::from_bool(below),
        "raw ratio never exceeds ||T(t) A^-1||",
    );
    if bounds.len() < 2 {
        report.verdict("witness_increasing", Verdict::Skipped("single time".into()), "");
    } else {
        let increasing = bounds.windows(2).all(|w| w[1].raw > w[0].raw);
        report.verdict(
            "witness_increasing",
            Verdict::from_bool(increasing),
            "raw ratio increases with t",
        );
    }
    report.timings = clock.finish();

    let mut table = Table::new("witness.csv", &WITNESS_HEADER);
    for b in &bounds {
        table.push(&[b.t, b.raw, b.normalized]);
    }
    Ok(Outcome {
        report,
        tables: vec![table],
    })
}
