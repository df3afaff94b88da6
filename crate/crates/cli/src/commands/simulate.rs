use semilab::asymptotics::{sample_all, RateFamily, SampledCurves};
use semilab::{Family, Model64};

use super::{config_json, record_fit, within, RunOptions, Stopwatch};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{Outcome, Table};
use crate::report::{RunReport, Verdict};

pub const SAMPLES_HEADER: [&str; 4] = ["t", "semigroup_norm", "resolvent_product_norm", "ratio"];

pub(crate) fn store_samples(report: &mut RunReport, curves: &SampledCurves<f64>) {
    report.samples.insert("semigroup_norm".into(), curves.semigroup.points.clone());
    report
        .samples
        .insert("resolvent_product_norm".into(), curves.resolvent_product.points.clone());
    report.samples.insert("ratio".into(), curves.ratio.points.clone());
}

pub(crate) fn samples_table(curves: &SampledCurves<f64>) -> Table {
    let mut table = Table::new("samples.csv", &SAMPLES_HEADER);
    for ((a, b), r) in curves
        .semigroup
        .points
        .iter()
        .zip(&curves.resolvent_product.points)
        .zip(&curves.ratio.points)
    {
        table.push(&[a.0, a.1, b.1, r.1]);
    }
    table
}

/// Samples `||T(t)||`, `||T(t) R_mu||` and their ratio, fits the laws each
/// family is expected to follow and judges them.
pub fn simulate(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let spec = cfg.resolve(opts.max_dim)?;
    let mut clock = Stopwatch::new(opts.timings);
    let model = Model64::build(spec)?;
    let ts = cfg.time_grid.values()?;
    clock.lap("build");
    let curves = sample_all(&model, &ts, cfg.tolerances.norm_tol)?;
    clock.lap("sample");

    let mut report = RunReport::new("simulate", config_json(cfg)?, opts.seed);
    report.details = serde_json::json!({ "max_index": spec.max_index, "dim": spec.dim() });
    store_samples(&mut report, &curves);
    let window = cfg.fit.window();

    let growth = record_fit(
        &mut report,
        "semigroup_norm.POWER",
        "semigroup_growth",
        &curves.semigroup,
        RateFamily::Power,
        window,
    )?;
    if let Some(fit) = growth {
        let (lo, hi) = match spec.family {
            Family::JordanPairs => (0.9, 1.1),
            Family::DiagJordan => (0.8, 1.2),
            Family::LogSpectrum => (spec.order as f64 - 0.2, spec.order as f64 + 0.2),
        };
        let alpha = fit.exponent_or_scale;
        report.verdict(
            "semigroup_growth",
            Verdict::from_bool(within(alpha, lo, hi)),
            format!("||T(t)|| ~ t^{alpha:.4}, expected exponent in [{lo}, {hi}]"),
        );
    }

    match spec.family {
        Family::DiagJordan | Family::JordanPairs => {
            let bounded = record_fit(
                &mut report,
                "resolvent_product_norm.CONSTANT",
                "resolvent_product_bounded",
                &curves.resolvent_product,
                RateFamily::Constant,
                window,
            )?;
            if let Some(fit) = bounded {
                report.verdict(
                    "resolvent_product_bounded",
                    Verdict::from_bool(fit.spread <= 3.0),
                    format!("max/min of ||T(t) R|| is {:.4} (limit 3)", fit.spread),
                );
            }
            let ratio = record_fit(&mut report, "ratio.POWER", "ratio_decay", &curves.ratio, RateFamily::Power, window)?;
            if let (Some(fit), Family::JordanPairs) = (ratio, spec.family) {
                let alpha = fit.exponent_or_scale;
                report.verdict(
                    "ratio_decay",
                    Verdict::from_bool(within(alpha, -1.1, -0.9)),
                    format!("ratio ~ t^{alpha:.4}, expected exponent in [-1.1, -0.9]"),
                );
            }
        }
        Family::LogSpectrum => {
            let inv = record_fit(
                &mut report,
                "ratio.INVERSE_LOG",
                "ratio_inverse_log",
                &curves.ratio,
                RateFamily::InverseLog,
                window,
            )?;
            if let Some(fit) = inv {
                report.verdict(
                    "ratio_inverse_log",
                    Verdict::from_bool(fit.is_equivalent()),
                    format!(
                        "ratio * log t has spread {:.4} (limit 3) and trend {:+.4} (limit 0.15)",
                        fit.spread, fit.trend_slope
                    ),
                );
            }
            record_fit(&mut report, "ratio.POWER", "ratio_decay", &curves.ratio, RateFamily::Power, window)?;
        }
    }
    clock.lap("fit");
    report.timings = clock.finish();
    Ok(Outcome {
        report,
        tables: vec![samples_table(&curves)],
    })
}
