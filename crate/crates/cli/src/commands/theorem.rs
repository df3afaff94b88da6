use semilab::asymptotics::{concave_envelope, envelope_translation_check, sample_all, DecayCriterion, DecayCurve, RateFamily};
use semilab::spectral::{hypothesis_a_check, hypothesis_b_check, riesz_projection_quadrature, Contour};
use semilab::{LabError, Model64};

use super::simulate::store_samples;
use super::{config_json, record_fit, RunOptions, Stopwatch};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{Outcome, Table};
use crate::report::{EnvelopeSummary, ProjectionSummary, RunReport, Verdict};

pub const CURVES_HEADER: [&str; 5] = ["t", "semigroup_norm", "envelope", "resolvent_product_norm", "conclusion"];
pub const TRANSLATION_HEADER: [&str; 2] = ["s", "translation_ratio"];

/// Real parts below this count as lying on the imaginary axis.
const AXIS_TOL: f64 = 1e-12;
/// Concavity and majorization slack of the envelope.
const ENVELOPE_TOL: f64 = 1e-12;

/// Builds the concave-log envelope of `||T(t)||`, checks the spectral
/// hypotheses at the lowest eigenvalues on the imaginary axis and judges
/// the decay of `||T(t) R_mu|| / f(t)`.
pub fn theorem_check(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let spec = cfg.resolve(opts.max_dim)?;
    let mut clock = Stopwatch::new(opts.timings);
    let model = Model64::build(spec)?;
    let ts = cfg.time_grid.values()?;
    clock.lap("build");
    let curves = sample_all(&model, &ts, cfg.tolerances.norm_tol)?;
    clock.lap("sample");

    let mut report = RunReport::new("theorem-check", config_json(cfg)?, opts.seed);
    report.details = serde_json::json!({ "max_index": spec.max_index, "dim": spec.dim() });
    store_samples(&mut report, &curves);
    record_fit(
        &mut report,
        "semigroup_norm.POWER",
        "semigroup_growth",
        &curves.semigroup,
        RateFamily::Power,
        cfg.fit.window(),
    )?;

    // envelope conditions
    let env = concave_envelope(&curves.semigroup)?;
    let shift = cfg.theorem.translation_shift;
    let translation = envelope_translation_check(&env, shift, &ts)?;
    let summary = EnvelopeSummary::new(&env, &curves.semigroup.points, shift, &translation);
    let (end_s, end_ratio) = *translation.curve.last().expect("nonempty grid");
    let envelope_ok = summary.max_second_divided_difference <= ENVELOPE_TOL
        && summary.max_excess <= ENVELOPE_TOL
        && env.a_estimate > 0.0
        && env.a_estimate <= 1.0
        && translation.verdict;
    report.verdict(
        "envelope_conditions",
        Verdict::from_bool(envelope_ok),
        format!(
            "max second difference of log f {:.3e}, max excess {:.3e}, a = {:.4}, f({shift} + s)/f(s) = {end_ratio:.6} at s = {end_s}",
            summary.max_second_divided_difference, summary.max_excess, env.a_estimate
        ),
    );
    clock.lap("envelope");

    // hypotheses (a) and (b) at the lowest eigenvalues on the axis
    let f = |t: f64| env.eval(t);
    let on_axis: Vec<_> = model
        .eigenvalues()
        .iter()
        .filter(|e| e.value.re.abs() <= AXIS_TOL)
        .take(cfg.theorem.eigenvalues)
        .map(|e| e.value)
        .collect();
    let mut skipped = Vec::new();
    let mut a_failures = Vec::new();
    let mut b_failures = Vec::new();
    for &lambda in &on_axis {
        let contour = match hypothesis_a_check(&model, lambda) {
            Ok(c) => Contour::new(
                c.center,
                cfg.contour.radius.unwrap_or(c.radius),
                cfg.contour.nodes.unwrap_or(c.nodes),
            )?,
            Err(LabError::ClusteredSpectrum { .. }) => {
                skipped.push(format!("{lambda}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let projection = match riesz_projection_quadrature(&model, &contour) {
            Ok(p) => p,
            Err(e @ (LabError::ContourTooClose { .. } | LabError::NonConverged { .. })) => {
                a_failures.push(format!("{lambda}: {e}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let tol = cfg.tolerances.proj_tol;
        if projection.idempotency_defect > tol || projection.commutation_defect > tol || projection.rank == 0 {
            a_failures.push(format!(
                "{lambda}: rank {}, |P^2 - P| = {:.3e}, |TP - PT| = {:.3e}",
                projection.rank, projection.idempotency_defect, projection.commutation_defect
            ));
        }
        let decay = hypothesis_b_check(&model, &contour, &ts, f, cfg.tolerances.norm_tol)?;
        if !decay.decaying {
            b_failures.push(format!("{lambda}: slope {:?}", decay.slope));
        }
        report.projections.push(ProjectionSummary {
            eigenvalue: (lambda.re, lambda.im),
            center: (contour.center.re, contour.center.im),
            radius: contour.radius,
            nodes: contour.nodes,
            rank: projection.rank,
            trace: (projection.trace.re, projection.trace.im),
            idempotency_defect: projection.idempotency_defect,
            commutation_defect: projection.commutation_defect,
            refinement_change: projection.refinement_change,
            decay: decay.points,
            decay_slope: decay.slope,
            decaying: decay.decaying,
        });
    }
    let tested = report.projections.len() + a_failures.len();
    let skip_note = if skipped.is_empty() {
        String::new()
    } else {
        format!("; clustered, skipped: {}", skipped.join(", "))
    };
    let verdict_a = if tested == 0 {
        Verdict::Skipped(if on_axis.is_empty() {
            "no eigenvalues on the imaginary axis".into()
        } else {
            format!("clustered spectrum at {}", skipped.join(", "))
        })
    } else {
        Verdict::from_bool(a_failures.is_empty())
    };
    report.verdict(
        "hypothesis_a_contours",
        verdict_a,
        format!("{tested} eigenvalue(s) tested{skip_note}{}", failure_note(&a_failures)),
    );
    let verdict_b = if report.projections.is_empty() {
        Verdict::Skipped("no admissible projection".into())
    } else {
        Verdict::from_bool(b_failures.is_empty())
    };
    report.verdict(
        "hypothesis_b_decay",
        verdict_b,
        format!(
            "||T(t)P||/f(t) decays for {} of {} projection(s){}",
            report.projections.len() - b_failures.len(),
            report.projections.len(),
            failure_note(&b_failures)
        ),
    );
    clock.lap("projections");

    // conclusion
    let conclusion = DecayCurve::evaluate(
        curves.resolvent_product.points.iter().map(|&(t, v)| (t, v / f(t))).collect(),
        DecayCriterion::CONCLUSION,
    );
    let first = conclusion.points.first().map_or(f64::NAN, |p| p.1);
    let last = conclusion.points.last().map_or(f64::NAN, |p| p.1);
    report.verdict(
        "conclusion_decay",
        Verdict::from_bool(conclusion.decaying),
        format!(
            "||T(t)R||/f(t) from {first:.4} to {last:.4}, log-log slope {:.4} (limit {}), last/first {:.4} (limit {})",
            conclusion.slope.unwrap_or(f64::NAN),
            DecayCriterion::CONCLUSION.max_slope,
            last / first,
            DecayCriterion::CONCLUSION.max_last_over_first
        ),
    );
    report.samples.insert("conclusion".into(), conclusion.points.clone());
    report.envelope = Some(summary);
    clock.lap("conclusion");
    report.timings = clock.finish();

    let mut table = Table::new("theorem.csv", &CURVES_HEADER);
    for ((a, b), c) in curves
        .semigroup
        .points
        .iter()
        .zip(&curves.resolvent_product.points)
        .zip(&conclusion.points)
    {
        table.push(&[a.0, a.1, f(a.0), b.1, c.1]);
    }
    let mut shifted = Table::new("translation.csv", &TRANSLATION_HEADER);
    for &(s, r) in &translation.curve {
        shifted.push(&[s, r]);
    }
    Ok(Outcome {
        report,
        tables: vec![table, shifted],
    })
}

fn failure_note(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", failures.join("; "))
    }
}
