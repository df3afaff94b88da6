use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use semilab::asymptotics::hardy_check;
use semilab::Complex64;

use super::{RunOptions, Stopwatch};
use crate::error::CliError;
use crate::output::{Outcome, Table};
use crate::report::{RunReport, Verdict};

pub const HARDY_HEADER: [&str; 5] = ["case", "length", "lhs", "rhs", "ratio"];

/// Random complex Gaussian sequences with lengths uniform in
/// `2..=max_len`; reports the worst ratio and the sequence attaining it.
pub fn hardy(n_cases: usize, max_len: usize, opts: &RunOptions) -> Result<Outcome, CliError> {
    if n_cases == 0 {
        return Err(CliError::Usage("--cases must be at least 1".into()));
    }
    if max_len < 2 {
        return Err(CliError::Usage("--max-len must be at least 2".into()));
    }
    let mut clock = Stopwatch::new(opts.timings);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut table = Table::new("hardy.csv", &HARDY_HEADER);
    let mut worst: Option<(usize, f64, Vec<Complex64>)> = None;
    for case in 0..n_cases {
        let len = rng.gen_range(2..=max_len);
        let c: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let r = hardy_check(&c);
        table.push_cells(vec![
            case.to_string(),
            len.to_string(),
            format!("{:?}", r.lhs),
            format!("{:?}", r.rhs),
            format!("{:?}", r.ratio),
        ]);
        if worst.as_ref().is_none_or(|w| r.ratio > w.1) {
            worst = Some((case, r.ratio, c));
        }
    }
    let (worst_case, worst_ratio, worst_seq) = worst.expect("at least one case");
    clock.lap("random");

    let slow: Vec<Complex64> = (1..=max_len).map(|n| Complex64::new(1.0 / (n as f64).sqrt(), 0.0)).collect();
    let near = hardy_check(&slow);
    clock.lap("near_extremal");

    let config = serde_json::json!({ "cases": n_cases, "max_len": max_len, "seed": opts.seed });
    let mut report = RunReport::new("hardy", config, opts.seed);
    report.details = serde_json::json!({
        "worst_ratio": worst_ratio,
        "worst_case": worst_case,
        "worst_sequence": worst_seq.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>(),
        "near_extremal": near,
    });
    report.verdict(
        "hardy_inequality",
        Verdict::from_bool(worst_ratio <= 1.0),
        format!("worst lhs/(4 rhs) over {n_cases} cases is {worst_ratio:.6} (case {worst_case}, length {})", worst_seq.len()),
    );
    report.verdict(
        "hardy_near_extremal",
        Verdict::from_bool(near.ratio <= 1.0),
        format!("c_n = n^(-1/2), n <= {max_len}: ratio {:.6}", near.ratio),
    );
    report.timings = clock.finish();
    Ok(Outcome {
        report,
        tables: vec![table],
    })
}
