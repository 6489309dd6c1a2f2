//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! Exits non-zero if any criterion fails.

use std::process::{Command as Process, ExitCode};
use std::time::Instant;

use ybsl21_core::rops::check_rhat_identity;
use ybsl21_core::sample::sample_params;
use ybsl21_core::suite::{self, SuiteConfig};
use ybsl21_core::{CheckReport, Result, Status};

const SEED: u64 = 1;
const SAMPLES: usize = 3;

struct Outcome {
    ok: bool,
    detail: String,
}

fn summarize(reports: &[CheckReport], expected_min: usize) -> Outcome {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| match &r.error {
            Some(e) => format!("{} ({e})", r.check_name),
            None => format!("{} ({} failures)", r.check_name, r.failure_count),
        })
        .collect();
    let ok = bad.is_empty() && reports.len() >= expected_min;
    let detail = if bad.is_empty() {
        format!("{} reports", reports.len())
    } else {
        format!("{} of {} reports failed: {}", bad.len(), reports.len(), bad.join(", "))
    };
    Outcome { ok, detail }
}

fn named(reports: &[CheckReport], prefix: &str) -> Vec<CheckReport> {
    reports
        .iter()
        .filter(|r| r.check_name.starts_with(prefix))
        .cloned()
        .collect()
}

fn from_suite(r: Result<Vec<CheckReport>>, expected_min: usize) -> Outcome {
    match r {
        Ok(reports) => summarize(&reports, expected_min),
        Err(e) => Outcome {
            ok: false,
            detail: format!("suite error: {e}"),
        },
    }
}

fn cfg(max_degree: u32, samples: usize) -> SuiteConfig {
    SuiteConfig::new(SEED, samples, max_degree)
}

fn algebra_criteria() -> [Outcome; 4] {
    let reports = match suite::algebra(&cfg(3, SAMPLES)) {
        Ok(r) => r,
        Err(e) => {
            return std::array::from_fn(|_| Outcome {
                ok: false,
                detail: format!("suite error: {e}"),
            })
        }
    };
    [
        summarize(&named(&reports, "sl21-relations"), SAMPLES + 2),
        summarize(&named(&reports, "casimir"), 3 * SAMPLES),
        summarize(&named(&reports, "verma"), SAMPLES),
        summarize(&named(&reports, "finite-subspace"), 5),
    ]
}

fn lax_criterion() -> Outcome {
    from_suite(suite::lax(&cfg(4, SAMPLES)), 1 + 4 * SAMPLES + 1)
}

fn defining_criterion() -> Outcome {
    let mut reports = Vec::new();
    for r in [suite::defining(&cfg(2, SAMPLES)), suite::lemmas(&cfg(3, SAMPLES))] {
        match r {
            Ok(v) => reports.extend(v),
            Err(e) => {
                return Outcome {
                    ok: false,
                    detail: format!("suite error: {e}"),
                }
            }
        }
    }
    summarize(&reports, 6 * SAMPLES + 2)
}

fn factorization_criterion() -> Outcome {
    let mut reports = match suite::factorization(&cfg(2, SAMPLES)) {
        Ok(v) => v,
        Err(e) => {
            return Outcome {
                ok: false,
                detail: format!("suite error: {e}"),
            }
        }
    };
    match sample_params(SEED, SAMPLES, 3) {
        Ok(pairs) => reports.extend(pairs.iter().map(|p| check_rhat_identity(&p.u, 3))),
        Err(e) => {
            return Outcome {
                ok: false,
                detail: format!("sampling error: {e}"),
            }
        }
    }
    summarize(&reports, 5 * SAMPLES)
}

fn ybe_criterion() -> Outcome {
    let required = from_suite(suite::ybe(&cfg(1, 2)), 2);
    let extended = from_suite(suite::ybe(&cfg(2, 2)), 2);
    Outcome {
        ok: required.ok && extended.ok,
        detail: format!("D=1: {}; D=2 (extended): {}", required.detail, extended.detail),
    }
}

fn determinism_criterion() -> Outcome {
    let run = || {
        Process::new(env!("CARGO_BIN_EXE_ybsl21"))
            .args(["--command", "all", "--seed", "7", "--format", "json"])
            .env_remove("YBSL21_SEED")
            .output()
    };
    match (run(), run()) {
        (Ok(a), Ok(b)) => {
            let same = a.stdout == b.stdout;
            let clean = a.status.success() && b.status.success() && !a.stdout.is_empty();
            Outcome {
                ok: same && clean,
                detail: format!(
                    "{} bytes, identical: {same}, exit codes {:?}/{:?}",
                    a.stdout.len(),
                    a.status.code(),
                    b.status.code()
                ),
            }
        }
        (Err(e), _) | (_, Err(e)) => Outcome {
            ok: false,
            detail: format!("cannot run binary: {e}"),
        },
    }
}

type Criterion = Box<dyn FnOnce() -> Vec<Outcome>>;

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1-4 algebra, Casimir, Verma, finite subspace", Box::new(|| algebra_criteria().into())),
        ("5 Lax", Box::new(|| vec![lax_criterion()])),
        ("6 RLL", Box::new(|| vec![from_suite(suite::rll(&cfg(3, SAMPLES)), 2 * SAMPLES)])),
        ("7 defining equations and lemmas", Box::new(|| vec![defining_criterion()])),
        (
            "8 recurrences",
            Box::new(|| vec![from_suite(suite::recurrences(&cfg(4, SAMPLES)), SAMPLES)]),
        ),
        ("9 factorization", Box::new(|| vec![factorization_criterion()])),
        (
            "10 spectra",
            Box::new(|| vec![from_suite(suite::spectrum(&cfg(3, SAMPLES)), 1 + 3 * SAMPLES)]),
        ),
        ("11 Yang-Baxter", Box::new(|| vec![ybe_criterion()])),
        ("12 determinism", Box::new(|| vec![determinism_criterion()])),
    ];
    let labels = [
        "1 algebra relations",
        "2 Casimir",
        "3 Verma closed forms",
        "4 finite subspaces",
    ];

    let mut failed = 0;
    for (group, run) in criteria {
        let start = Instant::now();
        let outcomes = run();
        let secs = start.elapsed().as_secs_f64();
        let names: Vec<&str> = if outcomes.len() == 1 { vec![group] } else { labels.to_vec() };
        for (name, o) in names.iter().zip(&outcomes) {
            if !o.ok {
                failed += 1;
            }
            println!(
                "{} criterion {name}: {} [{secs:.1} s]",
                if o.ok { "PASS" } else { "FAIL" },
                o.detail
            );
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
