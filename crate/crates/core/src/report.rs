//! Machine-readable pass/fail records.

use std::fmt::Display;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::rational::{render, Rational};
use crate::superpoly::SuperPolynomial;
use crate::Result;

/// Failures kept verbatim per report; the rest are only counted.
pub const MAX_WITNESSES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Param {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
}

/// Outcome of one named sub-equation inside a composite check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub params: Vec<Param>,
    pub max_degree: u32,
    pub status: Status,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<SubCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    pub fn new(check_name: impl Into<String>, max_degree: u32) -> Self {
        CheckReport {
            check_name: check_name.into(),
            params: Vec::new(),
            max_degree,
            status: Status::Pass,
            failure_count: 0,
            failures: Vec::new(),
            items: Vec::new(),
            notes: Vec::new(),
            error: None,
            elapsed_ms: None,
        }
    }

    pub fn with_param(mut self, name: &str, value: &Rational) -> Self {
        self.push_param(name, value);
        self
    }

    pub fn push_param(&mut self, name: &str, value: &Rational) {
        self.params.push(Param {
            name: name.to_string(),
            value: render(value),
        });
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn fail(&mut self, failure: Failure) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.failure_count += 1;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(failure);
        }
    }

    /// Records a failed scalar or structural assertion without polynomial data.
    pub fn fail_msg(&mut self, input: impl Into<String>, lhs: impl Display, rhs: impl Display) {
        self.fail(Failure {
            input: input.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            residual: String::new(),
        });
    }

    pub fn check_eq<T: PartialEq + Display>(&mut self, input: impl Into<String>, lhs: &T, rhs: &T) {
        if lhs != rhs {
            self.fail_msg(input, lhs, rhs);
        }
    }

    pub fn set_error(&mut self, err: &crate::Error) {
        self.status = Status::Error;
        self.error = Some(err.to_string());
    }

    /// Folds a sub-report in as a named item; witnesses are prefixed with it.
    pub fn absorb(&mut self, name: impl Into<String>, sub: CheckReport) {
        let name = name.into();
        self.items.push(SubCheck {
            name: name.clone(),
            status: sub.status,
        });
        if sub.status == Status::Error {
            self.status = Status::Error;
            self.error = sub.error.map(|e| format!("{name}: {e}"));
        } else if sub.status == Status::Fail && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.failure_count += sub.failure_count;
        for mut f in sub.failures {
            if self.failures.len() < MAX_WITNESSES {
                f.input = format!("[{name}] {}", f.input);
                self.failures.push(f);
            }
        }
        self.notes.extend(sub.notes);
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        self
    }
}

/// Values that can be compared exactly and whose difference is displayable.
pub trait Residual: Display + PartialEq + Send {
    fn residual(&self, other: &Self) -> Self;
}

impl Residual for SuperPolynomial {
    fn residual(&self, other: &Self) -> Self {
        self - other
    }
}

/// Evaluates both sides on every input (in parallel) and records, in input
/// order, each input where they differ.
pub fn compare_images<T, V, L, A, B>(
    report: &mut CheckReport,
    inputs: &[T],
    label: L,
    lhs: A,
    rhs: B,
) -> Result<()>
where
    T: Sync,
    V: Residual,
    L: Fn(&T) -> String + Sync,
    A: Fn(&T) -> Result<V> + Sync,
    B: Fn(&T) -> Result<V> + Sync,
{
    let outcomes: Vec<Result<Option<Failure>>> = inputs
        .par_iter()
        .map(|x| {
            let l = lhs(x)?;
            let r = rhs(x)?;
            if l == r {
                return Ok(None);
            }
            Ok(Some(Failure {
                input: label(x),
                residual: l.residual(&r).to_string(),
                lhs: l.to_string(),
                rhs: r.to_string(),
            }))
        })
        .collect();
    for o in outcomes {
        if let Some(f) = o? {
            report.fail(f);
        }
    }
    Ok(())
}

/// Runs a fallible check body, turning an error into an `error` report.
pub fn guarded(
    mut report: CheckReport,
    body: impl FnOnce(&mut CheckReport) -> Result<()>,
) -> CheckReport {
    let start = Instant::now();
    if let Err(e) = body(&mut report) {
        report.set_error(&e);
    }
    report.timed(start)
}
