use preimage_core::classify::Validation;
use preimage_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1.0";

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Serialize, Debug)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub validations: Vec<Validation>,
    /// Wall-clock milliseconds; `null` under `--no-timing`.
    pub timing: Option<f64>,
}

impl Report {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// What a command produced before it is wrapped into a [`Report`].
#[derive(Default)]
pub struct Outcome {
    pub inputs: serde_json::Map<String, Value>,
    pub result: Value,
    pub validations: Vec<Validation>,
    pub converged: bool,
}

impl Outcome {
    pub fn new() -> Self {
        Outcome { converged: true, ..Default::default() }
    }

    pub fn input(&mut self, key: &str, v: Value) {
        self.inputs.insert(key.into(), v);
    }

    pub fn exit_code(&self) -> u8 {
        if !self.validations.iter().all(|v| v.passed) {
            EXIT_VALIDATION
        } else if !self.converged {
            EXIT_NONCONVERGENCE
        } else {
            EXIT_OK
        }
    }
}

pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Validation { .. } | Error::Hypothesis { .. } | Error::NoGenerator(_) => EXIT_VALIDATION,
        Error::NonConvergence { .. } | Error::Overflow(_) => EXIT_NONCONVERGENCE,
        Error::Degree(_)
        | Error::InvalidArgument(_)
        | Error::Parse { .. }
        | Error::DegreeCap { .. }
        | Error::Irrational(_)
        | Error::Underdetermined { .. }
        | Error::DegenerateParams(_) => EXIT_USAGE,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Degree(_) => "degree",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Parse { .. } => "parse",
        Error::NonConvergence { .. } => "non_convergence",
        Error::Overflow(_) => "overflow",
        Error::DegreeCap { .. } => "degree_cap",
        Error::Irrational(_) => "irrational",
        Error::Hypothesis { .. } => "hypothesis",
        Error::Validation { .. } => "validation",
        Error::Underdetermined { .. } => "underdetermined",
        Error::NoGenerator(_) => "no_generator",
        Error::DegenerateParams(_) => "degenerate_params",
    }
}

pub fn error_result(e: &Error) -> Value {
    json!({ "error": { "kind": error_kind(e), "message": e.to_string() } })
}

/// A failed hard requirement is also listed as a failed validation.
pub fn error_validations(e: &Error) -> Vec<Validation> {
    match e {
        Error::Validation { name, residual } => vec![Validation::new(name.clone(), false, *residual)],
        Error::Hypothesis { what, gap } => vec![Validation::new(what.clone(), false, *gap)],
        _ => Vec::new(),
    }
}
