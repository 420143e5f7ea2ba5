use std::fmt::{Debug, Display};

use af_core::algebra_tools::AlgebraError;
use af_core::annihilator::AnnihilatorError;
use af_core::circuit::CircuitError;
use af_core::encoding::EncodingError;
use af_core::field::FieldError;
use af_core::instances::InstanceError;
use af_core::ips::IpsError;
use af_core::pit::PitError;
use af_core::poly::PolyError;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// A command that could not run to a verdict.
#[derive(Debug)]
pub struct Failure {
    module: &'static str,
    code: String,
    message: String,
    exit: u8,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { module: "cli", code: "usage".into(), message: message.into(), exit: 2 }
    }

    fn module<E: Debug + Display>(module: &'static str, e: &E, budget: bool) -> Self {
        Failure { module, code: variant_code(e), message: e.to_string(), exit: if budget { 3 } else { 2 } }
    }
}

/// `BudgetExceeded { .. }` -> `budget_exceeded`.
fn variant_code<E: Debug>(e: &E) -> String {
    let debug = format!("{e:?}");
    let mut out = String::new();
    for (i, ch) in debug.chars().take_while(|c| c.is_alphanumeric()).enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('_');
        }
        out.push(ch.to_ascii_lowercase());
    }
    out
}

fn circuit_budget(e: &CircuitError) -> bool {
    matches!(e, CircuitError::BudgetExceeded { .. })
}

fn encoding_budget(e: &EncodingError) -> bool {
    matches!(e, EncodingError::Circuit(c) if circuit_budget(c))
}

fn annihilator_budget(e: &AnnihilatorError) -> bool {
    match e {
        AnnihilatorError::BudgetExceeded { .. } | AnnihilatorError::SearchSpaceTooLarge { .. } => true,
        AnnihilatorError::Encoding(inner) => encoding_budget(inner),
        _ => false,
    }
}

macro_rules! from_module {
    ($ty:ty, $name:literal, $budget:expr) => {
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                let budget: fn(&$ty) -> bool = $budget;
                Failure::module($name, &e, budget(&e))
            }
        }
    };
}

from_module!(FieldError, "field", |_| false);
from_module!(PolyError, "poly", |_| false);
from_module!(CircuitError, "circuit", circuit_budget);
from_module!(EncodingError, "encoding", encoding_budget);
from_module!(AnnihilatorError, "annihilator", annihilator_budget);
from_module!(AlgebraError, "algebra", |e| matches!(e, AlgebraError::TooLarge(_)));
from_module!(InstanceError, "instances", |_| false);
from_module!(IpsError, "ips", |e| matches!(e, IpsError::Annihilator(a) if annihilator_budget(a)));
from_module!(PitError, "pit", |e| match e {
    PitError::PointBudgetExceeded { .. } => true,
    PitError::Circuit(c) => circuit_budget(c),
    PitError::Encoding(c) => encoding_budget(c),
    _ => false,
});

/// The result of a command that ran: a status, its exit code, report fields
/// and human-readable lines.
pub struct Outcome {
    status: &'static str,
    exit: u8,
    data: Map<String, Value>,
    lines: Vec<String>,
    warnings: Vec<String>,
}

impl Outcome {
    pub fn ok() -> Self {
        Outcome { status: "ok", exit: 0, data: Map::new(), lines: Vec::new(), warnings: Vec::new() }
    }

    pub fn status(&mut self, status: &'static str, exit: u8) {
        self.status = status;
        self.exit = exit;
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn warn(&mut self, text: impl Into<String>) {
        self.warnings.push(text.into());
    }
}

/// Prints the report and returns the exit code.
pub fn finish(command: &str, as_json: bool, result: Result<Outcome, Failure>) -> u8 {
    match result {
        Ok(o) => {
            for w in &o.warnings {
                eprintln!("warning: {w}");
            }
            if as_json {
                let mut report = Map::new();
                report.insert("schema_version".into(), json!(SCHEMA_VERSION));
                report.insert("command".into(), json!(command));
                report.insert("status".into(), json!(o.status));
                report.extend(o.data);
                report.insert("warnings".into(), json!(o.warnings));
                println!("{}", serde_json::to_string_pretty(&Value::Object(report)).expect("values serialize"));
            } else {
                for l in &o.lines {
                    println!("{l}");
                }
            }
            o.exit
        }
        Err(f) => {
            eprintln!("error[{}.{}]: {}", f.module, f.code, f.message);
            if as_json {
                let report = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command,
                    "status": "error",
                    "error": { "module": f.module, "code": f.code, "message": f.message },
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("values serialize"));
            }
            f.exit
        }
    }
}
