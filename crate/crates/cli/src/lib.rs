//! Library half of the `drdist` command-line tool: argument types,
//! report formats, command implementations, and the benchmark harness.

pub mod args;
pub mod bench;
pub mod commands;
pub mod report;

use drdist_core::ErrorClass;

/// Exit code mapping: 0 success, 2 usage, 3 data, 4 numeric/degenerate.
pub fn exit_code(err: &drdist_core::Error) -> i32 {
    match err.class() {
        ErrorClass::Usage => 2,
        ErrorClass::Data => 3,
        ErrorClass::Numeric => 4,
    }
}

/// Machine-readable error document for stderr.
pub fn error_json(err: &drdist_core::Error) -> String {
    serde_json::json!({
        "error": {
            "kind": err.kind(),
            "message": err.to_string(),
            "exit_code": exit_code(err),
        }
    })
    .to_string()
}
