//! Input files, cached place data and reports for the `ftwist` binary.

pub mod cache;
pub mod input;
pub mod render;
pub mod report;

pub use cache::{curve_key, sha256_hex, FileCache};
pub use input::{parse, write_curve_file, CurveBlock, CurveFile, LambdaBlock, ParseError, ParseErrorKind, FORMAT_VERSION};
pub use render::render_text;
pub use report::{analyze, analyze_curve, analyze_lambda, AnalyzeOptions, CurveReport, LambdaReport, Report, Status, SCHEMA_VERSION};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
/// A check came out false (verify), or a curve failed its guard.
pub const EXIT_FAILURE: i32 = 1;
/// Unreadable or malformed input.
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
