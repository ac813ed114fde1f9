//! Scenario runner, report emitter and invariant self-test.

mod scenario;
mod selftest;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

pub use scenario::{execute, ActionKind, ComputeError, Scenario};
pub use selftest::{random_series, selftest, PropertyResult, SelftestOptions, SelftestReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Outcome of one scenario: the full report and whether the computation succeeded.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub report: Value,
    pub ok: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<(Scenario, Value), CliError> {
    let echo: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let scenario: Scenario = serde_json::from_value(echo.clone()).map_err(|e| CliError::Schema(e.to_string()))?;
    scenario.validate().map_err(CliError::Schema)?;
    Ok((scenario, echo))
}

/// Runs a validated scenario; computational failures become part of the report.
pub fn run_parsed(scenario: &Scenario, echo: Value) -> RunOutcome {
    let (status, result, diagnostics, error) = match execute(scenario) {
        Ok((r, d)) => ("ok", r, d, Value::Null),
        Err(e) => ("error", Value::Null, json!({}), e.to_json()),
    };
    let report = json!({
        "version": VERSION,
        "kind": scenario.kind(),
        "scenario": echo,
        "status": status,
        "result": result,
        "diagnostics": diagnostics,
        "error": error,
    });
    RunOutcome { ok: status == "ok", report }
}

pub fn run_scenario_str(text: &str) -> Result<RunOutcome, CliError> {
    let (scenario, echo) = parse_scenario(text)?;
    Ok(run_parsed(&scenario, echo))
}

/// Loads `path`, runs it and, if `out` is given, writes the JSON report atomically.
pub fn run_scenario(path: &Path, out: Option<&Path>) -> Result<RunOutcome, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    let outcome = run_scenario_str(&text)?;
    if let Some(out) = out {
        write_atomic(out, &render(&outcome.report))?;
    }
    Ok(outcome)
}

/// Pretty JSON with a trailing newline; key order is fixed, so equal reports are byte-equal.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_owned(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn selftest_report(opts: &SelftestOptions) -> Value {
    let r = selftest(opts);
    json!({
        "version": VERSION,
        "kind": "selftest",
        "status": if r.all_passed { "ok" } else { "error" },
        "result": r,
    })
}

/// One line per property or a short status line for scenario reports.
pub fn summary(report: &Value) -> String {
    let mut out = String::new();
    let kind = report["kind"].as_str().unwrap_or("?");
    let status = report["status"].as_str().unwrap_or("?");
    out.push_str(&format!("kamforge {} {kind}: {status}\n", report["version"].as_str().unwrap_or(VERSION)));
    if let Some(props) = report["result"]["properties"].as_array() {
        for p in props {
            let mark = if p["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {mark} {} ({} cases)", p["name"].as_str().unwrap_or("?"), p["cases"]));
            if let Some(d) = p["detail"].as_str() {
                out.push_str(&format!(": {d}"));
            }
            out.push('\n');
        }
    }
    if status == "error" && !report["error"].is_null() {
        out.push_str(&format!("  {}: {}\n", report["error"]["kind"].as_str().unwrap_or("?"), report["error"]["message"].as_str().unwrap_or("")));
    }
    out
}
