//! Scenario files in, reports out: single runs and directory batches.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use pwbasis_core::HypothesisCheck;

use crate::commands::{execute, Command, Outcome, Settings};
use crate::output::{csv_number, to_csv_string, to_json_string, write_atomic};
use crate::schema::{join, Reader};

/// Every verdict passed.
pub const EXIT_PASS: i32 = 0;
/// A mathematical verdict failed.
pub const EXIT_FAIL: i32 = 1;
/// Usage, schema or input error.
pub const EXIT_USAGE: i32 = 2;

pub const TOOL_NAME: &str = "pwbasis";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Replaces the scenario's seed.
    pub seed: Option<u64>,
    /// Replaces the default verdict thresholds.
    pub tol: Option<f64>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub command: Command,
    pub description: Option<String>,
    pub seed: Option<u64>,
    pub parameters: Value,
}

/// Top-level schema: `name`, `command`, `parameters`, optional `seed` and
/// `description`. Parameters are validated when the scenario runs.
pub fn parse_scenario(text: &str) -> Result<Scenario, Vec<String>> {
    let value: Value = serde_json::from_str(text).map_err(|e| vec![format!("<root>: invalid JSON: {e}")])?;
    let mut r = Reader::new();
    let Some(map) = r.object("", &value, &["name", "command", "parameters", "seed", "description"]) else {
        return Err(r.into_errors());
    };
    let name = r.required("", map, "name").and_then(|v| r.string("name", v)).map(str::to_string);
    let names = Command::names();
    let command = r
        .required("", map, "command")
        .and_then(|v| r.choice("command", v, &names))
        .and_then(Command::from_name);
    let parameters = r.required("", map, "parameters").cloned();
    if let Some(p) = &parameters {
        if !p.is_object() {
            r.error("parameters", "expected an object");
        }
    }
    let seed = match map.get("seed") {
        None => Some(None),
        Some(v) => r.unsigned("seed", v).map(Some),
    };
    let description = match map.get("description") {
        None => Some(None),
        Some(v) => r.string("description", v).map(|s| Some(s.to_string())),
    };
    match (name, command, parameters, seed, description) {
        (Some(name), Some(command), Some(parameters), Some(seed), Some(description)) if r.is_clean() => Ok(Scenario {
            name,
            command,
            description,
            seed,
            parameters,
        }),
        _ => Err(r.into_errors()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenario: Scenario,
    pub settings: Settings,
    pub outcome: Outcome,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcome.passed()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> Value {
        let s = &self.scenario;
        let hypotheses: Vec<Value> = self.outcome.hypotheses.iter().map(hypothesis_json).collect();
        let checks: Vec<Value> = self.outcome.checks.iter().map(|c| c.to_json()).collect();
        let mut scenario = json!({
            "name": s.name,
            "command": s.command.name(),
            "seed": self.settings.seed,
            "parameters": s.parameters,
        });
        if let Some(d) = &s.description {
            scenario["description"] = json!(d);
        }
        json!({
            "tool": { "name": TOOL_NAME, "version": VERSION },
            "scenario": scenario,
            "passed": self.passed(),
            "checks": checks,
            "hypotheses": hypotheses,
            "warnings": self.outcome.warnings,
            "results": self.outcome.results,
            "tolerance_override": self.settings.tol,
            "wall_time_ms": self.wall_time_ms,
        })
    }

    /// `key=value` pairs for summaries.
    pub fn key_numbers(&self) -> String {
        self.outcome
            .key_numbers
            .iter()
            .map(|(k, v)| format!("{k}={}", csv_number(*v)))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// The attached table for CSV output, or a one-row summary.
    pub fn to_csv(&self) -> String {
        match &self.outcome.table {
            Some(t) => to_csv_string(&t.header, &t.rows),
            None => to_csv_string(
                &["name", "command", "verdict", "key_numbers"],
                &[vec![
                    self.scenario.name.clone(),
                    self.scenario.command.name().into(),
                    verdict(self.passed()).into(),
                    self.key_numbers(),
                ]],
            ),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json_string(&self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

fn hypothesis_json(h: &HypothesisCheck) -> Value {
    json!({
        "name": h.name,
        "passed": h.passed,
        "measured": h.measured,
        "tolerance": h.tolerance,
    })
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

/// Runs a parsed scenario; `Err` carries every schema or input error.
pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<Report, Vec<String>> {
    if let Some(t) = options.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(vec!["--tol: must be a finite positive number".into()]);
        }
    }
    let settings = Settings {
        seed: options.seed.or(scenario.seed).unwrap_or(0),
        tol: options.tol,
    };
    let start = Instant::now();
    let mut r = Reader::new();
    let outcome = execute(scenario.command, &mut r, &scenario.parameters, &settings);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Some(outcome) if r.is_clean() => Ok(Report {
            scenario: scenario.clone(),
            settings,
            outcome,
            wall_time_ms,
        }),
        _ => {
            let mut errors = r.into_errors();
            if errors.is_empty() {
                errors.push(join("parameters", "invalid"));
            }
            Err(errors)
        }
    }
}

/// Reads, parses and runs one scenario file.
pub fn run_file(path: &Path, options: &RunOptions) -> Result<Report, Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| vec![format!("{}: {e}", path.display())])?;
    let scenario = parse_scenario(&text)?;
    run_scenario(&scenario, options)
}

fn report_errors(err: &mut dyn Write, source: &Path, errors: &[String]) {
    let _ = writeln!(err, "error: {} is invalid:", source.display());
    for e in errors {
        let _ = writeln!(err, "  {e}");
    }
}

/// A subcommand on one scenario file: the scenario's `command` must match.
/// Writes the report to `out` (atomically) or to `stdout`.
pub fn run_command(
    command: Command,
    scenario: &Path,
    out: Option<&Path>,
    options: &RunOptions,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let text = match std::fs::read_to_string(scenario) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", scenario.display());
            return EXIT_USAGE;
        }
    };
    let parsed = match parse_scenario(&text) {
        Ok(s) => s,
        Err(errors) => {
            report_errors(stderr, scenario, &errors);
            return EXIT_USAGE;
        }
    };
    if parsed.command != command {
        let _ = writeln!(
            stderr,
            "error: {} is a \"{}\" scenario, not \"{}\"",
            scenario.display(),
            parsed.command.name(),
            command.name()
        );
        return EXIT_USAGE;
    }
    let report = match run_scenario(&parsed, options) {
        Ok(r) => r,
        Err(errors) => {
            report_errors(stderr, scenario, &errors);
            return EXIT_USAGE;
        }
    };
    let text = report.render(options.format);
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    let _ = writeln!(stderr, "{}: {}", report.scenario.name, verdict(report.passed()));
    report.exit_code()
}

/// `*.json` files of `dir` in lexicographic order of file name.
pub fn scenario_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// One summary row per scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub file: String,
    pub name: String,
    pub command: String,
    /// `pass`, `fail` or `error`.
    pub verdict: &'static str,
    pub key_numbers: String,
    pub message: String,
}

pub const SUMMARY_HEADER: [&str; 6] = ["file", "name", "command", "verdict", "key_numbers", "message"];

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.file.clone(),
                r.name.clone(),
                r.command.clone(),
                r.verdict.to_string(),
                r.key_numbers.clone(),
                r.message.clone(),
            ]
        })
        .collect();
    to_csv_string(&SUMMARY_HEADER, &cells)
}

/// Runs every scenario of `dir`. With `out`, writes one report per scenario
/// plus `summary.csv` there; the summary always goes to `stdout`.
pub fn run_batch(dir: &Path, out: Option<&Path>, options: &RunOptions, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let files = match scenario_files(dir) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read directory {}: {e}", dir.display());
            return EXIT_USAGE;
        }
    };
    if files.is_empty() {
        let _ = writeln!(stderr, "error: no *.json scenarios in {}", dir.display());
        return EXIT_USAGE;
    }
    if let Some(o) = out {
        if let Err(e) = std::fs::create_dir_all(o) {
            let _ = writeln!(stderr, "error: cannot create {}: {e}", o.display());
            return EXIT_USAGE;
        }
    }
    let mut rows = Vec::with_capacity(files.len());
    let mut code = EXIT_PASS;
    for path in &files {
        let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        match run_file(path, options) {
            Ok(report) => {
                if let Some(o) = out {
                    let ext = match options.format {
                        Format::Json => "json",
                        Format::Csv => "csv",
                    };
                    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    let target = o.join(format!("{stem}.{ext}"));
                    if let Err(e) = write_atomic(&target, &report.render(options.format)) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", target.display());
                        return EXIT_USAGE;
                    }
                }
                let failed: Vec<&str> = report.outcome.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                code = code.max(report.exit_code());
                rows.push(SummaryRow {
                    file,
                    name: report.scenario.name.clone(),
                    command: report.scenario.command.name().into(),
                    verdict: verdict(report.passed()),
                    key_numbers: report.key_numbers(),
                    message: if failed.is_empty() { String::new() } else { format!("failed: {}", failed.join(", ")) },
                });
            }
            Err(errors) => {
                report_errors(stderr, path, &errors);
                code = EXIT_USAGE;
                rows.push(SummaryRow {
                    file,
                    name: String::new(),
                    command: String::new(),
                    verdict: "error",
                    key_numbers: String::new(),
                    message: errors.join(" | "),
                });
            }
        }
    }
    let summary = summary_csv(&rows);
    if let Some(o) = out {
        let target = o.join("summary.csv");
        if let Err(e) = write_atomic(&target, &summary) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", target.display());
            return EXIT_USAGE;
        }
    }
    let _ = stdout.write_all(summary.as_bytes());
    code
}
