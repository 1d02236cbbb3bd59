//! Versioned, deterministic run reports and their human-readable summary.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::commands::{run_command, Verification};
use super::generate::DrawRecord;
use super::literal::matrix_to_literal;
use super::scenario::{Prepared, Scenario};

pub const SCHEMA: &str = "padic-curvature/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub command: String,
    pub status: Status,
    pub verifications: Vec<Verification>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub seed: u64,
    pub status: Status,
    /// the generated metric and every digit drawn for it
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_metric: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub results: Vec<CommandResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub scenario_sha256: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_override: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_override: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub scenarios: usize,
    pub commands: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub verifications: usize,
    pub verifications_failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub provenance: Provenance,
    pub scenarios: Vec<ScenarioReport>,
    pub summary: Summary,
}

/// Overrides given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub precision: Option<u32>,
    pub commands: Option<Vec<String>>,
}

fn run_prepared(p: &Prepared) -> Vec<CommandResult> {
    p.commands
        .iter()
        .map(|name| match run_command(name, p) {
            Ok(o) => {
                let ok = o.verifications.iter().all(|v| v.passed);
                CommandResult {
                    command: name.clone(),
                    status: if ok { Status::Pass } else { Status::Fail },
                    verifications: o.verifications,
                    data: o.data,
                    error: None,
                }
            }
            Err(e) => CommandResult {
                command: name.clone(),
                status: Status::Error,
                verifications: Vec::new(),
                data: Value::Null,
                error: Some(format!("{name}: {e}")),
            },
        })
        .collect()
}

/// run: executes every scenario in order and collects the report.
pub fn run(text: &str, overrides: &Overrides) -> std::result::Result<Report, crate::Error> {
    let scenarios = super::scenario::ScenarioFile::parse(text)?;
    Ok(run_scenarios(&scenarios, &sha256_hex(text.as_bytes()), overrides))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn run_scenarios(scenarios: &[Scenario], hash: &str, overrides: &Overrides) -> Report {
    let mut out = Vec::new();
    for (i, s) in scenarios.iter().enumerate() {
        let prepared = s.prepare(overrides.seed, overrides.precision, overrides.commands.as_deref());
        let name = s.name.clone().unwrap_or_else(|| format!("scenario-{i}"));
        out.push(match prepared {
            Err(e) => ScenarioReport {
                name,
                seed: overrides.seed.or(s.seed).unwrap_or(0),
                status: Status::Error,
                generated_metric: None,
                error: Some(e.to_string()),
                results: Vec::new(),
            },
            Ok(p) => {
                let results = run_prepared(&p);
                let status = results.iter().map(|r| r.status).fold(Status::Pass, worse);
                let generated_metric = p.generated.as_ref().map(|g| {
                    let mut v = serde_json::to_value(DrawRecord { attempts: g.attempts, draws: &g.draws }).expect("plain data");
                    v["metric"] = serde_json::to_value(matrix_to_literal(&g.metric.entries)).expect("plain data");
                    v
                });
                ScenarioReport { name, seed: p.seed, status, generated_metric, error: None, results }
            }
        });
    }
    let mut summary = Summary { scenarios: out.len(), ..Summary::default() };
    for s in &out {
        if s.error.is_some() {
            summary.errors += 1;
        }
        for r in &s.results {
            summary.commands += 1;
            match r.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Error => summary.errors += 1,
            }
            summary.verifications += r.verifications.len();
            summary.verifications_failed += r.verifications.iter().filter(|v| !v.passed).count();
        }
    }
    Report {
        schema: SCHEMA.into(),
        provenance: Provenance {
            scenario_sha256: hash.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed_override: overrides.seed,
            precision_override: overrides.precision,
        },
        scenarios: out,
        summary,
    }
}

fn worse(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::Error, _) | (_, Status::Error) => Status::Error,
        (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
        _ => Status::Pass,
    }
}

impl Report {
    /// 0 when everything passed, 1 on a failed verification, 2 on any error.
    pub fn exit_code(&self) -> i32 {
        if self.summary.errors > 0 {
            2
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn human_summary(&self) -> String {
        let mut s = String::new();
        for sc in &self.scenarios {
            let _ = writeln!(s, "{} (seed {}): {}", sc.name, sc.seed, sc.status);
            if let Some(e) = &sc.error {
                let _ = writeln!(s, "  error: {e}");
            }
            for r in &sc.results {
                let _ = writeln!(s, "  {:<20} {}", r.command, r.status);
                if let Some(e) = &r.error {
                    let _ = writeln!(s, "    error: {e}");
                }
                for v in r.verifications.iter().filter(|v| !v.passed) {
                    let _ = writeln!(s, "    failed: {}", v.name);
                }
            }
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "{} scenarios, {} commands: {} passed, {} failed, {} errors ({} of {} verifications failed)",
            m.scenarios, m.commands, m.passed, m.failed, m.errors, m.verifications_failed, m.verifications
        );
        s
    }
}
