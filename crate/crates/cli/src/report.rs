use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::compute;
use crate::config::{Command, Mode, RunConfig};
use crate::error::{CliError, ErrorObject, Result};
use crate::suites::{run_suite, Suite};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A verification ran and found a failing trial.
    Failed,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    pub inputs: RunConfig,
    pub mode: Mode,
    pub seed: u64,
    pub results: Value,
    pub residuals: Value,
    pub runtime_ms: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorObject>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduce: Option<String>,
}

fn verify(cfg: &RunConfig) -> Result<(Value, Value, bool)> {
    let suites: Vec<Suite> = match cfg.suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut reports = Vec::with_capacity(suites.len());
    let mut residuals = serde_json::Map::new();
    let mut all = true;
    for suite in suites {
        let mode = if suite.modes().contains(&cfg.mode) {
            cfg.mode
        } else if !cfg.mode_given {
            suite.preferred_mode()
        } else {
            return Err(CliError::Config(format!("suite {} does not run in {} mode", suite.name(), cfg.mode)));
        };
        let r = run_suite(suite, &RunConfig { mode, ..cfg.clone() })?;
        all &= r.ok();
        residuals.insert(suite.name().into(), json!(r.worst_defect));
        reports.push(r);
    }
    Ok((json!({ "all_passed": all, "suites": reports }), Value::Object(residuals), all))
}

/// Runs one configured command. Never panics on bad input: errors come back
/// inside the report.
pub fn run(cfg: &RunConfig) -> (Report, Status) {
    let start = Instant::now();
    let outcome = cfg.validate().and_then(|()| match cfg.command {
        Command::Verify => verify(cfg),
        other => {
            if cfg.suite.is_some() {
                return Err(CliError::Config("--suite belongs to verify".into()));
            }
            let c = match other {
                Command::Solve => compute::solve(cfg),
                Command::Sp => compute::sp(cfg),
                Command::Norm => compute::norm(cfg),
                Command::Ff => compute::ff(cfg),
                Command::Zcoeff => compute::zcoeff(cfg),
                Command::Spectrum => compute::spectrum(cfg),
                Command::Verify => unreachable!(),
            }?;
            Ok((c.results, c.residuals, true))
        }
    });
    let runtime_ms = cfg.timing.then(|| start.elapsed().as_millis());
    let mut report = Report {
        schema: SCHEMA,
        command: cfg.command.name(),
        inputs: cfg.clone(),
        mode: cfg.mode,
        seed: cfg.seed,
        results: Value::Null,
        residuals: Value::Null,
        runtime_ms,
        error: None,
        reproduce: None,
    };
    let status = match outcome {
        Ok((results, residuals, passed)) => {
            report.results = results;
            report.residuals = residuals;
            if passed {
                Status::Ok
            } else {
                report.reproduce = Some(cfg.reproduce());
                Status::Failed
            }
        }
        Err(e) => {
            report.error = Some(e.to_object());
            report.reproduce = Some(cfg.reproduce());
            Status::Error
        }
    };
    (report, status)
}

pub fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}
