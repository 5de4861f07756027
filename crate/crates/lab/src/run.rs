use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use markov_groupoids::measure::Interval;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::builtin;
use crate::config::{BatchConfig, ExperimentConfig, Settings};
use crate::error::{LabError, Result};

/// The outcome of one experiment, as written to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub name: String,
    pub experiment: String,
    pub anchor: String,
    pub settings: Settings,
    pub expected: String,
    pub observed: String,
    pub verdict_text: String,
    pub matched: bool,
    pub horizon: usize,
    /// Worst TV bracket behind the verdict.
    pub residual: Interval,
    /// Half the widest TV bracket over all curves: the leaked mass of the worse start.
    pub leaked_max: f64,
    pub budget_secs: u64,
    /// Artifact paths relative to the output directory.
    pub artifacts: Vec<String>,
}

/// Elapsed time of one experiment. Kept out of `report.json` so that reports
/// stay byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub name: String,
    pub seconds: f64,
    pub budget_secs: u64,
    pub within_budget: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// The experiment tables as given, without the output directory.
    pub config: Vec<ExperimentConfig>,
    pub records: Vec<ExperimentRecord>,
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

pub const REPORT_FILE: &str = "report.json";
pub const TIMING_FILE: &str = "timing.json";

impl RunReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.matched)
    }

    /// One line per mismatching experiment, empty when all match.
    pub fn diff(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter().filter(|r| !r.matched) {
            writeln!(
                out,
                "{}: expected {}, observed {} ({})",
                r.name, r.expected, r.observed, r.verdict_text
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| LabError::ConfigInvalid(format!("unreadable report: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let mut report = Self::from_json(&text)?;
        let timing = path.with_file_name(TIMING_FILE);
        if let Ok(text) = fs::read_to_string(&timing) {
            report.timings = serde_json::from_str(&text)
                .map_err(|e| LabError::ConfigInvalid(format!("{}: {e}", timing.display())))?;
        }
        Ok(report)
    }

    pub fn timing(&self, name: &str) -> Option<&Timing> {
        self.timings.iter().find(|t| t.name == name)
    }
}

fn write(path: PathBuf, contents: &str) -> Result<()> {
    fs::write(&path, contents).map_err(|e| LabError::io(path, e))
}

fn execute(config: &ExperimentConfig, out: &Path) -> Result<(ExperimentRecord, Timing)> {
    let settings = config.settings()?;
    let b = builtin(&config.experiment)?;
    let clock = Instant::now();
    let outcome = b.execute(&settings)?;
    let elapsed = clock.elapsed();

    let dir = out.join(&config.name);
    fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
    let mut artifacts = Vec::new();
    for (i, curve) in outcome.curves.iter().enumerate() {
        let file = format!("curve-{i}.csv");
        write(dir.join(&file), &curve.to_csv())?;
        artifacts.push(format!("{}/{file}", config.name));
    }
    let certificate =
        serde_json::to_string_pretty(&outcome.certificate).expect("certificates serialize") + "\n";
    write(dir.join("certificate.json"), &certificate)?;
    artifacts.push(format!("{}/certificate.json", config.name));

    let leaked_max = outcome
        .curves
        .iter()
        .flat_map(|c| &c.points)
        .map(|p| (p.hi - p.lo) / 2.0)
        .fold(0.0, f64::max);
    let record = ExperimentRecord {
        name: config.name.clone(),
        experiment: config.experiment.clone(),
        anchor: b.anchor.to_string(),
        matched: outcome.verdict == settings.expect,
        expected: settings.expect.clone(),
        observed: outcome.verdict,
        verdict_text: outcome.verdict_text,
        horizon: outcome.horizon,
        residual: outcome.residual,
        leaked_max,
        budget_secs: settings.budget_secs,
        settings,
        artifacts,
    };
    let timing = timing(&record, elapsed);
    Ok((record, timing))
}

fn timing(record: &ExperimentRecord, elapsed: Duration) -> Timing {
    let seconds = elapsed.as_secs_f64();
    Timing {
        name: record.name.clone(),
        seconds,
        budget_secs: record.budget_secs,
        within_budget: seconds <= record.budget_secs as f64,
    }
}

/// Runs every experiment of the batch in parallel and writes its artifacts,
/// then `report.json` and `timing.json`, under the batch output directory.
pub fn run_experiment(config: &BatchConfig) -> Result<RunReport> {
    config.validate()?;
    let out = &config.output;
    fs::create_dir_all(out).map_err(|e| LabError::io(out, e))?;
    let results = config
        .experiments
        .par_iter()
        .map(|e| execute(e, out))
        .collect::<Result<Vec<_>>>()?;
    let (records, timings) = results.into_iter().unzip();
    let report = RunReport {
        config: config.experiments.clone(),
        records,
        timings,
    };
    write(out.join(REPORT_FILE), &report.to_json())?;
    write(
        out.join(TIMING_FILE),
        &(serde_json::to_string_pretty(&report.timings).expect("timings serialize") + "\n"),
    )?;
    Ok(report)
}

/// `ExpectationFailed` with the verdict diff unless every experiment matched.
pub fn check_expectations(report: &RunReport) -> Result<()> {
    if report.passed() {
        Ok(())
    } else {
        Err(LabError::ExpectationFailed(report.diff()))
    }
}
