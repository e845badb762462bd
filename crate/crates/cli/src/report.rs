use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCHEMA_ID: &str = "tmslab.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    /// Cover-search budget for measure brackets.
    pub measure: usize,
    /// Sample points for the axiom checks.
    pub samples: usize,
    /// Random probes for operator norms.
    pub probes: usize,
    /// Random P_δ families per certificate.
    pub spot_checks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub bracket: f64,
}

/// Everything a report depends on besides the inputs. The output path is not
/// part of it, so the same run written to two files gives identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub budgets: Budgets,
    pub tolerances: Tolerances,
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let b = &self.budgets;
        for (name, v) in [("measure", b.measure), ("samples", b.samples), ("probes", b.probes), ("spot_checks", b.spot_checks)] {
            if v == 0 {
                return Err(CliError::Usage(format!("budget {name} must be at least 1")));
            }
        }
        if self.tolerances.bracket.is_nan() || self.tolerances.bracket <= 0.0 {
            return Err(CliError::Usage("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    TmsPasses,
    TmsFailsAxiom {
        axiom: u8,
    },
    Certified,
    Falsified {
        eps: f64,
    },
    /// A sampled property check comes out clean.
    Holds,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::TmsPasses => write!(f, "tms_passes"),
            Expectation::TmsFailsAxiom { axiom } => write!(f, "tms_fails_axiom({axiom})"),
            Expectation::Certified => write!(f, "certified"),
            Expectation::Falsified { eps } => write!(f, "falsified({eps})"),
            Expectation::Holds => write!(f, "holds"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryResult {
    pub id: String,
    pub source: String,
    pub expected: String,
    pub actual: String,
    pub met: bool,
    pub detail: String,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub met: usize,
    pub violated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: RunConfig,
    pub entries: Vec<EntryResult>,
    pub summary: Summary,
}

impl Report {
    /// Entries are ordered by id whatever order they finished in.
    pub fn new(command: &str, config: RunConfig, mut entries: Vec<EntryResult>) -> Result<Self, CliError> {
        if entries.is_empty() {
            return Err(CliError::Usage("nothing to report".into()));
        }
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        let met = entries.iter().filter(|e| e.met).count();
        let summary = Summary { total: entries.len(), met, violated: entries.len() - met };
        Ok(Report { schema: SCHEMA_ID.into(), command: command.into(), config, entries, summary })
    }

    pub fn all_met(&self) -> bool {
        self.summary.violated == 0
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// The flat verdict table: id, expected, actual, detail.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "expected", "actual", "detail"]).map_err(|e| CliError::Io(e.to_string()))?;
        for e in &self.entries {
            w.write_record([&e.id, &e.expected, &e.actual, &e.detail]).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self) -> Result<String, CliError> {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    /// Writes to `path`, or to stdout when there is none.
    pub fn emit(&self, path: Option<&str>) -> Result<(), CliError> {
        let text = self.render()?;
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {p}: {e}"))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}

impl std::str::FromStr for Expectation {
    type Err = CliError;

    /// Parses the same strings `Display` produces, e.g. `tms_fails_axiom(2)`.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("cannot parse expectation {s:?}"));
        let arg = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        match s {
            "tms_passes" => Ok(Expectation::TmsPasses),
            "certified" => Ok(Expectation::Certified),
            "holds" => Ok(Expectation::Holds),
            _ => {
                if let Some(k) = arg("tms_fails_axiom(") {
                    return k.parse().map(|axiom| Expectation::TmsFailsAxiom { axiom }).map_err(|_| bad());
                }
                if let Some(e) = arg("falsified(") {
                    return e.parse().map(|eps| Expectation::Falsified { eps }).map_err(|_| bad());
                }
                Err(bad())
            }
        }
    }
}
