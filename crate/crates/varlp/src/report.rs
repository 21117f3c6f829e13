//! Check results and atomic JSON/CSV report emission.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use varlp_core::geometry::FamilyDescriptor;
use varlp_core::measure::GridSpec;

use crate::error::{io_err, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Direction of the comparison between statistic and bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    AtMost,
    AtLeast,
}

impl Polarity {
    pub fn holds(self, statistic: f64, bound: f64) -> bool {
        match self {
            Polarity::AtMost => statistic <= bound,
            Polarity::AtLeast => statistic >= bound,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::AtMost => "<=",
            Polarity::AtLeast => ">=",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub grids: Vec<GridSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub corpus: Vec<String>,
    /// Auxiliary named quantities (sub-statistics, counts, fitted values).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// One verified claim: `pass` is `statistic <polarity> bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub paper_ref: String,
    pub statistic: f64,
    pub bound: f64,
    pub polarity: Polarity,
    pub pass: bool,
    pub provenance: Provenance,
    /// Wall time; kept out of the results array so reruns serialize identically.
    #[serde(skip)]
    pub runtime_ms: f64,
}

impl CheckResult {
    pub fn new(check_id: &str, paper_ref: &str, statistic: f64, polarity: Polarity, bound: f64) -> Self {
        CheckResult {
            check_id: check_id.to_string(),
            paper_ref: paper_ref.to_string(),
            statistic,
            bound,
            polarity,
            pass: polarity.holds(statistic, bound),
            provenance: Provenance::default(),
            runtime_ms: 0.0,
        }
    }

    pub fn at_most(check_id: &str, paper_ref: &str, statistic: f64, bound: f64) -> Self {
        Self::new(check_id, paper_ref, statistic, Polarity::AtMost, bound)
    }

    pub fn at_least(check_id: &str, paper_ref: &str, statistic: f64, bound: f64) -> Self {
        Self::new(check_id, paper_ref, statistic, Polarity::AtLeast, bound)
    }

    /// A violation count that must be zero.
    pub fn zero(check_id: &str, paper_ref: &str, violations: usize) -> Self {
        Self::at_most(check_id, paper_ref, violations as f64, 0.0)
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.provenance.values.insert(key.to_string(), v);
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.provenance.notes.push(s.into());
        self
    }

    pub fn grid(mut self, g: &GridSpec) -> Self {
        self.provenance.grids.push(g.clone());
        self
    }

    pub fn family(mut self, f: &FamilyDescriptor) -> Self {
        self.provenance.families.push(f.clone());
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.provenance.seed = Some(s);
        self
    }

    pub fn alpha(mut self, a: f64) -> Self {
        self.provenance.alpha = Some(a);
        self
    }

    pub fn corpus<S: AsRef<str>>(mut self, ids: impl IntoIterator<Item = S>) -> Self {
        self.provenance.corpus.extend(ids.into_iter().map(|s| s.as_ref().to_string()));
        self
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: {:.6e} {} {:.6e} ({:.0} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.statistic,
            self.polarity.as_str(),
            self.bound,
            self.runtime_ms
        )
    }
}

/// Run `f` and stamp the elapsed time on every result it returns.
pub fn timed<F>(f: F) -> Result<Vec<CheckResult>>
where
    F: FnOnce() -> Result<Vec<CheckResult>>,
{
    let t = Instant::now();
    let mut out = f()?;
    let ms = t.elapsed().as_secs_f64() * 1e3;
    let share = if out.is_empty() { 0.0 } else { ms / out.len() as f64 };
    for r in &mut out {
        r.runtime_ms = share;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timestamp {
    pub created_unix_s: u64,
    pub runtime_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub config: serde_json::Value,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<CheckResult>,
    pub timestamp: Timestamp,
}

impl Report {
    pub fn new(suite: &str, config: serde_json::Value, results: Vec<CheckResult>) -> Self {
        let passed = results.iter().filter(|r| r.pass).count();
        let runtime_ms = results.iter().map(|r| (r.check_id.clone(), r.runtime_ms)).collect();
        let created_unix_s = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            config,
            passed,
            failed: results.len() - passed,
            results,
            timestamp: Timestamp { created_unix_s, runtime_ms },
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(bytes).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn csv_bytes(results: &[CheckResult]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_id", "paper_ref", "statistic", "bound", "polarity", "pass", "runtime_ms"])?;
    for r in results {
        w.write_record([
            r.check_id.clone(),
            r.paper_ref.clone(),
            format!("{:e}", r.statistic),
            format!("{:e}", r.bound),
            r.polarity.as_str().to_string(),
            r.pass.to_string(),
            format!("{:.3}", r.runtime_ms),
        ])?;
    }
    w.into_inner().map_err(|e| crate::HarnessError::Config(e.to_string()))
}

/// Write `<stem>.json` and `<stem>.csv` into `dir`; returns both paths.
pub fn emit_report(report: &Report, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let json_path = dir.join(format!("{stem}.json"));
    let csv_path = dir.join(format!("{stem}.csv"));
    let mut json = serde_json::to_vec_pretty(report)?;
    json.push(b'\n');
    write_atomic(&json_path, &json)?;
    write_atomic(&csv_path, &csv_bytes(&report.results)?)?;
    Ok((json_path, csv_path))
}
