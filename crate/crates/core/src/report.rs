//! Run reports: JSON summaries of verdicts, witnesses and scan tables.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lp::Status;
use crate::quantum::PredictabilityRecord;
use crate::scalar::Scalar;
use crate::steering::{Decision, DescribeHidden, Gap, MeshInfo, SteeringVerdict, ThresholdBracket};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelTerm {
    pub strategy: Vec<usize>,
    pub hidden: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub rows: Vec<String>,
    pub functional: Vec<String>,
    pub value: String,
    pub lhs_bound: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub name: String,
    pub status: Status,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshInfo>,
    pub lp_rows: usize,
    pub lp_columns: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Vec<ModelTerm>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<Gap>,
}

impl VerdictSummary {
    pub fn from_decision<H: DescribeHidden, T: Scalar>(name: impl Into<String>, d: &Decision<H, T>) -> Self {
        let mut s = Self {
            name: name.into(),
            status: d.status(),
            exact: T::is_exact(),
            mesh: d.mesh,
            lp_rows: d.num_rows,
            lp_columns: d.num_columns,
            model: None,
            certificate: None,
            gap: None,
        };
        match &d.verdict {
            SteeringVerdict::Feasible(m) => {
                s.model = Some(
                    m.terms
                        .iter()
                        .map(|t| ModelTerm {
                            strategy: t.strategy.responses.clone(),
                            hidden: t.hidden.describe(),
                            weight: t.weight.render(),
                        })
                        .collect(),
                )
            }
            SteeringVerdict::Infeasible(w) => {
                s.certificate = Some(CertificateSummary {
                    rows: w.rows.clone(),
                    functional: w.functional.iter().map(Scalar::render).collect(),
                    value: w.value.render(),
                    lhs_bound: w.lhs_bound.render(),
                })
            }
            SteeringVerdict::Undecided(g) => s.gap = Some(*g),
        }
        s
    }
}

/// Column-labelled string table, written out as CSV.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
        w.write_record(&self.columns).map_err(csv_error)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> crate::error::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => crate::error::Error::Internal(format!("csv: {other:?}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub lp_tol: f64,
    pub certainty_eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub tolerances: Tolerances,
    pub verdicts: Vec<VerdictSummary>,
    pub witness_values: BTreeMap<String, f64>,
    /// Exact quantities (rationals as "num/den").
    pub exact_values: BTreeMap<String, String>,
    pub checks: BTreeMap<String, bool>,
    pub predictability: Vec<PredictabilityRecord>,
    pub brackets: BTreeMap<String, ThresholdBracket>,
    pub notes: Vec<String>,
    pub table: Option<Table>,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, tolerances: Tolerances) -> Self {
        Self {
            command: command.into(),
            version: VERSION.into(),
            inputs: BTreeMap::new(),
            tolerances,
            verdicts: Vec::new(),
            witness_values: BTreeMap::new(),
            exact_values: BTreeMap::new(),
            checks: BTreeMap::new(),
            predictability: Vec::new(),
            brackets: BTreeMap::new(),
            notes: Vec::new(),
            table: None,
            timing_ms: 0.0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.inputs.insert(key.into(), v);
    }

    pub fn verdict(&self, name: &str) -> Option<&VerdictSummary> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::error::Error::Internal(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Schema(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Plain-text digest for terminals.
    pub fn summary(&self) -> String {
        let mut out = format!("{} (steercert {})\n", self.command, self.version);
        for (k, v) in &self.exact_values {
            out += &format!("  {k} = {v}\n");
        }
        for (k, v) in &self.witness_values {
            out += &format!("  {k} = {v:.6}\n");
        }
        for (k, v) in &self.checks {
            out += &format!("  {k}: {v}\n");
        }
        for v in &self.verdicts {
            let mesh = v.mesh.map(|m| format!(" (mesh {})", m.vertices)).unwrap_or_default();
            out += &format!("  {}: {}{mesh}\n", v.name, v.status);
        }
        for (k, b) in &self.brackets {
            let f = b.feasible_max.map_or("none".into(), |x| format!("{x:.5}"));
            let i = b.infeasible_min.map_or("none".into(), |x| format!("{x:.5}"));
            out += &format!("  {k}: feasible up to {f}, infeasible from {i}\n");
        }
        if !self.predictability.is_empty() {
            out += &format!("  certain contexts: {}\n", self.predictability.len());
        }
        for n in &self.notes {
            out += &format!("  note: {n}\n");
        }
        out += &format!("  time: {:.1} ms\n", self.timing_ms);
        out
    }
}
