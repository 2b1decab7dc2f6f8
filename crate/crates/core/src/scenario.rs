//! Scenario files: quantum (complex matrices as `[re, im]` pairs) and
//! box-world (probabilities as `"num/den"` strings).
//!
//! Pauli outcome convention: outcome `a` of a two-outcome measurement stands
//! for the eigenvalue `(-1)^a`, so effect 0 is the `+1` projector.

use serde::{Deserialize, Serialize};

use crate::boxworld::{BoxEntry, GptAssemblage, GptState};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::quantum::{DensityMatrix, Povm, SharedState};
use crate::scalar::{parse_rational, Rational};

/// `[re, im]` entries, row-major as a list of rows.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Werner { p: f64 },
    Singlet,
    Explicit { rho: MatrixJson },
}

/// Which checks `check` runs; everything defaults on except joint
/// measurability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckOptions {
    pub lhs: bool,
    /// Indices into `bob_povms` forming the PV test family; `None` means all.
    pub pv_tests: Option<Vec<usize>>,
    pub joint_measurability: bool,
    pub cjwr: bool,
    pub certainty_eps: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            lhs: true,
            pv_tests: None,
            joint_measurability: false,
            cjwr: true,
            certainty_eps: crate::quantum::DEFAULT_CERTAINTY_EPS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumScenario {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub state: StateSpec,
    pub alice_povms: Vec<Vec<MatrixJson>>,
    #[serde(default)]
    pub bob_povms: Vec<Vec<MatrixJson>>,
    #[serde(default)]
    pub checks: CheckOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxScenario {
    pub entries: Vec<BoxEntry>,
    /// Bob inputs forming the PV test family; defaults to all inputs.
    #[serde(default)]
    pub pv_tests: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    Quantum(QuantumScenario),
    Box(BoxScenario),
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<_>> = m.iter().map(|r| r.iter().map(|[re, im]| c(*re, *im)).collect()).collect();
    ComplexMatrix::from_rows(&rows)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn povms_from_json(list: &[Vec<MatrixJson>], who: &str) -> Result<Vec<Povm>> {
    list.iter()
        .enumerate()
        .map(|(i, effects)| {
            let mats = effects.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
            Povm::new(format!("{who}[{i}]"), mats)
        })
        .collect()
}

impl QuantumScenario {
    pub fn shared_state(&self) -> Result<SharedState> {
        let state = match &self.state {
            StateSpec::Werner { p } => SharedState::werner(*p)?,
            StateSpec::Singlet => SharedState::singlet(),
            StateSpec::Explicit { rho } => {
                SharedState::new(DensityMatrix::new(matrix_from_json(rho)?)?, self.dim_a, self.dim_b)?
            }
        };
        if state.dim_a() != self.dim_a || state.dim_b() != self.dim_b {
            return Err(Error::Schema(format!(
                "state dimensions {}x{} do not match dimA = {}, dimB = {}",
                state.dim_a(),
                state.dim_b(),
                self.dim_a,
                self.dim_b
            )));
        }
        Ok(state)
    }

    pub fn alice(&self) -> Result<Vec<Povm>> {
        povms_from_json(&self.alice_povms, "alice")
    }

    pub fn bob(&self) -> Result<Vec<Povm>> {
        povms_from_json(&self.bob_povms, "bob")
    }
}

impl BoxScenario {
    pub fn assemblage(&self) -> Result<GptAssemblage> {
        let nx = self.entries.iter().map(|e| e.x + 1).max().unwrap_or(0);
        let mut grid: Vec<Vec<Option<(Rational, GptState)>>> = vec![Vec::new(); nx];
        for e in &self.entries {
            let weight = parse_rational(&e.weight)
                .ok_or_else(|| Error::Schema(format!("entry (x={}, a={}): bad weight {:?}", e.x, e.a, e.weight)))?;
            let table = e
                .table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| {
                            parse_rational(s).ok_or_else(|| {
                                Error::Schema(format!("entry (x={}, a={}): bad probability {s:?}", e.x, e.a))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let slot = &mut grid[e.x];
            if slot.len() <= e.a {
                slot.resize(e.a + 1, None);
            }
            if slot[e.a].is_some() {
                return Err(Error::Schema(format!("duplicate entry (x={}, a={})", e.x, e.a)));
            }
            slot[e.a] = Some((weight, GptState::new(table)?));
        }
        let entries = grid
            .into_iter()
            .enumerate()
            .map(|(x, row)| {
                if row.is_empty() {
                    return Err(Error::Schema(format!("setting x={x} has no entries")));
                }
                row.into_iter()
                    .enumerate()
                    .map(|(a, e)| e.ok_or_else(|| Error::Schema(format!("missing entry (x={x}, a={a})"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GptAssemblage::new(entries)
    }

    pub fn from_assemblage(asm: &GptAssemblage) -> Self {
        let mut entries = Vec::new();
        for (x, row) in asm.entries().iter().enumerate() {
            for (a, (w, st)) in row.iter().enumerate() {
                entries.push(BoxEntry {
                    x,
                    a,
                    weight: crate::scalar::Scalar::render(w),
                    table: st
                        .table()
                        .iter()
                        .map(|r| r.iter().map(crate::scalar::Scalar::render).collect())
                        .collect(),
                });
            }
        }
        Self { entries, pv_tests: None }
    }
}

fn schema_error(e: serde_json::Error) -> Error {
    Error::Schema(format!("{e} (line {}, column {})", e.line(), e.column()))
}

/// Parses either schema; box scenarios are recognized by a top-level
/// `entries` field.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(schema_error)?;
    let is_box = value.get("entries").is_some();
    if is_box {
        serde_json::from_str(text).map(Scenario::Box).map_err(schema_error)
    } else {
        serde_json::from_str(text).map(Scenario::Quantum).map_err(schema_error)
    }
}

pub fn load_scenario(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}
