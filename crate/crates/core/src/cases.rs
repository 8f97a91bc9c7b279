//! Case files: schema, the built-in registry and directory loading.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::isomono::{Normalization, OdeScaling, Orientation, WeightRow};
use crate::reduction::ChartDef;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDef {
    pub family: usize,
    pub index: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftDef {
    pub coordinate: String,
    pub new: String,
    pub offset: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeafDef {
    pub tensor: usize,
    pub levels: Vec<LevelDef>,
    #[serde(default)]
    pub shifts: Vec<ShiftDef>,
    pub solves: Vec<(String, String)>,
    pub coordinates: Vec<String>,
    pub parameters: Vec<String>,
    #[serde(default)]
    pub units: Vec<String>,
}

/// The Hamiltonian `psi~_{family, hamiltonian}` of the leaf tensor, promoted
/// through `parameter -> time`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowDef {
    pub family: usize,
    pub hamiltonian: usize,
    pub parameter: String,
    pub time: String,
}

/// A Hamiltonian whose `A` is scanned against every leaf parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeDef {
    pub family: usize,
    pub hamiltonian: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarbouxDef {
    pub pairs: Vec<(String, String)>,
    pub map: BTreeMap<String, String>,
    #[serde(default)]
    pub units: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenDef {
    pub files: Vec<String>,
    #[serde(default)]
    pub normalization: Normalization,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeSource {
    pub file: String,
    pub pairs: Vec<(String, String)>,
    pub time: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<OdeScaling>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeDef {
    pub y: String,
    pub target: String,
    pub sources: Vec<OdeSource>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericDef {
    pub x0: Vec<f64>,
    #[serde(default = "default_span")]
    pub span: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Parameter values used by the numeric probes.
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
}

fn default_span() -> f64 {
    0.1
}

fn default_tol() -> f64 {
    1e-10
}

fn default_threshold() -> f64 {
    1e-8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseDefinition {
    pub id: String,
    pub title: String,
    pub algebra: String,
    pub n: usize,
    pub x0: BTreeMap<String, String>,
    pub chart: ChartDef,
    pub leaf: LeafDef,
    pub flows: Vec<FlowDef>,
    #[serde(default)]
    pub probes: Vec<ProbeDef>,
    pub darboux: DarbouxDef,
    #[serde(default)]
    pub parameter_choice: BTreeMap<String, String>,
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<GoldenDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<OdeDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericDef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightTables {
    pub rows: Vec<WeightRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum CaseError {
    #[error("unknown case {0}")]
    Unknown(String),
    #[error("{file}: {msg}")]
    Parse { file: String, msg: String },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("golden file {0} not found")]
    MissingGolden(String),
}

/// Case definitions together with the golden texts and weight tables they use.
#[derive(Clone, Debug)]
pub struct Registry {
    pub cases: Vec<CaseDefinition>,
    pub goldens: BTreeMap<String, String>,
    pub tables: WeightTables,
}

pub const BUILTIN_IDS: [&str; 10] = [
    "sl2n2-I-P2",
    "sl2n2-I-P4",
    "sl2n2-II-P1",
    "sl2n3-I-P22",
    "sl2n3-I-P4h",
    "sl2n3-I-H1120",
    "sl2n3-II-P1h",
    "sl2n3-II-P21",
    "sl2n3-II-Hm1412",
    "so5n1-cosgrove",
];

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../cases/", $name)))),*]
    };
}

const CASE_FILES: &[(&str, &str)] = embedded![
    "sl2n2-I-P2.json",
    "sl2n2-I-P4.json",
    "sl2n2-II-P1.json",
    "sl2n3-I-P22.json",
    "sl2n3-I-P4h.json",
    "sl2n3-I-H1120.json",
    "sl2n3-II-P1h.json",
    "sl2n3-II-P21.json",
    "sl2n3-II-Hm1412.json",
    "so5n1-cosgrove.json",
];

const GOLDEN_FILES: &[(&str, &str)] = embedded![
    "golden/sl2n2-I-P2.txt",
    "golden/sl2n2-I-P4.txt",
    "golden/sl2n2-II-P1.txt",
    "golden/4dimP1.H1.txt",
    "golden/4dimP1.H2.txt",
    "golden/4dimP21.H1.txt",
    "golden/4dimP21.H2.txt",
    "golden/4dimP22.H1.txt",
    "golden/4dimP22.H2.txt",
    "golden/4dimP4.H1.txt",
    "golden/4dimP4.H2.txt",
    "golden/1120.txt",
    "golden/-1412.txt",
    "golden/4dimCos.txt",
    "golden/4dimCos2.txt",
];

const TABLES: &str = include_str!("../../../cases/tables.json");

fn parse_json<T: for<'de> Deserialize<'de>>(file: &str, text: &str) -> Result<T, CaseError> {
    serde_json::from_str(text).map_err(|e| CaseError::Parse {
        file: file.to_string(),
        msg: e.to_string(),
    })
}

impl Registry {
    pub fn builtin() -> Registry {
        let cases = CASE_FILES
            .iter()
            .map(|(f, t)| parse_json(f, t).expect("built-in case file"))
            .collect();
        let goldens = GOLDEN_FILES
            .iter()
            .map(|(f, t)| (f.trim_start_matches("golden/").to_string(), t.trim().to_string()))
            .collect();
        Registry {
            cases,
            goldens,
            tables: parse_json("tables.json", TABLES).expect("built-in tables"),
        }
    }

    /// Loads every `*.json` case in `dir` (except `tables.json`), goldens from
    /// `dir/golden` and tables from `dir/tables.json`.
    pub fn from_dir(dir: &Path) -> Result<Registry, CaseError> {
        let io = |p: &Path, e| CaseError::Io(p.display().to_string(), e);
        let mut names: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        names.sort();
        let mut cases = Vec::new();
        let mut tables = None;
        for p in names {
            let text = std::fs::read_to_string(&p).map_err(|e| io(&p, e))?;
            let file = p.display().to_string();
            if p.file_name().is_some_and(|f| f == "tables.json") {
                tables = Some(parse_json(&file, &text)?);
            } else {
                cases.push(parse_json(&file, &text)?);
            }
        }
        let mut goldens = BTreeMap::new();
        let gdir = dir.join("golden");
        if gdir.is_dir() {
            for e in std::fs::read_dir(&gdir).map_err(|e| io(&gdir, e))? {
                let p = e.map_err(|e| io(&gdir, e))?.path();
                if p.extension().is_some_and(|x| x == "txt") {
                    let text = std::fs::read_to_string(&p).map_err(|e| io(&p, e))?;
                    goldens.insert(p.file_name().unwrap().to_string_lossy().into_owned(), text.trim().to_string());
                }
            }
        }
        Ok(Registry {
            cases,
            goldens,
            tables: tables.unwrap_or(WeightTables { rows: Vec::new() }),
        })
    }

    pub fn get(&self, id: &str) -> Result<&CaseDefinition, CaseError> {
        self.cases
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| CaseError::Unknown(id.to_string()))
    }

    pub fn golden(&self, file: &str) -> Result<&str, CaseError> {
        self.goldens
            .get(file)
            .map(|s| s.as_str())
            .ok_or_else(|| CaseError::MissingGolden(file.to_string()))
    }

    pub fn ids(&self) -> Vec<&str> {
        self.cases.iter().map(|c| c.id.as_str()).collect()
    }
}
