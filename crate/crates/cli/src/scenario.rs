//! Scenario documents (TOML). See `docs/scenario-format.md` for the schema.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lefschetz_core::linalg::Rational;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("scenario does not parse: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("unknown manifold '{name}' referenced by {by}")]
    UnknownManifold { name: String, by: String },
    #[error("unknown map '{name}' referenced by {by}")]
    UnknownMap { name: String, by: String },
    #[error("invalid number '{0}': expected an integer or a fraction p/q")]
    BadNumber(String),
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub config: ConfigSection,
    #[serde(default)]
    pub manifolds: BTreeMap<String, ManifoldEntry>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapEntry>,
    #[serde(default)]
    pub tasks: Vec<TaskEntry>,
}

#[derive(Debug, Clone, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigSection {
    /// Tolerance for floating point expectations.
    pub tolerance: Option<f64>,
    pub snap_tolerance: Option<f64>,
    pub quadrature_order: Option<usize>,
    pub winding_samples: Option<usize>,
    pub oracle_grid: Option<usize>,
    /// Grid points per coordinate for coincidence detection.
    pub grid: Option<usize>,
    pub max_budget: Option<usize>,
    pub seed: Option<u64>,
    pub max_radius: Option<f64>,
    pub confirm: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldEntry {
    Torus { dim: usize },
    Sphere { dim: usize },
    Triangulation { file: Option<String>, simplices: Option<String> },
}

/// An integer or a `"p/q"` string.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational, ScenarioError> {
        match self {
            Self::Int(v) => Ok(Rational::from_integer((*v).into())),
            Self::Text(s) => Rational::from_str(s.trim()).map_err(|_| ScenarioError::BadNumber(s.clone())),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapEntry {
    TorusLinear {
        domain: Option<String>,
        codomain: Option<String>,
        matrix: Vec<Vec<i64>>,
        #[serde(default)]
        offset: Vec<Number>,
    },
    CirclePower {
        domain: Option<String>,
        codomain: Option<String>,
        power: i64,
        offset: Option<Number>,
    },
    SphereRational {
        domain: Option<String>,
        codomain: Option<String>,
        /// Coefficients, constant term first.
        numerator: Vec<Number>,
        #[serde(default = "one")]
        denominator: Vec<Number>,
    },
    Expr {
        domain: String,
        codomain: String,
        exprs: String,
    },
    VertexMap {
        domain: String,
        codomain: String,
        images: Vec<usize>,
    },
    Identity {
        domain: String,
    },
}

fn one() -> Vec<Number> {
    vec![Number::Int(1)]
}

impl MapEntry {
    pub fn manifold_refs(&self) -> Vec<&str> {
        match self {
            Self::TorusLinear { domain, codomain, .. }
            | Self::CirclePower { domain, codomain, .. }
            | Self::SphereRational { domain, codomain, .. } => {
                domain.iter().chain(codomain.iter()).map(String::as_str).collect()
            }
            Self::Expr { domain, codomain, .. } | Self::VertexMap { domain, codomain, .. } => {
                vec![domain.as_str(), codomain.as_str()]
            }
            Self::Identity { domain } => vec![domain.as_str()],
        }
    }
}

/// Expected global invariant: a number, or class coefficients in the
/// `[x_J]` basis.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GlobalExpectation {
    Number(i64),
    Class(Vec<i64>),
}

#[derive(Debug, Clone)]
pub struct TaskEntry {
    pub name: Option<String>,
    pub task: Task,
}

// `name` sits next to the task fields; split it off so that `Task` can still
// reject unknown keys.
impl<'de> Deserialize<'de> for TaskEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let mut table = toml::Table::deserialize(d)?;
        let name = match table.remove("name") {
            None => None,
            Some(toml::Value::String(s)) => Some(s),
            Some(_) => return Err(D::Error::custom("task name must be a string")),
        };
        let task = Task::deserialize(toml::Value::Table(table)).map_err(D::Error::custom)?;
        Ok(Self { name, task })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    Betti {
        manifold: String,
        expect: Option<Vec<usize>>,
    },
    Pairing {
        manifold: String,
        degree: usize,
        expect: Option<Vec<Vec<Number>>>,
        expect_full_rank: Option<bool>,
    },
    Induced {
        map: String,
        degree: usize,
        expect: Option<Vec<Vec<Number>>>,
    },
    Lefschetz {
        f: String,
        g: String,
        expect: Option<Number>,
    },
    Indices {
        f: String,
        g: String,
        /// Multiset of local values.
        expect: Option<Vec<i64>>,
    },
    ResidueCheck {
        f: String,
        g: String,
        expect_global: Option<GlobalExpectation>,
        expect_indices: Option<Vec<i64>>,
    },
    Degree {
        /// A sphere self-map: global degree.
        map: Option<String>,
        /// `;`-separated components of `h: R^m -> R^m`: local degree.
        field: Option<String>,
        center: Option<Vec<f64>>,
        radius: Option<f64>,
        method: Option<String>,
        expect: Option<i64>,
        expect_raw: Option<f64>,
        tolerance: Option<f64>,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Betti { .. } => "betti",
            Self::Pairing { .. } => "pairing",
            Self::Induced { .. } => "induced",
            Self::Lefschetz { .. } => "lefschetz",
            Self::Indices { .. } => "indices",
            Self::ResidueCheck { .. } => "residue_check",
            Self::Degree { .. } => "degree",
        }
    }

    fn map_refs(&self) -> Vec<&str> {
        match self {
            Self::Induced { map, .. } => vec![map],
            Self::Lefschetz { f, g, .. } | Self::Indices { f, g, .. } | Self::ResidueCheck { f, g, .. } => vec![f, g],
            Self::Degree { map, .. } => map.iter().map(String::as_str).collect(),
            _ => vec![],
        }
    }

    fn manifold_refs(&self) -> Vec<&str> {
        match self {
            Self::Betti { manifold, .. } | Self::Pairing { manifold, .. } => vec![manifold],
            _ => vec![],
        }
    }
}

/// A parsed scenario and the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub base_dir: PathBuf,
    pub file_name: String,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let s: Scenario = toml::from_str(text)?;
    check_references(&s)?;
    Ok(s)
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })?;
    let scenario = parse_scenario(&text)?;
    Ok(LoadedScenario {
        scenario,
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        file_name: path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
    })
}

fn check_references(s: &Scenario) -> Result<(), ScenarioError> {
    for (name, entry) in &s.maps {
        for m in entry.manifold_refs() {
            if !s.manifolds.contains_key(m) {
                return Err(ScenarioError::UnknownManifold { name: m.to_string(), by: format!("map '{name}'") });
            }
        }
    }
    for (i, t) in s.tasks.iter().enumerate() {
        let by = format!("task {} ({})", i + 1, t.task.kind());
        for m in t.task.map_refs() {
            if !s.maps.contains_key(m) {
                return Err(ScenarioError::UnknownMap { name: m.to_string(), by });
            }
        }
        for m in t.task.manifold_refs() {
            if !s.manifolds.contains_key(m) {
                return Err(ScenarioError::UnknownManifold { name: m.to_string(), by });
            }
        }
        if let Task::Degree { map, field, .. } = &t.task {
            if map.is_some() == field.is_some() {
                return Err(ScenarioError::Invalid {
                    context: by,
                    message: "a degree task needs exactly one of 'map' and 'field'".into(),
                });
            }
        }
    }
    Ok(())
}
