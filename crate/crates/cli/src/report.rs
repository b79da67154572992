//! Run reports and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub config: ConfigEcho,
    pub tasks: Vec<TaskReport>,
    pub summary: Summary,
}

/// Effective numerical settings. The seed is deliberately absent: reports
/// for different seeds must compare byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConfigEcho {
    pub tolerance: f64,
    pub snap_tolerance: f64,
    pub quadrature_order: usize,
    pub winding_samples: usize,
    pub oracle_grid: usize,
    pub grid: Option<usize>,
    pub max_budget: usize,
    pub max_radius: f64,
    pub confirm: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// No expectations were given.
    Done,
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Done => "done",
            Self::Pass => "pass",
            Self::Fail => "FAIL",
            Self::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    Input,
    NonConvergence,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TaskError {
    pub class: ErrorClass,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TaskReport {
    pub index: usize,
    pub name: String,
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<TaskResult>,
    /// One line per failed expectation.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub mismatches: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<TaskError>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TaskResult {
    Betti {
        betti: Vec<usize>,
        euler: i64,
    },
    Pairing {
        degree: usize,
        matrix: Vec<Vec<String>>,
        determinant: String,
        full_rank: bool,
    },
    Induced {
        degree: usize,
        backend: String,
        matrix: Vec<Vec<String>>,
    },
    Lefschetz {
        backend: String,
        value: String,
        reverse: String,
        symmetry_holds: bool,
    },
    Coincidence(CoincidenceResult),
    Degree(DegreeReport),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoincidenceResult {
    pub global: GlobalValue,
    pub local_sum: GlobalValue,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symmetry: Option<SymmetryReport>,
    pub components: Vec<ComponentReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GlobalValue {
    Number { value: i64 },
    Class { terms: Vec<ClassTerm> },
    LocalOnly,
}

impl std::fmt::Display for GlobalValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Number { value } => write!(f, "{value}"),
            Self::Class { terms } => {
                let t: Vec<String> = terms.iter().map(|t| format!("{}·{}", t.coefficient, t.label)).collect();
                write!(f, "{}", t.join(" + "))
            }
            Self::LocalOnly => write!(f, "local-only"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassTerm {
    pub label: String,
    pub coefficient: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SymmetryReport {
    pub reverse: GlobalValue,
    pub sign: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComponentReport {
    pub label: String,
    pub location: String,
    pub dimension: usize,
    /// `index` or `class_coefficient`.
    pub kind: String,
    pub value: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub class: Option<Vec<i64>>,
    pub method: String,
    pub raw: Option<f64>,
    pub residual: Option<f64>,
    pub radius: Option<f64>,
    pub chart_sign: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub confirmation: Option<Confirmation>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Confirmation {
    pub method: String,
    pub value: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DegreeReport {
    pub scope: String,
    pub value: i64,
    pub method: String,
    pub raw: Option<f64>,
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct Summary {
    pub tasks: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub exit_code: i32,
}

/// Exit code: 2 if any input error, else 3 if any non-convergence, else 1
/// if any expectation failed, else 0.
pub fn exit_code(tasks: &[TaskReport]) -> i32 {
    let has = |c: ErrorClass| tasks.iter().any(|t| t.error.as_ref().is_some_and(|e| e.class == c));
    if has(ErrorClass::Input) {
        2
    } else if has(ErrorClass::NonConvergence) {
        3
    } else if tasks.iter().any(|t| t.status == Status::Fail) {
        1
    } else {
        0
    }
}

pub fn summarize(tasks: &[TaskReport]) -> Summary {
    Summary {
        tasks: tasks.len(),
        passed: tasks.iter().filter(|t| t.status == Status::Pass).count(),
        failed: tasks.iter().filter(|t| t.status == Status::Fail).count(),
        errors: tasks.iter().filter(|t| t.status == Status::Error).count(),
        exit_code: exit_code(tasks),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(r: &RunReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => emit_text(r),
    }
}

fn emit_text(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}", r.scenario);
    for t in &r.tasks {
        let _ = writeln!(out, "[{}] {:<14} {:<24} {}", t.index, t.kind, t.name, t.status.as_str());
        if let Some(res) = &t.result {
            text_result(&mut out, res);
        }
        for m in &t.mismatches {
            let _ = writeln!(out, "    mismatch: {m}");
        }
        if let Some(e) = &t.error {
            let class = match e.class {
                ErrorClass::Input => "input error",
                ErrorClass::NonConvergence => "no convergence",
            };
            let _ = writeln!(out, "    {class}: {}", e.message);
        }
        if let Some(ms) = t.elapsed_ms {
            let _ = writeln!(out, "    elapsed {ms:.1} ms");
        }
    }
    let s = &r.summary;
    let _ = writeln!(
        out,
        "{} tasks: {} passed, {} failed, {} errors (exit {})",
        s.tasks, s.passed, s.failed, s.errors, s.exit_code
    );
    out
}

fn text_result(out: &mut String, res: &TaskResult) {
    match res {
        TaskResult::Betti { betti, euler } => {
            let b: Vec<String> = betti.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "    betti ({})  euler {euler}", b.join(", "));
        }
        TaskResult::Pairing { degree, matrix, determinant, full_rank } => {
            let _ = writeln!(out, "    pairing degree {degree}  det {determinant}  full rank {full_rank}");
            text_matrix(out, matrix);
        }
        TaskResult::Induced { degree, backend, matrix } => {
            let _ = writeln!(out, "    H^{degree} ({backend})");
            text_matrix(out, matrix);
        }
        TaskResult::Lefschetz { backend, value, reverse, symmetry_holds } => {
            let _ = writeln!(out, "    L(f,g) = {value}  L(g,f) = {reverse}  symmetry {symmetry_holds}  ({backend})");
        }
        TaskResult::Coincidence(c) => {
            let width = c.components.iter().map(|x| x.location.chars().count()).max().unwrap_or(0);
            let lw = c.components.iter().map(|x| x.label.len()).max().unwrap_or(0);
            for x in &c.components {
                let what = if x.kind == "index" { "index" } else { "coefficient" };
                let mut line = format!(
                    "    {:<lw$} @ {:<width$} : {what} {} ({})",
                    x.label,
                    x.location,
                    x.value,
                    x.method,
                    lw = lw,
                    width = width
                );
                if let Some(cf) = &x.confirmation {
                    let _ = write!(line, " confirmed by {} = {}", cf.method, cf.value);
                }
                if let Some(r) = x.residual {
                    if x.method != "jacobian_sign" {
                        let _ = write!(line, " residual {r:.2e}");
                    }
                }
                let _ = writeln!(out, "{line}");
            }
            let _ = writeln!(out, "    global {}  local sum {}  verdict {}", c.global, c.local_sum, c.verdict);
            if let Some(s) = &c.symmetry {
                let _ = writeln!(out, "    reverse {}  sign {}  symmetry {}", s.reverse, s.sign, s.holds);
            }
        }
        TaskResult::Degree(d) => {
            let mut line = format!("    {} degree {} ({})", d.scope, d.value, d.method);
            if let (Some(raw), Some(res)) = (d.raw, d.residual) {
                let _ = write!(line, " raw {raw:.9} residual {res:.2e}");
            }
            let _ = writeln!(out, "{line}");
        }
    }
}

fn text_matrix(out: &mut String, m: &[Vec<String>]) {
    let w = m.iter().flatten().map(String::len).max().unwrap_or(0);
    for row in m {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "      [{}]", cells.join(" "));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let tasks = vec![TaskReport {
            index: 1,
            name: "s2".into(),
            kind: "residue_check".into(),
            status: Status::Pass,
            result: Some(TaskResult::Coincidence(CoincidenceResult {
                global: GlobalValue::Number { value: 5 },
                local_sum: GlobalValue::Number { value: 5 },
                verdict: "pass".into(),
                symmetry: None,
                components: vec![ComponentReport {
                    label: "S_1".into(),
                    location: "z=(0.000000, 0.000000)".into(),
                    dimension: 0,
                    kind: "index".into(),
                    value: 2,
                    class: None,
                    method: "winding".into(),
                    raw: Some(2.0000000000000004),
                    residual: Some(4.440892098500626e-16),
                    radius: Some(0.1),
                    chart_sign: 1,
                    confirmation: Some(Confirmation { method: "oracle".into(), value: 2 }),
                }],
            })),
            mismatches: vec![],
            error: None,
            elapsed_ms: None,
        }];
        RunReport {
            scenario: "x.toml".into(),
            config: ConfigEcho {
                tolerance: 1e-6,
                snap_tolerance: 1e-6,
                quadrature_order: 16,
                winding_samples: 64,
                oracle_grid: 16,
                grid: None,
                max_budget: 6,
                max_radius: 0.1,
                confirm: true,
            },
            summary: summarize(&tasks),
            tasks,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = emit_report(&r, Format::Json);
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(emit_report(&back, Format::Json), text);
    }

    #[test]
    fn text_component_line() {
        let text = emit_report(&sample(), Format::Text);
        assert!(text.contains("S_1 @ z=(0.000000, 0.000000) : index 2 (winding)"), "{text}");
    }

    #[test]
    fn exit_code_precedence() {
        let mut r = sample();
        assert_eq!(exit_code(&r.tasks), 0);
        r.tasks[0].status = Status::Fail;
        assert_eq!(exit_code(&r.tasks), 1);
        let mut t = r.tasks[0].clone();
        t.status = Status::Error;
        t.error = Some(TaskError { class: ErrorClass::NonConvergence, message: String::new() });
        r.tasks.push(t.clone());
        assert_eq!(exit_code(&r.tasks), 3);
        t.error = Some(TaskError { class: ErrorClass::Input, message: String::new() });
        r.tasks.push(t);
        assert_eq!(exit_code(&r.tasks), 2);
    }

    #[test]
    fn empty_report() {
        let r = RunReport { tasks: vec![], summary: summarize(&[]), ..sample() };
        assert_eq!(r.summary.exit_code, 0);
        let back: RunReport = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(back, r);
    }
}
