//! Command outcomes and their two renderings: a JSON report for machines and
//! a text summary for people.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;
use shortcalc::{Matrix64, Report, Tolerance64};

use crate::problem::InputDigest;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Matrix(Matrix64),
    Real(f64),
    Count(u64),
    Flag(bool),
    Text(String),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: String,
    pub results: Vec<(String, Value)>,
    pub report: Report,
}

impl Outcome {
    pub fn new(command: &str, title: &str) -> Self {
        Self {
            command: command.into(),
            results: Vec::new(),
            report: Report::new(title),
        }
    }

    pub fn put(&mut self, name: &str, value: Value) -> &mut Self {
        self.results.push((name.into(), value));
        self
    }

    pub fn passed(&self) -> bool {
        self.report.all_passed()
    }
}

/// Everything besides the outcome that a report must carry.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub inputs: Vec<InputDigest>,
    pub tolerance: Tolerance64,
    pub seed: u64,
}

/// 17 significant digits, so equal doubles always print identically.
fn number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".into() };
    RawValue::from_string(text).expect("scientific notation is valid JSON")
}

struct Entry(shortcalc::Complex<f64>);

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            number(self.0.re).serialize(s)
        } else {
            [number(self.0.re), number(self.0.im)].serialize(s)
        }
    }
}

struct MatrixJson<'a>(&'a Matrix64);

impl Serialize for MatrixJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.0;
        let mut seq = s.serialize_seq(Some(m.nrows()))?;
        for i in 0..m.nrows() {
            let row: Vec<Entry> = m.row(i).iter().map(|z| Entry(*z)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Matrix(m) => MatrixJson(m).serialize(s),
            Value::Real(x) => number(*x).serialize(s),
            Value::Count(n) => s.serialize_u64(*n),
            Value::Flag(b) => s.serialize_bool(*b),
            Value::Text(t) => s.serialize_str(t),
        }
    }
}

struct Results<'a>(&'a [(String, Value)]);

impl Serialize for Results<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    passed: bool,
    residual: Box<RawValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ToleranceJson {
    rank_rel: Box<RawValue>,
    cmp_abs: Box<RawValue>,
    cmp_rel: Box<RawValue>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    inputs: &'a [InputDigest],
    tolerance: ToleranceJson,
    seed: u64,
    results: Results<'a>,
    title: &'a str,
    checks: Vec<CheckJson<'a>>,
    passed: bool,
}

pub fn render_json(outcome: &Outcome, prov: &Provenance) -> String {
    let t = &prov.tolerance;
    let doc = ReportJson {
        tool: "shortcalc",
        version: env!("CARGO_PKG_VERSION"),
        command: &outcome.command,
        inputs: &prov.inputs,
        tolerance: ToleranceJson {
            rank_rel: number(t.rank_rel),
            cmp_abs: number(t.cmp_abs),
            cmp_rel: number(t.cmp_rel),
        },
        seed: prov.seed,
        results: Results(&outcome.results),
        title: &outcome.report.title,
        checks: outcome
            .report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: &c.name,
                passed: c.passed,
                residual: number(c.residual),
                note: c.note.as_deref(),
            })
            .collect(),
        passed: outcome.passed(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn entry_text(z: &shortcalc::Complex<f64>) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn matrix_text(m: &Matrix64) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows())
        .map(|i| m.row(i).iter().map(entry_text).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "    [ {} ]", padded.join("  "));
    }
    out
}

pub fn render_text(outcome: &Outcome, prov: &Provenance) -> String {
    let t = &prov.tolerance;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "shortcalc {}  (rank_rel {:e}, cmp_abs {:e}, cmp_rel {:e}; seed {})",
        outcome.command, t.rank_rel, t.cmp_abs, t.cmp_rel, prov.seed
    );
    for d in &prov.inputs {
        let _ = writeln!(out, "input {}  sha256 {}", d.file, d.sha256);
    }
    for (name, v) in &outcome.results {
        match v {
            Value::Matrix(m) => {
                let _ = writeln!(out, "{name} ({}x{}) =", m.nrows(), m.ncols());
                out.push_str(&matrix_text(m));
            }
            Value::Real(x) => {
                let _ = writeln!(out, "{name} = {x:.6e}");
            }
            Value::Count(n) => {
                let _ = writeln!(out, "{name} = {n}");
            }
            Value::Flag(b) => {
                let _ = writeln!(out, "{name} = {b}");
            }
            Value::Text(s) => {
                let _ = writeln!(out, "{name} = {s}");
            }
        }
    }
    let _ = write!(out, "{}", outcome.report);
    let verdict = if outcome.passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "result: {verdict}");
    out
}
