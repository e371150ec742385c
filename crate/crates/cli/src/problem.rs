//! Problem files: named matrices and subspaces in JSON, or one real matrix in CSV.
//!
//! JSON layout: a top-level object whose keys are identifiers. A matrix is a
//! list of rows, each entry a real number or a `[re, im]` pair. A subspace is
//! `{"span": matrix}` whose columns span it. The reserved keys `tolerance`
//! (a number or `{"rank_rel", "cmp_abs", "cmp_rel"}`) and `seed` carry
//! overrides.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use sha2::{Digest, Sha256};
use shortcalc::{Complex, Matrix64, Psd64, Subspace64, Tolerance64};

use crate::error::{usage, CliError};

const RESERVED: [&str; 2] = ["tolerance", "seed"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemFile {
    pub matrices: BTreeMap<String, Matrix64>,
    /// Spanning sets as written; orthonormalized when resolved.
    pub subspaces: BTreeMap<String, Matrix64>,
    pub tolerance: Option<Tolerance64>,
    pub seed: Option<u64>,
}

/// File name and SHA-256 of one input, as embedded in reports.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        let file = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Self {
            file,
            sha256: format!("{:x}", Sha256::digest(bytes)),
        }
    }
}

impl ProblemFile {
    pub fn matrix(&self, id: &str) -> Result<&Matrix64, CliError> {
        self.matrices.get(id).ok_or_else(|| match self.subspaces.contains_key(id) {
            true => usage(format!("`{id}` is a subspace, expected a matrix")),
            false => usage(format!("no matrix named `{id}` in the input")),
        })
    }

    pub fn subspace(&self, id: &str, tol: &Tolerance64) -> Result<Subspace64, CliError> {
        match self.subspaces.get(id) {
            Some(span) => Ok(Subspace64::span(span, tol)),
            None if self.matrices.contains_key(id) => {
                Err(usage(format!("`{id}` is a matrix, expected a subspace {{\"span\": ...}}")))
            }
            None => Err(usage(format!("no subspace named `{id}` in the input"))),
        }
    }

    /// The matrix `id` as a positive semidefinite weight.
    pub fn weight(&self, id: &str, tol: &Tolerance64) -> Result<Psd64, CliError> {
        Ok(Psd64::new(self.matrix(id)?.clone(), tol)?)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.matrices.contains_key(id) || self.subspaces.contains_key(id)
    }

    /// Folds `other` into `self`; an identifier, tolerance or seed given twice is an error.
    pub fn merge(&mut self, other: ProblemFile) -> Result<(), CliError> {
        for id in other.matrices.keys().chain(other.subspaces.keys()) {
            if self.contains(id) {
                return Err(usage(format!("identifier `{id}` is defined in more than one input")));
            }
        }
        if self.tolerance.is_some() && other.tolerance.is_some() {
            return Err(usage("tolerance is set in more than one input"));
        }
        if self.seed.is_some() && other.seed.is_some() {
            return Err(usage("seed is set in more than one input"));
        }
        self.matrices.extend(other.matrices);
        self.subspaces.extend(other.subspaces);
        self.tolerance = self.tolerance.or(other.tolerance);
        self.seed = self.seed.or(other.seed);
        Ok(())
    }

    /// Canonical JSON text: identifiers in byte order, one row per line,
    /// numbers in shortest round-trip form. `parse_json` inverts it exactly.
    pub fn to_json(&self) -> String {
        let mut entries: Vec<(&String, &Matrix64, bool)> = self
            .matrices
            .iter()
            .map(|(k, m)| (k, m, false))
            .chain(self.subspaces.iter().map(|(k, m)| (k, m, true)))
            .collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));

        let mut fields = Vec::new();
        for (id, m, is_span) in entries {
            let body = matrix_json(m, "  ");
            let value = if is_span { format!("{{\"span\": {body}}}") } else { body };
            fields.push(format!("  {}: {value}", json_string(id)));
        }
        if let Some(seed) = self.seed {
            fields.push(format!("  \"seed\": {seed}"));
        }
        if let Some(t) = &self.tolerance {
            fields.push(format!(
                "  \"tolerance\": {{\"rank_rel\": {}, \"cmp_abs\": {}, \"cmp_rel\": {}}}",
                json_number(t.rank_rel),
                json_number(t.cmp_abs),
                json_number(t.cmp_rel)
            ));
        }
        if fields.is_empty() {
            return "{}\n".into();
        }
        format!("{{\n{}\n}}\n", fields.join(",\n"))
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite numbers always serialize")
}

fn matrix_json(m: &Matrix64, indent: &str) -> String {
    let mut out = String::from("[\n");
    for i in 0..m.nrows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| match z.im == 0.0 {
                true => json_number(z.re),
                false => format!("[{}, {}]", json_number(z.re), json_number(z.im)),
            })
            .collect();
        let sep = if i + 1 < m.nrows() { "," } else { "" };
        let _ = writeln!(out, "{indent}  [{}]{sep}", row.join(", "));
    }
    out.push_str(indent);
    out.push(']');
    out
}

/// Reads every path (JSON, or CSV when `csv` is set or the extension is
/// `.csv`), merges them, and returns the digests in argument order.
pub fn load(paths: &[PathBuf], csv: bool) -> Result<(ProblemFile, Vec<InputDigest>), CliError> {
    let mut merged = ProblemFile::default();
    let mut digests = Vec::with_capacity(paths.len());
    for path in paths {
        let bytes = std::fs::read(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        digests.push(InputDigest::of(path, &bytes));
        let text = String::from_utf8(bytes).map_err(|e| CliError::Parse {
            path: path.clone(),
            line: 0,
            column: 0,
            message: format!("not UTF-8: {e}"),
        })?;
        let file = if csv || is_csv(path) {
            parse_csv(&text, path)?
        } else {
            parse_json(&text, path)?
        };
        merged.merge(file)?;
    }
    Ok((merged, digests))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Parses one file, choosing CSV by extension.
pub fn parse_problem(path: &Path) -> Result<ProblemFile, CliError> {
    load(&[path.to_path_buf()], false).map(|(p, _)| p)
}

pub fn parse_json(text: &str, path: &Path) -> Result<ProblemFile, CliError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let mut out = ProblemFile {
        tolerance: raw.tolerance,
        seed: raw.seed,
        ..Default::default()
    };
    for (id, kind, rows) in raw.items {
        let m = build_matrix(&rows).map_err(|message| CliError::Dimension {
            path: path.to_path_buf(),
            field: id.clone(),
            message,
        })?;
        match kind {
            Kind::Matrix => out.matrices.insert(id, m),
            Kind::Span => out.subspaces.insert(id, m),
        };
    }
    Ok(out)
}

// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// A headerless CSV file holding one real matrix, named after the file stem.
pub fn parse_csv(text: &str, path: &Path) -> Result<ProblemFile, CliError> {
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| usage(format!("{}: cannot name a matrix after this path", path.display())))?;
    if RESERVED.contains(&id.as_str()) {
        return Err(usage(format!("{}: `{id}` is a reserved name", path.display())));
    }
    let parse_err = |line: usize, column: usize, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, 0, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| match field.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Complex::new(x, 0.0)),
                _ => Err(parse_err(line, j + 1, format!("`{field}` is not a finite real number"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let m = build_matrix(&rows).map_err(|message| CliError::Dimension {
        path: path.to_path_buf(),
        field: id.clone(),
        message,
    })?;
    let mut out = ProblemFile::default();
    out.matrices.insert(id, m);
    Ok(out)
}

fn build_matrix(rows: &[Vec<Complex<f64>>]) -> Result<Matrix64, String> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err("matrix is empty".into());
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(format!("row {} has {} entries, row 1 has {cols}", i + 1, r.len()));
    }
    Ok(Matrix64::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

#[derive(Clone, Copy)]
enum Kind {
    Matrix,
    Span,
}

type Rows = Vec<Vec<Complex<f64>>>;

struct RawFile {
    items: Vec<(String, Kind, Rows)>,
    tolerance: Option<Tolerance64>,
    seed: Option<u64>,
}

impl<'de> Deserialize<'de> for RawFile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_map(FileVisitor)
    }
}

struct FileVisitor;

impl<'de> Visitor<'de> for FileVisitor {
    type Value = RawFile;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an object of named matrices and subspaces")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<RawFile, A::Error> {
        let mut seen = BTreeSet::new();
        let mut out = RawFile {
            items: Vec::new(),
            tolerance: None,
            seed: None,
        };
        while let Some(key) = map.next_key::<String>()? {
            if !seen.insert(key.clone()) {
                return Err(de::Error::custom(format!("duplicate identifier `{key}`")));
            }
            match key.as_str() {
                "tolerance" => out.tolerance = Some(map.next_value::<ToleranceField>()?.0),
                "seed" => out.seed = Some(map.next_value()?),
                "" => return Err(de::Error::custom("empty identifier")),
                _ => {
                    let item: Item = map.next_value()?;
                    out.items.push((key, item.kind, item.rows));
                }
            }
        }
        Ok(out)
    }
}

struct Item {
    kind: Kind,
    rows: Rows,
}

impl<'de> Deserialize<'de> for Item {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ItemVisitor)
    }
}

struct ItemVisitor;

impl<'de> Visitor<'de> for ItemVisitor {
    type Value = Item;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a matrix (list of rows) or a subspace {\"span\": matrix}")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Item, A::Error> {
        let mut rows = Vec::new();
        while let Some(row) = seq.next_element::<Vec<Entry>>()? {
            rows.push(row.into_iter().map(|e| e.0).collect());
        }
        Ok(Item {
            kind: Kind::Matrix,
            rows,
        })
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Item, A::Error> {
        let mut rows = None;
        while let Some(key) = map.next_key::<String>()? {
            if key != "span" {
                return Err(de::Error::unknown_field(&key, &["span"]));
            }
            if rows.is_some() {
                return Err(de::Error::duplicate_field("span"));
            }
            let Item { rows: r, .. } = map.next_value_seed(SpanRows)?;
            rows = Some(r);
        }
        Ok(Item {
            kind: Kind::Span,
            rows: rows.ok_or_else(|| de::Error::missing_field("span"))?,
        })
    }
}

/// The value under `"span"` must itself be a matrix.
struct SpanRows;

impl<'de> de::DeserializeSeed<'de> for SpanRows {
    type Value = Item;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Item, D::Error> {
        d.deserialize_seq(ItemVisitor)
    }
}

struct Entry(Complex<f64>);

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(EntryVisitor)
    }
}

struct EntryVisitor;

impl<'de> Visitor<'de> for EntryVisitor {
    type Value = Entry;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a real number or a [re, im] pair")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Entry, E> {
        Ok(Entry(Complex::new(v, 0.0)))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
        self.visit_f64(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
        self.visit_f64(v as f64)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Entry, A::Error> {
        let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok(Entry(Complex::new(re, im)))
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceFields {
    rank_rel: f64,
    cmp_abs: f64,
    cmp_rel: f64,
}

struct ToleranceField(Tolerance64);

impl<'de> Deserialize<'de> for ToleranceField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ToleranceVisitor)
    }
}

struct ToleranceVisitor;

impl<'de> Visitor<'de> for ToleranceVisitor {
    type Value = ToleranceField;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a base tolerance or {\"rank_rel\", \"cmp_abs\", \"cmp_rel\"}")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ToleranceField, E> {
        Tolerance64::scaled_to(v)
            .map(ToleranceField)
            .ok_or_else(|| E::custom("tolerance must be finite and non-negative"))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ToleranceField, E> {
        self.visit_f64(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ToleranceField, E> {
        self.visit_f64(v as f64)
    }

    fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<ToleranceField, A::Error> {
        let t = ToleranceFields::deserialize(de::value::MapAccessDeserializer::new(map))?;
        Tolerance64::new(t.rank_rel, t.cmp_abs, t.cmp_rel)
            .map(ToleranceField)
            .ok_or_else(|| de::Error::custom("tolerance fields must be finite and non-negative"))
    }
}
