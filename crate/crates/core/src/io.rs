//! Game and snapshot file formats, and table output.
//!
//! Game files are JSON objects:
//!
//! ```json
//! {"quota": 0.5, "majors": [{"name": "A", "weight": 6}, {"weight": 4}], "ocean": 90}
//! ```
//!
//! A major may also be written as a bare number. Snapshot files are CSV with
//! the header `entity,share`, shares in percent, and an optional `OCEAN` row;
//! without it the ocean is whatever is left of 100.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::OceanicGame;

pub const OCEAN_ROW: &str = "OCEAN";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MajorEntry {
    Weight(f64),
    Named {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        weight: f64,
    },
}

impl MajorEntry {
    pub fn weight(&self) -> f64 {
        match self {
            MajorEntry::Weight(w) => *w,
            MajorEntry::Named { weight, .. } => *weight,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            MajorEntry::Weight(_) => None,
            MajorEntry::Named { name, .. } => name.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub quota: f64,
    #[serde(default)]
    pub majors: Vec<MajorEntry>,
    pub ocean: f64,
}

impl GameFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("game file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game file serializes")
    }

    pub fn to_game(&self) -> Result<OceanicGame> {
        OceanicGame::with_labels(
            self.quota,
            self.majors.iter().map(MajorEntry::weight).collect(),
            self.ocean,
            self.majors
                .iter()
                .map(|m| m.name().map(str::to_owned))
                .collect(),
        )
    }

    pub fn from_game(game: &OceanicGame) -> Self {
        Self {
            quota: game.quota(),
            majors: game
                .majors()
                .iter()
                .zip(game.labels())
                .map(|(&weight, name)| MajorEntry::Named {
                    name: name.clone(),
                    weight,
                })
                .collect(),
            ocean: game.ocean(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub rows: Vec<(String, f64)>,
    /// Explicit `OCEAN` row, if present.
    pub ocean: Option<f64>,
}

impl SnapshotFile {
    pub fn named_total(&self) -> f64 {
        self.rows.iter().map(|(_, s)| s).sum()
    }

    pub fn ocean_share(&self) -> f64 {
        self.ocean
            .unwrap_or_else(|| (100.0 - self.named_total()).max(0.0))
    }

    /// The game in file order, with shares as weights.
    pub fn to_game(&self, quota: f64) -> Result<OceanicGame> {
        let ocean = self.ocean_share();
        let ocean = if ocean < 1e-9 { 0.0 } else { ocean };
        OceanicGame::with_labels(
            quota,
            self.rows.iter().map(|(_, s)| *s).collect(),
            ocean,
            self.rows.iter().map(|(n, _)| Some(n.clone())).collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["entity", "share"])
            .expect("in-memory write");
        for (name, share) in &self.rows {
            w.write_record([name.as_str(), &share.to_string()])
                .expect("in-memory write");
        }
        if let Some(ocean) = self.ocean {
            w.write_record([OCEAN_ROW, &ocean.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

pub fn parse_snapshot(text: &str) -> Result<SnapshotFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedRow {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    if headers.len() != 2 || &headers[0] != "entity" || &headers[1] != "share" {
        return Err(Error::MalformedRow {
            line: 1,
            reason: format!(
                "expected header `entity,share`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    let mut ocean = None;
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let name = record[0].to_string();
        if name.is_empty() {
            return Err(Error::MalformedRow {
                line,
                reason: "empty entity name".into(),
            });
        }
        let share: f64 = record[1].parse().map_err(|_| Error::MalformedRow {
            line,
            reason: format!("share `{}` is not a number", &record[1]),
        })?;
        if !share.is_finite() || share <= 0.0 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("share must be positive, got {share}"),
            });
        }
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateEntity { line, name });
        }
        if name == OCEAN_ROW {
            ocean = Some(share);
        } else {
            rows.push((name, share));
        }
    }
    if rows.is_empty() && ocean.is_none() {
        return Err(Error::EmptySnapshot);
    }
    let total = rows.iter().map(|(_, s)| s).sum::<f64>() + ocean.unwrap_or(0.0);
    if total > 100.0 + 1e-9 {
        return Err(Error::SharesExceedTotal(total));
    }
    Ok(SnapshotFile { rows, ocean })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Loads a game file; `.csv` files are read as snapshots.
pub fn load_game(path: &Path, snapshot_quota: f64) -> Result<OceanicGame> {
    let text = read(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        parse_snapshot(&text)?.to_game(snapshot_quota)
    } else {
        GameFile::parse(&text)?.to_game()
    }
}

pub fn load_snapshot(path: &Path) -> Result<SnapshotFile> {
    parse_snapshot(&read(path)?)
}

/// `%g`-style formatting with `digits` significant digits, always with a
/// decimal point and no locale.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format_sig(*x, 6),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Text(s) => serde_json::Value::from(s.as_str()),
            Cell::Num(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Int(i) => serde_json::Value::from(*i),
            Cell::Bool(b) => serde_json::Value::from(*b),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)
            .map_err(|e| Error::Io(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json_rows(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}
