//! Report tables and their CSV / JSON-lines serialization.
//!
//! Parameter columns are named plainly; measured columns carry their method
//! tag in the header, e.g. `lower_bound[lower]`. Column order is the order in
//! which a runner pushes fields and is identical for every row.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value as Json};

use crate::error::{Error, Result};

/// How a measured value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    /// Computed exactly (closed form, or exhaustive over a stated finite family).
    Exact,
    /// Certified lower bound.
    Lower,
    /// Upper bound resting on a calibrated constant.
    CalibratedUpper,
    /// Statistical estimate (regression slopes, growth verdicts).
    Estimate,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::Exact => "exact",
            Tag::Lower => "lower",
            Tag::CalibratedUpper => "calibrated-upper",
            Tag::Estimate => "estimate",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    fn csv_cell(&self) -> String {
        match self {
            Value::Null => String::new(),
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            // Shortest round-trip form, with an exponent for very large or small values.
            Value::Float(x) => format!("{x:?}"),
            Value::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Null => Json::Null,
            Value::Bool(b) => Json::Bool(*b),
            Value::Int(i) => Json::from(*i),
            // Non-finite floats have no JSON form; they become null.
            Value::Float(x) => serde_json::Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub name: String,
    /// `None` for parameter columns.
    pub tag: Option<Tag>,
    pub value: Value,
}

impl Field {
    pub fn header(&self) -> String {
        match self.tag {
            Some(t) => format!("{}[{}]", self.name, t.as_str()),
            None => self.name.clone(),
        }
    }
}

/// One ordered record of parameters and tagged measurements.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportRow {
    pub fields: Vec<Field>,
}

impl ReportRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn param(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.fields.push(Field {
            name: name.to_owned(),
            tag: None,
            value: value.into(),
        });
        self
    }

    pub fn measured(mut self, name: &str, tag: Tag, value: impl Into<Value>) -> Self {
        self.fields.push(Field {
            name: name.to_owned(),
            tag: Some(tag),
            value: value.into(),
        });
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|f| f.name == name).map(|f| &f.value)
    }

    pub fn headers(&self) -> Vec<String> {
        self.fields.iter().map(Field::header).collect()
    }

    fn tagged(&self, tag: Tag) -> Vec<f64> {
        self.fields
            .iter()
            .filter(|f| f.tag == Some(tag))
            .filter_map(|f| f.value.as_f64())
            .collect()
    }

    /// False when the row's first lower column exceeds one of its
    /// calibrated-upper columns by more than the relative tolerance.
    pub fn bounds_consistent(&self, tol: f64) -> bool {
        let Some(lower) = self.tagged(Tag::Lower).first().copied() else {
            return true;
        };
        self.tagged(Tag::CalibratedUpper).iter().all(|u| lower <= u * (1.0 + tol) + tol)
    }
}

/// Output serialization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    /// One JSON object per row.
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" | "jsonl" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format '{other}', expected csv or json"))),
        }
    }
}

/// A table plus the checks that failed while producing it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub rows: Vec<ReportRow>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Self {
            title: title.to_owned(),
            ..Self::default()
        }
    }

    /// Appends a row; every row must have the first row's columns.
    pub fn push(&mut self, row: ReportRow) {
        if let Some(first) = self.rows.first() {
            assert_eq!(first.headers(), row.headers(), "report rows must share one column layout");
        }
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records a failure for every row whose lower bound exceeds its calibrated upper bound.
    pub fn guard_bounds(&mut self, tol: f64) {
        for (i, row) in self.rows.iter().enumerate() {
            if !row.bounds_consistent(tol) {
                self.failures.push(format!("{}: row {i} has a lower bound above its calibrated upper bound", self.title));
            }
        }
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_jsonl(out),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf, format)?;
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if let Some(first) = self.rows.first() {
            w.write_record(first.headers())?;
        }
        for row in &self.rows {
            w.write_record(row.fields.iter().map(|f| f.value.csv_cell()))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_jsonl(&self, out: &mut dyn Write) -> Result<()> {
        for row in &self.rows {
            let obj: Map<String, Json> = row.fields.iter().map(|f| (f.header(), f.value.json())).collect();
            serde_json::to_writer(&mut *out, &Json::Object(obj))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}
