//! JSON file formats.
//!
//! Space files look like
//! `{"labels": ["x","y","z"], "d": [[0,1,4],[1,0,4],[4,4,0]]}`; entries are
//! JSON numbers or exact rational strings such as `"3/2"`. A single string
//! entry switches the whole space to exact arithmetic. Map files look like
//! `{"map": [0,1,1]}`.

use std::fs;
use std::path::Path;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::metric::{self, FiniteMetricSpace, MetricError, RawDistanceMatrix};
use crate::scalar::{parse_rational, Scalar};
use crate::selfmap::{MapError, SelfMap};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry ({0},{1}) must be a number or a \"p/q\" string")]
    BadEntry(usize, usize),
    #[error("entry ({0},{1}) is a floating-point number; exact mode needs integers or \"p/q\" strings")]
    FloatInExactMode(usize, usize),
    #[error("malformed matrix: {0}")]
    Shape(MetricError),
    #[error("invalid map: {0}")]
    Map(#[from] MapError),
}

/// One distance entry as written in a space file.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Integer(i64),
    Float(f64),
    Rational(BigRational),
}

impl Entry {
    fn from_json(v: &Value) -> Option<Entry> {
        match v {
            Value::Number(num) => match num.as_i64() {
                Some(i) => Some(Entry::Integer(i)),
                None => num.as_f64().map(Entry::Float),
            },
            Value::String(s) => parse_rational(s).map(Entry::Rational),
            _ => None,
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Entry::Integer(i) => *i as f64,
            Entry::Float(f) => *f,
            Entry::Rational(r) => Scalar::to_f64(r),
        }
    }

    fn to_exact(&self) -> Option<BigRational> {
        match self {
            Entry::Integer(i) => Some(BigRational::from_integer((*i).into())),
            Entry::Float(_) => None,
            Entry::Rational(r) => Some(r.clone()),
        }
    }
}

#[derive(Deserialize)]
struct RawSpaceJson {
    #[serde(default)]
    labels: Option<Vec<String>>,
    d: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceFile {
    pub labels: Option<Vec<String>>,
    pub entries: Vec<Vec<Entry>>,
}

/// A parsed space in the arithmetic its file calls for.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedSpace {
    Float(FiniteMetricSpace<f64>),
    Exact(FiniteMetricSpace<BigRational>),
}

impl LoadedSpace {
    pub fn len(&self) -> usize {
        match self {
            LoadedSpace::Float(s) => s.len(),
            LoadedSpace::Exact(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl SpaceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let raw: RawSpaceJson = serde_json::from_str(text)?;
        let entries = raw
            .d
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| Entry::from_json(v).ok_or(FormatError::BadEntry(i, j)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpaceFile { labels: raw.labels, entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FormatError> {
        SpaceFile::parse(&read(path.as_ref())?)
    }

    /// Any `"p/q"` string entry puts the space in exact mode.
    pub fn has_rational_entries(&self) -> bool {
        self.entries.iter().flatten().any(|e| matches!(e, Entry::Rational(_)))
    }

    /// All entries are integers or rational strings.
    pub fn is_exactly_representable(&self) -> bool {
        self.entries.iter().flatten().all(|e| !matches!(e, Entry::Float(_)))
    }

    pub fn to_raw_f64(&self) -> Result<RawDistanceMatrix<f64>, FormatError> {
        let rows = self.entries.iter().map(|r| r.iter().map(Entry::to_f64).collect()).collect();
        RawDistanceMatrix::from_rows(rows)
            .and_then(|m| m.with_labels(self.labels.clone()))
            .map_err(FormatError::Shape)
    }

    /// `None` when some entry is a non-integer JSON number.
    pub fn to_raw_exact(&self) -> Option<Result<RawDistanceMatrix<BigRational>, FormatError>> {
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(Entry::to_exact).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(
            RawDistanceMatrix::from_rows(rows)
                .and_then(|m| m.with_labels(self.labels.clone()))
                .map_err(FormatError::Shape),
        )
    }

    /// Validates in exact mode when `exact` is requested or the file has
    /// rational entries, in float mode otherwise. `tol` applies to float
    /// mode; exact mode checks the triangle inequality with no slack.
    pub fn validate(&self, exact: bool, tol: f64) -> Result<Result<LoadedSpace, MetricError>, FormatError> {
        if exact || self.has_rational_entries() {
            let Some(raw) = self.to_raw_exact() else {
                let (i, j) = self.first_float_entry().expect("a non-integer number exists");
                return Err(FormatError::FloatInExactMode(i, j));
            };
            Ok(metric::validate(raw?, 0.0).map(LoadedSpace::Exact))
        } else {
            Ok(metric::validate(self.to_raw_f64()?, tol).map(LoadedSpace::Float))
        }
    }

    fn first_float_entry(&self) -> Option<(usize, usize)> {
        self.entries.iter().enumerate().find_map(|(i, r)| {
            r.iter().position(|e| matches!(e, Entry::Float(_))).map(|j| (i, j))
        })
    }
}

#[derive(Deserialize)]
struct MapJson {
    map: Vec<usize>,
}

pub fn parse_map(text: &str) -> Result<SelfMap, FormatError> {
    let m: MapJson = serde_json::from_str(text)?;
    Ok(SelfMap::new(m.map)?)
}

pub fn load_map(path: impl AsRef<Path>) -> Result<SelfMap, FormatError> {
    parse_map(&read(path.as_ref())?)
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

/// Space in file format; exact entries become `"p/q"` strings.
pub fn space_to_json<S: Scalar>(space: &FiniteMetricSpace<S>) -> Value {
    let d: Vec<Vec<Value>> =
        space.rows().iter().map(|r| r.iter().map(Scalar::to_json).collect()).collect();
    match space.labels() {
        Some(labels) => json!({ "labels": labels, "d": d }),
        None => json!({ "d": d }),
    }
}

pub fn map_to_json(f: &SelfMap) -> Value {
    json!({ "map": f.images() })
}
