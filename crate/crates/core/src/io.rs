//! Dataset and report files.
//!
//! Both are versioned JSON documents. Floats are written in the shortest
//! form that parses back to the same bits, so a save/load cycle is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::OrthoBasis;
use crate::separability::Hyperplane;
use crate::synthesis::{revalidate_properties, PropertyReport};

pub const DATASET_VERSION: u32 = 1;
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Generator parameters, free-form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
    /// Projection basis, for datasets produced by a projection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub version: u32,
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
    /// `k` rows of `n` entries in `{−1, +1}`.
    pub labels: Vec<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planes: Option<Vec<Hyperplane>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<DatasetMeta>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub data: LabeledPointSet,
    pub planes: Option<Vec<Hyperplane>>,
    pub metadata: DatasetMeta,
}

impl DatasetFile {
    pub fn new(data: &LabeledPointSet, planes: Option<Vec<Hyperplane>>, metadata: Option<DatasetMeta>) -> Self {
        Self {
            version: DATASET_VERSION,
            dimension: data.dim(),
            points: data.points().to_vec(),
            labels: (0..data.k())
                .map(|i| (0..data.n()).map(|j| data.label(i, j)).collect())
                .collect(),
            planes,
            metadata,
        }
    }

    /// Checks the schema-level invariants and builds the point set.
    pub fn into_loaded(self) -> Result<LoadedDataset> {
        if self.version != DATASET_VERSION {
            return Err(Error::InvariantViolation(format!(
                "unsupported dataset version {} (expected {DATASET_VERSION})",
                self.version
            )));
        }
        for (j, p) in self.points.iter().enumerate() {
            if p.len() != self.dimension {
                return Err(Error::InvariantViolation(format!(
                    "points[{j}] has {} coordinates but dimension is {}",
                    p.len(),
                    self.dimension
                )));
            }
        }
        if let Some(planes) = &self.planes {
            for (i, h) in planes.iter().enumerate() {
                if h.normal.len() != self.dimension {
                    return Err(Error::InvariantViolation(format!(
                        "planes[{i}] has a normal of length {} but dimension is {}",
                        h.normal.len(),
                        self.dimension
                    )));
                }
            }
        }
        let data = LabeledPointSet::new(self.points, self.labels)?;
        Ok(LoadedDataset {
            data,
            planes: self.planes,
            metadata: self.metadata.unwrap_or_default(),
        })
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

pub fn parse_dataset(text: &str) -> Result<LoadedDataset> {
    serde_json::from_str::<DatasetFile>(text).map_err(parse_error)?.into_loaded()
}

pub fn load_dataset(path: &Path) -> Result<LoadedDataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_dataset(&text)
}

pub fn save_dataset(path: &Path, file: &DatasetFile) -> Result<()> {
    write_text(path, &to_json(file)?)
}

/// Values of a function over a rectangular grid; `None` marks points
/// outside the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// One row per `y` tick.
    pub values: Vec<Vec<Option<f64>>>,
}

impl Grid {
    /// Header row of x ticks, then one row per y tick led by the tick.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y\\x");
        for x in &self.xs {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
        for (y, row) in self.ys.iter().zip(&self.values) {
            let _ = write!(out, "{y}");
            for v in row {
                match v {
                    Some(v) => {
                        let _ = write!(out, ",{v}");
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<String>,
    /// Projection basis the properties were evaluated under.
    pub basis: Vec<Vec<f64>>,
    pub r: usize,
    pub properties: Vec<PropertyReport>,
    /// `max_i |w_j·v_i|` per basis vector.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Command-specific result.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ReportFile {
    pub fn new(command: &str) -> Self {
        Self {
            version: REPORT_VERSION,
            command: command.to_string(),
            predicate: None,
            basis: Vec::new(),
            r: 0,
            properties: Vec::new(),
            residuals: Vec::new(),
            max_residual: 0.0,
            outcome: None,
            grid: None,
            timing_ms: None,
        }
    }

    /// Re-validates every certificate against `data` projected along the
    /// report's basis.
    pub fn validate(&self, data: &LabeledPointSet, residual_tol: f64) -> Result<()> {
        if self.version != REPORT_VERSION {
            return Err(Error::InvariantViolation(format!(
                "unsupported report version {}",
                self.version
            )));
        }
        if self.r != self.basis.len() {
            return Err(Error::InvariantViolation(format!(
                "r = {} but the basis has {} vectors",
                self.r,
                self.basis.len()
            )));
        }
        let basis = OrthoBasis::from_orthonormal(data.dim(), self.basis.clone(), 1e-9)?;
        revalidate_properties(data, &basis, &self.properties, residual_tol)
    }
}

pub fn parse_report(text: &str) -> Result<ReportFile> {
    serde_json::from_str(text).map_err(parse_error)
}

pub fn load_report(path: &Path) -> Result<ReportFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_report(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Json,
    CsvGrid,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv-grid" => Ok(ReportFormat::CsvGrid),
            other => Err(Error::BadParams(format!("unknown report format '{other}'"))),
        }
    }
}

pub fn write_report(report: &ReportFile, path: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Json => write_text(path, &to_json(report)?),
        ReportFormat::CsvGrid => {
            let grid = report
                .grid
                .as_ref()
                .ok_or_else(|| Error::BadParams("report has no grid to write".into()))?;
            write_text(path, &grid.to_csv())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_loads() {
        let d = parse_dataset(r#"{"version":1,"dimension":2,"points":[[0.5,1]],"labels":[[1]]}"#).unwrap();
        assert_eq!(d.data.n(), 1);
        assert_eq!(d.data.k(), 1);
    }

    #[test]
    fn zero_label_names_row_and_column() {
        let e = parse_dataset(r#"{"version":1,"dimension":1,"points":[[0],[1]],"labels":[[1,0]]}"#).unwrap_err();
        match e {
            Error::InvariantViolation(msg) => assert!(msg.contains("row 0") && msg.contains("column 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_a_location() {
        let e = parse_dataset("{\n  \"version\": 1,\n  \"dimension\": x\n}").unwrap_err();
        match e {
            Error::Parse { location, .. } => assert!(location.starts_with("line 3"), "{location}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_field_is_named() {
        let e = parse_dataset(r#"{"version":1,"dimension":1,"labels":[[1]]}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref message, .. } if message.contains("points")));
    }

    #[test]
    fn csv_shape() {
        let g = Grid {
            xs: vec![0.0, 0.5],
            ys: vec![1.0, 2.0, 3.0],
            values: vec![vec![Some(1.0), None]; 3],
        };
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert_eq!(csv.lines().next().unwrap(), "y\\x,0,0.5");
        assert_eq!(csv.lines().nth(1).unwrap(), "1,1,");
    }
}
