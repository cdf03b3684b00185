//! JSON matrix files.
//!
//! ```json
//! {
//!   "name": "example",
//!   "rows": 2,
//!   "cols": 2,
//!   "standard": [[1, 0], [0, 0]],
//!   "infinitesimal": [[0, 1], [0, 0]]
//! }
//! ```
//!
//! A right-hand side vector is a file with `cols = 1`. Numbers are written
//! with the shortest representation that reads back to the same `f64`
//! (at most 17 significant digits).

use serde::{Deserialize, Serialize, Serializer};

use crate::dualnum::DualMatrix;
use crate::error::{Error, Result};
use crate::realgi::RealMatrix;
use crate::solver::DualVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualMatrixFile {
    #[serde(default)]
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub standard: Vec<Vec<f64>>,
    pub infinitesimal: Vec<Vec<f64>>,
}

fn rows_of(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn check_part(part: &[Vec<f64>], rows: usize, cols: usize, what: &str) -> Result<Vec<f64>> {
    if part.len() != rows {
        return Err(Error::Format(format!(
            "{what} has {} rows, declared {rows}",
            part.len()
        )));
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (i, row) in part.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Format(format!(
                "{what} row {i} has {} entries, declared {cols}",
                row.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    Ok(flat)
}

impl DualMatrixFile {
    pub fn from_matrix(name: impl Into<String>, m: &DualMatrix) -> Self {
        DualMatrixFile {
            name: name.into(),
            rows: m.nrows(),
            cols: m.ncols(),
            standard: rows_of(m.std()),
            infinitesimal: rows_of(m.inf()),
        }
    }

    pub fn from_vector(name: impl Into<String>, v: &DualVector) -> Self {
        DualMatrixFile::from_matrix(name, &v.to_matrix())
    }

    pub fn to_matrix(&self) -> Result<DualMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Format("rows and cols must be at least 1".into()));
        }
        let std = check_part(&self.standard, self.rows, self.cols, "standard")?;
        let inf = check_part(&self.infinitesimal, self.rows, self.cols, "infinitesimal")?;
        DualMatrix::from_rows(self.rows, self.cols, &std, &inf)
    }

    pub fn to_vector(&self) -> Result<DualVector> {
        if self.cols != 1 {
            return Err(Error::Format(format!(
                "a vector file needs cols = 1, found {}",
                self.cols
            )));
        }
        let m = self.to_matrix()?;
        Ok(DualVector::column(&m, 0))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite numbers serialize")
    }
}

/// Parse a matrix file's text into a dual matrix.
pub fn parse_matrix(text: &str) -> Result<DualMatrix> {
    DualMatrixFile::parse(text)?.to_matrix()
}

/// Parse a vector file's text into a dual vector.
pub fn parse_vector(text: &str) -> Result<DualVector> {
    DualMatrixFile::parse(text)?.to_vector()
}

#[derive(Serialize)]
struct MatrixBody {
    rows: usize,
    cols: usize,
    standard: Vec<Vec<f64>>,
    infinitesimal: Vec<Vec<f64>>,
}

impl Serialize for DualMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixBody {
            rows: self.nrows(),
            cols: self.ncols(),
            standard: rows_of(self.std()),
            infinitesimal: rows_of(self.inf()),
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct VectorBody {
    standard: Vec<f64>,
    infinitesimal: Vec<f64>,
}

impl Serialize for DualVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorBody {
            standard: self.std().iter().copied().collect(),
            infinitesimal: self.inf().iter().copied().collect(),
        }
        .serialize(s)
    }
}
