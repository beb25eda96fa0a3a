//! JSON documents read and written by the CLI.

use std::fmt;
use std::path::Path;

use kposi_core::nonlinear::{Interval, NonlinearSystem, ScalarMap};
use kposi_core::{Mat, PositiveDiagonal};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, malformed or ill-shaped JSON.
    Usage(String),
    Core(kposi_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use kposi_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Capacity { .. } | E::Numeric(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<kposi_core::Error> for CliError {
    fn from(e: kposi_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Raw file contents kept for the input digest.
pub struct Input {
    pub label: String,
    pub bytes: Vec<u8>,
}

pub fn read_input(path: &Path) -> CliResult<Input> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(Input { label: path.display().to_string(), bytes })
}

pub fn parse_json<T: DeserializeOwned>(input: &Input) -> CliResult<T> {
    serde_json::from_slice(&input.bytes).map_err(|e| {
        usage(format!("{}:{}:{}: {e}", input.label, e.line(), e.column()))
    })
}

/// Rows × cols matrix with an optional exact rational prefactor such as "1/7".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
}

fn parse_scale(s: &str) -> CliResult<(f64, f64)> {
    let bad = || usage(format!("scale {s:?} is not of the form p/q"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| bad())?;
    let q: i64 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(usage(format!("scale {s:?} has a zero denominator")));
    }
    Ok((p as f64, q as f64))
}

impl MatrixDocument {
    pub fn from_mat(m: &Mat) -> Self {
        MatrixDocument { rows: m.n_rows(), cols: m.n_cols(), data: m.to_rows(), scale: None }
    }

    pub fn to_mat(&self) -> CliResult<Mat> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(usage(format!("data does not match rows = {}, cols = {}", self.rows, self.cols)));
        }
        let m = Mat::from_rows(&self.data)?;
        match &self.scale {
            None => Ok(m),
            Some(s) => {
                let (p, q) = parse_scale(s)?;
                // multiply then divide so "1/7" gives the correctly rounded v/7
                let data = m.as_slice().iter().map(|v| v * p / q).collect();
                Ok(Mat::new(self.rows, self.cols, data)?)
            }
        }
    }
}

/// `{"data": [...]}` holding a flat vector or a list of vectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDocument<T> {
    pub data: T,
}

/// A diagonal given either as `{"data": [d1, …]}` or as a diagonal MatrixDocument.
#[derive(Deserialize)]
#[serde(untagged)]
enum DiagonalInput {
    Vector(VectorDocument<Vec<f64>>),
    Matrix(MatrixDocument),
}

pub fn parse_diagonal(input: &Input) -> CliResult<PositiveDiagonal> {
    let entries = match parse_json::<DiagonalInput>(input) {
        Ok(DiagonalInput::Vector(v)) => v.data,
        Ok(DiagonalInput::Matrix(m)) => {
            let m = m.to_mat()?;
            if !m.is_square() || !m.is_diagonal() {
                return Err(usage(format!("{}: matrix is not square diagonal", input.label)));
            }
            m.diagonal()
        }
        Err(_) => {
            return Err(usage(format!(
                "{}: expected {{\"data\": [...]}} or a diagonal matrix document",
                input.label
            )))
        }
    };
    Ok(PositiveDiagonal::new(entries)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    #[serde(rename = "A")]
    pub a: MatrixDocument,
    pub maps: Vec<ScalarMap>,
    pub domain: (f64, f64),
}

impl SystemDocument {
    pub fn build(&self, validate: bool) -> CliResult<NonlinearSystem> {
        let a = self.a.to_mat()?;
        let domain = Interval::new(self.domain.0, self.domain.1)?;
        let sys = if validate {
            NonlinearSystem::new(a, self.maps.clone(), domain)?
        } else {
            NonlinearSystem::new_unchecked(a, self.maps.clone(), domain)?
        };
        Ok(sys)
    }
}
