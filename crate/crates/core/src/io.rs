//! JSON file formats.
//!
//! Matrix: `{"rows": R, "cols": C, "re": [[..]], "im": [[..]]}`, row-major,
//! with optional `"m"`, `"n"` for bipartite operators. Maps add `"in_dim"`
//! and `"out_dim"` to their Choi matrix. Vectors are
//! `{"len": L, "re": [..], "im": [..]}` with optional `"m"`, `"n"`.
//! Ensembles are `{"k", "m", "n", "terms": [{"weight", "re", "im"}]}`.

use serde::{Deserialize, Serialize};

use crate::cones::SchmidtEnsemble;
use crate::error::{Error, Result};
use crate::linalg::{BipartiteOperator, ComplexMatrix, ComplexVector, PureState, C64};
use crate::maps::MapRepr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub len: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleTerm {
    pub weight: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub terms: Vec<EnsembleTerm>,
}

fn parse_err(e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    let inner = e.into_inner();
    if path == "." {
        Error::Parse(inner.to_string())
    } else {
        Error::Parse(format!("field `{path}`: {inner}"))
    }
}

/// Deserializes text, naming the offending field on failure.
pub fn from_str<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let out = serde_path_to_error::deserialize(&mut de).map_err(parse_err)?;
    de.end().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(out)
}

/// Like [`from_str`] for an already parsed value.
pub fn from_value<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(parse_err)
}

impl MatrixFile {
    pub fn from_matrix(x: &ComplexMatrix) -> Self {
        let (rows, cols) = x.shape();
        let re = (0..rows).map(|i| (0..cols).map(|j| x[(i, j)].re).collect()).collect();
        let im = (0..rows).map(|i| (0..cols).map(|j| x[(i, j)].im).collect()).collect();
        Self { rows, cols, re, im, m: None, n: None, in_dim: None, out_dim: None }
    }

    pub fn from_operator(x: &BipartiteOperator) -> Self {
        Self { m: Some(x.m()), n: Some(x.n()), ..Self::from_matrix(x.matrix()) }
    }

    pub fn from_map(phi: &MapRepr) -> Self {
        Self { in_dim: Some(phi.in_dim()), out_dim: Some(phi.out_dim()), ..Self::from_operator(phi.choi()) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        check_rows("re", &self.re, self.rows, self.cols)?;
        check_rows("im", &self.im, self.rows, self.cols)?;
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| C64::new(self.re[i][j], self.im[i][j])))
    }

    pub fn to_operator(&self) -> Result<BipartiteOperator> {
        let mat = self.to_matrix()?;
        let (m, n) = match (self.m, self.n) {
            (Some(m), Some(n)) => (m, n),
            (None, _) => return Err(Error::Parse("missing field `m`".into())),
            (_, None) => return Err(Error::Parse("missing field `n`".into())),
        };
        if m * n != self.rows {
            return Err(Error::Parse(format!("field `m`·`n` = {} does not match `rows` = {}", m * n, self.rows)));
        }
        BipartiteOperator::new(mat, m, n)
    }

    pub fn to_map(&self) -> Result<MapRepr> {
        let mat = self.to_matrix()?;
        let (r, n) = match (self.in_dim, self.out_dim) {
            (Some(r), Some(n)) => (r, n),
            (None, _) => return Err(Error::Parse("missing field `in_dim`".into())),
            (_, None) => return Err(Error::Parse("missing field `out_dim`".into())),
        };
        if r * n != self.rows {
            return Err(Error::Parse(format!(
                "field `in_dim`·`out_dim` = {} does not match `rows` = {}",
                r * n,
                self.rows
            )));
        }
        Ok(MapRepr::from_choi(BipartiteOperator::new(mat, r, n)?))
    }
}

fn check_rows(field: &str, data: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if data.len() != rows {
        return Err(Error::Parse(format!("field `{field}` has {} rows, `rows` says {rows}", data.len())));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!("field `{field}` row {i} has {} entries, `cols` says {cols}", row.len())));
        }
    }
    Ok(())
}

fn check_len(field: &str, data: &[f64], len: usize) -> Result<()> {
    if data.len() != len {
        return Err(Error::Parse(format!("field `{field}` has {} entries, expected {len}", data.len())));
    }
    Ok(())
}

impl VectorFile {
    pub fn from_vector(v: &ComplexVector) -> Self {
        Self {
            len: v.len(),
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
            m: None,
            n: None,
        }
    }

    pub fn from_state(v: &PureState) -> Self {
        let d = v.dims();
        Self { m: Some(d.m), n: Some(d.n), ..Self::from_vector(v.amplitudes()) }
    }

    pub fn to_vector(&self) -> Result<ComplexVector> {
        check_len("re", &self.re, self.len)?;
        check_len("im", &self.im, self.len)?;
        Ok(ComplexVector::from_fn(self.len, |i, _| C64::new(self.re[i], self.im[i])))
    }

    /// Normalizes the amplitudes; `m`, `n` default to the supplied dims.
    pub fn to_state(&self, dims: Option<(usize, usize)>) -> Result<PureState> {
        let v = self.to_vector()?;
        let (m, n) = match (self.m, self.n, dims) {
            (Some(m), Some(n), _) => (m, n),
            (_, _, Some(d)) => d,
            _ => return Err(Error::Parse("missing field `m`/`n`".into())),
        };
        if m * n != self.len {
            return Err(Error::Parse(format!("field `len` = {} does not match m·n = {}", self.len, m * n)));
        }
        PureState::normalized(v, m, n)
    }
}

impl EnsembleFile {
    pub fn to_ensemble(&self) -> Result<SchmidtEnsemble> {
        let d = self.m * self.n;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            check_len(&format!("terms[{i}].re"), &t.re, d)?;
            check_len(&format!("terms[{i}].im"), &t.im, d)?;
            let v = ComplexVector::from_fn(d, |j, _| C64::new(t.re[j], t.im[j]));
            terms.push((t.weight, PureState::normalized(v, self.m, self.n)?));
        }
        SchmidtEnsemble::new(self.k, terms)
    }

    pub fn from_ensemble(ens: &SchmidtEnsemble) -> Self {
        let d = ens.dims();
        Self {
            k: ens.k(),
            m: d.m,
            n: d.n,
            terms: ens
                .terms()
                .iter()
                .map(|(w, v)| EnsembleTerm {
                    weight: *w,
                    re: v.amplitudes().iter().map(|z| z.re).collect(),
                    im: v.amplitudes().iter().map(|z| z.im).collect(),
                })
                .collect(),
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    from_str(text)
}

pub fn parse_operator(text: &str) -> Result<BipartiteOperator> {
    parse_matrix(text)?.to_operator()
}

pub fn parse_map(text: &str) -> Result<MapRepr> {
    parse_matrix(text)?.to_map()
}

pub fn parse_vector(text: &str) -> Result<VectorFile> {
    from_str(text)
}

pub fn parse_ensemble(text: &str) -> Result<SchmidtEnsemble> {
    from_str::<EnsembleFile>(text)?.to_ensemble()
}

pub fn operator_json(x: &BipartiteOperator) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_operator(x)).expect("plain data")
}

pub fn map_json(phi: &MapRepr) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_map(phi)).expect("plain data")
}
