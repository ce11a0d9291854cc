//! Tensor files: `{ "dim", "order", "entries": [{ "occupation", "coeff" }] }`.
//!
//! Entries are canonical occupation vectors. Missing entries are zero;
//! duplicates and occupations of the wrong order or length are rejected.

use std::fs;
use std::path::Path;

use chaosdet_core::SymTensor;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub dim: usize,
    pub order: usize,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub occupation: Vec<u32>,
    pub coeff: f64,
}

impl TensorFile {
    /// Every canonical entry, zeros included, in rank order.
    pub fn from_tensor(t: &SymTensor<f64>) -> Self {
        let entries = t.iter().map(|(occupation, &coeff)| Entry { occupation, coeff }).collect();
        TensorFile { dim: t.dim(), order: t.order(), entries }
    }

    pub fn to_tensor(&self) -> chaosdet_core::Result<SymTensor<f64>> {
        SymTensor::from_entries(self.dim, self.order, self.entries.iter().map(|e| (e.occupation.clone(), e.coeff)))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

pub fn parse_tensor(text: &str) -> std::result::Result<SymTensor<f64>, String> {
    let file: TensorFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.to_tensor().map_err(|e| e.to_string())
}

pub fn read_tensor(path: &Path) -> Result<SymTensor<f64>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    let file: TensorFile = serde_json::from_str(&text).map_err(|source| Error::Parse { path: path.into(), source })?;
    Ok(file.to_tensor()?)
}

pub fn write_tensor(path: &Path, t: &SymTensor<f64>) -> Result<()> {
    fs::write(path, TensorFile::from_tensor(t).to_json()).map_err(|source| Error::Io { path: path.into(), source })
}
