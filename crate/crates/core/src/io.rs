//! JSON file formats.
//!
//! State file:
//!
//! ```json
//! {"dims": [2, 2], "matrix": [[[0.5, 0.0], [0.0, 0.0], …], …]}
//! ```
//!
//! `matrix` is row-major; each entry is `[re, im]`.
//!
//! Representation file: tensors keyed by 1-based subset strings (`"1"`,
//! `"12"`, `"123"`), each with `shape` and `data` (first index fastest), plus
//! a descriptive `convention` block that is ignored on input.
//!
//! Floats are written in shortest round-trip form, so reading back a written
//! file reproduces every value exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::bloch::{ComplexMatrix, DensityMatrix, HypermatrixRep, Subset};
use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;

type Rows = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    matrix: Rows,
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn from_rows(rows: &Rows) -> Result<ComplexMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!(
                "matrix row {} has {} entries, expected {n}",
                r + 1,
                row.len()
            )));
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    }))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a state file without validating the matrix as a state.
pub fn parse_state_raw(text: &str) -> Result<(Vec<usize>, ComplexMatrix)> {
    let f: StateFile = parse_json(text)?;
    let m = from_rows(&f.matrix)?;
    Ok((f.dims, m))
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let (dims, m) = parse_state_raw(text)?;
    DensityMatrix::new(dims, m)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let f = StateFile {
        dims: rho.dims().to_vec(),
        matrix: to_rows(rho.matrix()),
    };
    serde_json::to_string_pretty(&f).expect("state serializes") + "\n"
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    parse_state(&read(path)?)
}

pub fn write_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    write(path, &state_to_json(rho))
}

#[derive(Serialize, Deserialize)]
struct TensorEntry {
    shape: Vec<usize>,
    data: Vec<f64>,
}

#[derive(Serialize)]
struct Convention {
    basis: &'static str,
    scaling: &'static str,
    layout: &'static str,
    subsystems: &'static str,
}

const CONVENTION: Convention = Convention {
    basis: "orthonormal generalized Gell-Mann, Tr(l_a l_b) = delta_ab; symmetric (E_jk+E_kj)/sqrt2, then antisymmetric -i(E_jk-E_kj)/sqrt2, each over j<k lexicographic, then diagonal j=1..d-1",
    scaling: "T_S[a] = (prod_{k in S} d_k) * Tr(rho * l_a1 x ... x l_am); rho = (I + sum_S T_S . l_S) / prod d",
    layout: "data lists entries with the first index fastest",
    subsystems: "keys are 1-based subsystem sets; subsystem 1 is the most significant Kronecker factor",
};

struct OrderedTensors<'a>(&'a HypermatrixRep);

impl Serialize for OrderedTensors<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.iter().count()))?;
        for (subset, t) in self.0.iter() {
            map.serialize_entry(
                &subset.to_string(),
                &TensorEntry {
                    shape: t.shape().to_vec(),
                    data: t.data().to_vec(),
                },
            )?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct RepFileOut<'a> {
    dims: &'a [usize],
    convention: Convention,
    tensors: OrderedTensors<'a>,
}

#[derive(Deserialize)]
struct RepFileIn {
    dims: Vec<usize>,
    tensors: BTreeMap<String, TensorEntry>,
}

pub fn rep_to_json(rep: &HypermatrixRep) -> String {
    let f = RepFileOut {
        dims: rep.dims(),
        convention: CONVENTION,
        tensors: OrderedTensors(rep),
    };
    serde_json::to_string_pretty(&f).expect("representation serializes") + "\n"
}

pub fn parse_rep(text: &str) -> Result<HypermatrixRep> {
    let f: RepFileIn = parse_json(text)?;
    let mut tensors = BTreeMap::new();
    for (key, entry) in f.tensors {
        let subset = Subset::parse(&key)?;
        if subset.members().iter().any(|&k| k >= f.dims.len()) {
            return Err(Error::Parse(format!(
                "subset {key} names a subsystem beyond {}",
                f.dims.len()
            )));
        }
        tensors.insert(subset, Hypermatrix::new(entry.shape, entry.data)?);
    }
    HypermatrixRep::new(f.dims, tensors)
}

pub fn read_rep(path: &Path) -> Result<HypermatrixRep> {
    parse_rep(&read(path)?)
}

pub fn write_rep(path: &Path, rep: &HypermatrixRep) -> Result<()> {
    write(path, &rep_to_json(rep))
}

#[derive(Serialize, Deserialize)]
struct UnitariesFile {
    dims: Vec<usize>,
    unitaries: Vec<Rows>,
}

pub fn unitaries_to_json(us: &[ComplexMatrix]) -> String {
    let f = UnitariesFile {
        dims: us.iter().map(|u| u.nrows()).collect(),
        unitaries: us.iter().map(to_rows).collect(),
    };
    serde_json::to_string_pretty(&f).expect("unitaries serialize") + "\n"
}

pub fn parse_unitaries(text: &str) -> Result<Vec<ComplexMatrix>> {
    let f: UnitariesFile = parse_json(text)?;
    let us: Vec<ComplexMatrix> = f.unitaries.iter().map(from_rows).collect::<Result<_>>()?;
    if us.iter().map(|u| u.nrows()).ne(f.dims.iter().copied()) {
        return Err(Error::Parse("unitary sizes do not match dims".into()));
    }
    Ok(us)
}

pub fn write_unitaries(path: &Path, us: &[ComplexMatrix]) -> Result<()> {
    write(path, &unitaries_to_json(us))
}

pub fn read_unitaries(path: &Path) -> Result<Vec<ComplexMatrix>> {
    parse_unitaries(&read(path)?)
}
