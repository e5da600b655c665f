//! File formats: Matrix Market matrices and case directories.

mod mmio;

pub use mmio::{
    parse_matrix_market, read_matrix, read_vector, to_matrix_market, write_matrix, write_vector,
};

use std::path::{Path, PathBuf};

use crate::dense::{Matrix, Vector};
use crate::error::{check_dim, Result};
use crate::generators::{CaseMetadata, GeneratedCase};

pub const MATRIX_FILE: &str = "A.mtx";
pub const PRECOND_FILE: &str = "H.mtx";
pub const RHS_FILE: &str = "b.mtx";
pub const CASE_FILE: &str = "case.json";

/// A case loaded back from disk.
#[derive(Debug, Clone)]
pub struct CaseFiles {
    pub a: Matrix,
    pub h: Matrix,
    pub b: Vector,
    pub metadata: CaseMetadata,
}

/// Writes `A.mtx`, `H.mtx`, `b.mtx` and `case.json` into `dir`, creating it if needed.
pub fn write_case(dir: impl AsRef<Path>, case: &GeneratedCase) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let paths: Vec<PathBuf> = [MATRIX_FILE, PRECOND_FILE, RHS_FILE, CASE_FILE]
        .iter()
        .map(|f| dir.join(f))
        .collect();
    write_matrix(&paths[0], &case.a_dense)?;
    write_matrix(&paths[1], &case.h_dense)?;
    write_vector(&paths[2], &case.b)?;
    std::fs::write(
        &paths[3],
        serde_json::to_string_pretty(&case.metadata)? + "\n",
    )?;
    Ok(paths)
}

pub fn read_metadata(path: impl AsRef<Path>) -> Result<CaseMetadata> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn read_case(dir: impl AsRef<Path>) -> Result<CaseFiles> {
    let dir = dir.as_ref();
    let a = read_matrix(dir.join(MATRIX_FILE))?;
    let h = read_matrix(dir.join(PRECOND_FILE))?;
    let b = read_vector(dir.join(RHS_FILE))?;
    let metadata = read_metadata(dir.join(CASE_FILE))?;
    check_dim("case matrix (square)", a.rows(), a.cols())?;
    check_dim("case preconditioner", a.rows(), h.rows())?;
    check_dim("case preconditioner (square)", h.rows(), h.cols())?;
    check_dim("case rhs", a.rows(), b.dim())?;
    check_dim("case.json n", a.rows(), metadata.n)?;
    Ok(CaseFiles { a, h, b, metadata })
}
