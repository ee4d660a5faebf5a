//! Levine–Tristram signatures of Seifert matrices and torus-averaged
//! signatures of Hermitian matrices over `C[Z^r]`.

mod hermitian;
mod seifert;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use hermitian::{
    sigma_integral, sigma_tolerance, witt_congruent_sigma_check, ComplexLaurent, HermitianLaurentMatrix,
    LaurentMatrixC, SigmaResult, WittCheck, MAX_TORUS_RANK,
};
pub use seifert::{
    alexander_at, integral_signature, levine_tristram, levine_tristram_at_root, SeifertMatrix,
};

/// Eigenvalues closer to zero than this make a form singular.
pub const ZERO_EIGENVALUE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignatureError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("det(V - Vᵀ) = {0}, not ±1")]
    NotSeifert(String),
    #[error("|ω| = {0}, not 1")]
    NotUnit(f64),
    #[error("form is singular at ω = {re} + {im}i")]
    SingularAtOmega { re: f64, im: f64 },
    #[error("resolution {given} is below the minimum {min}")]
    Resolution { given: usize, min: usize },
    #[error("entry ({i}, {j}) breaks P = P^†")]
    HermitianViolation { i: usize, j: usize },
    #[error("group rank {rank} exceeds the maximum {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("group ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// Signature of a Hermitian matrix, and whether it is singular: some
/// eigenvalue or the determinant within [`ZERO_EIGENVALUE`] of zero. Zero
/// eigenvalues are not counted.
pub fn hermitian_signature(m: &DMatrix<Complex64>) -> (i64, bool) {
    if m.nrows() == 0 {
        return (0, false);
    }
    let eig = m.clone().symmetric_eigenvalues();
    let mut sig = 0;
    let mut singular = eig.iter().product::<f64>().abs() < ZERO_EIGENVALUE;
    for &x in eig.iter() {
        if x.abs() < ZERO_EIGENVALUE {
            singular = true;
        } else if x > 0.0 {
            sig += 1;
        } else {
            sig -= 1;
        }
    }
    (sig, singular)
}
