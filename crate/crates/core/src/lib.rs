//! Numerical toolkit for degenerating polarized Hodge-type structures over
//! punctured polydiscs: commuting monodromy splittings, twisted frames,
//! period-domain geometry, orbit approximation checks, and asymptotic
//! norm-growth estimation.

pub mod cli;
pub mod error;
pub mod hodge;
pub mod monodromy;
pub mod numlin;
pub mod report;
pub mod sample;
pub mod verify;
pub mod vhs;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;

/// Build an `n x n` complex matrix from real entries in row-major order.
pub fn cmat_real(n: usize, rows: &[f64]) -> CMat {
    assert_eq!(rows.len(), n * n, "need n*n entries");
    CMat::from_row_slice(n, n, &rows.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
}

/// Build a complex vector from `(re, im)` pairs.
pub fn cvec(entries: &[(f64, f64)]) -> CVec {
    CVec::from_iterator(entries.len(), entries.iter().map(|&(re, im)| C64::new(re, im)))
}
