//! Symmetric eigendecomposition and the closed-form spectra used to check it.

mod closed_form;
mod eig;

use thiserror::Error;

pub use closed_form::{
    antiregular_modal, antiregular_spectrum, check_majorization, path_modal, path_spectrum,
};
pub use eig::{
    default_gtol, eig_sym, eigenspaces, residual, EigDecomp, Eigenspace, CONVERGENCE,
    DEFAULT_RTOL, MAX_SWEEPS,
};
pub(crate) use eig::normalize_sign;

/// Threshold below which an eigenvector entry counts as zero, relative to
/// the vector's largest entry.
pub const ZERO_ENTRY_RTOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("eigenpair {column} fails the residual check ({residual:e})")]
    Residual { column: usize, residual: f64 },
    #[error("order must be at least {min}, got {k}")]
    OrderTooSmall { min: usize, k: usize },
    #[error("spectrum has {values} values but the sequence has {sequence}")]
    LengthMismatch { values: usize, sequence: usize },
    #[error("construction failed: {0}")]
    Construction(String),
}

/// `|v_i| > 1e-8 · ‖v‖∞`.
pub fn is_nonzero_entry(v: &[f64], i: usize) -> bool {
    let big = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v[i].abs() > ZERO_ENTRY_RTOL * big
}
