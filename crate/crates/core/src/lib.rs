//! Multigrid methods for banded Toeplitz and circulant linear systems,
//! driven by the generating functions (symbols) of the matrices and of
//! the grid transfer operators.
//!
//! The crate is organized around a single currency, the [`symbol::Symbol`]
//! type: a d-variate trigonometric polynomial with finitely many Fourier
//! coefficients. Matrices, transfer operators and optimality checkers are
//! all derived from symbols:
//!
//! - [`symbol`] — coefficient algebra, zero/order detection, LF/HF orders,
//!   standard transfer families, and the Galerkin coarse-symbol map.
//! - [`operators`] — Toeplitz/circulant construction, down-sampling,
//!   prolongation/restriction, explicit Galerkin triple products.
//! - [`smoothers`] — relaxed Richardson and Gauss-Seidel sweeps.
//! - [`cycles`] — hierarchy construction, TGM/V/W cycles, reporting.
//! - [`analysis`] — two-grid and V-cycle optimality condition checkers.
//! - [`experiments`] — batch runners for the reference experiment tables.

pub mod analysis;
pub mod cycles;
pub mod experiments;
pub mod operators;
pub mod smoothers;
pub mod symbol;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("matrix size {n} is smaller than the symbol bandwidth {bandwidth}")]
    SizeBelowBandwidth { n: usize, bandwidth: usize },
    #[error("symbol has non-real matrix entries (max imaginary part {0:.3e})")]
    NonRealSymbol(f64),
    #[error("analysis unsupported: {0}")]
    UnsupportedAnalysis(String),
    #[error("symbol is identically zero; zero order is undefined")]
    ZeroSymbol,
    #[error("symbol has no zero at the requested point")]
    NoZero,
    #[error("symbol has {0} detected zeros; a unique zero is required")]
    MultipleZeros(usize),
    #[error("transfer conditions violated at mirror point ({0:.6}): order {1} + {2} < {3}")]
    ConditionViolated(f64, usize, usize, usize),
    #[error("coarse matrix at level {level} is numerically singular")]
    SingularCoarseMatrix { level: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero diagonal entry at row {0}")]
    ZeroDiagonal(usize),
    #[error("stabilization unsupported: {0}")]
    UnsupportedStabilization(String),
    #[error("solve diverged: residual grew beyond {0:.3e} times the initial residual")]
    Diverged(f64),
    #[error("invalid symbol expression: {0}")]
    ParseError(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
