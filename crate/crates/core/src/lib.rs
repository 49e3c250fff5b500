//! Laplacian controllability of graphs built from paths, threshold and
//! antiregular graphs, and their composite and chained interconnections.
//!
//! Modules:
//! * [`graph`], [`degree`], [`matrix`]: graphs, degree-sequence algebra, and
//!   dense integer/real matrices;
//! * [`spectral`]: symmetric eigensolver and closed-form spectra;
//! * [`control`]: PBH, exact Kalman and Gramian controllability tests;
//! * [`compose`]: composite graphs, antiregular chains, appended paths;
//! * [`verify`]: sweeps that check each prediction against the exact test.

pub mod compose;
pub mod control;
pub mod degree;
pub mod graph;
pub mod matrix;
pub mod spectral;
pub mod verify;

pub use compose::{ChainSpec, ComposeError, CompositeSpec, Link};
pub use control::{ControlError, ControlMatrix, Method, Verdict};
pub use degree::{DegreeError, DegreeSequence};
pub use graph::{Creation, Graph, GraphError};
pub use matrix::{Matrix, MatrixError, SymMatrix};
pub use spectral::{EigDecomp, Eigenspace, SpectralError};
