//! Dense linear algebra, quadrature and random streams.

mod eigen;
mod matrix;
pub mod quad;
mod rng;

pub use eigen::{
    eigenphases_unitary, eigenvalues_hermitian, hermitian_function, wrap_phase, HERMITIAN_TOL,
    UNITARY_TOL,
};
pub use matrix::{DenseMatrix, Spectrum, SpectrumKind};
pub use quad::{integrate, DEFAULT_TOL};
pub use rng::{make_stream, mix64, RngStream, StreamId};
