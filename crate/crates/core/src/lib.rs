//! Numerics for fourth-order biquadratic tensors `A ∈ R^{m×n×m×n}` with
//! `a[i1][j1][i2][j2] = a[i2][j1][i1][j2] = a[i1][j2][i2][j1]`.
//!
//! * [`tensor`]: storage, validation, symmetrization, flattenings.
//! * [`meigen`]: M-eigenpairs, spectral-norm envelopes, PSD classification.
//! * [`decomp`]: rank-one and Tucker decompositions.
//! * [`norms`]: certified nuclear- and spectral-norm intervals.
//! * [`algebra`]: products, inverses and norm-inequality checks.
//! * [`oracle`]: brute-force references used by the test suites.
//!
//! Dense linear algebra kernels live in [`linalg`]; there is no external
//! BLAS/LAPACK dependency.

pub mod algebra;
pub mod decomp;
pub mod error;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod meigen;
pub mod norms;
pub mod oracle;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{Matrix, SymMatrix};
pub use meigen::{MEigenPair, SolverConfig};
pub use norms::{BoundSource, NormInterval};
pub use tensor::{BiquadraticTensor, Tensor4, ThirdOrderTensor};
