use serde::{Deserialize, Serialize};

use super::rank_one::{bq_rank_one_decompose, reconstruct, BQDecomposition, RankOneTerm, DEFAULT_DROP_TOL, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tensor::{BiquadraticTensor, Tensor4};

/// Relative reconstruction error under which an independent core is flagged exact.
pub const EXACT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TuckerKind {
    Orthonormal,
    Independent,
}

/// `A ≈ core ×₁P ×₂Q ×₃P ×₄Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct TuckerForm {
    pub core: BiquadraticTensor,
    pub p: Matrix,
    pub q: Matrix,
    pub kind: TuckerKind,
    /// Relative Frobenius error of [`TuckerForm::reconstruct`] against the source tensor.
    pub reconstruction_error: f64,
    pub exact: bool,
}

impl TuckerForm {
    pub fn reconstruct(&self) -> Result<BiquadraticTensor> {
        mode_multiply(&self.core, &self.p, &self.q)
    }
}

/// `B ×₁P ×₂Q ×₃P ×₄Q` for `P: m x d1`, `Q: n x d2`.
///
/// With `K = P ⊗ Q` the square flattening transforms as `M(A) = K M(B) Kᵀ`.
pub fn mode_multiply(b: &BiquadraticTensor, p: &Matrix, q: &Matrix) -> Result<BiquadraticTensor> {
    let (d1, d2) = b.dims();
    if p.cols() != d1 || q.cols() != d2 {
        return Err(Error::dims(format!(
            "factor shapes {}x{}, {}x{} do not match core ({d1}, {d2})",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    if p.rows() == 0 || q.rows() == 0 {
        return Err(Error::dims("factor matrices must have at least one row"));
    }
    let k = p.kron(q);
    let mat = k.matmul(&b.flatten_square().into_matrix())?.matmul(&k.transpose())?;
    // Only rounding separates the orbit members; averaging restores exact symmetry.
    Ok(Tensor4::from_square(p.rows(), q.rows(), &mat)?.symmetrize())
}

/// Leading `d` left singular vectors of `mat`.
fn leading_left(mat: &Matrix, d: usize) -> Result<Matrix> {
    let s = linalg::svd(mat)?;
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let mut c = s.u.column(k);
            linalg::sign_normalize(&mut c);
            c
        })
        .collect();
    Matrix::from_columns(&cols, mat.rows())
}

/// Orthonormal biquadratic Tucker form via the truncated higher-order SVD.
pub fn hosvd(a: &BiquadraticTensor, d1: usize, d2: usize) -> Result<TuckerForm> {
    let (m, n) = a.dims();
    if d1 == 0 || d1 > m || d2 == 0 || d2 > n {
        return Err(Error::dims(format!(
            "hosvd ranks ({d1}, {d2}) must satisfy 1 <= d1 <= {m}, 1 <= d2 <= {n}"
        )));
    }
    let p = leading_left(&a.flatten_mode1(), d1)?;
    let q = leading_left(&a.flatten_mode2(), d2)?;
    let core = mode_multiply(a, &p.transpose(), &q.transpose())?;
    finish(a, core, p, q, TuckerKind::Orthonormal)
}

/// Core `A ×₁P̂ ×₂Q̂ ×₃P̂ ×₄Q̂` with `P̂ = (PᵀP)⁻¹Pᵀ`, for full-column-rank factors.
pub fn independent_core(a: &BiquadraticTensor, p: &Matrix, q: &Matrix) -> Result<TuckerForm> {
    let (m, n) = a.dims();
    if p.rows() != m || q.rows() != n {
        return Err(Error::dims(format!(
            "factor row counts ({}, {}) do not match tensor ({m}, {n})",
            p.rows(),
            q.rows()
        )));
    }
    let ph = linalg::left_pseudoinverse(p, DEFAULT_RANK_TOL)?;
    let qh = linalg::left_pseudoinverse(q, DEFAULT_RANK_TOL)?;
    let core = mode_multiply(a, &ph, &qh)?;
    finish(a, core, p.clone(), q.clone(), TuckerKind::Independent)
}

fn finish(
    a: &BiquadraticTensor,
    core: BiquadraticTensor,
    p: Matrix,
    q: Matrix,
    kind: TuckerKind,
) -> Result<TuckerForm> {
    let mut t = TuckerForm {
        core,
        p,
        q,
        kind,
        reconstruction_error: 0.0,
        exact: false,
    };
    t.reconstruction_error = t.reconstruct()?.relative_error(a)?;
    t.exact = t.reconstruction_error <= EXACT_TOL;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrPreservationReport {
    pub terms_a: usize,
    pub terms_core: usize,
    /// Core decomposition pushed forward by `x ↦ Px`, `y ↦ Qy`.
    pub pushed_terms: usize,
    pub push_forward_error: f64,
    /// Decomposition of `A` pulled back by `x ↦ P̂x`, `y ↦ Q̂y`.
    pub pulled_terms: usize,
    pub pull_back_error: f64,
    pub core_reconstruction_error: f64,
    pub tol: f64,
    pub passed: bool,
}

fn transport(d: &BQDecomposition, p: &Matrix, q: &Matrix) -> Result<BQDecomposition> {
    let mut terms = Vec::with_capacity(d.terms.len());
    for t in &d.terms {
        let x = p.matvec(&t.x)?;
        let y = q.matvec(&t.y)?;
        if let Some(term) = RankOneTerm::from_factors(t.coef, &x, &y) {
            terms.push(term);
        }
    }
    Ok(BQDecomposition {
        m: p.rows(),
        n: q.rows(),
        terms,
        reconstruction_error: 0.0,
    })
}

/// Transports rank-one decompositions between `A` and its independent core in
/// both directions and checks each reconstructs its target within `tol`.
pub fn br_preservation_check(
    a: &BiquadraticTensor,
    p: &Matrix,
    q: &Matrix,
    tol: f64,
) -> Result<BrPreservationReport> {
    let tf = independent_core(a, p, q)?;
    let ph = linalg::left_pseudoinverse(p, DEFAULT_RANK_TOL)?;
    let qh = linalg::left_pseudoinverse(q, DEFAULT_RANK_TOL)?;

    let dec_core = bq_rank_one_decompose(&tf.core, DEFAULT_DROP_TOL)?;
    let dec_a = bq_rank_one_decompose(a, DEFAULT_DROP_TOL)?;

    let mut pushed = transport(&dec_core, p, q)?;
    pushed.reconstruction_error = reconstruct(&pushed)?.relative_error(a)?;
    let mut pulled = transport(&dec_a, &ph, &qh)?;
    pulled.reconstruction_error = reconstruct(&pulled)?.relative_error(&tf.core)?;

    let passed = pushed.reconstruction_error <= tol && pulled.reconstruction_error <= tol;
    Ok(BrPreservationReport {
        terms_a: dec_a.len(),
        terms_core: dec_core.len(),
        pushed_terms: pushed.len(),
        push_forward_error: pushed.reconstruction_error,
        pulled_terms: pulled.len(),
        pull_back_error: pulled.reconstruction_error,
        core_reconstruction_error: tf.reconstruction_error,
        tol,
        passed,
    })
}
