use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sign_normalize, Matrix};
use crate::tensor::{fold_sym, pair_count, pair_index, BiquadraticTensor};

/// Terms with `|coef| <= DEFAULT_DROP_TOL * ‖A‖_F` are dropped.
pub const DEFAULT_DROP_TOL: f64 = 1e-12;

/// Relative singular-value threshold for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `coef · x∘y∘x∘y` with unit `x`, `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOneTerm {
    pub coef: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl RankOneTerm {
    /// Normalises arbitrary factors into a unit-vector term; `None` if either is zero.
    pub fn from_factors(coef: f64, x: &[f64], y: &[f64]) -> Option<Self> {
        let nx = linalg::norm2(x);
        let ny = linalg::norm2(y);
        if nx == 0.0 || ny == 0.0 {
            return None;
        }
        let mut x: Vec<f64> = x.iter().map(|v| v / nx).collect();
        let mut y: Vec<f64> = y.iter().map(|v| v / ny).collect();
        // The factors enter squared, so flipping a sign leaves the term unchanged.
        sign_normalize(&mut x);
        sign_normalize(&mut y);
        Some(RankOneTerm {
            coef: coef * nx * nx * ny * ny,
            x,
            y,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BQDecomposition {
    #[serde(skip)]
    pub m: usize,
    #[serde(skip)]
    pub n: usize,
    pub terms: Vec<RankOneTerm>,
    /// Relative Frobenius reconstruction error.
    pub reconstruction_error: f64,
}

impl BQDecomposition {
    /// Restores `m`, `n` after deserialisation from the term vectors.
    pub fn with_dims(mut self, m: usize, n: usize) -> Result<Self> {
        if self.terms.iter().any(|t| t.x.len() != m || t.y.len() != n) {
            return Err(Error::dims("term factor lengths do not match (m, n)"));
        }
        self.m = m;
        self.n = n;
        Ok(self)
    }

    /// Dimensions inferred from the first term.
    pub fn infer_dims(self) -> Result<Self> {
        let (m, n) = match self.terms.first() {
            Some(t) => (t.x.len(), t.y.len()),
            None => return Err(Error::InvalidInput("cannot infer dimensions of an empty decomposition".into())),
        };
        self.with_dims(m, n)
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coef.abs()).sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `m n min(m(m+1)/2, n(n+1)/2)`.
pub fn term_bound(m: usize, n: usize) -> usize {
    m * n * pair_count(m).min(pair_count(n))
}

/// Constructive biquadratic rank-one decomposition.
///
/// `P = pair_flatten(A)` has an SVD `Σ σ_k u_k v_kᵀ`; folding `u_k`, `v_k` into
/// symmetric `U_k`, `V_k` gives `a[i1][j1][i2][j2] = Σ_k σ_k U_k[i1][i2] V_k[j1][j2]`.
/// Eigendecomposing `U_k = Σ λ x xᵀ` and `V_k = Σ μ y yᵀ` turns every product
/// into terms `σ λ μ · x∘y∘x∘y`.
pub fn bq_rank_one_decompose(a: &BiquadraticTensor, drop_tol: f64) -> Result<BQDecomposition> {
    let (m, n) = a.dims();
    let fro = a.frobenius();
    let mut terms = Vec::new();
    if fro > 0.0 {
        let p = a.pair_flatten();
        let d = linalg::svd(&p.matrix)?;
        let cutoff = drop_tol * fro;
        for (k, &sigma) in d.sigma.iter().enumerate() {
            if sigma <= cutoff {
                continue;
            }
            let uk = fold_sym(&d.u.column(k), m)?;
            let vk = fold_sym(&d.v.column(k), n)?;
            let eu = linalg::symeig(&uk)?;
            let ev = linalg::symeig(&vk)?;
            for (lu, lambda) in eu.values.iter().enumerate() {
                for (lv, mu) in ev.values.iter().enumerate() {
                    let coef = sigma * lambda * mu;
                    if coef.abs() <= cutoff {
                        continue;
                    }
                    let term = RankOneTerm::from_factors(coef, &eu.vector(lu), &ev.vector(lv))
                        .expect("eigenvectors are unit");
                    terms.push(term);
                }
            }
        }
    }
    let mut dec = BQDecomposition {
        m,
        n,
        terms,
        reconstruction_error: 0.0,
    };
    dec.reconstruction_error = reconstruct(&dec)?.relative_error(a)?;
    Ok(dec)
}

/// `Σ coef · x∘y∘x∘y`.
pub fn reconstruct(d: &BQDecomposition) -> Result<BiquadraticTensor> {
    let (m, n) = (d.m, d.n);
    if d.terms.iter().any(|t| t.x.len() != m || t.y.len() != n) {
        return Err(Error::dims("term factor lengths do not match (m, n)"));
    }
    // Accumulate per orbit on the pair grid, then expand.
    let mut p = Matrix::zeros(pair_count(m), pair_count(n));
    for t in &d.terms {
        for ih in 0..m {
            for il in 0..=ih {
                let xx = t.coef * (t.x[ih] * t.x[il]);
                if xx == 0.0 {
                    continue;
                }
                let s = pair_index(ih, il);
                for jh in 0..n {
                    for jl in 0..=jh {
                        p[(s, pair_index(jh, jl))] += xx * (t.y[jh] * t.y[jl]);
                    }
                }
            }
        }
    }
    BiquadraticTensor::from_orbit_fn(m, n, |ih, jh, il, jl| {
        p[(pair_index(ih, il), pair_index(jh, jl))]
    })
}

/// Factor matrices `X` (`m x r`) and `Y` (`n x r`) whose columns are the
/// term factors scaled by `sqrt(|coef|)`.
pub fn factor_matrices(d: &BQDecomposition) -> (Matrix, Matrix) {
    let r = d.terms.len();
    let x = Matrix::from_fn(d.m, r, |i, k| d.terms[k].coef.abs().sqrt() * d.terms[k].x[i]);
    let y = Matrix::from_fn(d.n, r, |j, k| d.terms[k].coef.abs().sqrt() * d.terms[k].y[j]);
    (x, y)
}

/// Numerical rank of `mat` at `rel_tol` relative to its largest singular value.
pub fn numerical_rank(mat: &Matrix, rel_tol: f64) -> Result<usize> {
    if mat.cols() == 0 || mat.rows() == 0 {
        return Ok(0);
    }
    Ok(linalg::svd(mat)?.rank(rel_tol))
}

/// `(R1, R2)`, the ranks of the mode-1 and mode-2 flattenings.
pub fn tucker_ranks(a: &BiquadraticTensor, rank_tol: f64) -> Result<(usize, usize)> {
    Ok((
        numerical_rank(&a.flatten_mode1(), rank_tol)?,
        numerical_rank(&a.flatten_mode2(), rank_tol)?,
    ))
}
