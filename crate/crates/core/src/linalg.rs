//! Dense linear algebra kernels.
//!
//! Everything here works on small row-major matrices (a few hundred rows at
//! most). The symmetric eigensolver is cyclic Jacobi and the SVD is one-sided
//! (Hestenes) Jacobi; both are capped at [`MAX_SWEEPS`] sweeps.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

/// Dense row-major real matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries given for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite matrix entry {bad}")));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dims("ragged rows"));
        }
        Matrix::from_row_major(r, c, rows.concat())
    }

    pub fn from_columns(columns: &[Vec<f64>], rows: usize) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::dims("column length does not match row count"));
        }
        Ok(Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r]))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::dims(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn frobenius(&self) -> f64 {
        norm2(&self.entries)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims("matrix shapes differ"));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

/// Square matrix with `entries[i][j] == entries[j][i]` bit for bit.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SymMatrix(Matrix);

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.0)
    }
}

impl SymMatrix {
    /// Accepts `m` only if it is exactly symmetric.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::dims(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        let mut dev = 0.0_f64;
        for i in 0..m.rows {
            for j in 0..i {
                dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if dev > 0.0 {
            return Err(Error::SymmetryViolation(dev));
        }
        Ok(SymMatrix(m))
    }

    /// Builds a symmetric matrix from its lower triangle `f(i, j)`, `i >= j`.
    pub fn from_lower(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(order, order);
        for i in 0..order {
            for j in 0..=i {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SymMatrix(m)
    }

    /// Average of `m` and its transpose.
    pub fn symmetric_part(m: &Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::dims("symmetric part of a non-square matrix"));
        }
        Ok(SymMatrix::from_lower(m.rows, |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Matrix::identity(n))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn add_diagonal(&self, shift: f64) -> SymMatrix {
        let mut m = self.0.clone();
        for i in 0..m.rows {
            m[(i, i)] += shift;
        }
        SymMatrix(m)
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues, descending by absolute value.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: Matrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// Index of the algebraically largest eigenvalue.
    pub fn argmax(&self) -> usize {
        argmax_by(&self.values, |v| v)
    }

    pub fn argmin(&self) -> usize {
        argmax_by(&self.values, |v| -v)
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.argmax()]
    }

    pub fn min_value(&self) -> f64 {
        self.values[self.argmin()]
    }
}

fn argmax_by(values: &[f64], key: impl Fn(f64) -> f64) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if key(*v) > key(values[best]) {
            best = k;
        }
    }
    best
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn symeig(s: &SymMatrix) -> Result<EigenDecomposition> {
    let n = s.order();
    let mut a = s.as_matrix().clone();
    let mut v = Matrix::identity(n);
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: v,
        });
    }

    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].abs())
            .sum();
        if off == 0.0 || !off.is_normal() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let g = 100.0 * apq.abs();
                // Once the sweep count is past the quadratic phase, entries
                // negligible against both diagonals are flushed to zero.
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            routine: "symeig",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .abs()
            .total_cmp(&a[(i, i)].abs())
            .then(a[(j, j)].total_cmp(&a[(i, i)]))
            .then(i.cmp(&j))
    });
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition { values, vectors })
}

#[derive(Debug, Clone)]
pub struct SingularValueDecomposition {
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: Matrix,
    /// Descending, nonnegative.
    pub sigma: Vec<f64>,
    /// `cols x k` with orthonormal columns.
    pub v: Matrix,
}

impl SingularValueDecomposition {
    pub fn max_singular_value(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.max_singular_value();
        if smax == 0.0 {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > rel_tol * smax).count()
    }

    pub fn reconstruct(&self) -> Matrix {
        Matrix::from_fn(self.u.rows(), self.v.rows(), |r, c| {
            self.sigma
                .iter()
                .enumerate()
                .map(|(k, s)| self.u[(r, k)] * s * self.v[(c, k)])
                .sum()
        })
    }
}

/// Default numerical-rank tolerance relative to `sigma_max`: `N * eps`.
pub fn default_rank_tol(a: &Matrix) -> f64 {
    a.rows().max(a.cols()).max(1) as f64 * f64::EPSILON
}

/// Thin SVD by one-sided Jacobi.
pub fn svd(a: &Matrix) -> Result<SingularValueDecomposition> {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.transpose())?;
        return Ok(SingularValueDecomposition {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    svd_tall(a)
}

fn svd_tall(a: &Matrix) -> Result<SingularValueDecomposition> {
    let (r, c) = (a.rows(), a.cols());
    // Work on columns stored contiguously.
    let mut w: Vec<Vec<f64>> = (0..c).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..c)
        .map(|j| (0..c).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let eps = f64::EPSILON;
    // Columns below this squared norm are rounding noise; rotating them
    // cannot change any significant singular value.
    let negligible = {
        let f = eps * a.frobenius();
        f * f
    };
    let mut converged = c <= 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..c {
            for q in (p + 1)..c {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0
                    || alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= eps * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate_pair(&mut w, p, q, cs, sn);
                rotate_pair(&mut v, p, q, cs, sn);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            routine: "svd",
            iterations: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = w.iter().map(|col| norm2(col)).collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let smax = order.first().map_or(0.0, |&k| norms[k]);
    let floor = smax * r.max(c) as f64 * eps;
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(c);
    let mut sigma = Vec::with_capacity(c);
    let mut pending = Vec::new();
    for (slot, &k) in order.iter().enumerate() {
        let s = norms[k];
        sigma.push(s);
        if s > floor && s > 0.0 {
            u_cols.push(w[k].iter().map(|x| x / s).collect());
        } else {
            u_cols.push(vec![0.0; r]);
            pending.push(slot);
        }
    }
    for slot in pending {
        let basis: Vec<&Vec<f64>> = u_cols
            .iter()
            .enumerate()
            .filter(|(i, col)| *i != slot && norm2(col) > 0.0)
            .map(|(_, col)| col)
            .collect();
        let completion = orthonormal_completion(&basis, r);
        u_cols[slot] = completion;
    }
    let u = Matrix::from_fn(r, c, |i, j| u_cols[j][i]);
    let v = Matrix::from_fn(c, c, |i, j| v[order[j]][i]);
    Ok(SingularValueDecomposition { u, sigma, v })
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (wp, wq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
        let a = *x;
        let b = *y;
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// A unit vector orthogonal to every vector in `basis` (assumed orthonormal).
fn orthonormal_completion(basis: &[&Vec<f64>], dim: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for e in 0..dim {
        let mut cand = vec![0.0; dim];
        cand[e] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let proj = dot(&cand, b);
                for (c, bi) in cand.iter_mut().zip(b.iter()) {
                    *c -= proj * bi;
                }
            }
        }
        let nrm = norm2(&cand);
        if best.as_ref().is_none_or(|(bn, _)| nrm > *bn) {
            best = Some((nrm, cand));
        }
        if nrm > 0.5 {
            break;
        }
    }
    let (nrm, mut cand) = best.expect("dim > 0");
    for c in &mut cand {
        *c /= nrm;
    }
    cand
}

pub fn matrix_spectral_norm(a: &Matrix) -> Result<f64> {
    Ok(svd(a)?.max_singular_value())
}

pub fn matrix_nuclear_norm(a: &Matrix) -> Result<f64> {
    Ok(svd(a)?.sigma.iter().sum())
}

/// Spectral norm of a symmetric matrix, `max |lambda|`.
pub fn sym_spectral_norm(s: &SymMatrix) -> Result<f64> {
    Ok(symeig(s)?.values.first().map_or(0.0, |v| v.abs()))
}

/// Nuclear norm of a symmetric matrix, `sum |lambda|`.
pub fn sym_nuclear_norm(s: &SymMatrix) -> Result<f64> {
    Ok(symeig(s)?.values.iter().map(|v| v.abs()).sum())
}

/// `(P^T P)^{-1} P^T`, computed from the SVD as `V diag(1/sigma) U^T`.
///
/// Fails with [`Error::RankDeficient`] when `sigma_min <= rel_tol * sigma_max`.
pub fn left_pseudoinverse(p: &Matrix, rel_tol: f64) -> Result<Matrix> {
    if p.rows() < p.cols() {
        return Err(Error::RankDeficient { ratio: 0.0 });
    }
    let d = svd(p)?;
    let smax = d.max_singular_value();
    let smin = d.sigma.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smin <= rel_tol * smax {
        return Err(Error::RankDeficient {
            ratio: if smax == 0.0 { 0.0 } else { smin / smax },
        });
    }
    Ok(Matrix::from_fn(p.cols(), p.rows(), |i, j| {
        d.sigma
            .iter()
            .enumerate()
            .map(|(k, s)| d.v[(i, k)] * d.u[(j, k)] / s)
            .sum()
    }))
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::dims("solve needs a square system"));
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let scale = m.max_abs();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .expect("non-empty range");
        if m[(piv, col)].abs() <= scale * f64::EPSILON * n as f64 {
            return Err(Error::RankDeficient {
                ratio: if scale == 0.0 { 0.0 } else { m[(piv, col)].abs() / scale },
            });
        }
        if piv != col {
            for k in 0..n {
                m.entries.swap(piv * n + k, col * n + k);
            }
            rhs.swap(piv, col);
        }
        for r in (col + 1)..n {
            let f = m[(r, col)] / m[(col, col)];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                let v = m[(col, k)];
                m[(r, k)] -= f * v;
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = ((r + 1)..n).map(|k| m[(r, k)] * x[k]).sum();
        x[r] = (rhs[r] - s) / m[(r, r)];
    }
    Ok(x)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Returns `v / ‖v‖`, or `None` for the zero vector.
pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm2(v);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(v.iter().map(|x| x / n).collect())
}

/// Flips `v` so its first nonzero component is positive. Returns the sign applied.
pub fn sign_normalize(v: &mut [f64]) -> f64 {
    match v.iter().find(|x| **x != 0.0) {
        Some(x) if *x < 0.0 => {
            for c in v.iter_mut() {
                *c = -*c;
            }
            -1.0
        }
        _ => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
        Matrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
        SymMatrix::from_lower(n, |_, _| rng.random_range(-1.0..1.0))
    }

    fn orthonormality_defect(q: &Matrix) -> f64 {
        let g = q.transpose().matmul(q).unwrap();
        g.sub(&Matrix::identity(q.cols())).unwrap().max_abs()
    }

    #[test]
    fn symeig_identity() {
        let e = symeig(&SymMatrix::identity(5)).unwrap();
        assert!(e.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn symeig_diag_sorted_by_magnitude() {
        let s = SymMatrix::new(Matrix::diagonal(&[-1.0, 3.0])).unwrap();
        let e = symeig(&s).unwrap();
        assert_eq!(e.values, vec![3.0, -1.0]);
        assert_eq!(e.vector(0), vec![0.0, 1.0]);
        assert_eq!(e.vector(1), vec![1.0, 0.0]);
        assert_eq!(e.max_value(), 3.0);
        assert_eq!(e.min_value(), -1.0);
    }

    #[test]
    fn symeig_trace_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 6, 16] {
            let s = random_sym(&mut rng, n);
            let e = symeig(&s).unwrap();
            let trace: f64 = (0..n).map(|i| s[(i, i)]).sum();
            assert_abs_diff_eq!(e.values.iter().sum::<f64>(), trace, epsilon = 1e-10);
            let rec = Matrix::from_fn(n, n, |r, c| {
                (0..n)
                    .map(|k| e.vectors[(r, k)] * e.values[k] * e.vectors[(c, k)])
                    .sum()
            });
            let resid = rec.sub(s.as_matrix()).unwrap().frobenius();
            assert!(resid <= 1e-10 * s.as_matrix().frobenius(), "n={n} resid={resid}");
            assert!(orthonormality_defect(&e.vectors) <= 1e-12);
        }
    }

    #[test]
    fn svd_zero_and_orthonormal() {
        let z = svd(&Matrix::zeros(3, 2)).unwrap();
        assert!(z.sigma.iter().all(|&s| s == 0.0));
        assert!(orthonormality_defect(&z.u) <= 1e-12);

        let c = 1.0 / 2f64.sqrt();
        let q = Matrix::from_rows(&[vec![c, 0.0], vec![c, 0.0], vec![0.0, 1.0]]).unwrap();
        let d = svd(&q).unwrap();
        for s in d.sigma {
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn svd_frobenius_identity_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (r, c) in [(4, 5), (5, 4), (1, 6), (6, 1), (9, 9)] {
            let a = random_matrix(&mut rng, r, c);
            let d = svd(&a).unwrap();
            let f2: f64 = d.sigma.iter().map(|s| s * s).sum();
            assert_abs_diff_eq!(f2, a.frobenius().powi(2), epsilon = 1e-10);
            assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
            let resid = d.reconstruct().sub(&a).unwrap().frobenius();
            assert!(resid <= 1e-10 * a.frobenius());
            assert!(orthonormality_defect(&d.u) <= 1e-12);
            assert!(orthonormality_defect(&d.v) <= 1e-12);
        }
    }

    #[test]
    fn svd_rank_deficient_completes_basis() {
        // rank one 4x3
        let a = Matrix::from_fn(4, 3, |r, c| (r + 1) as f64 * (c as f64 - 1.5));
        let d = svd(&a).unwrap();
        assert_eq!(d.rank(1e-10), 1);
        assert!(orthonormality_defect(&d.u) <= 1e-12);
    }

    #[test]
    fn norms_of_identity_and_diagonal() {
        let i = Matrix::identity(4);
        assert_abs_diff_eq!(matrix_spectral_norm(&i).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(matrix_nuclear_norm(&i).unwrap(), 4.0, epsilon = 1e-14);
        let d = Matrix::diagonal(&[2.0, -3.0, 0.5]);
        assert_abs_diff_eq!(matrix_nuclear_norm(&d).unwrap(), 5.5, epsilon = 1e-14);
        assert_abs_diff_eq!(matrix_spectral_norm(&d).unwrap(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn pseudoinverse_left_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_matrix(&mut rng, 6, 3);
        let ph = left_pseudoinverse(&p, 1e-10).unwrap();
        let prod = ph.matmul(&p).unwrap();
        assert!(prod.sub(&Matrix::identity(3)).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn pseudoinverse_rejects_rank_deficient() {
        let p = Matrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            left_pseudoinverse(&p, 1e-10),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn solve_small_system() {
        let a = Matrix::from_rows(&[vec![0.0, 2.0], vec![1.0, 1.0]]).unwrap();
        let x = solve(&a, &[4.0, 3.0]).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn sym_matrix_rejects_asymmetry() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).unwrap();
        assert_eq!(SymMatrix::new(m), Err(Error::SymmetryViolation(0.5)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn nuclear_dominates_spectral(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_matrix(&mut rng, r, c);
                let s = matrix_spectral_norm(&a).unwrap();
                let nuc = matrix_nuclear_norm(&a).unwrap();
                prop_assert!(s >= 0.0);
                prop_assert!(nuc >= s - 1e-14);
            }
        }
    }
}
