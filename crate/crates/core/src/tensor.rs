//! Fourth-order `m x n x m x n` tensors and the biquadratic subspace.
//!
//! Entries are stored densely in the order `a[i1][j1][i2][j2]`, row-major, so
//! the backing buffer is exactly the row-major square flattening `M(A)` with
//! pair index `(i, j) -> i * n + j`.
//!
//! A tensor is biquadratic when it is invariant under `i1 <-> i2` and under
//! `j1 <-> j2`. Each symmetry orbit has (up to) four members; every
//! constructor in this module computes one value per orbit from its canonical
//! representative `(max(i1,i2), max(j1,j2), min(i1,i2), min(j1,j2))` and writes
//! it to all members, so the symmetry holds bit for bit.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix, SymMatrix};

/// Relative tolerance used by [`Tensor4::validate_relative`] callers that have
/// no better information.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    m: usize,
    n: usize,
    entries: Vec<f64>,
}

#[inline]
fn offset(m: usize, n: usize, i1: usize, j1: usize, i2: usize, j2: usize) -> usize {
    ((i1 * n + j1) * m + i2) * n + j2
}

/// Calls `f(i_hi, j_hi, i_lo, j_lo)` once per symmetry orbit.
fn for_each_orbit(m: usize, n: usize, mut f: impl FnMut(usize, usize, usize, usize)) {
    for ih in 0..m {
        for il in 0..=ih {
            for jh in 0..n {
                for jl in 0..=jh {
                    f(ih, jh, il, jl);
                }
            }
        }
    }
}

fn orbit_offsets(m: usize, n: usize, ih: usize, jh: usize, il: usize, jl: usize) -> [usize; 4] {
    [
        offset(m, n, ih, jh, il, jl),
        offset(m, n, il, jh, ih, jl),
        offset(m, n, ih, jl, il, jh),
        offset(m, n, il, jl, ih, jh),
    ]
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!(
            "dimensions must be positive, got m={m}, n={n}"
        )));
    }
    Ok(())
}

impl Tensor4 {
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        check_dims(m, n)?;
        Ok(Tensor4 {
            m,
            n,
            entries: vec![0.0; m * n * m * n],
        })
    }

    pub fn from_entries(m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        check_dims(m, n)?;
        if entries.len() != m * n * m * n {
            return Err(Error::dims(format!(
                "expected {} entries for m={m}, n={n}, got {}",
                m * n * m * n,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite tensor entry {bad}")));
        }
        Ok(Tensor4 { m, n, entries })
    }

    pub fn from_fn(
        m: usize,
        n: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        check_dims(m, n)?;
        let mut entries = Vec::with_capacity(m * n * m * n);
        for i1 in 0..m {
            for j1 in 0..n {
                for i2 in 0..m {
                    for j2 in 0..n {
                        entries.push(f(i1, j1, i2, j2));
                    }
                }
            }
        }
        Tensor4::from_entries(m, n, entries)
    }

    /// Folds an `mn x mn` matrix back into a tensor (inverse of [`Tensor4::flatten_square`]).
    pub fn from_square(m: usize, n: usize, mat: &Matrix) -> Result<Self> {
        if mat.rows() != m * n || mat.cols() != m * n {
            return Err(Error::dims(format!(
                "square flattening of m={m}, n={n} must be {0}x{0}, got {1}x{2}",
                m * n,
                mat.rows(),
                mat.cols()
            )));
        }
        Tensor4::from_entries(m, n, mat.as_slice().to_vec())
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> f64 {
        self.entries[offset(self.m, self.n, i1, j1, i2, j2)]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    fn same_shape(&self, other: &Tensor4) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::dims(format!(
                "shapes (m={}, n={}) and (m={}, n={}) differ",
                self.m, self.n, other.m, other.n
            )));
        }
        Ok(())
    }

    pub fn inner(&self, other: &Tensor4) -> Result<f64> {
        self.same_shape(other)?;
        Ok(dot(&self.entries, &other.entries))
    }

    pub fn frobenius(&self) -> f64 {
        dot(&self.entries, &self.entries).sqrt()
    }

    pub fn add(&self, other: &Tensor4) -> Result<Tensor4> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Tensor4 {
            m: self.m,
            n: self.n,
            entries,
        })
    }

    pub fn sub(&self, other: &Tensor4) -> Result<Tensor4> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Tensor4 {
        Tensor4 {
            m: self.m,
            n: self.n,
            entries: self.entries.iter().map(|a| c * a).collect(),
        }
    }

    /// `‖self − other‖_F / ‖other‖_F`, or the absolute error when `other` is zero.
    pub fn relative_error(&self, other: &Tensor4) -> Result<f64> {
        let diff = self.sub(other)?.frobenius();
        let base = other.frobenius();
        Ok(if base == 0.0 { diff } else { diff / base })
    }

    /// `⟨T, x∘y∘x∘y⟩`, evaluated as `(x⊗y)^T M(T) (x⊗y)`.
    pub fn quartic_form(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.m || y.len() != self.n {
            return Err(Error::dims(format!(
                "quartic form of m={}, n={} evaluated at |x|={}, |y|={}",
                self.m,
                self.n,
                x.len(),
                y.len()
            )));
        }
        let z: Vec<f64> = x.iter().flat_map(|xi| y.iter().map(move |yj| xi * yj)).collect();
        let mn = self.m * self.n;
        Ok((0..mn)
            .map(|r| z[r] * dot(&self.entries[r * mn..(r + 1) * mn], &z))
            .sum())
    }

    /// Square flattening `M(T)`; row `(i1, j1)`, column `(i2, j2)`, pair index `i * n + j`.
    pub fn flatten_square(&self) -> Matrix {
        let mn = self.m * self.n;
        Matrix::from_row_major(mn, mn, self.entries.clone()).expect("shape invariant")
    }

    /// Largest violation of either biquadratic symmetry.
    pub fn max_symmetry_deviation(&self) -> f64 {
        let (m, n) = self.dims();
        let mut dev = 0.0_f64;
        for i1 in 0..m {
            for j1 in 0..n {
                for i2 in 0..m {
                    for j2 in 0..n {
                        let a = self.get(i1, j1, i2, j2);
                        dev = dev
                            .max((a - self.get(i2, j1, i1, j2)).abs())
                            .max((a - self.get(i1, j2, i2, j1)).abs());
                    }
                }
            }
        }
        dev
    }

    /// Orthogonal projection onto the biquadratic subspace (four-term orbit average).
    pub fn symmetrize(&self) -> BiquadraticTensor {
        let (m, n) = self.dims();
        let mut out = vec![0.0; self.entries.len()];
        for_each_orbit(m, n, |ih, jh, il, jl| {
            let o = orbit_offsets(m, n, ih, jh, il, jl);
            let b = o.map(|k| self.entries[k]);
            let avg = ((b[0] + b[1]) + (b[2] + b[3])) * 0.25;
            for k in o {
                out[k] = avg;
            }
        });
        BiquadraticTensor(Tensor4 {
            m,
            n,
            entries: out,
        })
    }

    /// Accepts the tensor if every symmetry violation is at most `tol`
    /// (absolute); the result is orbit-averaged so the symmetry is exact.
    pub fn validate(&self, tol: f64) -> Result<BiquadraticTensor> {
        if !(tol >= 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be >= 0, got {tol}")));
        }
        let dev = self.max_symmetry_deviation();
        if dev > tol {
            return Err(Error::SymmetryViolation(dev));
        }
        Ok(self.symmetrize())
    }

    /// [`Tensor4::validate`] with tolerance `rel_tol * max |entry|`.
    pub fn validate_relative(&self, rel_tol: f64) -> Result<BiquadraticTensor> {
        self.validate(rel_tol * self.max_abs())
    }
}

/// A tensor in `BQ(m, n)`. The symmetry invariant holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BiquadraticTensor(Tensor4);

impl Deref for BiquadraticTensor {
    type Target = Tensor4;
    fn deref(&self) -> &Tensor4 {
        &self.0
    }
}

impl AsRef<Tensor4> for BiquadraticTensor {
    fn as_ref(&self) -> &Tensor4 {
        &self.0
    }
}

impl From<BiquadraticTensor> for Tensor4 {
    fn from(a: BiquadraticTensor) -> Tensor4 {
        a.0
    }
}

impl BiquadraticTensor {
    /// Builds a tensor from a function evaluated only on canonical orbit
    /// representatives `(i_hi, j_hi, i_lo, j_lo)`.
    pub fn from_orbit_fn(
        m: usize,
        n: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut t = Tensor4::zeros(m, n)?;
        for_each_orbit(m, n, |ih, jh, il, jl| {
            let v = f(ih, jh, il, jl);
            for k in orbit_offsets(m, n, ih, jh, il, jl) {
                t.entries[k] = v;
            }
        });
        if let Some(bad) = t.entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite tensor entry {bad}")));
        }
        Ok(BiquadraticTensor(t))
    }

    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        Ok(BiquadraticTensor(Tensor4::zeros(m, n)?))
    }

    /// Diagonal tensor with `a[i][j][i][j] = d[(i, j)]`; `d` is `m x n`.
    pub fn diagonal(d: &Matrix) -> Result<Self> {
        let (m, n) = (d.rows(), d.cols());
        BiquadraticTensor::from_orbit_fn(m, n, |ih, jh, il, jl| {
            if ih == il && jh == jl {
                d[(ih, jh)]
            } else {
                0.0
            }
        })
    }

    pub fn identity(m: usize, n: usize) -> Result<Self> {
        check_dims(m, n)?;
        BiquadraticTensor::diagonal(&Matrix::from_fn(m, n, |_, _| 1.0))
    }

    /// `x∘y∘x∘y`, built as `(x_{i1} x_{i2}) (y_{j1} y_{j2})`.
    pub fn rank_one(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.iter().all(|v| *v == 0.0) || y.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidInput("rank-one factors must be nonzero".into()));
        }
        BiquadraticTensor::from_orbit_fn(x.len(), y.len(), |ih, jh, il, jl| {
            (x[ih] * x[il]) * (y[jh] * y[jl])
        })
    }

    pub fn as_tensor(&self) -> &Tensor4 {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor4 {
        self.0
    }

    pub fn add(&self, other: &BiquadraticTensor) -> Result<BiquadraticTensor> {
        Ok(BiquadraticTensor(self.0.add(&other.0)?))
    }

    pub fn scale(&self, c: f64) -> BiquadraticTensor {
        BiquadraticTensor(self.0.scale(c))
    }

    pub fn neg(&self) -> BiquadraticTensor {
        self.scale(-1.0)
    }

    /// `M(A)`, symmetric because `a[i1][j1][i2][j2] = a[i2][j2][i1][j1]`.
    pub fn flatten_square(&self) -> SymMatrix {
        SymMatrix::new(self.0.flatten_square()).expect("biquadratic flattening is symmetric")
    }

    /// Folds `mat` (order `mn`) into `A(M)`, accepting it when the fold is
    /// biquadratic within the absolute tolerance `tol`.
    pub fn unflatten_square(mat: &SymMatrix, m: usize, n: usize, tol: f64) -> Result<Self> {
        Tensor4::from_square(m, n, mat.as_matrix())?.validate(tol)
    }

    /// Mode-1 flattening, `m x (n m n)`; column `(j1, i2, j2)` in lexicographic order.
    pub fn flatten_mode1(&self) -> Matrix {
        let (m, n) = self.dims();
        Matrix::from_fn(m, n * m * n, |i1, col| {
            let j2 = col % n;
            let i2 = (col / n) % m;
            let j1 = col / (n * m);
            self.get(i1, j1, i2, j2)
        })
    }

    /// Mode-2 flattening, `n x (m m n)`; column `(i1, i2, j2)` in lexicographic order.
    pub fn flatten_mode2(&self) -> Matrix {
        let (m, n) = self.dims();
        Matrix::from_fn(n, m * m * n, |j1, col| {
            let j2 = col % n;
            let i2 = (col / n) % m;
            let i1 = col / (n * m);
            self.get(i1, j1, i2, j2)
        })
    }

    /// Mode-3 flattening; coincides with mode 1 up to column order.
    pub fn flatten_mode3(&self) -> Matrix {
        let (m, n) = self.dims();
        Matrix::from_fn(m, m * n * n, |i2, col| {
            let j2 = col % n;
            let j1 = (col / n) % n;
            let i1 = col / (n * n);
            self.get(i1, j1, i2, j2)
        })
    }

    pub fn pair_flatten(&self) -> PairFlattening {
        let (m, n) = self.dims();
        let mut p = Matrix::zeros(pair_count(m), pair_count(n));
        for_each_orbit(m, n, |ih, jh, il, jl| {
            p[(pair_index(ih, il), pair_index(jh, jl))] = self.get(ih, jh, il, jl);
        });
        PairFlattening { m, n, matrix: p }
    }

    /// Inverse of [`BiquadraticTensor::pair_flatten`].
    pub fn from_pair_flattening(p: &PairFlattening) -> Result<Self> {
        if p.matrix.rows() != pair_count(p.m) || p.matrix.cols() != pair_count(p.n) {
            return Err(Error::dims("pair flattening shape does not match (m, n)"));
        }
        BiquadraticTensor::from_orbit_fn(p.m, p.n, |ih, jh, il, jl| {
            p.matrix[(pair_index(ih, il), pair_index(jh, jl))]
        })
    }

    /// Whether every off-diagonal entry is at most `tol` in magnitude.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let (m, n) = self.dims();
        let mut ok = true;
        for_each_orbit(m, n, |ih, jh, il, jl| {
            if !(ih == il && jh == jl) && self.get(ih, jh, il, jl).abs() > tol {
                ok = false;
            }
        });
        ok
    }

    pub fn diagonal_entries(&self) -> Matrix {
        Matrix::from_fn(self.m(), self.n(), |i, j| self.get(i, j, i, j))
    }
}

/// `m (m + 1) / 2`.
#[inline]
pub fn pair_count(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Zero-based pair index for `hi >= lo`: `hi (hi + 1) / 2 + lo`.
#[inline]
pub fn pair_index(hi: usize, lo: usize) -> usize {
    debug_assert!(hi >= lo);
    hi * (hi + 1) / 2 + lo
}

/// `P = (p_st)` with `p_st = a[i1][j1][i2][j2]` for `i1 >= i2`, `j1 >= j2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFlattening {
    pub m: usize,
    pub n: usize,
    pub matrix: Matrix,
}

/// Plain (unscaled) fold of a packed lower triangle into a symmetric matrix.
pub fn fold_sym(u: &[f64], m: usize) -> Result<SymMatrix> {
    if u.len() != pair_count(m) {
        return Err(Error::dims(format!(
            "packed symmetric vector of order {m} needs {} entries, got {}",
            pair_count(m),
            u.len()
        )));
    }
    Ok(SymMatrix::from_lower(m, |i, j| u[pair_index(i, j)]))
}

/// Packed lower triangle of `s`, the inverse of [`fold_sym`].
pub fn unfold_sym(s: &SymMatrix) -> Vec<f64> {
    let m = s.order();
    let mut u = vec![0.0; pair_count(m)];
    for i in 0..m {
        for j in 0..=i {
            u[pair_index(i, j)] = s[(i, j)];
        }
    }
    u
}

/// Dense `p x m x n` tensor `t[k][i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThirdOrderTensor {
    p: usize,
    m: usize,
    n: usize,
    entries: Vec<f64>,
}

impl ThirdOrderTensor {
    pub fn from_entries(p: usize, m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        if p == 0 || m == 0 || n == 0 {
            return Err(Error::InvalidInput("dimensions must be positive".into()));
        }
        if entries.len() != p * m * n {
            return Err(Error::dims(format!(
                "expected {} entries for p={p}, m={m}, n={n}, got {}",
                p * m * n,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite tensor entry {bad}")));
        }
        Ok(ThirdOrderTensor { p, m, n, entries })
    }

    pub fn from_fn(
        p: usize,
        m: usize,
        n: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut e = Vec::with_capacity(p * m * n);
        for k in 0..p {
            for i in 0..m {
                for j in 0..n {
                    e.push(f(k, i, j));
                }
            }
        }
        ThirdOrderTensor::from_entries(p, m, n, e)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.p, self.m, self.n)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.entries[(k * self.m + i) * self.n + j]
    }

    /// Self-contraction on the first index, `g[i1][j1][i2][j2] = Σ_k t[k][i1][j1] t[k][i2][j2]`,
    /// projected onto `BQ(m, n)`. The result is positive semi-definite.
    pub fn contract(&self) -> BiquadraticTensor {
        let (p, m, n) = self.dims();
        let mn = m * n;
        let mut raw = vec![0.0; mn * mn];
        for k in 0..p {
            let slice = &self.entries[k * mn..(k + 1) * mn];
            for r in 0..mn {
                let a = slice[r];
                if a == 0.0 {
                    continue;
                }
                for c in 0..mn {
                    raw[r * mn + c] += a * slice[c];
                }
            }
        }
        Tensor4 {
            m,
            n,
            entries: raw,
        }
        .symmetrize()
    }
}

pub fn contract_third_order(t: &ThirdOrderTensor) -> BiquadraticTensor {
    t.contract()
}
