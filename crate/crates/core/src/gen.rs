//! Seeded instance generators for tests, benchmarks and the CLI.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::linalg::{Matrix, SymMatrix};
use crate::tensor::{BiquadraticTensor, Tensor4, ThirdOrderTensor};

pub fn uniform_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

/// Unit vector drawn uniformly from the sphere.
pub fn unit_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, len);
        if let Some(u) = crate::linalg::normalized(&v) {
            return u;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Entries uniform in `[-1, 1)`, no symmetry.
pub fn random_tensor4<R: Rng>(rng: &mut R, m: usize, n: usize) -> Result<Tensor4> {
    Tensor4::from_fn(m, n, |_, _, _, _| rng.random_range(-1.0..1.0))
}

/// Symmetrization of [`random_tensor4`].
pub fn random_bq<R: Rng>(rng: &mut R, m: usize, n: usize) -> Result<BiquadraticTensor> {
    Ok(random_tensor4(rng, m, n)?.symmetrize())
}

pub fn random_third_order<R: Rng>(rng: &mut R, p: usize, m: usize, n: usize) -> Result<ThirdOrderTensor> {
    ThirdOrderTensor::from_fn(p, m, n, |_, _, _| rng.random_range(-1.0..1.0))
}

/// Symmetric positive definite `d x d` matrix `GᵀG/d + I/2`.
pub fn random_spd<R: Rng>(rng: &mut R, d: usize) -> SymMatrix {
    let g = random_matrix(rng, d, d);
    SymMatrix::from_lower(d, |r, c| {
        let s: f64 = (0..d).map(|k| g[(k, r)] * g[(k, c)]).sum();
        s / d as f64 + if r == c { 0.5 } else { 0.0 }
    })
}

/// Families whose inverse stays biquadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertibleFamily {
    /// `M(A) = S ⊗ T` with `S`, `T` symmetric positive definite.
    Kronecker,
    /// Diagonal with entries of magnitude in `[0.5, 2]` and random signs.
    Diagonal,
    /// `I + c x∘y∘x∘y` with unit `x`, `y` and `c` in `[-0.5, 2]`.
    IdentityPlusRankOne,
}

impl InvertibleFamily {
    pub const ALL: [InvertibleFamily; 3] = [
        InvertibleFamily::Kronecker,
        InvertibleFamily::Diagonal,
        InvertibleFamily::IdentityPlusRankOne,
    ];
}

pub fn invertible_bq<R: Rng>(
    rng: &mut R,
    family: InvertibleFamily,
    m: usize,
    n: usize,
) -> Result<BiquadraticTensor> {
    match family {
        InvertibleFamily::Kronecker => {
            let s = random_spd(rng, m);
            let t = random_spd(rng, n);
            let k = s.as_matrix().kron(t.as_matrix());
            // S ⊗ T folds to s[i1][i2] t[j1][j2], exactly biquadratic.
            BiquadraticTensor::from_orbit_fn(m, n, |ih, jh, il, jl| k[(ih * n + jh, il * n + jl)])
        }
        InvertibleFamily::Diagonal => {
            let d = Matrix::from_fn(m, n, |_, _| {
                let mag = rng.random_range(0.5..2.0);
                if rng.random_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            });
            BiquadraticTensor::diagonal(&d)
        }
        InvertibleFamily::IdentityPlusRankOne => {
            let x = unit_vec(rng, m);
            let y = unit_vec(rng, n);
            let c = rng.random_range(-0.5..2.0);
            BiquadraticTensor::identity(m, n)?.add(&BiquadraticTensor::rank_one(&x, &y)?.scale(c))
        }
    }
}
