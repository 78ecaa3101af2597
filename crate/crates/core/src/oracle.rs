//! Brute-force references for differential testing.
//!
//! Everything in this module is a literal index-loop transcription of a
//! defining formula, or an exhaustive search. Nothing here calls into the
//! production eigen/decomposition code paths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::{Tensor4, ThirdOrderTensor};

/// Largest dimension any oracle accepts.
pub const MAX_ORACLE_DIM: usize = 3;

/// Upper limit on grid evaluations for a single extrema search.
pub const MAX_GRID_POINTS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Points per angular coordinate, at least 8.
    pub resolution: usize,
    /// Extra random unit-pair draws on top of the grid.
    pub samples: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: 360,
            samples: 2000,
            seed: 0,
        }
    }
}

impl GridSpec {
    fn check(&self) -> Result<()> {
        if self.resolution < 8 {
            return Err(Error::InvalidInput(format!(
                "grid resolution must be >= 8, got {}",
                self.resolution
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridExtrema {
    pub min: f64,
    pub max: f64,
    pub argmin: (Vec<f64>, Vec<f64>),
    pub argmax: (Vec<f64>, Vec<f64>),
}

/// Grid over the unit sphere in `R^d`, modulo sign (`v` and `-v` are not both
/// listed; every function searched here is even in each argument).
///
/// * `d = 1`: the single point `1`.
/// * `d = 2`: `(cos t, sin t)`, `t = pi k / res`, `k < res`.
/// * `d = 3`: polar angle `pi a / (res - 1)`, `a < res`, azimuth `pi b / res`, `b < res`.
pub fn sphere_grid(d: usize, res: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    match d {
        1 => vec![vec![1.0]],
        2 => (0..res)
            .map(|k| {
                let t = PI * k as f64 / res as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let mut pts = Vec::with_capacity(res * res);
            for a in 0..res {
                let th = PI * a as f64 / (res - 1) as f64;
                for b in 0..res {
                    let ph = PI * b as f64 / res as f64;
                    pts.push(vec![th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]);
                    if a == 0 || a == res - 1 {
                        break; // poles
                    }
                }
            }
            pts
        }
        _ => unreachable!("guarded by MAX_ORACLE_DIM"),
    }
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-12 {
            return v.into_iter().map(|x| x / nrm).collect();
        }
    }
}

fn guard(dims: &[usize]) -> Result<()> {
    if dims.iter().any(|&d| d > MAX_ORACLE_DIM) {
        return Err(Error::DimensionTooLarge(format!(
            "oracle dimensions {dims:?} exceed {MAX_ORACLE_DIM}"
        )));
    }
    Ok(())
}

/// Exhaustive angular grid (plus random draws) for the extrema of the quartic
/// form over the product of unit spheres.
pub fn quartic_extrema_grid(a: &Tensor4, spec: &GridSpec) -> Result<GridExtrema> {
    spec.check()?;
    let (m, n) = a.dims();
    guard(&[m, n])?;
    let xs = sphere_grid(m, spec.resolution);
    let ys = sphere_grid(n, spec.resolution);
    if xs.len() * ys.len() > MAX_GRID_POINTS {
        return Err(Error::DimensionTooLarge(format!(
            "{} grid points requested",
            xs.len() * ys.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let samples: Vec<(Vec<f64>, Vec<f64>)> = (0..spec.samples)
        .map(|_| (random_unit(&mut rng, m), random_unit(&mut rng, n)))
        .collect();

    let mut best: Option<GridExtrema> = None;
    let mut visit = |x: &Vec<f64>, y: &Vec<f64>| {
        let v = naive_quartic(a, x, y);
        match best.as_mut() {
            None => {
                best = Some(GridExtrema {
                    min: v,
                    max: v,
                    argmin: (x.clone(), y.clone()),
                    argmax: (x.clone(), y.clone()),
                })
            }
            Some(b) => {
                if v < b.min {
                    b.min = v;
                    b.argmin = (x.clone(), y.clone());
                }
                if v > b.max {
                    b.max = v;
                    b.argmax = (x.clone(), y.clone());
                }
            }
        }
    };
    for x in &xs {
        for y in &ys {
            visit(x, y);
        }
    }
    for (x, y) in &samples {
        visit(x, y);
    }
    Ok(best.expect("grid is non-empty"))
}

/// `max |Σ t[k][i][j] z_k x_i y_j|` over unit `z, x, y`, searched on a grid in
/// `(x, y)`. For fixed `(x, y)` the maximum over `z` is attained in closed form
/// at `z ∝ w`, `w_k = Σ_ij t[k][i][j] x_i y_j`, with value `‖w‖`.
pub fn third_order_spectral_norm_brute(t: &ThirdOrderTensor, spec: &GridSpec) -> Result<f64> {
    spec.check()?;
    let (p, m, n) = t.dims();
    guard(&[p, m, n])?;
    let xs = sphere_grid(m, spec.resolution);
    let ys = sphere_grid(n, spec.resolution);
    if xs.len() * ys.len() > MAX_GRID_POINTS {
        return Err(Error::DimensionTooLarge(format!(
            "{} grid points requested",
            xs.len() * ys.len()
        )));
    }
    let value = |x: &[f64], y: &[f64]| -> f64 {
        let mut sq = 0.0;
        for k in 0..p {
            let mut w = 0.0;
            for i in 0..m {
                for j in 0..n {
                    w += t.get(k, i, j) * x[i] * y[j];
                }
            }
            sq += w * w;
        }
        sq.sqrt()
    };
    let mut best = 0.0_f64;
    for x in &xs {
        for y in &ys {
            best = best.max(value(x, y));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.samples {
        let x = random_unit(&mut rng, m);
        let y = random_unit(&mut rng, n);
        best = best.max(value(&x, &y));
    }
    Ok(best)
}

/// `Σ a[i1][j1][i2][j2] x[i1] y[j1] x[i2] y[j2]`.
pub fn naive_quartic(a: &Tensor4, x: &[f64], y: &[f64]) -> f64 {
    let (m, n) = a.dims();
    let mut s = 0.0;
    for i1 in 0..m {
        for j1 in 0..n {
            for i2 in 0..m {
                for j2 in 0..n {
                    s += a.get(i1, j1, i2, j2) * x[i1] * y[j1] * x[i2] * y[j2];
                }
            }
        }
    }
    s
}

/// `c[i1][j1][i2][j2] = Σ_{i3, j3} a[i1][j1][i3][j3] b[i3][j3][i2][j2]`.
pub fn naive_product(a: &Tensor4, b: &Tensor4) -> Tensor4 {
    let (m, n) = a.dims();
    assert_eq!(a.dims(), b.dims());
    Tensor4::from_fn(m, n, |i1, j1, i2, j2| {
        let mut s = 0.0;
        for i3 in 0..m {
            for j3 in 0..n {
                s += a.get(i1, j1, i3, j3) * b.get(i3, j3, i2, j2);
            }
        }
        s
    })
    .expect("finite inputs")
}

/// `a[i1][j1][i2][j2] = Σ b[k1][l1][k2][l2] P[i1][k1] Q[j1][l1] P[i2][k2] Q[j2][l2]`.
pub fn naive_mode_multiply(b: &Tensor4, p: &Matrix, q: &Matrix) -> Tensor4 {
    let (d1, d2) = b.dims();
    assert_eq!(p.cols(), d1);
    assert_eq!(q.cols(), d2);
    Tensor4::from_fn(p.rows(), q.rows(), |i1, j1, i2, j2| {
        let mut s = 0.0;
        for k1 in 0..d1 {
            for l1 in 0..d2 {
                for k2 in 0..d1 {
                    for l2 in 0..d2 {
                        s += b.get(k1, l1, k2, l2)
                            * p[(i1, k1)]
                            * q[(j1, l1)]
                            * p[(i2, k2)]
                            * q[(j2, l2)];
                    }
                }
            }
        }
        s
    })
    .expect("finite inputs")
}

/// `M[(i1 - 1) n + j1][(i2 - 1) n + j2] = a[i1][j1][i2][j2]` (one-based).
pub fn naive_flatten(a: &Tensor4) -> Matrix {
    let (m, n) = a.dims();
    let mut out = Matrix::zeros(m * n, m * n);
    for i1 in 1..=m {
        for j1 in 1..=n {
            for i2 in 1..=m {
                for j2 in 1..=n {
                    out[((i1 - 1) * n + j1 - 1, (i2 - 1) * n + j2 - 1)] =
                        a.get(i1 - 1, j1 - 1, i2 - 1, j2 - 1);
                }
            }
        }
    }
    out
}
