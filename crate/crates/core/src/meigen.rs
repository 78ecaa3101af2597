//! M-eigenpairs, spectral-norm envelopes and PSD classification.
//!
//! `(λ, x, y)` is an M-eigenpair of `A` when
//!
//! ```text
//! G(y) x = λ x,   H(x) y = λ y,   ‖x‖ = ‖y‖ = 1,
//! G(y)[i1][i2] = Σ_{j1,j2} a[i1][j1][i2][j2] y[j1] y[j2],
//! H(x)[j1][j2] = Σ_{i1,i2} a[i1][j1][i2][j2] x[i1] x[i2].
//! ```
//!
//! The largest M-eigenvalue is the maximum of the quartic form over the
//! product of unit spheres. It is searched by alternating exact maximisation
//! over `x` (top eigenvector of `G(y)`) and `y` (top eigenvector of `H(x)`)
//! from several seeded starts, followed by a few Newton steps on the
//! eigen-equations. The search is a local method: results are lower envelopes
//! of the true extremum, never certificates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm2, normalized, sign_normalize, Matrix, SymMatrix};
use crate::norms::{BoundSource, NormInterval};
use crate::tensor::BiquadraticTensor;

/// Residual bound every returned pair satisfies, relative to `max(1, ‖A‖_F)`.
pub const RESIDUAL_CONTRACT: f64 = 1e-8;

/// Residual below which Newton polishing is skipped.
const POLISH_TARGET: f64 = 1e-13;

const NEWTON_STEPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MEigenPair {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `max` of the residual norms of the two eigen-equations and the two
    /// normalisation constraints.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub starts: usize,
    pub max_iters: usize,
    /// Stopping threshold on the objective change per sweep, relative to `max(1, |f|)`.
    pub tol: f64,
    /// Diagonal shift for the eigenvector subproblems; `None` means `m n max|a|`.
    pub shift: Option<f64>,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 32,
            max_iters: 2000,
            tol: 1e-15,
            shift: None,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig {
            seed,
            ..SolverConfig::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.starts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidInput(
                "solver starts and max_iters must be positive".into(),
            ));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("solver tol must be positive".into()));
        }
        if matches!(self.shift, Some(s) if !(s >= 0.0)) {
            return Err(Error::InvalidInput("solver shift must be nonnegative".into()));
        }
        Ok(())
    }
}

fn residual_scale(a: &BiquadraticTensor) -> f64 {
    a.frobenius().max(1.0)
}

fn unit(k: usize) -> Vec<f64> {
    let mut e = vec![0.0; k];
    e[0] = 1.0;
    e
}

fn zero_pair(a: &BiquadraticTensor) -> MEigenPair {
    MEigenPair {
        lambda: 0.0,
        x: unit(a.m()),
        y: unit(a.n()),
        residual: 0.0,
    }
}

/// `G(y)`, an `m x m` symmetric matrix with `x^T G(y) x = ⟨A, x∘y∘x∘y⟩`.
pub fn contracted_matrix_y(a: &BiquadraticTensor, y: &[f64]) -> Result<SymMatrix> {
    let (m, n) = a.dims();
    if y.len() != n {
        return Err(Error::dims(format!("y has length {}, expected {n}", y.len())));
    }
    Ok(SymMatrix::from_lower(m, |i1, i2| {
        let mut s = 0.0;
        for j1 in 0..n {
            for j2 in 0..n {
                s += a.get(i1, j1, i2, j2) * (y[j1] * y[j2]);
            }
        }
        s
    }))
}

/// `H(x)`, an `n x n` symmetric matrix with `y^T H(x) y = ⟨A, x∘y∘x∘y⟩`.
pub fn contracted_matrix_x(a: &BiquadraticTensor, x: &[f64]) -> Result<SymMatrix> {
    let (m, n) = a.dims();
    if x.len() != m {
        return Err(Error::dims(format!("x has length {}, expected {m}", x.len())));
    }
    Ok(SymMatrix::from_lower(n, |j1, j2| {
        let mut s = 0.0;
        for i1 in 0..m {
            for i2 in 0..m {
                s += a.get(i1, j1, i2, j2) * (x[i1] * x[i2]);
            }
        }
        s
    }))
}

/// `max(‖G(y)x − λx‖, ‖H(x)y − λy‖, |‖x‖ − 1|, |‖y‖ − 1|)`.
pub fn m_residual(a: &BiquadraticTensor, lambda: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let g = contracted_matrix_y(a, y)?;
    let h = contracted_matrix_x(a, x)?;
    let gx = g.as_matrix().matvec(x)?;
    let hy = h.as_matrix().matvec(y)?;
    let r5: f64 = gx
        .iter()
        .zip(x)
        .map(|(g, x)| (g - lambda * x).powi(2))
        .sum::<f64>()
        .sqrt();
    let r6: f64 = hy
        .iter()
        .zip(y)
        .map(|(h, y)| (h - lambda * y).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(r5
        .max(r6)
        .max((norm2(x) - 1.0).abs())
        .max((norm2(y) - 1.0).abs()))
}

fn top_eigenvector(s: &SymMatrix, shift: f64) -> Result<Vec<f64>> {
    let e = linalg::symeig(&s.add_diagonal(shift))?;
    Ok(e.vector(e.argmax()))
}

/// Result of one alternating run from a single starting pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingRun {
    pub pair: MEigenPair,
    /// Objective after the start and after every half-step.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
}

/// Alternating maximisation of the quartic form from `(x0, y0)`.
///
/// Each half-step replaces one block by the top eigenvector of its shifted
/// contracted matrix, so the objective never decreases. The reported `λ` is
/// the quartic form at the final iterate, so the shift does not enter it.
pub fn alternating_from(
    a: &BiquadraticTensor,
    x0: &[f64],
    y0: &[f64],
    config: &SolverConfig,
) -> Result<AlternatingRun> {
    config.check()?;
    if x0.len() != a.m() || y0.len() != a.n() {
        return Err(Error::dims("starting vectors do not match tensor dimensions"));
    }
    if a.max_abs() == 0.0 {
        return Ok(AlternatingRun {
            pair: zero_pair(a),
            objective_trace: vec![0.0],
            iterations: 0,
        });
    }
    let scale = residual_scale(a);
    let shift = config
        .shift
        .unwrap_or((a.m() * a.n()) as f64 * a.max_abs());
    let mut x = normalized(x0).ok_or_else(|| Error::InvalidInput("x0 is zero".into()))?;
    let mut y = normalized(y0).ok_or_else(|| Error::InvalidInput("y0 is zero".into()))?;

    let mut f = a.quartic_form(&x, &y)?;
    let mut trace = vec![f];
    let mut iterations = 0;
    while iterations < config.max_iters {
        iterations += 1;
        x = top_eigenvector(&contracted_matrix_y(a, &y)?, shift)?;
        trace.push(a.quartic_form(&x, &y)?);
        y = top_eigenvector(&contracted_matrix_x(a, &x)?, shift)?;
        let f_new = a.quartic_form(&x, &y)?;
        trace.push(f_new);
        let delta = (f_new - f).abs();
        f = f_new;
        if delta <= config.tol * f.abs().max(1.0) {
            break;
        }
    }

    let mut residual = m_residual(a, f, &x, &y)?;
    if residual > POLISH_TARGET * scale {
        if let Some((xp, yp, fp, rp)) = newton_polish(a, &x, &y, f, residual, scale) {
            x = xp;
            y = yp;
            f = fp;
            residual = rp;
        }
    }
    sign_normalize(&mut x);
    sign_normalize(&mut y);
    let pair = MEigenPair {
        lambda: f,
        x,
        y,
        residual,
    };
    if residual > RESIDUAL_CONTRACT * scale {
        return Err(Error::MEigenNoConvergence {
            best: Box::new(pair),
        });
    }
    Ok(AlternatingRun {
        pair,
        objective_trace: trace,
        iterations,
    })
}

/// Newton's method on `G(y)x = λx`, `H(x)y = μy`, `‖x‖² = ‖y‖² = 1`.
/// The residual need not fall on every step (the first step from a slowly
/// converging alternating run often overshoots), so all steps are taken and
/// the iterate with the smallest residual is kept, provided its objective is
/// not below the starting one beyond rounding.
fn newton_polish(
    a: &BiquadraticTensor,
    x0: &[f64],
    y0: &[f64],
    f0: f64,
    r0: f64,
    scale: f64,
) -> Option<(Vec<f64>, Vec<f64>, f64, f64)> {
    let (m, n) = a.dims();
    let dim = m + n + 2;
    let (mut x, mut y, mut f) = (x0.to_vec(), y0.to_vec(), f0);
    let mut best: Option<(Vec<f64>, Vec<f64>, f64, f64)> = None;
    let mut best_r = r0;
    for _ in 0..NEWTON_STEPS {
        if best_r <= POLISH_TARGET * scale {
            break;
        }
        let g = contracted_matrix_y(a, &y).ok()?;
        let h = contracted_matrix_x(a, &x).ok()?;
        let c = Matrix::from_fn(m, n, |i, j| {
            let mut s = 0.0;
            for i2 in 0..m {
                for j2 in 0..n {
                    s += a.get(i, j, i2, j2) * x[i2] * y[j2];
                }
            }
            2.0 * s
        });
        let (lam, mu) = (f, f);
        let mut jac = Matrix::zeros(dim, dim);
        let mut rhs = vec![0.0; dim];
        let gx = g.as_matrix().matvec(&x).ok()?;
        let hy = h.as_matrix().matvec(&y).ok()?;
        for i in 0..m {
            for k in 0..m {
                jac[(i, k)] = g[(i, k)] - if i == k { lam } else { 0.0 };
            }
            for j in 0..n {
                jac[(i, m + j)] = c[(i, j)];
            }
            jac[(i, m + n)] = -x[i];
            rhs[i] = -(gx[i] - lam * x[i]);
        }
        for j in 0..n {
            for i in 0..m {
                jac[(m + j, i)] = c[(i, j)];
            }
            for k in 0..n {
                jac[(m + j, m + k)] = h[(j, k)] - if j == k { mu } else { 0.0 };
            }
            jac[(m + j, m + n + 1)] = -y[j];
            rhs[m + j] = -(hy[j] - mu * y[j]);
        }
        for i in 0..m {
            jac[(m + n, i)] = x[i];
        }
        for j in 0..n {
            jac[(m + n + 1, m + j)] = y[j];
        }
        rhs[m + n] = -0.5 * (dot(&x, &x) - 1.0);
        rhs[m + n + 1] = -0.5 * (dot(&y, &y) - 1.0);

        let Ok(step) = linalg::solve(&jac, &rhs) else {
            break;
        };
        let xn: Vec<f64> = x.iter().zip(&step[..m]).map(|(a, d)| a + d).collect();
        let yn: Vec<f64> = y.iter().zip(&step[m..m + n]).map(|(a, d)| a + d).collect();
        let (Some(xn), Some(yn)) = (normalized(&xn), normalized(&yn)) else {
            break;
        };
        x = xn;
        y = yn;
        f = a.quartic_form(&x, &y).ok()?;
        let r = m_residual(a, f, &x, &y).ok()?;
        if r < best_r && f >= f0 - 1e-12 * scale {
            best_r = r;
            best = Some((x.clone(), y.clone(), f, r));
        }
    }
    best
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

/// Single seeded run of [`alternating_from`].
pub fn alternating_maximize(a: &BiquadraticTensor, config: &SolverConfig) -> Result<MEigenPair> {
    config.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let x0 = random_unit(&mut rng, a.m());
    let y0 = random_unit(&mut rng, a.n());
    Ok(alternating_from(a, &x0, &y0, config)?.pair)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Whether `cand` should replace `best` in a maximisation; ties within
/// `tie_tol` go to the larger `|λ|` and then the lexicographically smaller
/// `(x, y)`.
fn better(cand: &MEigenPair, best: &MEigenPair, tie_tol: f64) -> bool {
    if (cand.lambda - best.lambda).abs() > tie_tol {
        return cand.lambda > best.lambda;
    }
    if cand.lambda.abs() != best.lambda.abs() {
        return cand.lambda.abs() > best.lambda.abs();
    }
    lex_cmp(&cand.x, &best.x)
        .then_with(|| lex_cmp(&cand.y, &best.y))
        .is_lt()
}

/// Best pair over `config.starts` seeded starts (a lower envelope of the
/// largest M-eigenvalue).
pub fn largest_m_eigenvalue(a: &BiquadraticTensor, config: &SolverConfig) -> Result<MEigenPair> {
    config.check()?;
    if a.max_abs() == 0.0 {
        return Ok(zero_pair(a));
    }
    let tie_tol = 1e-12 * residual_scale(a);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<MEigenPair> = None;
    let mut best_failed: Option<MEigenPair> = None;
    for _ in 0..config.starts {
        let x0 = random_unit(&mut rng, a.m());
        let y0 = random_unit(&mut rng, a.n());
        match alternating_from(a, &x0, &y0, config) {
            Ok(run) => {
                if best.as_ref().is_none_or(|b| better(&run.pair, b, tie_tol)) {
                    best = Some(run.pair);
                }
            }
            Err(Error::MEigenNoConvergence { best: pair }) => {
                if best_failed.as_ref().is_none_or(|b| pair.residual < b.residual) {
                    best_failed = Some(*pair);
                }
            }
            Err(e) => return Err(e),
        }
    }
    match (best, best_failed) {
        (Some(pair), _) => Ok(pair),
        (None, Some(pair)) => Err(Error::MEigenNoConvergence {
            best: Box::new(pair),
        }),
        (None, None) => unreachable!("starts > 0"),
    }
}

/// Smallest M-eigenvalue estimate, `−(largest of −A)` (an upper envelope).
pub fn smallest_m_eigenvalue(a: &BiquadraticTensor, config: &SolverConfig) -> Result<MEigenPair> {
    let mut p = largest_m_eigenvalue(&a.neg(), config)?;
    p.lambda = -p.lambda;
    Ok(p)
}

/// `[max |λ| found, ‖M(A)‖_S]`.
pub fn spectral_norm_interval(
    a: &BiquadraticTensor,
    config: &SolverConfig,
) -> Result<NormInterval> {
    let hi = largest_m_eigenvalue(a, config)?;
    let lo = smallest_m_eigenvalue(a, config)?;
    let lower = hi.lambda.abs().max(lo.lambda.abs());
    let upper = linalg::sym_spectral_norm(&a.flatten_square())?;
    NormInterval::checked(
        lower,
        upper,
        BoundSource::MEigenSearch,
        BoundSource::MatrixSpectral,
        1e-10 * residual_scale(a),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsdTag {
    CertifiedPSD,
    NotPSD,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub tag: PsdTag,
    pub witness: Option<PsdWitness>,
    /// Smallest M-eigenvalue found by the search.
    pub min_estimate: f64,
}

/// Certifies PSD through `λ_min(M(A)) ≥ 0` (the quartic form is
/// `(x⊗y)^T M(A) (x⊗y)`), refutes it with a negative quartic value, or
/// reports `Unknown`.
pub fn psd_classify(a: &BiquadraticTensor, config: &SolverConfig) -> Result<PsdVerdict> {
    let fro = a.frobenius();
    let small = smallest_m_eigenvalue(a, config)?;
    let threshold = 1e-10 * fro;
    let flat_min = linalg::symeig(&a.flatten_square())?.min_value();
    if flat_min >= -threshold {
        return Ok(PsdVerdict {
            tag: PsdTag::CertifiedPSD,
            witness: None,
            min_estimate: small.lambda,
        });
    }
    let value = a.quartic_form(&small.x, &small.y)?;
    if value < -threshold {
        return Ok(PsdVerdict {
            tag: PsdTag::NotPSD,
            witness: Some(PsdWitness {
                x: small.x,
                y: small.y,
                value,
            }),
            min_estimate: small.lambda,
        });
    }
    Ok(PsdVerdict {
        tag: PsdTag::Unknown,
        witness: None,
        min_estimate: small.lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{self, GridSpec};
    use crate::tensor::{Tensor4, ThirdOrderTensor};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn random_bq(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BiquadraticTensor {
        Tensor4::from_fn(m, n, |_, _, _, _| rng.random_range(-1.0..1.0))
            .unwrap()
            .symmetrize()
    }

    #[test]
    fn contracted_matrices_of_identity_and_rank_one() {
        let id = BiquadraticTensor::identity(3, 2).unwrap();
        let g = contracted_matrix_y(&id, &[0.6, 0.8]).unwrap();
        assert!(g.as_matrix().sub(&Matrix::identity(3)).unwrap().max_abs() < 1e-15);

        let x0 = [0.6, 0.0, 0.8];
        let y0 = [0.0, 1.0];
        let r1 = BiquadraticTensor::rank_one(&x0, &y0).unwrap();
        let g = contracted_matrix_y(&r1, &y0).unwrap();
        let outer = Matrix::from_fn(3, 3, |i, j| x0[i] * x0[j]);
        assert!(g.as_matrix().sub(&outer).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn contracted_quadratic_matches_naive_quartic() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let a = random_bq(&mut rng, 3, 2);
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let naive = oracle::naive_quartic(&a, &x, &y);
            let g = contracted_matrix_y(&a, &y).unwrap();
            let h = contracted_matrix_x(&a, &x).unwrap();
            let via_g = dot(&x, &g.as_matrix().matvec(&x).unwrap());
            let via_h = dot(&y, &h.as_matrix().matvec(&y).unwrap());
            assert_abs_diff_eq!(via_g, naive, epsilon = 1e-12);
            assert_abs_diff_eq!(via_h, naive, epsilon = 1e-12);
        }
    }

    #[test]
    fn identity_every_pair_is_eigenpair() {
        let id = BiquadraticTensor::identity(3, 2).unwrap();
        let p = alternating_maximize(&id, &SolverConfig::default()).unwrap();
        assert_abs_diff_eq!(p.lambda, 1.0, epsilon = 1e-14);
        assert!(p.residual <= 1e-10);
        let lo = smallest_m_eigenvalue(&id, &SolverConfig::default()).unwrap();
        assert_abs_diff_eq!(lo.lambda, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn scaled_rank_one_recovers_factors() {
        let x0 = [0.6, 0.8];
        let y0 = [1.0 / 3f64.sqrt(); 3];
        let a = BiquadraticTensor::rank_one(&x0, &y0).unwrap().scale(3.0);
        let p = largest_m_eigenvalue(&a, &SolverConfig::default()).unwrap();
        assert_abs_diff_eq!(p.lambda, 3.0, epsilon = 1e-12);
        for (u, v) in p.x.iter().zip(x0) {
            assert_abs_diff_eq!(*u, v, epsilon = 1e-8);
        }
        for (u, v) in p.y.iter().zip(y0) {
            assert_abs_diff_eq!(*u, v, epsilon = 1e-8);
        }
    }

    #[test]
    fn diagonal_largest_is_max_weight() {
        let d = Matrix::from_rows(&[vec![5.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let a = BiquadraticTensor::diagonal(&d).unwrap();
        let p = largest_m_eigenvalue(&a, &SolverConfig::default()).unwrap();
        assert_abs_diff_eq!(p.lambda, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.x[0].abs(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(p.y[0].abs(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn random_largest_matches_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let cfg = SolverConfig {
            starts: 64,
            ..SolverConfig::default()
        };
        for _ in 0..5 {
            let a = random_bq(&mut rng, 2, 2);
            let p = largest_m_eigenvalue(&a, &cfg).unwrap();
            let grid = oracle::quartic_extrema_grid(&a, &GridSpec::default()).unwrap();
            assert!(p.lambda >= grid.max - 1e-12);
            assert!((p.lambda - grid.max).abs() <= 1e-4, "{} vs {}", p.lambda, grid.max);
        }
    }

    #[test]
    fn objective_trace_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..20 {
            let a = random_bq(&mut rng, 3, 4);
            let x0: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y0: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let run = alternating_from(&a, &x0, &y0, &SolverConfig::default()).unwrap();
            for w in run.objective_trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "{w:?}");
            }
        }
    }

    #[test]
    fn residual_is_zero_on_exact_pair_and_grows_with_perturbation() {
        let id = BiquadraticTensor::identity(2, 2).unwrap();
        let c = 1.0 / 2f64.sqrt();
        assert!(m_residual(&id, 1.0, &[c, c], &[1.0, 0.0]).unwrap() <= 1e-12);

        let d = Matrix::from_rows(&[vec![5.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let a = BiquadraticTensor::diagonal(&d).unwrap();
        let mut last = 0.0;
        for delta in [0.0, 1e-6, 1e-4, 1e-2] {
            let x = normalized(&[1.0, delta]).unwrap();
            let r = m_residual(&a, 5.0, &x, &[1.0, 0.0]).unwrap();
            assert!(r >= last);
            last = r;
        }
        assert!(last > 0.0);
    }

    #[test]
    fn zero_tensor_is_degenerate() {
        let z = BiquadraticTensor::zeros(2, 3).unwrap();
        let p = largest_m_eigenvalue(&z, &SolverConfig::default()).unwrap();
        assert_eq!(p.lambda, 0.0);
        assert_eq!(p.x, vec![1.0, 0.0]);
        assert_eq!(p.y, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn gram_tensor_is_never_refuted() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..10 {
            let t = ThirdOrderTensor::from_fn(2, 2, 2, |_, _, _| rng.random_range(-1.0..1.0))
                .unwrap();
            let g = t.contract();
            let cfg = SolverConfig::default();
            let small = smallest_m_eigenvalue(&g, &cfg).unwrap();
            assert!(small.lambda >= -1e-8);
            let v = psd_classify(&g, &cfg).unwrap();
            assert_ne!(v.tag, PsdTag::NotPSD);
            assert!(v.min_estimate >= -1e-8);
        }
    }

    #[test]
    fn psd_examples() {
        let id = BiquadraticTensor::identity(2, 3).unwrap();
        let cfg = SolverConfig::default();
        assert_eq!(psd_classify(&id, &cfg).unwrap().tag, PsdTag::CertifiedPSD);
        let v = psd_classify(&id.neg(), &cfg).unwrap();
        assert_eq!(v.tag, PsdTag::NotPSD);
        assert!(v.witness.unwrap().value < 0.0);
    }

    #[test]
    fn spectral_interval_examples() {
        let cfg = SolverConfig::default();
        let id = spectral_norm_interval(&BiquadraticTensor::identity(2, 3).unwrap(), &cfg).unwrap();
        assert_abs_diff_eq!(id.lower, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(id.upper, 1.0, epsilon = 1e-10);

        let r1 = BiquadraticTensor::rank_one(&[0.6, 0.8], &[0.0, 0.6, 0.8])
            .unwrap()
            .scale(-2.5);
        let iv = spectral_norm_interval(&r1, &cfg).unwrap();
        assert_abs_diff_eq!(iv.lower, 2.5, epsilon = 1e-10);
        assert_abs_diff_eq!(iv.upper, 2.5, epsilon = 1e-10);
    }

    #[test]
    fn rejects_bad_config() {
        let id = BiquadraticTensor::identity(2, 2).unwrap();
        let cfg = SolverConfig {
            starts: 0,
            ..SolverConfig::default()
        };
        assert!(largest_m_eigenvalue(&id, &cfg).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn scale_equivariance(seed in any::<u64>(), c in 0.1f64..5.0) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_bq(&mut rng, 2, 3);
                let cfg = SolverConfig::with_seed(seed);
                let base_hi = largest_m_eigenvalue(&a, &cfg).unwrap().lambda;
                let base_lo = smallest_m_eigenvalue(&a, &cfg).unwrap().lambda;
                let pos = largest_m_eigenvalue(&a.scale(c), &cfg).unwrap().lambda;
                let neg = largest_m_eigenvalue(&a.scale(-c), &cfg).unwrap().lambda;
                prop_assert!((pos - c * base_hi).abs() <= 1e-8 * c.max(1.0));
                prop_assert!((neg + c * base_lo).abs() <= 1e-8 * c.max(1.0));
            }

            #[test]
            fn returned_pairs_meet_residual_contract(seed in any::<u64>(), m in 1usize..5, n in 1usize..5) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_bq(&mut rng, m, n);
                let cfg = SolverConfig { starts: 8, ..SolverConfig::with_seed(seed) };
                let p = largest_m_eigenvalue(&a, &cfg).unwrap();
                let r = m_residual(&a, p.lambda, &p.x, &p.y).unwrap();
                prop_assert!(r <= RESIDUAL_CONTRACT * a.frobenius().max(1.0));
                prop_assert!((norm2(&p.x) - 1.0).abs() <= 1e-12);
                prop_assert!((norm2(&p.y) - 1.0).abs() <= 1e-12);
                let iv = spectral_norm_interval(&a, &cfg).unwrap();
                prop_assert!(iv.lower <= iv.upper + 1e-10);
            }
        }
    }
}
