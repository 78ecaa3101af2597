//! Certified intervals for the spectral and nuclear norms.
//!
//! Nuclear norm: `‖M(A)‖_* ≤ ‖A‖_* ≤ min(m, n) ‖M(A)‖_*`, and any biquadratic
//! rank-one decomposition `A = Σ c_k x_k∘y_k∘x_k∘y_k` with unit factors gives
//! `‖A‖_* ≤ Σ |c_k|`. For diagonal tensors both sides collapse to
//! `Σ |a[i][j][i][j]|`.

use serde::{Deserialize, Serialize};

use crate::decomp;
use crate::error::{Error, Result};
use crate::linalg;
use crate::meigen::{self, SolverConfig};
use crate::tensor::BiquadraticTensor;

/// Off-diagonal magnitude below which a tensor is treated as diagonal.
pub const DIAGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSource {
    #[serde(rename = "matrix-nuclear")]
    MatrixNuclear,
    #[serde(rename = "min(m,n)·matrix-nuclear")]
    ScaledMatrixNuclear,
    #[serde(rename = "decomposition-sum")]
    DecompositionSum,
    #[serde(rename = "diagonal-exact")]
    DiagonalExact,
    #[serde(rename = "m-eigen-search")]
    MEigenSearch,
    #[serde(rename = "matrix-spectral")]
    MatrixSpectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormInterval {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub lower_source: BoundSource,
    pub upper_source: BoundSource,
}

impl NormInterval {
    /// Builds an interval, rejecting `lower > upper + tol`. Such a pair means
    /// one of the kernels is wrong, so it is never clamped. A lower bound
    /// above the upper one by at most `tol` is rounding and is lowered to
    /// `upper`, which keeps it a valid lower bound.
    pub fn checked(
        lower: f64,
        upper: f64,
        lower_source: BoundSource,
        upper_source: BoundSource,
        tol: f64,
    ) -> Result<Self> {
        if !(lower <= upper + tol) || lower < 0.0 || upper < 0.0 {
            return Err(Error::IntervalInconsistent { lower, upper });
        }
        Ok(NormInterval {
            lower: lower.min(upper),
            upper,
            exact: false,
            lower_source,
            upper_source,
        })
    }

    pub fn exact(value: f64, source: BoundSource) -> Self {
        NormInterval {
            lower: value,
            upper: value,
            exact: true,
            lower_source: source,
            upper_source: source,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }
}

/// `Σ |a[i][j][i][j]|` when every off-diagonal entry is negligible.
pub fn diagonal_nuclear_exact(a: &BiquadraticTensor) -> Option<f64> {
    a.is_diagonal(DIAGONAL_TOL)
        .then(|| a.diagonal_entries().as_slice().iter().map(|v| v.abs()).sum())
}

pub fn nuclear_norm_interval(a: &BiquadraticTensor) -> Result<NormInterval> {
    if let Some(v) = diagonal_nuclear_exact(a) {
        return Ok(NormInterval::exact(v, BoundSource::DiagonalExact));
    }
    let lower = linalg::sym_nuclear_norm(&a.flatten_square())?;
    if a.m().min(a.n()) == 1 {
        // The two flattening bounds coincide.
        return Ok(NormInterval::exact(lower, BoundSource::MatrixNuclear));
    }
    let scaled = a.m().min(a.n()) as f64 * lower;
    let dec = decomp::bq_rank_one_decompose(a, decomp::DEFAULT_DROP_TOL)?;
    let dec_sum = dec.coefficient_sum();
    let (upper, upper_source) = if dec_sum < scaled {
        (dec_sum, BoundSource::DecompositionSum)
    } else {
        (scaled, BoundSource::ScaledMatrixNuclear)
    };
    NormInterval::checked(
        lower,
        upper,
        BoundSource::MatrixNuclear,
        upper_source,
        1e-10 * a.frobenius().max(1.0),
    )
}

pub fn spectral_norm_interval(
    a: &BiquadraticTensor,
    config: &SolverConfig,
) -> Result<NormInterval> {
    meigen::spectral_norm_interval(a, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::tensor::Tensor4;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bq(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BiquadraticTensor {
        Tensor4::from_fn(m, n, |_, _, _, _| rng.random_range(-1.0..1.0))
            .unwrap()
            .symmetrize()
    }

    #[test]
    fn identity_nuclear_is_mn() {
        for (m, n) in [(1, 1), (2, 3), (3, 2), (4, 4)] {
            let iv = nuclear_norm_interval(&BiquadraticTensor::identity(m, n).unwrap()).unwrap();
            assert!(iv.exact);
            assert_eq!(iv.lower, (m * n) as f64);
            assert_eq!(iv.upper, (m * n) as f64);
        }
    }

    #[test]
    fn diagonal_nuclear_examples() {
        assert_eq!(
            diagonal_nuclear_exact(&BiquadraticTensor::identity(3, 2).unwrap()),
            Some(6.0)
        );
        let d = Matrix::from_rows(&[vec![-1.0, 2.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(
            diagonal_nuclear_exact(&BiquadraticTensor::diagonal(&d).unwrap()),
            Some(6.0)
        );
        let r1 = BiquadraticTensor::rank_one(&[0.6, 0.8], &[0.8, 0.6]).unwrap();
        assert_eq!(diagonal_nuclear_exact(&r1), None);

        let d23 = Matrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![0.0, 3.0, -4.0]]).unwrap();
        let iv = nuclear_norm_interval(&BiquadraticTensor::diagonal(&d23).unwrap()).unwrap();
        assert_eq!((iv.lower, iv.upper), (10.5, 10.5));
    }

    #[test]
    fn random_nuclear_sandwich() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let a = random_bq(&mut rng, 2, 2);
            let iv = nuclear_norm_interval(&a).unwrap();
            assert!(iv.lower <= iv.upper);
            assert!(iv.upper <= 2.0 * iv.lower + 1e-12);
        }
    }

    #[test]
    fn rank_one_nuclear_is_one() {
        let r1 = BiquadraticTensor::rank_one(&[0.6, 0.8], &[0.8, 0.6]).unwrap();
        let iv = nuclear_norm_interval(&r1).unwrap();
        assert_abs_diff_eq!(iv.lower, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(iv.upper, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn spectral_interval_of_scaled_rank_one() {
        let r1 = BiquadraticTensor::rank_one(&[0.6, 0.8], &[0.8, 0.6])
            .unwrap()
            .scale(-4.0);
        let iv = spectral_norm_interval(&r1, &SolverConfig::default()).unwrap();
        assert_abs_diff_eq!(iv.lower, 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(iv.upper, 4.0, epsilon = 1e-10);
        assert_eq!(iv.lower_source, BoundSource::MEigenSearch);
        assert_eq!(iv.upper_source, BoundSource::MatrixSpectral);
    }

    #[test]
    fn interval_serializes_with_source_tags() {
        let iv = NormInterval::checked(
            1.0,
            2.0,
            BoundSource::MatrixNuclear,
            BoundSource::ScaledMatrixNuclear,
            0.0,
        )
        .unwrap();
        let s = serde_json::to_string(&iv).unwrap();
        assert_eq!(
            s,
            r#"{"lower":1.0,"upper":2.0,"exact":false,"lower_source":"matrix-nuclear","upper_source":"min(m,n)·matrix-nuclear"}"#
        );
    }

    #[test]
    fn rounding_inversion_is_lowered() {
        let iv = NormInterval::checked(
            1.0 + 1e-15,
            1.0,
            BoundSource::MEigenSearch,
            BoundSource::MatrixSpectral,
            1e-10,
        )
        .unwrap();
        assert_eq!((iv.lower, iv.upper), (1.0, 1.0));
    }

    #[test]
    fn single_column_nuclear_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = random_bq(&mut rng, 1, 3);
        let iv = nuclear_norm_interval(&a).unwrap();
        assert!(iv.exact);
        assert_eq!(iv.lower_source, BoundSource::MatrixNuclear);
        let d = decomp::bq_rank_one_decompose(&a, decomp::DEFAULT_DROP_TOL).unwrap();
        assert_abs_diff_eq!(d.coefficient_sum(), iv.lower, epsilon = 1e-10);
    }

    #[test]
    fn inconsistent_interval_is_an_error() {
        assert!(matches!(
            NormInterval::checked(2.0, 1.0, BoundSource::MatrixNuclear, BoundSource::MatrixNuclear, 1e-10),
            Err(Error::IntervalInconsistent { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            // |⟨A, B⟩| ≤ ‖A‖_* ‖B‖_S, with B rescaled so its certified
            // spectral upper bound is 1.
            #[test]
            fn duality_sanity(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_bq(&mut rng, m, n);
                let b = Tensor4::from_fn(m, n, |_, _, _, _| rng.random_range(-1.0..1.0)).unwrap().symmetrize();
                let sb = linalg::sym_spectral_norm(&b.flatten_square()).unwrap();
                let b = b.scale(1.0 / sb);
                let iv = nuclear_norm_interval(&a).unwrap();
                prop_assert!(a.inner(&b).unwrap().abs() <= iv.upper + 1e-8);
            }
        }
    }
}
