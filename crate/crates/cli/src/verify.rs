//! The `verify` battery: inequality checks, decomposition round trips and
//! Tucker preservation on each instance.

use biquad_core::algebra::{verify_inequalities, InequalityReport, VerifyConfig};
use biquad_core::decomp::{self, bq_rank_one_decompose, hosvd, tucker_ranks};
use biquad_core::meigen::largest_m_eigenvalue;
use biquad_core::{BiquadraticTensor, Result, SolverConfig};
use serde::Serialize;

pub const RECONSTRUCTION_TOL: f64 = 1e-8;
pub const EIGEN_PRESERVATION_TOL: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct DecompositionCheck {
    pub terms: usize,
    pub term_bound: usize,
    pub reconstruction_error: f64,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct TuckerCheck {
    pub ranks: (usize, usize),
    pub hosvd_error: f64,
    pub largest_m_eigenvalue: f64,
    pub core_largest_m_eigenvalue: f64,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct InstanceResult {
    pub index: usize,
    pub inequalities: InequalityReport,
    pub decomposition: DecompositionCheck,
    pub tucker: TuckerCheck,
    pub sound: bool,
}

#[derive(Debug, Serialize)]
pub struct Battery {
    pub instances: usize,
    pub all_sound: bool,
    pub violations: Vec<String>,
    pub results: Vec<InstanceResult>,
}

fn decomposition_check(a: &BiquadraticTensor) -> Result<DecompositionCheck> {
    let d = bq_rank_one_decompose(a, decomp::DEFAULT_DROP_TOL)?;
    let term_bound = decomp::term_bound(a.m(), a.n());
    Ok(DecompositionCheck {
        terms: d.len(),
        term_bound,
        reconstruction_error: d.reconstruction_error,
        ok: d.reconstruction_error <= RECONSTRUCTION_TOL && d.len() <= term_bound,
    })
}

fn tucker_check(a: &BiquadraticTensor, solver: &SolverConfig) -> Result<TuckerCheck> {
    let ranks = tucker_ranks(a, decomp::DEFAULT_RANK_TOL)?;
    let lambda_a = largest_m_eigenvalue(a, solver)?.lambda;
    if ranks.0 == 0 || ranks.1 == 0 {
        return Ok(TuckerCheck {
            ranks,
            hosvd_error: 0.0,
            largest_m_eigenvalue: lambda_a,
            core_largest_m_eigenvalue: 0.0,
            ok: lambda_a.abs() <= EIGEN_PRESERVATION_TOL * a.frobenius().max(1.0),
        });
    }
    let t = hosvd(a, ranks.0, ranks.1)?;
    let lambda_core = largest_m_eigenvalue(&t.core, solver)?.lambda;
    Ok(TuckerCheck {
        ranks,
        hosvd_error: t.reconstruction_error,
        largest_m_eigenvalue: lambda_a,
        core_largest_m_eigenvalue: lambda_core,
        ok: t.reconstruction_error <= RECONSTRUCTION_TOL
            && (lambda_a - lambda_core).abs() <= EIGEN_PRESERVATION_TOL * lambda_a.abs().max(1.0),
    })
}

pub fn check_instance(
    index: usize,
    a: &BiquadraticTensor,
    b: &BiquadraticTensor,
    config: &VerifyConfig,
) -> Result<InstanceResult> {
    let inequalities = verify_inequalities(a, b, config)?;
    let decomposition = decomposition_check(a)?;
    let tucker = tucker_check(a, &config.solver)?;
    let sound = inequalities.all_sound && decomposition.ok && tucker.ok;
    Ok(InstanceResult {
        index,
        inequalities,
        decomposition,
        tucker,
        sound,
    })
}

pub fn summarize(results: Vec<InstanceResult>) -> Battery {
    let mut violations = Vec::new();
    for r in &results {
        for c in r.inequalities.checks.iter().filter(|c| !c.satisfied) {
            violations.push(format!("instance {}: {}", r.index, c.name));
        }
        if !r.decomposition.ok {
            violations.push(format!("instance {}: decomposition", r.index));
        }
        if !r.tucker.ok {
            violations.push(format!("instance {}: tucker", r.index));
        }
    }
    Battery {
        instances: results.len(),
        all_sound: violations.is_empty(),
        violations,
        results,
    }
}
