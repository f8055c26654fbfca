//! Seeded property checks backing the `verify` command. Each check returns
//! a serializable summary with a `passed` flag.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::group_action::{invariance_report, ActionMode};
use crate::hilbert::{basis_consistency, ConsistencyReport};
use crate::invariants::casimir_identities_residual;
use crate::linalg::{derive_seed, hermitian_eigenvalues};
use crate::positivity::{char_poly_coeffs, BOUNDARY_TOL};
use crate::states::{fano_decompose, random_state, StateKind};

pub const CASIMIR_RESIDUAL_TOL: f64 = 1e-11;
pub const INVARIANCE_TOL: f64 = 1e-10;
pub const NON_INVARIANCE_WITNESS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityEquivalence {
    pub samples: usize,
    pub positive: usize,
    pub non_positive: usize,
    /// Samples whose smallest eigenvalue or some `S_k` lies inside the
    /// tolerance band; excluded from the comparison.
    pub banded: usize,
    pub mismatches: usize,
    pub passed: bool,
}

/// Eigenvalue positivity versus the `S_k ≥ 0` criterion on random Hermitian
/// unit-trace 4×4 matrices.
pub fn positivity_equivalence(samples: usize, seed: u64) -> PositivityEquivalence {
    // (eigen says positive, S_k says positive, in band)
    let verdicts: Vec<(bool, bool, bool)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let rho = random_state(4, derive_seed(seed, i), StateKind::HermitianUnitTrace)
                .expect("d = 4");
            let min_eig = hermitian_eigenvalues(rho.entries())[0];
            let s = char_poly_coeffs(&rho).s;
            let eig_ok = min_eig >= -BOUNDARY_TOL;
            let s_ok = s.iter().all(|&x| x >= -BOUNDARY_TOL);
            let banded = min_eig.abs() <= BOUNDARY_TOL || s.iter().any(|x| x.abs() <= BOUNDARY_TOL);
            (eig_ok, s_ok, banded)
        })
        .collect();
    let banded = verdicts.iter().filter(|v| v.2).count();
    let mismatches = verdicts.iter().filter(|v| !v.2 && v.0 != v.1).count();
    let positive = verdicts.iter().filter(|v| v.0).count();
    PositivityEquivalence {
        samples,
        positive,
        non_positive: samples - positive,
        banded,
        mismatches,
        passed: mismatches == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirCheck {
    pub samples: usize,
    pub max_residual: [f64; 3],
    pub passed: bool,
}

/// Largest residual of the three Casimir identities over random states.
pub fn casimir_identities(samples: usize, seed: u64) -> CasimirCheck {
    let max_residual = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let rho = random_state(4, derive_seed(seed, i), StateKind::HermitianUnitTrace)
                .expect("d = 4");
            let r = casimir_identities_residual(&fano_decompose(&rho).expect("4x4"));
            r.map(f64::abs)
        })
        .reduce(
            || [0.0; 3],
            |a, b| [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])],
        );
    CasimirCheck {
        samples,
        max_residual,
        passed: max_residual.iter().all(|&r| r < CASIMIR_RESIDUAL_TOL),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceCheck {
    pub states: usize,
    pub trials: usize,
    /// Worst deviation of any tracked quantity under local unitaries.
    pub local_max_deviation: f64,
    pub worst_local_quantity: String,
    /// Largest change of `C(200)` under global SU(4) conjugation.
    pub global_c200_change: f64,
    /// Worst deviation of the Casimirs and `S_k` under global conjugation.
    pub global_su4_invariant_max: f64,
    pub passed: bool,
}

const SU4_INVARIANTS: [&str; 6] = ["C2", "C3", "C4", "S2", "S3", "S4"];

/// Local invariance of all tracked quantities, plus the witness that a
/// global unitary moves a local-only invariant while fixing the SU(4) ones.
pub fn invariance(states: usize, trials: usize, seed: u64) -> Result<InvarianceCheck> {
    let mut local_max = 0.0f64;
    let mut worst = String::new();
    let mut c200 = 0.0f64;
    let mut su4_max = 0.0f64;
    for s in 0..states as u64 {
        let rho = random_state(4, derive_seed(seed, s), StateKind::HermitianUnitTrace)?;
        let local =
            invariance_report(&rho, trials, derive_seed(seed, 1000 + s), ActionMode::Local)?;
        for q in &local.quantities {
            if q.max_deviation > local_max || worst.is_empty() {
                local_max = local_max.max(q.max_deviation);
                worst = q.name.clone();
            }
        }
        let global = invariance_report(
            &rho,
            trials,
            derive_seed(seed, 2000 + s),
            ActionMode::Global,
        )?;
        c200 = c200.max(global.get("c200").unwrap_or(0.0));
        for n in SU4_INVARIANTS {
            su4_max = su4_max.max(global.get(n).unwrap_or(f64::INFINITY));
        }
    }
    Ok(InvarianceCheck {
        states,
        trials,
        local_max_deviation: local_max,
        worst_local_quantity: worst,
        global_c200_change: c200,
        global_su4_invariant_max: su4_max,
        passed: local_max < INVARIANCE_TOL
            && c200 > NON_INVARIANCE_WITNESS
            && su4_max < INVARIANCE_TOL,
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positivity: Option<PositivityEquivalence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariance: Option<InvarianceCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub casimir: Option<CasimirCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<ConsistencyReport>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyPlan {
    pub positivity: bool,
    pub invariance: bool,
    pub casimir: bool,
    pub hilbert: bool,
    pub seed: u64,
    pub trials: usize,
    pub kmax: usize,
}

pub fn run(plan: &VerifyPlan) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        seed: plan.seed,
        ..Default::default()
    };
    let mut ok = true;
    if plan.positivity {
        let r = positivity_equivalence(10_000, derive_seed(plan.seed, 1));
        ok &= r.passed;
        report.positivity = Some(r);
    }
    if plan.invariance {
        let r = invariance(20, plan.trials, derive_seed(plan.seed, 2))?;
        ok &= r.passed;
        report.invariance = Some(r);
    }
    if plan.casimir {
        let r = casimir_identities(500, derive_seed(plan.seed, 3));
        ok &= r.passed;
        report.casimir = Some(r);
    }
    if plan.hilbert {
        let r = basis_consistency(plan.kmax, derive_seed(plan.seed, 4))?;
        ok &= r.all_match;
        report.hilbert = Some(r);
    }
    report.passed = ok;
    Ok(report)
}
