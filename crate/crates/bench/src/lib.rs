//! Fixtures shared by the benchmarks.

use entangle_ring::{fano_decompose, random_state, DensityMatrix, FanoForm, StateKind};

/// `n` seeded Hermitian unit-trace two-qubit matrices.
pub fn states(n: usize, seed: u64) -> Vec<DensityMatrix> {
    (0..n as u64)
        .map(|i| random_state(4, seed + i, StateKind::HermitianUnitTrace).expect("d = 4"))
        .collect()
}

pub fn fano_forms(n: usize, seed: u64) -> Vec<FanoForm> {
    states(n, seed)
        .iter()
        .map(|s| fano_decompose(s).expect("4x4"))
        .collect()
}
