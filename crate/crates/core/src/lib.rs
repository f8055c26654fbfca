//! Local-unitary invariants of two-qubit density matrices.
//!
//! The crate covers the generalized Bloch and Fano parameterizations of
//! states, positivity through characteristic-polynomial coefficients and the
//! su(4) Casimirs, the twenty SU(2)⊗SU(2) invariants together with their
//! primary/secondary basis, and numerical checks of the invariant ring's
//! Hilbert series.
//!
//! All functions are pure; random sampling always takes an explicit seed.

pub mod error;
pub mod group_action;
pub mod hilbert;
pub mod invariants;
pub mod linalg;
pub mod positivity;
pub mod states;
pub mod su_basis;
pub mod verify;

pub use error::{Error, Result};
pub use group_action::{
    adjoint_action, haar_su, invariance_report, linearized_action, local_unitary, ActionMode,
    InvarianceReport, LinearizedAction, UnitaryMatrix,
};
pub use hilbert::{basis_consistency, dimension_oracle, molien_expand, PowerSeries};
pub use invariants::{
    basis_values, casimir_identities_residual, evaluate_all, BasisValues, LocalInvariants,
};
pub use positivity::{
    casimirs, char_poly_coeffs, normalized_bounds, positivity_check, region_check, region_sample,
    s_from_bloch, s_from_casimirs, CasimirTriple, CharPolyCoeffs, PositivityClass, RegionClass,
};
pub use states::{
    fano_compose, fano_decompose, from_bloch, partial_trace, random_state, to_bloch, BlochVector,
    DensityMatrix, FanoForm, StateKind, Subsystem,
};
pub use su_basis::{
    gellmann_basis, structure_constants, vee_product, BasisSet, StructureConstants,
};

/// Scientific notation with 17 significant digits; round-trips every `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
