//! Unitary group actions on states: Haar sampling of SU(d), the adjoint
//! action `ρ → U†ρU`, local unitaries `u_A ⊗ u_B`, and the induced linear
//! action on the fifteen Fano coordinates.

use std::fmt;

use nalgebra::{DMatrix, Matrix3, SVD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{basis_values, evaluate_all, BasisValues, LocalInvariants};
use crate::linalg::{c, derive_seed, kron, trace_product, CMat};
use crate::positivity::{casimirs_of_state, char_poly_coeffs};
use crate::states::{fano_decompose, gaussian_complex, pauli, DensityMatrix, FanoForm};

/// Tolerance of the unitary and unit-determinant contracts.
pub const UNITARY_TOL: f64 = 1e-12;

/// Special unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: CMat,
}

impl UnitaryMatrix {
    /// Checks `U†U = I` and `det U = 1` to [`UNITARY_TOL`].
    pub fn new(entries: CMat) -> Result<Self> {
        let d = entries.nrows();
        if entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: entries.ncols(),
            });
        }
        let u = Self { dim: d, entries };
        let err = u.unitarity_defect();
        if err > UNITARY_TOL {
            return Err(Error::Domain(format!(
                "matrix is not unitary (defect {err:e})"
            )));
        }
        let det = u.entries.determinant();
        if (det - c(1.0, 0.0)).norm() > UNITARY_TOL {
            return Err(Error::Domain(format!("determinant is {det}, expected 1")));
        }
        Ok(u)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim: d,
            entries: CMat::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    /// `max |(U†U − I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.entries.adjoint() * &self.entries;
        crate::linalg::max_abs_diff(&g, &CMat::identity(self.dim, self.dim))
    }

    pub fn determinant(&self) -> crate::linalg::C64 {
        self.entries.determinant()
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix {
            dim: self.dim,
            entries: &self.entries * &other.entries,
        }
    }
}

/// Haar-random element of SU(d).
///
/// Ginibre matrix, QR factorization, column phases fixed so that `R` has a
/// positive real diagonal, then division by the principal `d`-th root of the
/// determinant. Which root is taken does not matter for the adjoint action.
pub fn haar_su(d: usize, seed: u64) -> Result<UnitaryMatrix> {
    if d < 2 {
        return Err(Error::Domain(format!("SU(d) needs d >= 2, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMat::from_fn(d, d, |_, _| gaussian_complex(&mut rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let root = c(0.0, det.arg() / d as f64).exp();
    let u = q * root.conj();
    Ok(UnitaryMatrix { dim: d, entries: u })
}

/// `ρ' = U† ρ U`.
pub fn adjoint_action(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    let m = u.entries().adjoint() * rho.entries() * u.entries();
    Ok(DensityMatrix::hermitized(m, rho.is_unit_trace()))
}

/// `u_A ⊗ u_B`.
pub fn local_unitary(ua: &UnitaryMatrix, ub: &UnitaryMatrix) -> Result<UnitaryMatrix> {
    for u in [ua, ub] {
        if u.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: u.dim(),
            });
        }
    }
    Ok(UnitaryMatrix {
        dim: 4,
        entries: kron(ua.entries(), ub.entries()),
    })
}

/// Rotation induced on qubit Bloch vectors by `ρ → u†ρu`:
/// `u† σ_i u = R_ji σ_j`, so `α → R α`.
pub fn bloch_rotation(u: &UnitaryMatrix) -> Result<Matrix3<f64>> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let p = pauli();
    let m = u.entries();
    let rotated: Vec<CMat> = p.iter().map(|s| m.adjoint() * s * m).collect();
    Ok(Matrix3::from_fn(|j, i| {
        0.5 * trace_product(&p[j], &rotated[i]).re
    }))
}

/// Real 15×15 matrix acting on `(a, b, vec C)` (row-major `vec`), block
/// diagonal with blocks `R_A`, `R_B`, `R_A ⊗ R_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedAction {
    l: DMatrix<f64>,
    ra: Matrix3<f64>,
    rb: Matrix3<f64>,
}

impl LinearizedAction {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn rotation_a(&self) -> &Matrix3<f64> {
        &self.ra
    }

    pub fn rotation_b(&self) -> &Matrix3<f64> {
        &self.rb
    }

    pub fn apply(&self, f: &FanoForm) -> FanoForm {
        let v = nalgebra::DVector::from_column_slice(&f.to_array());
        let w = &self.l * v;
        let mut arr = [0.0; 15];
        arr.copy_from_slice(w.as_slice());
        FanoForm::from_array(&arr)
    }
}

/// Linear action matching `fano(U†ρU) = L · fano(ρ)` for `U = u_A ⊗ u_B`.
///
/// Because the action is `ρ → U†ρU`, composition reverses order:
/// `L(u₁u₂) = L(u₂) L(u₁)`.
pub fn linearized_action(ua: &UnitaryMatrix, ub: &UnitaryMatrix) -> Result<LinearizedAction> {
    let ra = bloch_rotation(ua)?;
    let rb = bloch_rotation(ub)?;
    let mut l = DMatrix::<f64>::zeros(15, 15);
    for i in 0..3 {
        for j in 0..3 {
            l[(i, j)] = ra[(i, j)];
            l[(3 + i, 3 + j)] = rb[(i, j)];
            for k in 0..3 {
                for m in 0..3 {
                    l[(6 + 3 * i + k, 6 + 3 * j + m)] = ra[(i, j)] * rb[(k, m)];
                }
            }
        }
    }
    Ok(LinearizedAction { l, ra, rb })
}

/// Dimension of the local orbit through `f`: rank of the tangent map of
/// so(3) ⊕ so(3) at `f`. Generic points have orbits of dimension 6, so the
/// principal orbit space of R¹⁵ has dimension 9.
pub fn orbit_dimension(f: &FanoForm) -> usize {
    let gens: [Matrix3<f64>; 3] = [
        Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0),
        Matrix3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0),
        Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    ];
    let mut cols = Vec::with_capacity(6);
    for g in &gens {
        let t = FanoForm::new(g * f.a, f.b * 0.0, g * f.c);
        cols.push(t.to_array());
    }
    for g in &gens {
        let t = FanoForm::new(f.a * 0.0, g * f.b, f.c * g.transpose());
        cols.push(t.to_array());
    }
    let m = DMatrix::from_fn(15, 6, |i, j| cols[j][i]);
    let sv = SVD::new(m, false, false).singular_values;
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * smax).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionMode {
    /// Random `u_A ⊗ u_B` with `u_A, u_B` Haar in SU(2).
    Local,
    /// Random Haar element of SU(4).
    Global,
}

impl fmt::Display for ActionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Local => "local",
            Self::Global => "global",
        })
    }
}

/// Names of the quantities tracked by [`invariance_report`], in order.
pub fn quantity_names() -> Vec<String> {
    let mut names: Vec<String> = LocalInvariants::NAMES
        .iter()
        .map(|s| s.to_string())
        .collect();
    names.extend(BasisValues::K_NAMES.iter().map(|s| s.to_string()));
    names.extend(BasisValues::J_NAMES.iter().map(|s| s.to_string()));
    names.extend(["C2", "C3", "C4", "S2", "S3", "S4"].map(String::from));
    names
}

/// Local invariants, the K/J basis, Casimirs and `S₂..S₄` of a unit-trace
/// 4×4 state, in [`quantity_names`] order.
pub fn quantities(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let f = fano_decompose(rho)?;
    let inv = evaluate_all(&f);
    let cas = casimirs_of_state(rho)?;
    let bv = basis_values(&inv, &cas);
    let s = char_poly_coeffs(rho);
    let mut out = inv.to_array().to_vec();
    out.extend_from_slice(&bv.k);
    out.extend_from_slice(&bv.j);
    out.extend_from_slice(&[cas.c2, cas.c3, cas.c4, s.get(2), s.get(3), s.get(4)]);
    Ok(out)
}

/// Deviation `|x' − x| / max(|x|, 1)`: relative for values of magnitude
/// above one, absolute below.
pub fn deviation(before: f64, after: f64) -> f64 {
    (after - before).abs() / before.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantityDeviation {
    pub name: String,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub mode: ActionMode,
    pub trials: usize,
    pub quantities: Vec<QuantityDeviation>,
}

impl InvarianceReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.quantities
            .iter()
            .find(|q| q.name == name)
            .map(|q| q.max_deviation)
    }

    pub fn max_deviation(&self) -> f64 {
        self.quantities
            .iter()
            .map(|q| q.max_deviation)
            .fold(0.0, f64::max)
    }
}

/// Random unitary used by trial `index` of a report seeded with `seed`.
pub fn trial_unitary(mode: ActionMode, seed: u64, index: u64) -> UnitaryMatrix {
    let s = derive_seed(seed, index);
    match mode {
        ActionMode::Local => {
            let ua = haar_su(2, derive_seed(s, 0)).expect("d = 2");
            let ub = haar_su(2, derive_seed(s, 1)).expect("d = 2");
            local_unitary(&ua, &ub).expect("2x2 factors")
        }
        ActionMode::Global => haar_su(4, s).expect("d = 4"),
    }
}

/// Maximum [`deviation`] of every tracked quantity over `trials` random
/// conjugations of `rho`. Trials run in parallel; the max-fold makes the
/// result independent of scheduling.
pub fn invariance_report(
    rho: &DensityMatrix,
    trials: usize,
    seed: u64,
    mode: ActionMode,
) -> Result<InvarianceReport> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let base = quantities(rho)?;
    let worst = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let u = trial_unitary(mode, seed, t);
            let moved = quantities(&adjoint_action(rho, &u)?)?;
            Ok(base
                .iter()
                .zip(&moved)
                .map(|(x, y)| deviation(*x, *y))
                .collect())
        })
        .try_reduce(
            || vec![0.0; base.len()],
            |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect()),
        )?;
    Ok(InvarianceReport {
        mode,
        trials,
        quantities: quantity_names()
            .into_iter()
            .zip(worst)
            .map(|(name, max_deviation)| QuantityDeviation {
                name,
                max_deviation,
            })
            .collect(),
    })
}
