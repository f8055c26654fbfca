//! Density matrices and their coordinates: generalized Bloch vectors,
//! the two-qubit Fano form `(a, b, C)`, partial traces and seeded samplers.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_defect, kron, trace_product, CMat, C64};
use crate::su_basis::{su4, BasisSet};

/// Hermiticity tolerance (absolute, entrywise).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of `Tr ρ` from 1 for unit-trace states.
pub const TRACE_TOL: f64 = 1e-10;

/// Generalized Bloch vector `ξ ∈ R^{d²−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    dim: usize,
    xi: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, xi: Vec<f64>) -> Self {
        debug_assert_eq!(xi.len(), dim * dim - 1);
        Self { dim, xi }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, vec![0.0; dim * dim - 1])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.xi
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.xi
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.xi.iter().zip(&other.xi).map(|(x, y)| x * y).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }
}

/// Dense Hermitian matrix. `unit_trace` records whether the physical
/// (trace one) contract applies; positivity is never assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    unit_trace: bool,
    entries: CMat,
}

impl DensityMatrix {
    pub fn new(entries: CMat, unit_trace: bool) -> Result<Self> {
        let (r, cols) = entries.shape();
        if r != cols {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: cols,
            });
        }
        let defect = hermitian_defect(&entries);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = entries.trace().re;
        if unit_trace && (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NonUnitTrace(tr));
        }
        Ok(Self {
            dim: r,
            unit_trace,
            entries,
        })
    }

    /// Like [`DensityMatrix::new`], but first replaces `m` by `(m + m†)/2`
    /// to wipe out rounding asymmetry from products.
    pub(crate) fn hermitized(m: CMat, unit_trace: bool) -> Self {
        let h = (&m + m.adjoint()) * c(0.5, 0.0);
        Self {
            dim: h.nrows(),
            unit_trace,
            entries: h,
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            dim: d,
            unit_trace: true,
            entries: CMat::identity(d, d) * c(1.0 / d as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn is_unit_trace(&self) -> bool {
        self.unit_trace
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.entries, &self.entries).re
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }

    /// Multiplies by a real scalar; the result drops the unit-trace flag.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            unit_trace: false,
            entries: &self.entries * c(factor, 0.0),
        }
    }

    fn require_unit_trace(&self) -> Result<()> {
        let tr = self.trace();
        if !self.unit_trace || (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NonUnitTrace(tr));
        }
        Ok(())
    }
}

fn bloch_scale(d: usize) -> f64 {
    ((d * (d - 1)) as f64 / 2.0).sqrt()
}

/// `ρ = (1/d)(I + √(d(d−1)/2) ξ·λ)`.
pub fn from_bloch(xi: &BlochVector, basis: &BasisSet) -> Result<DensityMatrix> {
    let d = basis.dim();
    if xi.dim() != d || xi.as_slice().len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: xi.dim(),
        });
    }
    let s = bloch_scale(d);
    let mut m = CMat::identity(d, d);
    for (x, lam) in xi.as_slice().iter().zip(basis.matrices()) {
        m += lam * c(s * x, 0.0);
    }
    m *= c(1.0 / d as f64, 0.0);
    Ok(DensityMatrix::hermitized(m, true))
}

/// `ξ_a = √(d / (2(d−1))) Tr(ρ λ_a)`.
pub fn to_bloch(rho: &DensityMatrix, basis: &BasisSet) -> Result<BlochVector> {
    rho.require_unit_trace()?;
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    let d = rho.dim();
    let k = (d as f64 / (2.0 * (d - 1) as f64)).sqrt();
    let xi = basis
        .matrices()
        .iter()
        .map(|lam| k * trace_product(rho.entries(), lam).re)
        .collect();
    Ok(BlochVector::new(d, xi))
}

/// Two-qubit Fano coordinates: local Bloch vectors `a`, `b` and the
/// correlation matrix `C` (rows index qubit A, columns qubit B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoForm {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub c: Matrix3<f64>,
}

impl FanoForm {
    pub fn new(a: Vector3<f64>, b: Vector3<f64>, c: Matrix3<f64>) -> Self {
        Self { a, b, c }
    }

    pub fn zero() -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros(), Matrix3::zeros())
    }

    /// `(a, b, vec C)` with `C` flattened row-major.
    pub fn to_array(&self) -> [f64; 15] {
        let mut v = [0.0; 15];
        v[..3].copy_from_slice(self.a.as_slice());
        v[3..6].copy_from_slice(self.b.as_slice());
        for i in 0..3 {
            for j in 0..3 {
                v[6 + 3 * i + j] = self.c[(i, j)];
            }
        }
        v
    }

    pub fn from_array(v: &[f64; 15]) -> Self {
        Self::new(
            Vector3::new(v[0], v[1], v[2]),
            Vector3::new(v[3], v[4], v[5]),
            Matrix3::from_row_slice(&v[6..]),
        )
    }

    /// Exchanges the two qubits: `a ↔ b`, `C ↔ Cᵀ`.
    pub fn swapped(&self) -> Self {
        Self::new(self.b, self.a, self.c.transpose())
    }

    /// Independent scalings `(t a, u b, v C)`.
    pub fn scaled(&self, t: f64, u: f64, v: f64) -> Self {
        Self::new(self.a * t, self.b * u, self.c * v)
    }
}

/// Pauli matrices `σ₁, σ₂, σ₃`.
pub fn pauli() -> &'static [CMat; 3] {
    static CELL: OnceLock<[CMat; 3]> = OnceLock::new();
    CELL.get_or_init(|| {
        let o = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        [
            CMat::from_row_slice(2, 2, &[o, one, one, o]),
            CMat::from_row_slice(2, 2, &[o, -i, i, o]),
            CMat::from_row_slice(2, 2, &[one, o, o, -one]),
        ]
    })
}

/// The 15 unnormalized tensor-Pauli operators `σ_i⊗I, I⊗σ_j, σ_i⊗σ_j`,
/// in `(a, b, vec C)` order.
fn tensor_paulis() -> &'static [CMat; 15] {
    static CELL: OnceLock<[CMat; 15]> = OnceLock::new();
    CELL.get_or_init(|| {
        let p = pauli();
        let id = CMat::identity(2, 2);
        let mut v: Vec<CMat> = Vec::with_capacity(15);
        v.extend(p.iter().map(|s| kron(s, &id)));
        v.extend(p.iter().map(|s| kron(&id, s)));
        for si in p {
            for sj in p {
                v.push(kron(si, sj));
            }
        }
        v.try_into().expect("fifteen operators")
    })
}

/// Tensor-Pauli basis of su(4) scaled by `1/√2` so that `Tr(μ_a μ_b) = 2δ_ab`.
pub fn tensor_pauli_basis() -> BasisSet {
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ms = tensor_paulis().iter().map(|m| m * s).collect();
    BasisSet::from_matrices(4, ms).expect("tensor-Pauli basis is orthonormal")
}

/// Orthogonal change of coordinates `O_ab = ½ Tr(λ^to_a λ^from_b)`, so that
/// `ξ_to = O ξ_from`.
pub fn change_of_basis(from: &BasisSet, to: &BasisSet) -> DMatrix<f64> {
    let n = from.len();
    DMatrix::from_fn(n, n, |a, b| 0.5 * trace_product(to.get(a), from.get(b)).re)
}

fn pauli_to_gellmann() -> &'static DMatrix<f64> {
    static CELL: OnceLock<DMatrix<f64>> = OnceLock::new();
    CELL.get_or_init(|| change_of_basis(&tensor_pauli_basis(), &su4().basis))
}

/// The fixed linear map from Fano coordinates to the 15-dimensional Bloch
/// vector in the su(4) Gell-Mann basis: in the normalized tensor-Pauli
/// basis `ξ = (a, b, vec C)/√3`, followed by the orthogonal change of basis.
///
/// Defined on all of R¹⁵ (the map is linear), not only on physical states.
pub fn fano_to_bloch(f: &FanoForm) -> BlochVector {
    let v = nalgebra::DVector::from_iterator(15, f.to_array().iter().map(|x| x / 3f64.sqrt()));
    let xi = pauli_to_gellmann() * v;
    BlochVector::new(4, xi.iter().copied().collect())
}

/// Inverse of [`fano_to_bloch`].
pub fn bloch_to_fano(xi: &BlochVector) -> Result<FanoForm> {
    if xi.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: xi.dim(),
        });
    }
    let v = nalgebra::DVector::from_column_slice(xi.as_slice());
    let w = pauli_to_gellmann().transpose() * v;
    let mut arr = [0.0; 15];
    for (o, x) in arr.iter_mut().zip(w.iter()) {
        *o = x * 3f64.sqrt();
    }
    Ok(FanoForm::from_array(&arr))
}

/// `a_i = Tr(ρ σ_i⊗I)`, `b_j = Tr(ρ I⊗σ_j)`, `c_ij = Tr(ρ σ_i⊗σ_j)`.
///
/// For a non-unit-trace Hermitian matrix the result is the traceless part of
/// `ρ = ¼[Tr(ρ) I + a·σ⊗I + I⊗b·σ + c_ij σ_i⊗σ_j]`.
pub fn fano_decompose(rho: &DensityMatrix) -> Result<FanoForm> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let mut arr = [0.0; 15];
    for (o, p) in arr.iter_mut().zip(tensor_paulis()) {
        *o = trace_product(rho.entries(), p).re;
    }
    Ok(FanoForm::from_array(&arr))
}

/// `ρ = ¼[I⊗I + a·σ⊗I + I⊗b·σ + c_ij σ_i⊗σ_j]`. Hermitian with unit trace;
/// positivity is not implied.
pub fn fano_compose(f: &FanoForm) -> DensityMatrix {
    let mut m = CMat::identity(4, 4);
    for (x, p) in f.to_array().iter().zip(tensor_paulis()) {
        m += p * c(*x, 0.0);
    }
    m *= c(0.25, 0.0);
    DensityMatrix::hermitized(m, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of a bipartite `r·s`-level system.
pub fn partial_trace(
    rho: &DensityMatrix,
    keep: Subsystem,
    dims: (usize, usize),
) -> Result<DensityMatrix> {
    let (r, s) = dims;
    if r == 0 || s == 0 || r * s != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: r * s,
        });
    }
    let m = rho.entries();
    let out = match keep {
        Subsystem::A => CMat::from_fn(r, r, |i, j| {
            (0..s).map(|k| m[(i * s + k, j * s + k)]).sum::<C64>()
        }),
        Subsystem::B => CMat::from_fn(s, s, |i, j| {
            (0..r).map(|k| m[(k * s + i, k * s + j)]).sum::<C64>()
        }),
    };
    Ok(DensityMatrix::hermitized(out, rho.is_unit_trace()))
}

/// Sampling ensembles for [`random_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    /// `G G† / Tr(G G†)` with `G` a complex Ginibre matrix.
    HilbertSchmidt,
    /// Projector onto a normalized complex Gaussian vector.
    Pure,
    /// Gaussian Hermitian direction at a Bloch radius uniform in `[0, 1.5)`;
    /// often not positive.
    HermitianUnitTrace,
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert-schmidt" => Ok(Self::HilbertSchmidt),
            "pure" => Ok(Self::Pure),
            "hermitian-unit-trace" => Ok(Self::HermitianUnitTrace),
            other => Err(Error::Malformed(format!("unknown state kind '{other}'"))),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::HilbertSchmidt => "hilbert-schmidt",
            Self::Pure => "pure",
            Self::HermitianUnitTrace => "hermitian-unit-trace",
        })
    }
}

pub(crate) fn gaussian_complex(rng: &mut impl Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Seeded random state; identical seeds give bit-identical matrices.
pub fn random_state(d: usize, seed: u64, kind: StateKind) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::Domain(format!(
            "state dimension must be >= 2, got {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = match kind {
        StateKind::HilbertSchmidt => {
            let g = CMat::from_fn(d, d, |_, _| gaussian_complex(&mut rng));
            let w = &g * g.adjoint();
            let tr = w.trace().re;
            w * c(1.0 / tr, 0.0)
        }
        StateKind::Pure => {
            let psi = CMat::from_fn(d, 1, |_, _| gaussian_complex(&mut rng));
            let n2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            &psi * psi.adjoint() * c(1.0 / n2, 0.0)
        }
        StateKind::HermitianUnitTrace => {
            let g = CMat::from_fn(d, d, |_, _| gaussian_complex(&mut rng));
            let h = (&g + g.adjoint()) * c(0.5, 0.0);
            let shift = h.trace().re / d as f64;
            let h0 = h - CMat::identity(d, d) * c(shift, 0.0);
            let fro = h0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let radius: f64 = rng.random_range(0.0..1.5);
            let k = radius * ((d - 1) as f64 / d as f64).sqrt() / fro;
            CMat::identity(d, d) * c(1.0 / d as f64, 0.0) + h0 * c(k, 0.0)
        }
    };
    Ok(DensityMatrix::hermitized(m, true))
}

/// `|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus() -> DensityMatrix {
    let mut m = CMat::zeros(4, 4);
    for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = c(0.5, 0.0);
    }
    DensityMatrix::hermitized(m, true)
}

/// Werner family `p |Φ⁺⟩⟨Φ⁺| + (1 − p) I/4`; positive iff `p ≥ −1/3`.
pub fn werner(p: f64) -> DensityMatrix {
    let m = bell_phi_plus().entries() * c(p, 0.0) + CMat::identity(4, 4) * c((1.0 - p) / 4.0, 0.0);
    DensityMatrix::hermitized(m, true)
}

/// Qubit state `(I + α·σ)/2`.
pub fn qubit_state(alpha: &Vector3<f64>) -> DensityMatrix {
    let mut m = CMat::identity(2, 2);
    for (x, s) in alpha.iter().zip(pauli()) {
        m += s * c(*x, 0.0);
    }
    DensityMatrix::hermitized(m * c(0.5, 0.0), true)
}

/// Tensor product of two states.
pub fn product_state(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    let unit = a.is_unit_trace() && b.is_unit_trace();
    DensityMatrix::hermitized(kron(a.entries(), b.entries()), unit)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    #[serde(default = "default_true")]
    pub unit_trace: bool,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanoJson {
    pub a: [f64; 3],
    pub b: [f64; 3],
    #[serde(rename = "C")]
    pub c: [[f64; 3]; 3],
}

impl From<&DensityMatrix> for StateJson {
    fn from(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let m = rho.entries();
        Self {
            dim: d,
            unit_trace: rho.is_unit_trace(),
            re: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }
}

impl TryFrom<StateJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        let d = j.dim;
        let square = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if d == 0 || !square(&j.re) || !square(&j.im) {
            return Err(Error::Malformed(format!(
                "state arrays must be {d}x{d} row-major"
            )));
        }
        let m = CMat::from_fn(d, d, |r, col| c(j.re[r][col], j.im[r][col]));
        DensityMatrix::new(m, j.unit_trace)
    }
}

impl From<&FanoForm> for FanoJson {
    fn from(f: &FanoForm) -> Self {
        let mut cm = [[0.0; 3]; 3];
        for (i, row) in cm.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f.c[(i, j)];
            }
        }
        Self {
            a: [f.a[0], f.a[1], f.a[2]],
            b: [f.b[0], f.b[1], f.b[2]],
            c: cm,
        }
    }
}

impl From<FanoJson> for FanoForm {
    fn from(j: FanoJson) -> Self {
        let flat: Vec<f64> = j.c.iter().flatten().copied().collect();
        FanoForm::new(
            Vector3::from(j.a),
            Vector3::from(j.b),
            Matrix3::from_row_slice(&flat),
        )
    }
}

impl DensityMatrix {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: StateJson = serde_json::from_str(s)?;
        j.try_into()
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&StateJson::from(self))?)
    }
}

impl FanoForm {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: FanoJson = serde_json::from_str(s)?;
        Ok(j.into())
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&FanoJson::from(self))?)
    }
}
