//! Generalized Gell-Mann bases of su(d), their structure constants, and the
//! symmetric ∨-product on Bloch space.
//!
//! Basis matrices are normalized by `Tr(λ_a λ_b) = 2 δ_ab`, so that
//! `λ_a λ_b = (2/d) δ_ab I + (d_abc + i f_abc) λ_c`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{c, trace_product, CMat};
use crate::states::BlochVector;

/// Ordered list of `d² − 1` Hermitian traceless generators.
#[derive(Debug, Clone)]
pub struct BasisSet {
    dim: usize,
    matrices: Vec<CMat>,
}

impl BasisSet {
    /// Wraps an arbitrary list of generators, checking the normalization
    /// `Tr(λ_a λ_b) = 2 δ_ab`, hermiticity and tracelessness to 1e-12.
    pub fn from_matrices(dim: usize, matrices: Vec<CMat>) -> Result<Self> {
        if matrices.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim - 1,
                found: matrices.len(),
            });
        }
        for m in &matrices {
            if m.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.nrows(),
                });
            }
            let defect = crate::linalg::hermitian_defect(m);
            if defect > 1e-12 {
                return Err(Error::NotHermitian(defect));
            }
            if m.trace().norm() > 1e-12 {
                return Err(Error::Domain("basis element is not traceless".into()));
            }
        }
        for (a, ma) in matrices.iter().enumerate() {
            for (b, mb) in matrices.iter().enumerate() {
                let expected = if a == b { 2.0 } else { 0.0 };
                if (trace_product(ma, mb) - c(expected, 0.0)).norm() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "basis is not orthonormal at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Self { dim, matrices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `d² − 1`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn get(&self, a: usize) -> &CMat {
        &self.matrices[a]
    }
}

/// Generalized Gell-Mann basis of su(d).
///
/// Ordering: symmetric off-diagonal generators for pairs `j < k` in
/// lexicographic order, then the antisymmetric ones in the same order, then
/// the `d − 1` diagonal ones. For `d = 2` this is exactly `σ₁, σ₂, σ₃`.
pub fn gellmann_basis(d: usize) -> Result<BasisSet> {
    if d < 2 {
        return Err(Error::Domain(format!("su(d) basis needs d >= 2, got {d}")));
    }
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
        .collect();
    let mut out = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = CMat::zeros(d, d);
        m[(j, k)] = c(1.0, 0.0);
        m[(k, j)] = c(1.0, 0.0);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = CMat::zeros(d, d);
        m[(j, k)] = c(0.0, -1.0);
        m[(k, j)] = c(0.0, 1.0);
        out.push(m);
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMat::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = c(norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    Ok(BasisSet {
        dim: d,
        matrices: out,
    })
}

/// Dense totally symmetric (`d_abc`) and totally antisymmetric (`f_abc`)
/// structure-constant tensors.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    dim: usize,
    n: usize,
    d_sym: Vec<f64>,
    f_anti: Vec<f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators `d² − 1`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    pub fn d(&self, a: usize, b: usize, c: usize) -> f64 {
        self.d_sym[self.idx(a, b, c)]
    }

    pub fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f_anti[self.idx(a, b, c)]
    }

    /// Contracts `d_ijk x_i y_j` over the first two slots.
    pub fn contract_sym(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate().take(n) {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate().take(n) {
                let w = xi * yj;
                if w == 0.0 {
                    continue;
                }
                let row = &self.d_sym[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, dv) in out.iter_mut().zip(row) {
                    *o += w * dv;
                }
            }
        }
        out
    }
}

/// `d_abc = ¼ Tr({λ_a, λ_b} λ_c)` and `f_abc = −(i/4) Tr([λ_a, λ_b] λ_c)`.
///
/// Only index triples with `a ≤ b ≤ c` are evaluated; the remaining
/// entries are filled by permutation, so the symmetry properties hold
/// exactly.
pub fn structure_constants(basis: &BasisSet) -> StructureConstants {
    let n = basis.len();
    let mut d_sym = vec![0.0; n * n * n];
    let mut f_anti = vec![0.0; n * n * n];
    let at = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    for a in 0..n {
        for b in a..n {
            let ab = basis.get(a) * basis.get(b);
            for cc in b..n {
                // Tr(λ_b λ_a λ_c) = conj Tr(λ_a λ_b λ_c) for Hermitian λ.
                let t = trace_product(&ab, basis.get(cc));
                let dv = 0.5 * t.re;
                let fv = if a < b && b < cc { 0.5 * t.im } else { 0.0 };
                let perms = [
                    (a, b, cc, 1.0),
                    (b, cc, a, 1.0),
                    (cc, a, b, 1.0),
                    (b, a, cc, -1.0),
                    (a, cc, b, -1.0),
                    (cc, b, a, -1.0),
                ];
                for (x, y, z, sign) in perms {
                    d_sym[at(x, y, z)] = dv;
                    f_anti[at(x, y, z)] = sign * fv;
                }
            }
        }
    }
    StructureConstants {
        dim: basis.dim(),
        n,
        d_sym,
        f_anti,
    }
}

/// `(ξ∨ξ)_k = √(d(d−1)/2) / (d−2) · d_ijk ξ_i ξ_j`; undefined for `d = 2`.
pub fn vee_product(xi: &BlochVector, sc: &StructureConstants) -> Result<BlochVector> {
    let d = sc.dim();
    if d == 2 {
        return Err(Error::Domain("vee-product undefined for d=2".into()));
    }
    if xi.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: xi.dim(),
        });
    }
    let scale = ((d * (d - 1)) as f64 / 2.0).sqrt() / (d - 2) as f64;
    let mut v = sc.contract_sym(xi.as_slice(), xi.as_slice());
    v.iter_mut().for_each(|x| *x *= scale);
    Ok(BlochVector::new(d, v))
}

/// Gell-Mann basis and structure constants of su(4), built once.
#[derive(Debug)]
pub struct Su4 {
    pub basis: BasisSet,
    pub constants: StructureConstants,
}

pub fn su4() -> &'static Su4 {
    static CELL: OnceLock<Su4> = OnceLock::new();
    CELL.get_or_init(|| {
        let basis = gellmann_basis(4).expect("d = 4 is valid");
        let constants = structure_constants(&basis);
        Su4 { basis, constants }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn rejects_small_dimensions() {
        assert!(gellmann_basis(1).is_err());
        assert!(gellmann_basis(0).is_err());
    }

    #[test]
    fn qubit_basis_is_pauli() {
        let b = gellmann_basis(2).unwrap();
        let s1 = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let s2 = CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let s3 = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert_eq!(b.get(0), &s1);
        assert_eq!(b.get(1), &s2);
        assert_eq!(b.get(2), &s3);
    }

    #[test]
    fn normalization_for_small_dimensions() {
        for d in 2..=6 {
            let b = gellmann_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            for (i, x) in b.matrices().iter().enumerate() {
                assert!(x.trace().norm() < 1e-12);
                for (j, y) in b.matrices().iter().enumerate() {
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!((trace_product(x, y) - c(want, 0.0)).norm() < 1e-12);
                }
            }
            // the checked constructor agrees
            BasisSet::from_matrices(d, b.matrices().to_vec()).unwrap();
        }
    }

    // Direct evaluation of the ¼Tr formulas, without the permutation fill.
    fn trace_formula(b: &BasisSet, i: usize, j: usize, k: usize) -> (f64, f64) {
        let (x, y, z) = (b.get(i), b.get(j), b.get(k));
        let anti = x * y + y * x;
        let comm = x * y - y * x;
        let d = 0.25 * trace_product(&anti, z).re;
        let f = (c(0.0, -0.25) * trace_product(&comm, z)).re;
        (d, f)
    }

    #[test]
    fn qubit_constants_are_levi_civita() {
        let b = gellmann_basis(2).unwrap();
        let sc = structure_constants(&b);
        let eps = |i: usize, j: usize, k: usize| -> f64 {
            ((j as i64 - i as i64) * (k as i64 - i as i64) * (k as i64 - j as i64)) as f64 / 2.0
        };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let (dv, fv) = trace_formula(&b, i, j, k);
                    assert!(dv.abs() < 1e-15);
                    assert!((fv - eps(i, j, k)).abs() < 1e-15);
                    assert!(sc.d(i, j, k).abs() < 1e-15);
                    assert!((sc.f(i, j, k) - eps(i, j, k)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn qutrit_d118_and_d888() {
        let b = gellmann_basis(3).unwrap();
        let sc = structure_constants(&b);
        let (oracle, _) = trace_formula(&b, 0, 0, 7);
        assert!((oracle - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((sc.d(0, 0, 7) - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((sc.d(7, 7, 7) + 1.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn constants_match_trace_formulas_and_symmetries() {
        for d in 2..=4 {
            let b = gellmann_basis(d).unwrap();
            let sc = structure_constants(&b);
            let n = b.len();
            for i in 0..n {
                for j in 0..n {
                    assert!(sc.f(i, i, j).abs() < 1e-15);
                    for k in 0..n {
                        let (dv, fv) = trace_formula(&b, i, j, k);
                        assert!((sc.d(i, j, k) - dv).abs() < 1e-12);
                        assert!((sc.f(i, j, k) - fv).abs() < 1e-12);
                        assert_eq!(sc.d(i, j, k), sc.d(j, i, k));
                        assert_eq!(sc.d(i, j, k), sc.d(k, j, i));
                        assert_eq!(sc.f(i, j, k), -sc.f(j, i, k));
                        assert_eq!(sc.f(i, j, k), -sc.f(i, k, j));
                    }
                }
            }
        }
    }

    #[test]
    fn product_relation_holds_entrywise() {
        for d in 2..=4 {
            let b = gellmann_basis(d).unwrap();
            let sc = structure_constants(&b);
            let n = b.len();
            for i in 0..n {
                for j in 0..n {
                    let lhs = b.get(i) * b.get(j);
                    let mut rhs = CMat::zeros(d, d);
                    if i == j {
                        rhs += CMat::identity(d, d) * c(2.0 / d as f64, 0.0);
                    }
                    for k in 0..n {
                        rhs += b.get(k) * c(sc.d(i, j, k), sc.f(i, j, k));
                    }
                    assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "d={d} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn vee_product_qutrit_axis_eight() {
        let b = gellmann_basis(3).unwrap();
        let sc = structure_constants(&b);
        let mut x = vec![0.0; 8];
        x[7] = 1.0;
        let v = vee_product(&BlochVector::new(3, x), &sc).unwrap();
        for (k, val) in v.as_slice().iter().enumerate() {
            let want = if k == 7 { -1.0 } else { 0.0 };
            assert!((val - want).abs() < 1e-14);
        }
    }

    #[test]
    fn vee_product_zero_and_qubit_error() {
        let sc = &su4().constants;
        let v = vee_product(&BlochVector::new(4, vec![0.0; 15]), sc).unwrap();
        assert!(v.as_slice().iter().all(|&x| x == 0.0));

        let sc2 = structure_constants(&gellmann_basis(2).unwrap());
        let err = vee_product(&BlochVector::new(2, vec![0.0; 3]), &sc2).unwrap_err();
        assert!(err.to_string().contains("vee-product undefined for d=2"));
    }
}
