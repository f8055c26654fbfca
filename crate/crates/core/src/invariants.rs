//! The twenty SU(2)⊗SU(2) polynomial invariants `C^{(s t q)}` of the Fano
//! coordinates, the primary (`K`) / secondary (`J`) basis built from them,
//! and the decomposition of the su(4) Casimirs over local invariants.
//!
//! The superscript `(s, t, q)` is the multi-degree in `(a, b, C)`.
//! `C` has its first index on qubit A and its second on qubit B, so a local
//! transformation acts as `a → R_A a`, `b → R_B b`, `C → R_A C R_Bᵀ`.
//! Every invariant below is a contraction of the vectors `a`, `b` with the
//! matrices `C Cᵀ` (A side), `Cᵀ C` (B side) and `C` (mixed), closed with a
//! dot product or a triple product.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::positivity::{casimirs, CasimirTriple};
use crate::states::{fano_to_bloch, FanoForm};
use crate::su_basis::su4;

/// Evaluated invariants, named by multi-degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalInvariants {
    pub c002: f64,
    pub c200: f64,
    pub c020: f64,
    pub c003: f64,
    pub c111: f64,
    pub c004: f64,
    pub c202: f64,
    pub c022: f64,
    pub c112: f64,
    pub c113: f64,
    pub c123: f64,
    pub c204: f64,
    pub c024: f64,
    pub c213: f64,
    pub c214: f64,
    pub c124: f64,
    pub c125: f64,
    pub c215: f64,
    pub c306: f64,
    pub c036: f64,
}

impl LocalInvariants {
    pub const NAMES: [&'static str; 20] = [
        "c002", "c200", "c020", "c003", "c111", "c004", "c202", "c022", "c112", "c113", "c123",
        "c204", "c024", "c213", "c214", "c124", "c125", "c215", "c306", "c036",
    ];

    /// `(s, t, q)` degrees in `(a, b, C)`, aligned with [`Self::NAMES`].
    pub const MULTIDEGREES: [(i32, i32, i32); 20] = [
        (0, 0, 2),
        (2, 0, 0),
        (0, 2, 0),
        (0, 0, 3),
        (1, 1, 1),
        (0, 0, 4),
        (2, 0, 2),
        (0, 2, 2),
        (1, 1, 2),
        (1, 1, 3),
        (1, 2, 3),
        (2, 0, 4),
        (0, 2, 4),
        (2, 1, 3),
        (2, 1, 4),
        (1, 2, 4),
        (1, 2, 5),
        (2, 1, 5),
        (3, 0, 6),
        (0, 3, 6),
    ];

    pub fn to_array(&self) -> [f64; 20] {
        [
            self.c002, self.c200, self.c020, self.c003, self.c111, self.c004, self.c202, self.c022,
            self.c112, self.c113, self.c123, self.c204, self.c024, self.c213, self.c214, self.c124,
            self.c125, self.c215, self.c306, self.c036,
        ]
    }
}

fn triple(u: &Vector3<f64>, v: &Vector3<f64>, w: &Vector3<f64>) -> f64 {
    u.dot(&v.cross(w))
}

/// `ε_ijk ε_αβγ c_jβ c_kγ = 2 cof(C)_iα`; rows of the cofactor matrix are
/// cross products of pairs of rows of `C`.
fn cofactor(c: &Matrix3<f64>) -> Matrix3<f64> {
    let r = |i: usize| Vector3::new(c[(i, 0)], c[(i, 1)], c[(i, 2)]);
    let (r0, r1, r2) = (r(0), r(1), r(2));
    Matrix3::from_rows(&[
        r1.cross(&r2).transpose(),
        r2.cross(&r0).transpose(),
        r0.cross(&r1).transpose(),
    ])
}

/// Evaluates all twenty invariants. Defined on all of R¹⁵.
pub fn evaluate_all(f: &FanoForm) -> LocalInvariants {
    let (a, b, c) = (&f.a, &f.b, &f.c);
    let ct = c.transpose();
    let cct = c * ct;
    let ctc = ct * c;

    let cb = c * b;
    let cta = ct * a;
    let cct_a = cct * a;
    let ctc_b = ctc * b;
    let cct2_a = cct * cct_a;
    let ctc2_b = ctc * ctc_b;
    let cctc_b = c * ctc_b;
    let ctcct_a = ct * cct_a;

    LocalInvariants {
        c002: c.norm_squared(),
        c200: a.dot(a),
        c020: b.dot(b),
        c003: c.determinant(),
        c111: a.dot(&cb),
        c004: (cct * cct).trace(),
        c202: a.dot(&cct_a),
        c022: b.dot(&ctc_b),
        c112: 2.0 * a.dot(&(cofactor(c) * b)),
        c113: a.dot(&cctc_b),
        c123: triple(b, &cta, &ctc_b),
        c204: a.dot(&cct2_a),
        c024: b.dot(&ctc2_b),
        c213: triple(a, &cb, &cct_a),
        c214: triple(b, &cta, &ctcct_a),
        c124: triple(a, &cb, &cctc_b),
        c125: triple(b, &ctc_b, &ctcct_a),
        c215: triple(a, &cct_a, &cctc_b),
        c306: triple(a, &cct_a, &cct2_a),
        c036: triple(b, &ctc_b, &ctc2_b),
    }
}

/// Casimirs expressed through local invariants:
/// `C₂ = (C200 + C020 + C002)/3`, `C₃ = C111 − C003`,
/// `C₄ = [2(C200 C020 + C202 + C022 − C112) + C002² − C004]/6`.
pub fn casimirs_from_invariants(inv: &LocalInvariants) -> CasimirTriple {
    CasimirTriple::new(
        (inv.c200 + inv.c020 + inv.c002) / 3.0,
        inv.c111 - inv.c003,
        (2.0 * (inv.c200 * inv.c020 + inv.c202 + inv.c022 - inv.c112) + inv.c002 * inv.c002
            - inv.c004)
            / 6.0,
    )
}

/// Casimirs evaluated on the Bloch side, from the 15-vector `ξ(a, b, C)`.
pub fn casimirs_from_fano(f: &FanoForm) -> CasimirTriple {
    casimirs(&fano_to_bloch(f), &su4().constants).expect("su(4) Bloch vector")
}

/// Bloch-side minus Fano-side value of each Casimir.
pub fn casimir_identities_residual(f: &FanoForm) -> [f64; 3] {
    let bloch = casimirs_from_fano(f);
    let fano = casimirs_from_invariants(&evaluate_all(f));
    [bloch.c2 - fano.c2, bloch.c3 - fano.c3, bloch.c4 - fano.c4]
}

/// Primary invariants `K₁..K₁₀` and secondary invariants `J₁..J₁₅`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisValues {
    #[serde(rename = "K")]
    pub k: [f64; 10],
    #[serde(rename = "J")]
    pub j: [f64; 15],
}

impl BasisValues {
    pub const K_NAMES: [&'static str; 10] =
        ["K1", "K2", "K3", "K4", "K5", "K6", "K7", "K8", "K9", "K10"];
    pub const J_NAMES: [&'static str; 15] = [
        "J1", "J2", "J3", "J4", "J5", "J6", "J7", "J8", "J9", "J10", "J11", "J12", "J13", "J14",
        "J15",
    ];

    /// `K_i`, 1-based.
    pub fn k(&self, i: usize) -> f64 {
        self.k[i - 1]
    }

    /// `J_i`, 1-based.
    pub fn j(&self, i: usize) -> f64 {
        self.j[i - 1]
    }
}

/// Assembles the basis; `cas` must come from the same state as `inv`.
pub fn basis_values(inv: &LocalInvariants, cas: &CasimirTriple) -> BasisValues {
    let k = [
        1.0,
        cas.c2,
        inv.c200,
        inv.c020,
        cas.c3,
        inv.c111,
        inv.c004,
        inv.c202,
        inv.c022,
        inv.c204 + inv.c024,
    ];
    let j1 = cas.c4;
    let j2 = inv.c113;
    let j3 = inv.c204 - inv.c024;
    let j = [
        j1,
        j2,
        j3,
        j1 * j2,
        j1 * j3,
        j2 * j3,
        j1 * j2 * j3,
        inv.c123,
        inv.c213,
        inv.c214,
        inv.c124,
        inv.c215,
        inv.c125,
        inv.c306,
        inv.c036,
    ];
    BasisValues { k, j }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_phi_plus, fano_decompose, random_state, StateKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fano(seed: u64) -> FanoForm {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = [0.0; 15];
        v.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
        FanoForm::from_array(&v)
    }

    fn eps(i: usize, j: usize, k: usize) -> f64 {
        let (i, j, k) = (i as i64, j as i64, k as i64);
        ((j - i) * (k - i) * (k - j)) as f64 / 2.0
    }

    // Raw index-sum forms, transcribed index-for-index from the printed
    // contractions (with the C(214) and C(024) readings resolved).
    fn raw(f: &FanoForm) -> [f64; 20] {
        let a = |i: usize| f.a[i];
        let b = |i: usize| f.b[i];
        let c = |i: usize, j: usize| f.c[(i, j)];
        let r = 0..3;
        let mut o = [0.0; 20];
        for i in r.clone() {
            o[1] += a(i) * a(i);
            o[2] += b(i) * b(i);
            for j in r.clone() {
                o[0] += c(i, j) * c(i, j);
                o[4] += a(i) * c(i, j) * b(j);
            }
        }
        for i in r.clone() {
            for j in r.clone() {
                for k in r.clone() {
                    let e = eps(i, j, k);
                    for al in r.clone() {
                        for be in r.clone() {
                            for ga in r.clone() {
                                let e2 = e * eps(al, be, ga);
                                if e2 == 0.0 {
                                    continue;
                                }
                                o[3] += e2 * c(i, al) * c(j, be) * c(k, ga) / 6.0;
                                o[8] += e2 * a(i) * b(al) * c(j, be) * c(k, ga);
                            }
                        }
                    }
                }
            }
        }
        for i in r.clone() {
            for j in r.clone() {
                for al in r.clone() {
                    o[6] += a(i) * a(j) * c(i, al) * c(j, al);
                    o[7] += b(i) * b(j) * c(al, i) * c(al, j);
                    for be in r.clone() {
                        o[5] += c(i, al) * c(i, be) * c(j, al) * c(j, be);
                        o[9] += a(i) * c(i, al) * c(j, al) * c(j, be) * b(be);
                        for k in r.clone() {
                            o[11] += a(i) * c(i, al) * c(j, al) * c(j, be) * c(k, be) * a(k);
                            o[12] += b(i) * c(al, i) * c(al, j) * c(be, j) * c(be, k) * b(k);
                        }
                    }
                }
            }
        }
        // ε-contractions of degree 6..9
        for i in r.clone() {
            for j in r.clone() {
                for k in r.clone() {
                    let e = eps(i, j, k);
                    if e == 0.0 {
                        continue;
                    }
                    for p in r.clone() {
                        for q in r.clone() {
                            for l in r.clone() {
                                // C(123) = ε_ijk b_i c_pj a_p c_qk c_ql b_l
                                o[10] += e * b(i) * c(p, j) * a(p) * c(q, k) * c(q, l) * b(l);
                                // C(213) = ε_ijk a_i c_jp b_p c_kq c_lq a_l  (Greek ↔ Latin renamed)
                                o[13] += e * a(i) * c(j, p) * b(p) * c(k, q) * c(l, q) * a(l);
                                for g in r.clone() {
                                    // C(214) = ε_ijk b_i c_pj a_p c_qk c_ql c_gl a_g
                                    o[14] += e
                                        * b(i)
                                        * c(p, j)
                                        * a(p)
                                        * c(q, k)
                                        * c(q, l)
                                        * c(g, l)
                                        * a(g);
                                    // C(124) = ε_ijk a_i c_jp b_p c_kq c_gq c_gl b_l
                                    o[15] += e
                                        * a(i)
                                        * c(j, p)
                                        * b(p)
                                        * c(k, q)
                                        * c(g, q)
                                        * c(g, l)
                                        * b(l);
                                    for m in r.clone() {
                                        // C(125) = ε_ijk b_i c_pj c_pl b_l c_qk c_qm c_gm a_g
                                        o[16] += e
                                            * b(i)
                                            * c(p, j)
                                            * c(p, l)
                                            * b(l)
                                            * c(q, k)
                                            * c(q, m)
                                            * c(g, m)
                                            * a(g);
                                        // C(215) = ε_ijk a_i c_jp c_lp a_l c_kq c_mq c_mg b_g
                                        o[17] += e
                                            * a(i)
                                            * c(j, p)
                                            * c(l, p)
                                            * a(l)
                                            * c(k, q)
                                            * c(m, q)
                                            * c(m, g)
                                            * b(g);
                                        for s in r.clone() {
                                            // C(306) = ε a_i c_jp c_lp a_l c_kq c_mq c_ms c_gs a_g
                                            o[18] += e
                                                * a(i)
                                                * c(j, p)
                                                * c(l, p)
                                                * a(l)
                                                * c(k, q)
                                                * c(m, q)
                                                * c(m, s)
                                                * c(g, s)
                                                * a(g);
                                            // C(036) = ε b_i c_pj c_pl b_l c_qk c_qm c_sm c_sg b_g
                                            o[19] += e
                                                * b(i)
                                                * c(p, j)
                                                * c(p, l)
                                                * b(l)
                                                * c(q, k)
                                                * c(q, m)
                                                * c(s, m)
                                                * c(s, g)
                                                * b(g);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        o
    }

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * x.abs().max(y.abs()).max(1e-300) || (x - y).abs() < 1e-15
    }

    #[test]
    fn shortcuts_match_index_sums() {
        for seed in 0..100 {
            let f = random_fano(seed);
            let fast = evaluate_all(&f).to_array();
            let slow = raw(&f);
            for (n, (x, y)) in fast.iter().zip(slow.iter()).enumerate() {
                assert!(
                    (x - y).abs() <= 1e-12 * x.abs().max(1.0),
                    "{}: {x} vs {y}",
                    LocalInvariants::NAMES[n]
                );
            }
        }
    }

    #[test]
    fn bell_values() {
        let f = fano_decompose(&bell_phi_plus()).unwrap();
        let inv = evaluate_all(&f);
        let slow = raw(&f);
        assert!((inv.c002 - 3.0).abs() < 1e-14 && (slow[0] - 3.0).abs() < 1e-14);
        assert!((inv.c003 + 1.0).abs() < 1e-14 && (slow[3] + 1.0).abs() < 1e-14);
        assert!((inv.c004 - 3.0).abs() < 1e-14 && (slow[5] - 3.0).abs() < 1e-14);
        for (n, &(s, t, _)) in LocalInvariants::MULTIDEGREES.iter().enumerate() {
            if s + t > 0 {
                assert_eq!(inv.to_array()[n], 0.0);
            }
        }
        let cas = casimirs_from_invariants(&inv);
        assert!((cas.c2 - 1.0).abs() < 1e-14);
        assert!((cas.c3 - 1.0).abs() < 1e-14);
        assert!((cas.c4 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_state_values() {
        let z = Vector3::new(0.0, 0.0, 1.0);
        let f = FanoForm::new(z, z, z * z.transpose());
        let inv = evaluate_all(&f);
        let slow = raw(&f);
        for (x, y) in inv.to_array().iter().zip(slow.iter()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(inv.c111, 1.0);
        assert_eq!(inv.c113, 1.0);
        assert_eq!(inv.c204, 1.0);
        assert_eq!(inv.c024, 1.0);
        assert_eq!(inv.c112, 0.0);
        assert_eq!(inv.c003, 0.0);
    }

    #[test]
    fn zero_point() {
        let inv = evaluate_all(&FanoForm::zero());
        assert!(inv.to_array().iter().all(|&x| x == 0.0));
        let bv = basis_values(&inv, &casimirs_from_fano(&FanoForm::zero()));
        assert_eq!(bv.k(1), 1.0);
        assert!(bv.k[1..].iter().all(|&x| x == 0.0));
        assert!(bv.j.iter().all(|&x| x == 0.0));
        assert_eq!(casimir_identities_residual(&FanoForm::zero()), [0.0; 3]);
    }

    #[test]
    fn homogeneity_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..100 {
            let f = random_fano(seed);
            let (t, u, v): (f64, f64, f64) = (
                rng.random_range(0.3..2.0),
                rng.random_range(-2.0..-0.3),
                rng.random_range(0.3..2.0),
            );
            let base = evaluate_all(&f).to_array();
            let scaled = evaluate_all(&f.scaled(t, u, v)).to_array();
            for (n, &(s, tt, q)) in LocalInvariants::MULTIDEGREES.iter().enumerate() {
                let want = t.powi(s) * u.powi(tt) * v.powi(q) * base[n];
                assert!(
                    close(scaled[n], want, 1e-12),
                    "{}",
                    LocalInvariants::NAMES[n]
                );
            }
        }
    }

    #[test]
    fn swap_symmetry() {
        let pairs = [
            ("c200", "c020"),
            ("c202", "c022"),
            ("c204", "c024"),
            ("c214", "c124"),
            ("c215", "c125"),
            ("c306", "c036"),
            ("c213", "c123"),
        ];
        let fixed = ["c002", "c003", "c004", "c111", "c112", "c113"];
        let idx = |n: &str| LocalInvariants::NAMES.iter().position(|x| *x == n).unwrap();
        for seed in 0..50 {
            let f = random_fano(seed);
            let x = evaluate_all(&f).to_array();
            let y = evaluate_all(&f.swapped()).to_array();
            for (p, q) in pairs {
                assert!(close(x[idx(p)], y[idx(q)], 1e-12), "{p}<->{q}");
                assert!(close(x[idx(q)], y[idx(p)], 1e-12), "{q}<->{p}");
            }
            for n in fixed {
                assert!(close(x[idx(n)], y[idx(n)], 1e-12), "{n}");
            }
        }
    }

    #[test]
    fn casimir_identities_on_random_states() {
        for seed in 0..500 {
            let rho = random_state(4, seed, StateKind::HermitianUnitTrace).unwrap();
            let r = casimir_identities_residual(&fano_decompose(&rho).unwrap());
            assert!(r.iter().all(|x| x.abs() < 1e-11), "{r:?}");
        }
        let bell = fano_decompose(&bell_phi_plus()).unwrap();
        let r = casimir_identities_residual(&bell);
        assert!(r.iter().all(|x| x.abs() < 1e-14));
        assert!((casimirs_from_fano(&bell).c2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn basis_assembly() {
        let bell = fano_decompose(&bell_phi_plus()).unwrap();
        let inv = evaluate_all(&bell);
        let bv = basis_values(&inv, &casimirs_from_fano(&bell));
        assert!((bv.k(2) - 1.0).abs() < 1e-14);
        assert!((bv.k(5) - 1.0).abs() < 1e-14);
        assert!((bv.k(7) - 3.0).abs() < 1e-14);
        assert!((bv.j(1) - 1.0).abs() < 1e-14);
        for i in [3, 4, 6, 8, 9, 10] {
            assert_eq!(bv.k(i), 0.0);
        }
        for i in 2..=15 {
            assert_eq!(bv.j(i), 0.0);
        }

        let f = random_fano(3);
        let inv = evaluate_all(&f);
        let bv = basis_values(&inv, &casimirs_from_fano(&f));
        assert_eq!(bv.j(4), bv.j(1) * bv.j(2));
        assert_eq!(bv.j(5), bv.j(1) * bv.j(3));
        assert_eq!(bv.j(6), bv.j(2) * bv.j(3));
        assert_eq!(bv.j(7) - bv.j(1) * bv.j(2) * bv.j(3), 0.0);
        assert_eq!(bv.k(10), inv.c204 + inv.c024);
        assert_eq!(bv.j(3), inv.c204 - inv.c024);
    }
}
