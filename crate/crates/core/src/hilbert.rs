//! Hilbert series of the invariant ring and a numerical check of its
//! coefficients.
//!
//! The Molien function of the local group acting on the 16-dimensional space
//! of 4×4 Hermitian matrices is
//!
//! ```text
//!          1 + q⁴ + q⁵ + 3q⁶ + 2q⁷ + 2q⁸ + 3q⁹ + q¹⁰ + q¹¹ + q¹⁵
//! M(q) = ───────────────────────────────────────────────────────────
//!              (1−q)(1−q²)³(1−q³)²(1−q⁴)³(1−q⁶)
//! ```
//!
//! and its `qᵏ` coefficient is the dimension of the space of degree-`k`
//! invariants. The rank oracle counts that dimension directly: it evaluates
//! every monomial of weighted degree `k` in the generators at random points
//! and takes the numerical rank of the resulting matrix.

use nalgebra::{DMatrix, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{basis_values, casimirs_from_fano, evaluate_all};
use crate::linalg::derive_seed;
use crate::states::{fano_decompose, random_state, DensityMatrix, FanoForm, StateKind};

/// Largest supported truncation order of [`molien_expand`].
pub const MAX_SERIES_ORDER: usize = 64;
/// Largest degree handled by the rank oracle.
pub const MAX_ORACLE_DEGREE: usize = 6;
/// Singular values below `RANK_RTOL · σ_max` count as zero.
pub const RANK_RTOL: f64 = 1e-8;

/// `(degree, multiplicity)` of the numerator terms.
pub const MOLIEN_NUMERATOR: [(usize, i128); 10] = [
    (0, 1),
    (4, 1),
    (5, 1),
    (6, 3),
    (7, 2),
    (8, 2),
    (9, 3),
    (10, 1),
    (11, 1),
    (15, 1),
];

/// Degrees `m` of the denominator factors `(1 − qᵐ)`, one per primary
/// invariant (the degree-1 factor belongs to the trace).
pub const MOLIEN_DENOMINATOR: [usize; 10] = [1, 2, 2, 2, 3, 3, 4, 4, 4, 6];

/// Truncated power series with integer coefficients `d₀..d_kmax`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerSeries {
    pub coeffs: Vec<i64>,
}

impl PowerSeries {
    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs[k]
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn overflow() -> Error {
    Error::Domain("integer overflow in series expansion".into())
}

/// Exact expansion of the Molien function through `q^kmax`, by power-series
/// division of the numerator by the expanded denominator polynomial.
pub fn molien_expand(kmax: usize) -> Result<PowerSeries> {
    if kmax > MAX_SERIES_ORDER {
        return Err(Error::KmaxTooLarge(kmax));
    }
    let len = kmax + 1;
    let mut den = vec![0i128; len];
    den[0] = 1;
    for &m in &MOLIEN_DENOMINATOR {
        // multiply by (1 − q^m), truncated
        for k in (m..len).rev() {
            den[k] = den[k].checked_sub(den[k - m]).ok_or_else(overflow)?;
        }
    }
    let mut num = vec![0i128; len];
    for &(deg, mult) in &MOLIEN_NUMERATOR {
        if deg < len {
            num[deg] = mult;
        }
    }
    let mut out = vec![0i128; len];
    for k in 0..len {
        let mut acc = num[k];
        for j in 1..=k {
            let t = den[j].checked_mul(out[k - j]).ok_or_else(overflow)?;
            acc = acc.checked_sub(t).ok_or_else(overflow)?;
        }
        // den[0] == 1
        out[k] = acc;
    }
    let coeffs = out
        .into_iter()
        .map(|x| i64::try_from(x).map_err(|_| overflow()))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries { coeffs })
}

/// A multiplicative generator of the invariant ring used by the rank oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: &'static str,
    pub degree: usize,
}

const fn gen(name: &'static str, degree: usize) -> Generator {
    Generator { name, degree }
}

/// The trace `T`, the primaries `K₂..K₁₀` and the secondaries that are not
/// products of other secondaries. `K₁ = 1` and `J₄..J₇` add no generator.
pub const GENERATOR_TABLE: [Generator; 21] = [
    gen("T", 1),
    gen("K2", 2),
    gen("K3", 2),
    gen("K4", 2),
    gen("K5", 3),
    gen("K6", 3),
    gen("K7", 4),
    gen("K8", 4),
    gen("K9", 4),
    gen("J1", 4),
    gen("J2", 5),
    gen("K10", 6),
    gen("J3", 6),
    gen("J8", 6),
    gen("J9", 6),
    gen("J10", 7),
    gen("J11", 7),
    gen("J12", 8),
    gen("J13", 8),
    gen("J14", 9),
    gen("J15", 9),
];

/// Values of [`GENERATOR_TABLE`] at the Hermitian matrix with trace `trace`
/// and traceless Fano coordinates `f`.
pub fn generator_values(trace: f64, f: &FanoForm) -> [f64; 21] {
    let inv = evaluate_all(f);
    let bv = basis_values(&inv, &casimirs_from_fano(f));
    let mut out = [0.0; 21];
    for (o, g) in out.iter_mut().zip(GENERATOR_TABLE.iter()) {
        let (kind, idx) = g.name.split_at(1);
        *o = match kind {
            "T" => trace,
            "K" => bv.k(idx.parse().expect("index")),
            _ => bv.j(idx.parse().expect("index")),
        };
    }
    out
}

/// Exponent vectors over [`GENERATOR_TABLE`] with weighted degree exactly `k`.
pub fn monomials(k: usize) -> Vec<Vec<u32>> {
    fn rec(pos: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == GENERATOR_TABLE.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let deg = GENERATOR_TABLE[pos].degree;
        let mut e = 0;
        while e * deg <= left {
            cur.push(e as u32);
            rec(pos + 1, left - e * deg, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        k,
        &mut Vec::with_capacity(GENERATOR_TABLE.len()),
        &mut out,
    );
    out
}

pub fn eval_monomial(exponents: &[u32], values: &[f64; 21]) -> f64 {
    exponents
        .iter()
        .zip(values)
        .filter(|(e, _)| **e > 0)
        .map(|(e, v)| v.powi(*e as i32))
        .product()
}

/// Random sample point for the oracle: a Gaussian Hermitian unit-trace matrix
/// rescaled by a trace drawn from `[0.5, 2)`.
pub fn sample_point(seed: u64) -> DensityMatrix {
    let rho = random_state(4, derive_seed(seed, 0), StateKind::HermitianUnitTrace).expect("d = 4");
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
    let t: f64 = rng.random_range(0.5..2.0);
    rho.scaled(t)
}

/// Generator values at a (not necessarily unit-trace) 4×4 Hermitian matrix.
pub fn generator_values_at(m: &DensityMatrix) -> Result<[f64; 21]> {
    let f = fano_decompose(m)?;
    Ok(generator_values(m.trace(), &f))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankResult {
    pub degree: usize,
    pub monomials: usize,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_ORACLE_DEGREE {
        return Err(Error::Domain(format!(
            "rank oracle supports degrees up to {MAX_ORACLE_DEGREE}, got {k}"
        )));
    }
    Ok(())
}

/// Numerical rank of the `samples × monomials` evaluation matrix for one
/// seed. Columns are scaled to unit norm first; this leaves the rank
/// unchanged and evens out the singular values.
pub fn evaluation_rank(k: usize, samples: usize, seed: u64) -> Result<RankResult> {
    check_degree(k)?;
    let monos = monomials(k);
    if samples < 2 * monos.len() {
        return Err(Error::Domain(format!(
            "degree {k} has {} monomials; need at least {} samples, got {samples}",
            monos.len(),
            2 * monos.len()
        )));
    }
    let rows: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let vals = generator_values_at(&sample_point(derive_seed(seed, i)))?;
            Ok(monos.iter().map(|m| eval_monomial(m, &vals)).collect())
        })
        .collect::<Result<_>>()?;
    let mut mat = DMatrix::from_fn(samples, monos.len(), |i, j| rows[i][j]);
    for mut col in mat.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= n;
        }
    }
    let sv = SVD::new(mat, false, false).singular_values;
    let mut singular_values: Vec<f64> = sv.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values
        .iter()
        .filter(|&&s| smax > 0.0 && s > RANK_RTOL * smax)
        .count();
    Ok(RankResult {
        degree: k,
        monomials: monos.len(),
        rank,
        singular_values,
    })
}

/// Sample count used when the caller does not choose one.
pub fn default_samples(k: usize) -> usize {
    3 * monomials(k).len() + 8
}

/// Dimension of the span of degree-`k` generator monomials. The rank must
/// agree between `seed` and a second derived seed.
pub fn dimension_oracle(k: usize, samples: usize, seed: u64) -> Result<usize> {
    let first = evaluation_rank(k, samples, seed)?.rank;
    let second = evaluation_rank(k, samples, derive_seed(seed, 0x5EED))?.rank;
    if first != second {
        return Err(Error::UnstableRank {
            degree: k,
            first,
            second,
        });
    }
    Ok(first)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub molien: i64,
    pub monomials: usize,
    pub rank: Option<usize>,
    pub error: Option<String>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub seed: u64,
    pub kmax: usize,
    pub degrees: Vec<DegreeCheck>,
    pub all_match: bool,
}

/// Compares the rank oracle with the Molien coefficients for `k = 1..=kmax`.
/// Mismatches and unstable ranks are recorded in the report.
pub fn basis_consistency(kmax: usize, seed: u64) -> Result<ConsistencyReport> {
    check_degree(kmax)?;
    let series = molien_expand(kmax)?;
    let degrees: Vec<DegreeCheck> = (1..=kmax)
        .map(|k| {
            let molien = series.coeff(k);
            let monos = monomials(k).len();
            match dimension_oracle(k, default_samples(k), derive_seed(seed, k as u64)) {
                Ok(rank) => DegreeCheck {
                    degree: k,
                    molien,
                    monomials: monos,
                    rank: Some(rank),
                    error: None,
                    matches: rank as i64 == molien,
                },
                Err(e) => DegreeCheck {
                    degree: k,
                    molien,
                    monomials: monos,
                    rank: None,
                    error: Some(e.to_string()),
                    matches: false,
                },
            }
        })
        .collect();
    let all_match = degrees.iter().all(|d| d.matches);
    Ok(ConsistencyReport {
        seed,
        kmax,
        degrees,
        all_match,
    })
}
