//! Positivity of Hermitian matrices through the coefficients of the
//! characteristic polynomial, the su(4) Casimirs, and the inequality system
//! cutting out the physical region in Casimir space.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format_float;
use crate::linalg::{derive_seed, trace_product};
use crate::states::{random_state, to_bloch, BlochVector, DensityMatrix, StateKind};
use crate::su_basis::{su4, vee_product, StructureConstants};

/// Width of the band around zero treated as "on the boundary".
pub const BOUNDARY_TOL: f64 = 1e-10;

/// `S₁ … S_n` of `det(xI − ρ) = xⁿ − S₁xⁿ⁻¹ + S₂xⁿ⁻² − …`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharPolyCoeffs {
    pub dim: usize,
    /// `s[k − 1] = S_k`.
    pub s: Vec<f64>,
}

impl CharPolyCoeffs {
    /// `S_k` for `1 ≤ k ≤ n`.
    pub fn get(&self, k: usize) -> f64 {
        self.s[k - 1]
    }
}

/// Elementary symmetric polynomials of the eigenvalues, from the power
/// traces `Tr(ρᵐ)` by Newton's identities.
pub fn char_poly_coeffs(rho: &DensityMatrix) -> CharPolyCoeffs {
    let n = rho.dim();
    let m = rho.entries();
    let mut power_sums = Vec::with_capacity(n);
    let mut pw = m.clone();
    power_sums.push(m.trace().re);
    for _ in 1..n {
        power_sums.push(trace_product(&pw, m).re);
        pw = &pw * m;
    }
    let mut e = vec![1.0];
    for k in 1..=n {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * power_sums[i - 1];
        }
        e.push(acc / k as f64);
    }
    CharPolyCoeffs {
        dim: n,
        s: e[1..].to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositivityClass {
    Positive,
    NonPositive,
    Boundary,
}

impl fmt::Display for PositivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Positive => "positive",
            Self::NonPositive => "non-positive",
            Self::Boundary => "boundary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub class: PositivityClass,
    /// `S₁ … S_n`; each must be non-negative.
    pub margins: Vec<f64>,
}

fn classify_margins(margins: &[f64]) -> (bool, bool) {
    let outside = margins.iter().any(|&m| m < -BOUNDARY_TOL);
    let touching = margins.iter().any(|&m| m.abs() <= BOUNDARY_TOL);
    (outside, touching)
}

/// `ρ ≥ 0 ⟺ S_k ≥ 0` for every `k` (Descartes' rule of signs on the
/// real-rooted characteristic polynomial).
pub fn positivity_check(rho: &DensityMatrix) -> PositivityReport {
    let coeffs = char_poly_coeffs(rho);
    let (outside, touching) = classify_margins(&coeffs.s);
    let class = if outside {
        PositivityClass::NonPositive
    } else if touching {
        PositivityClass::Boundary
    } else {
        PositivityClass::Positive
    };
    PositivityReport {
        class,
        margins: coeffs.s,
    }
}

/// `k! n^{k−1} S_k / ((n−1)(n−2)…(n−k+1))` for `k = 2..n`. Values are not
/// clamped; physical states land in `[0, 1]`.
pub fn normalized_bounds(coeffs: &CharPolyCoeffs) -> Vec<f64> {
    let n = coeffs.dim;
    (2..=n)
        .map(|k| {
            let mut factor = 1.0;
            for j in 1..=k {
                factor *= j as f64;
            }
            factor *= (n as f64).powi(k as i32 - 1);
            let falling: f64 = (1..k).map(|j| (n - j) as f64).product();
            factor * coeffs.get(k) / falling
        })
        .collect()
}

/// `S_k` (`k = 2, 3, 4`) from the Bloch vector of a `d`-level state.
pub fn s_k_from_bloch(k: usize, xi: &BlochVector, sc: &StructureConstants) -> Result<f64> {
    let n = xi.dim();
    if sc.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: sc.dim(),
            found: n,
        });
    }
    let need = match k {
        2 => 2,
        3 => 3,
        4 => 4,
        _ => {
            return Err(Error::Domain(format!(
                "closed form available for S_2..S_4 only, got S_{k}"
            )))
        }
    };
    if n < need {
        return Err(Error::Domain(format!(
            "S_{k} closed form needs d >= {need}, got {n}"
        )));
    }
    let nf = n as f64;
    let c2 = xi.norm_sq();
    if k == 2 {
        return Ok(0.5 * (nf - 1.0) / nf * (1.0 - c2));
    }
    let vee = vee_product(xi, sc)?;
    let c3 = vee.dot(xi);
    if k == 3 {
        return Ok((nf - 1.0) * (nf - 2.0) / (6.0 * nf * nf) * (1.0 - 3.0 * c2 + 2.0 * c3));
    }
    let c4 = vee.norm_sq();
    let pre = (nf - 1.0) * (nf - 2.0) * (nf - 3.0) / (24.0 * nf.powi(3));
    Ok(pre
        * (1.0 - 6.0 * c2 + 8.0 * c3 + 3.0 * (nf - 1.0) / (nf - 3.0) * c2 * c2
            - 6.0 * (nf - 2.0) / (nf - 3.0) * c4))
}

/// `(S₂, S₃, S₄)` from the Bloch vector; needs `d ≥ 4`.
pub fn s_from_bloch(xi: &BlochVector, sc: &StructureConstants) -> Result<[f64; 3]> {
    Ok([
        s_k_from_bloch(2, xi, sc)?,
        s_k_from_bloch(3, xi, sc)?,
        s_k_from_bloch(4, xi, sc)?,
    ])
}

/// su(4) Casimirs `C₂ = ξ·ξ`, `C₃ = ξ∨ξ·ξ`, `C₄ = ξ∨ξ·ξ∨ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirTriple {
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl CasimirTriple {
    pub fn new(c2: f64, c3: f64, c4: f64) -> Self {
        Self { c2, c3, c4 }
    }
}

pub fn casimirs(xi: &BlochVector, sc: &StructureConstants) -> Result<CasimirTriple> {
    if xi.dim() != 4 || sc.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: if xi.dim() != 4 { xi.dim() } else { sc.dim() },
        });
    }
    let vee = vee_product(xi, sc)?;
    Ok(CasimirTriple::new(xi.norm_sq(), vee.dot(xi), vee.norm_sq()))
}

/// Casimirs of a unit-trace 4×4 state via its Gell-Mann Bloch vector.
pub fn casimirs_of_state(rho: &DensityMatrix) -> Result<CasimirTriple> {
    let ctx = su4();
    let xi = to_bloch(rho, &ctx.basis)?;
    casimirs(&xi, &ctx.constants)
}

/// `S₂ = 3(1−C₂)/8`, `S₃ = (1−3C₂+2C₃)/16`, `S₄ = ((1−3C₂)²+8C₃−12C₄)/256`.
pub fn s_from_casimirs(t: &CasimirTriple) -> [f64; 3] {
    let q = (1.0 - 3.0 * t.c2).powi(2) + 8.0 * t.c3 - 12.0 * t.c4;
    [
        3.0 / 8.0 * (1.0 - t.c2),
        (1.0 - 3.0 * t.c2 + 2.0 * t.c3) / 16.0,
        q / 256.0,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionClass {
    Inside,
    Boundary,
    Outside,
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Inside => "inside",
            Self::Boundary => "boundary",
            Self::Outside => "outside",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub class: RegionClass,
    /// Lower and upper slack of each of the three two-sided inequalities:
    /// `C₂`, `1 − C₂`, `P`, `1 − P`, `Q`, `1 − Q` with `P = 3C₂ − 2C₃`,
    /// `Q = (1 − 3C₂)² + 8C₃ − 12C₄`.
    pub margins: [f64; 6],
}

pub fn region_check(t: &CasimirTriple) -> RegionReport {
    let p = 3.0 * t.c2 - 2.0 * t.c3;
    let q = (1.0 - 3.0 * t.c2).powi(2) + 8.0 * t.c3 - 12.0 * t.c4;
    let margins = [t.c2, 1.0 - t.c2, p, 1.0 - p, q, 1.0 - q];
    let (outside, touching) = classify_margins(&margins);
    let class = if outside {
        RegionClass::Outside
    } else if touching {
        RegionClass::Boundary
    } else {
        RegionClass::Inside
    };
    RegionReport { class, margins }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub casimirs: CasimirTriple,
    pub s: [f64; 3],
    pub region: RegionClass,
}

/// Casimir triples of `n` seeded random states, one derived seed per row.
pub fn region_sample(n: usize, seed: u64, kind: StateKind) -> Vec<RegionRow> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let rho = random_state(4, derive_seed(seed, i), kind).expect("d = 4");
            let cas = casimirs_of_state(&rho).expect("unit trace 4x4");
            let coeffs = char_poly_coeffs(&rho);
            RegionRow {
                casimirs: cas,
                s: [coeffs.get(2), coeffs.get(3), coeffs.get(4)],
                region: region_check(&cas).class,
            }
        })
        .collect()
}

pub const REGION_CSV_HEADER: &str = "C2,C3,C4,S2,S3,S4,inside";

pub fn write_region_csv<W: Write>(rows: &[RegionRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{REGION_CSV_HEADER}")?;
    for r in rows {
        let c = &r.casimirs;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_float(c.c2),
            format_float(c.c3),
            format_float(c.c4),
            format_float(r.s[0]),
            format_float(r.s[1]),
            format_float(r.s[2]),
            r.region
        )?;
    }
    Ok(())
}
