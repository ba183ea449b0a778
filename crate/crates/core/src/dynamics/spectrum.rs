//! Eigenvalue oracle for small sections: characteristic polynomial by
//! Faddeev–LeVerrier in interval arithmetic, Aberth iteration on midpoints,
//! then certified inclusion disks `|z − zᵢ| ≤ n|p(zᵢ)|/∏_{j≠i}|zᵢ − zⱼ|`.

// Negated comparisons treat NaN endpoints as failures.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use rug::Float;

use super::{assemble, check_dim};
use crate::error::{Error, Result};
use crate::exactcircle::{unit_value, CertComplex, CertScalar};
use crate::induction::ConstructionState;

/// Largest section the oracle accepts.
pub const MAX_ORACLE_DIM: usize = 6;

/// Required agreement between oracle eigenvalues and the constructed `μᵢ`.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

const MAX_ITERATIONS: usize = 2000;

/// Sweeps run after the step size first drops below `2^{-bits/2}`.
const POLISH_SWEEPS: usize = 3;

/// Coefficients `c₀, …, c_n` (ascending, `c_n = 1`) of `det(zI − A)`.
pub fn char_poly(entries: &[CertComplex], n: usize, bits: u32) -> Vec<CertComplex> {
    let mut coeffs = vec![CertComplex::zero(bits); n + 1];
    coeffs[n] = CertComplex::one(bits);
    let mut m = vec![CertComplex::zero(bits); n * n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1} I
        let mut next = vec![CertComplex::zero(bits); n * n];
        for i in 0..n {
            for j in 0..n {
                let terms: Vec<CertComplex> = (0..n).map(|l| entries[i * n + l].mul(&m[l * n + j])).collect();
                next[i * n + j] = CertComplex::sum(&terms, bits);
            }
            next[i * n + i] = next[i * n + i].add(&coeffs[n - k + 1]);
        }
        m = next;
        // c_{n−k} = −tr(A·M_k)/k
        let trace_terms: Vec<CertComplex> = (0..n)
            .flat_map(|i| (0..n).map(move |l| (i, l)))
            .map(|(i, l)| entries[i * n + l].mul(&m[l * n + i]))
            .collect();
        let tr = CertComplex::sum(&trace_terms, bits);
        coeffs[n - k] = tr.scale(&CertScalar::from_i64(k as i64, bits).recip()).neg();
    }
    coeffs
}

fn horner(coeffs: &[CertComplex], z: &CertComplex) -> CertComplex {
    let mut acc = coeffs.last().expect("nonempty polynomial").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn derivative(coeffs: &[CertComplex], bits: u32) -> Vec<CertComplex> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&CertScalar::from_i64(k as i64, bits))).collect()
}

fn mid(z: &CertComplex, bits: u32) -> CertComplex {
    let m = |s: &CertScalar| CertScalar::point(Float::with_val(bits, s.mid()));
    CertComplex::new(m(&z.re), m(&z.im))
}

/// Simultaneous Aberth iteration on midpoint values.
fn aberth(coeffs: &[CertComplex], mut z: Vec<CertComplex>, bits: u32) -> Vec<CertComplex> {
    let p: Vec<CertComplex> = coeffs.iter().map(|c| mid(c, bits)).collect();
    let dp = derivative(&p, bits);
    let n = z.len();
    let tiny = CertScalar::pow2(-(bits as i32) / 2, bits);
    let one = CertComplex::one(bits);
    let mut polish = POLISH_SWEEPS;
    for _ in 0..MAX_ITERATIONS {
        let mut converged = true;
        for i in 0..n {
            let w = mid(&horner(&p, &z[i]).div(&horner(&dp, &z[i])), bits);
            let repulsion =
                (0..n).filter(|&j| j != i).fold(CertComplex::zero(bits), |acc, j| acc.add(&z[i].sub(&z[j]).recip()));
            let step = mid(&w.div(&one.sub(&w.mul(&repulsion))), bits);
            if !step.is_finite() {
                return z;
            }
            if !(step.abs().hi() < tiny.lo()) {
                converged = false;
            }
            z[i] = mid(&z[i].sub(&step), bits);
        }
        if converged {
            if polish == 0 {
                break;
            }
            polish -= 1;
        }
    }
    z
}

/// Certified enclosures of the eigenvalues of `T_n`, ordered to pair with `μ₁, …, μₙ`.
///
/// Fails with `OracleFailure` unless the inclusion disks are pairwise disjoint
/// and each `μᵢ` lies in exactly one of them.
pub fn brute_spectrum(state: &ConstructionState, n: usize) -> Result<Vec<CertComplex>> {
    check_dim(state, n)?;
    if n > MAX_ORACLE_DIM {
        return Err(Error::InvalidArgument(format!("oracle dimension {n} exceeds {MAX_ORACLE_DIM}")));
    }
    let bits = state.working_bits;
    let t = assemble(state, n)?;
    let coeffs = char_poly(t.dense(bits).entries(), n, bits);
    let start: Vec<CertComplex> = t.diag.iter().map(|l| unit_value(l, bits)).collect();
    let z = aberth(&coeffs, start, bits);

    let radii: Vec<CertScalar> = (0..n)
        .map(|i| {
            let denom = (0..n).filter(|&j| j != i).fold(CertComplex::one(bits), |acc, j| acc.mul(&z[i].sub(&z[j])));
            CertScalar::from_i64(n as i64, bits).mul(&horner(&coeffs, &z[i]).abs()).div(&denom.abs())
        })
        .collect();
    if radii.iter().any(|r| !r.is_finite()) {
        return Err(Error::OracleFailure("inclusion radii are not finite".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !(z[i].sub(&z[j]).abs().lo() > radii[i].add(&radii[j]).hi()) {
                return Err(Error::OracleFailure(format!("inclusion disks {} and {} overlap", i + 1, j + 1)));
            }
        }
    }
    let disks: Vec<CertComplex> = z
        .iter()
        .zip(&radii)
        .map(|(c, r)| {
            let hull = |x: &CertScalar| CertScalar::from_bounds(x.sub(r).lo().clone(), x.add(r).hi().clone());
            CertComplex::new(hull(&c.re), hull(&c.im))
        })
        .collect();

    let mut out = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for (i, s) in state.steps[..n].iter().enumerate() {
        let mu = unit_value(&s.mu_n, bits);
        let hits: Vec<usize> = (0..n).filter(|&j| !(z[j].sub(&mu).abs().lo() > radii[j].hi())).collect();
        match hits.as_slice() {
            [j] if !used[*j] => {
                used[*j] = true;
                out.push(disks[*j].clone());
            }
            _ => return Err(Error::OracleFailure(format!("μ_{} pairs with {} inclusion disks", i + 1, hits.len()))),
        }
    }
    Ok(out)
}

/// `max |zᵢ − μᵢ|` over a paired list, as a certified upper bound.
pub fn pairing_error(eigs: &[CertComplex], state: &ConstructionState) -> CertScalar {
    let bits = state.working_bits;
    eigs.iter()
        .zip(&state.steps)
        .map(|(z, s)| z.sub(&unit_value(&s.mu_n, bits)).abs())
        .fold(CertScalar::zero(bits), |acc, e| acc.max(&e))
}
