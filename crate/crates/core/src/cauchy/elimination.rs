//! Certified Gaussian elimination with partial pivoting.
//!
//! Structure-agnostic, so it serves as an independent oracle for the Cauchy
//! product formulas. A pivot whose enclosure touches zero aborts with
//! `Undecided`; more precision is the only cure.

use super::{CertMatrix, Provenance};
use crate::error::{Error, Result};
use crate::exactcircle::{CertComplex, CertScalar};

fn pivot_row(a: &[Vec<CertComplex>], col: usize, bits: u32) -> Result<usize> {
    let mut best = None;
    let mut best_mag = CertScalar::zero(bits).lo().clone();
    for (r, row) in a.iter().enumerate().skip(col) {
        let mag = row[col].abs();
        if mag.lo() > &best_mag {
            best_mag = mag.lo().clone();
            best = Some(r);
        }
    }
    best.ok_or_else(|| Error::Undecided { what: format!("no pivot separated from zero in column {col}"), bits })
}

fn rows_of(m: &CertMatrix) -> Vec<Vec<CertComplex>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

/// Reduce `a` in place to the identity while applying the same row operations to `rhs`.
/// Returns the determinant of `a`.
fn gauss_jordan(a: &mut [Vec<CertComplex>], rhs: &mut [Vec<CertComplex>], bits: u32) -> Result<CertComplex> {
    let n = a.len();
    let mut det = CertComplex::one(bits);
    for col in 0..n {
        let p = pivot_row(a, col, bits)?;
        if p != col {
            a.swap(p, col);
            rhs.swap(p, col);
            det = det.neg();
        }
        let piv = a[col][col].clone();
        det = det.mul(&piv);
        let inv = piv.recip();
        for x in a[col].iter_mut() {
            *x = x.mul(&inv);
        }
        for x in rhs[col].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                *x = x.sub(&f.mul(p));
            }
            for c in 0..rhs[r].len() {
                let t = f.mul(&rhs[col][c]);
                rhs[r][c] = rhs[r][c].sub(&t);
            }
        }
    }
    Ok(det)
}

pub fn inverse(m: &CertMatrix) -> Result<CertMatrix> {
    let n = m.dim();
    let bits = m.bits();
    let mut a = rows_of(m);
    let mut rhs = rows_of(&CertMatrix::identity(n, bits));
    gauss_jordan(&mut a, &mut rhs, bits)?;
    Ok(CertMatrix::new(n, rhs.into_iter().flatten().collect(), Provenance::InverseByElimination))
}

pub fn det(m: &CertMatrix) -> Result<CertComplex> {
    let bits = m.bits();
    let mut a = rows_of(m);
    let mut rhs = vec![Vec::new(); m.dim()];
    gauss_jordan(&mut a, &mut rhs, bits)
}

pub fn solve(m: &CertMatrix, b: &[CertComplex]) -> Result<Vec<CertComplex>> {
    let bits = m.bits();
    let mut a = rows_of(m);
    let mut rhs: Vec<Vec<CertComplex>> = b.iter().map(|x| vec![x.clone()]).collect();
    gauss_jordan(&mut a, &mut rhs, bits)?;
    Ok(rhs.into_iter().map(|mut r| r.remove(0)).collect())
}
