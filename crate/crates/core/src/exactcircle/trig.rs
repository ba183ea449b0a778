//! Certified evaluation of `sin(πd)`, `cos(πd)` for exact dyadic `d`, and the
//! derived unit-circle quantities.
//!
//! Arguments are reduced exactly to `[0, 1/4]` before any rounding happens, so
//! small arguments keep full relative accuracy. Differences of unit-circle
//! points are formed as `e^{iπ(s+t)} · 2i·sin(π(s−t))` with the exact angle
//! difference, never by subtracting two rounded points.

use rug::float::Round;
use rug::{Float, Integer};

use super::angle::{Angle, Dyadic};
use super::complex::CertComplex;
use super::scalar::CertScalar;

fn exact(v: i64, bits: u32) -> CertScalar {
    CertScalar::from_i64(v, bits)
}

/// `(sin πg, cos πg)` for `g ∈ [0, 1/4]`.
fn sin_cos_first_octant(g: &Dyadic, bits: u32) -> (CertScalar, CertScalar) {
    if g.is_zero() {
        return (CertScalar::zero(bits), exact(1, bits));
    }
    // a few guard bits for the argument product
    let wb = bits + 8;
    let x = CertScalar::from_dyadic(g, wb).mul(&CertScalar::pi(wb));
    let s_lo = Float::with_val_round(bits, x.lo().sin_ref(), Round::Down).0;
    let s_hi = Float::with_val_round(bits, x.hi().sin_ref(), Round::Up).0;
    let c_lo = Float::with_val_round(bits, x.hi().cos_ref(), Round::Down).0;
    let c_hi = Float::with_val_round(bits, x.lo().cos_ref(), Round::Up).0;
    let zero = Float::new(bits);
    let one = Float::with_val(bits, 1);
    let s_lo = if s_lo < zero { zero.clone() } else { s_lo };
    let c_hi = if c_hi > one { one } else { c_hi };
    let c_lo = if c_lo < zero { zero } else { c_lo };
    (CertScalar::from_bounds(s_lo, s_hi), CertScalar::from_bounds(c_lo, c_hi))
}

/// Certified `(sin πd, cos πd)`.
pub fn sin_cos_pi(d: &Dyadic, bits: u32) -> (CertScalar, CertScalar) {
    let r = d.rem_pow2(1); // [0, 2)
    let e = r.exponent();
    if e <= 1 {
        // r ∈ {0, 1/2, 1, 3/2}
        let quarter_turns = (r.numerator().to_u32().unwrap_or(0) << (1 - e)) % 4;
        let (s, c) = match quarter_turns {
            0 => (0, 1),
            1 => (1, 0),
            2 => (0, -1),
            _ => (-1, 0),
        };
        return (exact(s, bits), exact(c, bits));
    }
    // k = floor(2r), f = r - k/2 ∈ [0, 1/2)
    let k = Integer::from(r.numerator() >> (e - 1)).to_u32().unwrap_or(0) % 4;
    let f = r.sub(&Dyadic::new(Integer::from(k), 1));
    let quarter = Dyadic::pow2_neg(2);
    let (s, c) = if f > quarter {
        let g = Dyadic::pow2_neg(1).sub(&f);
        let (sg, cg) = sin_cos_first_octant(&g, bits);
        (cg, sg)
    } else {
        sin_cos_first_octant(&f, bits)
    };
    match k {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}

/// Certified enclosure of `e^{2πia}`.
pub fn unit_value(a: &Angle, bits: u32) -> CertComplex {
    let (s, c) = sin_cos_pi(&a.as_dyadic().mul_pow2(1), bits);
    CertComplex::new(c, s)
}

/// Certified enclosure of `e^{2πis} − e^{2πit}`, exact zero iff `s = t`.
pub fn unit_diff(s: &Angle, t: &Angle, bits: u32) -> CertComplex {
    if s == t {
        return CertComplex::zero(bits);
    }
    let (sd, _) = sin_cos_pi(&s.diff(t), bits);
    let (ss, cs) = sin_cos_pi(&s.sum(t), bits);
    let two_sd = sd.mul_pow2(1);
    CertComplex::new(two_sd.mul(&ss).neg(), two_sd.mul(&cs))
}

/// `|e^{2πia} − e^{2πib}| = 2|sin(π(a−b))|`, exactly zero iff `a = b`.
pub fn chord(a: &Angle, b: &Angle, bits: u32) -> CertScalar {
    if a == b {
        return CertScalar::zero(bits);
    }
    sin_cos_pi(&a.diff(b), bits).0.abs().mul_pow2(1)
}
