use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round, Special};
use rug::{Float, Integer};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::angle::Dyadic;

/// Smallest precision MPFR accepts for our purposes.
pub const MIN_BITS: u32 = 16;

fn down<T>(bits: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(bits, v, Round::Down).0
}

fn up<T>(bits: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(bits, v, Round::Up).0
}

fn fmin(a: Float, b: Float) -> Float {
    if a <= b {
        a
    } else {
        b
    }
}

fn fmax(a: Float, b: Float) -> Float {
    if a >= b {
        a
    } else {
        b
    }
}

/// A closed interval `[lo, hi]` with binary endpoints, guaranteed to contain
/// the exact value it stands for. Infinite endpoints only appear as overflow
/// sentinels.
#[derive(Clone, Debug, PartialEq)]
pub struct CertScalar {
    lo: Float,
    hi: Float,
}

impl CertScalar {
    /// Builds an interval from endpoints, widening to the whole line on NaN or inverted bounds.
    pub fn from_bounds(lo: Float, hi: Float) -> Self {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            let bits = lo.prec().max(hi.prec());
            return CertScalar::entire(bits);
        }
        CertScalar { lo, hi }
    }

    pub fn entire(bits: u32) -> Self {
        CertScalar { lo: Float::with_val(bits, Special::NegInfinity), hi: Float::with_val(bits, Special::Infinity) }
    }

    pub fn zero(bits: u32) -> Self {
        CertScalar { lo: Float::new(bits), hi: Float::new(bits) }
    }

    pub fn point(v: Float) -> Self {
        CertScalar { lo: v.clone(), hi: v }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        CertScalar { lo: down(bits, v), hi: up(bits, v) }
    }

    pub fn from_f64(v: f64, bits: u32) -> Self {
        CertScalar { lo: down(bits, v), hi: up(bits, v) }
    }

    pub fn from_integer(v: &Integer, bits: u32) -> Self {
        CertScalar { lo: down(bits, v), hi: up(bits, v) }
    }

    pub fn from_dyadic(d: &Dyadic, bits: u32) -> Self {
        let mut lo = down(bits, d.numerator());
        let mut hi = up(bits, d.numerator());
        lo >>= d.exponent();
        hi >>= d.exponent();
        CertScalar { lo, hi }
    }

    /// `2^k` exactly.
    pub fn pow2(k: i32, bits: u32) -> Self {
        let mut v = Float::with_val(bits, 1);
        v <<= k;
        CertScalar::point(v)
    }

    pub fn pi(bits: u32) -> Self {
        CertScalar { lo: down(bits, Constant::Pi), hi: up(bits, Constant::Pi) }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains(&self, other: &CertScalar) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &CertScalar) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Upper bound of `hi - lo`.
    pub fn width(&self) -> Float {
        up(self.bits(), &self.hi - &self.lo)
    }

    pub fn mid(&self) -> Float {
        let mut m = Float::with_val(self.bits() + 1, &self.lo + &self.hi);
        m >>= 1u32;
        m
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Same interval at a different precision, rounded outward.
    pub fn with_bits(&self, bits: u32) -> Self {
        CertScalar { lo: down(bits, &self.lo), hi: up(bits, &self.hi) }
    }

    /// Intersection; on disjoint inputs returns `self`, which can only happen
    /// if one of the enclosures was wrong.
    pub fn intersect(&self, other: &CertScalar) -> Self {
        let lo = fmax(self.lo.clone(), other.lo.clone());
        let hi = fmin(self.hi.clone(), other.hi.clone());
        if lo > hi {
            return self.clone();
        }
        CertScalar { lo, hi }
    }

    pub fn hull(&self, other: &CertScalar) -> Self {
        CertScalar { lo: fmin(self.lo.clone(), other.lo.clone()), hi: fmax(self.hi.clone(), other.hi.clone()) }
    }

    pub fn max(&self, other: &CertScalar) -> Self {
        CertScalar { lo: fmax(self.lo.clone(), other.lo.clone()), hi: fmax(self.hi.clone(), other.hi.clone()) }
    }

    pub fn min(&self, other: &CertScalar) -> Self {
        CertScalar { lo: fmin(self.lo.clone(), other.lo.clone()), hi: fmin(self.hi.clone(), other.hi.clone()) }
    }

    fn prec_with(&self, other: &CertScalar) -> u32 {
        self.bits().max(other.bits())
    }

    pub fn add(&self, other: &CertScalar) -> Self {
        let b = self.prec_with(other);
        CertScalar::from_bounds(down(b, &self.lo + &other.lo), up(b, &self.hi + &other.hi))
    }

    pub fn sub(&self, other: &CertScalar) -> Self {
        let b = self.prec_with(other);
        CertScalar::from_bounds(down(b, &self.lo - &other.hi), up(b, &self.hi - &other.lo))
    }

    pub fn neg(&self) -> Self {
        CertScalar { lo: Float::with_val(self.hi.prec(), -&self.hi), hi: Float::with_val(self.lo.prec(), -&self.lo) }
    }

    pub fn mul(&self, other: &CertScalar) -> Self {
        let b = self.prec_with(other);
        if !self.is_finite() || !other.is_finite() {
            return CertScalar::entire(b);
        }
        if self.lo >= 0 && other.lo >= 0 {
            return CertScalar { lo: down(b, &self.lo * &other.lo), hi: up(b, &self.hi * &other.hi) };
        }
        let pairs = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo = Float::with_val(b, Special::Infinity);
        let mut hi = Float::with_val(b, Special::NegInfinity);
        for (x, y) in pairs {
            lo = fmin(lo, down(b, x * y));
            hi = fmax(hi, up(b, x * y));
        }
        CertScalar::from_bounds(lo, hi)
    }

    pub fn sqr(&self) -> Self {
        let b = self.bits();
        if !self.is_finite() {
            return CertScalar::from_bounds(Float::new(b), Float::with_val(b, Special::Infinity));
        }
        let alo = self.lo.clone().abs();
        let ahi = self.hi.clone().abs();
        let (small, large) = if self.contains_zero() {
            (Float::new(b), fmax(alo, ahi))
        } else if alo <= ahi {
            (alo, ahi)
        } else {
            (ahi, alo)
        };
        CertScalar { lo: down(b, small.square_ref()), hi: up(b, large.square_ref()) }
    }

    pub fn recip(&self) -> Self {
        let b = self.bits();
        if self.contains_zero() || !self.is_finite() {
            return CertScalar::entire(b);
        }
        CertScalar { lo: down(b, self.hi.recip_ref()), hi: up(b, self.lo.recip_ref()) }
    }

    pub fn div(&self, other: &CertScalar) -> Self {
        if other.contains_zero() {
            return CertScalar::entire(self.prec_with(other));
        }
        self.mul(&other.recip())
    }

    /// Square root of the nonnegative part.
    pub fn sqrt(&self) -> Self {
        let b = self.bits();
        if self.hi < 0 {
            return CertScalar::entire(b);
        }
        let lo = if self.lo > 0 { down(b, self.lo.sqrt_ref()) } else { Float::new(b) };
        CertScalar::from_bounds(lo, up(b, self.hi.sqrt_ref()))
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let b = self.bits();
            let m = fmax(Float::with_val(b, -&self.lo), self.hi.clone());
            CertScalar { lo: Float::new(b), hi: m }
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn mul_pow2(&self, k: i32) -> Self {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo <<= k;
        hi <<= k;
        CertScalar { lo, hi }
    }

    /// Point interval at an upper bound of `self`, rounded up to `bits` significant bits.
    pub fn upper_point(&self, bits: u32) -> Self {
        CertScalar::point(up(bits, &self.hi))
    }

    /// Point interval at a lower bound of `self`, rounded down to `bits` significant bits.
    pub fn lower_point(&self, bits: u32) -> Self {
        CertScalar::point(down(bits, &self.lo))
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a CertScalar>, bits: u32) -> Self {
        items.into_iter().fold(CertScalar::zero(bits), |acc, x| acc.add(x))
    }

    pub(crate) fn lo_string(&self) -> String {
        float_to_string(&self.lo)
    }

    pub(crate) fn hi_string(&self) -> String {
        float_to_string(&self.hi)
    }
}

fn float_to_string(f: &Float) -> String {
    f.to_string_radix(10, None)
}

fn parse_float(s: &str, bits: u32, round: Round) -> Option<Float> {
    let parsed = Float::parse(s).ok()?;
    let mut f = Float::new(bits);
    use rug::ops::AssignRound;
    f.assign_round(parsed, round);
    Some(f)
}

impl fmt::Display for CertScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        write!(
            f,
            "[{}, {}]",
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up)
        )
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&CertScalar> for &CertScalar {
            type Output = CertScalar;
            fn $m(self, rhs: &CertScalar) -> CertScalar {
                CertScalar::$m(self, rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &CertScalar {
    type Output = CertScalar;
    fn neg(self) -> CertScalar {
        CertScalar::neg(self)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    lo: String,
    hi: String,
    bits: u32,
}

impl Serialize for CertScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarRepr { lo: self.lo_string(), hi: self.hi_string(), bits: self.bits() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CertScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ScalarRepr::deserialize(d)?;
        if r.bits < 2 {
            return Err(D::Error::custom("precision must be at least 2 bits"));
        }
        // the emitted strings are shortest round-trip forms, which are exact under nearest rounding
        let lo = parse_float(&r.lo, r.bits, Round::Nearest)
            .ok_or_else(|| D::Error::custom(format!("bad float {:?}", r.lo)))?;
        let hi = parse_float(&r.hi, r.bits, Round::Nearest)
            .ok_or_else(|| D::Error::custom(format!("bad float {:?}", r.hi)))?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(D::Error::custom("interval bounds out of order"));
        }
        Ok(CertScalar { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> CertScalar {
        CertScalar::from_bounds(Float::with_val(64, lo), Float::with_val(64, hi))
    }

    #[test]
    fn mul_sign_cases() {
        let r = iv(-1.0, 2.0).mul(&iv(-3.0, 4.0));
        assert_eq!(r.lo().to_f64(), -6.0);
        assert_eq!(r.hi().to_f64(), 8.0);
        let s = iv(-2.0, -1.0).sqr();
        assert_eq!((s.lo().to_f64(), s.hi().to_f64()), (1.0, 4.0));
        let z = iv(-2.0, 1.0).sqr();
        assert_eq!((z.lo().to_f64(), z.hi().to_f64()), (0.0, 4.0));
    }

    #[test]
    fn division_by_zero_interval_is_entire() {
        let r = iv(1.0, 1.0).div(&iv(-1.0, 1.0));
        assert!(!r.is_finite());
    }

    #[test]
    fn outward_rounding_contains_third() {
        let third = CertScalar::from_i64(1, 64).div(&CertScalar::from_i64(3, 64));
        assert!(third.lo() < third.hi());
        let hp = Float::with_val(512, 1) / 3u32;
        assert!(*third.lo() <= hp && hp <= *third.hi());
    }

    #[test]
    fn serde_round_trip_exact() {
        let x = CertScalar::pi(300);
        let s = serde_json::to_string(&x).unwrap();
        let y: CertScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(y.bits(), 300);
        let e = CertScalar::entire(64);
        let t: CertScalar = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert!(!t.is_finite());
    }

    #[test]
    fn sqrt_of_straddling_interval() {
        let r = iv(-1e-30, 4.0).sqrt();
        assert_eq!(r.lo().to_f64(), 0.0);
        assert_eq!(r.hi().to_f64(), 2.0);
    }
}
