use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A signed dyadic rational `num / 2^exp`, kept reduced (odd numerator or zero with `exp = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: Integer,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: Integer, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.reduce();
        d
    }

    pub fn zero() -> Self {
        Dyadic { num: Integer::new(), exp: 0 }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic { num: Integer::from(1), exp: k }
    }

    pub fn numerator(&self) -> &Integer {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.num.find_one(0).unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    fn aligned(&self, other: &Dyadic) -> (Integer, Integer, u32) {
        let exp = self.exp.max(other.exp);
        let a = Integer::from(&self.num << (exp - self.exp));
        let b = Integer::from(&other.num << (exp - other.exp));
        (a, b, exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(other);
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(other);
        Dyadic::new(a - b, exp)
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: u32) -> Dyadic {
        if k <= self.exp {
            Dyadic::new(self.num.clone(), self.exp - k)
        } else {
            Dyadic::new(Integer::from(&self.num << (k - self.exp)), 0)
        }
    }

    /// Representative of `self mod m` in `[0, m)`, for `m = 2^k`, `k` may be 0.
    pub fn rem_pow2(&self, k: u32) -> Dyadic {
        // modulus 2^k expressed with denominator 2^exp
        let modulus = Integer::from(1) << (self.exp + k);
        let mut r = Integer::from(&self.num % &modulus);
        if r < 0 {
            r += &modulus;
        }
        Dyadic::new(r, self.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

/// A point `e^{2πit}` of the unit circle with `t = numerator / 2^log2_denominator ∈ [0, 1)`.
///
/// The representation is reduced, so structural equality is exact equality of points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Angle {
    num: Integer,
    log2_den: u32,
}

impl Angle {
    /// The point `1`.
    pub fn zero() -> Self {
        Angle { num: Integer::new(), log2_den: 0 }
    }

    /// Reduced angle congruent to `p / 2^q` modulo 1.
    pub fn normalize(p: impl Into<Integer>, q: u32) -> Self {
        let d = Dyadic::new(p.into(), q).rem_pow2(0);
        Angle { num: d.num, log2_den: d.exp }
    }

    pub fn from_dyadic(d: &Dyadic) -> Self {
        let r = d.rem_pow2(0);
        Angle { num: r.num, log2_den: r.exp }
    }

    pub fn numerator(&self) -> &Integer {
        &self.num
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn as_dyadic(&self) -> Dyadic {
        Dyadic { num: self.num.clone(), exp: self.log2_den }
    }

    /// `self + 2^-m` reduced modulo 1.
    pub fn offset(&self, m: u32) -> Angle {
        Angle::from_dyadic(&self.as_dyadic().add(&Dyadic::pow2_neg(m)))
    }

    pub fn add(&self, other: &Angle) -> Angle {
        Angle::from_dyadic(&self.as_dyadic().add(&other.as_dyadic()))
    }

    /// Exact signed difference of the representatives, in `(-1, 1)`.
    pub fn diff(&self, other: &Angle) -> Dyadic {
        self.as_dyadic().sub(&other.as_dyadic())
    }

    /// Exact sum of the representatives, in `[0, 2)`.
    pub fn sum(&self, other: &Angle) -> Dyadic {
        self.as_dyadic().add(&other.as_dyadic())
    }

    /// Order of `e^{2πit}` as a root of unity: `2^log2_den`.
    pub fn root_order(&self) -> Integer {
        Integer::from(1) << self.log2_den
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.log2_den)
    }
}

/// Parses `p/2^q`, `p/D` with `D` a power of two, or a bare integer `p`.
impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("angle {s:?}: expected p/2^q or p/D with D a power of two"));
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            None => (s, None),
            Some((p, d)) => (p.trim(), Some(d.trim())),
        };
        let p = Integer::from_str(p).map_err(|_| bad())?;
        let q = match q {
            None => 0,
            Some(d) => {
                if let Some(e) = d.strip_prefix("2^") {
                    e.parse::<u32>().map_err(|_| bad())?
                } else {
                    let den = Integer::from_str(d).map_err(|_| bad())?;
                    if den <= 0 || !den.is_power_of_two() {
                        return Err(bad());
                    }
                    den.significant_bits() - 1
                }
            }
        };
        Ok(Angle::normalize(p, q))
    }
}

#[derive(Serialize, Deserialize)]
struct AngleRepr {
    num: String,
    den_pow2: u32,
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AngleRepr { num: self.num.to_string(), den_pow2: self.log2_den }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AngleRepr::deserialize(d)?;
        let num = Integer::from_str(&r.num).map_err(D::Error::custom)?;
        let a = Angle::normalize(num.clone(), r.den_pow2);
        if a.num != num || a.log2_den != r.den_pow2 {
            return Err(D::Error::custom(format!("angle {}/2^{} is not in reduced form", r.num, r.den_pow2)));
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(Angle::normalize(0, 0), Angle::zero());
        let half = Angle::normalize(4, 3);
        assert_eq!((half.numerator().to_u32().unwrap(), half.log2_denominator()), (1, 1));
        let eighth = Angle::normalize(9, 3);
        assert_eq!((eighth.numerator().to_u32().unwrap(), eighth.log2_denominator()), (1, 3));
    }

    #[test]
    fn normalize_negative_and_integer_inputs() {
        assert_eq!(Angle::normalize(-1, 2), Angle::normalize(3, 2));
        assert_eq!(Angle::normalize(5, 0), Angle::zero());
        assert_eq!(Angle::normalize(16, 4), Angle::zero());
    }

    #[test]
    fn parse_forms() {
        let a: Angle = "1/64".parse().unwrap();
        assert_eq!(a, Angle::normalize(1, 6));
        let b: Angle = "3/2^5".parse().unwrap();
        assert_eq!(b, Angle::normalize(3, 5));
        assert!("1/3".parse::<Angle>().is_err());
        assert!("x/4".parse::<Angle>().is_err());
    }

    #[test]
    fn offset_and_diff_are_exact() {
        let a = Angle::normalize(1, 6);
        let b = a.offset(200);
        assert_ne!(a, b);
        assert_eq!(b.diff(&a), Dyadic::pow2_neg(200));
        assert_eq!(Angle::normalize(3, 2).offset(2), Angle::zero());
    }

    #[test]
    fn serde_rejects_unreduced() {
        let ok: Angle = serde_json::from_str(r#"{"num":"3","den_pow2":3}"#).unwrap();
        assert_eq!(ok, Angle::normalize(3, 3));
        assert!(serde_json::from_str::<Angle>(r#"{"num":"2","den_pow2":3}"#).is_err());
        assert!(serde_json::from_str::<Angle>(r#"{"num":"9","den_pow2":3}"#).is_err());
    }

    #[test]
    fn dyadic_rem_and_order() {
        let d = Dyadic::new(Integer::from(-3), 1);
        assert_eq!(d.rem_pow2(1), Dyadic::new(Integer::from(1), 1));
        assert!(Dyadic::pow2_neg(3) < Dyadic::pow2_neg(2));
        assert_eq!(Dyadic::new(Integer::from(6), 2), Dyadic::new(Integer::from(3), 1));
    }
}
