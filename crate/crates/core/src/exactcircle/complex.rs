use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::CertScalar;

/// Rectangular complex interval; each component encloses the exact component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertComplex {
    pub re: CertScalar,
    pub im: CertScalar,
}

impl CertComplex {
    pub fn new(re: CertScalar, im: CertScalar) -> Self {
        CertComplex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        CertComplex { re: CertScalar::zero(bits), im: CertScalar::zero(bits) }
    }

    pub fn one(bits: u32) -> Self {
        CertComplex { re: CertScalar::from_i64(1, bits), im: CertScalar::zero(bits) }
    }

    pub fn real(re: CertScalar) -> Self {
        let bits = re.bits();
        CertComplex { re, im: CertScalar::zero(bits) }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits().max(self.im.bits())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, other: &CertComplex) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        CertComplex { re: self.re.with_bits(bits), im: self.im.with_bits(bits) }
    }

    pub fn intersect(&self, other: &CertComplex) -> Self {
        CertComplex { re: self.re.intersect(&other.re), im: self.im.intersect(&other.im) }
    }

    pub fn add(&self, o: &CertComplex) -> Self {
        CertComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CertComplex) -> Self {
        CertComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        CertComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        CertComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CertComplex) -> Self {
        CertComplex { re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)), im: self.re.mul(&o.im).add(&self.im.mul(&o.re)) }
    }

    pub fn scale(&self, s: &CertScalar) -> Self {
        CertComplex { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn mul_pow2(&self, k: i32) -> Self {
        CertComplex { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> CertScalar {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> CertScalar {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let conj = self.conj();
        CertComplex { re: conj.re.div(&d), im: conj.im.div(&d) }
    }

    pub fn div(&self, o: &CertComplex) -> Self {
        self.mul(&o.recip())
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a CertComplex>, bits: u32) -> Self {
        items.into_iter().fold(CertComplex::zero(bits), |acc, x| acc.add(x))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for CertComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[CertComplex], bits: u32) -> CertScalar {
    v.iter().fold(CertScalar::zero(bits), |acc, z| acc.add(&z.norm_sqr())).sqrt()
}
