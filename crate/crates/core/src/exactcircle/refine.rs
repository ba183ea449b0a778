use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::complex::CertComplex;
use super::scalar::CertScalar;

/// Certified values that can be narrowed by intersection.
pub trait Enclosure: Clone {
    fn intersect_with(&self, other: &Self) -> Self;
}

impl Enclosure for CertScalar {
    fn intersect_with(&self, other: &Self) -> Self {
        self.intersect(other)
    }
}

impl Enclosure for CertComplex {
    fn intersect_with(&self, other: &Self) -> Self {
        self.intersect(other)
    }
}

impl<T: Enclosure> Enclosure for Vec<T> {
    fn intersect_with(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a.intersect_with(b)).collect()
    }
}

/// A certified value paired with the exact recipe that produced it, so it can
/// be recomputed at a higher precision.
#[derive(Clone)]
pub struct Refinable<T> {
    value: T,
    bits: u32,
    source: Arc<dyn Fn(u32) -> T + Send + Sync>,
}

impl<T: Enclosure> Refinable<T> {
    pub fn new(bits: u32, source: impl Fn(u32) -> T + Send + Sync + 'static) -> Self {
        let value = source(bits);
        Refinable { value, bits, source: Arc::new(source) }
    }

    pub fn value(&self) -> &T {
        &self.value
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Recompute at `new_bits` and intersect with the current enclosure, so the
    /// result is never wider than before.
    pub fn refine(&self, new_bits: u32, ceiling: u32) -> Result<Self> {
        if new_bits > ceiling {
            return Err(Error::PrecisionExhausted { requested: new_bits, ceiling });
        }
        if new_bits <= self.bits {
            return Err(Error::InvalidArgument(format!(
                "refine target {new_bits} bits is not above current {} bits",
                self.bits
            )));
        }
        let fresh = (self.source)(new_bits);
        Ok(Refinable { value: fresh.intersect_with(&self.value), bits: new_bits, source: Arc::clone(&self.source) })
    }
}

impl<T: fmt::Debug> fmt::Debug for Refinable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Refinable").field("value", &self.value).field("bits", &self.bits).finish()
    }
}
