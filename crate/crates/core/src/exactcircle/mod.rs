//! Exact unit-circle points and certified scalar arithmetic.
//!
//! Every unimodular number is `e^{2πit}` for a dyadic `t = p/2^q`, so equality
//! of points is decided exactly, and every real or complex quantity derived
//! from them is an outward-rounded interval at a chosen binary precision.

mod angle;
mod complex;
mod refine;
mod scalar;
mod trig;
mod verdict;

pub use angle::{Angle, Dyadic};
pub use complex::{vec_norm, CertComplex};
pub use refine::{Enclosure, Refinable};
pub use scalar::{CertScalar, MIN_BITS};
pub use trig::{chord, sin_cos_pi, unit_diff, unit_value};
pub use verdict::{cert_le, cert_lt, Bound, Verdict};

/// Initial/ceiling precision pair used by a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub ceiling_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial_bits: 4096, ceiling_bits: 1 << 20 }
    }
}

impl PrecisionPolicy {
    /// Next precision after `bits`, or `PrecisionExhausted`.
    pub fn escalate(&self, bits: u32) -> crate::Result<u32> {
        let next = bits.saturating_mul(2);
        if next > self.ceiling_bits {
            Err(crate::Error::PrecisionExhausted { requested: next, ceiling: self.ceiling_bits })
        } else {
            Ok(next)
        }
    }
}
