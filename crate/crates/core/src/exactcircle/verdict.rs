use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::CertScalar;

/// Three-valued outcome of a certified inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    /// Conjunction: any failure wins, then any undecided.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Holds,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        items.into_iter().fold(Verdict::Holds, Verdict::and)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Undecided => "UNDECIDED",
        })
    }
}

/// Strict `x < y`.
///
/// HOLDS needs `x.hi < y.lo`; FAILS needs `x.lo > y.hi` or both sides the same
/// point. Any infinite endpoint gives UNDECIDED.
pub fn cert_lt(x: &CertScalar, y: &CertScalar) -> Verdict {
    if !x.is_finite() || !y.is_finite() {
        return Verdict::Undecided;
    }
    if x.hi() < y.lo() {
        Verdict::Holds
    } else if x.lo() > y.hi() || (x.is_point() && y.is_point() && x.lo() == y.lo()) {
        Verdict::Fails
    } else {
        Verdict::Undecided
    }
}

/// Non-strict `x ≤ y`.
pub fn cert_le(x: &CertScalar, y: &CertScalar) -> Verdict {
    if !x.is_finite() || !y.is_finite() {
        return Verdict::Undecided;
    }
    if x.hi() <= y.lo() {
        Verdict::Holds
    } else if x.lo() > y.hi() {
        Verdict::Fails
    } else {
        Verdict::Undecided
    }
}

/// A strict inequality `lhs < rhs` together with its certified margin `rhs − lhs`.
#[derive(Clone, Debug)]
pub struct Bound {
    pub verdict: Verdict,
    pub margin: CertScalar,
}

impl Bound {
    pub fn lt(lhs: &CertScalar, rhs: &CertScalar) -> Self {
        Bound { verdict: cert_lt(lhs, rhs), margin: rhs.sub(lhs) }
    }

    pub fn le(lhs: &CertScalar, rhs: &CertScalar) -> Self {
        Bound { verdict: cert_le(lhs, rhs), margin: rhs.sub(lhs) }
    }

    /// Vacuous bound (empty index range).
    pub fn vacuous(margin: CertScalar) -> Self {
        Bound { verdict: Verdict::Holds, margin }
    }

    /// Combine two bounds: verdict conjunction, margin with the smaller lower end.
    pub fn and(self, other: Bound) -> Bound {
        let verdict = self.verdict.and(other.verdict);
        let margin = if other.margin.lo() < self.margin.lo() { other.margin } else { self.margin };
        Bound { verdict, margin }
    }

    pub fn all(items: impl IntoIterator<Item = Bound>) -> Option<Bound> {
        items.into_iter().reduce(Bound::and)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn iv(lo: f64, hi: f64) -> CertScalar {
        CertScalar::from_bounds(Float::with_val(64, lo), Float::with_val(64, hi))
    }

    #[test]
    fn cert_lt_examples() {
        assert_eq!(cert_lt(&iv(1.0, 1.0), &iv(2.0, 2.0)), Verdict::Holds);
        assert_eq!(cert_lt(&iv(2.0, 2.0), &iv(1.0, 1.0)), Verdict::Fails);
        assert_eq!(cert_lt(&iv(0.9, 1.1), &iv(1.0, 1.2)), Verdict::Undecided);
    }

    #[test]
    fn equal_points_fail_strictness() {
        assert_eq!(cert_lt(&iv(0.5, 0.5), &iv(0.5, 0.5)), Verdict::Fails);
        assert_eq!(cert_le(&iv(0.5, 0.5), &iv(0.5, 0.5)), Verdict::Holds);
    }

    #[test]
    fn sentinels_never_hold() {
        let inf = CertScalar::entire(64);
        assert_eq!(cert_lt(&iv(0.0, 0.0), &inf), Verdict::Undecided);
        assert_eq!(cert_lt(&inf, &iv(0.0, 0.0)), Verdict::Undecided);
    }

    #[test]
    fn bound_combination_keeps_tightest_margin() {
        let b = Bound::lt(&iv(1.0, 1.0), &iv(3.0, 3.0)).and(Bound::lt(&iv(1.0, 1.0), &iv(1.5, 1.5)));
        assert!(b.verdict.holds());
        assert_eq!(b.margin.lo().to_f64(), 0.5);
    }
}
