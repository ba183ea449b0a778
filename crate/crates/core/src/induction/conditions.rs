//! The inequalities (a)–(k) that govern the choice of `ε`, `λₙ` and `μₙ`,
//! evaluated from the data of steps `1..n−1`.
//!
//! Differences `1/(μ_{j(n)}−λⱼ) − 1/(x−λⱼ)` are always formed as
//! `(x−μ_{j(n)}) / ((μ_{j(n)}−λⱼ)(x−λⱼ))`, so candidates arbitrarily close to
//! `μ_{j(n)}` are evaluated without cancellation.

use super::state::StepData;
use crate::exactcircle::{chord, unit_diff, Angle, Bound, CertComplex, CertScalar};

/// `∏_{j=1}^n (1 + 2^{-j})`.
pub fn growth_product(n: usize, bits: u32) -> CertScalar {
    let one = CertScalar::from_i64(1, bits);
    (1..=n).fold(one.clone(), |acc, j| acc.mul(&one.add(&CertScalar::pow2(-(j as i32), bits))))
}

/// `4^{-(n+1)}`.
pub fn quarter_power(n: usize, bits: u32) -> CertScalar {
    CertScalar::pow2(-2 * (n as i32 + 1), bits)
}

/// Everything about steps `1..n−1` that conditions at step `n` consume.
#[derive(Clone, Debug)]
pub struct StepContext {
    pub n: usize,
    /// `j(n)`, 1-based.
    pub jn: usize,
    pub bits: u32,
    pub mu: Vec<Angle>,
    pub lambda: Vec<Angle>,
    pub a: Vec<CertScalar>,
    /// `cⱼ = aⱼ·conj(bⱼ⁽ⁿ⁻¹⁾)`.
    pub c: Vec<CertComplex>,
    /// `μ_{j(n)} − λⱼ`.
    pub d: Vec<CertComplex>,
    /// `1 − Σⱼ cⱼ/(μ_{j(n)} − λⱼ)`; zero in exact arithmetic.
    pub r_e: CertComplex,
    /// `∏_{j≤n}(1+2^{-j})`.
    pub growth: CertScalar,
    /// `4^{-(n+1)}`.
    pub quarter: CertScalar,
}

/// Per-candidate quantities shared by the three conditions at a point `x`.
pub struct Probe {
    /// `x − λⱼ`, `j < n`.
    pub diffs: Vec<CertComplex>,
    /// `x − μ_{j(n)}`.
    pub delta: CertComplex,
}

impl StepContext {
    /// Context for step `n = prev.len() + 1`.
    pub fn new(prev: &[StepData], jn: usize, bits: u32) -> Self {
        let n = prev.len() + 1;
        let mu: Vec<Angle> = prev.iter().map(|s| s.mu_n.clone()).collect();
        let lambda: Vec<Angle> = prev.iter().map(|s| s.lambda_n.clone()).collect();
        let a: Vec<CertScalar> = prev.iter().map(|s| s.a_n.with_bits(bits)).collect();
        let last = &prev[n - 2].b_n;
        let c: Vec<CertComplex> = a.iter().zip(last).map(|(aj, bj)| bj.conj().with_bits(bits).scale(aj)).collect();
        let anchor = &mu[jn - 1];
        let d: Vec<CertComplex> = lambda.iter().map(|l| unit_diff(anchor, l, bits)).collect();
        let one = CertComplex::one(bits);
        let r_e = c.iter().zip(&d).fold(one, |acc, (cj, dj)| acc.sub(&cj.div(dj)));
        StepContext {
            n,
            jn,
            bits,
            mu,
            lambda,
            a,
            c,
            d,
            r_e,
            growth: growth_product(n, bits),
            quarter: quarter_power(n, bits),
        }
    }

    /// The same context with every enclosure rounded outward to `bits`.
    pub fn cast(&self, bits: u32) -> Self {
        StepContext {
            bits,
            a: self.a.iter().map(|x| x.with_bits(bits)).collect(),
            c: self.c.iter().map(|x| x.with_bits(bits)).collect(),
            d: self.d.iter().map(|x| x.with_bits(bits)).collect(),
            r_e: self.r_e.with_bits(bits),
            growth: self.growth.with_bits(bits),
            quarter: self.quarter.with_bits(bits),
            ..self.clone()
        }
    }

    pub fn anchor(&self) -> &Angle {
        &self.mu[self.jn - 1]
    }

    pub fn probe(&self, x: &Angle) -> Probe {
        Probe {
            diffs: self.lambda.iter().map(|l| unit_diff(x, l, self.bits)).collect(),
            delta: unit_diff(x, self.anchor(), self.bits),
        }
    }

    /// `(1/(μ_{j(n)}−λⱼ) − 1/(x−λⱼ))` for every `j < n`.
    fn shifts(&self, p: &Probe) -> Vec<CertComplex> {
        self.d.iter().zip(&p.diffs).map(|(dj, xj)| p.delta.div(&dj.mul(xj))).collect()
    }

    /// Conditions (d)/(g): `|1 − Σⱼ cⱼ/(x−λⱼ)| < ε`.
    pub fn secular_gap(&self, p: &Probe, eps: &CertScalar) -> Bound {
        let sum = self.c.iter().zip(self.shifts(p)).fold(self.r_e.clone(), |acc, (cj, sj)| acc.add(&cj.mul(&sj)));
        Bound::lt(&sum.abs(), eps)
    }

    /// Conditions (e)/(h): `∏(1+2^{-j})·(Σⱼ 1/|x−λⱼ|²)^{1/2}·ε < 4^{-(n+1)}`.
    pub fn pole_sum(&self, p: &Probe, eps: &CertScalar) -> Bound {
        let s = p.diffs.iter().fold(CertScalar::zero(self.bits), |acc, z| acc.add(&z.norm_sqr().recip()));
        Bound::lt(&self.growth.mul(&s.sqrt()).mul(eps), &self.quarter)
    }

    /// Conditions (f)/(i): `(Σⱼ aⱼ²·|1/(μ_{j(n)}−λⱼ) − 1/(x−λⱼ)|²)^{1/2} < ε`.
    pub fn eigvec_shift(&self, p: &Probe, eps: &CertScalar) -> Bound {
        let s = self
            .a
            .iter()
            .zip(self.shifts(p))
            .fold(CertScalar::zero(self.bits), |acc, (aj, sj)| acc.add(&aj.sqr().mul(&sj.norm_sqr())));
        Bound::lt(&s.sqrt(), eps)
    }

    /// Coefficients `K_b`, `K_c` with (b) ⟺ `K_b·ε < 4^{-(n+1)}` and (c) ⟺ `K_c·ε < 2^{-n}`.
    fn epsilon_factors(&self) -> (CertScalar, CertScalar) {
        let bits = self.bits;
        let inv_sq = self.d.iter().fold(CertScalar::zero(bits), |acc, z| acc.add(&z.norm_sqr().recip()));
        let k_b = self.growth.mul(&inv_sq.sqrt());
        let min_a = self.a.iter().cloned().reduce(|x, y| x.min(&y)).expect("at least one earlier step");
        let a_norm = self.a.iter().fold(CertScalar::zero(bits), |acc, x| acc.add(&x.sqr())).sqrt();
        let k_c = CertScalar::from_i64(1, bits).add(&a_norm).mul(&self.growth).div(&min_a);
        (k_b, k_c)
    }

    /// Right-hand sides of (a), (b), (c) solved for `ε`.
    pub fn epsilon_caps(&self) -> [CertScalar; 3] {
        let (k_b, k_c) = self.epsilon_factors();
        [self.quarter.clone(), self.quarter.div(&k_b), CertScalar::pow2(-(self.n as i32), self.bits).div(&k_c)]
    }

    /// Conditions (a), (b), (c) for a given `ε`.
    pub fn epsilon_bounds(&self, eps: &CertScalar) -> [Bound; 3] {
        let (k_b, k_c) = self.epsilon_factors();
        let a = Bound::lt(&CertScalar::zero(self.bits), eps).and(Bound::lt(eps, &self.quarter));
        let b = Bound::lt(&k_b.mul(eps), &self.quarter);
        let c = Bound::lt(&k_c.mul(eps), &CertScalar::pow2(-(self.n as i32), self.bits));
        [a, b, c]
    }

    /// Condition (j): `|μₙ−λₙ| / |μᵢ−λₙ| < 2^{-n}/C_{n−1}` for every `i < n`.
    ///
    /// `lambda_chords[i] = |μᵢ − λₙ|`.
    pub fn ratio_bound(&self, gap: &CertScalar, lambda_chords: &[CertScalar], c_prev: &CertScalar) -> Bound {
        let rhs = CertScalar::pow2(-(self.n as i32), self.bits).div(c_prev);
        Bound::all(lambda_chords.iter().map(|ch| Bound::lt(&gap.div(ch), &rhs))).expect("n ≥ 2")
    }

    /// `|μᵢ − λₙ|` for `i < n`.
    pub fn lambda_chords(&self, lambda_n: &Angle) -> Vec<CertScalar> {
        self.mu.iter().map(|m| chord(m, lambda_n, self.bits)).collect()
    }
}
