//! Finite sections `T_N x = Σ λⱼxⱼeⱼ + ⟨x, b⁽ᴺ⁾⟩a⁽ᴺ⁾` of the constructed operator,
//! orbits under them, eigen-residuals, and an eigenvalue oracle that never
//! looks at the constructed `μᵢ` until the final pairing.

mod spectrum;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::cauchy::{CertMatrix, Provenance};
use crate::error::{Error, Result};
use crate::exactcircle::{unit_diff, unit_value, vec_norm, Angle, CertComplex, CertScalar};
use crate::induction::ConstructionState;

pub use spectrum::{brute_spectrum, char_poly, pairing_error, MAX_ORACLE_DIM, ORACLE_TOLERANCE};

/// Rank-one form of `T_N`: diagonal angles plus the vectors `a`, `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorTruncation {
    #[serde(rename = "N")]
    pub n: usize,
    pub diag: Vec<Angle>,
    pub a: Vec<CertComplex>,
    pub b: Vec<CertComplex>,
}

/// `T_N` built from `λ₁..λ_N`, `a₁..a_N` and `b⁽ᴺ⁾`.
pub fn assemble(state: &ConstructionState, n: usize) -> Result<OperatorTruncation> {
    check_dim(state, n)?;
    Ok(OperatorTruncation {
        n,
        diag: state.lambda()[..n].to_vec(),
        a: state.steps[..n].iter().map(|s| CertComplex::real(s.a_n.clone())).collect(),
        b: state.step(n).b_n.clone(),
    })
}

fn check_dim(state: &ConstructionState, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if n > state.depth() {
        return Err(Error::DepthExceeded { requested: n, depth: state.depth() });
    }
    Ok(())
}

impl OperatorTruncation {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The unperturbed diagonal part, for diagnostics.
    pub fn without_perturbation(&self) -> Self {
        let bits = self.b.first().map_or(64, CertComplex::bits);
        OperatorTruncation { b: vec![CertComplex::zero(bits); self.n], ..self.clone() }
    }

    /// `⟨x, b⟩ = Σ xⱼ b̄ⱼ`.
    pub fn pairing(&self, x: &[CertComplex], bits: u32) -> CertComplex {
        let terms: Vec<CertComplex> = x.iter().zip(&self.b).map(|(xj, bj)| xj.mul(&bj.conj())).collect();
        CertComplex::sum(&terms, bits)
    }

    pub fn apply(&self, x: &[CertComplex], bits: u32) -> Result<Vec<CertComplex>> {
        if x.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} for a {}-dimensional operator",
                x.len(),
                self.n
            )));
        }
        let s = self.pairing(x, bits);
        Ok(self
            .diag
            .iter()
            .zip(x)
            .zip(&self.a)
            .map(|((l, xl), al)| unit_value(l, bits).mul(xl).add(&al.mul(&s)))
            .collect())
    }

    /// Dense matrix `Tᵢⱼ = λᵢδᵢⱼ + aᵢb̄ⱼ`.
    pub fn dense(&self, bits: u32) -> CertMatrix {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut t = self.a[i].mul(&self.b[j].conj()).with_bits(bits);
                if i == j {
                    t = t.add(&unit_value(&self.diag[i], bits));
                }
                entries.push(t);
            }
        }
        CertMatrix::new(self.n, entries, Provenance::Direct)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("operator serializes")
    }
}

/// `uᵢ⁽ᵏ⁾ = Σ_{l≤k} a_l/(μᵢ − λ_l) e_l`, zero-padded to length `len`; `i`, `k` 1-based.
pub fn eigenvector(state: &ConstructionState, i: usize, k: usize, len: usize, bits: u32) -> Vec<CertComplex> {
    let mu = &state.step(i).mu_n;
    (0..len)
        .map(|l| {
            if l < k {
                let s = &state.steps[l];
                unit_diff(mu, &s.lambda_n, bits).recip().scale(&s.a_n)
            } else {
                CertComplex::zero(bits)
            }
        })
        .collect()
}

/// All `uᵢ⁽ᴺ⁾`, `i ≤ N`.
pub fn eigenvectors(state: &ConstructionState, n: usize) -> Result<Vec<Vec<CertComplex>>> {
    check_dim(state, n)?;
    let bits = state.working_bits;
    Ok((1..=n).map(|i| eigenvector(state, i, n, n, bits)).collect())
}

/// `‖T_N uᵢ⁽ᴺ⁾ − μᵢuᵢ⁽ᴺ⁾‖`, evaluated by dense application.
pub fn eigen_residual(state: &ConstructionState, n: usize, i: usize) -> Result<CertScalar> {
    eigen_residual_of(state, n, n, i)
}

/// `‖T_N uᵢ⁽ᵏ⁾ − μᵢuᵢ⁽ᵏ⁾‖` for `i ≤ k ≤ N`.
pub fn eigen_residual_of(state: &ConstructionState, n: usize, k: usize, i: usize) -> Result<CertScalar> {
    check_dim(state, n)?;
    if i == 0 || i > k || k > n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ i ≤ k ≤ N, got i={i}, k={k}, N={n}")));
    }
    let bits = state.working_bits;
    let t = assemble(state, n)?;
    let u = eigenvector(state, i, k, n, bits);
    let tu = t.dense(bits).mul_vec(&u);
    let mu = unit_value(&state.step(i).mu_n, bits);
    let r: Vec<CertComplex> = tu.iter().zip(&u).map(|(x, y)| x.sub(&mu.mul(y))).collect();
    Ok(vec_norm(&r, bits))
}

/// `2^q` for the reduced angle `p/2^q`.
pub fn root_of_unity_order(angle: &Angle) -> Integer {
    angle.root_order()
}

/// Whether `e^{2πi·angle·k} = 1`, decided exactly.
pub fn power_is_one(angle: &Angle, k: &Integer) -> bool {
    let q = angle.log2_denominator();
    let prod = Integer::from(angle.numerator() * k);
    prod.is_divisible_2pow(q)
}

/// How orbit iterates are carried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Collapse to interval midpoints after every step.
    #[default]
    Midpoint,
    /// Keep full enclosures.
    Certified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    pub iter: usize,
    pub norm: f64,
    pub dists: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct OrbitTrace {
    pub start: Vec<CertComplex>,
    pub steps: usize,
    pub records: Vec<OrbitRecord>,
}

impl OrbitTrace {
    /// Header `iter,norm,dist_1,…,dist_k`, LF line endings.
    pub fn to_csv(&self) -> String {
        let k = self.records.first().map_or(0, |r| r.dists.len());
        let mut out = String::from("iter,norm");
        for t in 1..=k {
            out.push_str(&format!(",dist_{t}"));
        }
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!("{},{:e}", r.iter, r.norm));
            for d in &r.dists {
                out.push_str(&format!(",{d:e}"));
            }
            out.push('\n');
        }
        out
    }
}

fn midpoint(z: &CertComplex, bits: u32) -> CertComplex {
    let m = |s: &CertScalar| CertScalar::point(Float::with_val(bits, s.mid()));
    CertComplex::new(m(&z.re), m(&z.im))
}

/// Iterate `x ↦ T x` for `steps` steps, recording norms and distances to `targets`.
pub fn orbit(
    t: &OperatorTruncation,
    x0: &[CertComplex],
    steps: usize,
    targets: &[Vec<CertComplex>],
    bits: u32,
    mode: Arithmetic,
) -> Result<OrbitTrace> {
    if x0.len() != t.dim() || targets.iter().any(|v| v.len() != t.dim()) {
        return Err(Error::InvalidArgument(format!("orbit vectors must have length {}", t.dim())));
    }
    let norm0 = vec_norm(x0, bits);
    if norm0.hi().is_nan() || *norm0.hi() <= 0 {
        return Err(Error::InvalidArgument("start vector must be nonzero".into()));
    }
    let record = |iter: usize, x: &[CertComplex]| OrbitRecord {
        iter,
        norm: vec_norm(x, bits).to_f64(),
        dists: targets
            .iter()
            .map(|y| {
                let d: Vec<CertComplex> = x.iter().zip(y).map(|(p, q)| p.sub(q)).collect();
                vec_norm(&d, bits).to_f64()
            })
            .collect(),
    };
    let mut x: Vec<CertComplex> = x0.iter().map(|z| z.with_bits(bits)).collect();
    let mut records = vec![record(0, &x)];
    for iter in 1..=steps {
        x = t.apply(&x, bits)?;
        if mode == Arithmetic::Midpoint {
            x = x.iter().map(|z| midpoint(z, bits)).collect();
        }
        records.push(record(iter, &x));
    }
    Ok(OrbitTrace { start: x0.to_vec(), steps, records })
}

/// Start vectors: `e<k>`, `u<k>` (the eigenvector `u_k⁽ᴺ⁾`), `ones`, `random:<seed>`.
pub fn start_vector(spec: &str, state: &ConstructionState, n: usize) -> Result<Vec<CertComplex>> {
    check_dim(state, n)?;
    let bits = state.working_bits;
    let index = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => Ok(k),
            _ => Err(Error::InvalidArgument(format!("start index {s:?} must lie in 1..={n}"))),
        }
    };
    if spec == "ones" {
        return Ok(vec![CertComplex::one(bits); n]);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|_| Error::InvalidArgument(format!("bad seed in {spec:?}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..n)
            .map(|_| {
                let (re, im): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                CertComplex::new(CertScalar::from_f64(re, bits), CertScalar::from_f64(im, bits))
            })
            .collect());
    }
    if let Some(k) = spec.strip_prefix('e') {
        let k = index(k)?;
        return Ok((1..=n).map(|l| if l == k { CertComplex::one(bits) } else { CertComplex::zero(bits) }).collect());
    }
    if let Some(k) = spec.strip_prefix('u') {
        return Ok(eigenvector(state, index(k)?, n, n, bits));
    }
    Err(Error::InvalidArgument(format!("unknown start vector {spec:?}")))
}
