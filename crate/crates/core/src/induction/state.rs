use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::j_of;
use crate::cauchy::{CauchyNodes, CauchySystem};
use crate::error::{Error, Result};
use crate::exactcircle::{chord, Angle, CertComplex, CertScalar, PrecisionPolicy, MIN_BITS};

pub const STATE_VERSION: u32 = 1;

/// Identifier of the only shipped j-function: concatenated blocks `(1),(1,2),(1,2,3),…`.
pub const J_MODE_BLOCK: &str = "block-triangular";

/// Margin names every step `n ≥ 2` must carry.
pub const STEP_MARGINS: [&str; 11] = ["(a)", "(b)", "(c)", "(d)", "(e)", "(f)", "(g)", "(h)", "(i)", "(j)", "(k)"];

/// Margin names the seed step carries.
pub const SEED_MARGINS: [&str; 3] = ["seed", "(3)", "(4)"];

/// Offsets `2^-m` are tried for `m = m0, m0+1, …, max_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub m0: u32,
    pub max_exp: u32,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { m0: 1, max_exp: 1 << 17 }
    }
}

/// One committed step of the construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepData {
    pub n: usize,
    pub j_n: usize,
    pub lambda_n: Angle,
    pub mu_n: Angle,
    /// `m` with `λₙ = μ_{j(n)} + 2^-m`; absent for the seed step.
    pub lambda_offset_exp: Option<u32>,
    /// `m′` with `μₙ = λₙ + 2^-m′`; absent for the seed step.
    pub mu_offset_exp: Option<u32>,
    pub a_n: CertScalar,
    /// `b⁽ⁿ⁾ = (b₁⁽ⁿ⁾, …, bₙ⁽ⁿ⁾)`.
    pub b_n: Vec<CertComplex>,
    /// Zero for the seed step.
    pub epsilon_n: CertScalar,
    #[serde(rename = "C_n")]
    pub c_n: CertScalar,
    /// Upper bound on `‖Mₙ⁻¹‖₂`.
    #[serde(rename = "B_n")]
    pub b_norm: CertScalar,
    pub margins: BTreeMap<String, CertScalar>,
}

/// The sequences built so far, plus everything needed to extend or re-check them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionState {
    pub version: u32,
    pub precision_policy: PrecisionPolicy,
    /// Precision at which every `aₙ` and `b⁽ⁿ⁾` enclosure was computed.
    pub working_bits: u32,
    pub j_mode: String,
    /// Uniform eigenvector-norm constant `2 + ‖u₁⁽¹⁾‖`.
    pub kappa: CertScalar,
    pub search: SearchLimits,
    pub steps: Vec<StepData>,
}

impl ConstructionState {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    /// Step `n` (1-based).
    pub fn step(&self, n: usize) -> &StepData {
        &self.steps[n - 1]
    }

    pub fn mu(&self) -> Vec<Angle> {
        self.steps.iter().map(|s| s.mu_n.clone()).collect()
    }

    pub fn lambda(&self) -> Vec<Angle> {
        self.steps.iter().map(|s| s.lambda_n.clone()).collect()
    }

    pub fn a(&self) -> Vec<CertScalar> {
        self.steps.iter().map(|s| s.a_n.clone()).collect()
    }

    /// Node set of the first `r` steps; fails on a collision.
    pub fn nodes(&self, r: usize) -> Result<CauchyNodes> {
        CauchyNodes::new(
            self.steps[..r].iter().map(|s| s.mu_n.clone()).collect(),
            self.steps[..r].iter().map(|s| s.lambda_n.clone()).collect(),
        )
    }

    /// Difference table of all committed nodes at `bits`, without a distinctness check.
    pub fn system(&self, bits: u32) -> CauchySystem {
        self.steps.iter().fold(CauchySystem::empty(bits), |sys, s| sys.push(&s.mu_n, &s.lambda_n))
    }

    /// Compact serialization used for hashing.
    pub fn canonical_json(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("state serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serializes")
    }

    /// Lowercase hex SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json()))
    }

    /// Parse and structurally validate a state document.
    pub fn from_json(text: &str) -> Result<Self> {
        let state: ConstructionState =
            serde_json::from_str(text).map_err(|e| Error::CorruptState(format!("unreadable state: {e}")))?;
        state.validate()?;
        Ok(state)
    }

    /// Structural checks only. Numeric properties are the certificate's business,
    /// so a tampered value surfaces as a failing check rather than a load error.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::CorruptState(m));
        if self.version != STATE_VERSION {
            return bad(format!("unsupported state version {}", self.version));
        }
        if self.j_mode != J_MODE_BLOCK {
            return bad(format!("unknown j_mode {:?}", self.j_mode));
        }
        let p = self.precision_policy;
        if p.initial_bits < MIN_BITS || p.initial_bits > p.ceiling_bits {
            return bad(format!("precision policy {}..{} is not a valid range", p.initial_bits, p.ceiling_bits));
        }
        if self.working_bits < p.initial_bits || self.working_bits > p.ceiling_bits {
            return bad(format!("working precision {} outside policy range", self.working_bits));
        }
        if self.search.m0 == 0 || self.search.m0 > self.search.max_exp {
            return bad("search limits out of order".into());
        }
        if self.steps.is_empty() {
            return bad("state has no steps".into());
        }
        for (idx, s) in self.steps.iter().enumerate() {
            let n = idx + 1;
            if s.n != n {
                return bad(format!("step at position {n} is labelled {}", s.n));
            }
            if s.j_n != j_of(n) {
                return bad(format!("step {n} records j = {} but j({n}) = {}", s.j_n, j_of(n)));
            }
            if s.b_n.len() != n {
                return bad(format!("step {n} has {} coefficients in b", s.b_n.len()));
            }
            let required: &[&str] = if n == 1 { &SEED_MARGINS } else { &STEP_MARGINS };
            for name in required {
                match s.margins.get(*name) {
                    Some(m) if m.is_finite() && *m.lo() > 0 => {}
                    Some(_) => return bad(format!("step {n} margin {name} is not positive")),
                    None => return bad(format!("step {n} lacks margin {name}")),
                }
            }
            let offsets_present = s.lambda_offset_exp.is_some() && s.mu_offset_exp.is_some();
            if (n == 1) == offsets_present {
                return bad(format!("step {n} offset exponents inconsistent with its index"));
            }
        }
        Ok(())
    }

    /// The same construction with every `aₙ`, `b⁽ⁿ⁾` recomputed at `bits`.
    ///
    /// Angles, `ε`, `C`, `B`, `κ` and margins are stored as exact short dyadics and
    /// stay valid at any precision, so they are kept.
    pub fn refined(&self, bits: u32) -> Result<Self> {
        let sys = self.system(bits);
        let mut out = self.clone();
        out.working_bits = bits;
        let mut a = Vec::with_capacity(self.depth());
        for (idx, s) in out.steps.iter_mut().enumerate() {
            let n = idx + 1;
            s.a_n = step_a(n, &s.mu_n, &s.lambda_n, bits);
            a.push(s.a_n.clone());
            s.b_n = coefficients_from(&sys.leading(n), &a);
            if !s.b_n.iter().all(CertComplex::is_finite) {
                return Err(Error::Undecided { what: format!("b⁽{n}⁾ not finite"), bits });
            }
        }
        Ok(out)
    }
}

/// `a₁ = 1/4`; `aₙ = 2^{-(n+1)}·|μₙ − λₙ|`.
pub(crate) fn step_a(n: usize, mu: &Angle, lambda: &Angle, bits: u32) -> CertScalar {
    if n == 1 {
        CertScalar::pow2(-2, bits)
    } else {
        chord(mu, lambda, bits).mul_pow2(-(n as i32 + 1))
    }
}

/// `bᵢ = conj(cᵢ / aᵢ)` with `c = Mₙ⁻¹·𝟙`.
pub(crate) fn coefficients_from(sys: &CauchySystem, a: &[CertScalar]) -> Vec<CertComplex> {
    sys.solve_ones().iter().zip(a).map(|(c, ai)| CertComplex::new(c.re.div(ai), c.im.div(ai).neg())).collect()
}
