//! The inductive construction: a seed step, then for each `n ≥ 2` a choice of
//! `ε`, `λₙ` close to `μ_{j(n)}`, `μₙ` closer still to `λₙ`, and the
//! coefficients `aₙ`, `b⁽ⁿ⁾` forced by the eigenvalue equations (E).
//!
//! Candidates are `λₙ = μ_{j(n)} + 2^{-m}` and `μₙ = λₙ + 2^{-m′}` with `m`, `m′`
//! increasing from `m₀`. Each candidate is screened at low precision; only an
//! inconclusive screen is repeated at working precision. A verdict that stays
//! inconclusive there makes [`extend`] double the working precision and redo
//! the whole step.

pub mod conditions;
mod state;

use std::collections::BTreeMap;

pub use state::{ConstructionState, SearchLimits, StepData, J_MODE_BLOCK, SEED_MARGINS, STATE_VERSION, STEP_MARGINS};

use crate::cauchy::{opnorm_2to1_upper, opnorm_upper, CauchySystem};
use crate::certify;
use crate::error::{Error, Result};
use crate::exactcircle::{chord, Angle, Bound, CertComplex, CertScalar, PrecisionPolicy, Verdict};
use conditions::StepContext;
use state::{coefficients_from, step_a};

/// Precision used to screen search candidates.
pub const SCREEN_BITS: u32 = 128;

/// Significant bits kept in the stored constants `ε`, `Cₙ`, `Bₙ`, `κ` and in margins.
pub const STORED_BITS: u32 = 64;

/// `j(1) = 1`; for `n ≥ 2`, entry `n−1` of the concatenated blocks `(1),(1,2),(1,2,3),…`.
pub fn j_of(n: usize) -> usize {
    assert!(n >= 1, "j is defined on positive integers");
    if n == 1 {
        return 1;
    }
    let p = n - 1;
    let mut block = 1;
    while block * (block + 1) / 2 < p {
        block += 1;
    }
    p - block * (block - 1) / 2
}

fn margin(b: &Bound) -> CertScalar {
    b.margin.with_bits(STORED_BITS)
}

/// Seed step: `λ₁ = 1`, `a₁ = 1/4`, `b̄₁⁽¹⁾ = (μ₁ − λ₁)/a₁`.
pub fn step_one(mu1: &Angle, bits: u32) -> Result<StepData> {
    if mu1.is_zero() {
        return Err(Error::BadSeed("μ₁ must differ from λ₁ = 1".into()));
    }
    let lambda1 = Angle::zero();
    let gap = chord(mu1, &lambda1, bits);
    let seed = Bound::lt(&gap, &CertScalar::pow2(-3, bits));
    if !seed.verdict.holds() {
        return Err(Error::BadSeed(format!("|μ₁ − 1| = {gap} is not certified below 1/8")));
    }
    let a1 = step_a(1, mu1, &lambda1, bits);
    let sys = CauchySystem::empty(bits).push(mu1, &lambda1);
    let b = coefficients_from(&sys, std::slice::from_ref(&a1));
    let bound3 = Bound::lt(&a1, &CertScalar::pow2(-1, bits));
    let bound4 = Bound::lt(&b[0].abs(), &CertScalar::pow2(-1, bits));
    if !(bound3.verdict.holds() && bound4.verdict.holds()) {
        return Err(Error::BadSeed("seed coefficients violate the step-one bounds".into()));
    }
    let c1 = bound_c(None, &sys, std::slice::from_ref(&a1));
    let b_norm = opnorm_upper(&sys.inverse()).upper_point(STORED_BITS);
    let margins = BTreeMap::from([
        ("seed".to_string(), margin(&seed)),
        ("(3)".to_string(), margin(&bound3)),
        ("(4)".to_string(), margin(&bound4)),
    ]);
    Ok(StepData {
        n: 1,
        j_n: 1,
        lambda_n: lambda1,
        mu_n: mu1.clone(),
        lambda_offset_exp: None,
        mu_offset_exp: None,
        a_n: a1,
        b_n: b,
        epsilon_n: CertScalar::zero(STORED_BITS),
        c_n: c1,
        b_norm,
        margins,
    })
}

/// A fresh one-step state.
pub fn seed(mu1: &Angle, policy: PrecisionPolicy, search: SearchLimits) -> Result<ConstructionState> {
    if policy.initial_bits < crate::exactcircle::MIN_BITS || policy.initial_bits > policy.ceiling_bits {
        return Err(Error::InvalidArgument(format!(
            "initial precision {} must lie in [{}, {}]",
            policy.initial_bits,
            crate::exactcircle::MIN_BITS,
            policy.ceiling_bits
        )));
    }
    let bits = policy.initial_bits;
    let step = step_one(mu1, bits)?;
    // ‖u₁⁽¹⁾‖ = a₁/|μ₁ − λ₁|
    let u1 = step.a_n.div(&chord(&step.mu_n, &step.lambda_n, bits));
    let kappa = CertScalar::from_i64(2, bits).add(&u1).upper_point(STORED_BITS);
    Ok(ConstructionState {
        version: STATE_VERSION,
        precision_policy: policy,
        working_bits: bits,
        j_mode: J_MODE_BLOCK.to_string(),
        kappa,
        search,
        steps: vec![step],
    })
}

fn expect_next(state: &ConstructionState, n: usize) -> Result<()> {
    if n != state.depth() + 1 || n < 2 {
        return Err(Error::InvalidArgument(format!("step {n} cannot follow a state of depth {}", state.depth())));
    }
    Ok(())
}

fn context(state: &ConstructionState, n: usize) -> StepContext {
    StepContext::new(&state.steps[..n - 1], j_of(n), state.working_bits)
}

fn screen_of(full: &StepContext) -> Option<StepContext> {
    (full.bits > SCREEN_BITS).then(|| full.cast(SCREEN_BITS))
}

/// Decide a candidate: screening first, working precision only when the screen is inconclusive.
fn decide(
    full: &StepContext,
    screen: Option<&StepContext>,
    eval: impl Fn(&StepContext) -> Verdict,
    what: &str,
) -> Result<bool> {
    if let Some(s) = screen {
        match eval(s) {
            Verdict::Holds => return Ok(true),
            Verdict::Fails => return Ok(false),
            Verdict::Undecided => {}
        }
    }
    match eval(full) {
        Verdict::Holds => Ok(true),
        Verdict::Fails => Ok(false),
        Verdict::Undecided => Err(Error::Undecided { what: what.to_string(), bits: full.bits }),
    }
}

/// Run the checks in order, stopping at the first failure.
fn lazy_all(checks: &[&dyn Fn() -> Verdict]) -> Verdict {
    let mut acc = Verdict::Holds;
    for c in checks {
        let v = c();
        if v == Verdict::Fails {
            return Verdict::Fails;
        }
        acc = acc.and(v);
    }
    acc
}

fn require_holds(bounds: &[(&str, &Bound)], bits: u32) -> Result<BTreeMap<String, CertScalar>> {
    let mut out = BTreeMap::new();
    for (name, b) in bounds {
        if !b.verdict.holds() {
            return Err(Error::Undecided { what: format!("condition {name} at the accepted candidate"), bits });
        }
        out.insert(name.to_string(), margin(b));
    }
    Ok(out)
}

/// `ε = ½ ·` (certified lower bound of the smallest cap from (a), (b), (c)), rounded down to a short dyadic.
pub fn choose_epsilon(state: &ConstructionState, n: usize) -> Result<CertScalar> {
    expect_next(state, n)?;
    let ctx = context(state, n);
    let caps = ctx.epsilon_caps();
    let low = caps.iter().map(|c| c.lo().clone()).reduce(|x, y| if x <= y { x } else { y }).expect("three caps");
    let eps = CertScalar::point(low).mul_pow2(-1).lower_point(STORED_BITS);
    if !caps.iter().all(CertScalar::is_finite) || *eps.lo() <= 0 {
        return Err(Error::Undecided { what: format!("ε caps at step {n}"), bits: ctx.bits });
    }
    let bounds = ctx.epsilon_bounds(&eps);
    if !bounds.iter().all(|b| b.verdict.holds()) {
        return Err(Error::Undecided { what: format!("(a)-(c) at step {n}"), bits: ctx.bits });
    }
    Ok(eps)
}

/// An accepted `λₙ`.
#[derive(Clone, Debug)]
pub struct LambdaChoice {
    pub angle: Angle,
    pub exp: u32,
    pub margins: BTreeMap<String, CertScalar>,
}

/// An accepted `μₙ` with the new inverse-norm bound `Bₙ`.
#[derive(Clone, Debug)]
pub struct MuChoice {
    pub angle: Angle,
    pub exp: u32,
    pub b_norm: CertScalar,
    pub margins: BTreeMap<String, CertScalar>,
}

/// Smallest `m ≥ m₀` such that `λₙ = μ_{j(n)} + 2^{-m}` avoids all earlier nodes and satisfies (d), (e), (f).
pub fn choose_lambda(state: &ConstructionState, n: usize, eps: &CertScalar) -> Result<LambdaChoice> {
    expect_next(state, n)?;
    let full = context(state, n);
    let screen = screen_of(&full);
    let forbidden: Vec<Angle> = state.lambda().into_iter().chain(state.mu()).collect();
    let eval = |c: &StepContext, x: &Angle| {
        let p = c.probe(x);
        lazy_all(&[&|| c.eigvec_shift(&p, eps).verdict, &|| c.secular_gap(&p, eps).verdict, &|| {
            c.pole_sum(&p, eps).verdict
        }])
    };
    for m in state.search.m0..=state.search.max_exp {
        let x = full.anchor().offset(m);
        if forbidden.contains(&x) {
            continue;
        }
        if decide(&full, screen.as_ref(), |c| eval(c, &x), &format!("λ candidate 2^-{m} at step {n}"))? {
            let p = full.probe(&x);
            let margins = require_holds(
                &[
                    ("(d)", &full.secular_gap(&p, eps)),
                    ("(e)", &full.pole_sum(&p, eps)),
                    ("(f)", &full.eigvec_shift(&p, eps)),
                ],
                full.bits,
            )?;
            return Ok(LambdaChoice { angle: x, exp: m, margins });
        }
    }
    Err(Error::SearchExhausted { step: n, cap: state.search.max_exp })
}

/// Smallest `m′ ≥ m₀` such that `μₙ = λₙ + 2^{-m′}` avoids all nodes and satisfies (g)–(j) and the (k) surrogate.
pub fn choose_mu(state: &ConstructionState, n: usize, eps: &CertScalar, lambda: &LambdaChoice) -> Result<MuChoice> {
    expect_next(state, n)?;
    let full = context(state, n);
    let screen = screen_of(&full);
    let lambda_n = &lambda.angle;
    let forbidden: Vec<Angle> = state.lambda().into_iter().chain(state.mu()).chain([lambda_n.clone()]).collect();
    let c_prev = &state.step(n - 1).c_n;
    let chords_full = full.lambda_chords(lambda_n);
    let chords_screen = screen.as_ref().map(|s| s.lambda_chords(lambda_n));
    let chords_for = |c: &StepContext| if c.bits == full.bits { &chords_full } else { chords_screen.as_ref().unwrap() };
    let eval = |c: &StepContext, x: &Angle| {
        let gap = chord(x, lambda_n, c.bits);
        if c.ratio_bound(&gap, chords_for(c), c_prev).verdict == Verdict::Fails {
            return Verdict::Fails;
        }
        let p = c.probe(x);
        lazy_all(&[
            &|| c.ratio_bound(&gap, chords_for(c), c_prev).verdict,
            &|| c.eigvec_shift(&p, eps).verdict,
            &|| c.secular_gap(&p, eps).verdict,
            &|| c.pole_sum(&p, eps).verdict,
        ])
    };

    let b_prev = &state.step(n - 1).b_norm;
    let one = CertScalar::from_i64(1, full.bits);
    let chain_cap = one.add(&CertScalar::pow2(-(n as i32), full.bits)).mul(b_prev);
    let sys_full = state.system(full.bits);
    let sys_screen = screen.as_ref().map(|_| state.system(SCREEN_BITS));

    for m in state.search.m0..=state.search.max_exp {
        let x = lambda_n.offset(m);
        if forbidden.contains(&x) {
            continue;
        }
        if !decide(&full, screen.as_ref(), |c| eval(c, &x), &format!("μ candidate 2^-{m} at step {n}"))? {
            continue;
        }
        // (k): a screen that already exceeds the cap rules the candidate out at every precision
        if let Some(s) = &sys_screen {
            let ub = opnorm_upper(&s.push(&x, lambda_n).inverse());
            if ub.is_finite() && *ub.lo() > *chain_cap.hi() {
                continue;
            }
        }
        let ub = opnorm_upper(&sys_full.push(&x, lambda_n).inverse());
        if !ub.is_finite() {
            return Err(Error::Undecided { what: format!("‖M_{n}⁻¹‖ bound at 2^-{m}"), bits: full.bits });
        }
        let b_norm = ub.upper_point(STORED_BITS);
        let k = Bound::le(&b_norm, &chain_cap);
        match k.verdict {
            Verdict::Fails => continue,
            Verdict::Undecided => {
                return Err(Error::Undecided { what: format!("(k) at 2^-{m}"), bits: full.bits });
            }
            Verdict::Holds => {}
        }
        let p = full.probe(&x);
        let gap = chord(&x, lambda_n, full.bits);
        let mut margins = require_holds(
            &[
                ("(g)", &full.secular_gap(&p, eps)),
                ("(h)", &full.pole_sum(&p, eps)),
                ("(i)", &full.eigvec_shift(&p, eps)),
                ("(j)", &full.ratio_bound(&gap, &chords_full, c_prev)),
            ],
            full.bits,
        )?;
        margins.insert("(k)".into(), margin(&k));
        return Ok(MuChoice { angle: x, exp: m, b_norm, margins });
    }
    Err(Error::SearchExhausted { step: n, cap: state.search.max_exp })
}

/// `aₙ = 2^{-(n+1)}|μₙ − λₙ|` and `b⁽ⁿ⁾` from `Mₙ(a∘b̄) = 𝟙`.
pub fn coefficients(
    state: &ConstructionState,
    n: usize,
    lambda_n: &Angle,
    mu_n: &Angle,
) -> Result<(CertScalar, Vec<CertComplex>)> {
    expect_next(state, n)?;
    let bits = state.working_bits;
    let a_n = step_a(n, mu_n, lambda_n, bits);
    let mut a = state.a();
    a.push(a_n.clone());
    let b = coefficients_from(&state.system(bits).push(mu_n, lambda_n), &a);
    if !b.iter().all(CertComplex::is_finite) {
        return Err(Error::Undecided { what: format!("b⁽{n}⁾"), bits });
    }
    Ok((a_n, b))
}

/// `Cₙ = max(‖Vₙ⁻¹‖_{2→1} bound, C_{n−1} + 2^{-n}, 2 + 2^{-n})`, rounded up to a short dyadic.
///
/// `Vₙ` has columns `uᵢ⁽ⁿ⁾ = Σⱼ aⱼ/(μᵢ−λⱼ) eⱼ`, so `(Vₙ⁻¹)ᵢⱼ = (Mₙ⁻¹)ⱼᵢ / aⱼ`.
pub fn bound_c(prev: Option<&CertScalar>, sys: &CauchySystem, a: &[CertScalar]) -> CertScalar {
    let n = sys.dim();
    let bits = sys.bits();
    let inv_a: Vec<CertScalar> = a.iter().map(CertScalar::recip).collect();
    let v_inv = sys.inverse().transpose().scale_columns(&inv_a);
    let tail = CertScalar::pow2(-(n as i32), bits);
    let mut c = opnorm_2to1_upper(&v_inv).max(&CertScalar::from_i64(2, bits).add(&tail));
    if let Some(p) = prev {
        c = c.max(&p.add(&tail));
    }
    c.upper_point(STORED_BITS)
}

fn build_step(state: &ConstructionState) -> Result<StepData> {
    let n = state.depth() + 1;
    let eps = choose_epsilon(state, n)?;
    let lambda = choose_lambda(state, n, &eps)?;
    let mu = choose_mu(state, n, &eps, &lambda)?;
    let (a_n, b_n) = coefficients(state, n, &lambda.angle, &mu.angle)?;
    let bits = state.working_bits;
    let mut a = state.a();
    a.push(a_n.clone());
    let sys = state.system(bits).push(&mu.angle, &lambda.angle);
    let c_n = bound_c(Some(&state.step(n - 1).c_n), &sys, &a);

    let ctx = context(state, n);
    let [ba, bb, bc] = ctx.epsilon_bounds(&eps);
    let mut margins = require_holds(&[("(a)", &ba), ("(b)", &bb), ("(c)", &bc)], bits)?;
    margins.extend(lambda.margins);
    margins.extend(mu.margins);
    Ok(StepData {
        n,
        j_n: j_of(n),
        lambda_n: lambda.angle,
        mu_n: mu.angle,
        lambda_offset_exp: Some(lambda.exp),
        mu_offset_exp: Some(mu.exp),
        a_n,
        b_n,
        epsilon_n: eps,
        c_n,
        b_norm: mu.b_norm,
        margins,
    })
}

/// Append one step, escalating precision as needed; the input is never modified.
///
/// The new prefix must pass the full certificate. An inconclusive verdict anywhere
/// doubles the working precision (recomputing all earlier coefficients) and
/// retries; a definite failure is reported as `InvariantViolated`.
pub fn extend(state: &ConstructionState) -> Result<ConstructionState> {
    let mut bits = state.working_bits;
    loop {
        let base = if bits == state.working_bits { Ok(state.clone()) } else { state.refined(bits) };
        let attempt = base.and_then(|base| {
            let step = build_step(&base)?;
            let mut next = base;
            next.steps.push(step);
            Ok(next)
        });
        match attempt {
            Ok(next) => {
                let cert = certify::full_certificate(&next);
                if cert.passing {
                    return Ok(next);
                }
                let failing = cert.failing_names();
                if !cert.any_undecided() {
                    return Err(Error::InvariantViolated(format!(
                        "step {} fails {}",
                        next.depth(),
                        failing.join(", ")
                    )));
                }
            }
            Err(Error::Undecided { .. }) => {}
            Err(e) => return Err(e),
        }
        bits = state.precision_policy.escalate(bits)?;
    }
}

/// Seed and extend to `depth` steps, reporting each committed state.
pub fn construct(
    mu1: &Angle,
    depth: usize,
    policy: PrecisionPolicy,
    search: SearchLimits,
    mut on_step: impl FnMut(&ConstructionState),
) -> Result<ConstructionState> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mut state = seed(mu1, policy, search)?;
    on_step(&state);
    while state.depth() < depth {
        state = extend(&state)?;
        on_step(&state);
    }
    Ok(state)
}
