//! Certificate suite: every inequality the construction promises, re-derived
//! from a state alone and decided with interval arithmetic.
//!
//! Stored enclosures of `aₙ`, `b⁽ⁿ⁾`, `ε`, `Cₙ`, `Bₙ`, `κ` are taken as given;
//! all differences of unit-circle points are recomputed at the requested
//! precision. Infinite-tail statements are checked at truncation `N = depth`
//! with the additive allowance `2^{-(N-1)}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cauchy::{opnorm_2to1_upper, opnorm_upper, CauchyNodes, CauchySystem};
use crate::error::{Error, Result};
use crate::exactcircle::{vec_norm, Bound, CertComplex, CertScalar, Verdict};
use crate::induction::conditions::{growth_product, StepContext};
use crate::induction::{j_of, ConstructionState};

/// Bits kept in reported margins.
pub const MARGIN_BITS: u32 = 64;

/// `|residual| < 2^RESIDUAL_EXP` is required of every equation in (E).
pub const RESIDUAL_EXP: i32 = -64;

/// Every check name a certificate carries.
pub const CHECK_NAMES: [&str; 25] = [
    "(E)",
    "(3)",
    "(4)",
    "(5)",
    "(l)",
    "(6)",
    "(7)",
    "(8κ)",
    "(8-literal-report)",
    "(9′)",
    "u-norms",
    "spanning",
    "clustering",
    "distinctness",
    "(j)-ratio",
    "(k)-surrogate",
    "(a)",
    "(b)",
    "(c)",
    "(d)",
    "(e)",
    "(f)",
    "(g)",
    "(h)",
    "(i)",
];

/// Checks that are reported but do not gate `passing`.
pub const INFORMATIONAL: [&str; 1] = ["(8-literal-report)"];

fn tag_of(name: &str) -> &'static str {
    match name {
        "(E)" => "eigenvalue equations of T_n",
        "(3)" => "0 < a_n < 2^-n",
        "(4)" => "|b_n^(n)| < 2^-n",
        "(5)" => "|b^(n) - b^(n-1)| on old coordinates < 2^-n",
        "(l)" => "weighted b drift below eps_n * prod(1+2^-j)",
        "(6)" => "eigenvector drift a_n/|mu_i - lambda_n| < 2^-n/C_(n-1)",
        "(7)" => "|u_j(n) - u_n| < 2^-n",
        "(8κ)" => "|T_n u_i^(k) - mu_i u_i^(k)| < kappa 2^-(k-1)",
        "(8-literal-report)" => "|T_n u_i^(k) - mu_i u_i^(k)| < 3 2^-(k-1)",
        "(9′)" => "|b^(n) - b^(n-1)| < 2^-(n-1)",
        "u-norms" => "|u_i^(k)| <= kappa",
        "spanning" => "basis vectors within 2^-r of span of limit eigenvectors",
        "clustering" => "|u_n - u_k| < 5 2^-n for j(n) = k",
        "distinctness" => "all nodes distinct",
        "(j)-ratio" => "|mu_n - lambda_n|/|mu_i - lambda_n| < 2^-n/C_(n-1)",
        "(k)-surrogate" => "B_n bounds |M_n^-1| and grows by at most 1+2^-n",
        "(a)" | "(b)" | "(c)" => "admissible epsilon",
        "(d)" | "(e)" | "(f)" => "admissible lambda_n",
        _ => "admissible mu_n",
    }
}

/// One decided inequality (or a conjunction over an index range).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub tag: String,
    pub scope: String,
    pub verdict: Verdict,
    pub margin: CertScalar,
}

/// How the uniform eigenvector-norm constant compares with the literal constant 3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    pub kappa: CertScalar,
    /// Both `‖uᵢ⁽ᵏ⁾‖ ≤ 3` and the residual bound with 3 in place of `κ`, over the whole state.
    pub literal_three_holds: Verdict,
    /// Largest `‖uᵢ⁽ᵏ⁾‖` upper bound.
    pub max_u_norm: CertScalar,
    /// `2(2^{-1} + … + 2^{-N}) + ‖u₁⁽¹⁾‖`; exceeds 3.
    pub chain_bound: CertScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub state_hash: String,
    pub bits: u32,
    pub checks: Vec<CheckEntry>,
    pub kappa_report: KappaReport,
    pub passing: bool,
}

impl Certificate {
    pub fn names(&self) -> BTreeSet<&str> {
        self.checks.iter().map(|c| c.name.as_str()).collect()
    }

    /// Conjunction of all entries under `name`; `None` if absent.
    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        let mut it = self.checks.iter().filter(|c| c.name == name).peekable();
        it.peek()?;
        Some(Verdict::all(it.map(|c| c.verdict)))
    }

    fn gated(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !INFORMATIONAL.contains(&c.name.as_str()))
    }

    /// Gated check names with at least one entry that does not hold, in suite order.
    pub fn failing_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in self.gated().filter(|c| c.verdict != Verdict::Holds) {
            if !out.contains(&c.name) {
                out.push(c.name.clone());
            }
        }
        out
    }

    /// Names that failed outright, as opposed to being undecided.
    pub fn failed_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in self.gated().filter(|c| c.verdict == Verdict::Fails) {
            if !out.contains(&c.name) {
                out.push(c.name.clone());
            }
        }
        out
    }

    pub fn any_undecided(&self) -> bool {
        self.gated().any(|c| c.verdict == Verdict::Undecided)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Everything the checks share, evaluated once per run.
struct Data<'a> {
    state: &'a ConstructionState,
    bits: u32,
    depth: usize,
    sys: CauchySystem,
    a: Vec<CertScalar>,
    /// `b[n-1] = b⁽ⁿ⁾`.
    b: Vec<Vec<CertComplex>>,
}

impl<'a> Data<'a> {
    fn new(state: &'a ConstructionState, bits: u32) -> Self {
        Data {
            state,
            bits,
            depth: state.depth(),
            sys: state.system(bits),
            a: state.steps.iter().map(|s| s.a_n.with_bits(bits)).collect(),
            b: state.steps.iter().map(|s| s.b_n.iter().map(|z| z.with_bits(bits)).collect()).collect(),
        }
    }

    fn pow2(&self, k: i32) -> CertScalar {
        CertScalar::pow2(k, self.bits)
    }

    fn int(&self, v: i64) -> CertScalar {
        CertScalar::from_i64(v, self.bits)
    }

    fn stored(&self, s: &CertScalar) -> CertScalar {
        s.with_bits(self.bits)
    }

    /// `1/(μᵢ − λⱼ)`, 0-based.
    fn cauchy(&self, i: usize, j: usize) -> CertComplex {
        self.sys.mu_minus_lambda(i, j).recip()
    }

    /// `‖uᵢ⁽ᵏ⁾‖`, `i` 0-based.
    fn u_norm(&self, i: usize, k: usize) -> CertScalar {
        let s = (0..k).fold(CertScalar::zero(self.bits), |acc, l| {
            acc.add(&self.a[l].sqr().div(&self.sys.mu_minus_lambda(i, l).norm_sqr()))
        });
        s.sqrt()
    }

    /// `‖uₚ⁽ᴺ⁾ − u_q⁽ᴺ⁾‖` over the first `len` coordinates, without cancellation.
    fn u_gap(&self, p: usize, q: usize, len: usize) -> CertScalar {
        let delta = self.sys.mu_minus_mu(q, p);
        let v: Vec<CertComplex> = (0..len)
            .map(|l| delta.div(&self.sys.mu_minus_lambda(p, l).mul(self.sys.mu_minus_lambda(q, l))).scale(&self.a[l]))
            .collect();
        vec_norm(&v, self.bits)
    }

    /// `Σ_{l<k} a_l b̄_l⁽ⁿ⁾/(μᵢ − λ_l)`.
    fn pairing(&self, i: usize, k: usize, n: usize) -> CertComplex {
        let terms: Vec<CertComplex> =
            (0..k).map(|l| self.b[n - 1][l].conj().scale(&self.a[l]).mul(&self.cauchy(i, l))).collect();
        CertComplex::sum(&terms, self.bits)
    }

    fn e_residuals(&self, n: usize) -> Vec<CertComplex> {
        let one = CertComplex::one(self.bits);
        (0..n).map(|i| self.pairing(i, n, n).sub(&one)).collect()
    }

    fn check_e(&self, n: usize) -> Bound {
        let thr = self.pow2(RESIDUAL_EXP);
        all(self.e_residuals(n).iter().map(|r| {
            let mut b = Bound::lt(&r.abs(), &thr);
            if b.verdict == Verdict::Holds && !r.contains_zero() {
                b.verdict = Verdict::Fails;
            }
            b
        }))
    }

    fn b_drift(&self, n: usize, len: usize) -> Vec<CertComplex> {
        let zero = CertComplex::zero(self.bits);
        (0..len).map(|j| self.b[n - 1][j].sub(self.b[n - 2].get(j).unwrap_or(&zero))).collect()
    }

    fn check_decay(&self, n: usize) -> Vec<(&'static str, Bound)> {
        let bound = self.pow2(-(n as i32));
        let an = &self.a[n - 1];
        let mut out = vec![
            ("(3)", Bound::lt(&self.int(0), an).and(Bound::lt(an, &bound))),
            ("(4)", Bound::lt(&self.b[n - 1][n - 1].abs(), &bound)),
        ];
        if n >= 2 {
            let old = self.b_drift(n, n - 1);
            out.push(("(5)", Bound::lt(&vec_norm(&old, self.bits), &bound)));
            let weighted: Vec<CertComplex> = old.iter().zip(&self.a).map(|(d, a)| d.scale(a)).collect();
            let eps = self.stored(&self.state.step(n).epsilon_n);
            let rhs = eps.mul(&growth_product(n, self.bits));
            out.push(("(l)", Bound::lt(&vec_norm(&weighted, self.bits), &rhs)));
            out.push(("(9′)", Bound::lt(&vec_norm(&self.b_drift(n, n), self.bits), &self.pow2(1 - n as i32))));
        }
        out
    }

    /// `aₙ/|μᵢ − λₙ|` against `2^{-n}/C_{n−1}` and `|μₙ − λₙ|/|μᵢ − λₙ|` against the same.
    fn check_ratios(&self, n: usize) -> (Bound, Bound) {
        let rhs = self.pow2(-(n as i32)).div(&self.stored(&self.state.step(n - 1).c_n));
        let gap = self.sys.mu_minus_lambda(n - 1, n - 1).abs();
        let chords: Vec<CertScalar> = (0..n - 1).map(|i| self.sys.mu_minus_lambda(i, n - 1).abs()).collect();
        let six = all(chords.iter().map(|c| Bound::lt(&self.a[n - 1].div(c), &rhs)));
        let j = all(chords.iter().map(|c| Bound::lt(&gap.div(c), &rhs)));
        (six, j)
    }

    fn check_seven(&self, n: usize) -> Bound {
        Bound::lt(&self.u_gap(n - 1, j_of(n) - 1, n), &self.pow2(-(n as i32)))
    }

    /// `‖Tₙuᵢ⁽ᵏ⁾ − μᵢuᵢ⁽ᵏ⁾‖` for `i ≤ k < n` (1-based), as `(k, residual)`.
    fn residuals(&self, n: usize) -> Vec<(usize, CertScalar)> {
        let head: Vec<CertScalar> = (0..=n)
            .scan(CertScalar::zero(self.bits), |acc, l| {
                let out = acc.clone();
                if l < n {
                    *acc = acc.add(&self.a[l].sqr());
                }
                Some(out)
            })
            .collect();
        let one = CertComplex::one(self.bits);
        let mut out = Vec::new();
        for k in 1..n {
            let tail = head[n].sub(&head[k]);
            for i in 0..k {
                let s = self.pairing(i, k, n);
                let r2 = s.sub(&one).norm_sqr().mul(&head[k]).add(&s.norm_sqr().mul(&tail));
                out.push((k, r2.sqrt()));
            }
        }
        out
    }

    fn check_residual(&self, n: usize, constant: &CertScalar) -> Bound {
        all(self.residuals(n).iter().map(|(k, r)| Bound::lt(r, &constant.mul(&self.pow2(1 - *k as i32)))))
    }

    fn all_u_norms(&self) -> Vec<(usize, CertScalar)> {
        (1..=self.depth).flat_map(|k| (0..k).map(move |i| (k, self.u_norm(i, k)))).collect()
    }

    fn kappa_consistency(&self) -> Bound {
        let kappa = self.stored(&self.state.kappa);
        let ideal = self.int(2).add(&self.u_norm(0, 1));
        let slack = self.int(1).add(&self.pow2(-60));
        Bound::le(&ideal, &kappa).and(Bound::le(&kappa, &ideal.mul(&slack)))
    }

    /// Defects `‖eⱼ − Σᵢ αᵢuᵢ⁽ᴺ⁾‖` for `j ≤ r`, where `Σᵢ αᵢuᵢ⁽ʳ⁾ = eⱼ`.
    ///
    /// With `Vᵣ = diag(a)Mᵣᵀ`, `αᵢ = (Mᵣ⁻¹)ⱼᵢ/aⱼ`; the first `r` coordinates cancel exactly.
    fn spanning_defects(&self, r: usize) -> Vec<CertScalar> {
        let inv = self.sys.leading(r).inverse();
        (0..r)
            .map(|j| {
                let alpha: Vec<CertComplex> =
                    (0..r).map(|i| CertComplex::real(self.a[j].recip()).mul(inv.get(j, i))).collect();
                let tail: Vec<CertComplex> = (r..self.depth)
                    .map(|l| {
                        let terms: Vec<CertComplex> =
                            alpha.iter().enumerate().map(|(i, al)| al.mul(&self.cauchy(i, l))).collect();
                        CertComplex::sum(&terms, self.bits).scale(&self.a[l])
                    })
                    .collect();
                vec_norm(&tail, self.bits)
            })
            .collect()
    }

    fn allowance(&self) -> CertScalar {
        self.pow2(1 - self.depth as i32)
    }

    fn check_spanning(&self, r: usize) -> Bound {
        let rhs = self.pow2(-(r as i32)).add(&self.allowance());
        all(self.spanning_defects(r).iter().map(|d| Bound::lt(d, &rhs)))
    }

    /// `C₁ = …`: `Cₙ > 2`, `Cₙ > C_{n−1}` and `Cₙ ≥ ‖Vₙ⁻¹‖_{2→1}`.
    fn check_c_chain(&self, n: usize) -> Bound {
        let c = self.stored(&self.state.step(n).c_n);
        let inv_a: Vec<CertScalar> = self.a[..n].iter().map(CertScalar::recip).collect();
        let v_inv = self.sys.leading(n).inverse().transpose().scale_columns(&inv_a);
        let mut b = Bound::lt(&self.int(2), &c).and(Bound::le(&opnorm_2to1_upper(&v_inv), &c));
        if n >= 2 {
            b = b.and(Bound::lt(&self.stored(&self.state.step(n - 1).c_n), &c));
        }
        b
    }

    fn window(&self, k: usize) -> Vec<usize> {
        (2..=self.depth).filter(|&n| j_of(n) == k).collect()
    }

    fn check_clustering(&self, k: usize) -> Result<Bound> {
        let window = self.window(k);
        if k == 0 || window.is_empty() {
            return Err(Error::EmptyWindow { k, depth: self.depth });
        }
        let allowance = self.allowance();
        Ok(all(window.iter().map(|&n| {
            let rhs = self.int(5).mul(&self.pow2(-(n as i32))).add(&allowance);
            Bound::lt(&self.u_gap(n - 1, k - 1, self.depth), &rhs)
        })))
    }

    fn check_distinct(&self) -> Bound {
        match CauchyNodes::new(self.state.mu(), self.state.lambda()) {
            Err(_) => Bound { verdict: Verdict::Fails, margin: self.int(0) },
            Ok(_) => {
                let n = self.depth;
                let mut gaps = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        gaps.push(self.sys.mu_minus_lambda(i, j).abs());
                        if i < j {
                            gaps.push(self.sys.mu_minus_mu(i, j).abs());
                            gaps.push(self.sys.lambda_minus_lambda(i, j).abs());
                        }
                    }
                }
                let margin = gaps.into_iter().reduce(|x, y| x.min(&y)).expect("at least one node pair");
                let verdict = if *margin.lo() > 0 { Verdict::Holds } else { Verdict::Undecided };
                Bound { verdict, margin }
            }
        }
    }

    fn check_surrogate(&self, n: usize) -> Bound {
        let b_n = self.stored(&self.state.step(n).b_norm);
        let ub = opnorm_upper(&self.sys.leading(n).inverse());
        let own = Bound::le(&ub, &b_n);
        if n == 1 {
            own.and(Bound::lt(&b_n, &self.int(1)))
        } else {
            let cap = self.int(1).add(&self.pow2(-(n as i32))).mul(&self.stored(&self.state.step(n - 1).b_norm));
            own.and(Bound::le(&b_n, &cap))
        }
    }

    fn check_step_conditions(&self, n: usize) -> [(&'static str, Bound); 9] {
        let steps = &self.state.steps;
        let ctx = StepContext::new(&steps[..n - 1], j_of(n), self.bits);
        let eps = self.stored(&steps[n - 1].epsilon_n);
        let [a, b, c] = ctx.epsilon_bounds(&eps);
        let pl = ctx.probe(&steps[n - 1].lambda_n);
        let pm = ctx.probe(&steps[n - 1].mu_n);
        [
            ("(a)", a),
            ("(b)", b),
            ("(c)", c),
            ("(d)", ctx.secular_gap(&pl, &eps)),
            ("(e)", ctx.pole_sum(&pl, &eps)),
            ("(f)", ctx.eigvec_shift(&pl, &eps)),
            ("(g)", ctx.secular_gap(&pm, &eps)),
            ("(h)", ctx.pole_sum(&pm, &eps)),
            ("(i)", ctx.eigvec_shift(&pm, &eps)),
        ]
    }
}

fn all(items: impl IntoIterator<Item = Bound>) -> Bound {
    Bound::all(items).expect("nonempty index range")
}

fn require_step(state: &ConstructionState, n: usize) -> Result<()> {
    if n == 0 || n > state.depth() {
        return Err(Error::InvalidArgument(format!("step {n} is not committed (depth {})", state.depth())));
    }
    Ok(())
}

/// (E) at step `n`: every residual contains 0 and is below `2^-64`.
pub fn check_e(state: &ConstructionState, n: usize) -> Result<Bound> {
    require_step(state, n)?;
    Ok(Data::new(state, state.working_bits).check_e(n))
}

/// The scalar residuals of (E) at step `n`.
pub fn e_residuals(state: &ConstructionState, n: usize) -> Result<Vec<CertComplex>> {
    require_step(state, n)?;
    Ok(Data::new(state, state.working_bits).e_residuals(n))
}

/// (3), (4), and for `n ≥ 2` also (5), (l), (9′).
pub fn check_decay(state: &ConstructionState, n: usize) -> Result<Vec<(&'static str, Bound)>> {
    require_step(state, n)?;
    Ok(Data::new(state, state.working_bits).check_decay(n))
}

/// (6) and (7) at step `n ≥ 2`; vacuous at `n = 1`.
pub fn check_eigvec_drift(state: &ConstructionState, n: usize) -> Result<Vec<(&'static str, Bound)>> {
    require_step(state, n)?;
    let d = Data::new(state, state.working_bits);
    if n == 1 {
        let one = d.int(1);
        return Ok(vec![("(6)", Bound::vacuous(one.clone())), ("(7)", Bound::vacuous(one))]);
    }
    Ok(vec![("(6)", d.check_ratios(n).0), ("(7)", d.check_seven(n))])
}

/// (8) with `κ` at step `n ≥ 2`.
pub fn check_residual(state: &ConstructionState, n: usize) -> Result<Bound> {
    require_step(state, n)?;
    if n < 2 {
        return Err(Error::InvalidArgument("the residual bound needs n ≥ 2".into()));
    }
    let d = Data::new(state, state.working_bits);
    Ok(d.check_residual(n, &d.stored(&state.kappa)))
}

/// `‖uᵢ⁽ᵏ⁾‖ ≤ κ` for all `i ≤ k ≤ depth`.
pub fn check_u_norms(state: &ConstructionState) -> Bound {
    let d = Data::new(state, state.working_bits);
    let kappa = d.stored(&state.kappa);
    all(d.all_u_norms().iter().map(|(_, u)| Bound::le(u, &kappa)))
}

/// Spanning defects for `e₁ … e_r` at truncation `N = depth`; `1 ≤ r < depth`.
pub fn check_spanning(state: &ConstructionState, r: usize) -> Result<Vec<CertScalar>> {
    if r == 0 || r >= state.depth() {
        return Err(Error::InvalidArgument(format!("r = {r} must lie in [1, {})", state.depth())));
    }
    Ok(Data::new(state, state.working_bits).spanning_defects(r))
}

/// `‖uₙ⁽ᴺ⁾ − u_k⁽ᴺ⁾‖ < 5·2^{-n} + 2^{-(N−1)}` for every `n ≤ N` with `j(n) = k`.
pub fn check_clustering(state: &ConstructionState, k: usize) -> Result<Bound> {
    Data::new(state, state.working_bits).check_clustering(k)
}

pub fn full_certificate(state: &ConstructionState) -> Certificate {
    full_certificate_at(state, state.working_bits)
}

/// Run the whole suite with differences recomputed at `bits`.
pub fn full_certificate_at(state: &ConstructionState, bits: u32) -> Certificate {
    let d = Data::new(state, bits);
    let n_max = d.depth;
    let mut checks = Vec::new();
    let mut push = |name: &str, scope: String, b: Bound| {
        checks.push(CheckEntry {
            name: name.to_string(),
            tag: tag_of(name).to_string(),
            scope,
            verdict: b.verdict,
            margin: b.margin.with_bits(MARGIN_BITS),
        });
    };
    let step = |n: usize| format!("n={n}");
    let vacuous = || Bound::vacuous(d.int(1));

    for n in 1..=n_max {
        push("(E)", step(n), d.check_e(n));
    }
    for n in 1..=n_max {
        for (name, b) in d.check_decay(n) {
            push(name, step(n), b);
        }
    }
    if n_max == 1 {
        for name in ["(5)", "(l)", "(9′)", "(6)", "(7)", "(8κ)", "(8-literal-report)", "(j)-ratio"] {
            push(name, "vacuous".into(), vacuous());
        }
        for name in ["(a)", "(b)", "(c)", "(d)", "(e)", "(f)", "(g)", "(h)", "(i)"] {
            push(name, "vacuous".into(), vacuous());
        }
    }
    let kappa = d.stored(&state.kappa);
    let three = d.int(3);
    let mut literal = Verdict::Holds;
    for n in 2..=n_max {
        let (six, j) = d.check_ratios(n);
        push("(6)", step(n), six);
        push("(j)-ratio", step(n), j);
        push("(7)", step(n), d.check_seven(n));
        let res = d.residuals(n);
        let with = |c: &CertScalar| all(res.iter().map(|(k, r)| Bound::lt(r, &c.mul(&d.pow2(1 - *k as i32)))));
        push("(8κ)", step(n), with(&kappa));
        let lit = with(&three);
        literal = literal.and(lit.verdict);
        push("(8-literal-report)", step(n), lit);
        for (name, b) in d.check_step_conditions(n) {
            push(name, step(n), b);
        }
    }

    let norms = d.all_u_norms();
    push("u-norms", "kappa".into(), d.kappa_consistency());
    for k in 1..=n_max {
        let b = all(norms.iter().filter(|(kk, _)| *kk == k).map(|(_, u)| Bound::le(u, &kappa)));
        push("u-norms", format!("k={k}"), b);
    }
    let max_u = norms.iter().map(|(_, u)| u.clone()).reduce(|x, y| x.max(&y)).expect("depth ≥ 1");
    literal = literal.and(crate::exactcircle::cert_le(&max_u, &three));

    for r in 1..n_max {
        push("spanning", format!("r={r}"), d.check_spanning(r));
    }
    for n in 1..=n_max {
        push("spanning", format!("C-chain n={n}"), d.check_c_chain(n));
    }

    let mut any_window = false;
    for k in 1..=n_max {
        if let Ok(b) = d.check_clustering(k) {
            any_window = true;
            push("clustering", format!("k={k}"), b);
        }
    }
    if !any_window {
        push("clustering", "vacuous".into(), vacuous());
    }

    push("distinctness", format!("n≤{n_max}"), d.check_distinct());
    for n in 1..=n_max {
        push("(k)-surrogate", step(n), d.check_surrogate(n));
    }

    let chain_bound = d.int(2).mul(&d.int(1).sub(&d.pow2(-(n_max as i32)))).add(&d.u_norm(0, 1));
    let kappa_report = KappaReport {
        kappa: kappa.with_bits(MARGIN_BITS),
        literal_three_holds: literal,
        max_u_norm: max_u.with_bits(MARGIN_BITS),
        chain_bound: chain_bound.with_bits(MARGIN_BITS),
    };
    let passing = checks.iter().all(|c| c.verdict == Verdict::Holds || INFORMATIONAL.contains(&c.name.as_str()));
    Certificate { state_hash: state.hash(), bits, checks, kappa_report, passing }
}
