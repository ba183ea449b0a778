mod common;

use common::{chord_f64, deep, prefix, small_policy};
use hyperseed::cauchy::{build, elimination, opnorm_upper, CauchyNodes, CertMatrix, Provenance};
use hyperseed::certify::full_certificate;
use hyperseed::exactcircle::{chord, unit_diff, Angle, CertComplex, CertScalar, PrecisionPolicy};
use hyperseed::induction::{
    choose_epsilon, choose_lambda, choose_mu, coefficients, construct, extend, j_of, seed, step_one, ConstructionState,
    SearchLimits, STEP_MARGINS,
};
use hyperseed::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn j_matches_block_enumeration_up_to_ten_thousand() {
    let limit = 10_000;
    let mut blocks = Vec::new();
    let mut b = 1;
    while blocks.len() < limit {
        blocks.extend(1..=b);
        b += 1;
    }
    assert_eq!(j_of(1), 1);
    let mut counts = vec![0usize; limit];
    for n in 2..=limit {
        let j = j_of(n);
        assert_eq!(j, blocks[n - 2], "j({n})");
        assert!(j < n);
        counts[j] += 1;
    }
    assert_eq!((j_of(4), j_of(7)), (2, 3));
    // every k up to 100 recurs in every stretch of the enumeration seen so far
    assert!((1..=100).all(|k| counts[k] >= 40));
}

#[test]
fn default_seed_matches_high_precision_oracle() {
    let c = chord_f64(1.0, 6);
    assert!((c - 0.098135).abs() < 1e-6);
    let s = step_one(&Angle::normalize(1, 6), 512).unwrap();
    let t = std::f64::consts::TAU / 64.0;
    let (re, im) = s.b_n[0].to_f64_pair();
    assert!((re - 4.0 * (t.cos() - 1.0)).abs() < 1e-15);
    assert!((im + 4.0 * t.sin()).abs() < 1e-15);
    assert!((s.b_n[0].abs().to_f64() - 0.392541).abs() < 1e-6);
    assert_eq!(s.a_n.to_f64(), 0.25);
    assert_eq!(s.c_n.to_f64(), 2.5);
    assert!(s.b_norm.to_f64() >= c && s.b_norm.to_f64() - c < 1e-15);
    let state = seed(&Angle::normalize(1, 6), small_policy(), SearchLimits::default()).unwrap();
    assert!((0.25 / c - 2.5475).abs() < 1e-4);
    assert!((state.kappa.to_f64() - (2.0 + 0.25 / c)).abs() < 1e-15);
}

#[test]
fn bad_seeds_are_rejected() {
    for a in [Angle::zero(), Angle::normalize(1, 1), Angle::normalize(1, 4)] {
        assert!(matches!(step_one(&a, 256), Err(Error::BadSeed(_))), "{a}");
    }
}

#[test]
fn epsilon_at_step_two_is_half_the_smallest_cap() {
    let state = seed(&Angle::normalize(1, 6), small_policy(), SearchLimits::default()).unwrap();
    let eps = choose_epsilon(&state, 2).unwrap().to_f64();
    let c = chord_f64(1.0, 6);
    let growth = 1.5 * 1.25;
    let cap_a = 1.0 / 64.0;
    let cap_b = cap_a * c / growth;
    let cap_c = 0.25 * 0.25 / (1.25 * growth);
    let expect = 0.5 * cap_a.min(cap_b).min(cap_c);
    assert!(eps <= expect && (expect - eps) / expect < 1e-12, "{eps} vs {expect}");
    assert!(eps <= 1.0 / 128.0);
}

#[test]
fn committed_steps_satisfy_structural_invariants() {
    let s = deep();
    let mut angles = Vec::new();
    for st in &s.steps {
        angles.push(st.lambda_n.clone());
        angles.push(st.mu_n.clone());
    }
    for i in 0..angles.len() {
        for j in i + 1..angles.len() {
            assert_ne!(angles[i], angles[j]);
        }
    }
    let mut growth = 1.5;
    for n in 2..=s.depth() {
        let st = s.step(n);
        let anchor = &s.step(j_of(n)).mu_n;
        assert_eq!(st.lambda_n, anchor.offset(st.lambda_offset_exp.unwrap()));
        assert_eq!(st.mu_n, st.lambda_n.offset(st.mu_offset_exp.unwrap()));
        let a = chord(&st.mu_n, &st.lambda_n, 4096).mul_pow2(-(n as i32 + 1));
        assert!(st.a_n.overlaps(&a));
        let prev = s.step(n - 1);
        assert!(st.c_n.to_f64() > 2.0 && st.c_n.lo() > prev.c_n.hi());
        let cap = prev.b_norm.mul(&CertScalar::from_i64(1, 128).add(&CertScalar::pow2(-(n as i32), 128)));
        assert!(st.b_norm.hi() <= cap.lo());
        growth *= 1.0 + 2f64.powi(-(n as i32));
        assert!(st.b_norm.to_f64() < growth);
        let names: Vec<&str> = st.margins.keys().map(String::as_str).collect();
        let mut expect = STEP_MARGINS.to_vec();
        expect.sort_unstable();
        assert_eq!(names, expect);
        assert!(st.margins.values().all(|m| *m.lo() > 0));
    }
}

#[test]
fn search_reproduces_committed_choices() {
    let s = deep();
    for n in 2..=6 {
        let base = prefix(n - 1);
        let st = s.step(n);
        let eps = choose_epsilon(&base, n).unwrap();
        assert_eq!(eps, st.epsilon_n);
        let lambda = choose_lambda(&base, n, &eps).unwrap();
        assert_eq!(lambda.angle, st.lambda_n);
        assert_eq!(Some(lambda.exp), st.lambda_offset_exp);
        let mu = choose_mu(&base, n, &eps, &lambda).unwrap();
        assert_eq!(mu.angle, st.mu_n);
        assert_eq!(mu.b_norm, st.b_norm);
    }
}

#[test]
fn coefficients_solve_the_eigenvalue_equations() {
    let s = deep();
    let base = prefix(1);
    let st = s.step(2);
    let (a2, b) = coefficients(&base, 2, &st.lambda_n, &st.mu_n).unwrap();
    let nodes =
        CauchyNodes::new(vec![s.step(1).mu_n.clone(), st.mu_n.clone()], vec![Angle::zero(), st.lambda_n.clone()])
            .unwrap();
    let m = build(&nodes, 4096);
    let a = [s.step(1).a_n.clone(), a2];
    let v: Vec<CertComplex> = b.iter().zip(&a).map(|(bi, ai)| bi.conj().scale(ai)).collect();
    for r in m.mul_vec(&v) {
        assert!(r.sub(&CertComplex::one(4096)).contains_zero());
    }
}

#[test]
fn surrogate_norm_bound_agrees_with_elimination() {
    let s = deep();
    let nodes = s.nodes(2).unwrap();
    let via_elim = opnorm_upper(&elimination::inverse(&build(&nodes, 4096)).unwrap()).to_f64();
    let b2 = s.step(2).b_norm.to_f64();
    assert!(((via_elim - b2) / b2).abs() < 1e-15, "{via_elim} vs {b2}");
}

#[test]
fn spanning_constant_dominates_random_probes() {
    let s = deep();
    let bits = s.working_bits;
    for n in [1, 3, 5] {
        let mut cols = Vec::new();
        for l in 0..n {
            for i in 0..n {
                let st = &s.steps[l];
                cols.push(unit_diff(&s.steps[i].mu_n, &st.lambda_n, bits).recip().scale(&st.a_n));
            }
        }
        let v = CertMatrix::new(n, cols, Provenance::Direct);
        let c = s.step(n).c_n.to_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..100 {
            let x: Vec<CertComplex> = (0..n)
                .map(|_| {
                    CertComplex::new(
                        CertScalar::from_f64(rng.gen_range(-1.0..1.0), bits),
                        CertScalar::from_f64(rng.gen_range(-1.0..1.0), bits),
                    )
                })
                .collect();
            let alpha = elimination::solve(&v, &x).unwrap();
            let l1: f64 = alpha.iter().map(|z| z.abs().to_f64()).sum();
            let norm: f64 = x.iter().map(|z| z.norm_sqr().to_f64()).sum::<f64>().sqrt();
            assert!(l1 <= c * norm, "n={n}: {l1} > {c}·{norm}");
        }
    }
}

#[test]
fn construction_is_deterministic() {
    let run = || construct(&Angle::normalize(1, 6), 4, small_policy(), SearchLimits::default(), |_| {}).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.canonical_json(), b.canonical_json());
    assert_eq!(a.hash(), b.hash());
}

#[test]
fn failed_extension_leaves_state_untouched() {
    let limits = SearchLimits { m0: 1, max_exp: 3 };
    let state = seed(&Angle::normalize(1, 6), small_policy(), limits).unwrap();
    let before = state.clone();
    assert!(matches!(extend(&state), Err(Error::SearchExhausted { step: 2, cap: 3 })));
    assert_eq!(state, before);
}

#[test]
fn low_ceiling_exhausts_precision() {
    let policy = PrecisionPolicy { initial_bits: 64, ceiling_bits: 64 };
    let r = construct(&Angle::normalize(1, 6), 8, policy, SearchLimits::default(), |_| {});
    assert!(matches!(r, Err(Error::PrecisionExhausted { requested: 128, ceiling: 64 })), "{r:?}");
}

#[test]
fn escalation_recovers_from_low_initial_precision() {
    let policy = PrecisionPolicy { initial_bits: 64, ceiling_bits: 1 << 14 };
    let s = construct(&Angle::normalize(1, 6), 6, policy, SearchLimits::default(), |_| {}).unwrap();
    assert!(s.working_bits > 64);
    assert!(full_certificate(&s).passing);
}

#[test]
fn state_json_round_trips_and_rejects_corruption() {
    let s = prefix(4);
    let text = s.to_json_pretty();
    let back = ConstructionState::from_json(&text).unwrap();
    assert_eq!(back, s);
    assert_eq!(back.hash(), s.hash());

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let corrupt = |f: &dyn Fn(&mut serde_json::Value)| {
        let mut w = v.clone();
        f(&mut w);
        ConstructionState::from_json(&w.to_string())
    };
    let cases: [&dyn Fn(&mut serde_json::Value); 5] = [
        &|w| w["version"] = 2.into(),
        &|w| w["steps"][1]["j_n"] = 2.into(),
        &|w| {
            w["steps"][2]["margins"].as_object_mut().unwrap().remove("(g)");
        },
        &|w| {
            w["steps"][2]["b_n"].as_array_mut().unwrap().pop();
        },
        &|w| w["steps"][0]["a_n"]["lo"] = "banana".into(),
    ];
    for f in cases {
        assert!(matches!(corrupt(f), Err(Error::CorruptState(_))));
    }
    v["steps"] = serde_json::Value::Array(vec![]);
    assert!(matches!(ConstructionState::from_json(&v.to_string()), Err(Error::CorruptState(_))));
    assert!(matches!(ConstructionState::from_json("{"), Err(Error::CorruptState(_))));
}

#[test]
fn refinement_keeps_enclosures_consistent() {
    let s = prefix(4);
    let r = s.refined(2 * s.working_bits).unwrap();
    for (x, y) in s.steps.iter().zip(&r.steps) {
        assert!(x.a_n.overlaps(&y.a_n));
        assert!(x.b_n.iter().zip(&y.b_n).all(|(p, q)| p.overlaps(q)));
    }
    assert!(full_certificate(&r).passing);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seed_step_follows_its_formula(q in 2u32..12, frac in 0.0f64..1.0) {
        let p = ((frac * (1u64 << q) as f64) as u64).max(1);
        let angle = Angle::normalize(p as i64, q);
        let c = chord_f64(p as f64, q as i32);
        match step_one(&angle, 256) {
            Ok(s) => {
                prop_assert!(c < 0.125 + 1e-12);
                prop_assert!((s.b_n[0].abs().to_f64() - 4.0 * c).abs() < 1e-12);
                prop_assert!(s.margins.values().all(|m| *m.lo() > 0));
            }
            Err(e) => {
                prop_assert!(matches!(e, Error::BadSeed(_)));
                prop_assert!(c > 0.125 - 1e-12 || angle.is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn other_seeds_certify_at_small_depth(q in 7u32..11, frac in 0.05f64..0.95) {
        // seeds strictly inside the |μ₁ − 1| < 1/8 region
        let p = ((frac * (1u64 << (q - 6)) as f64) as i64).max(1);
        let s = construct(&Angle::normalize(p, q), 4, small_policy(), SearchLimits::default(), |_| {}).unwrap();
        prop_assert!(full_certificate(&s).passing);
    }
}
