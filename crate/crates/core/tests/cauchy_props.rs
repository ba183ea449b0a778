use std::collections::BTreeSet;

use hyperseed::cauchy::{
    build, cauchy_det, cauchy_inverse, elimination, opnorm_upper, solve_ones, CauchyNodes, CertMatrix, Provenance,
};
use hyperseed::exactcircle::{Angle, CertComplex, CertScalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BITS: u32 = 192;

fn f64_point(p: u64, q: u32) -> (f64, f64) {
    let t = 2.0 * std::f64::consts::PI * p as f64 / (1u64 << q) as f64;
    (t.cos(), t.sin())
}

fn f64_recip_diff(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (x, y) = (a.0 - b.0, a.1 - b.1);
    let n = x * x + y * y;
    (x / n, -y / n)
}

fn near(z: &CertComplex, w: (f64, f64), tol: f64) -> bool {
    let (re, im) = z.to_f64_pair();
    (re - w.0).abs() <= tol && (im - w.1).abs() <= tol
}

/// `n` row and `n` column nodes drawn as distinct multiples of `2^-12`.
fn nodes_strategy(max_n: usize) -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::btree_set(0u64..4096, 2 * n)
            .prop_map(|s: BTreeSet<u64>| s.into_iter().collect::<Vec<u64>>())
            .prop_shuffle()
            .prop_map(move |v| (v[..n].to_vec(), v[n..].to_vec()))
    })
}

fn nodes_of(mu: &[u64], lambda: &[u64]) -> CauchyNodes {
    let a = |p: &u64| Angle::normalize(*p as i64, 12);
    CauchyNodes::new(mu.iter().map(a).collect(), lambda.iter().map(a).collect()).unwrap()
}

#[test]
fn entry_at_one_sixty_fourth() {
    let nodes = CauchyNodes::new(vec![Angle::normalize(1, 6)], vec![Angle::zero()]).unwrap();
    let m = build(&nodes, BITS);
    let expect = 1.0 / (2.0 * (std::f64::consts::PI / 64.0).sin());
    let got = m.get(0, 0).abs().to_f64();
    assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
    assert!((expect - 1.0 / 0.0981).abs() < 0.01);
}

#[test]
fn two_by_two_matches_direct_evaluation() {
    let nodes = CauchyNodes::new(
        vec![Angle::normalize(1, 1), Angle::normalize(1, 2)],
        vec![Angle::zero(), Angle::normalize(3, 2)],
    )
    .unwrap();
    let m = build(&nodes, BITS);
    let mu = [f64_point(1, 1), f64_point(1, 2)];
    let la = [f64_point(0, 0), f64_point(3, 2)];
    for (i, &mi) in mu.iter().enumerate() {
        for (j, &lj) in la.iter().enumerate() {
            assert!(near(m.get(i, j), f64_recip_diff(mi, lj), 1e-14));
        }
    }
    let det = cauchy_det(&nodes, BITS);
    let direct = m.get(0, 0).mul(m.get(1, 1)).sub(&m.get(0, 1).mul(m.get(1, 0)));
    assert!(det.overlaps(&direct));
}

#[test]
fn clustered_nodes_keep_inverse_consistent() {
    // λ₂ sits 2^-300 from μ₁ and μ₂ sits 2^-320 from λ₂; naive subtraction would lose everything.
    let mu1 = Angle::normalize(1, 6);
    let l2 = mu1.offset(300);
    let mu2 = l2.offset(320);
    let nodes = CauchyNodes::new(vec![mu1, mu2], vec![Angle::zero(), l2]).unwrap();
    let m = build(&nodes, 1024);
    let inv = cauchy_inverse(&nodes, 1024);
    assert!(m.mul(&inv).contains_identity());
    let c = solve_ones(&nodes, 1024);
    let r = m.mul_vec(&c);
    let one = CertScalar::from_i64(1, 1024);
    assert!(r.iter().all(|z| z.re.contains(&one) && z.im.contains_zero()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn formula_inverse_agrees_with_elimination((mu, la) in nodes_strategy(6)) {
        let nodes = nodes_of(&mu, &la);
        let m = build(&nodes, BITS);
        let inv = cauchy_inverse(&nodes, BITS);
        prop_assert_eq!(inv.provenance(), Provenance::InverseByFormula);
        prop_assert!(m.mul(&inv).contains_identity());
        let oracle = elimination::inverse(&m).unwrap();
        prop_assert!(m.mul(&oracle).contains_identity());
        prop_assert!(inv.overlaps(&oracle));
    }

    #[test]
    fn det_agrees_with_elimination((mu, la) in nodes_strategy(6)) {
        let nodes = nodes_of(&mu, &la);
        let det = cauchy_det(&nodes, BITS);
        prop_assert!(!det.contains_zero());
        let oracle = elimination::det(&build(&nodes, BITS)).unwrap();
        prop_assert!(det.overlaps(&oracle));
    }

    #[test]
    fn solve_ones_has_zero_residual((mu, la) in nodes_strategy(6)) {
        let nodes = nodes_of(&mu, &la);
        let m = build(&nodes, BITS);
        let c = solve_ones(&nodes, BITS);
        let one = CertScalar::from_i64(1, BITS);
        for z in m.mul_vec(&c) {
            prop_assert!(z.re.contains(&one) && z.im.contains_zero());
        }
        let ones = vec![CertComplex::one(BITS); nodes.len()];
        let oracle = elimination::solve(&m, &ones).unwrap();
        for (x, y) in c.iter().zip(&oracle) {
            prop_assert!(x.overlaps(y));
        }
    }

    #[test]
    fn opnorm_dominates_rayleigh_quotients((mu, la) in nodes_strategy(5), seed in any::<u64>()) {
        let nodes = nodes_of(&mu, &la);
        let m = build(&nodes, BITS);
        check_rayleigh(&m, seed);
        check_rayleigh(&cauchy_inverse(&nodes, BITS), seed);
    }
}

fn check_rayleigh(m: &CertMatrix, seed: u64) {
    let n = m.dim();
    let bound = opnorm_upper(m).hi().to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<(f64, f64)> = m.entries().iter().map(CertComplex::to_f64_pair).collect();
    for _ in 0..100 {
        let x: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let xn: f64 = x.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        let mut yn = 0.0;
        for i in 0..n {
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..n {
                let (a, b) = entries[i * n + j];
                re += a * x[j].0 - b * x[j].1;
                im += a * x[j].1 + b * x[j].0;
            }
            yn += re * re + im * im;
        }
        assert!(yn.sqrt() / xn <= bound * (1.0 + 1e-12), "rayleigh {} > bound {}", yn.sqrt() / xn, bound);
    }
}
