mod common;

use common::{deep, prefix};
use hyperseed::cauchy::{elimination, CertMatrix, Provenance};
use hyperseed::dynamics::{
    assemble, brute_spectrum, char_poly, eigen_residual, eigenvector, orbit, pairing_error, power_is_one,
    root_of_unity_order, start_vector, Arithmetic, OperatorTruncation, ORACLE_TOLERANCE,
};
use hyperseed::exactcircle::{unit_value, vec_norm, Angle, CertComplex, CertScalar};
use hyperseed::Error;
use proptest::prelude::*;
use rug::Float;

const BITS: u32 = 4096;

#[test]
fn one_dimensional_section_multiplies_by_mu_one() {
    let s = deep();
    let t = assemble(s, 1).unwrap();
    let m = t.dense(BITS);
    assert!(m.get(0, 0).overlaps(&unit_value(&s.step(1).mu_n, BITS)));
    assert!(matches!(assemble(s, 11), Err(Error::DepthExceeded { requested: 11, depth: 10 })));
    assert!(matches!(assemble(s, 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn operator_json_round_trips() {
    let t = assemble(deep(), 10).unwrap();
    let back: OperatorTruncation = serde_json::from_str(&t.to_json_pretty()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn perturbation_has_rank_one() {
    let t = assemble(deep(), 5).unwrap();
    let d = t.without_perturbation().dense(BITS);
    let full = t.dense(BITS);
    let r = |i: usize, j: usize| full.get(i, j).sub(d.get(i, j));
    for i in 0..5 {
        for k in i + 1..5 {
            for j in 0..5 {
                for l in j + 1..5 {
                    let minor = r(i, j).mul(&r(k, l)).sub(&r(i, l).mul(&r(k, j)));
                    assert!(minor.contains_zero(), "({i},{k})x({j},{l})");
                }
            }
        }
    }
}

#[test]
fn char_poly_matches_elimination_determinant() {
    let t = assemble(deep(), 4).unwrap();
    let m = t.dense(BITS);
    let p = char_poly(m.entries(), 4, BITS);
    for (re, im) in [(0.3, -0.2), (1.5, 0.0), (-0.7, 0.9)] {
        let z = CertComplex::new(CertScalar::from_f64(re, BITS), CertScalar::from_f64(im, BITS));
        let shifted: Vec<CertComplex> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| {
                let e = m.get(i, j).neg();
                if i == j {
                    e.add(&z)
                } else {
                    e
                }
            })
            .collect();
        let det = elimination::det(&CertMatrix::new(4, shifted, Provenance::Direct)).unwrap();
        let val = p.iter().rev().fold(CertComplex::zero(BITS), |acc, c| acc.mul(&z).add(c));
        assert!(val.overlaps(&det));
    }
}

/// Both roots of `z² − tr·z + det`, in 512-bit floats.
fn quadratic_roots(m: &CertMatrix) -> [(f64, f64); 2] {
    let f = |x: &CertScalar| Float::with_val(512, x.mid());
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let (tr_re, tr_im) = (f(&a.re) + f(&d.re), f(&a.im) + f(&d.im));
    let ad = a.mul(d).sub(&b.mul(c));
    let (det_re, det_im) = (f(&ad.re), f(&ad.im));
    let disc_re = Float::with_val(512, &tr_re * &tr_re)
        - Float::with_val(512, &tr_im * &tr_im)
        - Float::with_val(512, 4 * &det_re);
    let disc_im = Float::with_val(512, 2 * Float::with_val(512, &tr_re * &tr_im)) - Float::with_val(512, 4 * &det_im);
    let r = Float::with_val(512, disc_re.hypot_ref(&disc_im));
    let s_re = (Float::with_val(512, &r + &disc_re) / 2u32).sqrt();
    let mut s_im = (Float::with_val(512, &r - &disc_re) / 2u32).sqrt();
    if disc_im < 0 {
        s_im = -s_im;
    }
    let root = |sign: f64| {
        let re = Float::with_val(512, &tr_re + Float::with_val(512, sign * s_re.clone())) / 2u32;
        let im = Float::with_val(512, &tr_im + Float::with_val(512, sign * s_im.clone())) / 2u32;
        (re.to_f64(), im.to_f64())
    };
    [root(1.0), root(-1.0)]
}

#[test]
fn spectrum_oracle_small_cases() {
    let s = deep();
    let one = brute_spectrum(s, 1).unwrap();
    assert!(one[0].overlaps(&unit_value(&s.step(1).mu_n, BITS)));

    let two = brute_spectrum(s, 2).unwrap();
    let roots = quadratic_roots(&assemble(s, 2).unwrap().dense(BITS));
    for z in &two {
        let (re, im) = z.to_f64_pair();
        assert!(roots.iter().any(|(x, y)| (x - re).hypot(y - im) < 1e-14));
    }
    for (i, z) in two.iter().enumerate() {
        let (re, im) = z.to_f64_pair();
        let (mr, mi) = unit_value(&s.step(i + 1).mu_n, 64).to_f64_pair();
        assert!((re - mr).hypot(im - mi) < 1e-14);
    }
    assert!(matches!(brute_spectrum(s, 7), Err(Error::InvalidArgument(_))));
    assert!(matches!(brute_spectrum(&prefix(3), 4), Err(Error::DepthExceeded { .. })));
}

#[test]
fn spectrum_oracle_agrees_with_construction() {
    let s = deep();
    for n in 1..=6 {
        let eigs = brute_spectrum(s, n).unwrap();
        assert!(pairing_error(&eigs, s).hi().to_f64() < ORACLE_TOLERANCE);
        for z in &eigs {
            let defect = z.abs().sub(&CertScalar::from_i64(1, BITS)).abs();
            assert!(defect.hi().to_f64() < ORACLE_TOLERANCE);
        }
    }
}

#[test]
fn eigen_residuals_vanish_at_full_depth_and_react_to_faults() {
    let s = deep();
    for i in 1..=10 {
        let r = eigen_residual(s, 10, i).unwrap();
        assert!(r.contains_zero());
        assert!(r.width().to_f64() < 2f64.powi(-64));
    }
    let mut bad = s.clone();
    for st in &mut bad.steps {
        st.a_n = st.a_n.mul(&CertScalar::from_f64(1.01, BITS));
    }
    assert!(eigen_residual(&bad, 10, 1).unwrap().lo().to_f64() > 1e-6);
    assert!(matches!(eigen_residual(s, 10, 11), Err(Error::InvalidArgument(_))));
}

#[test]
fn every_eigenvalue_is_an_exact_root_of_unity() {
    assert_eq!(root_of_unity_order(&Angle::zero()), 1);
    assert_eq!(root_of_unity_order(&Angle::normalize(1, 1)), 2);
    assert_eq!(root_of_unity_order(&Angle::normalize(3, 3)), 8);
    for st in &deep().steps {
        let k = root_of_unity_order(&st.mu_n);
        assert!(power_is_one(&st.mu_n, &k));
        assert!(!power_is_one(&st.mu_n, &(k.clone() / 2u32)));
        assert_eq!(k, rug::Integer::from(1) << st.mu_n.log2_denominator());
    }
}

#[test]
fn orbits_record_every_iterate() {
    let s = prefix(5);
    let t = assemble(&s, 5).unwrap();
    let x0 = start_vector("e1", &s, 5).unwrap();
    let trace = orbit(&t, &x0, 0, &[], BITS, Arithmetic::Midpoint).unwrap();
    assert_eq!(trace.records.len(), 1);
    assert_eq!(trace.records[0].norm, 1.0);

    let target = start_vector("e2", &s, 5).unwrap();
    let trace = orbit(&t, &x0, 7, &[target.clone(), x0.clone()], BITS, Arithmetic::Certified).unwrap();
    assert_eq!(trace.records.len(), 8);
    assert_eq!(trace.records[0].dists, vec![2f64.sqrt(), 0.0]);
    let csv = trace.to_csv();
    assert!(csv.starts_with("iter,norm,dist_1,dist_2\n"));
    assert_eq!(csv.lines().count(), 9);

    assert!(orbit(&t, &vec![CertComplex::zero(BITS); 5], 3, &[], BITS, Arithmetic::Midpoint).is_err());
    assert!(orbit(&t, &x0[..3], 3, &[], BITS, Arithmetic::Midpoint).is_err());
    for bad in ["e0", "e6", "u9", "walk", "random:x"] {
        assert!(matches!(start_vector(bad, &s, 5), Err(Error::InvalidArgument(_))), "{bad}");
    }
}

#[test]
fn eigenvector_orbit_drift_is_bounded_by_the_residual() {
    let s = prefix(5);
    let t = assemble(&s, 5).unwrap();
    let x0 = eigenvector(&s, 1, 5, 5, BITS);
    let bound = eigen_residual(&s, 5, 1).unwrap().hi().to_f64();
    let trace = orbit(&t, &x0, 20, &[], BITS, Arithmetic::Midpoint).unwrap();
    for w in trace.records.windows(2) {
        assert!((w[1].norm - w[0].norm).abs() <= bound + 1e-14);
    }
    let u = start_vector("u1", &s, 5).unwrap();
    assert!(u.iter().zip(&x0).all(|(p, q)| p.overlaps(q)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unperturbed_section_is_unitary(seed in any::<u64>(), n in 1usize..=10) {
        let s = deep();
        let t = assemble(s, n).unwrap().without_perturbation();
        let x = start_vector(&format!("random:{seed}"), s, n).unwrap();
        let ratio = vec_norm(&t.apply(&x, BITS).unwrap(), BITS).to_f64() / vec_norm(&x, BITS).to_f64();
        prop_assert!((ratio - 1.0).abs() <= 2f64.powi(-40));
    }
}
