use hc_core::combinatorics::{bernoulli, binomial, Q};
use hc_core::graded::Carrier;
use hc_core::morphisms::{
    desk_comoment, gauge_tau, increasing_tuples, pentagon_check, pentagon_scalar, psi_component,
    psi_map, rhsbm_sides, translation_comoment, Gauge, LieAlgebra,
};
use hc_core::nr::{verify_morphism, LinftyMorphism, LinftyStructure};
use hc_core::rng::SplitMix64;
use hc_core::structures::{
    bold_mu, bold_pi, mostly_top_tuple, pairing_minus, random_section, vinogradov_map, Model,
};
use hc_core::suites::{default_gauge_form, generator};
use proptest::prelude::*;

fn model(big: bool) -> Model {
    if big {
        Model::r4()
    } else {
        Model::r3()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn psi_is_a_morphism(seed in any::<u64>(), big in any::<bool>()) {
        let m = model(big);
        let top = m.n + 1;
        let f = LinftyMorphism::new(psi_map(top).dec(), LinftyStructure::new(bold_pi(&m)), LinftyStructure::new(bold_mu(&m, top)));
        let mut rng = SplitMix64::new(seed);
        for k in 1..=top {
            let args = mostly_top_tuple(&mut rng, &m, k, 2);
            prop_assert!(verify_morphism(&f, &args).is_zero());
        }
    }

    #[test]
    fn perturbed_psi_is_detected(seed in any::<u64>(), big in any::<bool>()) {
        let m = model(big);
        let top = m.n + 1;
        let bad = psi_map(top).add(&pairing_minus(m.n));
        let f = LinftyMorphism::new(bad.dec(), LinftyStructure::new(bold_pi(&m)), LinftyStructure::new(bold_mu(&m, top)));
        let mut rng = SplitMix64::new(seed);
        let detected = (0..8).any(|_| !verify_morphism(&f, &mostly_top_tuple(&mut rng, &m, 2, 2)).is_zero());
        prop_assert!(detected);
    }

    #[test]
    fn psi_depends_only_on_hamiltonian_pairs(seed in any::<u64>(), big in any::<bool>()) {
        let m = model(big);
        let mut rng = SplitMix64::new(seed);
        let args = mostly_top_tuple(&mut rng, &m, 2, 2);
        let rebuilt: Vec<_> = args
            .iter()
            .map(|e| if e.degree() == Some(0) {
                hc_core::structures::HamPair::from_form(e.form.clone(), &m).unwrap().element(&m)
            } else {
                e.clone()
            })
            .collect();
        let refs: Vec<_> = args.iter().collect();
        let rebuilt_refs: Vec<_> = rebuilt.iter().collect();
        prop_assert_eq!(psi_component(&refs), psi_component(&rebuilt_refs));
    }

    #[test]
    fn gauge_intertwines_twisted_brackets(seed in any::<u64>(), big in any::<bool>(), k in 1usize..4) {
        let m = model(big);
        let b = default_gauge_form(&m);
        let mut twisted = m.clone();
        twisted.omega = &m.omega + &b.d();
        let tau = gauge_tau(&b).dec();
        let lhs = tau.nr(&vinogradov_map(&m, 3).dec());
        let rhs = vinogradov_map(&twisted, 3).dec().compose(&tau);
        let mut rng = SplitMix64::new(seed);
        let args: Vec<_> = (0..k).map(|_| random_section(&mut rng, &m, 0, 2)).collect();
        prop_assert_eq!(lhs.eval(&args), rhs.eval(&args));
    }
}

#[test]
fn generator_has_no_even_terms_beyond_two() {
    let m = Model::r4();
    let p = generator(&m, 5);
    assert!(!p.arities().contains(1));
    let mut rng = SplitMix64::new(5);
    for _ in 0..10 {
        let args = mostly_top_tuple(&mut rng, &m, 4, 2);
        assert!(p.component(4).eval(&args).is_zero());
    }
}

#[test]
fn scalar_recursion_holds_far_out() {
    for m in 2..=40 {
        let direct: Q = (1..=m)
            .map(|l| Q::from_integer(binomial(m, l - 1)) * bernoulli(l - 1))
            .sum();
        assert_eq!(pentagon_scalar(m), direct);
        assert!(direct == Q::from_integer(0.into()), "m = {m}");
    }
}

#[test]
fn binomial_lemma_on_desk_and_translation() {
    let cases = [desk_comoment(), translation_comoment(4)];
    for (f, b) in &cases {
        for m in 1..=4 {
            for l in 1..=m {
                for t in increasing_tuples(f.lie.dim, m) {
                    let (lhs, rhs) = rhsbm_sides(f, b, m, l, &t);
                    assert_eq!(lhs, rhs, "m = {m}, l = {l}, tuple = {t:?}");
                }
            }
        }
    }
}

#[test]
fn pentagon_on_examples() {
    for (f, b) in [desk_comoment(), translation_comoment(4)] {
        let gauge = Gauge::new(&f.model, b).unwrap();
        let report =
            pentagon_check(&f, &gauge, 3, hc_core::exec::Parallelism::available()).unwrap();
        assert!(report.passed(), "{:?}", report.first_failure());
        assert!(f.validate().is_ok());
        assert!(f.twist(&gauge).unwrap().validate().is_ok());
    }
}

#[test]
fn translation_comoment_on_r6() {
    let (f, b) = translation_comoment(6);
    assert!(f.validate().is_ok());
    let gauge = Gauge::new(&f.model, b).unwrap();
    let report = pentagon_check(&f, &gauge, 2, hc_core::exec::Parallelism::available()).unwrap();
    assert!(report.passed());
}

#[test]
fn lie_algebra_jacobi() {
    let mut so3 = LieAlgebra::abelian(3);
    for (a, b, c) in [(0, 1, 2), (1, 2, 0)] {
        so3.brackets
            .entry((a, b))
            .or_default()
            .insert(c, Q::from_integer(1.into()));
    }
    so3.brackets
        .entry((0, 2))
        .or_default()
        .insert(1, Q::from_integer((-1).into()));
    assert!(so3.check_jacobi().is_ok());
    let mut broken = LieAlgebra::abelian(3);
    broken
        .brackets
        .entry((0, 1))
        .or_default()
        .insert(2, Q::from_integer(1.into()));
    broken
        .brackets
        .entry((1, 2))
        .or_default()
        .insert(0, Q::from_integer(1.into()));
    broken
        .brackets
        .entry((0, 2))
        .or_default()
        .insert(0, Q::from_integer(1.into()));
    assert!(broken.check_jacobi().is_err());
}
