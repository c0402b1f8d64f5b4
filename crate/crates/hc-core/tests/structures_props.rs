use hc_core::graded::{symmetry_probe, Carrier};
use hc_core::morphisms::psi_map;
use hc_core::rng::SplitMix64;
use hc_core::structures::{
    bold_mu, bold_pi, courant_bracket, hamiltonian_vf, observable_tuple, pairing_minus,
    pairing_plus, random_degree, random_form, random_observable, random_section, validate_model,
    vinogradov_map, Element, HamPair, Model,
};
use proptest::prelude::*;

fn model(big: bool) -> Model {
    if big {
        Model::r4()
    } else {
        Model::r3()
    }
}

fn sections(rng: &mut SplitMix64, m: &Model, k: usize) -> Vec<Element> {
    (0..k)
        .map(|_| {
            let d = random_degree(rng, m);
            random_section(rng, m, d, 2)
        })
        .collect()
}

fn observables(rng: &mut SplitMix64, m: &Model, k: usize) -> Vec<Element> {
    let degrees: Vec<i32> = (0..k).map(|_| random_degree(rng, m)).collect();
    observable_tuple(rng, m, &degrees, 2)
}

#[test]
fn builtin_models_are_valid() {
    for name in ["r3", "r4", "r6"] {
        let m = Model::builtin(name).unwrap();
        assert!(validate_model(&m).is_ok(), "{name}");
    }
    let mut bad = Model::r3();
    bad.omega = bad.omega.mul_poly(&hc_core::cartan::Poly::var(0));
    assert!(validate_model(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn declared_symmetries_hold(seed in any::<u64>(), big in any::<bool>()) {
        let m = model(big);
        let mut rng = SplitMix64::new(seed);
        let top = m.n + 1;
        let maps = [bold_pi(&m), bold_mu(&m, top), pairing_minus(m.n), pairing_plus(m.n), psi_map(top), vinogradov_map(&m, top)];
        for map in &maps {
            for k in map.arities().iter().filter(|&k| k >= 2) {
                let args = sections(&mut rng, &m, k);
                let pos = rng.below(k - 1);
                prop_assert_ne!(symmetry_probe(map, &args, pos), Some(false), "{} arity {}", map.name(), k);
            }
        }
    }

    #[test]
    fn hamiltonian_fields_solve_the_defining_equation(seed in any::<u64>(), big in any::<bool>()) {
        let m = model(big);
        let mut rng = SplitMix64::new(seed);
        let e = random_observable(&mut rng, &m, 0, 2);
        let v = hamiltonian_vf(&e.form, &m).unwrap();
        let mut check = e.form.d();
        check += &m.omega.contract(&v);
        prop_assert!(check.is_zero());
        prop_assert_eq!(&v, &e.field);
        let pair = HamPair::new(e.form.clone(), v, &m).unwrap();
        prop_assert_eq!(pair.element(&m), e);
    }

    #[test]
    fn every_one_form_is_hamiltonian_on_r3(seed in any::<u64>()) {
        let m = Model::r3();
        let mut rng = SplitMix64::new(seed);
        let alpha = random_form(&mut rng, 3, 1, 2);
        let v = hamiltonian_vf(&alpha, &m).unwrap();
        let mut check = alpha.d();
        check += &m.omega.contract(&v);
        prop_assert!(check.is_zero());
    }

    #[test]
    fn degree_filter(seed in any::<u64>(), big in any::<bool>(), extra in 0usize..3) {
        let m = model(big);
        let mut rng = SplitMix64::new(seed);
        let k = 2 + extra;
        let mut degrees = vec![0; k];
        degrees[0] = -1;
        degrees[k - 1] = -(1 + rng.below(m.n - 1) as i32);
        let args = observable_tuple(&mut rng, &m, &degrees, 2);
        prop_assert!(vinogradov_map(&m, 4).eval(&args).is_zero());
    }

    #[test]
    fn twisted_bracket_closes_on_hamiltonian_pairs(seed in any::<u64>(), big in any::<bool>()) {
        let m = model(big);
        let mut rng = SplitMix64::new(seed);
        let a = random_observable(&mut rng, &m, 0, 2);
        let b = random_observable(&mut rng, &m, 0, 2);
        let c = courant_bracket(&a, &b, Some(&m.omega), m.n);
        prop_assert!(HamPair::new(c.form.clone(), c.field.clone(), &m).is_ok());
        prop_assert_eq!(&c.field, &a.field.bracket(&b.field));
    }

    #[test]
    fn pairings_on_sections(seed in any::<u64>(), big in any::<bool>()) {
        let m = model(big);
        let mut rng = SplitMix64::new(seed);
        let a = random_section(&mut rng, &m, 0, 2);
        let b = random_section(&mut rng, &m, 0, 2);
        let minus = pairing_minus(m.n).eval(&[a.clone(), b.clone()]);
        let mut expected = b.form.contract(&a.field);
        expected -= &a.form.contract(&b.field);
        prop_assert_eq!(minus.form, expected.scale(&hc_core::qr(1, 2)));
        let plus = pairing_plus(m.n).eval(&[a.clone(), b.clone()]);
        let mut expected = b.form.contract(&a.field);
        expected += &a.form.contract(&b.field);
        prop_assert_eq!(plus.form, expected.scale(&hc_core::qr(1, 2)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn nilpotency_probes(seed in any::<u64>(), big in any::<bool>(), k in 1usize..5) {
        let m = model(big);
        let mut rng = SplitMix64::new(seed);
        let args = observables(&mut rng, &m, k);
        let pi = hc_core::nr::LinftyStructure::new(bold_pi(&m));
        let mu = hc_core::nr::LinftyStructure::new(bold_mu(&m, m.n + 2));
        prop_assert!(pi.nilpotency_probe(&args).is_zero());
        prop_assert!(mu.nilpotency_probe(&args).is_zero());
    }
}
