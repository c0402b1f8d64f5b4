use hc_core::cartan::{parse_form, parse_poly, parse_vector_field, Form, Poly, VectorField};
use hc_core::combinatorics::q;
use hc_core::rng::SplitMix64;
use hc_core::structures::{random_form, random_poly};
use proptest::prelude::*;

fn field(rng: &mut SplitMix64, dim: usize) -> VectorField {
    let mut x = VectorField::zero();
    for i in 0..dim {
        if rng.chance(2, 3) {
            x.add_component(i, &random_poly(rng, dim, 2));
        }
    }
    x
}

fn form(rng: &mut SplitMix64, dim: usize) -> (usize, Form) {
    let k = rng.below(dim + 1);
    (k, random_form(rng, dim, k, 2))
}

fn sign(e: usize) -> hc_core::Q {
    if e.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exterior_laws(seed in any::<u64>(), dim in 3usize..5) {
        let mut rng = SplitMix64::new(seed);
        let (k, a) = form(&mut rng, dim);
        let (l, b) = form(&mut rng, dim);
        let x = field(&mut rng, dim);
        let y = field(&mut rng, dim);
        prop_assert!(a.d().d().is_zero());
        prop_assert!(a.contract(&x).contract(&x).is_zero());
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&sign(k * l)));
        let mut leibniz = a.d().wedge(&b);
        leibniz += &a.wedge(&b.d()).scale(&sign(k));
        prop_assert_eq!(a.wedge(&b).d(), leibniz);
        let mut leibniz = a.contract(&x).wedge(&b);
        leibniz += &a.wedge(&b.contract(&x)).scale(&sign(k));
        prop_assert_eq!(a.wedge(&b).contract(&x), leibniz);
        let mut rhs = a.contract(&y).lie_derivative(&x);
        rhs -= &a.lie_derivative(&x).contract(&y);
        prop_assert_eq!(a.contract(&x.bracket(&y)), rhs);
        let mut rhs = a.lie_derivative(&y).lie_derivative(&x);
        rhs -= &a.lie_derivative(&x).lie_derivative(&y);
        prop_assert_eq!(a.lie_derivative(&x.bracket(&y)), rhs);
        prop_assert_eq!(a.lie_derivative(&x).d(), a.d().lie_derivative(&x));
    }

    #[test]
    fn coordinate_oracles(seed in any::<u64>(), dim in 1usize..6) {
        let mut rng = SplitMix64::new(seed);
        let f = random_poly(&mut rng, dim, 3);
        let x = field(&mut rng, dim);
        let y = field(&mut rng, dim);
        let mut df = Form::zero();
        for i in 0..dim {
            df += &Form::basis(&[i]).mul_poly(&f.partial(i));
        }
        prop_assert_eq!(Form::from_poly(f.clone()).d(), df.clone());
        let mut xf = Poly::zero();
        for (i, c) in x.components() {
            xf = &xf + &(c * &f.partial(*i));
        }
        prop_assert_eq!(x.apply(&f), xf.clone());
        prop_assert_eq!(df.contract(&x), Form::from_poly(xf));
        let commutator = &x.apply(&y.apply(&f)) - &y.apply(&x.apply(&f));
        prop_assert_eq!(x.bracket(&y).apply(&f), commutator);
        for i in 0..dim {
            let xi = x.component(i).cloned().unwrap_or_default();
            prop_assert_eq!(Form::basis(&[i]).contract(&x), Form::from_poly(xi));
        }
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), dim in 1usize..6) {
        let mut rng = SplitMix64::new(seed);
        let (_, a) = form(&mut rng, dim);
        let f = random_poly(&mut rng, dim, 3);
        let x = field(&mut rng, dim);
        prop_assert_eq!(parse_form(&a.to_string()).unwrap(), a);
        prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
        prop_assert_eq!(parse_vector_field(&x.to_string()).unwrap(), x);
    }
}

#[test]
fn parse_examples() {
    let w = parse_form("1 dx0^dx1^dx2 + x2 dx0^dx1").unwrap();
    assert_eq!(w.degrees(), vec![2, 3]);
    assert_eq!(
        parse_form("dx1^dx0").unwrap(),
        parse_form("-dx0^dx1").unwrap()
    );
    assert!(parse_form("dx0^dx0").unwrap().is_zero());
    assert!(parse_form("dx0 +").is_err());
    assert!(parse_vector_field("x0 dx1").is_err());
}
