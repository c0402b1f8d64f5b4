use hc_core::combinatorics::{factorial, q, Q};
use hc_core::graded::free::{random_skew, random_symmetric, FreeVec};
use hc_core::graded::{apply_block_operator, symmetry_probe, BlockKind, Carrier, MultiMap};
use hc_core::nr::{
    exp_morphism, pushforward_structure, verify_morphism, LinftyMorphism, LinftyStructure,
};
use hc_core::rng::SplitMix64;
use num::BigInt;
use proptest::prelude::*;

fn tuple(rng: &mut SplitMix64, n: usize) -> Vec<FreeVec> {
    (0..n)
        .map(|_| {
            let d = rng.range(-2, 2) as i32;
            FreeVec::random(rng, d)
        })
        .collect()
}

fn sum_of(terms: Vec<(i32, Vec<FreeVec>)>, f: &MultiMap<FreeVec>) -> FreeVec {
    let mut out = f.eval(&terms[0].1).zero_like();
    for (s, t) in terms {
        out.add_scaled(&f.eval(&t), &q(s as i64));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn declared_symmetry_survives_transpositions(seed in any::<u64>(), arity in 2usize..5) {
        let mut rng = SplitMix64::new(seed);
        let maps = [
            random_skew(seed, arity, 0),
            random_symmetric(seed ^ 1, arity, 1),
            random_skew(seed ^ 2, 2, 0).nr(&random_skew(seed ^ 3, arity - 1, 0)),
            random_symmetric(seed ^ 4, 2, 1).commutator(&random_symmetric(seed ^ 5, arity - 1, 0)),
        ];
        for m in &maps {
            let k = m.arities().max().unwrap();
            for probe in 0..50 {
                let args = tuple(&mut rng, k);
                let pos = probe % (k - 1);
                prop_assert_ne!(symmetry_probe(m, &args, pos), Some(false));
            }
        }
    }

    #[test]
    fn decalage_round_trip(seed in any::<u64>(), arity in 1usize..5) {
        let mut rng = SplitMix64::new(seed);
        let f = random_skew(seed, arity, 1 - arity as i32);
        let g = random_symmetric(seed ^ 9, arity, 1);
        for _ in 0..5 {
            let args = tuple(&mut rng, arity);
            prop_assert_eq!(f.dec().dec_inv().eval(&args), f.eval(&args));
            prop_assert_eq!(g.dec_inv().dec().eval(&args), g.eval(&args));
        }
    }

    #[test]
    fn product_arity_bookkeeping(seed in any::<u64>(), a in 1usize..5, b in 1usize..5) {
        let x = random_symmetric(seed, a, 1);
        let y = random_symmetric(seed ^ 7, b, 0);
        prop_assert_eq!(x.nr(&y).arities().iter().collect::<Vec<_>>(), vec![a + b - 1]);
        prop_assert_eq!(x.nr(&y).degree(), x.degree() + y.degree());
    }

    #[test]
    fn commutator_graded_jacobi(seed in any::<u64>(), da in 0i32..2, db in 0i32..2) {
        let a = random_symmetric(seed, 2, da);
        let b = random_symmetric(seed ^ 11, 2, db);
        let c = random_symmetric(seed ^ 13, 1, 1);
        let sign = if (da * db) % 2 == 0 { q(1) } else { q(-1) };
        let jac = MultiMap::linear_combination(vec![
            (q(1), a.commutator(&b).commutator(&c)),
            (q(-1), a.commutator(&b.commutator(&c))),
            (sign, b.commutator(&a.commutator(&c))),
        ]);
        let mut rng = SplitMix64::new(seed);
        for _ in 0..4 {
            prop_assert!(jac.eval(&tuple(&mut rng, 3)).is_zero());
        }
    }

    #[test]
    fn block_operator_symmetrizes(seed in any::<u64>(), arity in 1usize..5) {
        let mut rng = SplitMix64::new(seed);
        let shape = vec![1; arity];
        let k_fact = Q::from_integer(factorial(arity));
        let skew = random_skew(seed, arity, 0);
        let zeros = vec![0; arity];
        let args: Vec<FreeVec> = (0..arity).map(|_| FreeVec::random(&mut rng, 0)).collect();
        let terms = apply_block_operator(BlockKind::P, &shape, &args, &zeros).unwrap();
        prop_assert_eq!(BigInt::from(terms.len()), factorial(arity));
        prop_assert_eq!(sum_of(terms, &skew), skew.eval(&args).scaled(&k_fact));
        let sym = random_symmetric(seed ^ 3, arity, 1);
        let args: Vec<FreeVec> = (0..arity).map(|_| FreeVec::random(&mut rng, 1)).collect();
        let terms = apply_block_operator(BlockKind::B, &shape, &args, &vec![0; arity]).unwrap();
        prop_assert_eq!(sum_of(terms, &sym), sym.eval(&args).scaled(&k_fact));
    }

    #[test]
    fn exp_intertwines_pushforward(seed in any::<u64>()) {
        let m = MultiMap::linear_combination(vec![
            (q(1), random_symmetric(seed, 1, 1)),
            (q(1), random_symmetric(seed ^ 1, 2, 1)),
            (q(1), random_symmetric(seed ^ 2, 3, 1)),
        ]);
        let p = MultiMap::linear_combination(vec![
            (q(1), random_symmetric(seed ^ 3, 2, 0)),
            (q(1), random_symmetric(seed ^ 4, 3, 0)),
        ]);
        let max = 3;
        let source = LinftyStructure::new(m);
        let target = pushforward_structure(&source, &p, max).unwrap();
        let f = LinftyMorphism::new(exp_morphism(&p, max).unwrap(), source, target);
        let mut rng = SplitMix64::new(seed);
        for k in 1..=max {
            prop_assert!(verify_morphism(&f, &tuple(&mut rng, k)).is_zero());
        }
    }
}
