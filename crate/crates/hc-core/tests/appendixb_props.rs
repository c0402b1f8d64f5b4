use hc_core::appendixb::{
    build_system, column_labels, cross_validate, nested_commutator, nested_commutator_closed,
    solve, solve_range, transform_and_split, ColumnLabel,
};
use hc_core::combinatorics::{compositions, Q};
use hc_core::exec::Parallelism;
use proptest::prelude::*;

/// Coefficients of `u^j` in `prod_i (u^(a_i) - 1)`, expanded over subsets.
fn expand(n: usize, powers: &[usize]) -> Vec<Q> {
    let mut poly = vec![Q::from_integer(0.into()); n];
    let subsets = 1usize << powers.len();
    for mask in 0..subsets {
        let mut u = 0;
        let mut sign = 1i64;
        for (i, &a) in powers.iter().enumerate() {
            if mask & (1 << i) != 0 {
                u += a;
            } else {
                sign = -sign;
            }
        }
        poly[u] += Q::from_integer(sign.into());
    }
    poly
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nested_commutators_match_expansion(half in 2usize..10, parts in 1usize..5, pick in any::<proptest::sample::Index>()) {
        let n = 2 * half + 1;
        let all = compositions(n - 1, parts);
        let powers = pick.get(&all);
        let direct = expand(n, powers);
        prop_assert_eq!(nested_commutator(n, powers), direct.clone());
        prop_assert_eq!(nested_commutator_closed(n, powers), direct);
    }
}

#[test]
fn systems_certified_for_odd_n_up_to_21() {
    for (n, sol) in solve_range((5..=21).step_by(2).collect(), Parallelism::available()) {
        let sol = sol.unwrap();
        let sys = build_system(n).unwrap();
        let big_n = (n - 1) / 2;
        assert!(
            sol.certificates.all_hold(big_n),
            "n = {n}: {:?}",
            sol.certificates
        );
        assert!(sol.halves_agree);
        assert!(cross_validate(&sys, &sol).holds());
        assert_eq!(sol.rank, sys.columns.len());
        assert_eq!(sol.certificates.top_rank, big_n - 1);
    }
}

#[test]
fn column_layout() {
    let labels = column_labels(9);
    assert!(labels.iter().all(|l| match l {
        ColumnLabel::Triple { k3, k2 } => *k3 >= *k2,
        ColumnLabel::Quadruple { k4, k3 } => *k4 >= *k3,
    }));
    let sys = build_system(9).unwrap();
    assert_eq!(sys.matrix.len(), 9);
    assert!(sys.matrix.iter().all(|r| r.len() == labels.len()));
}

#[test]
fn fold_symmetry_of_rows() {
    for n in [5, 7, 9, 11] {
        let sys = build_system(n).unwrap();
        let folded = transform_and_split(&sys);
        assert!(folded.split_exact);
        assert_eq!(folded.rhs.len(), n);
        let mid = (n - 1) / 2;
        assert_eq!(folded.rhs[mid], sys.rhs[mid]);
        for k in 0..mid {
            assert_eq!(&folded.rhs[k] + &folded.rhs[n - 1 - k], sys.rhs[k].clone());
            assert_eq!(
                &folded.rhs[k] - &folded.rhs[n - 1 - k],
                sys.rhs[n - 1 - k].clone()
            );
        }
    }
}

#[test]
fn solution_determined() {
    let sys = build_system(11).unwrap();
    let sol = solve(&sys).unwrap();
    let values = sol.values();
    let residual: Vec<Q> = sys
        .matrix
        .iter()
        .map(|row| row.iter().zip(&values).map(|(a, x)| a * x).sum())
        .collect();
    assert_eq!(residual, sys.rhs);
}
