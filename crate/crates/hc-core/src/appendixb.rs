//! The linear system in the coefficients of `E_j = 𝐒^j ∘ 𝝅₁ ∘ 𝐒^(n-1-j)`
//! whose solvability expresses `𝝅'_n = 𝝁_n` for odd `n`.
//!
//! Iterated commutators `[𝐒^a, X]` multiply by `u^a - v^a` when `E_j` is
//! identified with `u^j v^(n-1-j)`. Rows are ordered `E_(n-1), ..., E_0`.

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::combinatorics::{bernoulli, binomial, factorial, pow2, Q};
use crate::exec::{self, Parallelism};
use crate::linalg::{dot, Matrix, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppendixError {
    #[error("n must be odd and at least 5, got {0}")]
    InvalidN(usize),
    #[error("system for n = {0} is infeasible")]
    Infeasible(usize),
    #[error("system for n = {n} has rank {rank} < {columns}")]
    NotUnique {
        n: usize,
        rank: usize,
        columns: usize,
    },
}

/// Column label of the unknown multiplying an iterated commutator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColumnLabel {
    /// `[𝐒^k3, [𝐒^k2, [𝐒, 𝝅₁]]]`.
    Triple { k3: usize, k2: usize },
    /// `[𝐒^k4, [𝐒^k3, [𝐒, [𝐒, 𝝅₁]]]]`.
    Quadruple { k4: usize, k3: usize },
}

impl ColumnLabel {
    /// Exponents of the nested commutator, outermost first.
    pub fn powers(self) -> Vec<usize> {
        match self {
            ColumnLabel::Triple { k3, k2 } => vec![k3, k2, 1],
            ColumnLabel::Quadruple { k4, k3 } => vec![k4, k3, 1, 1],
        }
    }
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnLabel::Triple { k3, k2 } => write!(f, "a_{k3},{k2}"),
            ColumnLabel::Quadruple { k4, k3 } => write!(f, "a_{k4},{k3}"),
        }
    }
}

/// Coefficients of `[𝐒^(a_1), [𝐒^(a_2), ..., [𝐒^(a_r), 𝝅₁]]]` in the `E_j`,
/// indexed by `j`. The exponents must sum to `n - 1`.
pub fn nested_commutator(n: usize, powers: &[usize]) -> Vec<Q> {
    assert_eq!(powers.iter().sum::<usize>(), n - 1);
    let mut poly = vec![Q::zero(); n];
    poly[0] = Q::one();
    let mut top = 0;
    for &a in powers {
        let mut next = vec![Q::zero(); n];
        for e in 0..=top {
            if poly[e].is_zero() {
                continue;
            }
            next[e + a] += &poly[e];
            next[e] -= &poly[e];
        }
        poly = next;
        top += a;
    }
    poly
}

/// The same coefficients from the inclusion-exclusion closed forms for one
/// to four exponents.
pub fn nested_commutator_closed(n: usize, powers: &[usize]) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    let top = n - 1;
    let mut add = |j: usize, c: i64| out[j] += Q::from_integer(c.into());
    match powers {
        [_] => {
            add(top, 1);
            add(0, -1);
        }
        [k, l] => {
            add(top, 1);
            add(*k, -1);
            add(*l, -1);
            add(0, 1);
        }
        [_, _, _] => {
            add(top, 1);
            for &k in powers {
                add(top - k, -1);
                add(k, 1);
            }
            add(0, -1);
        }
        [_, _, _, _] => {
            add(top, 1);
            for (i, &k) in powers.iter().enumerate() {
                add(top - k, -1);
                add(k, -1);
                for &l in &powers[i + 1..] {
                    add(k + l, 1);
                }
            }
            add(0, 1);
        }
        _ => panic!("closed forms cover one to four exponents"),
    }
    out
}

/// `d = 1/(n-1)`.
pub fn coefficient_d(n: usize) -> Q {
    Q::new(1.into(), (n as i64 - 1).into())
}

/// `b_k` for even `2 <= k <= N`, halved at `k = N`.
pub fn coefficient_b(n: usize, k: usize) -> Q {
    let big_n = (n - 1) / 2;
    let m = n - 1;
    let mut b = -Q::from_integer(binomial(m, k)) * bernoulli(k) * bernoulli(m - k)
        / (bernoulli(m) * Q::from_integer(((k * (m - k)) as i64).into()));
    if k == big_n {
        b /= Q::from_integer(2.into());
    }
    b
}

/// Column labels in system order: triples by increasing `k3`, then quadruples by increasing `k4`.
pub fn column_labels(n: usize) -> Vec<ColumnLabel> {
    let mut out = Vec::new();
    let s3 = n - 2;
    for k3 in s3.div_ceil(2)..s3 {
        out.push(ColumnLabel::Triple { k3, k2: s3 - k3 });
    }
    let s4 = n - 3;
    for k4 in s4.div_ceil(2)..s4 {
        out.push(ColumnLabel::Quadruple { k4, k3: s4 - k4 });
    }
    out
}

fn to_rows(coeffs: Vec<Q>) -> Vec<Q> {
    coeffs.into_iter().rev().collect()
}

/// The system `M a = R` for odd `n >= 5`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorSystem {
    pub n: usize,
    pub big_n: usize,
    pub d: Q,
    pub b: Vec<(usize, Q)>,
    pub columns: Vec<ColumnLabel>,
    /// `n` rows labelled `E_(n-1), ..., E_0`.
    pub matrix: Vec<Vec<Q>>,
    pub rhs: Vec<Q>,
}

/// Coefficients of `2 E_(n-1) - 3 E_(n-2) + E_(n-3)`, indexed by `j`.
pub fn target_expression(n: usize) -> Vec<Q> {
    let mut t = vec![Q::zero(); n];
    t[n - 1] = Q::from_integer(2.into());
    t[n - 2] = Q::from_integer((-3).into());
    t[n - 3] = Q::one();
    t
}

pub fn build_system(n: usize) -> Result<CommutatorSystem, AppendixError> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(AppendixError::InvalidN(n));
    }
    let big_n = (n - 1) / 2;
    let d = coefficient_d(n);
    let b: Vec<(usize, Q)> = (2..=big_n)
        .step_by(2)
        .map(|k| (k, coefficient_b(n, k)))
        .collect();
    let mut rhs = target_expression(n);
    for (j, c) in nested_commutator(n, &[n - 1]).iter().enumerate() {
        rhs[j] -= &d * c;
    }
    for (k, bk) in &b {
        for (j, c) in nested_commutator(n, &[*k, n - 1 - k]).iter().enumerate() {
            rhs[j] -= bk * c;
        }
    }
    let columns = column_labels(n);
    let cols: Vec<Vec<Q>> = columns
        .iter()
        .map(|l| to_rows(nested_commutator(n, &l.powers())))
        .collect();
    let matrix = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(CommutatorSystem {
        n,
        big_n,
        d,
        b,
        columns,
        matrix,
        rhs: to_rows(rhs),
    })
}

/// Row operation `R_k ↦ (R_k + R_(n+1-k))/2`, `R_(n+1-k) ↦ (R_k - R_(n+1-k))/2` for `k <= N`.
pub fn fold_rows<T: Clone>(rows: &[T], combine: impl Fn(&T, &T, bool) -> T) -> Vec<T> {
    let n = rows.len();
    let half = n / 2;
    let mut out = rows.to_vec();
    for k in 0..half {
        let (a, b) = (&rows[k], &rows[n - 1 - k]);
        out[k] = combine(a, b, true);
        out[n - 1 - k] = combine(a, b, false);
    }
    out
}

fn fold_q(a: &Q, b: &Q, plus: bool) -> Q {
    let s = if plus { a + b } else { a - b };
    s / Q::from_integer(2.into())
}

fn fold_vec(a: &Vec<Q>, b: &Vec<Q>, plus: bool) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| fold_q(x, y, plus)).collect()
}

/// One decoupled half of the folded system.
#[derive(Clone, Debug, PartialEq)]
pub struct Subsystem {
    pub columns: Vec<ColumnLabel>,
    pub matrix: Vec<Vec<Q>>,
    pub rhs: Vec<Q>,
}

impl Subsystem {
    pub fn column(&self, j: usize) -> Vec<Q> {
        self.matrix.iter().map(|r| r[j].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        if self.matrix.is_empty() {
            return 0;
        }
        Matrix::from_rows(self.matrix.clone()).rank()
    }
}

/// The folded system `M' a = R'` and its top and bottom halves.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldedSystem {
    pub matrix: Vec<Vec<Q>>,
    pub rhs: Vec<Q>,
    pub top: Subsystem,
    pub bottom: Subsystem,
    /// Whether every dropped column was identically zero in its half.
    pub split_exact: bool,
}

pub fn transform_and_split(sys: &CommutatorSystem) -> FoldedSystem {
    let matrix = fold_rows(&sys.matrix, fold_vec);
    let rhs = fold_rows(&sys.rhs, fold_q);
    let cut = sys.big_n + 1;
    let mut split_exact = true;
    let mut half = |rows: std::ops::Range<usize>| {
        let mut keep = Vec::new();
        for (j, label) in sys.columns.iter().enumerate() {
            let zero = rows.clone().all(|i| matrix[i][j].is_zero());
            if !zero {
                keep.push(j);
            }
            let expected_zero = match label {
                ColumnLabel::Triple { .. } => rows.start == 0,
                ColumnLabel::Quadruple { .. } => rows.start != 0,
            };
            if expected_zero && !zero {
                split_exact = false;
            }
        }
        Subsystem {
            columns: keep.iter().map(|&j| sys.columns[j]).collect(),
            matrix: rows
                .clone()
                .map(|i| keep.iter().map(|&j| matrix[i][j].clone()).collect())
                .collect(),
            rhs: rows.map(|i| rhs[i].clone()).collect(),
        }
    };
    let top = half(0..cut);
    let bottom = half(cut..sys.n);
    FoldedSystem {
        matrix,
        rhs,
        top,
        bottom,
        split_exact,
    }
}

/// `v_1 = (1, ..., 1, 1/2)` of length `N + 1`.
pub fn top_v1(big_n: usize) -> Vec<Q> {
    let mut v = vec![Q::one(); big_n + 1];
    v[big_n] = Q::new(1.into(), 2.into());
    v
}

/// `v_2 = (N^2, (N-1)^2, ..., 1, 0)`.
pub fn top_v2(big_n: usize) -> Vec<Q> {
    (0..=big_n)
        .map(|i| Q::from_integer((((big_n - i) * (big_n - i)) as i64).into()))
        .collect()
}

/// `(1, 2, ..., N)`.
pub fn bottom_weights(big_n: usize) -> Vec<Q> {
    (1..=big_n)
        .map(|i| Q::from_integer((i as i64).into()))
        .collect()
}

/// `(0, ..., 0, 1/2, -3/2, (n-2)/(n-1))` of length `N`.
pub fn expected_bottom_rhs(n: usize) -> Vec<Q> {
    let big_n = (n - 1) / 2;
    let mut v = vec![Q::zero(); big_n];
    v[big_n - 3] = Q::new(1.into(), 2.into());
    v[big_n - 2] = Q::new((-3).into(), 2.into());
    v[big_n - 1] = Q::new((n as i64 - 2).into(), (n as i64 - 1).into());
    v
}

/// Orthogonality and rank certificates for the folded system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    pub split_exact: bool,
    pub top_columns_perp_v1: bool,
    pub top_columns_perp_v2: bool,
    pub top_rhs_perp_v1: bool,
    pub top_rhs_perp_v2: bool,
    pub bottom_columns_perp: bool,
    pub bottom_rhs_perp: bool,
    pub bottom_rhs_as_displayed: bool,
    pub top_rank: usize,
    pub bottom_rank: usize,
}

impl Certificates {
    pub fn all_hold(&self, big_n: usize) -> bool {
        self.split_exact
            && self.top_columns_perp_v1
            && self.top_columns_perp_v2
            && self.top_rhs_perp_v1
            && self.top_rhs_perp_v2
            && self.bottom_columns_perp
            && self.bottom_rhs_perp
            && self.bottom_rhs_as_displayed
            && self.top_rank == big_n - 1
            && self.bottom_rank == big_n - 1
    }
}

pub fn certificates(sys: &CommutatorSystem, folded: &FoldedSystem) -> Certificates {
    let big_n = sys.big_n;
    let perp =
        |sub: &Subsystem, v: &[Q]| (0..sub.columns.len()).all(|j| dot(&sub.column(j), v).is_zero());
    let (v1, v2, w) = (top_v1(big_n), top_v2(big_n), bottom_weights(big_n));
    Certificates {
        split_exact: folded.split_exact,
        top_columns_perp_v1: perp(&folded.top, &v1),
        top_columns_perp_v2: perp(&folded.top, &v2),
        top_rhs_perp_v1: dot(&folded.top.rhs, &v1).is_zero(),
        top_rhs_perp_v2: dot(&folded.top.rhs, &v2).is_zero(),
        bottom_columns_perp: perp(&folded.bottom, &w),
        bottom_rhs_perp: dot(&folded.bottom.rhs, &w).is_zero(),
        bottom_rhs_as_displayed: big_n < 3 || folded.bottom.rhs == expected_bottom_rhs(sys.n),
        top_rank: folded.top.rank(),
        bottom_rank: folded.bottom.rank(),
    }
}

/// Solution vector together with its certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSolution {
    pub n: usize,
    pub a: Vec<(ColumnLabel, Q)>,
    pub rank: usize,
    pub certificates: Certificates,
    /// The folded halves solved separately give the same vector.
    pub halves_agree: bool,
}

impl SystemSolution {
    pub fn values(&self) -> Vec<Q> {
        self.a.iter().map(|(_, v)| v.clone()).collect()
    }
}

fn solve_unique(n: usize, matrix: &[Vec<Q>], rhs: &[Q]) -> Result<Vec<Q>, AppendixError> {
    let columns = matrix.first().map_or(0, Vec::len);
    if columns == 0 {
        return if rhs.iter().all(Zero::is_zero) {
            Ok(Vec::new())
        } else {
            Err(AppendixError::Infeasible(n))
        };
    }
    let m = Matrix::from_rows(matrix.to_vec());
    match m.solve(rhs) {
        Solution::Unique(x) => Ok(x),
        Solution::Underdetermined { .. } => Err(AppendixError::NotUnique {
            n,
            rank: m.rank(),
            columns,
        }),
        Solution::Inconsistent => Err(AppendixError::Infeasible(n)),
    }
}

pub fn solve(sys: &CommutatorSystem) -> Result<SystemSolution, AppendixError> {
    let x = solve_unique(sys.n, &sys.matrix, &sys.rhs)?;
    let rank = Matrix::from_rows(sys.matrix.clone()).rank();
    let folded = transform_and_split(sys);
    let certificates = certificates(sys, &folded);
    let mut halves: Vec<Option<Q>> = vec![None; sys.columns.len()];
    let mut halves_agree = true;
    for sub in [&folded.top, &folded.bottom] {
        match solve_unique(sys.n, &sub.matrix, &sub.rhs) {
            Ok(part) => {
                for (label, v) in sub.columns.iter().zip(part) {
                    let j = sys.columns.iter().position(|c| c == label).expect("label");
                    halves[j] = Some(v);
                }
            }
            Err(_) => halves_agree = false,
        }
    }
    for (h, v) in halves.iter().zip(&x) {
        if h.as_ref() != Some(v) {
            halves_agree = false;
        }
    }
    Ok(SystemSolution {
        n: sys.n,
        a: sys.columns.iter().copied().zip(x).collect(),
        rank,
        certificates,
        halves_agree,
    })
}

/// Builds and solves every odd `n` in the range, in parallel.
pub fn solve_range(
    ns: Vec<usize>,
    mode: Parallelism,
) -> Vec<(usize, Result<SystemSolution, AppendixError>)> {
    exec::map(ns, mode, |n| (n, build_system(n).and_then(|s| solve(&s))))
}

/// Symbolic comparison of both sides in the `E_j` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    /// Coefficients indexed by `j` of the target expression.
    pub lhs: Vec<Q>,
    /// Coefficients of the commutator expansion with the solved `a`.
    pub rhs: Vec<Q>,
    /// `d + sum b_k + sum a_J`.
    pub leading_sum: Q,
    /// `n!/2^(n-1) (2 - d - sum b_k)`.
    pub a_from_coefficients: Q,
    /// `n!/2^(n-1) sum a_J`.
    pub a_from_solution: Q,
    /// The same quantity from the Bernoulli closed form.
    pub a_from_bernoulli: Q,
}

impl CrossValidation {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
            && self.leading_sum == Q::from_integer(2.into())
            && self.a_from_coefficients == self.a_from_solution
            && self.a_from_solution == self.a_from_bernoulli
    }
}

/// `n!/2^(n-1) ((2 - 1/(n-1)) + (1/(2 B_(n-1))) sum C(n-1,k1) B_k1 B_k2 / (k1 k2))`.
pub fn a_closed_form(n: usize) -> Q {
    let m = n - 1;
    let mut s = Q::zero();
    for k1 in 2..=m - 2 {
        let k2 = m - k1;
        s += Q::from_integer(binomial(m, k1)) * bernoulli(k1) * bernoulli(k2)
            / Q::from_integer(((k1 * k2) as i64).into());
    }
    let inner = Q::from_integer(2.into()) - coefficient_d(n)
        + s / (Q::from_integer(2.into()) * bernoulli(m));
    inner * Q::new(factorial(n), pow2(m))
}

pub fn cross_validate(sys: &CommutatorSystem, solution: &SystemSolution) -> CrossValidation {
    let n = sys.n;
    let mut rhs = vec![Q::zero(); n];
    let mut add = |coeffs: Vec<Q>, c: &Q| {
        for (j, v) in coeffs.into_iter().enumerate() {
            rhs[j] += v * c;
        }
    };
    add(nested_commutator_closed(n, &[n - 1]), &sys.d);
    for (k, bk) in &sys.b {
        add(nested_commutator_closed(n, &[*k, n - 1 - k]), bk);
    }
    for (label, a) in &solution.a {
        add(nested_commutator_closed(n, &label.powers()), a);
    }
    let sum_b: Q = sys.b.iter().map(|(_, v)| v.clone()).sum();
    let sum_a: Q = solution.a.iter().map(|(_, v)| v.clone()).sum();
    let scale = Q::new(factorial(n), pow2(n - 1));
    CrossValidation {
        lhs: target_expression(n),
        rhs,
        leading_sum: &sys.d + &sum_b + &sum_a,
        a_from_coefficients: &scale * (Q::from_integer(2.into()) - &sys.d - &sum_b),
        a_from_solution: &scale * sum_a,
        a_from_bernoulli: a_closed_form(n),
    }
}

/// Largest absolute numerator or denominator among the solution entries.
pub fn solution_height(solution: &SystemSolution) -> num::BigInt {
    solution
        .a
        .iter()
        .flat_map(|(_, v)| [v.numer().abs(), v.denom().abs()])
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::qr;

    fn col(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_integer(x.into())).collect()
    }

    #[test]
    fn n5_system() {
        let s = build_system(5).unwrap();
        assert_eq!(s.d, qr(1, 4));
        assert_eq!(s.b, vec![(2, qr(5, 8))]);
        let c0: Vec<Q> = s.matrix.iter().map(|r| r[0].clone()).collect();
        assert_eq!(c0, col(&[1, -2, 0, 2, -1]));
        let c1: Vec<Q> = s.matrix.iter().map(|r| r[1].clone()).collect();
        assert_eq!(c1, col(&[1, -4, 6, -4, 1]));
        assert_eq!(s.rhs, vec![qr(9, 8), q3(), qr(9, 4), Q::zero(), qr(-3, 8)]);
        assert_eq!(solve(&s).unwrap().values(), vec![qr(3, 4), qr(3, 8)]);
    }

    fn q3() -> Q {
        Q::from_integer((-3).into())
    }

    #[test]
    fn n7_system() {
        let s = build_system(7).unwrap();
        assert_eq!(s.b, vec![(2, qr(7, 16))]);
        let expected = [
            [1, 1, 1, 1],
            [-1, -2, -2, -3],
            [-1, 1, -1, 3],
            [0, 0, 4, -2],
            [1, -1, -1, 3],
            [1, 2, -2, -3],
            [-1, -1, 1, 1],
        ];
        for (row, e) in s.matrix.iter().zip(expected) {
            assert_eq!(row, &col(&e));
        }
        assert_eq!(
            s.rhs,
            vec![
                qr(67, 48),
                q3(),
                qr(23, 16),
                Q::zero(),
                qr(7, 16),
                Q::zero(),
                qr(-13, 48)
            ]
        );
        let f = transform_and_split(&s);
        assert_eq!(f.top.rhs, vec![qr(9, 16), qr(-3, 2), qr(15, 16), Q::zero()]);
        assert_eq!(f.bottom.rhs, vec![qr(1, 2), qr(-3, 2), qr(5, 6)]);
        assert_eq!(
            f.bottom.matrix,
            vec![col(&[-1, 1]), col(&[-1, -2]), col(&[1, 1])]
        );
        let sol = solve(&s).unwrap();
        assert_eq!(sol.values(), vec![qr(1, 6), qr(2, 3), qr(3, 16), qr(3, 8)]);
        assert!(sol.halves_agree);
    }

    #[test]
    fn n9_second_top_column() {
        let s = build_system(9).unwrap();
        let f = transform_and_split(&s);
        assert_eq!(f.top.columns[1], ColumnLabel::Quadruple { k4: 4, k3: 2 });
        assert_eq!(f.top.column(1), col(&[1, -2, 0, 2, -2]));
    }

    #[test]
    fn closed_forms_match_products() {
        for n in [5usize, 7, 9, 11] {
            for label in column_labels(n) {
                assert_eq!(
                    nested_commutator(n, &label.powers()),
                    nested_commutator_closed(n, &label.powers())
                );
            }
            for k in 1..n - 1 {
                assert_eq!(
                    nested_commutator(n, &[k, n - 1 - k]),
                    nested_commutator_closed(n, &[k, n - 1 - k])
                );
            }
        }
    }

    #[test]
    fn fold_twice_halves() {
        let rows = col(&[3, 5, 7, 11, 13]);
        let twice = fold_rows(&fold_rows(&rows, fold_q), fold_q);
        for (i, (a, b)) in twice.iter().zip(&rows).enumerate() {
            if i == 2 {
                assert_eq!(a, b);
            } else {
                assert_eq!(a * Q::from_integer(2.into()), *b);
            }
        }
    }

    #[test]
    fn odd_range_certified() {
        for (n, r) in solve_range((5..=15).step_by(2).collect(), Parallelism::Sequential) {
            let s = build_system(n).unwrap();
            let sol = r.unwrap();
            assert_eq!(sol.rank, n - 3);
            assert!(sol.halves_agree, "n = {n}");
            assert!(
                sol.certificates.all_hold(s.big_n),
                "n = {n}: {:?}",
                sol.certificates
            );
            assert!(cross_validate(&s, &sol).holds(), "n = {n}");
        }
    }

    #[test]
    fn invalid_n() {
        assert_eq!(build_system(6), Err(AppendixError::InvalidN(6)));
        assert_eq!(build_system(3), Err(AppendixError::InvalidN(3)));
    }
}
