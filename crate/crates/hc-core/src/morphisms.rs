//! The embedding of observables into the Vinogradov algebra, gauge
//! transformations, homotopy comoment maps and the pentagon.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::cartan::{Form, Monomial, Poly, VectorField};
use crate::combinatorics::{
    bernoulli, binomial, factorial, phi_coefficient, pow2, q, sign_varsigma, Unshuffles, Q,
};
use crate::exec::{self, Parallelism};
use crate::graded::{Arities, Carrier, Convention, MultiMap, Symmetry};
use crate::linalg::{Matrix, Solution};
use crate::structures::{
    pairing_minus, rogers_map, validate_model, Coordinate, Element, Model, ModelError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("gauge form must be an {expected}-form")]
    GaugeDegree { expected: usize },
    #[error("B is not invariant under rho(ξ{0})")]
    NotInvariant(usize),
    #[error("rho(ξ{0}) does not preserve omega")]
    ActionNotSymplectic(usize),
    #[error("rho is not a Lie algebra morphism on (ξ{0}, ξ{1})")]
    ActionNotMorphism(usize, usize),
    #[error("Jacobi identity fails on (ξ{0}, ξ{1}, ξ{2})")]
    Jacobi(usize, usize, usize),
    #[error("d f1(ξ{0}) != -ι_rho(ξ{0}) omega")]
    NotPrimitive(usize),
    #[error("morphism defect at arity {arity} on {tuple:?}: {value}")]
    Defect {
        arity: usize,
        tuple: Vec<usize>,
        value: String,
    },
    #[error("no polynomial solution for component {0} within the ansatz")]
    Unsolvable(usize),
    #[error("expected {expected} rho entries, got {found}")]
    RhoCount { expected: usize, found: usize },
}

/// `ψ_k` by the closed formula; `ψ_1` copies field and form.
pub fn psi_component(args: &[&Element]) -> Element {
    let k = args.len();
    let n = args[0].n;
    if k == 1 {
        return Element::pair(n, args[0].field.clone(), args[0].form.clone());
    }
    let mut out = Form::zero();
    for j in 0..k {
        let mut beta = args[j].form.clone();
        for l in (0..k).rev() {
            if l != j {
                beta = beta.contract(&args[l].field);
            }
        }
        if (k - 1 - j).is_multiple_of(2) {
            out += &beta;
        } else {
            out -= &beta;
        }
    }
    Element::form(n, out.scale(&bernoulli(k - 1)))
}

/// `ψ` as an unshifted family of arities `1..=max_arity`.
pub fn psi_map(max_arity: usize) -> MultiMap<Element> {
    MultiMap::base(
        "ψ",
        Arities::range(1, max_arity),
        0,
        Convention::Unshifted,
        Symmetry::Skew,
        psi_component,
    )
}

/// `φ = id + sum_k φ_k ⟨,⟩₋^(k-1)` built from pairing powers.
pub fn phi_from_pairing(n: usize, max_arity: usize) -> MultiMap<Element> {
    let pair = pairing_minus(n);
    let mut terms = vec![(Q::one(), MultiMap::identity(Convention::Unshifted))];
    for k in 2..=max_arity {
        let c = phi_coefficient(k);
        if !c.is_zero() {
            terms.push((c, pair.power(k - 1)));
        }
    }
    MultiMap::linear_combination(terms).with_name("φ")
}

/// Closed form of `⟨,⟩₋^m (B, X_1, ..., X_m) = -ς(m) m!/2^m ι_(X_m) ... ι_(X_1) B`.
pub fn insertion_closed(m: usize, b: &Form, fields: &[&VectorField]) -> Form {
    assert_eq!(fields.len(), m);
    let inner = fields.iter().fold(b.clone(), |acc, x| acc.contract(x));
    let c = Q::new(factorial(m), pow2(m)) * q(-sign_varsigma(m) as i64);
    inner.scale(&c)
}

/// Closed form of `⟨,⟩₋^m (v_1, ..., v_(m+1))`.
pub fn pairing_power_closed(m: usize, args: &[&Element]) -> Form {
    assert_eq!(args.len(), m + 1);
    let mut out = Form::zero();
    for j in 0..=m {
        let mut beta = args[j].form.clone();
        for l in (0..=m).rev() {
            if l != j {
                beta = beta.contract(&args[l].field);
            }
        }
        // 1-based exponent (j+1) + m + 1.
        if (j + m).is_multiple_of(2) {
            out += &beta;
        } else {
            out -= &beta;
        }
    }
    out.scale(&Q::new(factorial(m), pow2(m)))
}

/// Gauge data: the `n`-form `B` and the twisted model `ω + dB`.
#[derive(Clone, Debug)]
pub struct Gauge {
    pub b: Form,
    pub twisted: Model,
}

impl Gauge {
    pub fn new(model: &Model, b: Form) -> Result<Self, MorphismError> {
        if !b.is_zero() && b.degree() != Some(model.n) {
            return Err(MorphismError::GaugeDegree { expected: model.n });
        }
        let mut twisted = model.clone();
        twisted.omega = &model.omega + &b.d();
        twisted.name = format!("{}+dB", model.name);
        validate_model(&twisted)?;
        Ok(Gauge { b, twisted })
    }
}

/// Strict gauge morphism `(X, α) ↦ (X, α + ι_X B)`, identity in negative degrees.
pub fn gauge_tau(b: &Form) -> MultiMap<Element> {
    let b = b.clone();
    MultiMap::base(
        "τ_B",
        Arities::single(1),
        0,
        Convention::Unshifted,
        Symmetry::Skew,
        move |a: &[&Element]| {
            let mut out = a[0].clone();
            if a[0].degree() == Some(0) {
                out.form += &b.contract(&a[0].field);
            }
            out
        },
    )
}

/// Finite-dimensional Lie algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub dim: usize,
    /// `[ξ_a, ξ_b]` for `a < b`.
    pub brackets: BTreeMap<(usize, usize), BTreeMap<usize, Q>>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> BTreeMap<usize, Q> {
        if a == b {
            return BTreeMap::new();
        }
        let (lo, hi, sign) = if a < b {
            (a, b, Q::one())
        } else {
            (b, a, -Q::one())
        };
        self.brackets
            .get(&(lo, hi))
            .map(|m| m.iter().map(|(k, v)| (*k, v * &sign)).collect())
            .unwrap_or_default()
    }

    pub fn bracket(&self, x: &BTreeMap<usize, Q>, y: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (c, v) in self.bracket_basis(*a, *b) {
                    *out.entry(c).or_insert_with(Q::zero) += ca * cb * v;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn check_jacobi(&self) -> Result<(), MorphismError> {
        let basis = |i: usize| BTreeMap::from([(i, Q::one())]);
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                for c in b + 1..self.dim {
                    let mut total: BTreeMap<usize, Q> = BTreeMap::new();
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let inner = self.bracket(&basis(y), &basis(z));
                        for (k, v) in self.bracket(&basis(x), &inner) {
                            *total.entry(k).or_insert_with(Q::zero) += v;
                        }
                    }
                    if total.values().any(|v| !v.is_zero()) {
                        return Err(MorphismError::Jacobi(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// The bracket as an unshifted skew map on the Lie parts of elements.
    pub fn bracket_map(&self, n: usize) -> MultiMap<Element> {
        let lie = self.clone();
        MultiMap::base(
            "[,]_g",
            Arities::single(2),
            1,
            Convention::Unshifted,
            Symmetry::Skew,
            move |a: &[&Element]| {
                let mut out = Element::zero(n);
                out.lie = lie.bracket(&a[0].lie, &a[1].lie);
                out
            },
        )
    }
}

/// Strictly increasing index tuples of length `k` drawn from `0..dim`.
pub fn increasing_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, k, &mut Vec::new(), &mut out);
    out
}

/// Homotopy comoment map `f: g → L∞(M, ω)` with components on basis tuples.
#[derive(Clone, Debug)]
pub struct ComomentMap {
    pub model: Model,
    pub lie: LieAlgebra,
    pub rho: Vec<VectorField>,
    /// `f_k(ξ_(i_1), ..., ξ_(i_k))` for strictly increasing index tuples.
    pub components: BTreeMap<Vec<usize>, Form>,
}

/// Outcome of [`ComomentMap::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComomentReport {
    pub checked_tuples: usize,
}

impl ComomentMap {
    pub fn component(&self, tuple: &[usize]) -> Form {
        self.components.get(tuple).cloned().unwrap_or_default()
    }

    /// The morphism as an unshifted family on Lie parts.
    pub fn as_map(&self) -> MultiMap<Element> {
        let n = self.model.n;
        let rho = Arc::new(self.rho.clone());
        let comps = Arc::new(self.components.clone());
        MultiMap::base(
            "f",
            Arities::range(1, n),
            0,
            Convention::Unshifted,
            Symmetry::Skew,
            move |a: &[&Element]| {
                let k = a.len();
                let mut out = Element::zero(n);
                let lies: Vec<Vec<(usize, Q)>> = a
                    .iter()
                    .map(|x| x.lie.iter().map(|(i, c)| (*i, c.clone())).collect())
                    .collect();
                if lies.iter().any(Vec::is_empty) {
                    return out;
                }
                let mut idx = vec![0usize; k];
                loop {
                    let chosen: Vec<usize> = (0..k).map(|s| lies[s][idx[s]].0).collect();
                    let mut coef = Q::one();
                    for s in 0..k {
                        coef *= &lies[s][idx[s]].1;
                    }
                    let mut order: Vec<usize> = (0..k).collect();
                    order.sort_by_key(|&s| chosen[s]);
                    let sorted: Vec<usize> = order.iter().map(|&s| chosen[s]).collect();
                    if sorted.windows(2).all(|w| w[0] < w[1]) {
                        let sign = crate::combinatorics::permutation_sign(&order);
                        let c = coef * q(sign as i64);
                        if let Some(form) = comps.get(&sorted) {
                            out.form += &form.scale(&c);
                        }
                        if k == 1 {
                            out.field += &rho[sorted[0]].scale(&c);
                        }
                    }
                    let mut pos = 0;
                    loop {
                        if pos == k {
                            return out;
                        }
                        idx[pos] += 1;
                        if idx[pos] < lies[pos].len() {
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                }
            },
        )
    }

    /// `Dec(f) ∘̄ Dec([,]) - Dec(π) ∘ Dec(f)`.
    pub fn defect_map(&self) -> MultiMap<Element> {
        let f = self.as_map().dec();
        let src = self.lie.bracket_map(self.model.n).dec();
        let tgt = rogers_map(&self.model).dec();
        f.nr(&src).sub(&tgt.compose(&f))
    }

    fn basis_args(&self, tuple: &[usize]) -> Vec<Element> {
        tuple
            .iter()
            .map(|&i| Element::lie_basis(self.model.n, i))
            .collect()
    }

    /// Defect at one basis tuple.
    pub fn defect(&self, tuple: &[usize]) -> Element {
        self.defect_map().eval(&self.basis_args(tuple))
    }

    /// Checks the action, the primitive condition and the morphism equation up to arity `n + 1`.
    pub fn validate(&self) -> Result<ComomentReport, MorphismError> {
        if self.rho.len() != self.lie.dim {
            return Err(MorphismError::RhoCount {
                expected: self.lie.dim,
                found: self.rho.len(),
            });
        }
        self.lie.check_jacobi()?;
        let omega = &self.model.omega;
        for (i, r) in self.rho.iter().enumerate() {
            if !omega.lie_derivative(r).is_zero() {
                return Err(MorphismError::ActionNotSymplectic(i));
            }
            let mut check = self.component(&[i]).d();
            check += &omega.contract(r);
            if !check.is_zero() {
                return Err(MorphismError::NotPrimitive(i));
            }
        }
        for a in 0..self.lie.dim {
            for b in a + 1..self.lie.dim {
                let mut image = VectorField::zero();
                for (c, v) in self.lie.bracket_basis(a, b) {
                    image += &self.rho[c].scale(&v);
                }
                if self.rho[a].bracket(&self.rho[b]) != image {
                    return Err(MorphismError::ActionNotMorphism(a, b));
                }
            }
        }
        let defect = self.defect_map();
        let mut checked = 0;
        for k in 1..=self.model.n + 1 {
            for t in increasing_tuples(self.lie.dim, k) {
                let value = defect.eval(&self.basis_args(&t));
                checked += 1;
                if !value.is_zero() {
                    return Err(MorphismError::Defect {
                        arity: k,
                        tuple: t,
                        value: value.to_string(),
                    });
                }
            }
        }
        Ok(ComomentReport {
            checked_tuples: checked,
        })
    }

    /// Solves for all `f_k` with the given arity by linear algebra on a polynomial ansatz.
    pub fn solve_component(&mut self, k: usize, max_poly_degree: u32) -> Result<(), MorphismError> {
        let n = self.model.n;
        let m = self.model.dimension;
        let tuples = increasing_tuples(self.lie.dim, k);
        for t in &tuples {
            self.components.remove(t);
        }
        let masks: Vec<u16> = (0u32..(1 << m))
            .filter(|s| s.count_ones() as usize == n - k)
            .map(|s| s as u16)
            .collect();
        let monomials = monomials_up_to(m, max_poly_degree);
        let mut unknowns = Vec::new();
        for t in &tuples {
            for &mask in &masks {
                for &mono in &monomials {
                    unknowns.push((t.clone(), mask, mono));
                }
            }
        }
        let defect_vector = |cm: &ComomentMap| -> BTreeMap<(usize, Coordinate), Q> {
            let map = cm.defect_map();
            let mut out = BTreeMap::new();
            for (ti, t) in tuples.iter().enumerate() {
                for (c, v) in map.eval(&cm.basis_args(t)).coordinates() {
                    out.insert((ti, c), v);
                }
            }
            out
        };
        let base = defect_vector(self);
        let columns: Vec<BTreeMap<(usize, Coordinate), Q>> = exec::map(
            unknowns.clone(),
            Parallelism::available(),
            |(t, mask, mono)| {
                let mut trial = self.clone();
                trial
                    .components
                    .insert(t, Form::term(Poly::monomial(Q::one(), mono), mask));
                let mut col = defect_vector(&trial);
                for (key, v) in &base {
                    let e = col.entry(*key).or_insert_with(Q::zero);
                    *e -= v;
                }
                col.retain(|_, v| !v.is_zero());
                col
            },
        );
        let mut keys: Vec<(usize, Coordinate)> = base.keys().copied().collect();
        for col in &columns {
            keys.extend(col.keys().copied());
        }
        keys.sort();
        keys.dedup();
        let rows: Vec<Vec<Q>> = keys
            .iter()
            .map(|key| {
                columns
                    .iter()
                    .map(|col| col.get(key).cloned().unwrap_or_else(Q::zero))
                    .collect()
            })
            .collect();
        let rhs: Vec<Q> = keys
            .iter()
            .map(|key| -base.get(key).cloned().unwrap_or_else(Q::zero))
            .collect();
        let solution = if rows.is_empty() {
            vec![Q::zero(); unknowns.len()]
        } else {
            match Matrix::from_rows(rows).solve(&rhs) {
                Solution::Unique(x) => x,
                Solution::Underdetermined { particular, .. } => particular,
                Solution::Inconsistent => return Err(MorphismError::Unsolvable(k)),
            }
        };
        for ((t, mask, mono), c) in unknowns.into_iter().zip(solution) {
            if !c.is_zero() {
                let entry = self.components.entry(t).or_default();
                entry.add_term(mask, &Poly::monomial(c, mono));
            }
        }
        self.components.retain(|_, f| !f.is_zero());
        Ok(())
    }

    /// `b_k(ξ_(i_1), ..., ξ_(i_k)) = ς(k+1) ι_(ρ(ξ_(i_k))) ... ι_(ρ(ξ_(i_1))) B`.
    pub fn b_component(&self, b: &Form, tuple: &[usize]) -> Form {
        let inner = tuple
            .iter()
            .fold(b.clone(), |acc, &i| acc.contract(&self.rho[i]));
        inner.scale(&q(sign_varsigma(tuple.len() + 1) as i64))
    }

    /// `f̃_k = f_k + b_k` for the twisted form `ω + dB`.
    pub fn twist(&self, gauge: &Gauge) -> Result<ComomentMap, MorphismError> {
        for (i, r) in self.rho.iter().enumerate() {
            if !gauge.b.lie_derivative(r).is_zero() {
                return Err(MorphismError::NotInvariant(i));
            }
        }
        let mut components = self.components.clone();
        for k in 1..=self.model.n {
            for t in increasing_tuples(self.lie.dim, k) {
                let bk = self.b_component(&gauge.b, &t);
                if !bk.is_zero() {
                    *components.entry(t).or_default() += &bk;
                }
            }
        }
        components.retain(|_, f| !f.is_zero());
        Ok(ComomentMap {
            model: gauge.twisted.clone(),
            lie: self.lie.clone(),
            rho: self.rho.clone(),
            components,
        })
    }
}

fn monomials_up_to(dimension: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::ONE];
    let mut frontier = vec![Monomial::ONE];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            for i in 0..dimension {
                let e = m.mul(Monomial::var(i));
                if !out.contains(&e) && !next.contains(&e) {
                    next.push(e);
                }
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out.sort();
    out
}

/// One `(arity, tuple)` cell of the pentagon comparison.
#[derive(Clone, Debug)]
pub struct PentagonCell {
    pub arity: usize,
    pub tuple: Vec<usize>,
    pub discrepancy: Element,
}

#[derive(Clone, Debug)]
pub struct PentagonReport {
    pub cells: Vec<PentagonCell>,
    /// `sum_(l=1)^m C(m, l-1) B_(l-1)` for `m >= 2`.
    pub scalar_sums: Vec<(usize, Q)>,
}

impl PentagonReport {
    pub fn first_failure(&self) -> Option<&PentagonCell> {
        self.cells.iter().find(|c| !c.discrepancy.is_zero())
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none() && self.scalar_sums.iter().all(|(_, s)| s.is_zero())
    }
}

/// `sum_(l=1)^m C(m, l-1) B_(l-1)`.
pub fn pentagon_scalar(m: usize) -> Q {
    (1..=m)
        .map(|l| Q::from_integer(binomial(m, l - 1)) * bernoulli(l - 1))
        .sum()
}

/// Compares `(τ_B ∘ ψ ∘ f)_m` with `(ψ̃ ∘ f̃)_m` on every increasing basis tuple.
pub fn pentagon_check(
    f: &ComomentMap,
    gauge: &Gauge,
    max_arity: usize,
    mode: Parallelism,
) -> Result<PentagonReport, MorphismError> {
    let f_tilde = f.twist(gauge)?;
    let psi = psi_map(max_arity);
    let lhs = gauge_tau(&gauge.b).compose_unshifted(&psi.compose_unshifted(&f.as_map()));
    let rhs = psi.compose_unshifted(&f_tilde.as_map());
    let cells: Vec<(usize, Vec<usize>)> = (1..=max_arity)
        .flat_map(|m| {
            increasing_tuples(f.lie.dim, m)
                .into_iter()
                .map(move |t| (m, t))
        })
        .collect();
    let n = f.model.n;
    let cells = exec::map(cells, mode, |(m, t)| {
        let args: Vec<Element> = t.iter().map(|&i| Element::lie_basis(n, i)).collect();
        let mut d = lhs.eval(&args);
        d.add_scaled(&rhs.eval(&args), &-Q::one());
        PentagonCell {
            arity: m,
            tuple: t,
            discrepancy: d,
        }
    });
    let scalar_sums = (2..=max_arity).map(|m| (m, pentagon_scalar(m))).collect();
    Ok(PentagonReport { cells, scalar_sums })
}

/// Both sides of the binomial lemma at `(m, l)` on one basis tuple.
pub fn rhsbm_sides(
    f: &ComomentMap,
    b: &Form,
    m: usize,
    l: usize,
    tuple: &[usize],
) -> (Element, Element) {
    assert!(1 <= l && l <= m && tuple.len() == m);
    let n = f.model.n;
    let f1 = |i: usize| Element::pair(n, f.rho[i].clone(), f.component(&[i]));
    let pair = pairing_minus(n);
    let mut lhs = Element::zero(n);
    for perm in Unshuffles::new(&[l - 1, m - l + 1]) {
        let sign = crate::combinatorics::permutation_sign(&perm);
        let rest: Vec<usize> = perm[l - 1..].iter().map(|&p| tuple[p]).collect();
        let bk = Element::form(n, f.b_component(b, &rest));
        let value = if l == 1 {
            bk
        } else {
            let mut args: Vec<Element> = perm[..l - 1].iter().map(|&p| f1(tuple[p])).collect();
            args.push(bk);
            pair.power(l - 1).eval(&args)
        };
        lhs.add_scaled(&value, &q(sign as i64));
    }
    let coefficient = Q::from_integer(binomial(m, l - 1)) * Q::new(factorial(l - 1), pow2(l - 1));
    let rhs = Element::form(n, f.b_component(b, tuple)).scaled(&coefficient);
    (lhs, rhs)
}

/// `g = R^2` abelian acting on `(R^3, dx∧dy∧dz)` by `∂x, ∂y`, with `B = z dx∧dy`.
pub fn desk_comoment() -> (ComomentMap, Form) {
    let model = Model::r3();
    let mut components = BTreeMap::new();
    components.insert(vec![0], Form::term(-&Poly::var(1), 0b100));
    components.insert(vec![1], Form::term(Poly::var(0), 0b100));
    let mut f = ComomentMap {
        model,
        lie: LieAlgebra::abelian(2),
        rho: vec![VectorField::partial(0), VectorField::partial(1)],
        components,
    };
    f.solve_component(2, 1).expect("desk comoment is solvable");
    (f, Form::term(Poly::var(2), 0b011))
}

/// `g = R^(m-1)` abelian acting by translations `∂_0, ..., ∂_(m-2)` on the
/// volume model of `R^m`, with `B = ± x_(m-1) dx_0∧...∧dx_(m-2)` so that `dB = ω`.
pub fn translation_comoment(dimension: usize) -> (ComomentMap, Form) {
    let model = Model::volume(dimension);
    let last = dimension - 1;
    let mut components = BTreeMap::new();
    let rho: Vec<VectorField> = (0..last).map(VectorField::partial).collect();
    for (i, r) in rho.iter().enumerate() {
        let target = -&model.omega.contract(r);
        let primitive = target
            .contract(&VectorField::partial(last))
            .mul_poly(&Poly::var(last));
        components.insert(vec![i], primitive);
    }
    let mut f = ComomentMap {
        model,
        lie: LieAlgebra::abelian(last),
        rho,
        components,
    };
    for k in 2..=f.model.n {
        f.solve_component(k, 2)
            .expect("translation comoment is solvable");
    }
    let indices: Vec<usize> = (0..last).collect();
    let sign = if last.is_multiple_of(2) { 1 } else { -1 };
    let b = Form::basis(&indices)
        .mul_poly(&Poly::var(last))
        .scale(&q(sign));
    (f, b)
}
