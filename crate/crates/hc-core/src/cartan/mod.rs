//! Polynomial Cartan calculus on `R^m`: forms, vector fields, wedge, `d`,
//! contraction, Lie derivative and the Lie bracket of vector fields.

mod text;

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{One, Zero};

use crate::combinatorics::Q;

pub use text::{parse_form, parse_poly, parse_vector_field, ParseError};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

/// Exponent vector packed eight bits per variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_DIM, "variable index {i} exceeds MAX_DIM");
        Monomial(1 << (8 * i))
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_DIM);
        Monomial(
            exps.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &e)| acc | ((e as u64) << (8 * i))),
        )
    }

    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn exponents(self) -> [u8; MAX_DIM] {
        let mut out = [0u8; MAX_DIM];
        for (i, e) in out.iter_mut().enumerate() {
            *e = self.exponent(i) as u8;
        }
        out
    }

    pub fn total_degree(self) -> u32 {
        (0..MAX_DIM).map(|i| self.exponent(i)).sum()
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        for i in 0..MAX_DIM {
            assert!(
                self.exponent(i) + other.exponent(i) < 256,
                "exponent overflow"
            );
        }
        Monomial(self.0 + other.0)
    }

    /// `∂_i` of the monomial as (multiplicity, monomial), or `None` if it vanishes.
    pub fn derivative(self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.exponent(i);
        (e > 0).then(|| (e, Monomial(self.0 - (1 << (8 * i)))))
    }

    /// Highest variable index present, if any.
    pub fn max_var(self) -> Option<usize> {
        (0..MAX_DIM).rev().find(|&i| self.exponent(i) > 0)
    }
}

/// Sparse multivariate polynomial over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        Poly::monomial(c, Monomial::ONE)
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Q::one(), Monomial::var(i))
    }

    pub fn monomial(c: Q, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> Q {
        self.terms.get(&m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derivative(i) {
                out.add_term(dm, c * Q::from_integer(e.into()));
            }
        }
        out
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn constant_term(&self) -> Q {
        self.terms
            .get(&Monomial::ONE)
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exponent(i);
                for _ in 0..e {
                    v *= x;
                }
            }
            acc += v;
        }
        acc
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

/// Basis index word `dx_I` stored as a bit mask.
pub type BasisMask = u16;

fn mask_degree(mask: BasisMask) -> usize {
    mask.count_ones() as usize
}

fn below(mask: BasisMask, i: usize) -> u32 {
    (mask & ((1u16 << i) - 1)).count_ones()
}

/// Sign of `dx_a ∧ dx_b` relative to the sorted word, zero if they overlap.
fn wedge_sign(a: BasisMask, b: BasisMask) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        swaps += below(b, i);
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Indices set in a basis mask, increasing.
pub fn mask_indices(mask: BasisMask) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).collect()
}

/// Differential form with polynomial coefficients; may mix degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Form {
    terms: BTreeMap<BasisMask, Poly>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    /// `c dx_{i_1} ∧ ... ∧ dx_{i_k}` for arbitrary index order.
    pub fn basis(indices: &[usize]) -> Self {
        let mut f = Form::from_poly(Poly::one());
        for &i in indices {
            f = f.wedge(&Form::term(Poly::one(), 1 << i));
        }
        f
    }

    pub fn term(coef: Poly, mask: BasisMask) -> Self {
        let mut f = Form::zero();
        f.add_term(mask, &coef);
        f
    }

    pub fn from_poly(p: Poly) -> Self {
        Form::term(p, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisMask, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mask: BasisMask) -> Poly {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mask: BasisMask, coef: &Poly) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_default();
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    fn add_scaled_term(&mut self, mask: BasisMask, coef: &Poly, sign: i32) {
        if sign > 0 {
            self.add_term(mask, coef);
        } else if sign < 0 {
            self.add_term(mask, &-coef);
        }
    }

    /// Form degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| mask_degree(*m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Distinct form degrees present, increasing.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| mask_degree(*m)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Degree-`k` component.
    pub fn part(&self, k: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mask_degree(**m) == k)
                .map(|(m, p)| (*m, p.clone()))
                .collect(),
        }
    }

    /// Largest coordinate index used by a basis word or coefficient.
    pub fn max_index(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|(m, p)| {
                let top = (*m != 0).then(|| 15 - m.leading_zeros() as usize);
                [top, p.max_var()]
            })
            .flatten()
            .max()
    }

    pub fn scale(&self, c: &Q) -> Form {
        if c.is_zero() {
            return Form::zero();
        }
        Form {
            terms: self.terms.iter().map(|(m, p)| (*m, p.scale(c))).collect(),
        }
    }

    pub fn mul_poly(&self, f: &Poly) -> Form {
        let mut out = Form::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, &(p * f));
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (ma, pa) in &self.terms {
            for (mb, pb) in &other.terms {
                let s = wedge_sign(*ma, *mb);
                if s != 0 {
                    out.add_scaled_term(ma | mb, &(pa * pb), s);
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Form::zero();
        for (m, p) in &self.terms {
            let Some(top) = p.max_var() else { continue };
            for j in 0..=top {
                if m & (1 << j) != 0 {
                    continue;
                }
                let dp = p.partial(j);
                if dp.is_zero() {
                    continue;
                }
                let s = if below(*m, j).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                out.add_scaled_term(m | (1 << j), &dp, s);
            }
        }
        out
    }

    /// Interior product `ι_X`.
    pub fn contract(&self, x: &VectorField) -> Form {
        let mut out = Form::zero();
        if x.is_zero() {
            return out;
        }
        for (m, p) in &self.terms {
            let mut rest = *m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if let Some(xi) = x.component(i) {
                    let s = if below(*m, i).is_multiple_of(2) {
                        1
                    } else {
                        -1
                    };
                    out.add_scaled_term(m & !(1 << i), &(xi * p), s);
                }
            }
        }
        out
    }

    /// Lie derivative via the Cartan formula `ℒ_X = d ι_X + ι_X d`.
    pub fn lie_derivative(&self, x: &VectorField) -> Form {
        let mut out = self.contract(x).d();
        out += &self.d().contract(x);
        out
    }

    /// Evaluate coefficients at a point, keeping basis words.
    pub fn at_point(&self, point: &[Q]) -> Form {
        let mut out = Form::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, &Poly::constant(p.eval(point)));
        }
        out
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        for (m, p) in &rhs.terms {
            self.add_term(*m, p);
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        for (m, p) in &rhs.terms {
            self.add_term(*m, &-p);
        }
    }
}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            terms: self.terms.iter().map(|(m, p)| (*m, -p)).collect(),
        }
    }
}

/// Polynomial vector field `sum X^i ∂_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VectorField {
    comps: BTreeMap<usize, Poly>,
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField::default()
    }

    /// `f ∂_i`.
    pub fn coordinate(i: usize, f: Poly) -> Self {
        let mut v = VectorField::zero();
        v.add_component(i, &f);
        v
    }

    /// `∂_i`.
    pub fn partial(i: usize) -> Self {
        VectorField::coordinate(i, Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, i: usize) -> Option<&Poly> {
        self.comps.get(&i)
    }

    pub fn components(&self) -> impl Iterator<Item = (&usize, &Poly)> {
        self.comps.iter()
    }

    pub fn add_component(&mut self, i: usize, f: &Poly) {
        if f.is_zero() {
            return;
        }
        let entry = self.comps.entry(i).or_default();
        *entry += f;
        if entry.is_zero() {
            self.comps.remove(&i);
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.comps
            .iter()
            .flat_map(|(i, p)| [Some(*i), p.max_var()])
            .flatten()
            .max()
    }

    pub fn scale(&self, c: &Q) -> VectorField {
        if c.is_zero() {
            return VectorField::zero();
        }
        VectorField {
            comps: self.comps.iter().map(|(i, p)| (*i, p.scale(c))).collect(),
        }
    }

    /// Derivation action `X(f)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (i, xi) in &self.comps {
            let df = f.partial(*i);
            if !df.is_zero() {
                out += &(xi * &df);
            }
        }
        out
    }

    /// Lie bracket `[X, Y]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let mut out = VectorField::zero();
        for (i, yi) in &other.comps {
            out.add_component(*i, &self.apply(yi));
        }
        for (i, xi) in &self.comps {
            out.add_component(*i, &-&other.apply(xi));
        }
        out
    }
}

impl AddAssign<&VectorField> for VectorField {
    fn add_assign(&mut self, rhs: &VectorField) {
        for (i, p) in &rhs.comps {
            self.add_component(*i, p);
        }
    }
}

impl SubAssign<&VectorField> for VectorField {
    fn sub_assign(&mut self, rhs: &VectorField) {
        for (i, p) in &rhs.comps {
            self.add_component(*i, &-p);
        }
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField {
            comps: self.comps.iter().map(|(i, p)| (*i, -p)).collect(),
        }
    }
}

/// Wedge after checking both operands live on `R^dim`.
pub fn wedge_checked(a: &Form, b: &Form, dim: usize) -> Result<Form, DimensionError> {
    for f in [a, b] {
        if let Some(i) = f.max_index() {
            if i >= dim {
                return Err(DimensionError { index: i, dim });
            }
        }
    }
    Ok(a.wedge(b))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("coordinate index {index} out of range for R^{dim}")]
pub struct DimensionError {
    pub index: usize,
    pub dim: usize,
}
