//! Multisymplectic models, Hamiltonian pairs, and the Rogers and Vinogradov
//! L∞-structures on the graded space of forms.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::cartan::{BasisMask, Form, Monomial, Poly, VectorField};
use crate::combinatorics::{bernoulli, fmt_q, q, qr, sign_varsigma, vinogradov_constant, Q};
use crate::graded::{Arities, Carrier, Convention, MultiMap, Symmetry};
use crate::linalg::{Matrix, Solution};
use crate::rng::SplitMix64;

/// A manifold `R^m` with a closed `(n+1)`-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub dimension: usize,
    pub n: usize,
    pub omega: Form,
    pub basepoints: Vec<Vec<Q>>,
    pub degenerate_allowed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("omega is not closed: d(omega) = {0}")]
    NotClosed(String),
    #[error("omega is degenerate at basepoint {point} (rank {rank} < {dimension})")]
    Degenerate {
        point: String,
        rank: usize,
        dimension: usize,
    },
    #[error("omega must be a homogeneous {expected}-form")]
    WrongDegree { expected: usize },
    #[error("dimension {0} exceeds the supported maximum")]
    Dimension(usize),
    #[error("basepoint {0} has the wrong number of coordinates")]
    Basepoint(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelReport {
    pub closed: bool,
    pub ranks: Vec<usize>,
    pub warnings: Vec<String>,
}

impl Model {
    /// `R^m` with the standard volume form, which is `(m-1)`-plectic.
    pub fn volume(dimension: usize) -> Self {
        let indices: Vec<usize> = (0..dimension).collect();
        Model {
            name: format!("R{dimension}-volume"),
            dimension,
            n: dimension - 1,
            omega: Form::basis(&indices),
            basepoints: vec![vec![Q::zero(); dimension], vec![Q::one(); dimension]],
            degenerate_allowed: false,
        }
    }

    /// `(R^3, dx∧dy∧dz)` with `n = 2`.
    pub fn r3() -> Self {
        Model::volume(3)
    }

    /// `(R^4, dx0∧dx1∧dx2∧dx3)` with `n = 3`.
    pub fn r4() -> Self {
        Model::volume(4)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "r3" => Some(Model::r3()),
            "r4" => Some(Model::r4()),
            "r6" => Some(Model::volume(6)),
            _ => None,
        }
    }

    /// Element degree of a `k`-form.
    pub fn form_degree(&self, k: usize) -> i32 {
        k as i32 - self.n as i32 + 1
    }
}

fn subsets(m: usize, k: usize) -> Vec<BasisMask> {
    (0u32..(1 << m))
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| s as BasisMask)
        .collect()
}

fn contraction_matrix(omega: &Form, dimension: usize, n: usize) -> (Matrix, Vec<BasisMask>) {
    let masks = subsets(dimension, n);
    let cols: Vec<Form> = (0..dimension)
        .map(|i| omega.contract(&VectorField::partial(i)))
        .collect();
    let rows = masks
        .iter()
        .map(|m| {
            cols.iter()
                .map(|c| c.coefficient(*m).constant_term())
                .collect()
        })
        .collect();
    (Matrix::from_rows(rows), masks)
}

/// Checks closedness exactly and nondegeneracy by rank at every basepoint.
pub fn validate_model(model: &Model) -> Result<ModelReport, ModelError> {
    if model.dimension == 0 || model.dimension > crate::cartan::MAX_DIM {
        return Err(ModelError::Dimension(model.dimension));
    }
    if !model.omega.is_zero() && model.omega.degree() != Some(model.n + 1) {
        return Err(ModelError::WrongDegree {
            expected: model.n + 1,
        });
    }
    let d = model.omega.d();
    if !d.is_zero() {
        return Err(ModelError::NotClosed(d.to_string()));
    }
    let mut report = ModelReport {
        closed: true,
        ranks: Vec::new(),
        warnings: Vec::new(),
    };
    for (i, p) in model.basepoints.iter().enumerate() {
        if p.len() != model.dimension {
            return Err(ModelError::Basepoint(i));
        }
        let (matrix, _) = contraction_matrix(&model.omega.at_point(p), model.dimension, model.n);
        let rank = matrix.rank();
        report.ranks.push(rank);
        if rank < model.dimension {
            let point = format!("({})", p.iter().map(fmt_q).collect::<Vec<_>>().join(", "));
            if model.degenerate_allowed {
                report
                    .warnings
                    .push(format!("degenerate at {point}: rank {rank}"));
            } else {
                return Err(ModelError::Degenerate {
                    point,
                    rank,
                    dimension: model.dimension,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamiltonianError {
    #[error("form has no polynomial Hamiltonian vector field")]
    NotHamiltonian,
    #[error("Hamiltonian solve needs constant-coefficient omega")]
    UnsupportedOmega,
    #[error("expected an {expected}-form")]
    WrongDegree { expected: usize },
}

/// The vector field `v` with `dα = -ι_v ω`, solved monomial by monomial.
pub fn hamiltonian_vf(alpha: &Form, model: &Model) -> Result<VectorField, HamiltonianError> {
    if !model.omega.has_constant_coefficients() {
        return Err(HamiltonianError::UnsupportedOmega);
    }
    if !alpha.is_zero() && alpha.degree() != Some(model.n - 1) {
        return Err(HamiltonianError::WrongDegree {
            expected: model.n - 1,
        });
    }
    let da = alpha.d();
    let (matrix, masks) = contraction_matrix(&model.omega, model.dimension, model.n);
    let monomials: BTreeSet<Monomial> = da
        .terms()
        .flat_map(|(_, p)| p.terms().map(|(m, _)| *m))
        .collect();
    let mut v = VectorField::zero();
    for mono in monomials {
        let rhs: Vec<Q> = masks
            .iter()
            .map(|mask| -da.coefficient(*mask).coefficient(mono))
            .collect();
        let x = match matrix.solve(&rhs) {
            Solution::Unique(x) => x,
            Solution::Underdetermined { particular, .. } => particular,
            Solution::Inconsistent => return Err(HamiltonianError::NotHamiltonian),
        };
        for (i, c) in x.into_iter().enumerate() {
            v.add_component(i, &Poly::monomial(c, mono));
        }
    }
    let mut check = da;
    check += &model.omega.contract(&v);
    if !check.is_zero() {
        return Err(HamiltonianError::NotHamiltonian);
    }
    Ok(v)
}

/// A Hamiltonian `(n-1)`-form together with its Hamiltonian vector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamPair {
    pub alpha: Form,
    pub field: VectorField,
}

impl HamPair {
    /// Verifies `dα + ι_v ω = 0`.
    pub fn new(alpha: Form, field: VectorField, model: &Model) -> Result<Self, HamiltonianError> {
        let mut check = alpha.d();
        check += &model.omega.contract(&field);
        if !check.is_zero() {
            return Err(HamiltonianError::NotHamiltonian);
        }
        Ok(HamPair { alpha, field })
    }

    pub fn from_form(alpha: Form, model: &Model) -> Result<Self, HamiltonianError> {
        let field = hamiltonian_vf(&alpha, model)?;
        Ok(HamPair { alpha, field })
    }

    pub fn element(&self, model: &Model) -> Element {
        Element::pair(model.n, self.field.clone(), self.alpha.clone())
    }
}

/// A coordinate of an [`Element`]: a field component, a form coefficient or a Lie coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coordinate {
    Field(usize, Monomial),
    Form(BasisMask, Monomial),
    Lie(usize),
}

/// Universal carrier: a vector field, a form of mixed degree and a Lie-algebra
/// vector. Vector fields and Lie vectors sit in degree 0; a `k`-form has
/// degree `k - n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    pub n: usize,
    pub field: VectorField,
    pub form: Form,
    pub lie: BTreeMap<usize, Q>,
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Element {
            n,
            ..Element::default()
        }
    }

    pub fn pair(n: usize, field: VectorField, form: Form) -> Self {
        Element {
            n,
            field,
            form,
            lie: BTreeMap::new(),
        }
    }

    pub fn form(n: usize, form: Form) -> Self {
        Element {
            n,
            form,
            ..Element::zero(n)
        }
    }

    pub fn field(n: usize, field: VectorField) -> Self {
        Element {
            n,
            field,
            ..Element::zero(n)
        }
    }

    pub fn lie_basis(n: usize, index: usize) -> Self {
        let mut e = Element::zero(n);
        e.lie.insert(index, Q::one());
        e
    }

    /// Form part of the given degree.
    pub fn form_of_degree(&self, degree: i32) -> Form {
        let k = degree + self.n as i32 - 1;
        if k < 0 {
            Form::zero()
        } else {
            self.form.part(k as usize)
        }
    }

    /// Flat coordinates over `Q`, used to set up linear systems.
    pub fn coordinates(&self) -> BTreeMap<Coordinate, Q> {
        let mut out = BTreeMap::new();
        for (i, p) in self.field.components() {
            for (m, c) in p.terms() {
                out.insert(Coordinate::Field(*i, *m), c.clone());
            }
        }
        for (mask, p) in self.form.terms() {
            for (m, c) in p.terms() {
                out.insert(Coordinate::Form(*mask, *m), c.clone());
            }
        }
        for (i, c) in &self.lie {
            out.insert(Coordinate::Lie(*i), c.clone());
        }
        out
    }

    pub fn is_observable(&self, model: &Model) -> bool {
        let alpha = self.form.part(model.n - 1);
        let mut check = alpha.d();
        check += &model.omega.contract(&self.field);
        check.is_zero()
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if !self.field.is_zero() {
            parts.push(format!("field: {}", self.field));
        }
        if !self.form.is_zero() {
            parts.push(format!("form: {}", self.form));
        }
        if !self.lie.is_empty() {
            let lie: Vec<String> = self
                .lie
                .iter()
                .map(|(i, c)| format!("{} ξ{i}", fmt_q(c)))
                .collect();
            parts.push(format!("lie: {}", lie.join(" + ")));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

impl Carrier for Element {
    fn zero_like(&self) -> Self {
        Element::zero(self.n)
    }

    fn is_zero(&self) -> bool {
        self.field.is_zero() && self.form.is_zero() && self.lie.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, c: &Q) {
        if c.is_zero() {
            return;
        }
        self.field += &other.field.scale(c);
        self.form += &other.form.scale(c);
        for (i, v) in &other.lie {
            let e = self.lie.entry(*i).or_insert_with(Q::zero);
            *e += v * c;
            if e.is_zero() {
                self.lie.remove(i);
            }
        }
    }

    fn degree(&self) -> Option<i32> {
        let mut degrees: BTreeSet<i32> = self
            .form
            .degrees()
            .into_iter()
            .map(|k| k as i32 - self.n as i32 + 1)
            .collect();
        if !self.field.is_zero() || !self.lie.is_empty() {
            degrees.insert(0);
        }
        let first = *degrees.iter().next()?;
        assert!(degrees.len() == 1, "inhomogeneous element has no degree");
        Some(first)
    }

    fn homogeneous_parts(&self) -> Vec<Self> {
        let mut parts = Vec::new();
        for k in self.form.degrees() {
            if k + 1 == self.n {
                continue;
            }
            parts.push(Element::form(self.n, self.form.part(k)));
        }
        let top = Element {
            n: self.n,
            field: self.field.clone(),
            form: if self.n >= 1 {
                self.form.part(self.n - 1)
            } else {
                Form::zero()
            },
            lie: self.lie.clone(),
        };
        if !top.is_zero() {
            parts.push(top);
        }
        parts
    }

    fn is_homogeneous(&self) -> bool {
        self.homogeneous_parts().len() <= 1
    }
}

fn contract_all(form: &Form, fields: &[&VectorField]) -> Form {
    fields.iter().fold(form.clone(), |acc, x| acc.contract(x))
}

fn half() -> Q {
    qr(1, 2)
}

/// `⟨a, b⟩±` on all of the graded space, as a form.
pub fn pairing(plus: bool, a: &Element, b: &Element) -> Form {
    let mut out = b.form.contract(&a.field);
    let other = a.form.contract(&b.field);
    if plus {
        out += &other;
    } else {
        out -= &other;
    }
    out.scale(&half())
}

/// Higher Courant bracket of two degree-zero sections, optionally twisted.
pub fn courant_bracket(e1: &Element, e2: &Element, twist: Option<&Form>, n: usize) -> Element {
    let x1 = &e1.field;
    let x2 = &e2.field;
    let a1 = e1.form.part(n - 1);
    let a2 = e2.form.part(n - 1);
    let mut form = a2.lie_derivative(x1);
    form -= &a1.lie_derivative(x2);
    form -= &pairing(
        false,
        &Element::pair(n, x1.clone(), a1),
        &Element::pair(n, x2.clone(), a2),
    )
    .d();
    if let Some(w) = twist {
        form += &w.contract(x2).contract(x1);
    }
    Element::pair(n, x1.bracket(x2), form)
}

/// Rogers bracket `π_k` on homogeneous entries.
pub fn rogers_bracket(k: usize, args: &[&Element], model: &Model) -> Element {
    let n = model.n;
    let degs: Vec<i32> = args.iter().map(|a| a.degree().unwrap_or(0)).collect();
    if k == 1 {
        return if degs[0] < 0 {
            Element::form(n, args[0].form.d())
        } else {
            Element::zero(n)
        };
    }
    if degs.iter().any(|&d| d != 0) {
        return Element::zero(n);
    }
    let fields: Vec<&VectorField> = args.iter().map(|a| &a.field).collect();
    let form = contract_all(&model.omega, &fields).scale(&q(sign_varsigma(k) as i64));
    if k == 2 {
        Element::pair(n, fields[0].bracket(fields[1]), form)
    } else {
        Element::form(n, form)
    }
}

fn negative_positions(args: &[&Element]) -> Vec<usize> {
    args.iter()
        .enumerate()
        .filter(|(_, a)| a.degree().unwrap_or(0) < 0)
        .map(|(i, _)| i)
        .collect()
}

/// `-T_ω(e1, e2, e3) = -(1/3)(⟨[e1,e2]_ω, e3⟩₊ + cyclic)`.
fn minus_t(e: [&Element; 3], twist: Option<&Form>, n: usize) -> Form {
    let mut out = Form::zero();
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        out += &pairing(true, &courant_bracket(e[a], e[b], twist, n), e[c]);
    }
    out.scale(&qr(-1, 3))
}

/// `μ_3(f, e2, e3)` for a negative-degree `f`.
fn mu3_f(f: &Form, x1: &VectorField, x2: &VectorField) -> Form {
    let mut inner = f.lie_derivative(x2).contract(x1);
    inner -= &f.lie_derivative(x1).contract(x2);
    let mut out = inner.scale(&half());
    out += &f.contract(&x1.bracket(x2));
    out.scale(&qr(-1, 6))
}

/// Untwisted ternary bracket `[a, Y1, Y2]_3` with `a` a pure form.
fn ternary_untwisted(a: &Form, y1: &VectorField, y2: &VectorField, n: usize) -> Form {
    let k = a.degree().unwrap_or(n - 1);
    if k + 1 < n {
        mu3_f(a, y1, y2)
    } else {
        let e0 = Element::form(n, a.clone());
        let e1 = Element::field(n, y1.clone());
        let e2 = Element::field(n, y2.clone());
        minus_t([&e0, &e1, &e2], None, n)
    }
}

/// `c_k sum_(i<j) (-1)^(i+j+1) ι_(Y_(k-1)) ... (no i, j) ... ι_(Y_1) [a, Y_i, Y_j]_3`.
pub fn mu_aux(k: usize, a: &Form, ys: &[&VectorField], n: usize) -> Form {
    assert_eq!(ys.len(), k - 1);
    let mut out = Form::zero();
    for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            let t = ternary_untwisted(a, ys[i], ys[j], n);
            if t.is_zero() {
                continue;
            }
            let rest: Vec<&VectorField> = ys
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != i && *l != j)
                .map(|(_, y)| *y)
                .collect();
            let term = contract_all(&t, &rest);
            // 1-based indices i+1, j+1 give the exponent i + j + 3.
            if (i + j + 3) % 2 == 0 {
                out += &term;
            } else {
                out -= &term;
            }
        }
    }
    out.scale(&vinogradov_constant(k))
}

/// Odd-arity bracket on degree-zero entries via the Bernoulli formula.
pub fn mu_odd_all_top(k: usize, args: &[&Element], omega: &Form, n: usize) -> Form {
    let fields: Vec<&VectorField> = args.iter().map(|a| &a.field).collect();
    let mut out = Form::zero();
    for i in 0..k {
        let alpha = args[i].form.part(n - 1);
        if alpha.is_zero() {
            continue;
        }
        let others: Vec<&VectorField> = fields
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != i)
            .map(|(_, x)| *x)
            .collect();
        let term = mu_aux(k, &alpha, &others, n);
        if i % 2 == 0 {
            out += &term;
        } else {
            out -= &term;
        }
    }
    let sign = if k.div_ceil(2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let coefficient = q(sign * k as i64) * bernoulli(k - 1);
    out += &contract_all(omega, &fields).scale(&coefficient);
    out
}

/// Vinogradov bracket `μ_k` on homogeneous entries.
pub fn vinogradov_mu(k: usize, args: &[&Element], omega: &Form, n: usize) -> Element {
    let zero = Element::zero(n);
    let neg = negative_positions(args);
    match k {
        1 => {
            if neg.is_empty() {
                zero
            } else {
                Element::form(n, args[0].form.d())
            }
        }
        2 => match neg.as_slice() {
            [] => courant_bracket(args[0], args[1], Some(omega), n),
            [1] => Element::form(
                n,
                args[1].form.lie_derivative(&args[0].field).scale(&half()),
            ),
            [0] => Element::form(
                n,
                args[0].form.lie_derivative(&args[1].field).scale(&-half()),
            ),
            _ => zero,
        },
        k if k % 2 == 0 => zero,
        3 => match neg.as_slice() {
            [] => Element::form(n, minus_t([args[0], args[1], args[2]], Some(omega), n)),
            [p] => {
                let rest: Vec<&VectorField> =
                    (0..3).filter(|l| l != p).map(|l| &args[l].field).collect();
                let out = mu3_f(&args[*p].form, rest[0], rest[1]);
                Element::form(n, if p % 2 == 0 { out } else { -&out })
            }
            _ => zero,
        },
        _ => match neg.as_slice() {
            [] => Element::form(n, mu_odd_all_top(k, args, omega, n)),
            [p] => {
                let rest: Vec<&VectorField> =
                    (0..k).filter(|l| l != p).map(|l| &args[l].field).collect();
                let out = mu_aux(k, &args[*p].form, &rest, n);
                Element::form(n, if p % 2 == 0 { out } else { -&out })
            }
            _ => zero,
        },
    }
}

/// Rogers family `{π_k}` in the unshifted convention.
pub fn rogers_map(model: &Model) -> MultiMap<Element> {
    let model = Arc::new(model.clone());
    MultiMap::base(
        "π",
        Arities::range(1, model.n + 1),
        1,
        Convention::Unshifted,
        Symmetry::Skew,
        move |args: &[&Element]| rogers_bracket(args.len(), args, &model),
    )
}

/// Vinogradov family `{μ_k}` for `k <= max_arity` in the unshifted convention.
pub fn vinogradov_map(model: &Model, max_arity: usize) -> MultiMap<Element> {
    let omega = model.omega.clone();
    let n = model.n;
    let mut arities = Arities::range(1, 2.min(max_arity));
    for k in (3..=max_arity).step_by(2) {
        arities = arities.union(Arities::single(k));
    }
    MultiMap::base(
        "μ",
        arities,
        1,
        Convention::Unshifted,
        Symmetry::Skew,
        move |args: &[&Element]| vinogradov_mu(args.len(), args, &omega, n),
    )
}

/// `⟨,⟩₋` as an unshifted skew map of weight -1.
pub fn pairing_minus(n: usize) -> MultiMap<Element> {
    MultiMap::base(
        "⟨,⟩₋",
        Arities::single(2),
        0,
        Convention::Unshifted,
        Symmetry::Skew,
        move |a: &[&Element]| Element::form(n, pairing(false, a[0], a[1])),
    )
}

/// `⟨,⟩₊` as an unshifted symmetric map of weight -1.
pub fn pairing_plus(n: usize) -> MultiMap<Element> {
    MultiMap::base(
        "⟨,⟩₊",
        Arities::single(2),
        0,
        Convention::Unshifted,
        Symmetry::Symmetric,
        move |a: &[&Element]| Element::form(n, pairing(true, a[0], a[1])),
    )
}

/// The degree-zero symmetric map `S = Dec(⟨,⟩₋)`.
pub fn bold_s(model: &Model) -> MultiMap<Element> {
    pairing_minus(model.n).dec().with_name("S")
}

/// Shifted Rogers structure `𝝅`.
pub fn bold_pi(model: &Model) -> MultiMap<Element> {
    rogers_map(model).dec().with_name("𝝅")
}

/// Shifted Vinogradov structure `𝝁`.
pub fn bold_mu(model: &Model, max_arity: usize) -> MultiMap<Element> {
    vinogradov_map(model, max_arity).dec().with_name("𝝁")
}

/// Random polynomial with 1-3 monomials of total degree at most `max_degree`.
pub fn random_poly(rng: &mut SplitMix64, dimension: usize, max_degree: u32) -> Poly {
    let mut p = Poly::zero();
    let count = 1 + rng.below(3);
    for _ in 0..count {
        let mut exps = [0u8; crate::cartan::MAX_DIM];
        let total = rng.below(max_degree as usize + 1);
        for _ in 0..total {
            exps[rng.below(dimension)] += 1;
        }
        let mut c = rng.range(-3, 2);
        if c >= 0 {
            c += 1;
        }
        p.add_term(Monomial::from_exponents(&exps[..dimension]), q(c));
    }
    if p.is_zero() {
        Poly::one()
    } else {
        p
    }
}

/// Random `k`-form with one to three basis words.
pub fn random_form(rng: &mut SplitMix64, dimension: usize, k: usize, max_degree: u32) -> Form {
    let masks = subsets(dimension, k);
    let mut f = Form::zero();
    for _ in 0..1 + rng.below(3) {
        let mask = masks[rng.below(masks.len())];
        f.add_term(mask, &random_poly(rng, dimension, max_degree));
    }
    if f.is_zero() {
        Form::term(Poly::one(), masks[0])
    } else {
        f
    }
}

/// Random element of `𝖠` of the given degree; degree-zero entries are Hamiltonian pairs.
pub fn random_observable(
    rng: &mut SplitMix64,
    model: &Model,
    degree: i32,
    max_degree: u32,
) -> Element {
    let n = model.n;
    let k = (degree + n as i32 - 1) as usize;
    if degree < 0 {
        return Element::form(n, random_form(rng, model.dimension, k, max_degree));
    }
    for _ in 0..16 {
        let alpha = random_form(rng, model.dimension, k, max_degree);
        if let Ok(pair) = HamPair::from_form(alpha, model) {
            if !pair.field.is_zero() || rng.chance(1, 4) {
                return pair.element(model);
            }
        }
    }
    // Exact forms are always Hamiltonian with zero field.
    let beta = random_form(rng, model.dimension, k.saturating_sub(1), max_degree + 1);
    Element::form(n, beta.d())
}

/// Random element of `𝖵` of the given degree; degree-zero entries are arbitrary sections.
pub fn random_section(
    rng: &mut SplitMix64,
    model: &Model,
    degree: i32,
    max_degree: u32,
) -> Element {
    let n = model.n;
    let k = (degree + n as i32 - 1) as usize;
    let form = random_form(rng, model.dimension, k, max_degree);
    if degree < 0 {
        return Element::form(n, form);
    }
    let mut field = VectorField::zero();
    for _ in 0..1 + rng.below(2) {
        field.add_component(
            rng.below(model.dimension),
            &random_poly(rng, model.dimension, max_degree),
        );
    }
    Element::pair(n, field, form)
}

/// Random degree for a tuple slot: zero with probability 2/3, else uniform negative.
pub fn random_degree(rng: &mut SplitMix64, model: &Model) -> i32 {
    if model.n <= 1 || rng.chance(2, 3) {
        0
    } else {
        -(1 + rng.below(model.n - 1) as i32)
    }
}

/// Tuple of observables whose degrees follow `degrees`.
pub fn observable_tuple(
    rng: &mut SplitMix64,
    model: &Model,
    degrees: &[i32],
    max_degree: u32,
) -> Vec<Element> {
    degrees
        .iter()
        .map(|&d| random_observable(rng, model, d, max_degree))
        .collect()
}

/// Tuple of observables with at most one negative-degree entry.
pub fn mostly_top_tuple(
    rng: &mut SplitMix64,
    model: &Model,
    k: usize,
    max_degree: u32,
) -> Vec<Element> {
    let mut degrees = vec![0; k];
    if model.n > 1 && rng.chance(1, 2) {
        degrees[rng.below(k)] = -(1 + rng.below(model.n - 1) as i32);
    }
    observable_tuple(rng, model, &degrees, max_degree)
}
