//! Graded carriers, graded multilinear maps, décalage and block operators.
//!
//! A [`MultiMap`] is an expression tree over base evaluation rules. Every map
//! carries an arity support, a degree and a [`Convention`]. In the shifted
//! convention the degree is the weight of every arity component; in the
//! unshifted convention it is the Nijenhuis–Richardson degree `|μ_k| + k - 1`,
//! so the arity-`k` component has weight `degree - k + 1`.

use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::combinatorics::{
    koszul_sign, odd_koszul_sign, parity_sign, partitions_increasing, permutation_sign, q,
    Unshuffles, Q,
};

/// A graded vector space whose elements can be added, scaled and graded.
pub trait Carrier: Clone + Send + Sync + fmt::Debug + 'static {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: &Q);
    /// Unshifted degree of a nonzero homogeneous element; `None` for zero.
    fn degree(&self) -> Option<i32>;
    /// Decomposition into nonzero homogeneous components.
    fn homogeneous_parts(&self) -> Vec<Self>;

    fn scaled(&self, c: &Q) -> Self {
        let mut out = self.zero_like();
        out.add_scaled(self, c);
        out
    }

    fn is_homogeneous(&self) -> bool {
        self.homogeneous_parts().len() <= 1
    }
}

/// Whether maps act on `V` or on the shifted space `V[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    Shifted,
    Unshifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Skew,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("convention mismatch: {0:?} vs {1:?}")]
    ConventionMismatch(Convention, Convention),
    #[error("décalage needs a skew map in the unshifted convention")]
    NotSkew,
    #[error("block shape {shape:?} does not match tuple length {len}")]
    ShapeMismatch { shape: Vec<usize>, len: usize },
    #[error("P< needs a weakly increasing block shape, got {0:?}")]
    ShapeNotIncreasing(Vec<usize>),
    #[error("composition needs weight-zero components, got degree {0}")]
    NonzeroWeight(i32),
}

/// Set of arities as a bit mask (arities 1..=63).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Arities(u64);

impl Arities {
    pub const NONE: Arities = Arities(0);

    pub fn single(k: usize) -> Self {
        assert!((1..64).contains(&k), "arity {k} out of range");
        Arities(1 << k)
    }

    /// Arities `lo..=hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        (lo.max(1)..=hi.min(63)).fold(Arities::NONE, |acc, k| acc.union(Arities::single(k)))
    }

    pub fn contains(self, k: usize) -> bool {
        k < 64 && self.0 & (1 << k) != 0
    }

    pub fn union(self, other: Arities) -> Self {
        Arities(self.0 | other.0)
    }

    pub fn intersect(self, other: Arities) -> Self {
        Arities(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..64).filter(move |&k| self.contains(k))
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Arities `{i + j - 1}` reachable by inserting `inner` into `outer`.
    pub fn insertion(outer: Arities, inner: Arities) -> Self {
        let mut out = Arities::NONE;
        for i in outer.iter() {
            for j in inner.iter() {
                if i + j - 1 < 64 {
                    out = out.union(Arities::single(i + j - 1));
                }
            }
        }
        out
    }
}

type Rule<C> = dyn Fn(&[&C]) -> C + Send + Sync;

enum Node<C: Carrier> {
    Base(Arc<Rule<C>>),
    Sum(Vec<(Q, MultiMap<C>)>),
    Nr(MultiMap<C>, MultiMap<C>),
    Dec(MultiMap<C>),
    Restrict(MultiMap<C>),
    Compose(MultiMap<C>, MultiMap<C>),
    ComposeUnshifted(MultiMap<C>, MultiMap<C>),
}

struct Inner<C: Carrier> {
    name: String,
    arities: Arities,
    degree: i32,
    convention: Convention,
    symmetry: Symmetry,
    node: Node<C>,
}

/// Graded multilinear map, possibly with components in several arities.
pub struct MultiMap<C: Carrier> {
    inner: Arc<Inner<C>>,
}

impl<C: Carrier> Clone for MultiMap<C> {
    fn clone(&self) -> Self {
        MultiMap {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<C: Carrier> fmt::Debug for MultiMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiMap")
            .field("name", &self.inner.name)
            .field("arities", &self.arities().iter().collect::<Vec<_>>())
            .field("degree", &self.inner.degree)
            .field("convention", &self.inner.convention)
            .field("symmetry", &self.inner.symmetry)
            .finish()
    }
}

fn shifted_degrees(degs: &[i32]) -> Vec<i32> {
    degs.iter().map(|d| d - 1).collect()
}

/// Sign `(-1)^((n-1)|u_1| + ... + |u_(n-1)|)` of the décalage isomorphism.
pub fn decalage_sign(degrees: &[i32]) -> i32 {
    let n = degrees.len() as i64;
    let e: i64 = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| (n - 1 - i as i64) * d as i64)
        .sum();
    parity_sign(e)
}

/// Décalage of a homogeneous tuple: the sign and the shifted degrees.
pub fn decalage_element(degrees: &[i32]) -> (i32, Vec<i32>) {
    (
        decalage_sign(degrees),
        degrees.iter().map(|d| d - 1).collect(),
    )
}

fn combined_symmetry(a: Symmetry, b: Symmetry) -> Symmetry {
    if a == b {
        a
    } else {
        Symmetry::None
    }
}

impl<C: Carrier> MultiMap<C> {
    fn from_inner(inner: Inner<C>) -> Self {
        MultiMap {
            inner: Arc::new(inner),
        }
    }

    /// A map given by an evaluation rule on nonzero homogeneous arguments.
    pub fn base<F>(
        name: impl Into<String>,
        arities: Arities,
        degree: i32,
        convention: Convention,
        symmetry: Symmetry,
        rule: F,
    ) -> Self
    where
        F: Fn(&[&C]) -> C + Send + Sync + 'static,
    {
        MultiMap::from_inner(Inner {
            name: name.into(),
            arities,
            degree,
            convention,
            symmetry,
            node: Node::Base(Arc::new(rule)),
        })
    }

    pub fn zero(convention: Convention, degree: i32) -> Self {
        MultiMap::from_inner(Inner {
            name: "0".into(),
            arities: Arities::NONE,
            degree,
            convention,
            symmetry: match convention {
                Convention::Shifted => Symmetry::Symmetric,
                Convention::Unshifted => Symmetry::Skew,
            },
            node: Node::Sum(Vec::new()),
        })
    }

    pub fn identity(convention: Convention) -> Self {
        let symmetry = match convention {
            Convention::Shifted => Symmetry::Symmetric,
            Convention::Unshifted => Symmetry::Skew,
        };
        MultiMap::base(
            "id",
            Arities::single(1),
            0,
            convention,
            symmetry,
            |a: &[&C]| a[0].clone(),
        )
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn arities(&self) -> Arities {
        self.inner.arities
    }

    /// Degree in this map's convention (see module docs).
    pub fn degree(&self) -> i32 {
        self.inner.degree
    }

    pub fn convention(&self) -> Convention {
        self.inner.convention
    }

    pub fn symmetry(&self) -> Symmetry {
        self.inner.symmetry
    }

    /// Weight of the arity-`k` component as a graded map.
    pub fn weight_at(&self, k: usize) -> i32 {
        match self.inner.convention {
            Convention::Shifted => self.inner.degree,
            Convention::Unshifted => self.inner.degree - k as i32 + 1,
        }
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        let mut m = self.restrict(self.arities());
        if let Some(inner) = Arc::get_mut(&mut m.inner) {
            inner.name = name.into();
        }
        m
    }

    /// The components whose arity lies in `arities`.
    pub fn restrict(&self, arities: Arities) -> Self {
        MultiMap::from_inner(Inner {
            name: self.inner.name.clone(),
            arities: self.arities().intersect(arities),
            degree: self.degree(),
            convention: self.convention(),
            symmetry: self.symmetry(),
            node: Node::Restrict(self.clone()),
        })
    }

    /// The arity-`k` component.
    pub fn component(&self, k: usize) -> Self {
        self.restrict(Arities::single(k))
    }

    /// `sum c_i m_i`; all terms must share convention and degree.
    pub fn linear_combination(terms: Vec<(Q, MultiMap<C>)>) -> Self {
        assert!(!terms.is_empty(), "empty linear combination");
        let convention = terms[0].1.convention();
        let degree = terms[0].1.degree();
        let mut arities = Arities::NONE;
        let mut symmetry = terms[0].1.symmetry();
        for (_, m) in &terms {
            assert_eq!(m.convention(), convention, "mixed conventions in a sum");
            assert_eq!(
                m.degree(),
                degree,
                "mixed degrees in a sum: {} vs {}",
                m.name(),
                terms[0].1.name()
            );
            arities = arities.union(m.arities());
            symmetry = combined_symmetry(symmetry, m.symmetry());
        }
        let terms: Vec<_> = terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        let name = terms
            .iter()
            .map(|(c, m)| {
                if c.is_one() {
                    m.name().to_string()
                } else {
                    format!("({c})·{}", m.name())
                }
            })
            .collect::<Vec<_>>()
            .join(" + ");
        MultiMap::from_inner(Inner {
            name: if name.is_empty() { "0".into() } else { name },
            arities: if terms.is_empty() {
                Arities::NONE
            } else {
                arities
            },
            degree,
            convention,
            symmetry,
            node: Node::Sum(terms),
        })
    }

    pub fn scale(&self, c: Q) -> Self {
        MultiMap::linear_combination(vec![(c, self.clone())])
    }

    pub fn add(&self, other: &MultiMap<C>) -> Self {
        MultiMap::linear_combination(vec![(Q::one(), self.clone()), (Q::one(), other.clone())])
    }

    pub fn sub(&self, other: &MultiMap<C>) -> Self {
        MultiMap::linear_combination(vec![(Q::one(), self.clone()), (-Q::one(), other.clone())])
    }

    /// Nijenhuis–Richardson product `self ∘̄ inner` in the common convention.
    pub fn try_nr(&self, inner: &MultiMap<C>) -> Result<Self, GradedError> {
        if self.convention() != inner.convention() {
            return Err(GradedError::ConventionMismatch(
                self.convention(),
                inner.convention(),
            ));
        }
        Ok(MultiMap::from_inner(Inner {
            name: format!("({} ∘ {})", self.name(), inner.name()),
            arities: Arities::insertion(self.arities(), inner.arities()),
            degree: self.degree() + inner.degree(),
            convention: self.convention(),
            symmetry: combined_symmetry(self.symmetry(), inner.symmetry()),
            node: Node::Nr(self.clone(), inner.clone()),
        }))
    }

    /// Panics on convention mismatch; see [`MultiMap::try_nr`].
    pub fn nr(&self, inner: &MultiMap<C>) -> Self {
        self.try_nr(inner).expect("nr product")
    }

    /// `[a, b] = a ∘̄ b - (-1)^(|a||b|) b ∘̄ a`.
    pub fn commutator(&self, other: &MultiMap<C>) -> Self {
        let sign = parity_sign(self.degree() as i64 * other.degree() as i64);
        MultiMap::linear_combination(vec![
            (Q::one(), self.nr(other)),
            (q(-sign as i64), other.nr(self)),
        ])
        .named(format!("[{}, {}]", self.name(), other.name()))
    }

    /// `(a ∘̄ b) ∘̄ c - a ∘̄ (b ∘̄ c)`.
    pub fn associator(&self, b: &MultiMap<C>, c: &MultiMap<C>) -> Self {
        self.nr(b).nr(c).sub(&self.nr(&b.nr(c)))
    }

    /// Left-nested power `((a ∘̄ a) ∘̄ a) ...` with `k` factors.
    pub fn power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = out.nr(self);
        }
        out.named(format!("{}^{k}", self.name()))
    }

    /// Right-nested power `a ∘̄ (a ∘̄ (...))`.
    pub fn power_right(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = self.nr(&out);
        }
        out
    }

    fn named(self, name: String) -> Self {
        match Arc::try_unwrap(self.inner) {
            Ok(mut inner) => {
                inner.name = name;
                MultiMap {
                    inner: Arc::new(inner),
                }
            }
            Err(shared) => MultiMap { inner: shared }.with_name(name),
        }
    }

    /// Décalage: unshifted skew map to shifted symmetric map, or back.
    pub fn try_dec(&self) -> Result<Self, GradedError> {
        let (convention, symmetry) = match (self.convention(), self.symmetry()) {
            (Convention::Unshifted, Symmetry::Symmetric) => return Err(GradedError::NotSkew),
            (Convention::Unshifted, s) => (
                Convention::Shifted,
                if s == Symmetry::Skew {
                    Symmetry::Symmetric
                } else {
                    s
                },
            ),
            (Convention::Shifted, s) => (
                Convention::Unshifted,
                if s == Symmetry::Symmetric {
                    Symmetry::Skew
                } else {
                    s
                },
            ),
        };
        Ok(MultiMap::from_inner(Inner {
            name: match self.convention() {
                Convention::Unshifted => format!("Dec({})", self.name()),
                Convention::Shifted => format!("Dec⁻¹({})", self.name()),
            },
            arities: self.arities(),
            degree: self.degree(),
            convention,
            symmetry,
            node: Node::Dec(self.clone()),
        }))
    }

    /// Décalage of an unshifted map; panics on a symmetric unshifted input.
    pub fn dec(&self) -> Self {
        assert_eq!(
            self.convention(),
            Convention::Unshifted,
            "dec expects an unshifted map"
        );
        self.try_dec().expect("décalage")
    }

    /// Inverse décalage of a shifted map.
    pub fn dec_inv(&self) -> Self {
        assert_eq!(
            self.convention(),
            Convention::Shifted,
            "dec_inv expects a shifted map"
        );
        self.try_dec().expect("décalage")
    }

    /// Shifted composition `self ∘ F` with `F` the coalgebra lift of the
    /// weight-zero family `f`.
    pub fn try_compose(&self, f: &MultiMap<C>) -> Result<Self, GradedError> {
        if self.convention() != Convention::Shifted || f.convention() != Convention::Shifted {
            return Err(GradedError::ConventionMismatch(
                self.convention(),
                f.convention(),
            ));
        }
        if f.degree() != 0 {
            return Err(GradedError::NonzeroWeight(f.degree()));
        }
        Ok(MultiMap::from_inner(Inner {
            name: format!("({} ∘ F[{}])", self.name(), f.name()),
            arities: composed_arities(self.arities(), f.arities()),
            degree: self.degree(),
            convention: Convention::Shifted,
            symmetry: combined_symmetry(self.symmetry(), f.symmetry()),
            node: Node::Compose(self.clone(), f.clone()),
        }))
    }

    pub fn compose(&self, f: &MultiMap<C>) -> Self {
        self.try_compose(f).expect("composition")
    }

    /// Unshifted composition `sum_l g_l ∘ S_(l,m)(f)` of skew morphism families.
    pub fn try_compose_unshifted(&self, f: &MultiMap<C>) -> Result<Self, GradedError> {
        if self.convention() != Convention::Unshifted || f.convention() != Convention::Unshifted {
            return Err(GradedError::ConventionMismatch(
                self.convention(),
                f.convention(),
            ));
        }
        if f.degree() != 0 {
            return Err(GradedError::NonzeroWeight(f.degree()));
        }
        Ok(MultiMap::from_inner(Inner {
            name: format!("({} ∘ S[{}])", self.name(), f.name()),
            arities: composed_arities(self.arities(), f.arities()),
            degree: self.degree(),
            convention: Convention::Unshifted,
            symmetry: combined_symmetry(self.symmetry(), f.symmetry()),
            node: Node::ComposeUnshifted(self.clone(), f.clone()),
        }))
    }

    pub fn compose_unshifted(&self, f: &MultiMap<C>) -> Self {
        self.try_compose_unshifted(f).expect("composition")
    }

    /// Evaluates on arbitrary (possibly inhomogeneous) arguments.
    pub fn eval(&self, args: &[C]) -> C {
        assert!(!args.is_empty(), "evaluation needs at least one argument");
        let zero = args[0].zero_like();
        if !self.arities().contains(args.len()) {
            return zero;
        }
        let parts: Vec<Vec<C>> = args.iter().map(C::homogeneous_parts).collect();
        if parts.iter().any(Vec::is_empty) {
            return zero;
        }
        let mut acc = zero;
        let mut idx = vec![0usize; args.len()];
        loop {
            let chosen: Vec<&C> = idx.iter().enumerate().map(|(i, &j)| &parts[i][j]).collect();
            let degs: Vec<i32> = chosen
                .iter()
                .map(|c| c.degree().expect("nonzero part"))
                .collect();
            let value = self.eval_hom(&chosen, &degs);
            acc.add_scaled(&value, &Q::one());
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return acc;
                }
                idx[pos] += 1;
                if idx[pos] < parts[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Evaluation on nonzero homogeneous arguments with known unshifted degrees.
    pub fn eval_hom(&self, args: &[&C], degs: &[i32]) -> C {
        let n = args.len();
        if !self.arities().contains(n) {
            return args[0].zero_like();
        }
        match &self.inner.node {
            Node::Base(rule) => rule(args),
            Node::Restrict(m) => m.eval_hom(args, degs),
            Node::Sum(terms) => {
                let mut acc = args[0].zero_like();
                for (c, m) in terms {
                    if m.arities().contains(n) {
                        acc.add_scaled(&m.eval_hom(args, degs), c);
                    }
                }
                acc
            }
            Node::Dec(m) => {
                let value = m.eval_hom(args, degs);
                if decalage_sign(degs) < 0 {
                    value.scaled(&-Q::one())
                } else {
                    value
                }
            }
            Node::Nr(outer, inner) => self.eval_nr(outer, inner, args, degs),
            Node::Compose(g, f) => eval_compose(g, f, args, degs, Convention::Shifted),
            Node::ComposeUnshifted(g, f) => eval_compose(g, f, args, degs, Convention::Unshifted),
        }
    }

    fn eval_nr(&self, outer: &MultiMap<C>, inner: &MultiMap<C>, args: &[&C], degs: &[i32]) -> C {
        let n = args.len();
        let mut acc = args[0].zero_like();
        let sdegs = shifted_degrees(degs);
        for j in inner.arities().iter() {
            if j > n {
                break;
            }
            if !outer.arities().contains(n - j + 1) {
                continue;
            }
            let prefactor = match self.convention() {
                Convention::Shifted => 1,
                Convention::Unshifted => parity_sign(inner.weight_at(j) as i64 * (n - j) as i64),
            };
            for perm in Unshuffles::new(&[j, n - j]) {
                let sign = prefactor
                    * match self.convention() {
                        Convention::Shifted => koszul_sign(&perm, &sdegs),
                        Convention::Unshifted => odd_koszul_sign(&perm, degs),
                    };
                let in_args: Vec<&C> = perm[..j].iter().map(|&i| args[i]).collect();
                let in_degs: Vec<i32> = perm[..j].iter().map(|&i| degs[i]).collect();
                let y = inner.eval_hom(&in_args, &in_degs);
                if y.is_zero() {
                    continue;
                }
                let ydeg = y
                    .degree()
                    .unwrap_or_else(|| panic!("inhomogeneous output of {}", inner.name()));
                let mut out_args: Vec<&C> = Vec::with_capacity(n - j + 1);
                out_args.push(&y);
                out_args.extend(perm[j..].iter().map(|&i| args[i]));
                let mut out_degs = Vec::with_capacity(n - j + 1);
                out_degs.push(ydeg);
                out_degs.extend(perm[j..].iter().map(|&i| degs[i]));
                let z = outer.eval_hom(&out_args, &out_degs);
                if !z.is_zero() {
                    acc.add_scaled(&z, &q(sign as i64));
                }
            }
        }
        acc
    }
}

fn composed_arities(g: Arities, f: Arities) -> Arities {
    let Some(gmax) = g.max() else {
        return Arities::NONE;
    };
    let Some(fmax) = f.max() else {
        return Arities::NONE;
    };
    let top = (gmax * fmax).min(63);
    let mut out = Arities::NONE;
    for m in 1..=top {
        for l in g.iter() {
            if l > m {
                break;
            }
            if partitions_increasing(m, l)
                .iter()
                .any(|ks| ks.iter().all(|&k| f.contains(k)))
            {
                out = out.union(Arities::single(m));
                break;
            }
        }
    }
    out
}

/// Whether an unshuffle of an increasing shape satisfies the P< condition.
pub fn satisfies_p_less(perm: &[usize], shape: &[usize]) -> bool {
    let mut start = 0;
    let mut prev: Option<(usize, usize)> = None;
    for &k in shape {
        if let Some((pk, pstart)) = prev {
            if pk == k && perm[pstart] > perm[start] {
                return false;
            }
        }
        prev = Some((k, start));
        start += k;
    }
    true
}

fn eval_compose<C: Carrier>(
    g: &MultiMap<C>,
    f: &MultiMap<C>,
    args: &[&C],
    degs: &[i32],
    convention: Convention,
) -> C {
    let n = args.len();
    let mut acc = args[0].zero_like();
    let sdegs = shifted_degrees(degs);
    for l in g.arities().iter() {
        if l > n {
            break;
        }
        for shape in partitions_increasing(n, l) {
            if !shape.iter().all(|&k| f.arities().contains(k)) {
                continue;
            }
            // Sign from the displayed S_(l,m) prefactor in the unshifted convention.
            let prefactor = match convention {
                Convention::Shifted => 1,
                Convention::Unshifted => {
                    let e: i64 = shape
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| f.weight_at(k) as i64 * (l - 1 - i) as i64)
                        .sum();
                    parity_sign(e)
                }
            };
            'perms: for perm in Unshuffles::new(&shape) {
                if !satisfies_p_less(&perm, &shape) {
                    continue;
                }
                let mut sign = prefactor
                    * match convention {
                        Convention::Shifted => koszul_sign(&perm, &sdegs),
                        Convention::Unshifted => odd_koszul_sign(&perm, degs),
                    };
                let mut outputs = Vec::with_capacity(l);
                let mut out_degs = Vec::with_capacity(l);
                let mut start = 0;
                let mut passed_degree = 0i64;
                for &k in &shape {
                    let block = &perm[start..start + k];
                    let b_args: Vec<&C> = block.iter().map(|&i| args[i]).collect();
                    let b_degs: Vec<i32> = block.iter().map(|&i| degs[i]).collect();
                    if convention == Convention::Unshifted {
                        // Koszul rule for (f_1 ⊗ ... ⊗ f_l) applied to a tensor.
                        sign *= parity_sign(f.weight_at(k) as i64 * passed_degree);
                        passed_degree += b_degs.iter().map(|&d| d as i64).sum::<i64>();
                    }
                    let y = f.eval_hom(&b_args, &b_degs);
                    if y.is_zero() {
                        continue 'perms;
                    }
                    out_degs.push(y.degree().expect("homogeneous output"));
                    outputs.push(y);
                    start += k;
                }
                let refs: Vec<&C> = outputs.iter().collect();
                let z = g.eval_hom(&refs, &out_degs);
                if !z.is_zero() {
                    acc.add_scaled(&z, &q(sign as i64));
                }
            }
        }
    }
    acc
}

/// Block operators acting on tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// Koszul-signed unshuffle sum.
    B,
    /// Odd-Koszul-signed unshuffle sum.
    P,
    /// `P` restricted by the equal-block ordering condition.
    PLess,
}

/// Signed reorderings of `tuple` produced by the block operator.
pub fn apply_block_operator<T: Clone>(
    kind: BlockKind,
    shape: &[usize],
    tuple: &[T],
    degrees: &[i32],
) -> Result<Vec<(i32, Vec<T>)>, GradedError> {
    let total: usize = shape.iter().sum();
    if total != tuple.len() || degrees.len() != tuple.len() {
        return Err(GradedError::ShapeMismatch {
            shape: shape.to_vec(),
            len: tuple.len(),
        });
    }
    if kind == BlockKind::PLess && shape.windows(2).any(|w| w[0] > w[1]) {
        return Err(GradedError::ShapeNotIncreasing(shape.to_vec()));
    }
    let mut out = Vec::new();
    for perm in Unshuffles::new(shape) {
        if kind == BlockKind::PLess && !satisfies_p_less(&perm, shape) {
            continue;
        }
        let sign = match kind {
            BlockKind::B => koszul_sign(&perm, degrees),
            BlockKind::P | BlockKind::PLess => odd_koszul_sign(&perm, degrees),
        };
        out.push((sign, perm.iter().map(|&i| tuple[i].clone()).collect()));
    }
    Ok(out)
}

/// Checks the declared symmetry of `m` under the transposition of slots `pos`, `pos+1`.
/// Returns `None` when the tag is `Symmetry::None` or the slots are inhomogeneous.
pub fn symmetry_probe<C: Carrier>(m: &MultiMap<C>, args: &[C], pos: usize) -> Option<bool> {
    if m.symmetry() == Symmetry::None || pos + 1 >= args.len() {
        return None;
    }
    let (Some(a), Some(b)) = (args[pos].degree(), args[pos + 1].degree()) else {
        return Some(true);
    };
    if !args[pos].is_homogeneous() || !args[pos + 1].is_homogeneous() {
        return None;
    }
    let (da, db) = match m.convention() {
        Convention::Shifted => (a - 1, b - 1),
        Convention::Unshifted => (a, b),
    };
    let mut sign = parity_sign(da as i64 * db as i64);
    if m.symmetry() == Symmetry::Skew {
        sign = -sign;
    }
    let mut swapped = args.to_vec();
    swapped.swap(pos, pos + 1);
    let lhs = m.eval(&swapped);
    let mut rhs = m.eval(args);
    rhs = rhs.scaled(&q(sign as i64));
    let mut diff = lhs;
    diff.add_scaled(&rhs, &-Q::one());
    Some(diff.is_zero())
}

/// `a(args) - b(args)`.
pub fn difference<C: Carrier>(a: &MultiMap<C>, b: &MultiMap<C>, args: &[C]) -> C {
    let mut out = a.eval(args);
    out.add_scaled(&b.eval(args), &-Q::one());
    out
}

/// Permutation sign re-exported for callers composing block sums by hand.
pub fn plain_sign(perm: &[usize]) -> i32 {
    permutation_sign(perm)
}

pub mod free {
    //! A free graded vector space with pseudo-random multilinear maps, used to
    //! test the calculus independently of any geometry.

    use std::collections::BTreeMap;

    use num::Zero;

    use super::{Arities, Carrier, Convention, MultiMap, Symmetry};
    use crate::combinatorics::{koszul_sign, odd_koszul_sign, q, Q};
    use crate::rng::SplitMix64;

    /// Basis vectors are `(degree, index)` pairs.
    #[derive(Clone, Debug, PartialEq, Eq, Default)]
    pub struct FreeVec {
        pub terms: BTreeMap<(i32, u32), Q>,
    }

    impl FreeVec {
        pub fn basis(degree: i32, index: u32) -> Self {
            let mut terms = BTreeMap::new();
            terms.insert((degree, index), q(1));
            FreeVec { terms }
        }

        /// Random homogeneous element of the given degree with small integer coefficients.
        pub fn random(rng: &mut SplitMix64, degree: i32) -> Self {
            let mut v = FreeVec::default();
            for idx in 0..3 {
                let c = rng.range(-3, 3);
                if c != 0 {
                    v.terms.insert((degree, idx), q(c));
                }
            }
            if v.terms.is_empty() {
                v.terms.insert((degree, 0), q(1));
            }
            v
        }
    }

    impl Carrier for FreeVec {
        fn zero_like(&self) -> Self {
            FreeVec::default()
        }

        fn is_zero(&self) -> bool {
            self.terms.is_empty()
        }

        fn add_scaled(&mut self, other: &Self, c: &Q) {
            if c.is_zero() {
                return;
            }
            for (k, v) in &other.terms {
                let e = self.terms.entry(*k).or_insert_with(Q::zero);
                *e += v * c;
                if e.is_zero() {
                    self.terms.remove(k);
                }
            }
        }

        fn degree(&self) -> Option<i32> {
            let first = self.terms.keys().next()?.0;
            assert!(
                self.terms.keys().all(|k| k.0 == first),
                "inhomogeneous FreeVec"
            );
            Some(first)
        }

        fn homogeneous_parts(&self) -> Vec<Self> {
            let mut parts: BTreeMap<i32, FreeVec> = BTreeMap::new();
            for (k, v) in &self.terms {
                parts.entry(k.0).or_default().terms.insert(*k, v.clone());
            }
            parts.into_values().collect()
        }
    }

    fn mix(mut h: u64, x: u64) -> u64 {
        h ^= x
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(h << 6)
            .wrapping_add(h >> 2);
        h
    }

    /// Pseudo-random multilinear map of fixed arity and weight without symmetry.
    fn raw_map(seed: u64, args: &[&FreeVec], weight: i32) -> FreeVec {
        let mut out = FreeVec::default();
        let out_degree = weight + args.iter().map(|a| a.degree().unwrap_or(0)).sum::<i32>();
        let mut stack: Vec<(u64, Q)> = vec![(seed, q(1))];
        for a in args {
            let mut next = Vec::new();
            for (h, c) in &stack {
                for ((d, i), v) in &a.terms {
                    next.push((mix(mix(*h, *d as u64), *i as u64), c * v));
                }
            }
            stack = next;
        }
        for (h, c) in stack {
            let mut r = SplitMix64::new(h);
            for idx in 0..2u32 {
                let coef = r.range(-2, 2);
                if coef != 0 {
                    let mut term = FreeVec::basis(out_degree, idx);
                    term.terms.insert((out_degree, idx), q(coef) * &c);
                    out.add_scaled(&term, &q(1));
                }
            }
        }
        out
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut v = p.clone();
                v.insert(pos, n - 1);
                out.push(v);
            }
        }
        out
    }

    /// Random graded skew map of the given arity and weight on `V`.
    pub fn random_skew(seed: u64, arity: usize, weight: i32) -> MultiMap<FreeVec> {
        let perms = all_permutations(arity);
        MultiMap::base(
            format!("skew{seed}"),
            Arities::single(arity),
            weight + arity as i32 - 1,
            Convention::Unshifted,
            Symmetry::Skew,
            move |args: &[&FreeVec]| {
                let degs: Vec<i32> = args.iter().map(|a| a.degree().unwrap_or(0)).collect();
                let mut out = FreeVec::default();
                for p in &perms {
                    let permuted: Vec<&FreeVec> = p.iter().map(|&i| args[i]).collect();
                    let s = odd_koszul_sign(p, &degs);
                    out.add_scaled(&raw_map(seed, &permuted, weight), &q(s as i64));
                }
                out
            },
        )
    }

    /// Random graded symmetric map of the given arity and degree on `V[1]`.
    pub fn random_symmetric(seed: u64, arity: usize, degree: i32) -> MultiMap<FreeVec> {
        let perms = all_permutations(arity);
        MultiMap::base(
            format!("sym{seed}"),
            Arities::single(arity),
            degree,
            Convention::Shifted,
            Symmetry::Symmetric,
            move |args: &[&FreeVec]| {
                let sdegs: Vec<i32> = args.iter().map(|a| a.degree().unwrap_or(0) - 1).collect();
                let mut out = FreeVec::default();
                for p in &perms {
                    let permuted: Vec<&FreeVec> = p.iter().map(|&i| args[i]).collect();
                    let s = koszul_sign(p, &sdegs);
                    // Output degree in the unshifted grading is degree + sum of shifted degrees + 1.
                    out.add_scaled(
                        &raw_map(seed, &permuted, degree - arity as i32 + 1),
                        &q(s as i64),
                    );
                }
                out
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::free::{random_skew, random_symmetric, FreeVec};
    use super::*;
    use crate::rng::SplitMix64;

    fn random_tuple(rng: &mut SplitMix64, n: usize) -> Vec<FreeVec> {
        (0..n)
            .map(|_| {
                let d = rng.range(-2, 1) as i32;
                FreeVec::random(rng, d)
            })
            .collect()
    }

    #[test]
    fn decalage_sign_examples() {
        assert_eq!(decalage_sign(&[5]), 1);
        assert_eq!(decalage_sign(&[0, 7]), 1);
        assert_eq!(decalage_sign(&[1, 1, 4]), -1);
    }

    #[test]
    fn dec_round_trip() {
        let m = random_skew(3, 3, -1);
        let back = m.dec().dec_inv();
        let mut rng = SplitMix64::new(9);
        for _ in 0..20 {
            let t = random_tuple(&mut rng, 3);
            assert_eq!(m.eval(&t), back.eval(&t));
        }
    }

    #[test]
    fn dec_rejects_symmetric() {
        let s = random_symmetric(1, 2, 0).dec_inv();
        let sym_unshifted = MultiMap::<FreeVec>::base(
            "s",
            Arities::single(2),
            0,
            Convention::Unshifted,
            Symmetry::Symmetric,
            |a: &[&FreeVec]| a[0].clone(),
        );
        assert_eq!(sym_unshifted.try_dec().unwrap_err(), GradedError::NotSkew);
        assert_eq!(s.symmetry(), Symmetry::Skew);
    }

    #[test]
    fn dec_is_multiplicative() {
        let mut rng = SplitMix64::new(4);
        for (sa, sb) in [
            ((2, 0), (2, -1)),
            ((3, -1), (2, 0)),
            ((2, 0), (1, 1)),
            ((1, 0), (3, -1)),
        ] {
            let a = random_skew(11, sa.0, sa.1);
            let b = random_skew(12, sb.0, sb.1);
            let lhs = a.nr(&b).dec();
            let rhs = a.dec().nr(&b.dec());
            let n = sa.0 + sb.0 - 1;
            for _ in 0..10 {
                let t = random_tuple(&mut rng, n);
                assert_eq!(lhs.eval(&t), rhs.eval(&t), "shapes {sa:?} {sb:?}");
            }
        }
    }

    #[test]
    fn declared_symmetries_hold() {
        let mut rng = SplitMix64::new(5);
        let maps = [
            random_skew(1, 3, 0),
            random_symmetric(2, 3, 1),
            random_skew(3, 2, 1).nr(&random_skew(4, 2, -1)),
        ];
        for m in &maps {
            let k = m.arities().max().unwrap();
            for _ in 0..30 {
                let t = random_tuple(&mut rng, k);
                let pos = rng.below(k - 1);
                assert_eq!(symmetry_probe(m, &t, pos), Some(true), "{}", m.name());
            }
        }
    }

    #[test]
    fn arity_bookkeeping() {
        let a = random_symmetric(1, 3, 0);
        let b = random_symmetric(2, 2, 0);
        assert_eq!(a.nr(&b).arities(), Arities::single(4));
        assert_eq!(a.power(2).arities(), Arities::single(5));
    }

    #[test]
    fn block_operator_examples() {
        let p = apply_block_operator(BlockKind::P, &[1, 1], &['x', 'y'], &[0, 0]).unwrap();
        assert_eq!(p, vec![(1, vec!['x', 'y']), (-1, vec!['y', 'x'])]);
        let pl = apply_block_operator(BlockKind::PLess, &[1, 1], &['x', 'y'], &[0, 0]).unwrap();
        assert_eq!(pl, vec![(1, vec!['x', 'y'])]);
        let b = apply_block_operator(BlockKind::B, &[2, 1], &['x', 'y', 'z'], &[1, 1, 0]).unwrap();
        assert_eq!(b.len(), 3);
        assert!(apply_block_operator(BlockKind::B, &[2, 2], &['x'], &[0]).is_err());
        assert!(
            apply_block_operator(BlockKind::PLess, &[2, 1], &['x', 'y', 'z'], &[0, 0, 0]).is_err()
        );
    }
}
