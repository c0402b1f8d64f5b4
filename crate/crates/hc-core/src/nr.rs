//! Nijenhuis–Richardson calculus: commutators, associators, coderivations,
//! L∞[1]-structures and morphisms, and the exponential pushforward.

use num::{One, Zero};
use thiserror::Error;

use crate::combinatorics::{factorial, koszul_sign, parity_sign, q, Unshuffles, Q};
use crate::graded::{Arities, Carrier, Convention, GradedError, MultiMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NrError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("generator has a nonzero unary component")]
    UnaryPart,
    #[error("generator must have degree 0, got {0}")]
    Degree(i32),
}

/// A formal linear combination of tensor words.
pub type FormalSum<C> = Vec<(Q, Vec<C>)>;

pub fn graded_commutator<C: Carrier>(
    a: &MultiMap<C>,
    b: &MultiMap<C>,
) -> Result<MultiMap<C>, GradedError> {
    a.try_nr(b)?;
    Ok(a.commutator(b))
}

pub fn associator<C: Carrier>(a: &MultiMap<C>, b: &MultiMap<C>, c: &MultiMap<C>) -> MultiMap<C> {
    a.associator(b, c)
}

/// `α(a,b,c) - (-1)^(|b||c|) α(a,c,b)`.
pub fn pre_lie_defect<C: Carrier>(
    a: &MultiMap<C>,
    b: &MultiMap<C>,
    c: &MultiMap<C>,
) -> MultiMap<C> {
    let sign = parity_sign(b.degree() as i64 * c.degree() as i64);
    MultiMap::linear_combination(vec![
        (Q::one(), a.associator(b, c)),
        (q(-sign as i64), a.associator(c, b)),
    ])
}

/// `[[a,b],c] - [a,[b,c]] + (-1)^(|a||b|) [b,[a,c]]`.
pub fn jacobiator<C: Carrier>(a: &MultiMap<C>, b: &MultiMap<C>, c: &MultiMap<C>) -> MultiMap<C> {
    let sign = parity_sign(a.degree() as i64 * b.degree() as i64);
    MultiMap::linear_combination(vec![
        (Q::one(), a.commutator(b).commutator(c)),
        (-Q::one(), a.commutator(&b.commutator(c))),
        (q(sign as i64), b.commutator(&a.commutator(c))),
    ])
}

/// `[a,(b∘̄c)] - [a,b]∘̄c - (-1)^(|a||b|) b∘̄[a,c] + α(a,b,c)`.
pub fn distributivity_defect<C: Carrier>(
    a: &MultiMap<C>,
    b: &MultiMap<C>,
    c: &MultiMap<C>,
) -> MultiMap<C> {
    let sign = parity_sign(a.degree() as i64 * b.degree() as i64);
    MultiMap::linear_combination(vec![
        (Q::one(), a.commutator(&b.nr(c))),
        (-Q::one(), a.commutator(b).nr(c)),
        (q(-sign as i64), b.nr(&a.commutator(c))),
        (Q::one(), a.associator(b, c)),
    ])
}

/// Left-nested power.
pub fn iterated_power<C: Carrier>(a: &MultiMap<C>, k: usize) -> MultiMap<C> {
    a.power(k)
}

/// `ad_a^k(b) = [a,[a,...,[a,b]]]`.
pub fn iterated_commutator<C: Carrier>(a: &MultiMap<C>, b: &MultiMap<C>, k: usize) -> MultiMap<C> {
    (0..k).fold(b.clone(), |acc, _| a.commutator(&acc))
}

/// Applies the coderivation of the shifted family `m` to a word of homogeneous elements.
pub fn coderivation_apply<C: Carrier>(m: &MultiMap<C>, word: &[C]) -> FormalSum<C> {
    assert_eq!(
        m.convention(),
        Convention::Shifted,
        "coderivations live in the shifted convention"
    );
    let n = word.len();
    let degs: Vec<i32> = word
        .iter()
        .map(|x| x.degree().expect("homogeneous nonzero word"))
        .collect();
    let sdegs: Vec<i32> = degs.iter().map(|d| d - 1).collect();
    let mut out = Vec::new();
    for i in m.arities().iter() {
        if i > n {
            break;
        }
        for perm in Unshuffles::new(&[i, n - i]) {
            let sign = koszul_sign(&perm, &sdegs);
            let args: Vec<&C> = perm[..i].iter().map(|&j| &word[j]).collect();
            let adegs: Vec<i32> = perm[..i].iter().map(|&j| degs[j]).collect();
            let y = m.eval_hom(&args, &adegs);
            if y.is_zero() {
                continue;
            }
            let mut w = vec![y];
            w.extend(perm[i..].iter().map(|&j| word[j].clone()));
            out.push((q(sign as i64), w));
        }
    }
    out
}

/// Projection of a formal sum onto words of length one.
pub fn project<C: Carrier>(sum: &FormalSum<C>) -> Option<C> {
    let mut acc: Option<C> = None;
    for (c, w) in sum {
        if w.len() == 1 {
            match &mut acc {
                Some(a) => a.add_scaled(&w[0], c),
                None => acc = Some(w[0].scaled(c)),
            }
        }
    }
    acc
}

/// An L∞[1]-structure: a shifted degree-one symmetric family.
#[derive(Clone, Debug)]
pub struct LinftyStructure<C: Carrier> {
    pub brackets: MultiMap<C>,
}

impl<C: Carrier> LinftyStructure<C> {
    pub fn new(brackets: MultiMap<C>) -> Self {
        assert_eq!(brackets.convention(), Convention::Shifted);
        LinftyStructure { brackets }
    }

    /// From an unshifted skew family via décalage.
    pub fn from_unshifted(brackets: &MultiMap<C>) -> Self {
        LinftyStructure {
            brackets: brackets.dec(),
        }
    }

    /// `m ∘̄ m`, which vanishes for an L∞[1]-structure.
    pub fn square(&self) -> MultiMap<C> {
        self.brackets.nr(&self.brackets)
    }

    pub fn nilpotency_probe(&self, args: &[C]) -> C {
        self.square().eval(args)
    }
}

/// An L∞[1]-morphism given by its weight-zero components.
#[derive(Clone, Debug)]
pub struct LinftyMorphism<C: Carrier> {
    pub components: MultiMap<C>,
    pub source: LinftyStructure<C>,
    pub target: LinftyStructure<C>,
}

impl<C: Carrier> LinftyMorphism<C> {
    pub fn new(
        components: MultiMap<C>,
        source: LinftyStructure<C>,
        target: LinftyStructure<C>,
    ) -> Self {
        assert_eq!(components.convention(), Convention::Shifted);
        assert_eq!(components.degree(), 0);
        LinftyMorphism {
            components,
            source,
            target,
        }
    }

    /// `f ∘̄ Q_src - Q_tgt ∘ F` as a single multilinear map.
    pub fn defect_map(&self) -> MultiMap<C> {
        self.components
            .nr(&self.source.brackets)
            .sub(&self.target.brackets.compose(&self.components))
    }

    /// Defect of the morphism equation at the given tuple.
    pub fn verify(&self, args: &[C]) -> C {
        verify_morphism(self, args)
    }
}

/// `pr F(Q(w)) - pr Q'(F(w))`, evaluated through the coderivation and coalgebra lift.
pub fn verify_morphism<C: Carrier>(f: &LinftyMorphism<C>, args: &[C]) -> C {
    let mut parts = Vec::new();
    for x in args {
        let hp = x.homogeneous_parts();
        if hp.is_empty() {
            return args[0].zero_like();
        }
        parts.push(hp);
    }
    if parts.iter().all(|p| p.len() == 1) {
        let word: Vec<C> = parts.into_iter().map(|mut p| p.remove(0)).collect();
        let mut lhs = args[0].zero_like();
        for (c, w) in coderivation_apply(&f.source.brackets, &word) {
            lhs.add_scaled(&f.components.eval(&w), &c);
        }
        let rhs = f.target.brackets.compose(&f.components).eval(&word);
        lhs.add_scaled(&rhs, &-Q::one());
        lhs
    } else {
        f.defect_map().eval(args)
    }
}

fn check_generator<C: Carrier>(p: &MultiMap<C>) -> Result<(), NrError> {
    if p.convention() != Convention::Shifted {
        return Err(GradedError::ConventionMismatch(p.convention(), Convention::Shifted).into());
    }
    if p.degree() != 0 {
        return Err(NrError::Degree(p.degree()));
    }
    if p.arities().contains(1) {
        return Err(NrError::UnaryPart);
    }
    Ok(())
}

/// `m' = sum_j (1/j!) ad_p^j(m)`, restricted to arities up to `max_arity`.
pub fn pushforward_structure<C: Carrier>(
    m: &LinftyStructure<C>,
    p: &MultiMap<C>,
    max_arity: usize,
) -> Result<LinftyStructure<C>, NrError> {
    check_generator(p)?;
    let keep = Arities::range(1, max_arity);
    let p = p.restrict(keep);
    let mut terms = vec![(Q::one(), m.brackets.restrict(keep))];
    let mut current = m.brackets.restrict(keep);
    for j in 1..max_arity {
        current = p.commutator(&current).restrict(keep);
        if current.arities().is_empty() {
            break;
        }
        terms.push((Q::one() / Q::from_integer(factorial(j)), current.clone()));
    }
    Ok(LinftyStructure {
        brackets: MultiMap::linear_combination(terms).with_name("pushforward"),
    })
}

/// `Φ = sum_j (1/j!) p^(∘̄ j)` with `Φ_1 = id`, restricted to arities up to `max_arity`.
pub fn exp_morphism<C: Carrier>(p: &MultiMap<C>, max_arity: usize) -> Result<MultiMap<C>, NrError> {
    check_generator(p)?;
    let keep = Arities::range(1, max_arity);
    let p = p.restrict(keep);
    let mut terms = vec![(Q::one(), MultiMap::identity(Convention::Shifted))];
    let mut current = p.clone();
    for j in 1..max_arity {
        if current.arities().is_empty() {
            break;
        }
        terms.push((Q::one() / Q::from_integer(factorial(j)), current.clone()));
        current = current.nr(&p).restrict(keep);
    }
    Ok(MultiMap::linear_combination(terms).with_name("Φ"))
}

/// Sum of `c_k a^k` (left-nested powers) for the listed coefficients, skipping zeros.
pub fn power_series<C: Carrier>(a: &MultiMap<C>, coefficients: &[(usize, Q)]) -> MultiMap<C> {
    let terms: Vec<_> = coefficients
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (c.clone(), a.power(*k)))
        .collect();
    if terms.is_empty() {
        MultiMap::zero(a.convention(), 0)
    } else {
        MultiMap::linear_combination(terms)
    }
}
