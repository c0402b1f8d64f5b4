//! Exact scalars, Bernoulli numbers, coefficient families, Koszul signs and
//! unshuffle permutations.

use std::sync::{OnceLock, RwLock};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational; the coefficient ring of every computation.
pub type Q = BigRational;

/// The rational `n/1`.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// The rational `num/den`, reduced.
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^e` as an integer sign.
pub fn parity_sign(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

fn bernoulli_cache() -> &'static RwLock<Vec<Q>> {
    static CACHE: OnceLock<RwLock<Vec<Q>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Q::one()]))
}

/// Bernoulli number `B_k` with `B_1 = -1/2`, from `sum_{j<m} C(m,j) B_j = 0`.
pub fn bernoulli(k: usize) -> Q {
    {
        let cache = bernoulli_cache().read().expect("bernoulli cache poisoned");
        if let Some(b) = cache.get(k) {
            return b.clone();
        }
    }
    let mut cache = bernoulli_cache().write().expect("bernoulli cache poisoned");
    while cache.len() <= k {
        let m = cache.len();
        let mut sum = Q::zero();
        for (j, b) in cache.iter().enumerate() {
            sum += Q::from_integer(binomial(m + 1, j)) * b;
        }
        let next = -sum / Q::from_integer(BigInt::from(m + 1));
        cache.push(next);
    }
    cache[k].clone()
}

/// `c_k = (-1)^(k+1) B_k 2^k / (k k!)`.
pub fn coefficient_c(k: usize) -> Q {
    assert!(k >= 1, "coefficient_c is defined for k >= 1");
    let num = bernoulli(k) * Q::from_integer(pow2(k));
    let den = Q::from_integer(BigInt::from(k) * factorial(k));
    let value = num / den;
    if k.is_multiple_of(2) {
        -value
    } else {
        value
    }
}

/// `ς(k) = -(-1)^(k(k+1)/2)`.
pub fn sign_varsigma(k: usize) -> i32 {
    -parity_sign((k * (k + 1) / 2) as i64)
}

/// `φ_m = 2^(m-1)/(m-1)! B_(m-1)`.
pub fn phi_coefficient(m: usize) -> Q {
    assert!(m >= 1, "phi_coefficient is defined for m >= 1");
    bernoulli(m - 1) * Q::new(pow2(m - 1), factorial(m - 1))
}

/// `d_m = 2^m/m!`.
pub fn d_coefficient(m: usize) -> Q {
    Q::new(pow2(m), factorial(m))
}

/// Constant of the odd Vinogradov brackets: `(-1)^((k+1)/2) 12 B_(k-1) / ((k-1)(k-2))`.
pub fn vinogradov_constant(k: usize) -> Q {
    assert!(k >= 3 && k % 2 == 1, "vinogradov_constant needs odd k >= 3");
    let value = bernoulli(k - 1) * q(12) / q(((k - 1) * (k - 2)) as i64);
    if k.div_ceil(2).is_multiple_of(2) {
        value
    } else {
        -value
    }
}

/// Sign of a permutation given in one-line notation (0-based).
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Koszul sign `ε(σ)` of reordering `x_0..x_{n-1}` into `x_{perm[0]}..x_{perm[n-1]}`.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> i32 {
    assert_eq!(
        perm.len(),
        degrees.len(),
        "permutation and degree lengths differ"
    );
    let mut odd = false;
    for i in 0..perm.len() {
        if degrees[perm[i]] & 1 == 0 {
            continue;
        }
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && degrees[perm[j]] & 1 != 0 {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Odd Koszul sign `χ(σ) = (-1)^σ ε(σ)`.
pub fn odd_koszul_sign(perm: &[usize], degrees: &[i32]) -> i32 {
    permutation_sign(perm) * koszul_sign(perm, degrees)
}

/// An unshuffle permutation together with its plain sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedUnshuffle {
    pub permutation: Vec<usize>,
    pub sign: i32,
    pub shape: Vec<usize>,
}

impl SignedUnshuffle {
    /// Index ranges of the blocks inside `permutation`.
    pub fn blocks(&self) -> Vec<&[usize]> {
        let mut out = Vec::with_capacity(self.shape.len());
        let mut start = 0;
        for &len in &self.shape {
            out.push(&self.permutation[start..start + len]);
            start += len;
        }
        out
    }
}

/// Streaming enumeration of `Ush(i_1,...,i_l)`.
///
/// Unshuffles are in bijection with words assigning a block label to each
/// position; the iterator walks those words in lexicographic order.
pub struct Unshuffles {
    shape: Vec<usize>,
    labels: Vec<usize>,
    done: bool,
}

impl Unshuffles {
    pub fn new(shape: &[usize]) -> Self {
        let labels: Vec<usize> = shape
            .iter()
            .enumerate()
            .flat_map(|(b, &len)| std::iter::repeat_n(b, len))
            .collect();
        Unshuffles {
            shape: shape.to_vec(),
            labels,
            done: false,
        }
    }

    fn current(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.labels.len());
        for block in 0..self.shape.len() {
            perm.extend(
                self.labels
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l == block)
                    .map(|(i, _)| i),
            );
        }
        perm
    }

    fn advance(&mut self) {
        let w = &mut self.labels;
        let n = w.len();
        if n < 2 {
            self.done = true;
            return;
        }
        let mut i = n - 1;
        while i > 0 && w[i - 1] >= w[i] {
            i -= 1;
        }
        if i == 0 {
            self.done = true;
            return;
        }
        let mut j = n - 1;
        while w[j] <= w[i - 1] {
            j -= 1;
        }
        w.swap(i - 1, j);
        w[i..].reverse();
    }
}

impl Iterator for Unshuffles {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let perm = self.current();
        self.advance();
        Some(perm)
    }
}

/// All unshuffles of the given shape with their plain permutation signs.
pub fn enumerate_unshuffles(shape: &[usize]) -> Vec<SignedUnshuffle> {
    assert!(
        shape.iter().all(|&k| k >= 1),
        "block sizes must be positive"
    );
    Unshuffles::new(shape)
        .map(|perm| SignedUnshuffle {
            sign: permutation_sign(&perm),
            permutation: perm,
            shape: shape.to_vec(),
        })
        .collect()
}

/// `(sum shape)! / prod(shape_i!)`.
pub fn multinomial(shape: &[usize]) -> BigInt {
    let total: usize = shape.iter().sum();
    shape
        .iter()
        .fold(factorial(total), |acc, &k| acc / factorial(k))
}

/// Ordered compositions of `total` into `parts` positive integers.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for k in 1..=rest.saturating_sub(parts - 1) {
            prefix.push(k);
            go(rest - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Weakly increasing sequences of positive integers summing to `total`.
pub fn partitions_increasing(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(
        rest: usize,
        parts: usize,
        min: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 0 {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let mut k = min;
        while k * parts <= rest {
            prefix.push(k);
            go(rest - k, parts - 1, k, prefix, out);
            prefix.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(total, parts, 1, &mut Vec::new(), &mut out);
    out
}

/// The first failing Bernoulli identity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernoulliFailure {
    #[error("recursion sum_(j<m) C(m,j) B_j = 0 fails at m = {0}")]
    Recursion(usize),
    #[error("composition formula for 2^k/k! B_k fails at k = {0}")]
    Elezovic(usize),
    #[error("Euler product sum identity fails at r = {0}")]
    Euler(usize),
}

/// `sum over compositions (k_1..k_n) of k of c_(k_1)...c_(k_n) / n!`, by dynamic programming.
pub fn composition_sum(k: usize) -> Q {
    // g[n][s]: sum over compositions of s into n parts of the c-products.
    let c: Vec<Q> = (0..=k)
        .map(|i| if i == 0 { Q::zero() } else { coefficient_c(i) })
        .collect();
    let mut prev = vec![Q::zero(); k + 1];
    prev[0] = Q::one();
    let mut total = Q::zero();
    let mut nfact = BigInt::one();
    for n in 1..=k {
        nfact *= BigInt::from(n);
        let mut next = vec![Q::zero(); k + 1];
        for s in 1..=k {
            let mut acc = Q::zero();
            for j in 1..=s {
                if !prev[s - j].is_zero() && !c[j].is_zero() {
                    acc += &c[j] * &prev[s - j];
                }
            }
            next[s] = acc;
        }
        total += &next[k] / Q::from_integer(nfact.clone());
        prev = next;
    }
    total
}

/// Checks the recursion, the composition formula and Euler's identity up to `max_k`.
pub fn verify_bernoulli_identities(max_k: usize) -> Result<(), BernoulliFailure> {
    assert!(max_k >= 4, "max_k must be at least 4");
    verify_recursion(max_k)?;
    verify_elezovic(max_k)?;
    verify_euler(max_k)
}

pub fn verify_recursion(max_m: usize) -> Result<(), BernoulliFailure> {
    for m in 2..=max_m {
        let sum: Q = (0..m)
            .map(|j| Q::from_integer(binomial(m, j)) * bernoulli(j))
            .sum();
        if !sum.is_zero() {
            return Err(BernoulliFailure::Recursion(m));
        }
    }
    Ok(())
}

pub fn verify_elezovic(max_k: usize) -> Result<(), BernoulliFailure> {
    for k in 1..=max_k {
        if d_coefficient(k) * bernoulli(k) != composition_sum(k) {
            return Err(BernoulliFailure::Elezovic(k));
        }
    }
    Ok(())
}

pub fn verify_euler(max_r: usize) -> Result<(), BernoulliFailure> {
    for r in 4..=max_r {
        let lhs: Q = (2..=r - 2)
            .map(|i| Q::from_integer(binomial(r, i)) * bernoulli(i) * bernoulli(r - i))
            .sum();
        if lhs != -q((r + 1) as i64) * bernoulli(r) {
            return Err(BernoulliFailure::Euler(r));
        }
    }
    Ok(())
}

/// Renders a rational as `a` or `a/b`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a` or `a/b` with optional sign.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

/// Sign of a nonzero rational as an `i32`.
pub fn signum(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
