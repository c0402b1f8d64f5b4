//! Verification suites: named checks over seeded sample families, each
//! producing a [`CheckRecord`].

use std::time::Instant;

use num::{One, Zero};

use crate::appendixb::{build_system, cross_validate, solve, AppendixError};
use crate::cartan::{Form, VectorField};
use crate::combinatorics::{
    bernoulli, coefficient_c, compositions, factorial, fmt_q, pow2, q, qr, verify_elezovic,
    verify_euler, verify_recursion, Q,
};
use crate::exec::{self, Parallelism};
use crate::graded::{difference, Arities, Carrier, Convention, MultiMap, Symmetry};
use crate::morphisms::{
    gauge_tau, increasing_tuples, insertion_closed, pairing_power_closed, pentagon_check,
    pentagon_scalar, phi_from_pairing, psi_map, rhsbm_sides, ComomentMap, Gauge,
};
use crate::nr::{
    exp_morphism, power_series, pushforward_structure, verify_morphism, LinftyMorphism,
    LinftyStructure,
};
use crate::rng::SplitMix64;
use crate::structures::{
    bold_mu, bold_pi, bold_s, courant_bracket, mostly_top_tuple, observable_tuple, pairing_minus,
    pairing_plus, random_degree, random_form, random_observable, random_poly, random_section,
    rogers_map, validate_model, vinogradov_map, Element, HamPair, Model,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// Inputs and both sides of a failing sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub samples: usize,
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: f64,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Records of one suite run, sorted by check name.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            suite: suite.into(),
            seed,
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn merge(suite: impl Into<String>, seed: u64, reports: Vec<Report>) -> Self {
        Report::new(
            suite,
            seed,
            reports.into_iter().flat_map(|r| r.records).collect(),
        )
    }
}

/// Sampling controls shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Overrides every per-check sample count when set.
    pub tuples: Option<usize>,
    pub max_arity: Option<usize>,
    pub poly_degree: u32,
    pub parallelism: Parallelism,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 1,
            tuples: None,
            max_arity: None,
            poly_degree: 2,
            parallelism: Parallelism::available(),
        }
    }
}

impl SuiteOptions {
    fn count(&self, default: usize) -> usize {
        self.tuples.unwrap_or(default)
    }

    fn arity(&self, default: usize) -> usize {
        self.max_arity.unwrap_or(default)
    }
}

/// Evaluates `test` on every sample; the record keeps the first failure in sample order.
pub fn predicate_check<T, F>(
    name: String,
    anchor: &str,
    samples: Vec<T>,
    mode: Parallelism,
    test: F,
) -> CheckRecord
where
    T: Send,
    F: Fn(T) -> Option<Counterexample> + Sync + Send,
{
    let start = Instant::now();
    let count = samples.len();
    let outcomes = exec::map(samples, mode, test);
    let counterexample = outcomes.into_iter().flatten().next();
    CheckRecord {
        name,
        anchor: anchor.to_string(),
        status: if counterexample.is_none() {
            Status::Pass
        } else {
            Status::Fail
        },
        samples: count,
        counterexample,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// A check with a single deterministic computation.
pub fn scalar_check<F>(name: String, anchor: &str, test: F) -> CheckRecord
where
    F: FnOnce() -> Option<Counterexample>,
{
    let start = Instant::now();
    let counterexample = test();
    CheckRecord {
        name,
        anchor: anchor.to_string(),
        status: if counterexample.is_none() {
            Status::Pass
        } else {
            Status::Fail
        },
        samples: 1,
        counterexample,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn show(args: &[Element]) -> Vec<String> {
    args.iter().map(ToString::to_string).collect()
}

/// `lhs = rhs` as evaluated maps on every sample.
pub fn map_identity(
    name: String,
    anchor: &str,
    lhs: &MultiMap<Element>,
    rhs: &MultiMap<Element>,
    samples: Vec<Vec<Element>>,
    mode: Parallelism,
) -> CheckRecord {
    predicate_check(name, anchor, samples, mode, |args| {
        if difference(lhs, rhs, &args).is_zero() {
            None
        } else {
            Some(Counterexample {
                inputs: show(&args),
                lhs: lhs.eval(&args).to_string(),
                rhs: rhs.eval(&args).to_string(),
            })
        }
    })
}

/// Seeded observable tuples; even samples have at most one negative entry,
/// odd samples draw every degree independently.
pub fn observable_samples(
    model: &Model,
    opts: &SuiteOptions,
    label: &str,
    k: usize,
    count: usize,
) -> Vec<Vec<Element>> {
    (0..count as u64)
        .map(|s| {
            let mut rng = SplitMix64::for_sample(opts.seed, label, s);
            if s % 2 == 0 {
                mostly_top_tuple(&mut rng, model, k, opts.poly_degree)
            } else {
                let degrees: Vec<i32> = (0..k).map(|_| random_degree(&mut rng, model)).collect();
                observable_tuple(&mut rng, model, &degrees, opts.poly_degree)
            }
        })
        .collect()
}

/// Seeded tuples of arbitrary sections of `TM ⊕ Λ^(n-1) T*M` and lower forms.
pub fn section_samples(
    model: &Model,
    opts: &SuiteOptions,
    label: &str,
    k: usize,
    count: usize,
) -> Vec<Vec<Element>> {
    (0..count as u64)
        .map(|s| {
            let mut rng = SplitMix64::for_sample(opts.seed, label, s);
            (0..k)
                .map(|_| {
                    let d = random_degree(&mut rng, model);
                    random_section(&mut rng, model, d, opts.poly_degree)
                })
                .collect()
        })
        .collect()
}

fn label(parts: &[&str]) -> String {
    parts.join("/")
}

/// Bernoulli numbers `B_0..B_10` and `c_1..c_10` as tabulated.
pub fn reference_table() -> (Vec<Q>, Vec<Q>) {
    let b = vec![
        q(1),
        qr(-1, 2),
        qr(1, 6),
        q(0),
        qr(-1, 30),
        q(0),
        qr(1, 42),
        q(0),
        qr(-1, 30),
        q(0),
        qr(5, 66),
    ];
    let c = vec![
        q(-1),
        qr(-1, 6),
        q(0),
        qr(1, 180),
        q(0),
        qr(-1, 2835),
        q(0),
        qr(1, 37800),
        q(0),
        qr(-1, 467775),
    ];
    (b, c)
}

/// `(k, B_k, c_k)` rows for `k <= max_k`; `c_0` is undefined.
pub fn table_rows(max_k: usize) -> Vec<(usize, Q, Option<Q>)> {
    (0..=max_k)
        .map(|k| (k, bernoulli(k), (k >= 1).then(|| coefficient_c(k))))
        .collect()
}

pub fn tables_suite(opts: &SuiteOptions) -> Report {
    let (b_ref, c_ref) = reference_table();
    let compare = |computed: Vec<Q>, expected: Vec<Q>, offset: usize| {
        for (i, (x, y)) in computed.iter().zip(&expected).enumerate() {
            if x != y {
                return Some(Counterexample {
                    inputs: vec![format!("k = {}", i + offset)],
                    lhs: fmt_q(x),
                    rhs: fmt_q(y),
                });
            }
        }
        None
    };
    let records = vec![
        scalar_check("table/bernoulli".into(), "B_k for 0 <= k <= 10", || {
            compare((0..=10).map(bernoulli).collect(), b_ref, 0)
        }),
        scalar_check(
            "table/c".into(),
            "c_k = (-1)^(k+1) 2^k B_k / (k k!) for 1 <= k <= 10",
            || compare((1..=10).map(coefficient_c).collect(), c_ref, 1),
        ),
    ];
    Report::new("tables", opts.seed, records)
}

fn bernoulli_records() -> Vec<CheckRecord> {
    let wrap = |r: Result<(), crate::combinatorics::BernoulliFailure>| {
        r.err().map(|e| Counterexample {
            inputs: vec![],
            lhs: e.to_string(),
            rhs: "0".into(),
        })
    };
    vec![
        scalar_check(
            "bernoulli/recursion".into(),
            "sum_(j<m) C(m,j) B_j = 0 for 2 <= m <= 40",
            || wrap(verify_recursion(40)),
        ),
        scalar_check(
            "bernoulli/compositions".into(),
            "2^k/k! B_k = sum over compositions of k of c_(k_1)...c_(k_j)/j! for k <= 14",
            || wrap(verify_elezovic(14)),
        ),
        scalar_check(
            "bernoulli/euler".into(),
            "sum_(i=2)^(r-2) C(r,i) B_i B_(r-i) = -(r+1) B_r for 4 <= r <= 24",
            || wrap(verify_euler(24)),
        ),
    ]
}

fn scale_nr(s: &MultiMap<Element>, power: usize, inner: &MultiMap<Element>) -> MultiMap<Element> {
    if power == 0 {
        inner.clone()
    } else {
        s.power(power).nr(inner)
    }
}

/// Identities between Rogers brackets, Vinogradov brackets and powers of `S`.
pub fn nr_identity_records(model: &Model, opts: &SuiteOptions) -> Vec<CheckRecord> {
    let n = model.n;
    let top = opts.arity(n + 2);
    let count = opts.count(20);
    let mode = opts.parallelism;
    let pi = bold_pi(model);
    let s = bold_s(model);
    let p = |k: usize| pi.component(k);
    let m = model.name.as_str();
    let samples = |name: &str, k: usize| observable_samples(model, opts, name, k, count);
    let mut out = Vec::new();
    let mut push =
        |name: String, anchor: &str, k: usize, lhs: MultiMap<Element>, rhs: MultiMap<Element>| {
            let s = samples(&name, k);
            out.push(map_identity(name, anchor, &lhs, &rhs, s, mode));
        };
    for k in 4..=top {
        push(
            label(&["rogers-recursion", m, &format!("k={k}")]),
            "[S, pi_(k-1)] = (k/2) pi_k",
            k,
            s.commutator(&p(k - 1)),
            p(k).scale(qr(k as i64, 2)),
        );
    }
    for k in 3..=top {
        let c = Q::from_integer(pow2(k - 3)) * q(6) / Q::from_integer(factorial(k));
        push(
            label(&["higher-pi", m, &format!("k={k}")]),
            "pi_k = (2^(k-3) 3!/k!) S^(k-3) o pi_3",
            k,
            p(k),
            scale_nr(&s, k - 3, &p(3)).scale(c),
        );
    }
    push(
        label(&["ternary-commutator", m]),
        "[S, [S, pi_1]] = [S, pi_2]",
        3,
        s.commutator(&s.commutator(&p(1))),
        s.commutator(&p(2)),
    );
    push(
        label(&["quaternary-commutator", m]),
        "[S, [S, [S, pi_1]]] = 3 pi_4",
        4,
        s.commutator(&s.commutator(&s.commutator(&p(1)))),
        p(4).scale(q(3)),
    );
    for j in 1..=top.saturating_sub(2) {
        push(
            label(&["power-commutator", m, &format!("j={j}")]),
            "[S^j, [S, pi_1]] = [S^j, pi_2]",
            j + 2,
            s.power(j).commutator(&s.commutator(&p(1))),
            s.power(j).commutator(&p(2)),
        );
    }
    push(
        label(&["associator-s-s-pi2", m]),
        "alpha(S, S, pi_2) = ([S^2, pi_2] - 3 pi_4)/2",
        4,
        s.associator(&s, &p(2)),
        s.power(2)
            .commutator(&p(2))
            .sub(&p(4).scale(q(3)))
            .scale(qr(1, 2)),
    );
    push(
        label(&["associator-s-s-s", m]),
        "alpha(S, S, S) = 0",
        4,
        s.associator(&s, &s),
        MultiMap::zero(Convention::Shifted, 0),
    );
    push(
        label(&["power-nesting", m]),
        "left- and right-nested S^3 agree",
        4,
        s.power(3),
        s.power_right(3),
    );
    for target in 4..=top {
        for qq in 1..=3usize.min(target - 1) {
            for parts in 1..=target - qq {
                if qq + parts < 4 {
                    continue;
                }
                for ks in compositions(target - qq, parts) {
                    let mut lhs = p(qq);
                    for &k in ks.iter().rev() {
                        lhs = s.power(k).commutator(&lhs);
                    }
                    let c = Q::from_integer(factorial(target))
                        / (Q::from_integer(pow2(target - qq)) * Q::from_integer(factorial(qq)));
                    let ks_text: Vec<String> = ks.iter().map(ToString::to_string).collect();
                    push(
                        label(&[
                            "nested-commutator",
                            m,
                            &format!("q={qq}"),
                            &format!("k=({})", ks_text.join(",")),
                        ]),
                        "[S^k_1, ... [S^k_m, pi_q]] = (n!/(2^(n-q) q!)) pi_n",
                        target,
                        lhs,
                        p(target).scale(c),
                    );
                }
            }
        }
    }
    let mu = bold_mu(model, top.max(3));
    push(
        label(&["mu2", m]),
        "mu_2 = pi_2 - [S, pi_1]",
        2,
        mu.component(2),
        p(2).sub(&s.commutator(&p(1))),
    );
    push(
        label(&["mu3", m]),
        "mu_3 = pi_3 - [S, [S, pi_1]]/2 - [S^2, pi_1]/6",
        3,
        mu.component(3),
        MultiMap::linear_combination(vec![
            (q(1), p(3)),
            (qr(-1, 2), s.commutator(&s.commutator(&p(1)))),
            (qr(-1, 6), s.power(2).commutator(&p(1))),
        ]),
    );
    for k in 3..=top {
        let c = q(3) * Q::from_integer(pow2(k - 1)) / Q::from_integer(factorial(k - 1))
            * bernoulli(k - 1);
        push(
            label(&["mu-from-mu3", m, &format!("k={k}")]),
            "mu_k = 3 (2^(k-1)/(k-1)!) B_(k-1) S^(k-3) o mu_3",
            k,
            mu.component(k),
            scale_nr(&s, k - 3, &mu.component(3)).scale(c),
        );
        let e = |j: usize, r: usize| {
            let x = scale_nr(&s, j, &p(1));
            if r == 0 {
                x
            } else {
                x.nr(&s.power(r))
            }
        };
        let c2 =
            Q::from_integer(pow2(k - 1)) / Q::from_integer(factorial(k - 1)) * bernoulli(k - 1);
        let combo = MultiMap::linear_combination(vec![
            (q(2), e(k - 1, 0)),
            (q(-3), e(k - 2, 1)),
            (q(1), e(k - 3, 2)),
        ]);
        push(
            label(&["mu-from-pi", m, &format!("k={k}")]),
            "mu_k = 2k B_(k-1) pi_k - (2^(k-1)/(k-1)!) B_(k-1) (2 S^(k-1) o pi_1 - 3 S^(k-2) o pi_1 o S + S^(k-3) o pi_1 o S^2)",
            k,
            mu.component(k),
            p(k).scale(q(2 * k as i64) * bernoulli(k - 1)).sub(&combo.scale(c2)),
        );
    }
    let rg = rogers_map(model);
    push(
        label(&["pairing-plus-pi2", m]),
        "<,>_+ o pi_2 = <,>_- o pi_2 - 3 pi_3",
        3,
        pairing_plus(n).nr(&rg.component(2)),
        pairing_minus(n)
            .nr(&rg.component(2))
            .sub(&rg.component(3).scale(q(3))),
    );
    out
}

/// `<,>_-^m` closed forms: insertion of a form, evaluation on sections, and a form pulled out front.
pub fn pairing_records(model: &Model, opts: &SuiteOptions) -> Vec<CheckRecord> {
    let n = model.n;
    let count = opts.count(20);
    let mode = opts.parallelism;
    let pm = pairing_minus(n);
    let mut out = Vec::new();
    for m in 1..=4usize {
        let name = label(&["insertion-as-pairing", &model.name, &format!("m={m}")]);
        let seeds: Vec<u64> = (0..count as u64).collect();
        let pm2 = pm.clone();
        out.push(predicate_check(
            name.clone(),
            "<,>_-^m (B, X_1, ..., X_m) = -s(m) m!/2^m i_(X_m)...i_(X_1) B",
            seeds.clone(),
            mode,
            |sd| {
                let mut rng = SplitMix64::for_sample(opts.seed, &name, sd);
                let deg = 1 + rng.below(model.dimension);
                let b = random_form(&mut rng, model.dimension, deg, opts.poly_degree);
                let xs: Vec<VectorField> = (0..m)
                    .map(|_| random_field(&mut rng, model.dimension, opts.poly_degree))
                    .collect();
                let mut args = vec![Element::form(n, b.clone())];
                args.extend(xs.iter().map(|x| Element::field(n, x.clone())));
                let lhs = pm2.power(m).eval(&args).form;
                let rhs = insertion_closed(m, &b, &xs.iter().collect::<Vec<_>>());
                (lhs != rhs).then(|| Counterexample {
                    inputs: show(&args),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                })
            },
        ));
        let name = label(&["evaluated-pairing-power", &model.name, &format!("m={m}")]);
        let pm3 = pm.clone();
        let sections = section_samples(model, opts, &name, m + 1, count);
        out.push(predicate_check(
            name,
            "<,>_-^m (v_1..v_(m+1)) = m!/2^m sum_j (-1)^(j+m+1) i_X_1..^j..i_X_(m+1) beta_j",
            sections,
            mode,
            |args| {
                let lhs = pm3.power(m).eval(&args).form;
                let rhs = pairing_power_closed(m, &args.iter().collect::<Vec<_>>());
                (lhs != rhs).then(|| Counterexample {
                    inputs: show(&args),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                })
            },
        ));
        let name = label(&["pairing-with-form", &model.name, &format!("m={m}")]);
        let pm4 = pm.clone();
        out.push(predicate_check(
            name.clone(),
            "<,>_-^(m-1) o <B, .>_- = (-1)^((m-1)(|B|-n+1)) <,>_-^m (B (x) 1_m)",
            seeds,
            mode,
            |sd| {
                let mut rng = SplitMix64::for_sample(opts.seed, &name, sd);
                let deg = 1 + rng.below(model.dimension);
                let b = random_form(&mut rng, model.dimension, deg, opts.poly_degree);
                let xs: Vec<Element> = (0..m)
                    .map(|_| {
                        Element::field(n, random_field(&mut rng, model.dimension, opts.poly_degree))
                    })
                    .collect();
                let b_degree = deg as i32 - n as i32 + 1;
                let bb = b.clone();
                let unary = MultiMap::base(
                    "<B,.>",
                    Arities::single(1),
                    b_degree - 1,
                    Convention::Unshifted,
                    Symmetry::Skew,
                    move |a: &[&Element]| {
                        Element::form(n, bb.contract(&a[0].field).scale(&qr(-1, 2)))
                    },
                );
                let lhs = scale_unshifted(&pm4, m - 1, &unary).eval(&xs);
                let mut args = vec![Element::form(n, b)];
                args.extend(xs.iter().cloned());
                let mut rhs = pm4.power(m).eval(&args);
                if ((m as i32 - 1) * b_degree).rem_euclid(2) == 1 {
                    rhs = rhs.scaled(&-Q::one());
                }
                (lhs != rhs).then(|| Counterexample {
                    inputs: show(&args),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                })
            },
        ));
    }
    out
}

fn scale_unshifted(
    pm: &MultiMap<Element>,
    power: usize,
    inner: &MultiMap<Element>,
) -> MultiMap<Element> {
    if power == 0 {
        inner.clone()
    } else {
        pm.power(power).nr(inner)
    }
}

fn random_field(rng: &mut SplitMix64, dimension: usize, degree: u32) -> VectorField {
    let mut x = VectorField::zero();
    for _ in 0..1 + rng.below(2) {
        x.add_component(rng.below(dimension), &random_poly(rng, dimension, degree));
    }
    x
}

/// Bernoulli identities plus the bracket identities on each model.
pub fn identities_suite(models: &[Model], opts: &SuiteOptions) -> Report {
    let mut records = if opts.tuples == Some(0) {
        Vec::new()
    } else {
        bernoulli_records()
    };
    for model in models {
        records.extend(nr_identity_records(model, opts));
        records.extend(pairing_records(model, opts));
    }
    Report::new("identities", opts.seed, records)
}

/// Coordinate formula `L_X (f dx_I) = X(f) dx_I + f sum_j dx_(i_1) ^ .. d(X^(i_j)) .. ^ dx_(i_k)`.
pub fn lie_derivative_coordinates(alpha: &Form, x: &VectorField, dimension: usize) -> Form {
    let mut out = Form::zero();
    for (mask, f) in alpha.terms() {
        let indices = crate::cartan::mask_indices(*mask);
        out += &Form::term(x.apply(f), *mask);
        for j in 0..indices.len() {
            let comp = x.component(indices[j]).cloned().unwrap_or_default();
            let dcomp = Form::from_poly(comp).d();
            let mut w = Form::from_poly(f.clone());
            for (l, &i) in indices.iter().enumerate() {
                let factor = if l == j {
                    dcomp.clone()
                } else {
                    Form::basis(&[i])
                };
                w = w.wedge(&factor);
            }
            out += &w;
        }
    }
    let _ = dimension;
    out
}

/// Exterior calculus laws on seeded polynomial data.
pub fn cartan_records(dimension: usize, opts: &SuiteOptions) -> Vec<CheckRecord> {
    let count = opts.count(100);
    let mode = opts.parallelism;
    let deg = opts.poly_degree;
    let space = format!("R{dimension}");
    let draw = move |name: &str, s: u64| {
        let mut rng = SplitMix64::for_sample(opts.seed, name, s);
        let k = rng.below(dimension + 1);
        let a = random_form(&mut rng, dimension, k, deg);
        let l = rng.below(dimension + 1);
        let b = random_form(&mut rng, dimension, l, deg);
        let x = random_field(&mut rng, dimension, deg);
        let y = random_field(&mut rng, dimension, deg);
        (a, b, x, y)
    };
    type Law = fn(&Form, &Form, &VectorField, &VectorField, usize) -> Option<(Form, Form)>;
    let laws: Vec<(&str, &str, Law)> = vec![
        ("d-squared", "d d a = 0", |a, _, _, _, _| {
            let v = a.d().d();
            (!v.is_zero()).then(|| (v, Form::zero()))
        }),
        ("contraction-squared", "i_X i_X a = 0", |a, _, x, _, _| {
            let v = a.contract(x).contract(x);
            (!v.is_zero()).then(|| (v, Form::zero()))
        }),
        (
            "magic-formula",
            "d i_X a + i_X d a = L_X a (coordinate formula)",
            |a, _, x, _, dim| {
                let lhs = a.lie_derivative(x);
                let rhs = lie_derivative_coordinates(a, x, dim);
                (lhs != rhs).then_some((lhs, rhs))
            },
        ),
        (
            "contraction-bracket",
            "i_[X,Y] = [L_X, i_Y]",
            |a, _, x, y, _| {
                let lhs = a.contract(&x.bracket(y));
                let mut rhs = a.contract(y).lie_derivative(x);
                rhs -= &a.lie_derivative(x).contract(y);
                (lhs != rhs).then_some((lhs, rhs))
            },
        ),
        ("lie-bracket", "L_[X,Y] = [L_X, L_Y]", |a, _, x, y, _| {
            let lhs = a.lie_derivative(&x.bracket(y));
            let mut rhs = a.lie_derivative(y).lie_derivative(x);
            rhs -= &a.lie_derivative(x).lie_derivative(y);
            (lhs != rhs).then_some((lhs, rhs))
        }),
        (
            "d-leibniz",
            "d(a ^ b) = da ^ b + (-1)^|a| a ^ db",
            |a, b, _, _, _| {
                let lhs = a.wedge(b).d();
                let sign = if a.degree().unwrap_or(0) % 2 == 0 {
                    q(1)
                } else {
                    q(-1)
                };
                let mut rhs = a.d().wedge(b);
                rhs += &a.wedge(&b.d()).scale(&sign);
                (lhs != rhs).then_some((lhs, rhs))
            },
        ),
        (
            "contraction-leibniz",
            "i_X(a ^ b) = i_X a ^ b + (-1)^|a| a ^ i_X b",
            |a, b, x, _, _| {
                let lhs = a.wedge(b).contract(x);
                let sign = if a.degree().unwrap_or(0) % 2 == 0 {
                    q(1)
                } else {
                    q(-1)
                };
                let mut rhs = a.contract(x).wedge(b);
                rhs += &a.wedge(&b.contract(x)).scale(&sign);
                (lhs != rhs).then_some((lhs, rhs))
            },
        ),
    ];
    laws.into_iter()
        .map(|(short, anchor, law)| {
            let name = label(&["cartan", short, &space]);
            let seeds: Vec<u64> = (0..count as u64).collect();
            predicate_check(name.clone(), anchor, seeds, mode, |s| {
                let (a, b, x, y) = draw(&name, s);
                law(&a, &b, &x, &y, dimension).map(|(l, r)| Counterexample {
                    inputs: vec![a.to_string(), b.to_string(), x.to_string(), y.to_string()],
                    lhs: l.to_string(),
                    rhs: r.to_string(),
                })
            })
        })
        .collect()
}

/// Model validity, nilpotency of both structures, degree filter and bracket closure.
pub fn structure_records(model: &Model, opts: &SuiteOptions) -> Vec<CheckRecord> {
    let n = model.n;
    let top = opts.arity(n + 2);
    let count = opts.count(50);
    let mode = opts.parallelism;
    let m = model.name.as_str();
    let mut out = vec![scalar_check(
        label(&["model", m]),
        "d omega = 0 and i_v omega injective at basepoints",
        || {
            validate_model(model).err().map(|e| Counterexample {
                inputs: vec![model.omega.to_string()],
                lhs: e.to_string(),
                rhs: String::new(),
            })
        },
    )];
    let structures = [
        ("rogers", LinftyStructure::new(bold_pi(model))),
        ("vinogradov", LinftyStructure::new(bold_mu(model, top))),
    ];
    for (short, st) in &structures {
        let square = st.square();
        for k in 1..=top {
            let name = label(&["nilpotency", short, m, &format!("k={k}")]);
            let samples = observable_samples(model, opts, &name, k, count);
            out.push(map_identity(
                name,
                "[m, m] = 0 on words of length k",
                &square,
                &MultiMap::zero(Convention::Shifted, 2),
                samples,
                mode,
            ));
        }
    }
    let mu = vinogradov_map(model, top);
    for k in 2..=top {
        let name = label(&["degree-filter", m, &format!("k={k}")]);
        let samples: Vec<Vec<Element>> = (0..count as u64)
            .filter_map(|s| {
                let mut rng = SplitMix64::for_sample(opts.seed, &name, s);
                if n < 2 || k < 2 {
                    return None;
                }
                let mut degrees = vec![0; k];
                degrees[0] = -(1 + rng.below(n - 1) as i32);
                degrees[1] = -(1 + rng.below(n - 1) as i32);
                Some(observable_tuple(
                    &mut rng,
                    model,
                    &degrees,
                    opts.poly_degree,
                ))
            })
            .collect();
        out.push(predicate_check(
            name,
            "mu_k vanishes with two or more negative-degree entries",
            samples,
            mode,
            |args| {
                let v = mu.eval(&args);
                (!v.is_zero()).then(|| Counterexample {
                    inputs: show(&args),
                    lhs: v.to_string(),
                    rhs: "0".into(),
                })
            },
        ));
    }
    let name = label(&["courant-closure", m]);
    let samples = observable_samples(model, opts, &name, 2, count)
        .into_iter()
        .map(|mut t| {
            let mut rng = SplitMix64::for_sample(opts.seed, &name, 1 << 20);
            for e in t.iter_mut() {
                if e.degree() != Some(0) {
                    *e = random_observable(&mut rng, model, 0, opts.poly_degree);
                }
            }
            t
        })
        .collect();
    out.push(predicate_check(
        name,
        "[e_1, e_2]_omega of Hamiltonian pairs is Hamiltonian",
        samples,
        mode,
        |args| {
            let b = courant_bracket(&args[0], &args[1], Some(&model.omega), n);
            match HamPair::new(b.form.clone(), b.field.clone(), model) {
                Ok(_) => None,
                Err(e) => Some(Counterexample {
                    inputs: show(&args),
                    lhs: b.to_string(),
                    rhs: e.to_string(),
                }),
            }
        },
    ));
    out
}

pub fn structures_suite(models: &[Model], opts: &SuiteOptions) -> Report {
    let mut records = Vec::new();
    for dim in [3, 4] {
        records.extend(cartan_records(dim, opts));
    }
    for model in models {
        records.extend(structure_records(model, opts));
    }
    Report::new("structures", opts.seed, records)
}

/// `p = sum_k c_k S^k` restricted to arities `2..=max_arity`.
pub fn generator(model: &Model, max_arity: usize) -> MultiMap<Element> {
    let coefficients: Vec<(usize, Q)> = (1..max_arity).map(|k| (k, coefficient_c(k))).collect();
    power_series(&bold_s(model), &coefficients).restrict(Arities::range(2, max_arity))
}

/// Default gauge form `± x_(m-1) dx_0 ^ ... ^ dx_(m-2)` with `dB = omega` on volume models.
pub fn default_gauge_form(model: &Model) -> Form {
    let last = model.dimension - 1;
    let indices: Vec<usize> = (0..last).collect();
    let sign = if last.is_multiple_of(2) { 1 } else { -1 };
    Form::basis(&indices)
        .mul_poly(&crate::cartan::Poly::var(last))
        .scale(&q(sign))
}

/// The embedding `psi` and its relatives on one model.
pub fn embedding_records(
    model: &Model,
    gauge_form: Option<&Form>,
    opts: &SuiteOptions,
) -> Vec<CheckRecord> {
    let n = model.n;
    let top = opts.arity(n + 1);
    let count = opts.count(30);
    let mode = opts.parallelism;
    let m = model.name.as_str();
    let pi = bold_pi(model);
    let mu = bold_mu(model, top.max(3));
    let psi = psi_map(top);
    let morphism = LinftyMorphism::new(
        psi.dec(),
        LinftyStructure::new(pi.clone()),
        LinftyStructure::new(mu.clone()),
    );
    let mut out = Vec::new();
    for k in 1..=top {
        let name = label(&["psi-morphism", m, &format!("k={k}")]);
        let samples = observable_samples(model, opts, &name, k, count);
        out.push(predicate_check(
            name,
            "Dec(psi) o Q_pi = Q_mu o Dec(psi) on words of length k",
            samples,
            mode,
            |args| {
                let d = verify_morphism(&morphism, &args);
                (!d.is_zero()).then(|| Counterexample {
                    inputs: show(&args),
                    lhs: d.to_string(),
                    rhs: "0".into(),
                })
            },
        ));
    }
    let phi = phi_from_pairing(n, top);
    let p = generator(model, top.max(2));
    let exp = exp_morphism(&p, top.max(2)).expect("generator has no unary part");
    let s = bold_s(model);
    for k in 1..=top {
        let name = label(&["psi-closed-vs-pairing", m, &format!("k={k}")]);
        let samples = observable_samples(model, opts, &name, k, count);
        out.push(map_identity(
            name,
            "psi_k = (2^(k-1)/(k-1)!) B_(k-1) <,>_-^(k-1)",
            &psi,
            &phi,
            samples,
            mode,
        ));
        let name = label(&["psi-vs-exp", m, &format!("k={k}")]);
        let samples = observable_samples(model, opts, &name, k, count);
        out.push(map_identity(
            name,
            "Dec(psi) = exp(p), p = sum c_k S^k",
            &psi.dec(),
            &exp,
            samples,
            mode,
        ));
        if k >= 2 {
            let c =
                Q::from_integer(pow2(k - 1)) / Q::from_integer(factorial(k - 1)) * bernoulli(k - 1);
            let name = label(&["exp-coefficients", m, &format!("k={k}")]);
            let samples = observable_samples(model, opts, &name, k, count);
            out.push(map_identity(
                name,
                "Phi_k = (2^(k-1)/(k-1)!) B_(k-1) S^(k-1)",
                &exp.component(k),
                &s.power(k - 1).scale(c),
                samples,
                mode,
            ));
        }
    }
    let push_top = top.max(4);
    let pushed = pushforward_structure(
        &LinftyStructure::new(pi.clone()),
        &generator(model, push_top),
        push_top,
    )
    .expect("generator has no unary part");
    let mu_push = bold_mu(model, push_top);
    for k in 1..=push_top {
        let name = label(&["pushforward", m, &format!("k={k}")]);
        let samples = observable_samples(model, opts, &name, k, count);
        let anchor = if k == 4 {
            "pi'_4 = 0 = mu_4"
        } else {
            "pi'_k = mu_k"
        };
        out.push(map_identity(
            name,
            anchor,
            &pushed.brackets.component(k),
            &mu_push.component(k),
            samples,
            mode,
        ));
    }
    let name = label(&["psi-mutation", m]);
    let perturbed = psi.add(&pairing_minus(n));
    let broken = LinftyMorphism::new(
        perturbed.dec(),
        LinftyStructure::new(pi),
        LinftyStructure::new(mu),
    );
    let samples: Vec<Vec<Element>> = (2..=top.min(3))
        .flat_map(|k| observable_samples(model, opts, &name, k, count))
        .collect();
    let total = samples.len();
    let detected = exec::map(samples, mode, |args| {
        !verify_morphism(&broken, &args).is_zero()
    })
    .into_iter()
    .any(|x| x);
    out.push(CheckRecord {
        name,
        anchor: "psi_2 + <,>_- fails the morphism equation".into(),
        status: if detected || total == 0 {
            Status::Pass
        } else {
            Status::Fail
        },
        samples: total,
        counterexample: (!detected && total > 0).then(|| Counterexample {
            inputs: vec![],
            lhs: "zero defect on every sample".into(),
            rhs: "nonzero defect".into(),
        }),
        elapsed_ms: 0.0,
    });
    let b = gauge_form
        .cloned()
        .unwrap_or_else(|| default_gauge_form(model));
    let mut twisted = model.clone();
    twisted.omega = &model.omega + &b.d();
    let tau = gauge_tau(&b).dec();
    let lhs = tau.nr(&vinogradov_map(model, top.max(3)).dec());
    let rhs = vinogradov_map(&twisted, top.max(3)).dec().compose(&tau);
    for k in 1..=top.max(3) {
        let name = label(&["gauge-intertwining", m, &format!("k={k}")]);
        let samples = section_samples(model, opts, &name, k, count);
        out.push(map_identity(
            name,
            "tau_B o mu^omega = mu^(omega + dB) o tau_B",
            &lhs,
            &rhs,
            samples,
            mode,
        ));
    }
    out
}

pub fn embedding_suite(models: &[(Model, Option<Form>)], opts: &SuiteOptions) -> Report {
    let mut records = Vec::new();
    for (model, b) in models {
        records.extend(embedding_records(model, b.as_ref(), opts));
    }
    Report::new("embedding", opts.seed, records)
}

fn err_record(name: String, anchor: &str, err: impl ToString) -> CheckRecord {
    scalar_check(name, anchor, || {
        Some(Counterexample {
            inputs: vec![],
            lhs: err.to_string(),
            rhs: String::new(),
        })
    })
}

/// Comoment validity, the pentagon, the binomial lemma and the scalar recursion.
pub fn pentagon_records(
    f: &ComomentMap,
    b: &Form,
    label_text: &str,
    opts: &SuiteOptions,
) -> Vec<CheckRecord> {
    let top = opts.arity(3);
    let mode = opts.parallelism;
    let mut out = Vec::new();
    let validity = |name: String, g: &ComomentMap| {
        scalar_check(
            name,
            "rho preserves omega, d f_1 = -i_rho omega, morphism defect = 0",
            || {
                g.validate().err().map(|e| Counterexample {
                    inputs: vec![],
                    lhs: e.to_string(),
                    rhs: String::new(),
                })
            },
        )
    };
    out.push(validity(label(&["comoment", label_text]), f));
    let gauge = match Gauge::new(&f.model, b.clone()) {
        Ok(g) => g,
        Err(e) => {
            out.push(err_record(
                label(&["gauge", label_text]),
                "omega + dB is a valid model",
                e,
            ));
            return out;
        }
    };
    match f.twist(&gauge) {
        Ok(ft) => out.push(validity(label(&["twisted-comoment", label_text]), &ft)),
        Err(e) => {
            out.push(err_record(
                label(&["twisted-comoment", label_text]),
                "L_rho B = 0",
                e,
            ));
            return out;
        }
    }
    let start = Instant::now();
    match pentagon_check(f, &gauge, top, mode) {
        Ok(report) => {
            let mut by_arity: Vec<CheckRecord> = (1..=top)
                .map(|m| {
                    let cells: Vec<_> = report.cells.iter().filter(|c| c.arity == m).collect();
                    let failure = cells.iter().find(|c| !c.discrepancy.is_zero());
                    CheckRecord {
                        name: label(&["pentagon", label_text, &format!("m={m}")]),
                        anchor: "(tau_B o psi o f)_m = (psi~ o f~)_m".into(),
                        status: if failure.is_none() {
                            Status::Pass
                        } else {
                            Status::Fail
                        },
                        samples: cells.len(),
                        counterexample: failure.map(|c| Counterexample {
                            inputs: c.tuple.iter().map(|i| format!("xi_{i}")).collect(),
                            lhs: c.discrepancy.to_string(),
                            rhs: "0".into(),
                        }),
                        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                    }
                })
                .collect();
            out.append(&mut by_arity);
        }
        Err(e) => out.push(err_record(
            label(&["pentagon", label_text]),
            "pentagon inputs",
            e,
        )),
    }
    out.push(scalar_check(
        label(&["pentagon-scalar", label_text]),
        "sum_(l=1)^m C(m, l-1) B_(l-1) = 0 for 2 <= m <= 20",
        || {
            (2..=20)
                .find(|&m| !pentagon_scalar(m).is_zero())
                .map(|m| Counterexample {
                    inputs: vec![format!("m = {m}")],
                    lhs: fmt_q(&pentagon_scalar(m)),
                    rhs: "0".into(),
                })
        },
    ));
    let mut cells = Vec::new();
    for m in 1..=4usize {
        for l in 1..=m {
            for t in increasing_tuples(f.lie.dim, m) {
                cells.push((m, l, t));
            }
        }
    }
    out.push(predicate_check(
        label(&["binomial-lemma", label_text]),
        "<,>_-^(l-1) o (f_1^(l-1) (x) b_(m-l+1)) o P = C(m,l-1) (l-1)!/2^(l-1) b_m",
        cells,
        mode,
        |(m, l, t)| {
            let (lhs, rhs) = rhsbm_sides(f, b, m, l, &t);
            (lhs != rhs).then(|| Counterexample {
                inputs: vec![format!("m = {m}, l = {l}, tuple = {t:?}")],
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            })
        },
    ));
    out
}

pub fn pentagon_suite(cases: &[(String, ComomentMap, Form)], opts: &SuiteOptions) -> Report {
    let mut records = Vec::new();
    for (name, f, b) in cases {
        records.extend(pentagon_records(f, b, name, opts));
    }
    Report::new("pentagon", opts.seed, records)
}

/// Builds, solves, certifies and cross-validates the system for each odd `n`.
pub fn appendixb_suite(ns: &[usize], opts: &SuiteOptions) -> Report {
    let reference: [(usize, Vec<Q>); 2] = [
        (5, vec![qr(3, 4), qr(3, 8)]),
        (7, vec![qr(1, 6), qr(2, 3), qr(3, 16), qr(3, 8)]),
    ];
    let records = exec::map(ns.to_vec(), opts.parallelism, |n| {
        scalar_check(
            label(&["appendixb", &format!("n={n:02}")]),
            "M a = R solvable with unique a; certificates hold",
            || {
                let run = || -> Result<Option<Counterexample>, AppendixError> {
                    let sys = build_system(n)?;
                    let sol = solve(&sys)?;
                    let cv = cross_validate(&sys, &sol);
                    let values: Vec<String> = sol.values().iter().map(fmt_q).collect();
                    if !sol.certificates.all_hold(sys.big_n) || !sol.halves_agree || !cv.holds() {
                        return Ok(Some(Counterexample {
                            inputs: vec![format!("n = {n}")],
                            lhs: format!(
                                "{:?}; halves agree: {}; cross-validation: {}",
                                sol.certificates,
                                sol.halves_agree,
                                cv.holds()
                            ),
                            rhs: values.join(", "),
                        }));
                    }
                    if let Some((_, expected)) = reference.iter().find(|(m, _)| *m == n) {
                        if &sol.values() != expected {
                            let e: Vec<String> = expected.iter().map(fmt_q).collect();
                            return Ok(Some(Counterexample {
                                inputs: vec![format!("n = {n}")],
                                lhs: values.join(", "),
                                rhs: e.join(", "),
                            }));
                        }
                    }
                    Ok(None)
                };
                run().unwrap_or_else(|e| {
                    Some(Counterexample {
                        inputs: vec![format!("n = {n}")],
                        lhs: e.to_string(),
                        rhs: String::new(),
                    })
                })
            },
        )
    });
    Report::new("appendixb", opts.seed, records)
}
