//! Acceptance criteria, one line each. Exact arithmetic throughout.

use std::time::{Duration, Instant};

use hc_core::appendixb::{build_system, solve};
use hc_core::combinatorics::{
    bernoulli, coefficient_c, verify_elezovic, verify_euler, verify_recursion, Q,
};
use hc_core::exec::Parallelism;
use hc_core::graded::Carrier;
use hc_core::morphisms::{desk_comoment, translation_comoment};
use hc_core::structures::Model;
use hc_core::suites::{
    appendixb_suite, cartan_records, embedding_records, nr_identity_records, pairing_records,
    pentagon_records, structure_records, CheckRecord, SuiteOptions,
};
use hc_core::{q, qr};
use num::{BigInt, One, Zero};

fn opts() -> SuiteOptions {
    SuiteOptions {
        seed: 2024,
        parallelism: Parallelism::available(),
        ..SuiteOptions::default()
    }
}

/// Akiyama–Tanigawa, with the `B_1 = -1/2` convention.
fn bernoulli_oracle(max: usize) -> Vec<Q> {
    let mut out = Vec::new();
    let mut a: Vec<Q> = Vec::new();
    for m in 0..=max {
        a.push(Q::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = Q::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    out[1] = -out[1].clone();
    out
}

fn binom(n: usize, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, i| {
        acc * Q::from_integer(BigInt::from(n - i)) / Q::from_integer(BigInt::from(i + 1))
    })
}

fn records_ok(records: &[CheckRecord], min_samples: usize) -> Result<usize, String> {
    if records.is_empty() {
        return Err("no records".into());
    }
    for r in records {
        if !r.passed() {
            return Err(format!("{} failed: {:?}", r.name, r.counterexample));
        }
        if r.samples < min_samples {
            return Err(format!(
                "{} has {} samples, need {min_samples}",
                r.name, r.samples
            ));
        }
    }
    Ok(records.len())
}

fn prefixed(records: Vec<CheckRecord>, prefixes: &[&str]) -> Vec<CheckRecord> {
    records
        .into_iter()
        .filter(|r| prefixes.iter().any(|p| r.name.starts_with(p)))
        .collect()
}

fn c1() -> Result<String, String> {
    let b = [
        qr(1, 1),
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
    let c = [
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
    for (k, v) in b.iter().enumerate() {
        if &bernoulli(k) != v {
            return Err(format!("B_{k}"));
        }
    }
    for (i, v) in c.iter().enumerate() {
        if &coefficient_c(i + 1) != v {
            return Err(format!("c_{}", i + 1));
        }
    }
    Ok("B_0..B_10 and c_1..c_10 exact".into())
}

fn c2() -> Result<String, String> {
    verify_recursion(40).map_err(|e| e.to_string())?;
    verify_elezovic(14).map_err(|e| e.to_string())?;
    verify_euler(24).map_err(|e| e.to_string())?;
    let oracle = bernoulli_oracle(40);
    for (k, v) in oracle.iter().enumerate() {
        if &bernoulli(k) != v {
            return Err(format!("B_{k} differs from the Akiyama-Tanigawa value"));
        }
    }
    for m in 2..=40 {
        let s: Q = (0..m).map(|j| binom(m, j) * &oracle[j]).sum();
        if !s.is_zero() {
            return Err(format!("recursion oracle at m = {m}"));
        }
    }
    for r in 4..=24 {
        let s: Q = (2..=r - 2)
            .map(|i| binom(r, i) * &oracle[i] * &oracle[r - i])
            .sum();
        if s != -Q::from_integer(BigInt::from(r + 1)) * &oracle[r] {
            return Err(format!("Euler oracle at r = {r}"));
        }
    }
    Ok("recursion m <= 40, compositions k <= 14, Euler 4 <= r <= 24".into())
}

fn c3() -> Result<String, String> {
    let o = opts();
    let mut records = cartan_records(3, &o);
    records.extend(cartan_records(4, &o));
    let records = prefixed(
        records,
        &[
            "cartan/d-squared",
            "cartan/contraction-squared",
            "cartan/magic-formula",
            "cartan/contraction-bracket",
        ],
    );
    records_ok(&records, 100).map(|n| format!("{n} law/space pairs, 100 inputs each"))
}

fn c4() -> Result<String, String> {
    let o = opts();
    let mut records = Vec::new();
    for m in [Model::r3(), Model::r4()] {
        let top = m.n + 2;
        let r = prefixed(structure_records(&m, &o), &["nilpotency/"]);
        if r.len() != 2 * top {
            return Err(format!(
                "expected arities 1..={top} for both structures on {}",
                m.name
            ));
        }
        records.extend(r);
    }
    records_ok(&records, 50).map(|n| format!("{n} structure/arity probes, 50 words each"))
}

fn c5() -> Result<String, String> {
    let o = opts();
    let names = [
        "rogers-recursion/",
        "ternary-commutator/",
        "quaternary-commutator/",
        "associator-s-s-pi2/",
        "power-commutator/",
        "higher-pi/",
        "nested-commutator/",
        "mu2/",
        "mu3/",
        "mu-from-mu3/",
        "mu-from-pi/",
        "insertion-as-pairing/",
        "pairing-with-form/",
        "evaluated-pairing-power/",
        "pairing-plus-pi2/",
    ];
    let mut records = Vec::new();
    for m in [Model::r3(), Model::r4()] {
        let mut r = nr_identity_records(&m, &o);
        r.extend(pairing_records(&m, &o));
        for name in names {
            if !r.iter().any(|x| x.name.starts_with(name)) {
                return Err(format!("{name} missing on {}", m.name));
            }
        }
        records.extend(prefixed(r, &names));
    }
    records_ok(&records, 20).map(|n| format!("{n} identity instances, 20 tuples each"))
}

fn c6() -> Result<String, String> {
    let o = opts();
    let mut records = Vec::new();
    for m in [Model::r3(), Model::r4()] {
        let r = prefixed(
            embedding_records(&m, None, &o),
            &["psi-morphism/", "psi-closed-vs-pairing/"],
        );
        if r.len() != 2 * (m.n + 1) {
            return Err(format!("expected arities 1..={} on {}", m.n + 1, m.name));
        }
        records.extend(r);
    }
    records_ok(&records, 30).map(|n| format!("{n} defect/agreement checks, 30 tuples each"))
}

fn c7() -> Result<String, String> {
    let o = opts();
    let mut records = Vec::new();
    for m in [Model::r3(), Model::r4()] {
        let r = prefixed(embedding_records(&m, None, &o), &["pushforward/"]);
        if !r.iter().any(|x| x.name.ends_with("k=4")) {
            return Err(format!("pi'_4 not checked on {}", m.name));
        }
        records.extend(r);
    }
    let mu = hc_core::structures::bold_mu(&Model::r4(), 4).component(4);
    let samples = hc_core::suites::observable_samples(&Model::r4(), &o, "mu4-zero", 4, 30);
    if samples.iter().any(|s| !mu.eval(s).is_zero()) {
        return Err("mu_4 is not identically zero".into());
    }
    records_ok(&records, 30).map(|n| format!("{n} arities, including pi'_4 = 0"))
}

fn c8() -> Result<String, String> {
    let o = SuiteOptions {
        max_arity: Some(3),
        ..opts()
    };
    let (f, b) = desk_comoment();
    let records = pentagon_records(&f, &b, "desk", &o);
    let pentagon = prefixed(records.clone(), &["pentagon/desk/m="]);
    if pentagon.len() != 3 {
        return Err("expected pentagon records for m = 1, 2, 3".into());
    }
    records_ok(&records, 0)?;
    let (g, c) = translation_comoment(4);
    let wider = pentagon_records(&g, &c, "translation-r4", &o);
    records_ok(&wider, 0)?;
    let wide_cells: usize = prefixed(wider, &["pentagon/"])
        .iter()
        .map(|r| r.samples)
        .sum();
    let oracle = bernoulli_oracle(20);
    for m in 2..=20 {
        let s: Q = (1..=m).map(|l| binom(m, l - 1) * &oracle[l - 1]).sum();
        if !s.is_zero() {
            return Err(format!("scalar recursion at m = {m}"));
        }
    }
    let cells: usize = pentagon.iter().map(|r| r.samples).sum();
    Ok(format!("{cells} desk cells and {wide_cells} translation cells for m <= 3, scalar recursion 2 <= m <= 20"))
}

fn c9() -> Result<String, String> {
    let expect = |n: usize, v: Vec<Q>| -> Result<(), String> {
        let sys = build_system(n).map_err(|e| e.to_string())?;
        let sol = solve(&sys).map_err(|e| e.to_string())?;
        (sol.values() == v)
            .then_some(())
            .ok_or(format!("n = {n}: {:?}", sol.values()))
    };
    expect(5, vec![qr(3, 4), qr(3, 8)])?;
    expect(7, vec![qr(1, 6), qr(2, 3), qr(3, 16), qr(3, 8)])?;
    let ns: Vec<usize> = (5..=15).step_by(2).collect();
    let report = appendixb_suite(&ns, &opts());
    records_ok(&report.records, 1)?;
    Ok("n = 5, 7 reference solutions; unique certified solutions for odd 5 <= n <= 15".into())
}

fn main() {
    type Criterion = (
        usize,
        &'static str,
        fn() -> Result<String, String>,
        Duration,
    );
    let criteria: [Criterion; 9] = [
        (1, "Bernoulli and c_k table", c1, Duration::from_secs(1)),
        (2, "Bernoulli identities", c2, Duration::from_secs(5)),
        (3, "Cartan laws", c3, Duration::from_secs(10)),
        (4, "nilpotency probes", c4, Duration::from_secs(120)),
        (
            5,
            "bracket and pairing identities",
            c5,
            Duration::from_secs(180),
        ),
        (
            6,
            "psi is an L-infinity morphism",
            c6,
            Duration::from_secs(120),
        ),
        (7, "pushforward equals mu", c7, Duration::from_secs(120)),
        (
            8,
            "pentagon on the desk example",
            c8,
            Duration::from_secs(30),
        ),
        (9, "commutator linear systems", c9, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (i, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {i}: PASS  {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("criterion {i}: FAIL  {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
