use hc_core::exec::Parallelism;
use hc_core::morphisms::{desk_comoment, translation_comoment};
use hc_core::q;
use hc_core::structures::{bold_pi, Model};
use hc_core::suites::*;

fn strip(r: &Report) -> Vec<(String, Status, usize, Option<Counterexample>)> {
    r.records
        .iter()
        .map(|x| {
            (
                x.name.clone(),
                x.status,
                x.samples,
                x.counterexample.clone(),
            )
        })
        .collect()
}

fn all_suites(opts: &SuiteOptions) -> Vec<Report> {
    let models = [Model::r3(), Model::r4()];
    let (f, b) = desk_comoment();
    let (g, c) = translation_comoment(4);
    vec![
        tables_suite(opts),
        identities_suite(&models, opts),
        structures_suite(&models, opts),
        embedding_suite(&[(Model::r3(), None), (Model::r4(), None)], opts),
        pentagon_suite(
            &[("desk".into(), f, b), ("translation-r4".into(), g, c)],
            opts,
        ),
        appendixb_suite(&[5, 7, 9, 11, 13, 15], opts),
    ]
}

#[test]
fn every_suite_passes_with_defaults() {
    for report in all_suites(&SuiteOptions::default()) {
        let failures: Vec<_> = report
            .failures()
            .map(|r| (&r.name, &r.counterexample))
            .collect();
        assert!(failures.is_empty(), "{}: {failures:?}", report.suite);
        let names: Vec<_> = report.records.iter().map(|r| r.name.clone()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}

#[test]
fn sequential_and_parallel_runs_agree() {
    let base = SuiteOptions {
        seed: 77,
        tuples: Some(6),
        ..SuiteOptions::default()
    };
    let seq = all_suites(&SuiteOptions {
        parallelism: Parallelism::Sequential,
        ..base
    });
    let par = all_suites(&SuiteOptions {
        parallelism: Parallelism::available(),
        ..base
    });
    for (a, b) in seq.iter().zip(&par) {
        assert_eq!(strip(a), strip(b), "{}", a.suite);
    }
}

#[test]
fn seeds_change_samples_but_not_verdicts() {
    let a = identities_suite(
        &[Model::r3()],
        &SuiteOptions {
            seed: 1,
            tuples: Some(4),
            ..SuiteOptions::default()
        },
    );
    let b = identities_suite(
        &[Model::r3()],
        &SuiteOptions {
            seed: 2,
            tuples: Some(4),
            ..SuiteOptions::default()
        },
    );
    assert!(a.passed() && b.passed());
    let sa = observable_samples(
        &Model::r3(),
        &SuiteOptions {
            seed: 1,
            ..SuiteOptions::default()
        },
        "x",
        2,
        3,
    );
    let sb = observable_samples(
        &Model::r3(),
        &SuiteOptions {
            seed: 2,
            ..SuiteOptions::default()
        },
        "x",
        2,
        3,
    );
    assert_ne!(sa, sb);
}

#[test]
fn zero_tuples_is_vacuous() {
    let r = identities_suite(
        &[Model::r3(), Model::r4()],
        &SuiteOptions {
            tuples: Some(0),
            ..SuiteOptions::default()
        },
    );
    assert!(r.passed());
    assert!(r.records.iter().all(|x| x.samples == 0));
}

#[test]
fn broken_identity_reports_counterexample() {
    let m = Model::r3();
    let opts = SuiteOptions::default();
    let pi = bold_pi(&m).component(2);
    let samples = observable_samples(&m, &opts, "broken", 2, 10);
    let rec = map_identity(
        "broken".into(),
        "pi_2 = 2 pi_2",
        &pi,
        &pi.scale(q(2)),
        samples,
        opts.parallelism,
    );
    assert_eq!(rec.status, Status::Fail);
    let c = rec.counterexample.unwrap();
    assert_eq!(c.inputs.len(), 2);
    assert_ne!(c.lhs, c.rhs);
}

#[test]
fn magic_formula_oracle_is_independent() {
    use hc_core::cartan::{parse_form, parse_vector_field};
    let alpha = parse_form("x1 dx0^dx2").unwrap();
    let x = parse_vector_field("x0 d/dx1 + x2^2 d/dx0 + x0 x2 d/dx2").unwrap();
    let expected = parse_form("x0 dx0^dx2 + x0 x1 dx0^dx2").unwrap();
    assert_eq!(
        lie_derivative_coordinates(&alpha, &x, 3),
        alpha.lie_derivative(&x)
    );
    assert_eq!(lie_derivative_coordinates(&alpha, &x, 3), expected);
}
