//! JSON encodings of reports and auxiliary data.

use hc_core::appendixb::{build_system, solve, transform_and_split, AppendixError, Certificates};
use hc_core::combinatorics::{fmt_q, Q};
use hc_core::suites::{table_rows, CheckRecord, Report};
use serde_json::{json, Value};

fn qs(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_q(x))).collect())
}

fn matrix(m: &[Vec<Q>]) -> Value {
    Value::Array(m.iter().map(|r| qs(r)).collect())
}

fn record(r: &CheckRecord) -> Value {
    let counterexample = match &r.counterexample {
        None => Value::Null,
        Some(c) => json!({ "inputs": c.inputs, "lhs": c.lhs, "rhs": c.rhs }),
    };
    json!({
        "name": r.name,
        "anchor": r.anchor,
        "status": r.status.as_str(),
        "samples": r.samples,
        "counterexample": counterexample,
        "elapsed_ms": r.elapsed_ms,
    })
}

pub fn report(r: &Report, data: Option<Value>) -> Value {
    let mut out = json!({
        "suite": r.suite,
        "seed": r.seed,
        "status": if r.passed() { "pass" } else { "fail" },
        "checks": r.records.len(),
        "failures": r.failures().count(),
        "records": r.records.iter().map(record).collect::<Vec<_>>(),
    });
    if let Some(d) = data {
        out["data"] = d;
    }
    out
}

pub fn tables() -> Value {
    let rows: Vec<Value> = table_rows(10)
        .into_iter()
        .map(|(k, b, c)| json!({ "k": k, "B": fmt_q(&b), "c": c.map(|c| fmt_q(&c)) }))
        .collect();
    Value::Array(rows)
}

fn certificates(c: &Certificates) -> Value {
    json!({
        "split_exact": c.split_exact,
        "top_columns_perp_v1": c.top_columns_perp_v1,
        "top_columns_perp_v2": c.top_columns_perp_v2,
        "top_rhs_perp_v1": c.top_rhs_perp_v1,
        "top_rhs_perp_v2": c.top_rhs_perp_v2,
        "bottom_columns_perp": c.bottom_columns_perp,
        "bottom_rhs_perp": c.bottom_rhs_perp,
        "bottom_rhs_as_displayed": c.bottom_rhs_as_displayed,
        "top_rank": c.top_rank,
        "bottom_rank": c.bottom_rank,
    })
}

/// `M`, `R`, the transformed system, its top and bottom halves, the solution and certificates.
pub fn appendixb(n: usize) -> Result<Value, AppendixError> {
    let sys = build_system(n)?;
    let folded = transform_and_split(&sys);
    let sol = solve(&sys)?;
    let labels: Vec<String> = sys.columns.iter().map(ToString::to_string).collect();
    let sub = |s: &hc_core::appendixb::Subsystem| {
        json!({
            "columns": s.columns.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "matrix": matrix(&s.matrix),
            "rhs": qs(&s.rhs),
        })
    };
    Ok(json!({
        "n": n,
        "N": sys.big_n,
        "columns": labels,
        "M": matrix(&sys.matrix),
        "R": qs(&sys.rhs),
        "M_prime": matrix(&folded.matrix),
        "R_prime": qs(&folded.rhs),
        "top": sub(&folded.top),
        "bottom": sub(&folded.bottom),
        "solution": sol.a.iter().map(|(l, v)| json!({ "column": l.to_string(), "value": fmt_q(v) })).collect::<Vec<_>>(),
        "rank": sol.rank,
        "certificates": certificates(&sol.certificates),
    }))
}
