//! `hc`: runs the verification suites and writes deterministic reports.

mod json;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hc_core::appendixb::AppendixError;
use hc_core::exec::Parallelism;
use hc_core::morphisms::{desk_comoment, translation_comoment};
use hc_core::scenario::{Scenario, ScenarioError};
use hc_core::structures::Model;
use hc_core::suites::{self, Report, SuiteOptions};
use serde_json::Value;

const MAX_N: usize = 25;

#[derive(Parser)]
#[command(
    name = "hc",
    version,
    about = "Exact verification suites for multisymplectic L-infinity algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bernoulli numbers and the coefficients c_k for k <= 10.
    Tables(Common),
    /// Bernoulli identities and bracket identities on each model.
    Identities(Common),
    /// Cartan laws, model validity and nilpotency probes.
    Structures(Common),
    /// Morphism defects of psi, its construction paths and the pushforward.
    Embedding(Common),
    /// Comoment maps, gauge twists and the pentagon.
    Pentagon(Common),
    /// The commutator linear system for odd n.
    Appendixb {
        #[command(flatten)]
        common: Common,
        /// Odd n, or an inclusive range `lo..hi`; repeatable.
        #[arg(long = "n", value_name = "N")]
        n: Vec<String>,
    },
    /// Runs the suite named in the scenario file.
    Run(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long = "max-arity", value_name = "K")]
    max_arity: Option<usize>,
    #[arg(long, value_name = "N")]
    tuples: Option<usize>,
    /// Writes the JSON report to this path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Prints the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Scenario { path: String, source: ScenarioError },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Appendix(#[from] AppendixError),
}

fn load(common: &Common) -> Result<Scenario, CliError> {
    let mut s = match &common.scenario {
        None => Scenario::default(),
        Some(p) => {
            let path = p.display().to_string();
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Scenario::parse(&text).map_err(|source| CliError::Scenario { path, source })?
        }
    };
    if let Some(seed) = common.seed {
        s.seed = seed;
    }
    if common.max_arity.is_some() {
        s.max_arity = common.max_arity;
    }
    if common.tuples.is_some() {
        s.tuples = common.tuples;
    }
    Ok(s)
}

fn parse_ns(specs: &[String]) -> Result<Vec<usize>, CliError> {
    let bad = |s: &str| {
        CliError::Usage(format!(
            "--n {s}: expected an odd integer or a range lo..hi"
        ))
    };
    let mut out = Vec::new();
    for spec in specs {
        let (lo, hi) = match spec.split_once("..") {
            Some((a, b)) => (
                a.parse().map_err(|_| bad(spec))?,
                b.parse().map_err(|_| bad(spec))?,
            ),
            None => {
                let v: usize = spec.parse().map_err(|_| bad(spec))?;
                (v, v)
            }
        };
        out.extend((lo..=hi).filter(|n| n % 2 == 1));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parallelism() -> Result<Parallelism, CliError> {
    let Ok(v) = std::env::var("HC_THREADS") else {
        return Ok(Parallelism::available());
    };
    let threads: usize =
        v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            CliError::Usage(format!("HC_THREADS={v}: expected a positive integer"))
        })?;
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(if threads == 1 {
        Parallelism::Sequential
    } else {
        Parallelism::available()
    })
}

fn models(s: &Scenario) -> Vec<Model> {
    match &s.model {
        Some(spec) => vec![spec.model()],
        None => vec![Model::r3(), Model::r4()],
    }
}

fn execute(
    suite: &str,
    s: &Scenario,
    ns: Vec<usize>,
    mode: Parallelism,
) -> Result<(Report, Option<Value>), CliError> {
    let opts = SuiteOptions {
        seed: s.seed,
        tuples: s.tuples,
        max_arity: s.max_arity,
        poly_degree: s.poly_degree,
        parallelism: mode,
    };
    Ok(match suite {
        "tables" => (suites::tables_suite(&opts), Some(json::tables())),
        "identities" => (suites::identities_suite(&models(s), &opts), None),
        "structures" => (suites::structures_suite(&models(s), &opts), None),
        "embedding" => {
            let cases: Vec<_> = models(s)
                .into_iter()
                .map(|m| (m, s.gauge.clone()))
                .collect();
            (suites::embedding_suite(&cases, &opts), None)
        }
        "pentagon" => {
            let cases = match (&s.model, &s.comoment) {
                (Some(spec), Some(c)) => {
                    let model = spec.model();
                    let b = s
                        .gauge
                        .clone()
                        .ok_or_else(|| CliError::Usage("pentagon scenario needs a gauge".into()))?;
                    let f = c
                        .build(&model)
                        .map_err(|e| CliError::Usage(format!("comoment: {e}")))?;
                    vec![(model.name.clone(), f, b)]
                }
                (_, None) => {
                    let (f, b) = desk_comoment();
                    let (g, c) = translation_comoment(4);
                    vec![
                        ("desk".to_string(), f, b),
                        ("translation-r4".to_string(), g, c),
                    ]
                }
                (None, Some(_)) => unreachable!("scenario parser requires a model for a comoment"),
            };
            (suites::pentagon_suite(&cases, &opts), None)
        }
        "appendixb" => {
            let ns = if !ns.is_empty() {
                ns
            } else if !s.appendixb_n.is_empty() {
                s.appendixb_n.clone()
            } else {
                (5..=15).step_by(2).collect()
            };
            if let Some(&n) = ns.iter().find(|&&n| !(5..=MAX_N).contains(&n)) {
                return Err(CliError::Usage(format!("n = {n} outside 5..={MAX_N}")));
            }
            let data = ns
                .iter()
                .map(|&n| json::appendixb(n))
                .collect::<Result<Vec<_>, _>>()?;
            (
                suites::appendixb_suite(&ns, &opts),
                Some(Value::Array(data)),
            )
        }
        other => return Err(CliError::Usage(format!("unknown suite {other}"))),
    })
}

fn summary(r: &Report) -> String {
    let mut out = String::new();
    for rec in &r.records {
        out.push_str(&format!(
            "{:4}  {}  [{}; {} samples]\n",
            rec.status.as_str(),
            rec.name,
            rec.anchor,
            rec.samples
        ));
        if let Some(c) = &rec.counterexample {
            for (i, x) in c.inputs.iter().enumerate() {
                out.push_str(&format!("      input {i}: {x}\n"));
            }
            out.push_str(&format!("      lhs: {}\n      rhs: {}\n", c.lhs, c.rhs));
        }
    }
    let failures = r.failures().count();
    out.push_str(&format!(
        "{}: {} checks, {} failed, seed {}\n",
        r.suite,
        r.records.len(),
        failures,
        r.seed
    ));
    out
}

fn data_text(suite: &str, data: &Value) -> String {
    let mut out = String::new();
    let text = |v: &Value| v.as_str().unwrap_or("-").to_string();
    match suite {
        "tables" => {
            out.push_str(&format!("{:>3}  {:>10}  {:>12}\n", "k", "B_k", "c_k"));
            for row in data.as_array().into_iter().flatten() {
                out.push_str(&format!(
                    "{:>3}  {:>10}  {:>12}\n",
                    row["k"].as_u64().unwrap_or(0),
                    text(&row["B"]),
                    text(&row["c"])
                ));
            }
        }
        "appendixb" => {
            for sys in data.as_array().into_iter().flatten() {
                let values: Vec<String> = sys["solution"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|e| format!("{} = {}", text(&e["column"]), text(&e["value"])))
                    .collect();
                out.push_str(&format!("n = {}: {}\n", sys["n"], values.join(", ")));
            }
        }
        _ => {}
    }
    out
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (suite, common, ns) = match cli.command {
        Command::Tables(c) => ("tables".to_string(), c, vec![]),
        Command::Identities(c) => ("identities".to_string(), c, vec![]),
        Command::Structures(c) => ("structures".to_string(), c, vec![]),
        Command::Embedding(c) => ("embedding".to_string(), c, vec![]),
        Command::Pentagon(c) => ("pentagon".to_string(), c, vec![]),
        Command::Appendixb { common, n } => ("appendixb".to_string(), common, parse_ns(&n)?),
        Command::Run(c) => (String::new(), c, vec![]),
    };
    let scenario = load(&common)?;
    let suite = match (suite.is_empty(), &scenario.suite) {
        (true, Some(s)) => s.clone(),
        (true, None) => return Err(CliError::Usage("run: the scenario names no suite".into())),
        (false, Some(s)) if *s != suite => {
            return Err(CliError::Usage(format!(
                "scenario selects suite {s}, not {suite}"
            )));
        }
        (false, _) => suite,
    };
    let mode = parallelism()?;
    let (report, data) = execute(&suite, &scenario, ns, mode)?;
    let value = json::report(&report, data);
    let pretty = serde_json::to_string_pretty(&value).expect("json values serialize");
    if let Some(path) = &common.out {
        std::fs::write(path, format!("{pretty}\n")).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    if common.json {
        println!("{pretty}");
    } else {
        if let Some(d) = value.get("data") {
            print!("{}", data_text(&suite, d));
        }
        print!("{}", summary(&report));
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hc: {e}");
            ExitCode::from(2)
        }
    }
}
