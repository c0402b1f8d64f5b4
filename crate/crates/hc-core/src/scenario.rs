//! Line-oriented scenario files.
//!
//! Every non-blank line that does not start with `#` is `key = value`.
//! Forms and vector fields use the cartan text syntax. The canonical form
//! written by [`Scenario::to_text`] lists keys in a fixed order and parses
//! back to the same value.
//!
//! ```text
//! suite = pentagon
//! seed = 7
//! model = r3
//! gauge = x2 dx0^dx1
//! lie_dim = 2
//! rho = 1 d/dx0
//! rho = 1 d/dx1
//! f = 0 : -1 x1 dx2
//! f = 1 : 1 x0 dx2
//! solve_degree = 1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cartan::{parse_form, parse_vector_field, Form, VectorField};
use crate::combinatorics::{fmt_q, parse_q, Q};
use crate::morphisms::{ComomentMap, LieAlgebra, MorphismError};
use crate::structures::Model;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScenarioError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError {
        line,
        message: message.into(),
    })
}

pub const SUITES: [&str; 6] = [
    "tables",
    "identities",
    "structures",
    "embedding",
    "pentagon",
    "appendixb",
];

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Builtin(String),
    Custom(Model),
}

impl ModelSpec {
    pub fn model(&self) -> Model {
        match self {
            ModelSpec::Builtin(name) => Model::builtin(name).expect("validated at parse time"),
            ModelSpec::Custom(m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComomentSpec {
    pub lie_dim: usize,
    /// `(a, b, c, coefficient)`: `[ξ_a, ξ_b]` contains `coefficient ξ_c`.
    pub brackets: BTreeMap<(usize, usize, usize), Q>,
    pub rho: Vec<VectorField>,
    pub components: BTreeMap<Vec<usize>, Form>,
    /// Polynomial degree cap for solving arities `2..=n` not given explicitly.
    pub solve_degree: Option<u32>,
}

impl ComomentSpec {
    pub fn build(&self, model: &Model) -> Result<ComomentMap, MorphismError> {
        let mut lie = LieAlgebra::abelian(self.lie_dim);
        for (&(a, b, c), v) in &self.brackets {
            lie.brackets.entry((a, b)).or_default().insert(c, v.clone());
        }
        let mut f = ComomentMap {
            model: model.clone(),
            lie,
            rho: self.rho.clone(),
            components: self.components.clone(),
        };
        if let Some(deg) = self.solve_degree {
            for k in 2..=model.n {
                if !f.components.keys().any(|t| t.len() == k) {
                    f.solve_component(k, deg)?;
                }
            }
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub suite: Option<String>,
    pub seed: u64,
    pub model: Option<ModelSpec>,
    pub gauge: Option<Form>,
    pub comoment: Option<ComomentSpec>,
    pub max_arity: Option<usize>,
    pub tuples: Option<usize>,
    pub poly_degree: u32,
    pub appendixb_n: Vec<usize>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            suite: None,
            seed: 1,
            model: None,
            gauge: None,
            comoment: None,
            max_arity: None,
            tuples: None,
            poly_degree: 2,
            appendixb_n: Vec::new(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ScenarioError> {
    v.parse().or_else(|_| {
        fail(
            line,
            format!("{key}: expected a non-negative integer, got {v:?}"),
        )
    })
}

fn parse_indices(line: usize, v: &str) -> Result<Vec<usize>, ScenarioError> {
    v.split_whitespace()
        .map(|t| parse_num(line, "index", t))
        .collect()
}

#[derive(Default)]
struct CustomModel {
    dimension: Option<usize>,
    n: Option<usize>,
    omega: Option<Form>,
    basepoints: Vec<Vec<Q>>,
    degenerate: Option<bool>,
    first_line: usize,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let mut s = Scenario::default();
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        let mut model_name: Option<(usize, String)> = None;
        let mut custom = CustomModel::default();
        let mut com = ComomentSpec::default();
        let mut has_com = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return fail(line, "expected `key = value`");
            };
            let key = key.trim();
            let value = value.trim();
            let repeatable = matches!(key, "basepoint" | "bracket" | "rho" | "f");
            if !repeatable {
                if let Some(prev) = seen.insert(
                    match key {
                        "suite" | "seed" | "model" | "dimension" | "n" | "omega" | "degenerate"
                        | "gauge" | "lie_dim" | "solve_degree" | "max_arity" | "tuples"
                        | "poly_degree" | "appendixb_n" => key,
                        _ => return fail(line, format!("unknown key {key:?}")),
                    },
                    line,
                ) {
                    return fail(
                        line,
                        format!("duplicate key {key:?} (first on line {prev})"),
                    );
                }
            }
            let form = |v: &str| parse_form(v).or_else(|e| fail(line, e.to_string()));
            match key {
                "suite" => {
                    if !SUITES.contains(&value) {
                        return fail(line, format!("unknown suite {value:?}"));
                    }
                    s.suite = Some(value.to_string());
                }
                "seed" => s.seed = parse_num(line, key, value)?,
                "model" => {
                    if value.is_empty() || value.contains(char::is_whitespace) {
                        return fail(line, "model name must be a single word");
                    }
                    model_name = Some((line, value.to_string()));
                }
                "dimension" => custom.dimension = Some(parse_num(line, key, value)?),
                "n" => custom.n = Some(parse_num(line, key, value)?),
                "omega" => custom.omega = Some(form(value)?),
                "basepoint" => {
                    let point: Option<Vec<Q>> = value.split_whitespace().map(parse_q).collect();
                    match point {
                        Some(p) => custom.basepoints.push(p),
                        None => return fail(line, "basepoint: expected rationals"),
                    }
                }
                "degenerate" => {
                    custom.degenerate = Some(match value {
                        "true" => true,
                        "false" => false,
                        _ => return fail(line, "degenerate: expected true or false"),
                    })
                }
                "gauge" => s.gauge = Some(form(value)?),
                "lie_dim" => {
                    has_com = true;
                    com.lie_dim = parse_num(line, key, value)?;
                }
                "bracket" => {
                    has_com = true;
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 4 {
                        return fail(line, "bracket: expected `a b c coefficient`");
                    }
                    let a: usize = parse_num(line, key, parts[0])?;
                    let b: usize = parse_num(line, key, parts[1])?;
                    let c: usize = parse_num(line, key, parts[2])?;
                    if a >= b {
                        return fail(line, "bracket: expected a < b");
                    }
                    let Some(v) = parse_q(parts[3]) else {
                        return fail(line, "bracket: bad coefficient");
                    };
                    if com.brackets.insert((a, b, c), v).is_some() {
                        return fail(line, "bracket: duplicate entry");
                    }
                }
                "rho" => {
                    has_com = true;
                    com.rho
                        .push(parse_vector_field(value).or_else(|e| fail(line, e.to_string()))?);
                }
                "f" => {
                    has_com = true;
                    let Some((idx, body)) = value.split_once(':') else {
                        return fail(line, "f: expected `i_1 ... i_k : form`");
                    };
                    let tuple = parse_indices(line, idx)?;
                    if tuple.is_empty() || tuple.windows(2).any(|w| w[0] >= w[1]) {
                        return fail(line, "f: indices must be non-empty and strictly increasing");
                    }
                    if com.components.insert(tuple, form(body.trim())?).is_some() {
                        return fail(line, "f: duplicate tuple");
                    }
                }
                "solve_degree" => {
                    has_com = true;
                    com.solve_degree = Some(parse_num(line, key, value)?);
                }
                "max_arity" => s.max_arity = Some(parse_num(line, key, value)?),
                "tuples" => s.tuples = Some(parse_num(line, key, value)?),
                "poly_degree" => s.poly_degree = parse_num(line, key, value)?,
                "appendixb_n" => {
                    let ns = parse_indices(line, value)?;
                    if ns.iter().any(|&n| n < 5 || n % 2 == 0) {
                        return fail(line, "appendixb_n: expected odd values >= 5");
                    }
                    s.appendixb_n = ns;
                }
                _ => unreachable!(),
            }
            if custom.first_line == 0
                && matches!(
                    key,
                    "dimension" | "n" | "omega" | "basepoint" | "degenerate"
                )
            {
                custom.first_line = line;
            }
        }
        let has_custom = custom.first_line != 0;
        s.model = match (model_name, has_custom) {
            (None, false) => None,
            (None, true) => {
                return fail(
                    custom.first_line,
                    "model fields given without `model = name`",
                )
            }
            (Some((line, name)), false) => {
                if Model::builtin(&name).is_none() {
                    return fail(
                        line,
                        format!("{name:?} is not a built-in model; give dimension, n and omega"),
                    );
                }
                Some(ModelSpec::Builtin(name))
            }
            (Some((line, name)), true) => {
                if Model::builtin(&name).is_some() {
                    return fail(line, format!("{name:?} is a built-in model name"));
                }
                let (Some(dimension), Some(n), Some(omega)) =
                    (custom.dimension, custom.n, custom.omega)
                else {
                    return fail(line, "custom model needs dimension, n and omega");
                };
                if custom.basepoints.iter().any(|p| p.len() != dimension) {
                    return fail(line, "basepoint length differs from dimension");
                }
                Some(ModelSpec::Custom(Model {
                    name,
                    dimension,
                    n,
                    omega,
                    basepoints: custom.basepoints,
                    degenerate_allowed: custom.degenerate.unwrap_or(false),
                }))
            }
        };
        if has_com {
            if s.model.is_none() {
                return fail(0, "a comoment needs a model");
            }
            if com.rho.len() != com.lie_dim {
                return fail(
                    0,
                    format!(
                        "expected {} rho lines, found {}",
                        com.lie_dim,
                        com.rho.len()
                    ),
                );
            }
            let out_of_range = com
                .brackets
                .keys()
                .any(|&(_, b, c)| b >= com.lie_dim || c >= com.lie_dim)
                || com
                    .components
                    .keys()
                    .any(|t| t.last().is_some_and(|&i| i >= com.lie_dim));
            if out_of_range {
                return fail(0, "comoment index out of range of lie_dim");
            }
            s.comoment = Some(com);
        }
        Ok(s)
    }

    /// Canonical text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        if let Some(suite) = &self.suite {
            kv("suite", suite);
        }
        kv("seed", &self.seed);
        match &self.model {
            None => {}
            Some(ModelSpec::Builtin(name)) => kv("model", name),
            Some(ModelSpec::Custom(m)) => {
                kv("model", &m.name);
                kv("dimension", &m.dimension);
                kv("n", &m.n);
                kv("omega", &m.omega);
                for p in &m.basepoints {
                    let text: Vec<String> = p.iter().map(fmt_q).collect();
                    kv("basepoint", &text.join(" "));
                }
                kv("degenerate", &m.degenerate_allowed);
            }
        }
        if let Some(b) = &self.gauge {
            kv("gauge", b);
        }
        if let Some(c) = &self.comoment {
            kv("lie_dim", &c.lie_dim);
            for ((a, b, k), v) in &c.brackets {
                kv("bracket", &format!("{a} {b} {k} {}", fmt_q(v)));
            }
            for r in &c.rho {
                kv("rho", r);
            }
            for (t, form) in &c.components {
                let idx: Vec<String> = t.iter().map(ToString::to_string).collect();
                kv("f", &format!("{} : {form}", idx.join(" ")));
            }
            if let Some(d) = c.solve_degree {
                kv("solve_degree", &d);
            }
        }
        if let Some(k) = self.max_arity {
            kv("max_arity", &k);
        }
        if let Some(t) = self.tuples {
            kv("tuples", &t);
        }
        kv("poly_degree", &self.poly_degree);
        if !self.appendixb_n.is_empty() {
            let ns: Vec<String> = self.appendixb_n.iter().map(ToString::to_string).collect();
            kv("appendixb_n", &ns.join(" "));
        }
        out
    }
}
