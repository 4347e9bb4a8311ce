//! JSON instance files.
//!
//! ```json
//! { "labels": ["a", "w", "b"],
//!   "f": { "kind": "edges_inside", "edges": [["a", "w", 1], [1, 2, "1/2"]] },
//!   "g": { "kind": "linear", "weights": [1, 1, "3/2"] },
//!   "normalized": false }
//! ```
//!
//! Spec kinds: `table` (`values` keyed by mask integer), `edges_inside`,
//! `linear`, `concave_of_cardinality`, `scaled` (`base`, `factor`),
//! `perturbed` (`base`, `eta`), `complement_of` (`base`), `sum` (`terms`).
//! Rationals are JSON integers or `"p/q"` strings.

use std::path::Path;

use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::instance::{DualModularInstance, Edge, GroundSet, SetFunction};
use crate::mask;
use crate::rational::{self, Rational};

fn schema(field: &str, msg: impl Into<String>) -> Error {
    Error::schema(field, msg)
}

fn get<'a>(obj: &'a Map<String, Json>, key: &str, path: &str) -> Result<&'a Json> {
    obj.get(key).ok_or_else(|| schema(&format!("{path}.{key}"), "missing"))
}

pub fn parse_rational(v: &Json, path: &str) -> Result<Rational> {
    match v {
        Json::Number(num) => num
            .as_i64()
            .map(rational::int)
            .ok_or_else(|| schema(path, format!("expected an integer or \"p/q\" string, got {num}"))),
        Json::String(s) => rational::parse(s).map_err(|_| schema(path, format!("not a rational: {s:?}"))),
        other => Err(schema(path, format!("expected a rational, got {other}"))),
    }
}

fn parse_rationals(v: &Json, path: &str) -> Result<Vec<Rational>> {
    let arr = v.as_array().ok_or_else(|| schema(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| parse_rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_endpoint(v: &Json, path: &str, ground: &GroundSet) -> Result<usize> {
    match v {
        Json::Number(n) => n
            .as_u64()
            .map(|u| u as usize)
            .filter(|&u| u < ground.size())
            .ok_or_else(|| schema(path, format!("element index {n} out of range"))),
        Json::String(s) => ground
            .index_of(s)
            .ok_or_else(|| schema(path, format!("unknown label {s:?}"))),
        other => Err(schema(path, format!("expected an element index or label, got {other}"))),
    }
}

fn parse_spec(v: &Json, path: &str, ground: &GroundSet) -> Result<SetFunction> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    let kind = get(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}.kind"), "expected a string"))?;
    let n = ground.size();
    let spec = match kind {
        "table" => {
            let field = format!("{path}.values");
            let values = get(obj, "values", path)?;
            let len = 1usize
                .checked_shl(n as u32)
                .filter(|_| n < 32)
                .ok_or_else(|| schema(&field, "ground set too large for a table"))?;
            let mut table: Vec<Option<Rational>> = vec![None; len];
            match values {
                Json::Object(map) => {
                    for (key, val) in map {
                        let m: usize = key
                            .trim()
                            .parse()
                            .map_err(|_| schema(&format!("{field}.{key}"), "key must be a mask integer"))?;
                        if m >= len {
                            return Err(schema(
                                &format!("{field}.{key}"),
                                format!("mask out of range for n = {n}"),
                            ));
                        }
                        table[m] = Some(parse_rational(val, &format!("{field}.{key}"))?);
                    }
                }
                Json::Array(_) => {
                    for (m, r) in parse_rationals(values, &field)?.into_iter().enumerate() {
                        if m < len {
                            table[m] = Some(r);
                        } else {
                            return Err(schema(&field, format!("explicit table needs exactly 2^{n} entries")));
                        }
                    }
                }
                _ => return Err(schema(&field, "expected an object keyed by mask")),
            }
            if let Some(m) = table.iter().position(Option::is_none) {
                return Err(schema(
                    &field,
                    format!("explicit table needs exactly 2^{n} entries; mask {m} is missing"),
                ));
            }
            SetFunction::Table(table.into_iter().map(Option::unwrap).collect())
        }
        "edges_inside" => {
            let field = format!("{path}.edges");
            let edges = get(obj, "edges", path)?
                .as_array()
                .ok_or_else(|| schema(&field, "expected an array"))?;
            let mut out = Vec::with_capacity(edges.len());
            for (i, e) in edges.iter().enumerate() {
                let ef = format!("{field}[{i}]");
                let parts = e
                    .as_array()
                    .ok_or_else(|| schema(&ef, "expected [u, v] or [u, v, weight]"))?;
                if parts.len() != 2 && parts.len() != 3 {
                    return Err(schema(&ef, "expected [u, v] or [u, v, weight]"));
                }
                let u = parse_endpoint(&parts[0], &format!("{ef}[0]"), ground)?;
                let v = parse_endpoint(&parts[1], &format!("{ef}[1]"), ground)?;
                let w = match parts.get(2) {
                    Some(w) => parse_rational(w, &format!("{ef}[2]"))?,
                    None => rational::int(1),
                };
                out.push(Edge::new(u, v, w));
            }
            SetFunction::EdgesInside(out)
        }
        "linear" => SetFunction::Linear(parse_rationals(get(obj, "weights", path)?, &format!("{path}.weights"))?),
        "concave_of_cardinality" => {
            SetFunction::ConcaveOfCardinality(parse_rationals(get(obj, "values", path)?, &format!("{path}.values"))?)
        }
        "scaled" => SetFunction::Scaled {
            base: Box::new(parse_spec(get(obj, "base", path)?, &format!("{path}.base"), ground)?),
            factor: parse_rational(get(obj, "factor", path)?, &format!("{path}.factor"))?,
        },
        "perturbed" => SetFunction::Perturbed {
            base: Box::new(parse_spec(get(obj, "base", path)?, &format!("{path}.base"), ground)?),
            eta: parse_rational(get(obj, "eta", path)?, &format!("{path}.eta"))?,
        },
        "complement_of" => SetFunction::ComplementOf {
            base: Box::new(parse_spec(get(obj, "base", path)?, &format!("{path}.base"), ground)?),
            n,
        },
        "sum" => {
            let field = format!("{path}.terms");
            let terms = get(obj, "terms", path)?
                .as_array()
                .ok_or_else(|| schema(&field, "expected an array"))?;
            SetFunction::Sum(
                terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| parse_spec(t, &format!("{field}[{i}]"), ground))
                    .collect::<Result<_>>()?,
            )
        }
        other => return Err(schema(&format!("{path}.kind"), format!("unknown kind {other:?}"))),
    };
    // re-label structural errors with this spec's path
    spec.validate(n, path)?;
    Ok(spec)
}

pub fn instance_from_value(v: &Json) -> Result<DualModularInstance> {
    let obj = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    let labels = get(obj, "labels", "$")?
        .as_array()
        .ok_or_else(|| schema("labels", "expected an array of strings"))?
        .iter()
        .enumerate()
        .map(|(i, l)| match l {
            Json::String(s) => Ok(s.clone()),
            Json::Number(n) => Ok(n.to_string()),
            _ => Err(schema(&format!("labels[{i}]"), "expected a string")),
        })
        .collect::<Result<Vec<_>>>()?;
    let ground = GroundSet::new(labels)?;
    let f = parse_spec(get(obj, "f", "$")?, "f", &ground)?;
    let g = parse_spec(get(obj, "g", "$")?, "g", &ground)?;
    let normalized = match obj.get("normalized") {
        None | Some(Json::Null) => false,
        Some(Json::Bool(b)) => *b,
        Some(_) => return Err(schema("normalized", "expected a boolean")),
    };
    DualModularInstance::with_flag(ground, f, g, normalized)
}

pub fn instance_from_str(s: &str) -> Result<DualModularInstance> {
    let v: Json = serde_json::from_str(s).map_err(|e| schema("$", format!("invalid JSON: {e}")))?;
    instance_from_value(&v)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<DualModularInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    instance_from_str(&text)
}

fn r(v: &Rational) -> Json {
    Json::String(rational::format(v))
}

fn spec_to_json(h: &SetFunction, n: usize) -> Json {
    match h {
        SetFunction::Table(values) => table_json(values),
        SetFunction::EdgesInside(edges) => json!({
            "kind": "edges_inside",
            "edges": edges.iter().map(|e| json!([e.u, e.v, r(&e.weight)])).collect::<Vec<_>>(),
        }),
        SetFunction::Linear(w) => json!({ "kind": "linear", "weights": w.iter().map(r).collect::<Vec<_>>() }),
        SetFunction::ConcaveOfCardinality(phi) => json!({
            "kind": "concave_of_cardinality",
            "values": phi.iter().map(r).collect::<Vec<_>>(),
        }),
        SetFunction::Scaled { base, factor } => {
            json!({ "kind": "scaled", "base": spec_to_json(base, n), "factor": r(factor) })
        }
        SetFunction::Perturbed { base, eta } => {
            json!({ "kind": "perturbed", "base": spec_to_json(base, n), "eta": r(eta) })
        }
        SetFunction::ComplementOf { base, .. } => json!({ "kind": "complement_of", "base": spec_to_json(base, n) }),
        SetFunction::Sum(terms) => {
            json!({ "kind": "sum", "terms": terms.iter().map(|t| spec_to_json(t, n)).collect::<Vec<_>>() })
        }
        // marginals refer to a parent ground set; write their values out
        SetFunction::Marginal { .. } => table_json(&h.tabulate(n)),
    }
}

fn table_json(values: &[Rational]) -> Json {
    let mut m = Map::new();
    for (i, v) in values.iter().enumerate() {
        m.insert(i.to_string(), r(v));
    }
    json!({ "kind": "table", "values": Json::Object(m) })
}

/// Key order is fixed, so equal instances serialize byte-identically.
pub fn instance_to_value(inst: &DualModularInstance) -> Json {
    let n = inst.n();
    json!({
        "labels": inst.ground().labels(),
        "f": spec_to_json(inst.f_spec(), n),
        "g": spec_to_json(inst.g_spec(), n),
        "normalized": inst.is_normalized(),
    })
}

pub fn instance_to_string(inst: &DualModularInstance) -> String {
    serde_json::to_string_pretty(&instance_to_value(inst)).expect("JSON values always serialize")
}

/// A vector given as `"1/2,1/3"`, `"[1, \"1/2\"]"` or whitespace-separated.
pub fn parse_vector(s: &str, field: &str) -> Result<Vec<Rational>> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: Json = serde_json::from_str(t).map_err(|e| schema(field, format!("invalid JSON array: {e}")))?;
        return parse_rationals(&v, field);
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .enumerate()
        .map(|(i, p)| {
            rational::parse(p).map_err(|_| schema(&format!("{field}[{i}]"), format!("not a rational: {p:?}")))
        })
        .collect()
}

/// Labels of a subset as a JSON array.
pub fn subset_json(ground: &GroundSet, s: mask::Mask) -> Json {
    json!(ground.labels_of(s))
}
