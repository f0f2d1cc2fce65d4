//! One-shot queries against the engine.

use std::io::Write;

use asfield_core::expr::{parse_place, parse_rational, parse_rational_list};
use asfield_core::finite_field::DEFAULT_MAX_ORDER;
use asfield_core::{enumerate_places, global_rank_and_degree, CompositumSpec, Engine, FiniteField};
use serde_json::{json, Value};

use crate::config::Format;
use crate::error::{CliError, Result};
use crate::report::write_table;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    /// Class of `c` at a place.
    Class { c: String, place: String },
    /// Local rank and degree of a compositum at a place.
    Rank { gens: String, place: String },
    /// Global rank and degree of a compositum.
    Global { gens: String },
    /// Frobenius tuple at an unramified place.
    Frobenius { gens: String, place: String },
    /// Places where `c` ramifies.
    Locus { c: String },
    /// Places up to a degree bound.
    Places { max_degree: usize, infinity: bool },
}

/// Evaluates a query to a JSON value; every renderer works from that value.
pub fn evaluate(q: &str, guard: i64, query: &Query) -> Result<Value> {
    let field = FiniteField::parse_spec(q, DEFAULT_MAX_ORDER)?;
    let engine = Engine::with_guard(&field, guard.max(1));
    let value = match query {
        Query::Class { c, place } => {
            let x = parse_rational(&field, c)?;
            let v = parse_place(&field, place)?;
            let class = engine.local_reduce(&x, &v).map_err(CliError::op("local_reduce"))?;
            let mut value = serde_json::to_value(&class)?;
            value["c"] = json!(x.to_string());
            value
        }
        Query::Rank { gens, place } => {
            let spec = CompositumSpec::custom(parse_rational_list(&field, gens)?);
            let v = parse_place(&field, place)?;
            let r = engine
                .local_rank_and_degree(&spec, &v)
                .map_err(CliError::op("local_rank_and_degree"))?;
            json!({
                "place": v.to_string(),
                "generators": spec.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "rank": r.rank,
                "degree": r.degree,
                "ramified_rank": r.ramified_rank,
                "residue_rank": r.residue_rank,
                "e": r.e,
                "f": r.f,
            })
        }
        Query::Global { gens } => {
            let spec = CompositumSpec::custom(parse_rational_list(&field, gens)?);
            let g = global_rank_and_degree(&spec);
            json!({
                "generators": spec.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "rank": g.rank,
                "degree": g.degree,
            })
        }
        Query::Frobenius { gens, place } => {
            let spec = CompositumSpec::custom(parse_rational_list(&field, gens)?);
            let v = parse_place(&field, place)?;
            let t = engine.frobenius(&spec, &v).map_err(CliError::op("frobenius"))?;
            json!({
                "place": v.to_string(),
                "generators": spec.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "frobenius": t,
                "split": t.iter().all(|&x| x == 0),
            })
        }
        Query::Locus { c } => {
            let x = parse_rational(&field, c)?;
            let locus = engine
                .ramification_locus(&x)
                .map_err(CliError::op("ramification_locus"))?;
            json!({
                "c": x.to_string(),
                "ramified_at": locus.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        }
        Query::Places { max_degree, infinity } => {
            let places = enumerate_places(&field, *max_degree, *infinity);
            json!({
                "places": places
                    .iter()
                    .map(|p| json!({ "place": p.to_string(), "degree": p.degree() }))
                    .collect::<Vec<_>>(),
            })
        }
    };
    Ok(value)
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            format!("({})", items.iter().map(text).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

pub fn explore<W: Write>(q: &str, guard: i64, query: &Query, format: Format, mut out: W) -> Result<()> {
    let value = evaluate(q, guard, query)?;
    let rows: Vec<&serde_json::Map<String, Value>> = match value.get("places") {
        Some(Value::Array(items)) => items.iter().filter_map(Value::as_object).collect(),
        _ => value.as_object().into_iter().collect(),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &value)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            if let Some(first) = rows.first() {
                w.write_record(first.keys())?;
            }
            for row in &rows {
                w.write_record(row.values().map(text))?;
            }
            w.flush()?;
        }
        Format::Human => {
            if let Query::Places { .. } = query {
                let table: Vec<[String; 2]> = rows
                    .iter()
                    .map(|r| [text(&r["place"]), text(&r["degree"])])
                    .collect();
                write_table(&mut out, ["place", "degree"], &table)?;
            } else if let Some(obj) = value.as_object() {
                let width = obj.keys().map(String::len).max().unwrap_or(0);
                for (k, v) in obj {
                    writeln!(out, "{k:<width$}  {}", text(v))?;
                }
            }
        }
    }
    Ok(())
}
