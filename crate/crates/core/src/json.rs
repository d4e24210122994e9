//! JSON encodings of colorings, coefficients, elements and results.
//!
//! Object keys come out sorted, so identical values serialize to identical
//! bytes.

use serde_json::{json, Map, Value};

use crate::algebra::{SkeinElement, Symbol};
use crate::cheb::{ReducedElement, ThreadKey, ThreadedElement};
use crate::curves::{Coloring, Decomposition, HilbertBasis};
use crate::error::{Error, Result};
use crate::ring::{Coefficient, Dyadic, RingError, RingMode};
use crate::surface::IdealTriangulation;
use crate::trace::{Certificate, TraceResult};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn coloring_to_json(surface: &IdealTriangulation, f: &Coloring) -> Value {
    let m: Map<String, Value> =
        surface.edge_names().iter().zip(f.values()).map(|(name, v)| (name.clone(), json!(v))).collect();
    Value::Object(m)
}

fn as_count(v: &Value) -> Option<u32> {
    match v {
        Value::Number(n) => n.as_u64().and_then(|x| u32::try_from(x).ok()),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Reads `{"edge": n, ...}`; every edge of the surface must appear.
pub fn coloring_from_json(surface: &IdealTriangulation, v: &Value) -> Result<Coloring> {
    let obj = v.as_object().ok_or_else(|| parse_err("coloring must be an object"))?;
    let mut values = vec![None; surface.num_edges()];
    for (k, x) in obj {
        let e = surface.edge_index(k).ok_or_else(|| Error::ColoringMismatch(format!("unknown edge {k:?}")))?;
        values[e] = Some(as_count(x).ok_or_else(|| parse_err(format!("edge {k:?}: expected a nonnegative integer")))?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(e, v)| v.ok_or_else(|| Error::ColoringMismatch(format!("missing edge {:?}", surface.edge_names()[e]))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Coloring::new(values))
}

pub fn coefficient_to_json(c: &Coefficient) -> Value {
    match c.mode() {
        RingMode::Generic => {
            let terms = c.laurent_terms().expect("generic mode");
            Value::Array(terms.iter().map(|(e, d)| json!([e, d.to_string()])).collect())
        }
        RingMode::Cyclotomic(n) => {
            let coords: Vec<String> = c.coords().expect("cyclotomic mode").iter().map(Dyadic::to_string).collect();
            json!({"N": n, "coords": coords})
        }
    }
}

fn dyadic_from_json(v: &Value) -> Result<Dyadic> {
    match v {
        Value::String(s) => Ok(s.parse()?),
        Value::Number(n) => n
            .as_i64()
            .map(Dyadic::from)
            .ok_or_else(|| parse_err(format!("{n} is not an integer; write fractions as \"p/2^k\""))),
        other => Err(parse_err(format!("expected a dyadic rational, got {other}"))),
    }
}

/// Reads a coefficient into `mode`. A Laurent polynomial is accepted in
/// either mode and reduced as needed; cyclotomic coordinates must match.
pub fn coefficient_from_json(v: &Value, mode: RingMode) -> Result<Coefficient> {
    match v {
        Value::Array(items) => {
            let mut terms = std::collections::BTreeMap::new();
            for item in items {
                let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| parse_err("expected [exponent, coefficient]"))?;
                let e = pair[0].as_i64().ok_or_else(|| parse_err("exponent must be an integer"))?;
                let d = dyadic_from_json(&pair[1])?;
                let slot: &mut Dyadic = terms.entry(e).or_default();
                *slot = &*slot + &d;
            }
            Ok(Coefficient::from_laurent(mode, &terms))
        }
        Value::Object(obj) => {
            let n = obj.get("N").and_then(Value::as_u64).ok_or_else(|| parse_err("cyclotomic coefficient needs \"N\""))? as u32;
            if mode != RingMode::Cyclotomic(n) {
                return Err(RingError::ModeMismatch(mode, RingMode::Cyclotomic(n)).into());
            }
            let coords = obj
                .get("coords")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("cyclotomic coefficient needs \"coords\""))?
                .iter()
                .map(dyadic_from_json)
                .collect::<Result<Vec<_>>>()?;
            Ok(Coefficient::from_coords(n, coords)?)
        }
        Value::String(_) | Value::Number(_) => Ok(Coefficient::from_dyadic(mode, dyadic_from_json(v)?)),
        other => Err(parse_err(format!("cannot read a coefficient from {other}"))),
    }
}

pub fn element_to_json(surface: &IdealTriangulation, x: &SkeinElement) -> Value {
    Value::Array(
        x.terms()
            .iter()
            .map(|(f, c)| json!({"coloring": coloring_to_json(surface, f), "coeff": coefficient_to_json(c)}))
            .collect(),
    )
}

/// Reads a list of `{"coloring", "coeff"}` terms, or a bare coloring
/// meaning that diagram with coefficient 1.
pub fn element_from_json(surface: &IdealTriangulation, v: &Value, mode: RingMode) -> Result<SkeinElement> {
    match v {
        Value::Object(_) => Ok(SkeinElement::diagram(mode, coloring_from_json(surface, v)?)),
        Value::Array(items) => {
            let mut x = SkeinElement::zero(mode);
            for item in items {
                let f = coloring_from_json(surface, item.get("coloring").ok_or_else(|| parse_err("term needs \"coloring\""))?)?;
                let c = match item.get("coeff") {
                    Some(c) => coefficient_from_json(c, mode)?,
                    None => Coefficient::one(mode),
                };
                x.add_term(f, c);
            }
            Ok(x)
        }
        other => Err(parse_err(format!("cannot read an element from {other}"))),
    }
}

fn key_to_json(surface: &IdealTriangulation, key: &ThreadKey) -> Value {
    Value::Array(key.iter().map(|(s, k)| json!({"component": coloring_to_json(surface, s), "k": k})).collect())
}

pub fn threaded_to_json(surface: &IdealTriangulation, t: &ThreadedElement) -> Value {
    Value::Array(
        t.terms()
            .iter()
            .map(|(key, c)| json!({"factors": key_to_json(surface, key), "coeff": coefficient_to_json(c)}))
            .collect(),
    )
}

pub fn threaded_from_json(surface: &IdealTriangulation, v: &Value, mode: RingMode) -> Result<ThreadedElement> {
    let items = v.as_array().ok_or_else(|| parse_err("threaded element must be a list"))?;
    let mut t = ThreadedElement::zero(mode);
    for item in items {
        let factors = item.get("factors").and_then(Value::as_array).ok_or_else(|| parse_err("term needs \"factors\""))?;
        let mut key = Vec::new();
        for f in factors {
            let s = coloring_from_json(surface, f.get("component").ok_or_else(|| parse_err("factor needs \"component\""))?)?;
            let k = f.get("k").and_then(as_count).ok_or_else(|| parse_err("factor needs a nonnegative \"k\""))?;
            key.push((s, k));
        }
        let c = match item.get("coeff") {
            Some(c) => coefficient_from_json(c, mode)?,
            None => Coefficient::one(mode),
        };
        t.add_term(key, c);
    }
    Ok(t)
}

pub fn reduced_to_json(surface: &IdealTriangulation, r: &ReducedElement) -> Value {
    let terms: Vec<Value> = r
        .terms
        .iter()
        .map(|(key, c)| {
            let factors: Vec<Value> = key
                .iter()
                .map(|(s, a, rr)| json!({"component": coloring_to_json(surface, s), "central": a, "residual": rr}))
                .collect();
            json!({"factors": factors, "coeff": coefficient_to_json(c)})
        })
        .collect();
    json!({"N": r.n, "terms": terms})
}

pub fn decomposition_to_json(surface: &IdealTriangulation, d: &Decomposition) -> Value {
    Value::Array(
        d.parts
            .iter()
            .map(|(c, m)| json!({"component": coloring_to_json(surface, c), "multiplicity": m}))
            .collect(),
    )
}

pub fn hilbert_to_json(surface: &IdealTriangulation, hb: &HilbertBasis) -> Value {
    let elements: Vec<Value> = hb.elements.iter().map(|f| coloring_to_json(surface, f)).collect();
    json!({"elements": elements, "weight_bound": hb.weight_bound, "possibly_incomplete": hb.possibly_incomplete})
}

pub fn symbol_to_json(surface: &IdealTriangulation, s: &Symbol) -> Value {
    let leading: Vec<Value> = s
        .leading
        .iter()
        .map(|(f, c)| json!({"coloring": coloring_to_json(surface, f), "coeff": coefficient_to_json(c)}))
        .collect();
    json!({"weight": s.weight, "leading": leading})
}

pub fn trace_to_json(surface: &IdealTriangulation, t: &TraceResult) -> Value {
    json!({"N": t.n, "value": threaded_to_json(surface, &t.value), "dropped_terms": t.dropped_terms})
}

pub fn certificate_to_json(surface: &IdealTriangulation, c: &Certificate) -> Value {
    json!({
        "multiplier": coloring_to_json(surface, &c.multiplier),
        "witness": trace_to_json(surface, &c.witness),
        "nonzero": !c.witness.is_zero(),
    })
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}
