//! Shape check for emitted JSON reports. Every report written by
//! [`super::run`] must pass [`validate_report`].

use serde_json::Value;

use super::config::Mode;
use super::validate::SchemaError;

enum Ty {
    Num,
    /// Number, or null for a non-finite value.
    NumOrNull,
    Int,
    Str,
    Bool,
    Arr(Box<Ty>),
    /// Open map with uniformly typed values.
    Map(Box<Ty>),
    Obj(Vec<(&'static str, Ty)>),
}

use Ty::*;

fn arr(t: Ty) -> Ty {
    Arr(Box::new(t))
}

fn gap() -> Ty {
    Obj(vec![("lower", Num), ("upper", Num), ("width", Num)])
}

fn window() -> Ty {
    Obj(vec![("center", Num), ("width", Num), ("lower", Num), ("upper", Num)])
}

fn metrics() -> Ty {
    Obj(vec![("fidelity", NumOrNull), ("survival", NumOrNull), ("insertion_loss_db", NumOrNull)])
}

fn result_schema(mode: Mode) -> Ty {
    match mode {
        Mode::Bands => Obj(vec![("supermode", Str), ("k", arr(Num)), ("bands", arr(arr(Num))), ("gap", gap())]),
        Mode::Spectrum => Obj(vec![
            ("supermode", Str),
            ("eigenvalues", arr(Num)),
            ("edge_flags", arr(Str)),
            ("in_gap", arr(Int)),
            ("edge_states", arr(Obj(vec![("index", Int), ("energy", Num), ("flag", Str)]))),
            ("gap", gap()),
        ]),
        Mode::Greens => Obj(vec![
            ("recursion", Str),
            ("eta", Num),
            ("omega", arr(Num)),
            ("re", arr(NumOrNull)),
            ("im", arr(NumOrNull)),
            ("converged", arr(Bool)),
            ("singular", arr(Bool)),
            ("singularities", arr(Num)),
        ]),
        Mode::Transmission => {
            let mut t = Vec::new();
            for name in PORT_NAMES {
                t.push((name, arr(Num)));
            }
            Obj(vec![("detuning", arr(Num)), ("scatterer", Bool), ("T", Obj(t))])
        }
        Mode::Circulator => Obj(vec![
            ("threshold", Num),
            ("windows", arr(window())),
            ("detuning", Num),
            ("fidelity", NumOrNull),
            ("survival", NumOrNull),
            ("insertion_loss_db", NumOrNull),
            ("bandwidth", Num),
            ("total_bandwidth", Num),
            ("mean_insertion_loss_db", NumOrNull),
            ("operating_points", arr(Obj(vec![("detuning", Num), ("metrics", metrics())]))),
        ]),
        Mode::Sweep => Obj(vec![
            ("parameter", Str),
            ("mode", Str),
            ("values", arr(Num)),
            ("points", arr(Obj(vec![("value", Num), ("scalars", Map(Box::new(NumOrNull)))]))),
        ]),
    }
}

pub const PORT_NAMES: [&str; 16] = [
    "T11", "T12", "T13", "T14", "T21", "T22", "T23", "T24", "T31", "T32", "T33", "T34", "T41", "T42", "T43", "T44",
];

fn check(v: &Value, ty: &Ty, path: &str, errs: &mut Vec<SchemaError>) {
    let mut bad = |what: &str| {
        errs.push(SchemaError { path: path.to_string(), message: format!("expected {what}") });
    };
    match ty {
        Num => {
            if !v.is_number() {
                bad("a number");
            }
        }
        NumOrNull => {
            if !(v.is_number() || v.is_null()) {
                bad("a number or null");
            }
        }
        Int => {
            if !v.is_u64() {
                bad("a non-negative integer");
            }
        }
        Str => {
            if !v.is_string() {
                bad("a string");
            }
        }
        Bool => {
            if !v.is_boolean() {
                bad("a boolean");
            }
        }
        Arr(inner) => match v.as_array() {
            Some(items) => {
                for (i, x) in items.iter().enumerate() {
                    check(x, inner, &format!("{path}[{i}]"), errs);
                }
            }
            None => bad("an array"),
        },
        Map(inner) => match v.as_object() {
            Some(m) => {
                for (k, x) in m {
                    check(x, inner, &format!("{path}.{k}"), errs);
                }
            }
            None => bad("an object"),
        },
        Obj(fields) => match v.as_object() {
            Some(m) => {
                for (k, t) in fields {
                    match m.get(*k) {
                        Some(x) => check(x, t, &format!("{path}.{k}"), errs),
                        None => errs.push(SchemaError {
                            path: format!("{path}.{k}"),
                            message: "required field is missing".into(),
                        }),
                    }
                }
                for k in m.keys() {
                    if !fields.iter().any(|(f, _)| f == k) {
                        errs.push(SchemaError { path: format!("{path}.{k}"), message: "unknown field".into() });
                    }
                }
            }
            None => bad("an object"),
        },
    }
}

/// Checks the envelope {mode, units, config_hash, result} and the
/// mode-specific result.
pub fn validate_report(v: &Value) -> Result<(), Vec<SchemaError>> {
    let mut errs = Vec::new();
    let Some(m) = v.as_object() else {
        return Err(vec![SchemaError { path: "$".into(), message: "expected an object".into() }]);
    };
    let mode = m.get("mode").and_then(Value::as_str).and_then(Mode::parse);
    if mode.is_none() {
        errs.push(SchemaError { path: "mode".into(), message: "expected a known mode".into() });
    }
    match m.get("units").and_then(Value::as_str) {
        Some("hz") | Some("dimensionless") => {}
        _ => errs.push(SchemaError { path: "units".into(), message: "expected \"hz\" or \"dimensionless\"".into() }),
    }
    let hash_ok = m
        .get("config_hash")
        .and_then(Value::as_str)
        .is_some_and(|h| h.len() == 16 && h.bytes().all(|b| b.is_ascii_hexdigit()));
    if !hash_ok {
        errs.push(SchemaError { path: "config_hash".into(), message: "expected 16 hex digits".into() });
    }
    for k in m.keys() {
        if !["mode", "units", "config_hash", "result"].contains(&k.as_str()) {
            errs.push(SchemaError { path: k.clone(), message: "unknown field".into() });
        }
    }
    match (mode, m.get("result")) {
        (Some(md), Some(r)) => check(r, &result_schema(md), "result", &mut errs),
        (_, None) => errs.push(SchemaError { path: "result".into(), message: "required field is missing".into() }),
        _ => {}
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}
