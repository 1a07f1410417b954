//! Whole-document validation. Every error is collected with its path before
//! anything is returned, so one run reports all problems at once.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use serde_json::{Map, Value};

use super::config::{ExperimentConfig, Format, Grid, Mode, Output, ParamSet, Sweep, Units};
use crate::circulator::DEFAULT_THRESHOLD;
use crate::error::Error;
use crate::greens::Recursion;
use crate::lattice::Supermode;
use crate::params::{fsr_from_geometry, PhysicalParams, TightBindingParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

const TOP_KEYS: [&str; 8] = ["mode", "supermode", "recursion", "threshold", "params", "grid", "sweep", "output"];
const PHYSICAL_KEYS: [&str; 17] = [
    "units",
    "kind",
    "omega0",
    "fsr",
    "n_eff",
    "radius",
    "omega_q",
    "gamma_qe",
    "Gamma",
    "kappa1",
    "kappa2",
    "kappa_in",
    "kappa_out",
    "gamma_in",
    "n_cells",
    "epsilon",
    "scatterer_cell",
];
const TIGHT_BINDING_KEYS: [&str; 9] = ["units", "kind", "g", "j1", "j2", "omega0", "omega_q", "gamma_qe", "n_cells"];

/// Parameters a sweep may vary.
pub const SWEEPABLE: [&str; 17] = [
    "params.omega0",
    "params.fsr",
    "params.omega_q",
    "params.gamma_qe",
    "params.Gamma",
    "params.kappa1",
    "params.kappa2",
    "params.kappa_in",
    "params.kappa_out",
    "params.gamma_in",
    "params.n_cells",
    "params.epsilon",
    "params.scatterer_cell",
    "params.g",
    "params.j1",
    "params.j2",
    "threshold",
];

#[derive(Default)]
struct Checker {
    errors: Vec<SchemaError>,
}

impl Checker {
    fn err(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(SchemaError { path: path.into(), message: message.into() });
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Map<String, Value>> {
        match v.as_object() {
            Some(m) => Some(m),
            None => {
                self.err(path, format!("must be an object, got {}", kind_of(v)));
                None
            }
        }
    }

    fn unknown(&mut self, m: &Map<String, Value>, allowed: &[&str], prefix: &str) {
        for k in m.keys() {
            if !allowed.contains(&k.as_str()) {
                self.err(join(prefix, k), "unknown field");
            }
        }
    }

    fn number(&mut self, m: &Map<String, Value>, key: &str, prefix: &str, required: bool) -> Option<f64> {
        let path = join(prefix, key);
        match m.get(key) {
            None | Some(Value::Null) => {
                if required {
                    self.err(path, "required field is missing");
                }
                None
            }
            Some(v) => match v.as_f64() {
                Some(x) if x.is_finite() => Some(x),
                Some(_) => {
                    self.err(path, "must be finite");
                    None
                }
                None => {
                    self.err(path, format!("must be a number, got {}", kind_of(v)));
                    None
                }
            },
        }
    }

    /// Number that must be ≥ 0 (or > 0 when `strict`).
    fn rate(&mut self, m: &Map<String, Value>, key: &str, prefix: &str, required: bool, strict: bool) -> Option<f64> {
        let x = self.number(m, key, prefix, required)?;
        if strict && x <= 0.0 {
            self.err(join(prefix, key), format!("must be > 0 (got {x})"));
            return None;
        }
        if !strict && x < 0.0 {
            self.err(join(prefix, key), format!("must be ≥ 0 (got {x})"));
            return None;
        }
        Some(x)
    }

    fn integer(&mut self, m: &Map<String, Value>, key: &str, prefix: &str, required: bool) -> Option<u64> {
        let path = join(prefix, key);
        match m.get(key) {
            None | Some(Value::Null) => {
                if required {
                    self.err(path, "required field is missing");
                }
                None
            }
            Some(v) => match v.as_u64() {
                Some(n) => Some(n),
                None => {
                    self.err(path, format!("must be a non-negative integer, got {v}"));
                    None
                }
            },
        }
    }

    fn string<'a>(&mut self, m: &'a Map<String, Value>, key: &str, prefix: &str, required: bool) -> Option<&'a str> {
        let path = join(prefix, key);
        match m.get(key) {
            None | Some(Value::Null) => {
                if required {
                    self.err(path, "required field is missing");
                }
                None
            }
            Some(Value::String(s)) => Some(s),
            Some(v) => {
                self.err(path, format!("must be a string, got {}", kind_of(v)));
                None
            }
        }
    }

    /// Imaginary part of a purely imaginary coupler, in (0, 1).
    fn coupler(&mut self, m: &Map<String, Value>, key: &str, prefix: &str, required: bool) -> Option<f64> {
        let x = self.number(m, key, prefix, required)?;
        if !(x > 0.0 && x < 1.0) {
            self.err(join(prefix, key), format!("Im(kappa) must lie in (0, 1) (got {x})"));
            return None;
        }
        Some(x)
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// Parses and validates a configuration document.
pub fn validate(text: &str) -> Result<ExperimentConfig, Vec<SchemaError>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![SchemaError { path: "$".into(), message: format!("not valid JSON: {e}") }]
    })?;
    validate_value(&value)
}

pub fn validate_value(doc: &Value) -> Result<ExperimentConfig, Vec<SchemaError>> {
    let mut ck = Checker::default();
    let cfg = check_document(&mut ck, doc);
    match cfg {
        Some(c) if ck.errors.is_empty() => Ok(c),
        _ => {
            if ck.errors.is_empty() {
                ck.err("$", "invalid configuration");
            }
            Err(ck.errors)
        }
    }
}

fn check_document(ck: &mut Checker, doc: &Value) -> Option<ExperimentConfig> {
    let top = ck.object(doc, "$")?;
    ck.unknown(top, &TOP_KEYS, "");

    let mode = match ck.string(top, "mode", "", true) {
        Some(s) => match Mode::parse(s) {
            Some(m) => Some(m),
            None => {
                let names: Vec<_> = Mode::ALL.iter().map(|m| m.as_str()).collect();
                ck.err("mode", format!("unknown mode `{s}`, expected one of {}", names.join("|")));
                None
            }
        },
        None => None,
    };

    let supermode = match ck.string(top, "supermode", "", false) {
        None => Some(Supermode::Forward),
        Some(s) => match s.parse::<Supermode>() {
            Ok(m) => Some(m),
            Err(e) => {
                ck.err("supermode", e);
                None
            }
        },
    };

    let recursion = match ck.string(top, "recursion", "", false) {
        None | Some("left") => Some(Recursion::Left),
        Some("right") => Some(Recursion::Right),
        Some("right_cubic") => Some(Recursion::RightCubic),
        Some(s) => {
            ck.err("recursion", format!("unknown recursion `{s}`, expected left|right|right_cubic"));
            None
        }
    };

    let threshold = match ck.number(top, "threshold", "", false) {
        None => Some(DEFAULT_THRESHOLD),
        Some(t) if t > 0.0 && t < 1.0 => Some(t),
        Some(t) => {
            ck.err("threshold", format!("must lie in (0, 1) (got {t})"));
            None
        }
    };

    let params = match top.get("params") {
        Some(v) => check_params(ck, v, mode),
        None => {
            ck.err("params", "required field is missing");
            None
        }
    };

    let grid_mode = match mode {
        Some(Mode::Sweep) => sweep_inner_mode(top),
        m => m,
    };
    let grid = match (grid_mode, grid_units(top)) {
        (Some(m), Some((units, omega0))) => check_grid(ck, top.get("grid"), m, units, omega0),
        _ => None,
    };

    let output = check_output(ck, top.get("output"));

    let mut document = doc.clone();
    if let Some(m) = document.as_object_mut() {
        m.remove("output");
    }

    let sweep = match mode {
        Some(Mode::Sweep) => check_sweep(ck, doc, top.get("sweep")),
        _ => {
            if top.contains_key("sweep") {
                ck.err("sweep", "only allowed with mode = sweep");
            }
            None
        }
    };

    let (params, units, omega0) = params?;
    let grid = grid?;
    Some(ExperimentConfig {
        mode: mode?,
        supermode: supermode?,
        recursion: recursion?,
        threshold: threshold?,
        units,
        params,
        grid,
        sweep,
        output: output?,
        omega0,
        document,
    })
}

/// Units and Ω for grid conversion, read without reporting errors so the
/// grid is checked even when other parameters are bad.
fn grid_units(top: &Map<String, Value>) -> Option<(Units, f64)> {
    let p = top.get("params")?.as_object()?;
    match p.get("units").map(Value::as_str) {
        None | Some(Some("dimensionless")) => Some((Units::Dimensionless, 1.0)),
        Some(Some("hz")) => {
            let f = p.get("omega0")?.as_f64()?;
            (f.is_finite() && f > 0.0).then_some((Units::Hz, 2.0 * PI * f))
        }
        _ => None,
    }
}

fn sweep_inner_mode(top: &Map<String, Value>) -> Option<Mode> {
    match top.get("sweep").and_then(|s| s.get("mode")) {
        None => Some(Mode::Circulator),
        Some(v) => v.as_str().and_then(Mode::parse).filter(|m| *m != Mode::Sweep),
    }
}

/// Returns the normalized parameter set, the units and Ω in rad/s (1 for
/// dimensionless documents).
fn check_params(ck: &mut Checker, v: &Value, mode: Option<Mode>) -> Option<(ParamSet, Units, f64)> {
    let m = ck.object(v, "params")?;
    let units = match ck.string(m, "units", "params", false) {
        None | Some("dimensionless") => Units::Dimensionless,
        Some("hz") => Units::Hz,
        Some(s) => {
            ck.err("params.units", format!("unknown units `{s}`, expected hz|dimensionless"));
            return None;
        }
    };
    let tb_keys = ["g", "j1", "j2"];
    let kind = match ck.string(m, "kind", "params", false) {
        Some("physical") => "physical",
        Some("tight_binding") => "tight_binding",
        Some(s) => {
            ck.err("params.kind", format!("unknown kind `{s}`, expected physical|tight_binding"));
            return None;
        }
        None if tb_keys.iter().any(|k| m.contains_key(*k)) => "tight_binding",
        None => "physical",
    };

    let omega0 = match units {
        Units::Hz => ck.rate(m, "omega0", "params", true, true).map(|f| 2.0 * PI * f),
        Units::Dimensionless => match ck.number(m, "omega0", "params", false) {
            None => Some(1.0),
            Some(x) if x == 1.0 => Some(1.0),
            Some(x) => {
                ck.err("params.omega0", format!("must be 1 in dimensionless units (got {x})"));
                None
            }
        },
    };
    // document value → normalized internal value
    let to_internal = |x: f64| match (units, omega0) {
        (Units::Hz, Some(w)) => 2.0 * PI * x / w,
        _ => x,
    };

    if kind == "tight_binding" {
        ck.unknown(m, &TIGHT_BINDING_KEYS, "params");
        if mode.is_some_and(Mode::needs_device) {
            ck.err(
                "params.kind",
                format!("mode `{}` needs physical parameters (couplers and FSR)", mode.unwrap()),
            );
        }
        let g = ck.rate(m, "g", "params", true, false);
        let j1 = ck.rate(m, "j1", "params", true, false);
        let j2 = ck.rate(m, "j2", "params", true, false);
        let omega_q = ck.number(m, "omega_q", "params", false);
        let gamma_qe = ck.rate(m, "gamma_qe", "params", false, false);
        let n_cells = check_cells(ck, m);
        omega0?;
        let tb = TightBindingParams {
            g: to_internal(g?),
            j1: to_internal(j1?),
            j2: to_internal(j2?),
            omega0: 1.0,
            omega_q: omega_q.map(to_internal).unwrap_or(1.0),
            gamma_qe: to_internal(gamma_qe.unwrap_or(0.0)),
            n_cells: n_cells?,
        };
        return Some((ParamSet::TightBinding(tb), units, omega0?));
    }

    ck.unknown(m, &PHYSICAL_KEYS, "params");
    let fsr = ck.rate(m, "fsr", "params", false, true);
    let n_eff = ck.rate(m, "n_eff", "params", false, true);
    let radius = ck.rate(m, "radius", "params", false, true);
    let omega_q = ck.number(m, "omega_q", "params", false);
    let gamma_qe = ck.rate(m, "gamma_qe", "params", false, false);
    let big_gamma = ck.rate(m, "Gamma", "params", false, false);
    let kappa1 = ck.coupler(m, "kappa1", "params", true);
    let kappa2 = ck.coupler(m, "kappa2", "params", true);
    let kappa_in = ck.coupler(m, "kappa_in", "params", true);
    let kappa_out = ck.coupler(m, "kappa_out", "params", false);
    let gamma_in = ck.rate(m, "gamma_in", "params", false, false);
    let n_cells = check_cells(ck, m);
    let epsilon = ck.rate(m, "epsilon", "params", false, false);
    let scatterer_cell = ck.integer(m, "scatterer_cell", "params", false);

    if m.contains_key("n_eff") != m.contains_key("radius") {
        ck.err("params.radius", "n_eff and radius must be given together");
    }
    let geometry = n_eff.zip(radius);
    let fsr = match (units, fsr, geometry) {
        (_, Some(f), _) => Some(to_internal(f)),
        (Units::Hz, None, Some((n, r))) => omega0.map(|w| fsr_from_geometry(n, r) / w),
        (Units::Dimensionless, None, Some(_)) => {
            ck.err("params.fsr", "required in dimensionless units (geometry only fixes the FSR in Hz)");
            None
        }
        (_, None, None) => {
            if !m.contains_key("fsr") {
                ck.err("params.fsr", "required field is missing (or give n_eff and radius)");
            }
            None
        }
    };
    if let (Units::Hz, Some(f), Some((n, r)), Some(w)) = (units, fsr, geometry, omega0) {
        let p = PhysicalParams { fsr: f * w, n_eff: Some(n), radius: Some(r), ..PhysicalParams::lossless_reference() };
        if let Err(e) = p.check_geometry() {
            push_param_error(ck, &e);
        }
    }
    if let (Some(c), Some(n)) = (scatterer_cell, n_cells) {
        if c == 0 || c as usize > n {
            ck.err("params.scatterer_cell", format!("must lie in 1..={n} (got {c})"));
        }
    }

    let p = PhysicalParams {
        omega0: 1.0,
        fsr: fsr?,
        n_eff,
        radius,
        omega_q: omega_q.map(to_internal).unwrap_or(1.0),
        gamma_qe: to_internal(gamma_qe.unwrap_or(0.0)),
        big_gamma: to_internal(big_gamma.unwrap_or(0.0)),
        kappa1: Complex64::new(0.0, kappa1?),
        kappa2: Complex64::new(0.0, kappa2?),
        kappa_in: Complex64::new(0.0, kappa_in?),
        kappa_out: Complex64::new(0.0, kappa_out.or(kappa_in)?),
        gamma_in: to_internal(gamma_in.unwrap_or(0.0)),
        n_cells: n_cells?,
        epsilon: epsilon.unwrap_or(0.0),
        scatterer_cell: scatterer_cell.map(|c| c as usize),
    };
    if let Err(e) = p.validate() {
        push_param_error(ck, &e);
        return None;
    }
    Some((ParamSet::Physical(p), units, omega0?))
}

fn check_cells(ck: &mut Checker, m: &Map<String, Value>) -> Option<usize> {
    let n = ck.integer(m, "n_cells", "params", true)?;
    if n == 0 {
        ck.err("params.n_cells", "must be ≥ 1 (got 0)");
        return None;
    }
    if n > 100_000 {
        ck.err("params.n_cells", format!("must be ≤ 100000 (got {n})"));
        return None;
    }
    Some(n as usize)
}

fn push_param_error(ck: &mut Checker, e: &Error) {
    match e {
        Error::InvalidParameter { field, reason } => ck.err(format!("params.{field}"), reason.clone()),
        other => ck.err("params", other.to_string()),
    }
}

fn check_grid(ck: &mut Checker, v: Option<&Value>, mode: Mode, units: Units, omega0: f64) -> Option<Option<Grid>> {
    let to_internal = |x: f64| match units {
        Units::Hz => 2.0 * PI * x / omega0,
        Units::Dimensionless => x,
    };
    if mode == Mode::Spectrum {
        if v.is_some() {
            ck.err("grid", "not used by mode `spectrum`");
            return None;
        }
        return Some(None);
    }
    let Some(v) = v else {
        ck.err("grid", "required field is missing");
        return None;
    };
    let m = ck.object(v, "grid")?;
    if mode == Mode::Bands {
        ck.unknown(m, &["k_points"], "grid");
        let n = ck.integer(m, "k_points", "grid", true)?;
        if n < 2 {
            ck.err("grid.k_points", format!("≥ 2 required (got {n})"));
            return None;
        }
        return Some(Some(Grid::K { points: n as usize }));
    }
    ck.unknown(m, &["omega_min", "omega_max", "points"], "grid");
    let lo = ck.number(m, "omega_min", "grid", true);
    let hi = ck.number(m, "omega_max", "grid", true);
    let n = ck.integer(m, "points", "grid", true);
    let mut ok = true;
    if let Some(n) = n {
        if n < 2 {
            ck.err("grid.points", format!("≥ 2 required (got {n})"));
            ok = false;
        } else if n > 10_000_000 {
            ck.err("grid.points", format!("≤ 10000000 required (got {n})"));
            ok = false;
        }
    }
    if let (Some(a), Some(b)) = (lo, hi) {
        if a >= b {
            ck.err("grid.omega_max", format!("omega_min < omega_max required (got {a} ≥ {b})"));
            ok = false;
        }
    }
    if !ok {
        return None;
    }
    Some(Some(Grid::Omega { min: to_internal(lo?), max: to_internal(hi?), points: n? as usize }))
}

fn check_output(ck: &mut Checker, v: Option<&Value>) -> Option<Output> {
    let default = Output { directory: PathBuf::from("."), formats: vec![Format::Csv, Format::Json] };
    let Some(v) = v else { return Some(default) };
    let m = ck.object(v, "output")?;
    ck.unknown(m, &["directory", "formats"], "output");
    let directory = ck.string(m, "directory", "output", false).map(PathBuf::from).unwrap_or(default.directory);
    let formats = match m.get("formats") {
        None => default.formats,
        Some(Value::Array(items)) => {
            let mut out = Vec::new();
            for (i, f) in items.iter().enumerate() {
                match f.as_str() {
                    Some("csv") if !out.contains(&Format::Csv) => out.push(Format::Csv),
                    Some("json") if !out.contains(&Format::Json) => out.push(Format::Json),
                    Some("csv") | Some("json") => ck.err(format!("output.formats[{i}]"), "duplicate format"),
                    _ => ck.err(format!("output.formats[{i}]"), format!("must be \"csv\" or \"json\", got {f}")),
                }
            }
            if items.is_empty() {
                ck.err("output.formats", "must name at least one format");
            }
            out
        }
        Some(other) => {
            ck.err("output.formats", format!("must be an array, got {}", kind_of(other)));
            return None;
        }
    };
    Some(Output { directory, formats })
}

fn check_sweep(ck: &mut Checker, doc: &Value, v: Option<&Value>) -> Option<Sweep> {
    let Some(v) = v else {
        ck.err("sweep", "required when mode = sweep");
        return None;
    };
    let m = ck.object(v, "sweep")?;
    ck.unknown(m, &["parameter", "values", "mode"], "sweep");
    let mode = match ck.string(m, "mode", "sweep", false) {
        None => Some(Mode::Circulator),
        Some(s) => match Mode::parse(s) {
            Some(Mode::Sweep) => {
                ck.err("sweep.mode", "sweeps cannot be nested");
                None
            }
            Some(md) => Some(md),
            None => {
                ck.err("sweep.mode", format!("unknown mode `{s}`"));
                None
            }
        },
    };
    let parameter = ck.string(m, "parameter", "sweep", true).and_then(|p| {
        if SWEEPABLE.contains(&p) {
            Some(p.to_string())
        } else {
            ck.err("sweep.parameter", format!("`{p}` is not sweepable; expected one of {}", SWEEPABLE.join(", ")));
            None
        }
    });
    let values = match m.get("values") {
        None => {
            ck.err("sweep.values", "required field is missing");
            None
        }
        Some(Value::Array(a)) if a.is_empty() => {
            ck.err("sweep.values", "must contain at least one value");
            None
        }
        Some(Value::Array(a)) => {
            let mut out = Vec::with_capacity(a.len());
            for (i, x) in a.iter().enumerate() {
                match x.as_f64() {
                    Some(f) if f.is_finite() => out.push(f),
                    _ => ck.err(format!("sweep.values[{i}]"), format!("must be a finite number, got {x}")),
                }
            }
            (out.len() == a.len()).then_some(out)
        }
        Some(other) => {
            ck.err("sweep.values", format!("must be an array, got {}", kind_of(other)));
            None
        }
    };
    let (mode, parameter, values) = (mode?, parameter?, values?);

    let mut points = Vec::with_capacity(values.len());
    for (i, &x) in values.iter().enumerate() {
        let mut d = doc.clone();
        let top = d.as_object_mut()?;
        top.remove("sweep");
        top.insert("mode".into(), Value::from(mode.as_str()));
        let num = if x.fract() == 0.0 && x.abs() < 9e15 && matches!(parameter.as_str(), "params.n_cells" | "params.scatterer_cell") {
            Value::from(x as i64)
        } else {
            Value::from(x)
        };
        set_path(&mut d, &parameter, num);
        match validate_value(&d) {
            Ok(c) => points.push(c),
            Err(errs) => {
                for e in errs {
                    ck.err(format!("sweep.values[{i}]"), e.to_string());
                }
            }
        }
    }
    (points.len() == values.len()).then_some(Sweep { parameter, values, mode, points })
}

fn set_path(doc: &mut Value, path: &str, v: Value) {
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let Some(obj) = cur.as_object_mut() else { return };
        if i + 1 == parts.len() {
            obj.insert((*part).to_string(), v);
            return;
        }
        cur = obj.entry(*part).or_insert_with(|| Value::Object(Map::new()));
    }
}
