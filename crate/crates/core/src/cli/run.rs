//! Per-mode computations. [`compute`] is pure; files are written by
//! [`super::execute`].

use serde_json::{json, Map, Value};

use super::config::{ExperimentConfig, Grid, Mode, ParamSet, Units};
use super::export::{fmt_f64, json_array, json_f64, Csv};
use super::schema::PORT_NAMES;
use crate::circulator::{self, CirculatorReport};
use crate::error::{Error, Result};
use crate::greens::{self, Couplings, Recursion};
use crate::lattice::{self, GapBounds};
use crate::linspace;
use crate::par::{self, Execution};
use crate::scattering::{transmission_spectrum, Device};

/// Result of one computation, before serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub mode: Mode,
    pub csv: Csv,
    pub result: Value,
    pub summary: Vec<String>,
    /// Key scalars, already in output units; used as sweep columns.
    pub scalars: Vec<(&'static str, f64)>,
}

fn unit(cfg: &ExperimentConfig) -> &'static str {
    match cfg.units {
        Units::Hz => "Hz",
        Units::Dimensionless => "Ω",
    }
}

fn omega_grid(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    match cfg.grid {
        Some(Grid::Omega { min, max, points }) => Ok(linspace(min, max, points)),
        _ => Err(Error::invalid("grid", format!("mode `{}` needs omega_min, omega_max and points", cfg.mode))),
    }
}

fn device(cfg: &ExperimentConfig) -> Result<Device> {
    match &cfg.params {
        ParamSet::Physical(p) => Device::new(p),
        ParamSet::TightBinding(_) => Err(Error::invalid("kind", "physical parameters required")),
    }
}

fn list(cfg: &ExperimentConfig, xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| format!("{:.4e}", cfg.to_output(x))).collect();
    format!("[{}]", parts.join(", "))
}

fn gap_json(cfg: &ExperimentConfig, g: GapBounds) -> Value {
    json!({
        "lower": json_f64(cfg.to_output(g.lower)),
        "upper": json_f64(cfg.to_output(g.upper)),
        "width": json_f64(cfg.to_output(g.width())),
    })
}

pub fn compute(cfg: &ExperimentConfig, exec: Execution) -> Result<Artifact> {
    match cfg.mode {
        Mode::Bands => bands(cfg, exec),
        Mode::Spectrum => spectrum(cfg),
        Mode::Greens => green(cfg, exec),
        Mode::Transmission => transmission(cfg, exec),
        Mode::Circulator => circulator_mode(cfg, exec),
        Mode::Sweep => sweep(cfg, exec),
    }
}

fn bands(cfg: &ExperimentConfig, exec: Execution) -> Result<Artifact> {
    let tb = cfg.params.tight_binding()?;
    let n = match cfg.grid {
        Some(Grid::K { points }) => points,
        _ => return Err(Error::invalid("grid", "mode `bands` needs k_points")),
    };
    let ks = linspace(-std::f64::consts::PI, std::f64::consts::PI, n);
    let bands = lattice::band_structure(&tb, cfg.supermode, &ks, exec)?;
    let nb = cfg.supermode.sites_per_cell();
    let gap = lattice::gap_bounds(&tb, cfg.supermode);

    let mut header = vec!["k".to_string()];
    header.extend((0..nb).map(|i| format!("E{i}")));
    let mut csv = Csv::new(header);
    for b in &bands {
        let mut row = vec![fmt_f64(b.k)];
        row.extend(b.energies.iter().map(|&e| fmt_f64(cfg.to_output(e))));
        csv.push(row);
    }
    let per_band: Vec<Value> =
        (0..nb).map(|i| json_array(bands.iter().map(|b| cfg.to_output(b.energies[i])))).collect();
    let result = json!({
        "supermode": cfg.supermode.to_string(),
        "k": json_array(ks.iter().copied()),
        "bands": per_band,
        "gap": gap_json(cfg, gap),
    });
    let summary = vec![format!(
        "bands: {}, {} k-points, {} bands; gap ({:.6e}, {:.6e}) {u}, width {:.6e} {u}",
        cfg.supermode,
        n,
        nb,
        cfg.to_output(gap.lower),
        cfg.to_output(gap.upper),
        cfg.to_output(gap.width()),
        u = unit(cfg)
    )];
    Ok(Artifact {
        mode: Mode::Bands,
        csv,
        result,
        summary,
        scalars: vec![
            ("gap_lower", cfg.to_output(gap.lower)),
            ("gap_upper", cfg.to_output(gap.upper)),
            ("gap_width", cfg.to_output(gap.width())),
        ],
    })
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Artifact> {
    let tb = cfg.params.tight_binding()?;
    let s = lattice::diagonalize(&lattice::finite_hamiltonian(&tb, cfg.supermode))?;
    let in_gap = s.in_gap();
    let edges = s.edge_states();
    let dim = s.eigenvalues.len();

    let mut csv = Csv::new(["index", "energy", "flag", "in_gap", "left_mass", "right_mass"]);
    for (i, &e) in s.eigenvalues.iter().enumerate() {
        let w = &s.site_weights[i];
        let (mut left, mut right) = (0.0, 0.0);
        for (j, &x) in w.iter().enumerate() {
            if 2 * j + 1 < dim {
                left += x;
            } else if 2 * j + 1 > dim {
                right += x;
            } else {
                left += 0.5 * x;
                right += 0.5 * x;
            }
        }
        csv.push(vec![
            i.to_string(),
            fmt_f64(cfg.to_output(e)),
            s.edge_flags[i].as_str().to_string(),
            in_gap.contains(&i).to_string(),
            fmt_f64(left),
            fmt_f64(right),
        ]);
    }
    let edge_states: Vec<Value> = edges
        .iter()
        .map(|&i| json!({"index": i, "energy": json_f64(cfg.to_output(s.eigenvalues[i])), "flag": s.edge_flags[i].as_str()}))
        .collect();
    let result = json!({
        "supermode": cfg.supermode.to_string(),
        "eigenvalues": json_array(s.eigenvalues.iter().map(|&e| cfg.to_output(e))),
        "edge_flags": s.edge_flags.iter().map(|f| f.as_str()).collect::<Vec<_>>(),
        "in_gap": in_gap,
        "edge_states": edge_states,
        "gap": gap_json(cfg, s.gap),
    });
    let energies: Vec<f64> = edges.iter().map(|&i| s.eigenvalues[i]).collect();
    let summary = vec![format!(
        "spectrum: {}, {} states, {} edge states at {} {}; gap width {:.6e} {}",
        cfg.supermode,
        dim,
        edges.len(),
        list(cfg, &energies),
        unit(cfg),
        cfg.to_output(s.gap.width()),
        unit(cfg)
    )];
    Ok(Artifact {
        mode: Mode::Spectrum,
        csv,
        result,
        summary,
        scalars: vec![
            ("states", dim as f64),
            ("in_gap", in_gap.len() as f64),
            ("edge_states", edges.len() as f64),
            ("gap_width", cfg.to_output(s.gap.width())),
        ],
    })
}

fn recursion_name(r: Recursion) -> &'static str {
    match r {
        Recursion::Left => "left",
        Recursion::Right => "right",
        Recursion::RightCubic => "right_cubic",
    }
}

fn green(cfg: &ExperimentConfig, exec: Execution) -> Result<Artifact> {
    let tb = cfg.params.tight_binding()?;
    let c = Couplings::new(tb.g, tb.j1, tb.j2);
    if !(c.eta() > 0.0) {
        return Err(Error::invalid("j2", "must be > 0 for mode `greens`"));
    }
    let eta = c.eta();
    let grid = omega_grid(cfg)?;
    let samples = greens::boundary_sweep(cfg.recursion, &c, &grid, eta, exec)?;
    let sing = greens::singularity_scan(cfg.recursion, &c, &grid, Some(eta))?;

    // G carries units of 1/frequency
    let g_scale = match cfg.units {
        Units::Hz => 1.0 / cfg.to_output(1.0),
        Units::Dimensionless => 1.0,
    };
    let mut csv = Csv::new(["omega", "re", "im", "abs", "converged", "singular"]);
    for s in &samples {
        let v = s.value * g_scale;
        csv.push(vec![
            fmt_f64(cfg.to_output(s.omega)),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(v.norm()),
            s.converged.to_string(),
            s.singular.to_string(),
        ]);
    }
    let result = json!({
        "recursion": recursion_name(cfg.recursion),
        "eta": json_f64(cfg.to_output(eta)),
        "omega": json_array(samples.iter().map(|s| cfg.to_output(s.omega))),
        "re": json_array(samples.iter().map(|s| s.value.re * g_scale)),
        "im": json_array(samples.iter().map(|s| s.value.im * g_scale)),
        "converged": samples.iter().map(|s| s.converged).collect::<Vec<_>>(),
        "singular": samples.iter().map(|s| s.singular).collect::<Vec<_>>(),
        "singularities": json_array(sing.iter().map(|&w| cfg.to_output(w))),
    });
    let summary = vec![format!(
        "greens: {} boundary, {} points, singular at {} {}",
        recursion_name(cfg.recursion),
        grid.len(),
        list(cfg, &sing),
        unit(cfg)
    )];
    Ok(Artifact {
        mode: Mode::Greens,
        csv,
        result,
        summary,
        scalars: vec![("singularities", sing.len() as f64)],
    })
}

fn transmission(cfg: &ExperimentConfig, exec: Execution) -> Result<Artifact> {
    let d = device(cfg)?;
    let grid = omega_grid(cfg)?;
    let spec = transmission_spectrum(&d, &grid, exec)?;

    let mut header = vec!["detuning".to_string()];
    header.extend(PORT_NAMES.iter().map(|s| s.to_string()));
    let mut csv = Csv::new(header);
    for (x, t) in spec.detuning.iter().zip(&spec.maps) {
        let mut row = vec![fmt_f64(cfg.to_output(*x))];
        row.extend(t.t.iter().flatten().map(|&v| fmt_f64(v)));
        csv.push(row);
    }
    let mut t = Map::new();
    for (k, name) in PORT_NAMES.iter().enumerate() {
        t.insert((*name).into(), json_array(spec.maps.iter().map(|m| m.t[k / 4][k % 4])));
    }
    let result = json!({
        "detuning": json_array(spec.detuning.iter().map(|&x| cfg.to_output(x))),
        "scatterer": spec.scatterer,
        "T": Value::Object(t),
    });
    let max = |m: usize, n: usize| spec.series(m, n).into_iter().fold(0.0, f64::max);
    let (t23, t14) = (max(2, 3), max(1, 4));
    let summary = vec![format!(
        "transmission: {} points{}, max T23 = {t23:.6}, max T14 = {t14:.6}",
        spec.len(),
        if spec.scatterer { " (with scatterer)" } else { "" }
    )];
    Ok(Artifact {
        mode: Mode::Transmission,
        csv,
        result,
        summary,
        scalars: vec![("max_T23", t23), ("max_T14", t14)],
    })
}

fn report_json(cfg: &ExperimentConfig, r: &CirculatorReport) -> Value {
    let win = |w: &circulator::Window| {
        json!({
            "center": json_f64(cfg.to_output(w.center)),
            "width": json_f64(cfg.to_output(w.width)),
            "lower": json_f64(cfg.to_output(w.lower)),
            "upper": json_f64(cfg.to_output(w.upper)),
        })
    };
    let ops: Vec<Value> = r
        .operating_points
        .iter()
        .map(|o| {
            json!({
                "detuning": json_f64(cfg.to_output(o.detuning)),
                "metrics": {
                    "fidelity": json_f64(o.metrics.fidelity),
                    "survival": json_f64(o.metrics.survival),
                    "insertion_loss_db": json_f64(o.metrics.insertion_loss_db),
                },
            })
        })
        .collect();
    json!({
        "threshold": r.threshold,
        "windows": r.windows.iter().map(win).collect::<Vec<_>>(),
        "detuning": json_f64(cfg.to_output(r.detuning)),
        "fidelity": json_f64(r.fidelity),
        "survival": json_f64(r.survival),
        "insertion_loss_db": json_f64(r.insertion_loss_db),
        "bandwidth": json_f64(cfg.to_output(r.bandwidth)),
        "total_bandwidth": json_f64(cfg.to_output(r.total_bandwidth)),
        "mean_insertion_loss_db": json_f64(r.mean_insertion_loss_db),
        "operating_points": ops,
    })
}

fn circulator_mode(cfg: &ExperimentConfig, exec: Execution) -> Result<Artifact> {
    let d = device(cfg)?;
    let grid = omega_grid(cfg)?;
    let spec = transmission_spectrum(&d, &grid, exec)?;
    let r = circulator::report(&spec, cfg.threshold)?;
    let series = circulator::metrics_series(&spec)?;

    let mut csv = Csv::new(["detuning", "fidelity", "survival", "insertion_loss_db", "T23", "T14"]);
    for ((x, m), t) in spec.detuning.iter().zip(&series).zip(&spec.maps) {
        csv.push(vec![
            fmt_f64(cfg.to_output(*x)),
            fmt_f64(m.fidelity),
            fmt_f64(m.survival),
            fmt_f64(m.insertion_loss_db),
            fmt_f64(t.get(2, 3)),
            fmt_f64(t.get(1, 4)),
        ]);
    }
    let centers: Vec<f64> = r.windows.iter().map(|w| w.center).collect();
    let summary = vec![
        format!("circulator: {} windows at {} {}", r.windows.len(), list(cfg, &centers), unit(cfg)),
        format!(
            "  best operating point {:.6e} {}: fidelity {:.4}, survival {:.4}, insertion loss {:.3} dB",
            cfg.to_output(r.detuning),
            unit(cfg),
            r.fidelity,
            r.survival,
            r.insertion_loss_db
        ),
        format!(
            "  bandwidth {:.6e} {u} (widest channel), {:.6e} {u} total, mean insertion loss {:.3} dB",
            cfg.to_output(r.bandwidth),
            cfg.to_output(r.total_bandwidth),
            r.mean_insertion_loss_db,
            u = unit(cfg)
        ),
    ];
    Ok(Artifact {
        mode: Mode::Circulator,
        csv,
        result: report_json(cfg, &r),
        summary,
        scalars: vec![
            ("windows", r.windows.len() as f64),
            ("fidelity", r.fidelity),
            ("survival", r.survival),
            ("insertion_loss_db", r.insertion_loss_db),
            ("bandwidth", cfg.to_output(r.bandwidth)),
            ("total_bandwidth", cfg.to_output(r.total_bandwidth)),
            ("mean_insertion_loss_db", r.mean_insertion_loss_db),
        ],
    })
}

fn sweep(cfg: &ExperimentConfig, exec: Execution) -> Result<Artifact> {
    let sw = cfg.sweep.as_ref().ok_or_else(|| Error::invalid("sweep", "missing"))?;
    // points run concurrently; each point is itself sequential
    let results = par::try_map(exec, &sw.points, |p| compute(p, Execution::Sequential))?;
    let names: Vec<&str> = results.first().map(|a| a.scalars.iter().map(|s| s.0).collect()).unwrap_or_default();

    let mut header = vec!["value".to_string()];
    header.extend(names.iter().map(|s| s.to_string()));
    let mut csv = Csv::new(header);
    let mut points = Vec::new();
    let mut summary = vec![format!("sweep: {} over {} values ({})", sw.parameter, sw.values.len(), sw.mode)];
    for (value, a) in sw.values.iter().zip(&results) {
        let mut row = vec![fmt_f64(*value)];
        row.extend(a.scalars.iter().map(|s| fmt_f64(s.1)));
        csv.push(row);
        let mut sc = Map::new();
        for (k, v) in &a.scalars {
            sc.insert((*k).into(), json_f64(*v));
        }
        points.push(json!({"value": value, "scalars": Value::Object(sc)}));
        let parts: Vec<String> = a.scalars.iter().map(|(k, v)| format!("{k}={v:.4e}")).collect();
        summary.push(format!("  {value}: {}", parts.join(" ")));
    }
    let result = json!({
        "parameter": sw.parameter,
        "mode": sw.mode.as_str(),
        "values": json_array(sw.values.iter().copied()),
        "points": points,
    });
    Ok(Artifact { mode: Mode::Sweep, csv, result, summary, scalars: Vec::new() })
}
