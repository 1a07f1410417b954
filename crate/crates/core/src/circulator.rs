//! Circulator figures of merit for the routing 1→2→3→4→1.
//!
//! fidelity = ¼ Σᵢ T_{i→next(i)} / Σⱼ T_{i→j}
//! survival = ¼ Σᵢ Σⱼ T_{i→j}
//! insertion loss = −10 log₁₀ (geometric mean of the four T_{i→next(i)})

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::scattering::{port_map, transmission_spectrum, Device, FourPortMap, TransmissionSpectrum};

pub const DEFAULT_THRESHOLD: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    /// Detuning of the T₂₃ maximum inside the window.
    pub center: f64,
    pub width: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub fidelity: f64,
    pub survival: f64,
    pub insertion_loss_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub detuning: f64,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthReport {
    /// Widest contiguous interval with fidelity above threshold.
    pub bandwidth: f64,
    /// Total measure with fidelity above threshold.
    pub total_bandwidth: f64,
    /// Width-weighted mean insertion loss over that measure.
    pub mean_insertion_loss_db: f64,
    pub channels: Vec<Window>,
    /// Fidelity maximum inside each channel.
    pub operating_points: Vec<OperatingPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculatorReport {
    pub threshold: f64,
    pub windows: Vec<Window>,
    /// Metrics at the best operating point.
    pub detuning: f64,
    pub fidelity: f64,
    pub survival: f64,
    pub insertion_loss_db: f64,
    pub bandwidth: f64,
    pub total_bandwidth: f64,
    pub mean_insertion_loss_db: f64,
    pub operating_points: Vec<OperatingPoint>,
}

const NEXT: [usize; 4] = [2, 3, 4, 1];

pub fn circulator_metrics(t: &FourPortMap) -> Result<Metrics> {
    let mut fidelity = 0.0;
    let mut survival = 0.0;
    let mut log_sum = 0.0;
    for i in 1..=4 {
        let total = t.row_sum(i);
        if !(total > 0.0) {
            return Err(Error::DegenerateRouting { port: i });
        }
        let good = t.get(i, NEXT[i - 1]);
        fidelity += good / total;
        survival += total;
        log_sum += good.log10();
    }
    Ok(Metrics {
        fidelity: fidelity / 4.0,
        survival: survival / 4.0,
        insertion_loss_db: -10.0 * log_sum / 4.0,
    })
}

/// Grid measure attributed to each point (midpoint rule).
fn cell_widths(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    (0..n)
        .map(|i| {
            let lo = if i > 0 { 0.5 * (grid[i] + grid[i - 1]) } else { grid[i] - 0.5 * (grid.get(1).copied().unwrap_or(grid[0]) - grid[0]) };
            let hi = if i + 1 < n { 0.5 * (grid[i] + grid[i + 1]) } else { grid[i] + 0.5 * (grid[i] - grid[i.saturating_sub(1)]) };
            hi - lo
        })
        .collect()
}

/// Maximal runs of consecutive indices where `ok` holds.
fn runs(ok: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < ok.len() {
        if ok[i] {
            let mut j = i;
            while j + 1 < ok.len() && ok[j + 1] {
                j += 1;
            }
            out.push((i, j));
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

fn argmax(v: &[f64], lo: usize, hi: usize) -> usize {
    (lo..=hi).fold(lo, |b, i| if v[i] > v[b] { i } else { b })
}

/// Contiguous intervals with T₂₃ ≥ threshold and T₁₄ ≤ 1 − threshold.
pub fn find_windows(spec: &TransmissionSpectrum, threshold: f64) -> Vec<Window> {
    let t23 = spec.series(2, 3);
    let t14 = spec.series(1, 4);
    let ok: Vec<bool> = t23.iter().zip(&t14).map(|(a, b)| *a >= threshold && *b <= 1.0 - threshold).collect();
    let w = cell_widths(&spec.detuning);
    runs(&ok)
        .into_iter()
        .map(|(i, j)| Window {
            center: spec.detuning[argmax(&t23, i, j)],
            width: w[i..=j].iter().sum(),
            lower: spec.detuning[i],
            upper: spec.detuning[j],
        })
        .collect()
}

pub fn metrics_series(spec: &TransmissionSpectrum) -> Result<Vec<Metrics>> {
    spec.maps.iter().map(circulator_metrics).collect()
}

pub fn bandwidth_from_spectrum(spec: &TransmissionSpectrum, threshold: f64) -> Result<BandwidthReport> {
    let m = metrics_series(spec)?;
    let fid: Vec<f64> = m.iter().map(|x| x.fidelity).collect();
    let ok: Vec<bool> = fid.iter().map(|&f| f > threshold).collect();
    let w = cell_widths(&spec.detuning);
    let mut channels = Vec::new();
    let mut operating_points = Vec::new();
    let mut total = 0.0;
    let mut il = 0.0;
    for (i, j) in runs(&ok) {
        let width: f64 = w[i..=j].iter().sum();
        total += width;
        il += (i..=j).map(|k| w[k] * m[k].insertion_loss_db).sum::<f64>();
        let best = argmax(&fid, i, j);
        channels.push(Window { center: spec.detuning[best], width, lower: spec.detuning[i], upper: spec.detuning[j] });
        operating_points.push(OperatingPoint { detuning: spec.detuning[best], metrics: m[best] });
    }
    Ok(BandwidthReport {
        bandwidth: channels.iter().map(|c| c.width).fold(0.0, f64::max),
        total_bandwidth: total,
        mean_insertion_loss_db: if total > 0.0 { il / total } else { f64::NAN },
        channels,
        operating_points,
    })
}

pub fn bandwidth(device: &Device, detuning: &[f64], threshold: f64, exec: Execution) -> Result<BandwidthReport> {
    bandwidth_from_spectrum(&transmission_spectrum(device, detuning, exec)?, threshold)
}

pub fn report(spec: &TransmissionSpectrum, threshold: f64) -> Result<CirculatorReport> {
    let windows = find_windows(spec, threshold);
    let bw = bandwidth_from_spectrum(spec, threshold)?;
    let best = match bw.operating_points.iter().max_by(|a, b| a.metrics.fidelity.total_cmp(&b.metrics.fidelity)) {
        Some(p) => *p,
        None => {
            let m = metrics_series(spec)?;
            let i = argmax(&m.iter().map(|x| x.fidelity).collect::<Vec<_>>(), 0, m.len() - 1);
            OperatingPoint { detuning: spec.detuning[i], metrics: m[i] }
        }
    };
    Ok(CirculatorReport {
        threshold,
        windows,
        detuning: best.detuning,
        fidelity: best.metrics.fidelity,
        survival: best.metrics.survival,
        insertion_loss_db: best.metrics.insertion_loss_db,
        bandwidth: bw.bandwidth,
        total_bandwidth: bw.total_bandwidth,
        mean_insertion_loss_db: bw.mean_insertion_loss_db,
        operating_points: bw.operating_points,
    })
}

/// Metrics of the edge-state tunneling device at a single detuning
/// (normally δ = 0).
pub fn tunneling_metrics(device: &Device, delta: f64) -> Result<(FourPortMap, Metrics)> {
    let t = port_map(device, delta)?;
    Ok((t, circulator_metrics(&t)?))
}
