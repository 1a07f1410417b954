use num_complex::Complex64;

use super::chain::SpectrumResult;
use super::Supermode;
use crate::params::TightBindingParams;

/// Fraction of probability that must sit in one half of the chain.
pub const EDGE_MASS_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFlag {
    LeftEdge,
    RightEdge,
    /// One of an in-gap pair whose even/odd combinations sit on opposite edges.
    Hybridized,
    Bulk,
}

impl EdgeFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeFlag::LeftEdge => "left-edge",
            EdgeFlag::RightEdge => "right-edge",
            EdgeFlag::Hybridized => "edge-hybridized",
            EdgeFlag::Bulk => "bulk",
        }
    }
}

/// Open interval (lower, upper) of the bulk gap around E = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBounds {
    pub lower: f64,
    pub upper: f64,
}

impl GapBounds {
    pub fn contains(&self, e: f64) -> bool {
        e > self.lower && e < self.upper
    }
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Backward: |E| < |J₂−J₁|. Forward: |E| < √(g²+(J₂−J₁)²).
pub fn gap_bounds(tb: &TightBindingParams, supermode: Supermode) -> GapBounds {
    let d = (tb.j2 - tb.j1).abs();
    let edge = match supermode {
        Supermode::Backward => d,
        Supermode::Forward => tb.g.hypot(d),
    };
    GapBounds { lower: -edge, upper: edge }
}

/// Probability in the left and right halves; an odd middle site is split evenly.
fn half_masses(w: &[f64]) -> (f64, f64) {
    let n = w.len();
    let half = n / 2;
    let mut left: f64 = w[..half].iter().sum();
    let mut right: f64 = w[n - half..].iter().sum();
    if n % 2 == 1 {
        left += 0.5 * w[half];
        right += 0.5 * w[half];
    }
    (left, right)
}

fn side(w: &[f64]) -> Option<EdgeFlag> {
    let (l, r) = half_masses(w);
    let t = l + r;
    if l >= EDGE_MASS_THRESHOLD * t {
        Some(EdgeFlag::LeftEdge)
    } else if r >= EDGE_MASS_THRESHOLD * t {
        Some(EdgeFlag::RightEdge)
    } else {
        None
    }
}

pub fn classify_edge_states(spec: &SpectrumResult, gap: GapBounds) -> Vec<EdgeFlag> {
    let n = spec.eigenvalues.len();
    let mut flags = vec![EdgeFlag::Bulk; n];
    let mut pending = Vec::new();
    for i in 0..n {
        if !gap.contains(spec.eigenvalues[i]) {
            continue;
        }
        match side(&spec.site_weights[i]) {
            Some(f) => flags[i] = f,
            None => pending.push(i),
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut used = vec![false; n];
    for a in 0..pending.len() {
        for b in a + 1..pending.len() {
            let (i, j) = (pending[a], pending[b]);
            if used[i] || used[j] {
                continue;
            }
            let vi = spec.eigenvectors.column(i);
            let vj = spec.eigenvectors.column(j);
            let plus: Vec<f64> = vi.iter().zip(vj.iter()).map(|(x, y)| ((x + y) * s).norm_sqr()).collect();
            let minus: Vec<f64> = vi.iter().zip(vj.iter()).map(|(x, y)| ((x - y) * s).norm_sqr()).collect();
            let pair = (side(&plus), side(&minus));
            let split = matches!(
                pair,
                (Some(EdgeFlag::LeftEdge), Some(EdgeFlag::RightEdge))
                    | (Some(EdgeFlag::RightEdge), Some(EdgeFlag::LeftEdge))
            );
            if split {
                flags[i] = EdgeFlag::Hybridized;
                flags[j] = EdgeFlag::Hybridized;
                used[i] = true;
                used[j] = true;
            }
        }
    }
    flags
}

/// Even and odd combinations (ψᵢ ± ψⱼ)/√2 of two states.
pub fn symmetrized_pair(spec: &SpectrumResult, i: usize, j: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let vi = spec.eigenvectors.column(i);
    let vj = spec.eigenvectors.column(j);
    let plus = vi.iter().zip(vj.iter()).map(|(x, y)| (x + y) * s).collect();
    let minus = vi.iter().zip(vj.iter()).map(|(x, y)| (x - y) * s).collect();
    (plus, minus)
}
