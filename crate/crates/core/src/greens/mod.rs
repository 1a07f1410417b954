//! Recursive boundary Green functions of the forward (emitter-coupled)
//! chain: left and right Dyson recursions, their fixed points, series
//! classification near the singular frequencies, and stability.
//!
//! Frequencies are measured from Ω and may carry a small positive imaginary
//! part η (retarded convention).

mod cardano;

pub use cardano::{solve_cubic, solve_quadratic};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Default retarded broadening in units of J₂.
pub const DEFAULT_ETA: f64 = 1e-6;
/// A boundary value is singular when |G| exceeds this fraction of 1/η.
pub const SINGULAR_FRACTION: f64 = 0.1;
const POLE_TOL: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub g: f64,
    pub j1: f64,
    pub j2: f64,
}

impl Couplings {
    pub fn new(g: f64, j1: f64, j2: f64) -> Self {
        Couplings { g, j1, j2 }
    }
    pub fn eta(&self) -> f64 {
        DEFAULT_ETA * self.j2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recursion {
    /// G₁₁ at the emitter that terminates the left boundary.
    Left,
    /// Boundary element at B_N of the L-type chain.
    Right,
    /// Right recursion whose fixed points obey the cubic
    /// ωJ₂⁴x³ − (2ω²J₂²+J₂⁴)x² + [ω(ω²−g²+2J₂²)−J₁²]x + g²−ω² = 0.
    RightCubic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenRecursionState {
    pub recursion: Recursion,
    pub omega: Complex64,
    pub value: Complex64,
    /// Number of cells folded into `value`.
    pub step: usize,
}

/// x ↦ (a x + b)/(c x + d).
#[derive(Debug, Clone, Copy)]
struct Mobius {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl Mobius {
    fn derivative(&self, x: Complex64) -> Complex64 {
        let den = self.c * x + self.d;
        (self.a * self.d - self.b * self.c) / (den * den)
    }
    fn fixed_points(&self) -> [Complex64; 2] {
        solve_quadratic(self.c, self.d - self.a, -self.b)
    }
}

fn left_map(omega: Complex64, c: &Couplings) -> Mobius {
    let (g2, j1s, j2s) = (c.g * c.g, c.j1 * c.j1, c.j2 * c.j2);
    let w2g = omega * omega - g2;
    Mobius {
        a: -omega * j2s,
        b: omega * omega - j1s,
        c: -w2g * j2s,
        d: omega * (w2g - j1s),
    }
}

fn right_map(omega: Complex64, c: &Couplings) -> Mobius {
    let (g2, j1s, j2s) = (c.g * c.g, c.j1 * c.j1, c.j2 * c.j2);
    let w2g = omega * omega - g2;
    Mobius {
        a: -omega * j2s,
        b: w2g,
        c: -omega * omega * j2s,
        d: omega * (w2g - j1s),
    }
}

fn pole(operation: &'static str, omega: Complex64) -> Error {
    Error::Pole { module: "greens", operation, omega }
}

/// One left step: [ω(ω−J₂²x)−J₁²] / [(ω²−g²)(ω−J₂²x)−J₁²ω].
pub fn left_recursion_step(x: Complex64, omega: Complex64, c: &Couplings) -> Result<Complex64> {
    let u = omega - c.j2 * c.j2 * x;
    let num = omega * u - c.j1 * c.j1;
    let den = (omega * omega - c.g * c.g) * u - c.j1 * c.j1 * omega;
    if den.norm() < POLE_TOL {
        return Err(pole("left_recursion_step", omega));
    }
    Ok(num / den)
}

/// ξ_L(x) = step(x) − x.
pub fn xi_left(x: Complex64, omega: Complex64, c: &Couplings) -> Result<Complex64> {
    Ok(left_recursion_step(x, omega, c)? - x)
}

/// Both roots of J₂²(ω²−g²)x² − ω(ω²−g²+J₂²−J₁²)x + (ω²−J₁²) = 0.
pub fn left_fixed_points(omega: Complex64, c: &Couplings) -> Result<[Complex64; 2]> {
    let w2g = omega * omega - c.g * c.g;
    if w2g.norm() <= 1e-14 * (c.g * c.g).max(omega.norm_sqr()).max(f64::MIN_POSITIVE) {
        return Err(pole("left_fixed_points", omega));
    }
    let a = c.j2 * c.j2 * w2g;
    let b = -omega * (w2g + c.j2 * c.j2 - c.j1 * c.j1);
    let cc = omega * omega - c.j1 * c.j1;
    Ok(solve_quadratic(a, b, cc))
}

/// dξ_L/dx at x.
pub fn xi_left_derivative(x: Complex64, omega: Complex64, c: &Couplings) -> Complex64 {
    left_map(omega, c).derivative(x) - 1.0
}

/// Coefficient of 1/(ω∓g) in the singular branch near ω = ±g.
pub fn left_singular_residue(c: &Couplings) -> f64 {
    (c.j2 * c.j2 - c.j1 * c.j1) / (2.0 * c.j2 * c.j2)
}

/// Limit of the regular branch as ω → +g; the ω → −g limit has opposite sign.
pub fn left_regular_limit(c: &Couplings) -> f64 {
    (c.g * c.g - c.j1 * c.j1) / (c.g * (c.j2 * c.j2 - c.j1 * c.j1))
}

/// ∂ξ_L/∂x at the singular fixed point, ω = ±g: J₁²/J₂² − 1.
/// Negative means stable, i.e. a left edge doublet exists.
pub fn left_stability(c: &Couplings) -> f64 {
    c.j1 * c.j1 / (c.j2 * c.j2) - 1.0
}

/// One step of the right recursion {ω − J₁²[(ω−J₂²x)²−g²]⁻¹}⁻¹.
pub fn right_recursion_step(x: Complex64, omega: Complex64, c: &Couplings) -> Result<Complex64> {
    let u = omega - c.j2 * c.j2 * x;
    let inner = u * u - c.g * c.g;
    if inner.norm() < POLE_TOL {
        return Err(pole("right_recursion_step", omega));
    }
    let den = omega - c.j1 * c.j1 / inner;
    if den.norm() < POLE_TOL {
        return Err(pole("right_recursion_step", omega));
    }
    Ok(1.0 / den)
}

pub fn xi_right(x: Complex64, omega: Complex64, c: &Couplings) -> Result<Complex64> {
    Ok(right_recursion_step(x, omega, c)? - x)
}

/// `[a, b, c, d]` of the right fixed-point cubic.
pub fn right_cubic_coefficients(omega: Complex64, c: &Couplings) -> [Complex64; 4] {
    let (g2, j1s, j2s) = (c.g * c.g, c.j1 * c.j1, c.j2 * c.j2);
    [
        omega * j2s * j2s,
        -(2.0 * omega * omega * j2s + j2s * j2s),
        omega * (omega * omega - g2 + 2.0 * j2s) - j1s,
        Complex64::new(g2, 0.0) - omega * omega,
    ]
}

pub fn right_fixed_points(omega: Complex64, c: &Couplings) -> [Complex64; 3] {
    let [a, b, cc, d] = right_cubic_coefficients(omega, c);
    solve_cubic(a, b, cc, d)
}

/// Exact boundary step at B_N of the L-type chain:
/// G' = 1/(ω − J₁²ω/(ω(ω−J₂²x) − g²)).
pub fn right_boundary_step(x: Complex64, omega: Complex64, c: &Couplings) -> Result<Complex64> {
    let inner = omega * (omega - c.j2 * c.j2 * x) - c.g * c.g;
    if inner.norm() < POLE_TOL {
        return Err(pole("right_boundary_step", omega));
    }
    let den = omega - c.j1 * c.j1 * omega / inner;
    if den.norm() < POLE_TOL {
        return Err(pole("right_boundary_step", omega));
    }
    Ok(1.0 / den)
}

/// Roots of ω²J₂²x² − ω(ω²−g²−J₁²+J₂²)x + (ω²−g²) = 0.
pub fn right_boundary_fixed_points(omega: Complex64, c: &Couplings) -> Result<[Complex64; 2]> {
    if omega.norm() == 0.0 {
        return Err(pole("right_boundary_fixed_points", omega));
    }
    Ok(right_map(omega, c).fixed_points())
}

fn step_fn(rec: Recursion) -> fn(Complex64, Complex64, &Couplings) -> Result<Complex64> {
    match rec {
        Recursion::Left => left_recursion_step,
        Recursion::Right => right_boundary_step,
        Recursion::RightCubic => right_recursion_step,
    }
}

/// Boundary value of an `n`-cell chain, seeded with x = 0.
pub fn iterate(rec: Recursion, omega: Complex64, c: &Couplings, n: usize) -> Result<GreenRecursionState> {
    let f = step_fn(rec);
    let mut x = Complex64::new(0.0, 0.0);
    for _ in 0..n {
        x = f(x, omega, c)?;
    }
    Ok(GreenRecursionState { recursion: rec, omega, value: x, step: n })
}

/// Iterates until successive values agree to `rel_tol`; returns the state
/// and whether convergence was reached within `max_steps`.
pub fn converge(
    rec: Recursion,
    omega: Complex64,
    c: &Couplings,
    max_steps: usize,
    rel_tol: f64,
) -> Result<(GreenRecursionState, bool)> {
    let f = step_fn(rec);
    let mut x = Complex64::new(0.0, 0.0);
    for n in 1..=max_steps {
        let next = f(x, omega, c)?;
        let done = (next - x).norm() <= rel_tol * next.norm();
        x = next;
        if done {
            return Ok((GreenRecursionState { recursion: rec, omega, value: x, step: n }, true));
        }
    }
    Ok((GreenRecursionState { recursion: rec, omega, value: x, step: max_steps }, false))
}

/// Attracting fixed point (|F'| < 1) of a Möbius recursion at complex ω.
fn attracting(m: &Mobius) -> Complex64 {
    let [r0, r1] = m.fixed_points();
    let d0 = if r0.is_finite() { m.derivative(r0).norm() } else { f64::INFINITY };
    let d1 = if r1.is_finite() { m.derivative(r1).norm() } else { f64::INFINITY };
    if d0 <= d1 {
        r0
    } else {
        r1
    }
}

/// Physical (retarded) fixed point of the semi-infinite chain at ω.
pub fn physical_fixed_point(rec: Recursion, omega: Complex64, c: &Couplings) -> Result<Complex64> {
    match rec {
        Recursion::Left => Ok(attracting(&left_map(omega, c))),
        Recursion::Right => Ok(attracting(&right_map(omega, c))),
        Recursion::RightCubic => {
            let (state, _) = converge(rec, omega, c, 5000, 1e-13)?;
            let roots = right_fixed_points(omega, c);
            Ok(roots
                .iter()
                .copied()
                .filter(|r| r.is_finite())
                .min_by(|a, b| (a - state.value).norm().total_cmp(&(b - state.value).norm()))
                .unwrap_or(state.value))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSample {
    pub omega: f64,
    pub value: Complex64,
    pub converged: bool,
    pub singular: bool,
}

/// Physical boundary value over a real ω grid, evaluated at ω + iη.
pub fn boundary_sweep(
    rec: Recursion,
    c: &Couplings,
    omega_grid: &[f64],
    eta: f64,
    exec: Execution,
) -> Result<Vec<GreenSample>> {
    par::try_map(exec, omega_grid, |&w| {
        let z = Complex64::new(w, eta);
        let value = physical_fixed_point(rec, z, c)?;
        let converged = match rec {
            Recursion::RightCubic => converge(rec, z, c, 5000, 1e-13)?.1,
            _ => value.is_finite(),
        };
        Ok(GreenSample {
            omega: w,
            value,
            converged,
            singular: value.norm() > SINGULAR_FRACTION / eta,
        })
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-15 * (lo.abs() + hi.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        x1
    } else {
        x2
    }
}

/// Real frequencies where the physical boundary value of `rec` diverges:
/// local maxima of |G(ω+iη)| on the grid, refined by golden-section search,
/// kept when |G| > 0.1/η. η defaults to 1e-6·J₂ when `None`.
pub fn singularity_scan(
    rec: Recursion,
    c: &Couplings,
    omega_grid: &[f64],
    eta: Option<f64>,
) -> Result<Vec<f64>> {
    let eta = eta.unwrap_or_else(|| c.eta());
    let mag = |w: f64| {
        physical_fixed_point(rec, Complex64::new(w, eta), c)
            .map(|v| if v.is_finite() { v.norm() } else { f64::INFINITY })
            .unwrap_or(f64::INFINITY)
    };
    let vals: Vec<f64> = omega_grid.iter().map(|&w| mag(w)).collect();
    let n = vals.len();
    let threshold = SINGULAR_FRACTION / eta;
    let mut out: Vec<f64> = Vec::new();
    for i in 0..n {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < n { vals[i + 1] } else { f64::NEG_INFINITY };
        if !(vals[i] >= left && vals[i] > right) {
            continue;
        }
        let lo = omega_grid[i.saturating_sub(1)];
        let hi = omega_grid[(i + 1).min(n - 1)];
        let w = if hi > lo { golden_max(mag, lo, hi) } else { omega_grid[i] };
        if mag(w) > threshold && !out.iter().any(|&o| (o - w).abs() <= 2.0 * eta) {
            out.push(w);
        }
    }
    Ok(out)
}

/// Singular frequencies of the left boundary; {−g, +g} when J₁ < J₂.
pub fn left_singularity_scan(c: &Couplings, omega_grid: &[f64]) -> Result<Vec<f64>> {
    singularity_scan(Recursion::Left, c, omega_grid, None)
}

/// Singular frequencies of the right boundary (B_N of the L-type chain).
pub fn right_singularity_scan(c: &Couplings, omega_grid: &[f64]) -> Result<Vec<f64>> {
    singularity_scan(Recursion::Right, c, omega_grid, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn stability_values() {
        assert_eq!(left_stability(&Couplings::new(0.5, 1.0, 2.0)), -0.75);
        assert_eq!(left_stability(&Couplings::new(0.5, 1.0, 1.0)), 0.0);
        assert_eq!(left_stability(&Couplings::new(0.5, 2.0, 1.0)), 3.0);
    }

    #[test]
    fn fixed_points_zero_xi() {
        let c = Couplings::new(0.5, 1.0, 2.0);
        for w in [z(0.3, 1e-3), z(1.7, 0.01), z(-0.2, 0.5)] {
            for r in left_fixed_points(w, &c).unwrap() {
                let xi = xi_left(r, w, &c).unwrap();
                assert!(xi.norm() <= 1e-10 * r.norm().max(1.0), "xi = {xi}");
            }
        }
    }

    #[test]
    fn decoupled_emitter_limits() {
        let c = Couplings::new(0.0, 1.0, 2.0);
        let w = z(0.4, 0.01);
        let x = z(0.1, -0.3);
        // the emitter row detaches: G = 1/ω whatever the rest of the chain
        let left = left_recursion_step(x, w, &c).unwrap();
        assert!((left - 1.0 / w).norm() < 1e-12);
        let u = w - 4.0 * x;
        let right = right_recursion_step(x, w, &c).unwrap();
        assert!((right - 1.0 / (w - 1.0 / (u * u))).norm() < 1e-12);
        // exact boundary step becomes the SSH boundary recursion
        let exact = right_boundary_step(x, w, &c).unwrap();
        assert!((exact - 1.0 / (w - 1.0 / u)).norm() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        let c = Couplings::new(0.5, 1.0, 2.0);
        let err = left_recursion_step(z(0.0, 0.0), z(0.0, 0.0), &c).unwrap_err();
        assert!(matches!(err, Error::Pole { operation: "left_recursion_step", .. }));
        assert!(left_fixed_points(z(0.5, 0.0), &c).is_err());
    }
}
