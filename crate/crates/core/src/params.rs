//! Physical parameters and the conversions between waveguide coupling
//! coefficients and tight-binding rates. All frequencies and rates are
//! angular (rad/s), or normalized by Ω in dimensionless use.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Relative tolerance between a given FSR and the one implied by geometry.
pub const FSR_GEOMETRY_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// Resonator resonance Ω.
    pub omega0: f64,
    /// Angular free spectral range 𝓕.
    pub fsr: f64,
    pub n_eff: Option<f64>,
    /// Resonator radius in metres.
    pub radius: Option<f64>,
    /// Emitter transition ω_q.
    pub omega_q: f64,
    /// Emitter dissipation into non-guided modes γ.
    pub gamma_qe: f64,
    /// Emitter decay into the resonator Γ.
    pub big_gamma: f64,
    pub kappa1: Complex64,
    pub kappa2: Complex64,
    pub kappa_in: Complex64,
    pub kappa_out: Complex64,
    /// Intrinsic resonator loss γ_in.
    pub gamma_in: f64,
    pub n_cells: usize,
    /// Backscattering strength ε; 0 disables the scatterer.
    pub epsilon: f64,
    /// 1-based cell holding the scatterer; `None` means ⌈N/2⌉.
    pub scatterer_cell: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightBindingParams {
    pub g: f64,
    pub j1: f64,
    pub j2: f64,
    pub omega0: f64,
    pub omega_q: f64,
    pub gamma_qe: f64,
    pub n_cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedLosses {
    pub gamma_ex: f64,
    pub gamma_tol: f64,
    pub alpha: f64,
}

/// Real transmission t = √(1−|κ|²) of a coupler.
pub fn transmission_of(kappa: Complex64) -> f64 {
    (1.0 - kappa.norm_sqr()).max(0.0).sqrt()
}

/// Angular FSR of a ring: 2π · c/(n_eff·2πr).
pub fn fsr_from_geometry(n_eff: f64, radius: f64) -> f64 {
    SPEED_OF_LIGHT / (n_eff * radius)
}

/// κ = i·J/𝓕.
pub fn kappa_from_coupling(j: f64, fsr: f64) -> Complex64 {
    Complex64::new(0.0, j / fsr)
}

/// Γ = g²/(2𝓕).
pub fn decay_from_coupling(g: f64, fsr: f64) -> f64 {
    g * g / (2.0 * fsr)
}

pub fn hz(f: f64) -> f64 {
    2.0 * PI * f
}

impl PhysicalParams {
    /// Lossless reference chain: Ω/2π = 195 THz, 𝓕/2π = 0.6 THz,
    /// κ₁ = κ₂ = 0.1i, κ_in = κ_out = 0.25i, Γ/Ω = 1.5e-5, N = 10.
    pub fn lossless_reference() -> Self {
        let omega0 = hz(195e12);
        PhysicalParams {
            omega0,
            fsr: hz(0.6e12),
            n_eff: Some(2.0),
            radius: Some(40e-6),
            omega_q: omega0,
            gamma_qe: 0.0,
            big_gamma: 1.5e-5 * omega0,
            kappa1: Complex64::new(0.0, 0.1),
            kappa2: Complex64::new(0.0, 0.1),
            kappa_in: Complex64::new(0.0, 0.25),
            kappa_out: Complex64::new(0.0, 0.25),
            gamma_in: 0.0,
            n_cells: 10,
            epsilon: 0.0,
            scatterer_cell: None,
        }
    }

    /// Lossy device: γ/2π = 5.48 MHz, γ_in = 0.02·γ_ex and g = 0.77·γ_tol.
    pub fn implementation() -> Self {
        let mut p = Self::lossless_reference();
        p.gamma_qe = hz(5.48e6);
        let gamma_ex = p.derived_losses().expect("reference couplers are valid").gamma_ex;
        p.gamma_in = 0.02 * gamma_ex;
        let g = 0.77 * (gamma_ex + p.gamma_in);
        p.big_gamma = decay_from_coupling(g, p.fsr);
        p
    }

    /// Copy with every rate divided by Ω, so that Ω = 1.
    pub fn normalized(&self) -> Self {
        let s = 1.0 / self.omega0;
        PhysicalParams {
            omega0: 1.0,
            fsr: self.fsr * s,
            omega_q: self.omega_q * s,
            gamma_qe: self.gamma_qe * s,
            big_gamma: self.big_gamma * s,
            gamma_in: self.gamma_in * s,
            ..self.clone()
        }
    }

    pub fn t1(&self) -> f64 {
        transmission_of(self.kappa1)
    }
    pub fn t2(&self) -> f64 {
        transmission_of(self.kappa2)
    }
    pub fn t_in(&self) -> f64 {
        transmission_of(self.kappa_in)
    }
    pub fn t_out(&self) -> f64 {
        transmission_of(self.kappa_out)
    }

    /// Cell holding the scatterer, defaulting to the middle cell ⌈N/2⌉.
    pub fn scatterer_cell_index(&self) -> usize {
        self.scatterer_cell.unwrap_or(self.n_cells.div_ceil(2))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("omega0", self.omega0), ("fsr", self.fsr)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        let nonneg = [
            ("gamma_qe", self.gamma_qe),
            ("Gamma", self.big_gamma),
            ("gamma_in", self.gamma_in),
            ("epsilon", self.epsilon),
        ];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !self.omega_q.is_finite() {
            return Err(Error::invalid("omega_q", "must be finite"));
        }
        let couplers = [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("kappa_in", self.kappa_in),
            ("kappa_out", self.kappa_out),
        ];
        for (name, k) in couplers {
            check_kappa(name, k)?;
        }
        if self.n_cells == 0 {
            return Err(Error::invalid("n_cells", "must be >= 1"));
        }
        if let Some(c) = self.scatterer_cell {
            if c == 0 || c > self.n_cells {
                return Err(Error::invalid(
                    "scatterer_cell",
                    format!("must lie in 1..={}, got {c}", self.n_cells),
                ));
            }
        }
        if let (Some(n), Some(r)) = (self.n_eff, self.radius) {
            if !(n > 0.0 && r > 0.0) {
                return Err(Error::invalid("n_eff/radius", "must be > 0"));
            }
        }
        Ok(())
    }

    /// Checks a given FSR against ring geometry. Only meaningful when the
    /// parameters carry physical units (Ω not normalized).
    pub fn check_geometry(&self) -> Result<()> {
        if let (Some(n), Some(r)) = (self.n_eff, self.radius) {
            let geo = fsr_from_geometry(n, r);
            let rel = (self.fsr - geo).abs() / geo;
            if rel > FSR_GEOMETRY_TOLERANCE {
                return Err(Error::invalid(
                    "fsr",
                    format!(
                        "given FSR {:.6e} rad/s differs from geometry value {:.6e} rad/s by {:.2}% (> 1%)",
                        self.fsr,
                        geo,
                        100.0 * rel
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn derive_tight_binding(&self) -> Result<TightBindingParams> {
        derive_tight_binding(self)
    }

    pub fn derived_losses(&self) -> Result<DerivedLosses> {
        derived_losses(self)
    }

    pub fn scatterer_coupling(&self) -> f64 {
        scatterer_coupling(self)
    }
}

fn check_kappa(name: &str, k: Complex64) -> Result<()> {
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::invalid(name, "must be finite"));
    }
    if k.re.abs() > 1e-12 * k.norm().max(1e-300) {
        return Err(Error::invalid(name, format!("must be purely imaginary, got {k}")));
    }
    if k.norm() >= 1.0 {
        return Err(Error::invalid(name, format!("|kappa| must be < 1, got {}", k.norm())));
    }
    if k.norm() == 0.0 {
        return Err(Error::invalid(name, "must be nonzero"));
    }
    Ok(())
}

/// g = √(2Γ𝓕), J_i = Im(κ_i)·𝓕.
pub fn derive_tight_binding(p: &PhysicalParams) -> Result<TightBindingParams> {
    if p.big_gamma < 0.0 || p.fsr <= 0.0 {
        return Err(Error::invalid("Gamma/fsr", "must be non-negative / positive"));
    }
    for (name, k) in [("kappa1", p.kappa1), ("kappa2", p.kappa2)] {
        if k.im < 0.0 {
            return Err(Error::invalid(
                name,
                format!("negative Im(kappa) = {} breaks the coupling-sign convention", k.im),
            ));
        }
    }
    Ok(TightBindingParams {
        g: (2.0 * p.big_gamma * p.fsr).sqrt(),
        j1: p.kappa1.im * p.fsr,
        j2: p.kappa2.im * p.fsr,
        omega0: p.omega0,
        omega_q: p.omega_q,
        gamma_qe: p.gamma_qe,
        n_cells: p.n_cells,
    })
}

/// γ_ex = −ln(t_in)·𝓕, γ_tol = γ_ex + γ_in, α = 1 − 2γ_in/𝓕 clamped to [0, 1].
pub fn derived_losses(p: &PhysicalParams) -> Result<DerivedLosses> {
    let k = p.kappa_in.norm();
    if !(k < 1.0) {
        return Err(Error::invalid("kappa_in", format!("|kappa_in| must be < 1, got {k}")));
    }
    let gamma_ex = -transmission_of(p.kappa_in).ln() * p.fsr;
    Ok(DerivedLosses {
        gamma_ex,
        gamma_tol: gamma_ex + p.gamma_in,
        alpha: (1.0 - 2.0 * p.gamma_in / p.fsr).clamp(0.0, 1.0),
    })
}

/// h = ε·𝓕.
pub fn scatterer_coupling(p: &PhysicalParams) -> f64 {
    p.epsilon * p.fsr
}

impl TightBindingParams {
    /// Largest coupling, used as the natural energy scale.
    pub fn scale(&self) -> f64 {
        self.g.max(self.j1).max(self.j2)
    }

    /// Inverse map onto a parameter set with the given FSR:
    /// κ = iJ/𝓕, Γ = g²/(2𝓕).
    pub fn to_physical(&self, base: &PhysicalParams) -> PhysicalParams {
        PhysicalParams {
            omega0: self.omega0,
            omega_q: self.omega_q,
            gamma_qe: self.gamma_qe,
            n_cells: self.n_cells,
            big_gamma: decay_from_coupling(self.g, base.fsr),
            kappa1: kappa_from_coupling(self.j1, base.fsr),
            kappa2: kappa_from_coupling(self.j2, base.fsr),
            ..base.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_couplings_in_units_of_omega() {
        let p = PhysicalParams::lossless_reference();
        let tb = p.derive_tight_binding().unwrap();
        assert!((tb.g / p.omega0 - 3.038e-4).abs() < 1e-6);
        assert!((tb.j1 / p.omega0 - 3.077e-4).abs() < 1e-6);
        assert!(((tb.g / p.omega0) / 3e-4 - 1.0).abs() < 0.02);
        assert!(((tb.j1 / p.omega0) / 3e-4 - 1.0).abs() < 0.03);
    }

    #[test]
    fn external_loss_of_reference_coupler() {
        let p = PhysicalParams::lossless_reference();
        let l = p.derived_losses().unwrap();
        let ghz = l.gamma_ex / hz(1e9);
        assert!((ghz - 19.4).abs() < 0.1, "gamma_ex/2pi = {ghz} GHz");
        assert_eq!(l.alpha, 1.0);
        let q = PhysicalParams::implementation();
        let lq = q.derived_losses().unwrap();
        assert!((lq.gamma_tol / hz(1e9) - 19.8).abs() < 0.1);
        assert!(lq.alpha < 1.0 && lq.alpha > 0.99);
    }

    #[test]
    fn decoupled_emitter() {
        let mut p = PhysicalParams::lossless_reference();
        p.big_gamma = 0.0;
        let tb = p.derive_tight_binding().unwrap();
        assert_eq!(tb.g, 0.0);
        assert_eq!(tb.j2, p.kappa2.im * p.fsr);
    }

    #[test]
    fn scatterer_strengths() {
        let mut p = PhysicalParams::lossless_reference();
        assert_eq!(p.scatterer_coupling(), 0.0);
        p.epsilon = 0.01;
        assert!((p.scatterer_coupling() / hz(1e9) - 6.0).abs() < 1e-9);
        let q = PhysicalParams::implementation();
        let eps = 50.0 * q.gamma_in / q.fsr;
        assert!((eps - 0.0323).abs() < 5e-4, "eps = {eps}");
        assert_eq!(p.scatterer_cell_index(), 5);
    }

    #[test]
    fn negative_coupling_sign_rejected() {
        let mut p = PhysicalParams::lossless_reference();
        p.kappa1 = Complex64::new(0.0, -0.1);
        assert!(matches!(
            p.derive_tight_binding(),
            Err(Error::InvalidParameter { ref field, .. }) if field == "kappa1"
        ));
    }

    #[test]
    fn geometry_consistency() {
        let mut p = PhysicalParams::lossless_reference();
        p.check_geometry().unwrap();
        p.radius = Some(45e-6);
        assert!(p.check_geometry().is_err());
    }

    #[test]
    fn validation_rejects_real_kappa() {
        let mut p = PhysicalParams::lossless_reference();
        p.kappa_in = Complex64::new(0.25, 0.0);
        assert!(p.validate().is_err());
        p.kappa_in = Complex64::new(0.0, 1.0);
        assert!(p.validate().is_err());
    }
}
