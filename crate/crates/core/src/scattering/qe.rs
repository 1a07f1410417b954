use num_complex::Complex64;

use crate::error::{Error, Result};

/// Emitter transmission t_qe = e^{iφ}, φ = φ₁ + iφ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QePhase {
    pub t_qe: Complex64,
    pub phi: Complex64,
}

impl QePhase {
    pub const TRANSPARENT: QePhase = QePhase {
        t_qe: Complex64::new(1.0, 0.0),
        phi: Complex64::new(0.0, 0.0),
    };
}

/// t_qe = (ω−ω_q + i(γ−Γ)) / (ω−ω_q + i(γ+Γ)), φ = −i·ln t_qe (principal branch).
/// At critical coupling t_qe = 0 and Im φ is +∞.
pub fn qe_transmission(omega: f64, omega_q: f64, gamma: f64, big_gamma: f64) -> Result<QePhase> {
    qe_transmission_detuned(omega - omega_q, gamma, big_gamma)
}

pub fn qe_transmission_detuned(delta: f64, gamma: f64, big_gamma: f64) -> Result<QePhase> {
    if !(gamma + big_gamma > 0.0) {
        return Err(Error::InvalidQe);
    }
    let t_qe = Complex64::new(delta, gamma - big_gamma) / Complex64::new(delta, gamma + big_gamma);
    // φ = arg t − i ln|t|, with arg in (−π, π]
    let mut arg = t_qe.arg();
    if arg <= -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    let phi = Complex64::new(arg, -t_qe.norm().ln());
    Ok(QePhase { t_qe, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn on_resonance_lossless() {
        let q = qe_transmission(5.0, 5.0, 0.0, 0.3).unwrap();
        assert!((q.t_qe + 1.0).norm() < 1e-15);
        assert!((q.phi.re - PI).abs() < 1e-15 && q.phi.im.abs() < 1e-15);
    }

    #[test]
    fn one_linewidth_detuned() {
        let q = qe_transmission(1.3, 1.0, 0.0, 0.3).unwrap();
        assert!((q.t_qe - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((q.phi.re + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn critical_coupling_absorbs() {
        let q = qe_transmission(1.0, 1.0, 0.2, 0.2).unwrap();
        assert_eq!(q.t_qe.norm(), 0.0);
    }

    #[test]
    fn undefined_without_decay() {
        assert!(matches!(qe_transmission(1.0, 1.0, 0.0, 0.0), Err(Error::InvalidQe)));
    }

    #[test]
    fn phase_reconstructs_transmission() {
        for &(d, g, gg) in &[(0.1, 0.01, 0.2), (-2.0, 0.3, 0.1), (0.0, 0.05, 0.5)] {
            let q = qe_transmission_detuned(d, g, gg).unwrap();
            assert!(((Complex64::i() * q.phi).exp() - q.t_qe).norm() < 1e-14);
            assert!(q.t_qe.norm() <= 1.0);
        }
    }
}
