use num_complex::Complex64;

/// θ(ω) = (ω−Ω)/(2𝓕), gauged so that θ(Ω) = 0. Not reduced modulo π.
pub fn half_ring_phase(omega: f64, omega0: f64, fsr: f64) -> f64 {
    (omega - omega0) / (2.0 * fsr)
}

/// cos(2KΛ) = [cos 2θ − t₁t₂]/(κ₁κ₂) for the emitter-free supermode.
pub fn dispersion_backward(theta: f64, t1: f64, t2: f64, kappa1: Complex64, kappa2: Complex64) -> Complex64 {
    (Complex64::new((2.0 * theta).cos() - t1 * t2, 0.0)) / (kappa1 * kappa2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardDispersion {
    /// cos(2KΛ − φ/2).
    pub rhs: Complex64,
    /// Both principal solutions 2KΛ = φ/2 ± arccos(rhs).
    pub two_k: [Complex64; 2],
    pub propagating: bool,
}

/// cos(2KΛ − φ/2) = [cos(2θ+φ/2) − t₁t₂cos(φ/2)]/(κ₁κ₂).
pub fn dispersion_forward(
    theta: f64,
    phi: Complex64,
    t1: f64,
    t2: f64,
    kappa1: Complex64,
    kappa2: Complex64,
) -> ForwardDispersion {
    let half = phi / 2.0;
    let rhs = ((2.0 * theta + half).cos() - t1 * t2 * half.cos()) / (kappa1 * kappa2);
    let a = rhs.acos();
    ForwardDispersion {
        rhs,
        two_k: [half + a, half - a],
        propagating: phi.im.abs() <= 1e-12 && is_propagating(rhs),
    }
}

/// Real Bloch phase exists: rhs real and within [−1, 1].
pub fn is_propagating(rhs: Complex64) -> bool {
    rhs.im.abs() <= 1e-12 * (1.0 + rhs.re.abs()) && rhs.re.abs() <= 1.0 + 1e-12
}

/// Principal Bloch phase 2KΛ ∈ [0, π] of a propagating rhs.
pub fn bloch_phase(rhs: Complex64) -> Option<f64> {
    is_propagating(rhs).then(|| rhs.re.clamp(-1.0, 1.0).acos())
}
