use nalgebra::Matrix2;
use num_complex::Complex64;

use super::qe::{qe_transmission_detuned, QePhase};
use crate::error::{Error, Result};
use crate::lattice::Supermode;
use crate::params::{transmission_of, PhysicalParams};

pub type C2 = Matrix2<Complex64>;

/// Products whose norm exceeds this are reported as ill-conditioned.
pub const NORM_GUARD: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    PropA,
    PropB,
    Coup1,
    Coup2,
    In,
    Out,
    Scatterer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferBlock {
    pub kind: BlockKind,
    pub matrix: C2,
}

/// Resolved device: the parameter set reduced to what the transfer matrices
/// consume. Frequencies enter only as detuning δ = ω − Ω.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    pub omega0: f64,
    pub fsr: f64,
    /// ω_q − Ω.
    pub qe_offset: f64,
    pub gamma_qe: f64,
    pub big_gamma: f64,
    pub kappa1: Complex64,
    pub kappa2: Complex64,
    pub kappa_in: Complex64,
    pub kappa_out: Complex64,
    pub alpha: f64,
    pub n_cells: usize,
    pub epsilon: f64,
    pub scatterer_cell: usize,
}

impl Device {
    pub fn new(p: &PhysicalParams) -> Result<Self> {
        p.validate()?;
        let losses = p.derived_losses()?;
        Ok(Device {
            omega0: p.omega0,
            fsr: p.fsr,
            qe_offset: p.omega_q - p.omega0,
            gamma_qe: p.gamma_qe,
            big_gamma: p.big_gamma,
            kappa1: p.kappa1,
            kappa2: p.kappa2,
            kappa_in: p.kappa_in,
            kappa_out: p.kappa_out,
            alpha: losses.alpha,
            n_cells: p.n_cells,
            epsilon: p.epsilon,
            scatterer_cell: p.scatterer_cell_index(),
        })
    }

    pub fn theta(&self, delta: f64) -> f64 {
        delta / (2.0 * self.fsr)
    }

    /// Emitter phase at detuning δ; transparent when Γ = 0.
    pub fn qe_phase(&self, delta: f64) -> Result<QePhase> {
        if self.big_gamma == 0.0 {
            return Ok(QePhase::TRANSPARENT);
        }
        qe_transmission_detuned(delta - self.qe_offset, self.gamma_qe, self.big_gamma)
    }

    pub fn blocks(&self, delta: f64, supermode: Supermode) -> Result<CellBlocks> {
        let theta = self.theta(delta);
        let phi = match supermode {
            Supermode::Forward => self.qe_phase(delta)?.phi,
            Supermode::Backward => Complex64::new(0.0, 0.0),
        };
        Ok(CellBlocks {
            prop_a: propagation_a(theta, phi, self.alpha),
            prop_b: propagation_b(theta, self.alpha),
            coup1: coupling(self.kappa1),
            coup2: coupling(self.kappa2),
            input: input_coupling(self.kappa_in),
            output: output_coupling(self.kappa_out),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellBlocks {
    pub prop_a: C2,
    pub prop_b: C2,
    pub coup1: C2,
    pub coup2: C2,
    pub input: C2,
    pub output: C2,
}

/// (1/κ)[[1, −t], [t, −1]].
pub fn coupling(kappa: Complex64) -> C2 {
    let t = Complex64::new(transmission_of(kappa), 0.0);
    let one = Complex64::new(1.0, 0.0);
    C2::new(one, -t, t, -one) / kappa
}

/// (1/κ_in)[[−t_in, 1], [−1, t_in]].
pub fn input_coupling(kappa: Complex64) -> C2 {
    let t = Complex64::new(transmission_of(kappa), 0.0);
    let one = Complex64::new(1.0, 0.0);
    C2::new(-t, one, -one, t) / kappa
}

pub fn output_coupling(kappa: Complex64) -> C2 {
    coupling(kappa)
}

/// diag(α e^{−iθ}, α e^{i(θ+φ)}).
pub fn propagation_a(theta: f64, phi: Complex64, alpha: f64) -> C2 {
    let i = Complex64::i();
    C2::new(
        alpha * (-i * theta).exp(),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        alpha * (i * (phi + theta)).exp(),
    )
}

/// diag(α e^{−iθ}, α e^{iθ}).
pub fn propagation_b(theta: f64, alpha: f64) -> C2 {
    propagation_a(theta, Complex64::new(0.0, 0.0), alpha)
}

impl TransferBlock {
    pub fn new(kind: BlockKind, matrix: C2) -> Self {
        TransferBlock { kind, matrix }
    }
}

pub(crate) fn guard(norm: f64, operation: &'static str) -> Result<()> {
    if norm.is_finite() && norm <= NORM_GUARD {
        Ok(())
    } else {
        Err(Error::IllConditioned { module: "scattering", operation, norm })
    }
}

/// M = M_out M_pB M_c1 M_pA (M_c2 M_pB M_c1 M_pA)^{N−1} M_in at detuning δ.
pub fn chain_transfer_detuned(device: &Device, delta: f64, supermode: Supermode) -> Result<C2> {
    Ok(chain_product(device, delta, supermode)?.matrix)
}

/// Total transfer matrix together with its determinant, accumulated
/// factor by factor so that it stays accurate when M is large.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferProduct {
    pub matrix: C2,
    pub det: Complex64,
}

pub fn chain_product(device: &Device, delta: f64, supermode: Supermode) -> Result<TransferProduct> {
    let b = device.blocks(delta, supermode)?;
    let head = b.coup1 * b.prop_a;
    let cell = b.coup2 * b.prop_b * head;
    let det_head = b.coup1.determinant() * b.prop_a.determinant();
    let det_cell = b.coup2.determinant() * b.prop_b.determinant() * det_head;
    let mut m = b.input;
    let mut det = b.input.determinant();
    for _ in 1..device.n_cells {
        m = cell * m;
        det *= det_cell;
        guard(m.norm(), "chain_transfer")?;
    }
    let m = b.output * b.prop_b * head * m;
    det *= b.output.determinant() * b.prop_b.determinant() * det_head;
    guard(m.norm(), "chain_transfer")?;
    Ok(TransferProduct { matrix: m, det })
}

pub fn chain_transfer(device: &Device, omega: f64, supermode: Supermode) -> Result<C2> {
    chain_transfer_detuned(device, omega - device.omega0, supermode)
}

/// (|M₁₁/M₁₂|², |M₂₁ − M₁₁M₂₂/M₁₂|²): through and drop transmission.
pub fn port_transmissions(m: &C2) -> Result<(f64, f64)> {
    port_transmissions_with_det(m, m.determinant())
}

/// As [`port_transmissions`], using M₂₁ − M₁₁M₂₂/M₁₂ = −det M / M₁₂ with a
/// separately accumulated determinant.
pub fn port_transmissions_with_det(m: &C2, det: Complex64) -> Result<(f64, f64)> {
    let m12 = m[(0, 1)];
    if m12.norm() < 1e-300 {
        return Err(Error::Pole {
            module: "scattering",
            operation: "port_transmissions",
            omega: Complex64::new(f64::NAN, 0.0),
        });
    }
    let through = (m[(0, 0)] / m12).norm_sqr();
    let drop = (det / m12).norm_sqr();
    Ok((through, drop))
}
