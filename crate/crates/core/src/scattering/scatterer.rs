//! Both supermodes co-propagated with 4×4 matrices acting on (a, b, c, d):
//! (a, b) is the forward supermode, (c, d) the backward one. A point
//! scatterer in the middle of one B ring couples a and d.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::ports::FourPortMap;
use super::transfer::{guard, propagation_b, CellBlocks, Device, C2};
use crate::error::{Error, Result};
use crate::lattice::Supermode;

pub type C4 = Matrix4<Complex64>;

fn block_diag(x: &C2, y: &C2) -> C4 {
    let mut m = C4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(x);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(y);
    m
}

/// Flux-preserving scatterer with t_s = cos ε, r_s = i sin ε:
/// [[1/t_s, 0, 0, −r_s/t_s], [0, 1, 0, 0], [0, 0, 1, 0], [r_s/t_s, 0, 0, 1/t_s]].
pub fn scatterer_block(epsilon: f64) -> C4 {
    let ts = Complex64::new(epsilon.cos(), 0.0);
    let rs = Complex64::new(0.0, epsilon.sin());
    let one = Complex64::new(1.0, 0.0);
    let mut m = C4::identity();
    m[(0, 0)] = one / ts;
    m[(0, 3)] = -rs / ts;
    m[(3, 0)] = rs / ts;
    m[(3, 3)] = one / ts;
    m
}

/// Total 4×4 transfer at detuning δ, scatterer in `device.scatterer_cell`.
pub fn scatterer_chain_transfer_detuned(device: &Device, delta: f64) -> Result<C4> {
    check_cell(device)?;
    let f: CellBlocks = device.blocks(delta, Supermode::Forward)?;
    let theta = device.theta(delta);
    let half_b = propagation_b(theta / 2.0, device.alpha.sqrt());

    let p1 = block_diag(&f.coup1, &f.coup1);
    let p2 = block_diag(&f.coup2, &f.coup2);
    let q1 = block_diag(&f.prop_a, &f.prop_b);
    let q2 = block_diag(&f.prop_b, &f.prop_b);
    let q2h = block_diag(&half_b, &half_b);
    let q_mid = q2h * scatterer_block(device.epsilon) * q2h;
    let p_in = block_diag(&f.input, &f.input);
    let p_out = block_diag(&f.output, &f.output);

    let mut m = p_in;
    for j in 1..=device.n_cells {
        let qb = if j == device.scatterer_cell { &q_mid } else { &q2 };
        let next = if j < device.n_cells { &p2 } else { &p_out };
        m = next * qb * p1 * q1 * m;
        guard(m.norm(), "scatterer_chain_transfer")?;
    }
    Ok(m)
}

pub fn scatterer_chain_transfer(device: &Device, omega: f64) -> Result<C4> {
    scatterer_chain_transfer_detuned(device, omega - device.omega0)
}

/// Resolves the boundary amplitudes of a total transfer matrix for each
/// single-port drive.
/// Inputs: a₀→1, c₀→2, a_{N+1}→3, c_{N+1}→4.
/// Outputs: b₀→2, d₀→1, b_{N+1}→4, d_{N+1}→3.
/// Loses accuracy once the two supermodes grow at different rates; the
/// device route goes through [`scatterer_s_matrix`] instead.
pub fn scatterer_port_map(m: &C4) -> Result<FourPortMap> {
    let mut a = C4::zeros();
    a.set_column(0, &m.column(1));
    a.set_column(1, &m.column(3));
    a[(1, 2)] = Complex64::new(-1.0, 0.0);
    a[(3, 3)] = Complex64::new(-1.0, 0.0);
    let lu = a.lu();
    let mut out = FourPortMap::default();
    // (port, left side?, component)
    let drives = [(1usize, true, 0usize), (2, true, 2), (3, false, 0), (4, false, 2)];
    for (port, left, idx) in drives {
        let rhs: Vector4<Complex64> = if left {
            -m.column(idx).into_owned()
        } else {
            let mut v = Vector4::zeros();
            v[idx] = Complex64::new(1.0, 0.0);
            v
        };
        let s = lu.solve(&rhs).ok_or_else(|| singular("scatterer_port_map"))?;
        let row = &mut out.t[port - 1];
        row[1] = s[0].norm_sqr();
        row[0] = s[1].norm_sqr();
        row[3] = s[2].norm_sqr();
        row[2] = s[3].norm_sqr();
    }
    Ok(out)
}

fn singular(operation: &'static str) -> Error {
    Error::Numerical {
        module: "scattering",
        operation,
        detail: "singular boundary system".into(),
    }
}

/// Scattering matrix of a section, [l_left; r_right] = S [r_left; l_right],
/// with r the right-moving and l the left-moving pair at each interface.
#[derive(Debug, Clone, Copy)]
pub struct Section {
    pub s11: C2,
    pub s12: C2,
    pub s21: C2,
    pub s22: C2,
}

// Interior interfaces carry (b, d) rightwards; the bus side of the input
// coupler carries (a, c) rightwards.
const INTERIOR: ([usize; 2], [usize; 2]) = ([1, 3], [0, 2]);
const BUS_LEFT: ([usize; 2], [usize; 2]) = ([0, 2], [1, 3]);

fn sub(t: &C4, rows: [usize; 2], cols: [usize; 2]) -> C2 {
    C2::from_fn(|i, j| t[(rows[i], cols[j])])
}

fn invert(m: &C2, operation: &'static str) -> Result<C2> {
    m.try_inverse().ok_or_else(|| singular(operation))
}

impl Section {
    pub fn identity() -> Self {
        Section { s11: C2::zeros(), s12: C2::identity(), s21: C2::identity(), s22: C2::zeros() }
    }

    fn from_transfer(t: &C4, left: ([usize; 2], [usize; 2]), right: ([usize; 2], [usize; 2])) -> Result<Self> {
        let (lr, ll) = left;
        let (rr, rl) = right;
        let t_rr = sub(t, rr, lr);
        let t_rl = sub(t, rr, ll);
        let t_lr = sub(t, rl, lr);
        let inv = invert(&sub(t, rl, ll), "scatterer_s_matrix")?;
        Ok(Section { s11: -inv * t_lr, s12: inv, s21: t_rr - t_rl * inv * t_lr, s22: t_rl * inv })
    }

    /// Redheffer star product: `self` on the left, `next` on the right.
    pub fn then(&self, next: &Section) -> Result<Self> {
        let one = C2::identity();
        let u = invert(&(one - next.s11 * self.s22), "scatterer_s_matrix")?;
        let v = invert(&(one - self.s22 * next.s11), "scatterer_s_matrix")?;
        Ok(Section {
            s11: self.s11 + self.s12 * u * next.s11 * self.s21,
            s12: self.s12 * u * next.s12,
            s21: next.s21 * v * self.s21,
            s22: next.s22 + next.s21 * v * self.s22 * next.s12,
        })
    }
}

/// Whole-device scattering matrix at detuning δ, composed element by element.
pub fn scatterer_s_matrix(device: &Device, delta: f64) -> Result<Section> {
    check_cell(device)?;
    let f: CellBlocks = device.blocks(delta, Supermode::Forward)?;
    let theta = device.theta(delta);
    let half_b = propagation_b(theta / 2.0, device.alpha.sqrt());
    let interior = |t: C4| Section::from_transfer(&t, INTERIOR, INTERIOR);

    let p1 = interior(block_diag(&f.coup1, &f.coup1))?;
    let p2 = interior(block_diag(&f.coup2, &f.coup2))?;
    let q1 = interior(block_diag(&f.prop_a, &f.prop_b))?;
    let q2 = interior(block_diag(&f.prop_b, &f.prop_b))?;
    let q2h = interior(block_diag(&half_b, &half_b))?;
    let q_mid = q2h.then(&interior(scatterer_block(device.epsilon))?)?.then(&q2h)?;
    let p_out = interior(block_diag(&f.output, &f.output))?;
    let mut s = Section::from_transfer(&block_diag(&f.input, &f.input), BUS_LEFT, INTERIOR)?;

    let unit = q1.then(&p1)?;
    for j in 1..=device.n_cells {
        let qb = if j == device.scatterer_cell { &q_mid } else { &q2 };
        let next = if j < device.n_cells { &p2 } else { &p_out };
        s = s.then(&unit)?.then(qb)?.then(next)?;
    }
    Ok(s)
}

/// Port map from a whole-device scattering matrix. Incoming pairs are
/// (a₀, c₀) = ports (1, 2) and (a_{N+1}, c_{N+1}) = ports (3, 4); outgoing
/// (b₀, d₀) = ports (2, 1) and (b_{N+1}, d_{N+1}) = ports (4, 3).
pub fn section_port_map(s: &Section) -> FourPortMap {
    let input_port = [1usize, 2, 3, 4];
    let output_port = [2usize, 1, 4, 3];
    let mut out = FourPortMap::default();
    for col in 0..4 {
        for row in 0..4 {
            let block = match (row < 2, col < 2) {
                (true, true) => &s.s11,
                (true, false) => &s.s12,
                (false, true) => &s.s21,
                (false, false) => &s.s22,
            };
            let amp = block[(row % 2, col % 2)];
            out.t[input_port[col] - 1][output_port[row] - 1] = amp.norm_sqr();
        }
    }
    out
}

fn check_cell(device: &Device) -> Result<()> {
    if device.scatterer_cell == 0 || device.scatterer_cell > device.n_cells {
        return Err(Error::invalid(
            "scatterer_cell",
            format!("must lie in 1..={}", device.n_cells),
        ));
    }
    Ok(())
}

pub fn scatterer_four_port_map(device: &Device, delta: f64) -> Result<FourPortMap> {
    Ok(section_port_map(&scatterer_s_matrix(device, delta)?))
}
