use super::transfer::{chain_product, port_transmissions_with_det, Device};
use crate::error::Result;
use crate::lattice::Supermode;

/// `t[m-1][n-1]` is the transmission from input port m to output port n;
/// the diagonal holds reflections.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourPortMap {
    pub t: [[f64; 4]; 4],
}

impl FourPortMap {
    /// T_mn with 1-based ports.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.t[m - 1][n - 1]
    }

    pub fn row_sum(&self, m: usize) -> f64 {
        self.t[m - 1].iter().sum()
    }

    /// Largest |T_mn − T_nm|.
    pub fn reciprocity_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for m in 0..4 {
            for n in 0..4 {
                e = e.max((self.t[m][n] - self.t[n][m]).abs());
            }
        }
        e
    }

    /// Fills the table from the two independent directions using
    /// T₁₂=T₃₄, T₁₄=T₃₂, T₂₃=T₄₁, T₂₁=T₄₃.
    pub fn from_directions(t12: f64, t14: f64, t21: f64, t23: f64) -> Self {
        let mut t = [[0.0; 4]; 4];
        t[0][1] = t12;
        t[0][3] = t14;
        t[1][0] = t21;
        t[1][2] = t23;
        t[2][3] = t12;
        t[2][1] = t14;
        t[3][0] = t23;
        t[3][2] = t21;
        FourPortMap { t }
    }
}

/// Forward input at port 1 → (T₁₂, T₁₄); backward input at port 2 → (T₂₁, T₂₃).
pub fn four_port_map(device: &Device, delta: f64) -> Result<FourPortMap> {
    let f = chain_product(device, delta, Supermode::Forward)?;
    let b = chain_product(device, delta, Supermode::Backward)?;
    let (t12, t14) = port_transmissions_with_det(&f.matrix, f.det)?;
    let (t21, t23) = port_transmissions_with_det(&b.matrix, b.det)?;
    Ok(FourPortMap::from_directions(t12, t14, t21, t23))
}
