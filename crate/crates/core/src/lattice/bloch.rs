use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Supermode;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::params::TightBindingParams;

#[derive(Debug, Clone)]
pub struct BlochHamiltonian {
    pub k: f64,
    pub supermode: Supermode,
    pub matrix: DMatrix<Complex64>,
}

/// Sorted eigenvalues at one quasimomentum.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub k: f64,
    pub energies: Vec<f64>,
}

/// J₁ + J₂e^{−ik}.
fn dimer_factor(tb: &TightBindingParams, k: f64) -> Complex64 {
    Complex64::new(tb.j1, 0.0) + tb.j2 * Complex64::from_polar(1.0, -k)
}

/// Forward basis (A, QE, B), backward basis (A, B).
pub fn bloch_hamiltonian(tb: &TightBindingParams, k: f64, supermode: Supermode) -> BlochHamiltonian {
    let f = dimer_factor(tb, k);
    let matrix = match supermode {
        Supermode::Forward => {
            let g = Complex64::new(tb.g, 0.0);
            let dq = Complex64::new(tb.omega_q - tb.omega0, 0.0);
            let z = Complex64::new(0.0, 0.0);
            DMatrix::from_row_slice(3, 3, &[z, g, f, g, dq, z, f.conj(), z, z])
        }
        Supermode::Backward => {
            let z = Complex64::new(0.0, 0.0);
            DMatrix::from_row_slice(2, 2, &[z, f, f.conj(), z])
        }
    };
    BlochHamiltonian { k, supermode, matrix }
}

impl BlochHamiltonian {
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.matrix.nrows();
        let eig = self.matrix.clone().try_symmetric_eigen(1e-15, 10_000).ok_or_else(|| {
            Error::Numerical {
                module: "lattice",
                operation: "band_structure",
                detail: format!("Hermitian eigensolver did not converge at k = {}", self.k),
            }
        })?;
        let mut e: Vec<f64> = (0..n).map(|i| eig.eigenvalues[i]).collect();
        e.sort_by(f64::total_cmp);
        Ok(e)
    }
}

pub fn band_structure(
    tb: &TightBindingParams,
    supermode: Supermode,
    k_grid: &[f64],
    exec: Execution,
) -> Result<Vec<Band>> {
    if k_grid.is_empty() {
        return Err(Error::invalid("k_grid", "must be nonempty"));
    }
    if let Some(k) = k_grid.iter().find(|k| !(k.abs() <= std::f64::consts::PI + 1e-12)) {
        return Err(Error::invalid("k_grid", format!("k = {k} outside [-pi, pi]")));
    }
    par::try_map(exec, k_grid, |&k| {
        let energies = bloch_hamiltonian(tb, k, supermode).eigenvalues()?;
        Ok(Band { k, energies })
    })
}
