use super::dispersion::{bloch_phase, dispersion_backward, dispersion_forward};
use super::ports::{four_port_map, FourPortMap};
use super::scatterer::scatterer_four_port_map;
use super::transfer::Device;
use crate::error::Result;
use crate::lattice::Supermode;
use crate::par::{self, Execution};
use crate::params::transmission_of;

#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionSpectrum {
    pub omega0: f64,
    /// ω − Ω at each grid point.
    pub detuning: Vec<f64>,
    pub maps: Vec<FourPortMap>,
    /// Whether the 4×4 scatterer chain produced the maps.
    pub scatterer: bool,
}

impl TransmissionSpectrum {
    pub fn omega_grid(&self) -> Vec<f64> {
        self.detuning.iter().map(|d| self.omega0 + d).collect()
    }

    pub fn len(&self) -> usize {
        self.detuning.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detuning.is_empty()
    }

    /// T_mn over the grid, 1-based ports.
    pub fn series(&self, m: usize, n: usize) -> Vec<f64> {
        self.maps.iter().map(|t| t.get(m, n)).collect()
    }
}

/// 4-port map at one detuning; the scatterer chain is used when ε > 0.
pub fn port_map(device: &Device, delta: f64) -> Result<FourPortMap> {
    if device.epsilon > 0.0 {
        scatterer_four_port_map(device, delta)
    } else {
        four_port_map(device, delta)
    }
}

pub fn transmission_spectrum(device: &Device, detuning: &[f64], exec: Execution) -> Result<TransmissionSpectrum> {
    let maps = par::try_map(exec, detuning, |&d| port_map(device, d))?;
    Ok(TransmissionSpectrum {
        omega0: device.omega0,
        detuning: detuning.to_vec(),
        maps,
        scatterer: device.epsilon > 0.0,
    })
}

/// Strict local maxima above `threshold` (plateaus count once).
pub fn peak_indices(values: &[f64], threshold: f64) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] && values[i] > threshold {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// One propagating point of the transfer-matrix dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub detuning: f64,
    /// Bloch phase in [0, π]; for the forward supermode it is 2KΛ − φ/2.
    pub k: f64,
}

/// Grid points where a real Bloch phase exists.
pub fn transfer_bands(device: &Device, supermode: Supermode, detuning: &[f64]) -> Result<Vec<DispersionPoint>> {
    let (t1, t2) = (transmission_of(device.kappa1), transmission_of(device.kappa2));
    let mut out = Vec::new();
    for &d in detuning {
        let theta = device.theta(d);
        let rhs = match supermode {
            Supermode::Backward => dispersion_backward(theta, t1, t2, device.kappa1, device.kappa2),
            Supermode::Forward => {
                let phi = device.qe_phase(d)?.phi;
                let f = dispersion_forward(theta, phi, t1, t2, device.kappa1, device.kappa2);
                if !f.propagating {
                    continue;
                }
                f.rhs
            }
        };
        if let Some(k) = bloch_phase(rhs) {
            out.push(DispersionPoint { detuning: d, k });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peaks_and_plateaus() {
        let v = [0.0, 0.6, 0.2, 0.7, 0.7, 0.1, 0.4, 0.3, 0.9];
        assert_eq!(peak_indices(&v, 0.5), vec![1, 3]);
        assert_eq!(peak_indices(&v, 0.0), vec![1, 3, 6]);
    }
}
