//! Single-photon transport in a chiral quantum-emitter / coupled-resonator
//! optical waveguide.
//!
//! - [`params`]: physical parameter sets and tight-binding conversion
//! - [`lattice`]: Bloch and finite-chain Hamiltonians, spectra, edge states
//! - [`greens`]: recursive boundary Green functions and their fixed points
//! - [`scattering`]: transfer matrices, dispersion and 4-port transmission
//! - [`circulator`]: windows, fidelity, survival, insertion loss, bandwidth
//! - [`cli`]: JSON-configured runs writing CSV/JSON artifacts

pub mod circulator;
pub mod cli;
pub mod error;
pub mod greens;
pub mod lattice;
pub mod par;
pub mod params;
pub mod scattering;

pub use error::{Error, Result};
pub use lattice::Supermode;
pub use par::Execution;
pub use params::{PhysicalParams, TightBindingParams};

/// `n` evenly spaced points on [lo, hi].
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect()
        }
    }
}
