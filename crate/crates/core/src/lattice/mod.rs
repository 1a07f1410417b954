//! Bloch-space and finite open-chain Hamiltonians for both supermodes.
//!
//! Energies are measured from Ω (rotating frame). The forward supermode
//! carries the emitter, giving the three-site cell (A, QE, B); the backward
//! supermode is the bare two-site SSH chain (A, B).

mod bloch;
mod chain;
mod classify;

pub use bloch::{band_structure, bloch_hamiltonian, Band, BlochHamiltonian};
pub use chain::{diagonalize, finite_hamiltonian, CellProbability, FiniteChain, Site, SpectrumResult};
pub use classify::{classify_edge_states, gap_bounds, symmetrized_pair, EdgeFlag, GapBounds, EDGE_MASS_THRESHOLD};

use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Supermode {
    /// CW_A−CCW_B, excited from port 1; couples to the emitters.
    Forward,
    /// CCW_A−CW_B, excited from port 2; emitters are dark.
    Backward,
}

impl Supermode {
    pub fn sites_per_cell(self) -> usize {
        match self {
            Supermode::Forward => 3,
            Supermode::Backward => 2,
        }
    }
}

impl fmt::Display for Supermode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Supermode::Forward => "forward",
            Supermode::Backward => "backward",
        })
    }
}

impl std::str::FromStr for Supermode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "forward" => Ok(Supermode::Forward),
            "backward" => Ok(Supermode::Backward),
            other => Err(format!("unknown supermode `{other}` (expected forward|backward)")),
        }
    }
}
