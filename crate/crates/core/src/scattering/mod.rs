//! Transfer-matrix transport through the resonator chain: emitter phase,
//! propagation and coupling blocks, Bloch dispersion of both supermodes,
//! 4-port transmission, and the backscattering 4×4 chain.

mod dispersion;
mod ports;
mod qe;
mod scatterer;
mod spectrum;
mod transfer;

pub use dispersion::{bloch_phase, dispersion_backward, dispersion_forward, half_ring_phase, is_propagating, ForwardDispersion};
pub use ports::{four_port_map, FourPortMap};
pub use qe::{qe_transmission, qe_transmission_detuned, QePhase};
pub use scatterer::{
    scatterer_block, scatterer_chain_transfer, scatterer_chain_transfer_detuned, scatterer_four_port_map, scatterer_port_map,
    scatterer_s_matrix, section_port_map, Section, C4,
};
pub use spectrum::{peak_indices, port_map, transfer_bands, transmission_spectrum, DispersionPoint, TransmissionSpectrum};
pub use transfer::{
    chain_product, chain_transfer, chain_transfer_detuned, coupling, input_coupling, output_coupling, port_transmissions,
    port_transmissions_with_det,
    propagation_a, propagation_b, BlockKind, CellBlocks, Device, TransferBlock, TransferProduct, C2, NORM_GUARD,
};
