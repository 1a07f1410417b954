use chirow::cli::export::{config_hash, fmt_f64};
use chirow::lattice::{self, Supermode};
use chirow::scattering::{port_map, Device};
use chirow::{PhysicalParams, TightBindingParams};
use num_complex::Complex64;
use proptest::prelude::*;
use serde_json::json;

fn reference() -> PhysicalParams {
    PhysicalParams::lossless_reference().normalized()
}

fn with(k1: f64, k2: f64, kin: f64, kout: f64, n: usize) -> PhysicalParams {
    let mut p = reference();
    p.kappa1 = Complex64::new(0.0, k1);
    p.kappa2 = Complex64::new(0.0, k2);
    p.kappa_in = Complex64::new(0.0, kin);
    p.kappa_out = Complex64::new(0.0, kout);
    p.n_cells = n;
    p
}

fn tb(g: f64, j1: f64, j2: f64, n: usize) -> TightBindingParams {
    TightBindingParams { g, j1, j2, omega0: 1.0, omega_q: 1.0, gamma_qe: 0.0, n_cells: n }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lossless_rows_conserve_flux(
        k1 in 0.05..0.3f64, k2 in 0.05..0.3f64, kin in 0.1..0.4f64, kout in 0.1..0.4f64,
        n in 1usize..=12, big_gamma in 0.0..4e-5f64, eps in prop_oneof![Just(0.0), 0.0..0.2f64],
        cell in 1usize..=12, delta in -1.5e-3..1.5e-3f64,
    ) {
        let mut p = with(k1, k2, kin, kout, n);
        p.big_gamma = big_gamma;
        p.epsilon = eps;
        p.scatterer_cell = Some(cell.min(n));
        let t = port_map(&Device::new(&p).unwrap(), delta).unwrap();
        for m in 1..=4 {
            prop_assert!((t.row_sum(m) - 1.0).abs() < 1e-8, "row {} sums to {}", m, t.row_sum(m));
        }
    }

    #[test]
    fn lossy_transmissions_stay_physical(
        k1 in 0.05..0.3f64, k2 in 0.05..0.3f64, n in 1usize..=12,
        gamma_in in 0.0..2e-6f64, gamma_qe in 0.0..1e-6f64, delta in -1.5e-3..1.5e-3f64,
    ) {
        let mut p = with(k1, k2, 0.25, 0.25, n);
        p.gamma_in = gamma_in;
        p.gamma_qe = gamma_qe;
        let t = port_map(&Device::new(&p).unwrap(), delta).unwrap();
        for m in 1..=4 {
            prop_assert!(t.t[m - 1].iter().all(|&x| x >= 0.0));
            prop_assert!(t.row_sum(m) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn emitter_free_chain_is_reciprocal(
        k1 in 0.05..0.3f64, k2 in 0.05..0.3f64, kin in 0.1..0.4f64, kout in 0.1..0.4f64,
        n in 1usize..=12, gamma_in in 0.0..2e-6f64, delta in -1.5e-3..1.5e-3f64,
    ) {
        let mut p = with(k1, k2, kin, kout, n);
        p.big_gamma = 0.0;
        p.gamma_in = gamma_in;
        let t = port_map(&Device::new(&p).unwrap(), delta).unwrap();
        prop_assert!(t.reciprocity_error() < 1e-10);
    }

    #[test]
    fn forward_bloch_has_flat_band(g in 0.0..2.0f64, j1 in 0.0..2.0f64, j2 in 0.0..2.0f64, k in -3.2..3.2f64) {
        let e = lattice::bloch_hamiltonian(&tb(g, j1, j2, 1), k, Supermode::Forward).eigenvalues().unwrap();
        let scale = g.max(j1).max(j2).max(1e-300);
        prop_assert!(e.iter().any(|x| x.abs() <= 1e-12 * scale));
    }

    #[test]
    fn finite_spectrum_is_chirally_symmetric(
        g in 0.0..2.0f64, j1 in 0.05..2.0f64, j2 in 0.05..2.0f64, n in 1usize..=10, forward in any::<bool>(),
    ) {
        let mode = if forward { Supermode::Forward } else { Supermode::Backward };
        let s = lattice::diagonalize(&lattice::finite_hamiltonian(&tb(g, j1, j2, n), mode)).unwrap();
        let mut e = s.eigenvalues.clone();
        e.sort_by(f64::total_cmp);
        let k = e.len();
        for i in 0..k {
            prop_assert!((e[i] + e[k - 1 - i]).abs() < 1e-10 * g.max(j1).max(j2));
        }
    }

    #[test]
    fn tight_binding_round_trips_through_physical(
        g in 1e-4..5e-3f64, j1 in 1e-5..9e-4f64, j2 in 1e-5..9e-4f64, n in 1usize..=50,
    ) {
        let base = reference();
        let t = tb(g, j1, j2, n);
        let back = t.to_physical(&base).derive_tight_binding().unwrap();
        for (a, b) in [(back.g, g), (back.j1, j1), (back.j2, j2)] {
            prop_assert!((a - b).abs() <= 1e-12 * b);
        }
        prop_assert_eq!(back.n_cells, n);
    }

    #[test]
    fn floats_serialize_exactly(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn config_hash_depends_on_content(a in -1e3..1e3f64, b in -1e3..1e3f64) {
        prop_assume!(a != b);
        prop_assert_ne!(config_hash(&json!({"x": a})), config_hash(&json!({"x": b})));
        prop_assert_eq!(config_hash(&json!({"x": a, "y": b})), config_hash(&json!({"y": b, "x": a})));
    }
}
