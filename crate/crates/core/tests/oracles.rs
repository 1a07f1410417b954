mod common;

use std::f64::consts::PI;

use chirow::greens::{self, Couplings, Recursion};
use chirow::lattice::{self, Supermode};
use chirow::scattering::{four_port_map, Device};
use chirow::{linspace, PhysicalParams, TightBindingParams};
use common::{c, jacobi_eigh, l_chain, linear_trimer, oracle_two_port, resolvent_element, ssh_chain};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tb(g: f64, j1: f64, j2: f64, n: usize) -> TightBindingParams {
    TightBindingParams { g, j1, j2, omega0: 1.0, omega_q: 1.0, gamma_qe: 0.0, n_cells: n }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn finite_spectra_match_independent_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let (g, j1, j2) = (rng.random_range(0.0..2.0), rng.random_range(0.1..2.0), rng.random_range(0.1..2.0));
        let n = rng.random_range(1..=12);
        let t = tb(g, j1, j2, n);
        for (mode, oracle) in [(Supermode::Forward, l_chain(g, j1, j2, n)), (Supermode::Backward, ssh_chain(j1, j2, n))] {
            let s = lattice::diagonalize(&lattice::finite_hamiltonian(&t, mode)).unwrap();
            let (want, _) = jacobi_eigh(&oracle);
            let d = max_diff(&sorted(s.eigenvalues.clone()), &sorted(want));
            assert!(d < 1e-10, "{mode:?} g={g} j1={j1} j2={j2} n={n}: {d:e}");
        }
    }
}

#[test]
fn eigenvectors_have_small_residuals() {
    let t = tb(0.7, 1.3, 0.4, 9);
    let chain = lattice::finite_hamiltonian(&t, Supermode::Forward);
    let s = lattice::diagonalize(&chain).unwrap();
    for (i, &e) in s.eigenvalues.iter().enumerate() {
        let v = s.eigenvectors.column(i);
        let r = &chain.matrix * v - v * Complex64::new(e, 0.0);
        assert!(r.norm() < 1e-10, "state {i}: {:e}", r.norm());
        let w: f64 = s.site_weights[i].iter().sum();
        assert!((w - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bloch_bands_match_closed_form() {
    let (g, j1, j2) = (0.6, 1.1, 1.7);
    let t = tb(g, j1, j2, 1);
    let ks = linspace(-PI, PI, 73);
    let back = lattice::band_structure(&t, Supermode::Backward, &ks, Default::default()).unwrap();
    let fwd = lattice::band_structure(&t, Supermode::Forward, &ks, Default::default()).unwrap();
    for (b, f) in back.iter().zip(&fwd) {
        let fk = (Complex64::new(j1, 0.0) + j2 * Complex64::from_polar(1.0, -b.k)).norm();
        assert!(max_diff(&sorted(b.energies.clone()), &[-fk, fk]) < 1e-12);
        let e = (g * g + fk * fk).sqrt();
        assert!(max_diff(&sorted(f.energies.clone()), &[-e, 0.0, e]) < 1e-12);
    }
}

#[test]
fn converged_boundary_matches_long_chain_resolvent() {
    // with η = 0.2 a 100-cell chain is indistinguishable from the semi-infinite one
    let (g, j1, j2) = (0.5, 1.0, 2.0);
    let cp = Couplings::new(g, j1, j2);
    let n = 100;
    let hl = linear_trimer(g, j1, j2, n);
    let hr = l_chain(g, j1, j2, n);
    for w in [-3.7, -1.9, -0.8, -0.2, 0.3, 1.1, 2.4, 4.2] {
        let z = c(w, 0.2);
        let left = greens::physical_fixed_point(Recursion::Left, z, &cp).unwrap();
        let exact = resolvent_element(&hl, z, 0);
        assert!((left - exact).norm() < 1e-8 * exact.norm().max(1.0), "left ω={w}: {left} vs {exact}");
        let right = greens::physical_fixed_point(Recursion::Right, z, &cp).unwrap();
        let exact = resolvent_element(&hr, z, 3 * n - 1);
        assert!((right - exact).norm() < 1e-8 * exact.norm().max(1.0), "right ω={w}: {right} vs {exact}");
    }
}

#[test]
fn right_cubic_root_satisfies_its_polynomial() {
    let cp = Couplings::new(0.4, 0.9, 1.3);
    for w in [-2.5, -1.0, -0.3, 0.35, 1.2, 2.8] {
        let z = c(w, 1e-3);
        let x = greens::physical_fixed_point(Recursion::RightCubic, z, &cp).unwrap();
        let [a, b, cc, d] = greens::right_cubic_coefficients(z, &cp);
        let p = ((a * x + b) * x + cc) * x + d;
        let scale = a.norm() * x.norm().powi(3) + b.norm() * x.norm_sqr() + cc.norm() * x.norm() + d.norm();
        assert!(p.norm() < 1e-10 * scale, "ω={w}: residual {:e}", p.norm() / scale);
        let fx = greens::right_recursion_step(x, z, &cp).unwrap();
        assert!((fx - x).norm() < 1e-9 * x.norm().max(1e-3), "ω={w}: not a fixed point");
    }
}

#[test]
fn two_port_transmissions_match_plain_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let base = PhysicalParams::lossless_reference().normalized();
    for _ in 0..200 {
        let mut p = base.clone();
        p.kappa1 = c(0.0, rng.random_range(0.05..0.4));
        p.kappa2 = c(0.0, rng.random_range(0.05..0.4));
        p.kappa_in = c(0.0, rng.random_range(0.1..0.5));
        p.kappa_out = c(0.0, rng.random_range(0.1..0.5));
        p.n_cells = rng.random_range(1..=8);
        p.big_gamma = rng.random_range(0.0..3e-5);
        p.gamma_qe = rng.random_range(0.0..1e-6);
        p.gamma_in = rng.random_range(0.0..1e-6);
        let d = Device::new(&p).unwrap();
        let delta = rng.random_range(-1e-3..1e-3);
        let theta = d.theta(delta);
        let phi = d.qe_phase(delta).unwrap().phi;
        let k = |x: Complex64| x.im;
        let args = (k(p.kappa1), k(p.kappa2), k(p.kappa_in), k(p.kappa_out), p.n_cells);
        let (f_thru, f_drop) = oracle_two_port(theta, phi, d.alpha, args.0, args.1, args.2, args.3, args.4);
        let (b_thru, b_drop) = oracle_two_port(theta, c(0.0, 0.0), d.alpha, args.0, args.1, args.2, args.3, args.4);
        let t = four_port_map(&d, delta).unwrap();
        for (got, want) in [(t.get(1, 2), f_thru), (t.get(1, 4), f_drop), (t.get(2, 1), b_thru), (t.get(2, 3), b_drop)] {
            assert!((got - want).abs() < 1e-9 * want.max(1.0), "{got} vs {want}");
        }
    }
}
