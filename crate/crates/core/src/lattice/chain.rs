use nalgebra::DMatrix;
use num_complex::Complex64;

use super::classify::{self, EdgeFlag, GapBounds};
use super::Supermode;
use crate::error::{Error, Result};
use crate::params::TightBindingParams;

/// Relative spread below which eigenvalues count as exactly degenerate.
const DEGENERACY_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    A(usize),
    Qe(usize),
    B(usize),
}

impl Site {
    pub fn cell(self) -> usize {
        match self {
            Site::A(j) | Site::Qe(j) | Site::B(j) => j,
        }
    }
    pub fn label(self) -> String {
        match self {
            Site::A(j) => format!("A{j}"),
            Site::Qe(j) => format!("QE{j}"),
            Site::B(j) => format!("B{j}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiniteChain {
    pub supermode: Supermode,
    pub sites: Vec<Site>,
    pub matrix: DMatrix<Complex64>,
    pub detunings: Vec<f64>,
    pub params: TightBindingParams,
}

/// Per-cell weight; for the forward supermode `a` includes the emitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellProbability {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub supermode: Supermode,
    pub sites: Vec<Site>,
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, in the order of `eigenvalues`.
    pub eigenvectors: DMatrix<Complex64>,
    /// `site_weights[state][site] = |ψ(site)|²`.
    pub site_weights: Vec<Vec<f64>>,
    pub site_probabilities: Vec<Vec<CellProbability>>,
    pub edge_flags: Vec<EdgeFlag>,
    pub gap: GapBounds,
}

pub fn finite_hamiltonian(tb: &TightBindingParams, supermode: Supermode) -> FiniteChain {
    let n = tb.n_cells;
    let per = supermode.sites_per_cell();
    let dim = per * n;
    let mut sites = Vec::with_capacity(dim);
    for j in 1..=n {
        match supermode {
            Supermode::Forward => sites.extend([Site::A(j), Site::Qe(j), Site::B(j)]),
            Supermode::Backward => sites.extend([Site::A(j), Site::B(j)]),
        }
    }
    let idx = |s: Site| sites.iter().position(|&x| x == s).expect("site exists");
    let mut h = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let mut bond = |a: usize, b: usize, v: f64| {
        h[(a, b)] = Complex64::new(v, 0.0);
        h[(b, a)] = Complex64::new(v, 0.0);
    };
    for j in 1..=n {
        bond(idx(Site::A(j)), idx(Site::B(j)), tb.j1);
        if supermode == Supermode::Forward {
            bond(idx(Site::A(j)), idx(Site::Qe(j)), tb.g);
        }
        if j < n {
            bond(idx(Site::B(j)), idx(Site::A(j + 1)), tb.j2);
        }
    }
    let detunings: Vec<f64> = sites
        .iter()
        .map(|s| match s {
            Site::Qe(_) => tb.omega_q - tb.omega0,
            _ => 0.0,
        })
        .collect();
    for (i, d) in detunings.iter().enumerate() {
        h[(i, i)] = Complex64::new(*d, 0.0);
    }
    FiniteChain { supermode, sites, matrix: h, detunings, params: *tb }
}

impl FiniteChain {
    pub fn dim(&self) -> usize {
        self.sites.len()
    }

    /// Number of distinct nonzero bonds (upper triangle).
    pub fn bond_count(&self) -> usize {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.matrix[(i, j)].norm() > 0.0)
            .count()
    }
}

/// Rotates each column so its largest component is real and positive.
fn fix_phase(v: &mut DMatrix<Complex64>) {
    for mut col in v.column_iter_mut() {
        let (imax, _) = col
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        let p = col[imax];
        if p.norm() > 0.0 {
            let phase = p.conj() / p.norm();
            col.iter_mut().for_each(|z| *z *= phase);
        }
    }
}

fn hermitian_eigen(h: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let eig = h.clone().try_symmetric_eigen(1e-15, 100_000).ok_or_else(|| Error::Numerical {
        module: "lattice",
        operation: "diagonalize",
        detail: "Hermitian eigensolver did not converge".into(),
    })?;
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (new, &old) in order.iter().enumerate() {
        vectors.set_column(new, &eig.eigenvectors.column(old));
    }
    Ok((values, vectors))
}

/// Inside each exactly degenerate cluster, rotate to eigenvectors of the
/// projected B-sublattice weight, sorted by ascending weight.
fn resolve_degenerate(
    values: &[f64],
    vectors: &mut DMatrix<Complex64>,
    sites: &[Site],
    scale: f64,
) -> Result<Vec<Option<f64>>> {
    let n = values.len();
    let mut b_weight = vec![None; n];
    let tol = DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE);
    let weight: Vec<f64> = sites.iter().map(|s| matches!(s, Site::B(_)) as u8 as f64).collect();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[start]).abs() <= tol {
            end += 1;
        }
        let m = end - start;
        if m >= 2 {
            let block = vectors.columns(start, m).into_owned();
            let mut w = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
            for a in 0..m {
                for b in 0..m {
                    w[(a, b)] = (0..sites.len())
                        .map(|s| block[(s, a)].conj() * weight[s] * block[(s, b)])
                        .sum();
                }
            }
            let (wv, u) = hermitian_eigen(&w)?;
            let rotated = &block * u;
            for c in 0..m {
                vectors.set_column(start + c, &rotated.column(c));
                b_weight[start + c] = Some(wv[c]);
            }
        }
        start = end;
    }
    Ok(b_weight)
}

pub fn diagonalize(chain: &FiniteChain) -> Result<SpectrumResult> {
    let h = &chain.matrix;
    let dim = chain.dim();
    if (h - h.adjoint()).norm() > 1e-12 * h.norm().max(1.0) {
        return Err(Error::Numerical {
            module: "lattice",
            operation: "diagonalize",
            detail: "matrix is not Hermitian".into(),
        });
    }
    let (values, mut vectors) = hermitian_eigen(h)?;
    let scale = values.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    fix_phase(&mut vectors);
    let b_weight = resolve_degenerate(&values, &mut vectors, &chain.sites, scale)?;

    for (i, &e) in values.iter().enumerate() {
        let v = vectors.column(i);
        let r = (h * v - v * Complex64::new(e, 0.0)).norm();
        if r > RESIDUAL_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical {
                module: "lattice",
                operation: "diagonalize",
                detail: format!("eigenpair {i} residual {r:e} exceeds bound"),
            });
        }
    }

    let site_weights: Vec<Vec<f64>> = (0..dim)
        .map(|i| vectors.column(i).iter().map(|z| z.norm_sqr()).collect())
        .collect();
    let site_probabilities = site_weights
        .iter()
        .map(|w| cell_probabilities(&chain.sites, w, chain.params.n_cells))
        .collect();

    let gap = classify::gap_bounds(&chain.params, chain.supermode);
    let mut spec = SpectrumResult {
        supermode: chain.supermode,
        sites: chain.sites.clone(),
        eigenvalues: values,
        eigenvectors: vectors,
        site_weights,
        site_probabilities,
        edge_flags: Vec::new(),
        gap,
    };
    let mut flags = classify::classify_edge_states(&spec, gap);
    // States of a degenerate manifold carrying emitter weight belong to the flat band.
    for (f, bw) in flags.iter_mut().zip(&b_weight) {
        if let Some(bw) = bw {
            if *bw < classify::EDGE_MASS_THRESHOLD {
                *f = EdgeFlag::Bulk;
            }
        }
    }
    spec.edge_flags = flags;
    Ok(spec)
}

fn cell_probabilities(sites: &[Site], w: &[f64], n: usize) -> Vec<CellProbability> {
    let mut out = vec![CellProbability { a: 0.0, b: 0.0 }; n];
    for (s, &p) in sites.iter().zip(w) {
        let c = &mut out[s.cell() - 1];
        match s {
            Site::A(_) | Site::Qe(_) => c.a += p,
            Site::B(_) => c.b += p,
        }
    }
    out
}

impl SpectrumResult {
    pub fn in_gap(&self) -> Vec<usize> {
        (0..self.eigenvalues.len()).filter(|&i| self.gap.contains(self.eigenvalues[i])).collect()
    }

    /// Indices of states flagged as left, right or hybridized edge states.
    pub fn edge_states(&self) -> Vec<usize> {
        (0..self.eigenvalues.len()).filter(|&i| self.edge_flags[i] != EdgeFlag::Bulk).collect()
    }

    pub fn state(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i).iter().copied().collect()
    }
}
