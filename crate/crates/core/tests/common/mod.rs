//! Test-only oracles, written independently of the library code paths.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Cyclic complex Jacobi for Hermitian matrices. Returns ascending
/// eigenvalues and the matching eigenvector columns.
pub fn jacobi_eigh(h: &DMatrix<C>) -> (Vec<f64>, DMatrix<C>) {
    let n = h.nrows();
    let mut a = h.clone();
    let mut v = DMatrix::<C>::identity(n, n);
    let scale = h.norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                if b.norm() <= 1e-300 {
                    continue;
                }
                let phase = b / b.norm();
                let theta = 0.5 * (2.0 * b.norm()).atan2(a[(p, p)].re - a[(q, q)].re);
                let (cs, sn) = (theta.cos(), theta.sin());
                // columns of the 2×2 rotation: (c, e^{-iφ}s), (−e^{iφ}s, c)
                let u_pp = c(cs, 0.0);
                let u_qp = phase.conj() * sn;
                let u_pq = -phase * sn;
                let u_qq = c(cs, 0.0);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let vals = idx.iter().map(|&i| a[(i, i)].re).collect();
    let mut vecs = DMatrix::<C>::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vecs.set_column(k, &v.column(i));
    }
    (vals, vecs)
}

/// [(z − H)⁻¹]_{site, site} by dense LU.
pub fn resolvent_element(h: &DMatrix<C>, z: C, site: usize) -> C {
    let n = h.nrows();
    let m = DMatrix::<C>::identity(n, n) * z - h;
    let mut e = nalgebra::DVector::<C>::zeros(n);
    e[site] = c(1.0, 0.0);
    let x = m.lu().solve(&e).expect("nonsingular resolvent");
    x[site]
}

fn sym(n: usize, bonds: &[(usize, usize, f64)]) -> DMatrix<C> {
    let mut h = DMatrix::<C>::zeros(n, n);
    for &(i, j, v) in bonds {
        h[(i, j)] = c(v, 0.0);
        h[(j, i)] = c(v, 0.0);
    }
    h
}

/// Linear trimer QE₁–A₁–B₁–QE₂–A₂–B₂–… with bonds g, J₁, J₂ (site 0 = QE₁).
pub fn linear_trimer(g: f64, j1: f64, j2: f64, n: usize) -> DMatrix<C> {
    let mut bonds = Vec::new();
    for j in 0..n {
        let q = 3 * j;
        bonds.push((q, q + 1, g));
        bonds.push((q + 1, q + 2, j1));
        if j + 1 < n {
            bonds.push((q + 2, q + 3, j2));
        }
    }
    sym(3 * n, &bonds)
}

/// L-type chain with basis (A_j, QE_j, B_j); the last site is B_N.
pub fn l_chain(g: f64, j1: f64, j2: f64, n: usize) -> DMatrix<C> {
    let mut bonds = Vec::new();
    for j in 0..n {
        let a = 3 * j;
        bonds.push((a, a + 1, g));
        bonds.push((a, a + 2, j1));
        if j + 1 < n {
            bonds.push((a + 2, a + 3, j2));
        }
    }
    sym(3 * n, &bonds)
}

/// SSH chain A₁B₁A₂B₂… with bonds J₁ (intra), J₂ (inter).
pub fn ssh_chain(j1: f64, j2: f64, n: usize) -> DMatrix<C> {
    let mut bonds = Vec::new();
    for j in 0..n {
        bonds.push((2 * j, 2 * j + 1, j1));
        if j + 1 < n {
            bonds.push((2 * j + 1, 2 * j + 2, j2));
        }
    }
    sym(2 * n, &bonds)
}

type M2 = [[C; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut r = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

/// Plain-array transfer product for the two-port supermode problem,
/// returning (through, drop). `phi` is the emitter phase on the A leg.
#[allow(clippy::too_many_arguments)]
pub fn oracle_two_port(theta: f64, phi: C, alpha: f64, k1: f64, k2: f64, kin: f64, kout: f64, n: usize) -> (f64, f64) {
    let cpl = |k: f64| -> M2 {
        let t = (1.0 - k * k).sqrt();
        let kk = c(0.0, k);
        [[c(1.0, 0.0) / kk, c(-t, 0.0) / kk], [c(t, 0.0) / kk, c(-1.0, 0.0) / kk]]
    };
    let inp = |k: f64| -> M2 {
        let t = (1.0 - k * k).sqrt();
        let kk = c(0.0, k);
        [[c(-t, 0.0) / kk, c(1.0, 0.0) / kk], [c(-1.0, 0.0) / kk, c(t, 0.0) / kk]]
    };
    let i = c(0.0, 1.0);
    let pa: M2 = [[alpha * (-i * theta).exp(), c(0.0, 0.0)], [c(0.0, 0.0), alpha * (i * (phi + theta)).exp()]];
    let pb: M2 = [[alpha * (-i * theta).exp(), c(0.0, 0.0)], [c(0.0, 0.0), alpha * (i * theta).exp()]];
    let mut m = inp(kin);
    for cell in 1..=n {
        let last = if cell == n { cpl(kout) } else { cpl(k2) };
        m = mul(&pa, &m);
        m = mul(&cpl(k1), &m);
        m = mul(&pb, &m);
        m = mul(&last, &m);
    }
    let through = (m[0][0] / m[0][1]).norm_sqr();
    let drop = (m[1][0] - m[0][0] * m[1][1] / m[0][1]).norm_sqr();
    (through, drop)
}

/// Collects pass/fail lines for one acceptance criterion.
pub struct Criterion {
    id: &'static str,
    lines: Vec<(Option<bool>, String)>,
}

impl Criterion {
    pub fn new(id: &'static str) -> Self {
        Criterion { id, lines: Vec::new() }
    }

    pub fn check(&mut self, pass: bool, what: impl Into<String>) -> bool {
        self.lines.push((Some(pass), what.into()));
        pass
    }

    /// Informational line, never fails.
    pub fn note(&mut self, what: impl Into<String>) {
        self.lines.push((None, what.into()));
    }

    /// Prints one summary line plus details and panics if anything failed.
    pub fn finish(self) {
        let ok = self.lines.iter().all(|(p, _)| *p != Some(false));
        println!("[{}] {}", if ok { "PASS" } else { "FAIL" }, self.id);
        for (p, l) in &self.lines {
            let tag = match p {
                Some(true) => "ok  ",
                Some(false) => "FAIL",
                None => "info",
            };
            println!("    {tag} {l}");
        }
        assert!(ok, "acceptance criterion failed: {}", self.id);
    }
}
