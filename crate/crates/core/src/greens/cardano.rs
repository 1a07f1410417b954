//! Closed-form roots of a complex cubic a x³ + b x² + c x + d.

use num_complex::Complex64;

fn polish(coef: &[Complex64; 4], mut x: Complex64) -> Complex64 {
    let [a, b, c, d] = *coef;
    for _ in 0..3 {
        let p = ((a * x + b) * x + c) * x + d;
        let dp = (3.0 * a * x + 2.0 * b) * x + c;
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

/// All three roots (with multiplicity). When `a` vanishes relative to the
/// other coefficients the cubic degenerates and the missing root is
/// returned as infinity.
pub fn solve_cubic(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 3] {
    let inf = Complex64::new(f64::INFINITY, 0.0);
    let scale = b.norm().max(c.norm()).max(d.norm());
    if a.norm() <= 1e-300 || a.norm() < 1e-15 * scale {
        let [r0, r1] = solve_quadratic(b, c, d);
        return [r0, r1, inf];
    }
    let (b, c, d) = (b / a, c / a, d / a);
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u1 = -q / 2.0 + disc;
    let u2 = -q / 2.0 - disc;
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let shift = b / 3.0;
    let one = Complex64::new(1.0, 0.0);
    let coef = [one, b, c, d];
    let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    if u.norm() == 0.0 {
        // p = q = 0: triple root
        let r = -shift;
        return [r, r, r];
    }
    let cr = u.powf(1.0 / 3.0);
    let mut wk = one;
    for r in out.iter_mut() {
        let ck = cr * wk;
        *r = polish(&coef, ck - p / (3.0 * ck) - shift);
        wk *= w;
    }
    out
}

/// Roots of a x² + b x + c, cancellation-free. Degenerates to the linear
/// root plus infinity when `a` vanishes.
pub fn solve_quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let inf = Complex64::new(f64::INFINITY, 0.0);
    if a.norm() <= 1e-300 || a.norm() < 1e-15 * b.norm().max(c.norm()) {
        if b.norm() == 0.0 {
            return [inf, inf];
        }
        return [-c / b, inf];
    }
    let s = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let qq = if (b.conj() * s).re >= 0.0 { -0.5 * (b + s) } else { -0.5 * (b - s) };
    if qq.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [qq / a, c / qq]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_roots() {
        // (x-1)(x+2)(x-3i)
        let r1 = c(1.0, 0.0);
        let r2 = c(-2.0, 0.0);
        let r3 = c(0.0, 3.0);
        let a = c(2.0, 0.0);
        let b = -a * (r1 + r2 + r3);
        let cc = a * (r1 * r2 + r1 * r3 + r2 * r3);
        let d = -a * r1 * r2 * r3;
        let roots = solve_cubic(a, b, cc, d);
        for r in [r1, r2, r3] {
            assert!(roots.iter().any(|x| (x - r).norm() < 1e-12), "{r} missing in {roots:?}");
        }
    }

    #[test]
    fn triple_root() {
        let roots = solve_cubic(c(1.0, 0.0), c(-3.0, 0.0), c(3.0, 0.0), c(-1.0, 0.0));
        for r in roots {
            assert!((r - c(1.0, 0.0)).norm() < 1e-5);
        }
    }

    #[test]
    fn quadratic_degenerate() {
        let r = solve_cubic(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0));
        assert!(r[..2].iter().any(|x| (x - c(2.0, 0.0)).norm() < 1e-14));
        assert!(r[2].re.is_infinite());
    }
}
