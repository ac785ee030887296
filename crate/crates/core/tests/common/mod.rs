//! Independent numerical oracles for the integration tests. None of these
//! reuse the library's root finder, quadrature or sheet tracking.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use std::f64::consts::{PI, TAU};

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Horner evaluation, ascending coefficients.
pub fn horner(coeffs: &[C], z: C) -> C {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
}

/// All roots by Durand–Kerner (Weierstrass) iteration.
pub fn roots(coeffs: &[C]) -> Vec<C> {
    let mut co: Vec<C> = coeffs.to_vec();
    while co.last().is_some_and(|x| x.norm() == 0.0) {
        co.pop();
    }
    let n = co.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    let lead = co[n];
    let monic: Vec<C> = co.iter().map(|&a| a / lead).collect();
    let mut z: Vec<C> = (0..n).map(|k| c(0.4, 0.9).powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// `∮ f(z) dz` over the circle `|z − center| = r` by the trapezoid rule with
/// `n` nodes (geometrically convergent for integrands analytic near the circle).
pub fn contour(f: &dyn Fn(C) -> C, center: C, r: f64, n: usize) -> C {
    let mut s = c(0.0, 0.0);
    for k in 0..n {
        let t = TAU * k as f64 / n as f64;
        let e = C::from_polar(1.0, t);
        s += f(center + e * r) * c(0.0, 1.0) * e * r;
    }
    s * (TAU / n as f64)
}

/// Winding number of `θ ↦ f(θ)` over `[0, 2π]` by summing principal argument
/// increments over `n` steps.
pub fn winding(f: &dyn Fn(f64) -> C, n: usize) -> i64 {
    let mut total = 0.0;
    let mut prev = f(0.0);
    for k in 1..=n {
        let cur = f(TAU * k as f64 / n as f64);
        total += (cur / prev).arg();
        prev = cur;
    }
    (total / TAU).round() as i64
}

/// Pole order (positive) or zero order (negative) of `f` at `p`, read off the
/// scaling `|f(p + ε)| ~ ε^{−k}` at a few radii and directions.
pub fn laurent_order(f: &dyn Fn(C) -> C, p: C) -> i64 {
    let mut ks = vec![];
    for dir in [0.3, 1.7, 4.1] {
        let e = C::from_polar(1.0, dir);
        let (a, b) = (f(p + e * 1e-4).norm(), f(p + e * 5e-5).norm());
        ks.push((a / b).log2());
    }
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    -mean.round() as i64
}

/// Continues `√rhs` along `path` with `steps` equal steps, always taking the
/// root closest to the previous value.
pub fn brute_continue(rhs: &dyn Fn(C) -> C, path: &dyn Fn(f64) -> C, w0: C, steps: usize) -> C {
    let mut w = w0;
    for k in 1..=steps {
        let r = rhs(path(k as f64 / steps as f64)).sqrt();
        w = if (r - w).norm() <= (r + w).norm() { r } else { -r };
    }
    w
}

/// Minkowski product with signature (+, +, −).
pub fn mink(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
}

/// Family 1 closed-form translation.
pub fn scherk_translation(b: f64) -> f64 {
    PI / (2.0 * b * (b * b + 1.0))
}

/// Family 1 residues of `(φ1, φ2, φ3)` at `z = b`, by hand:
/// `φ3 = z/((z² − b²)(b²z² − 1))`, `φ1 = (i/2)(1/z − z)φ3`, `φ2 = −(1/2)(1/z + z)φ3`.
pub fn scherk_residues(b: f64) -> [C; 3] {
    let d = 2.0 * b * (b.powi(4) - 1.0);
    [c(0.0, 0.5 * (1.0 - b * b) / d), c(-0.5 * (1.0 + b * b) / d, 0.0), c(b / d, 0.0)]
}

/// `(φ1, φ2, φ3)` for `g = z` and `φ3 = q dz`.
pub fn phi_of(z: C, q: C) -> [C; 3] {
    [c(0.0, 0.5) * (1.0 / z - z) * q, -0.5 * (1.0 / z + z) * q, q]
}

/// `∫ Φ` along the straight segment from `m` to the branch point `e`, with
/// `t = 1 − (1 − s)²` absorbing the square-root singularity, composite
/// two-point Gauss in `s`, and nearest-root sheet tracking from `w_m`.
pub fn to_branch_point(rhs: &dyn Fn(C) -> C, form: &dyn Fn(C, C) -> [C; 3], m: C, e: C, w_m: C, panels: usize) -> [C; 3] {
    let node = 0.5 / 3f64.sqrt();
    let mut out = [c(0.0, 0.0); 3];
    let mut w = w_m;
    let h = 1.0 / panels as f64;
    for k in 0..panels {
        for x in [0.5 - node, 0.5 + node] {
            let s = (k as f64 + x) * h;
            let t = 1.0 - (1.0 - s) * (1.0 - s);
            let z = m + (e - m) * t;
            let r = rhs(z).sqrt();
            w = if (r - w).norm() <= (r + w).norm() { r } else { -r };
            let f = form(z, w);
            let jac = (e - m) * (2.0 * (1.0 - s)) * (0.5 * h);
            for i in 0..3 {
                out[i] += f[i] * jac;
            }
        }
    }
    out
}

/// Family 3 lattice generators `2 Re ∫_{e}^{e'} Φ` from the midpoint `i/2`:
/// `(a1 → −a1, a1 → a2)`.
pub fn doubly_lattice(a1: f64, a2: f64) -> ([f64; 3], [f64; 3]) {
    let (s1, s2) = (a1 * a1, a2 * a2);
    let rhs = move |z: C| (z * z - s1) * (z * z - s2) / ((z * z * s1 - 1.0) * (z * z * s2 - 1.0));
    let form = move |z: C, w: C| phi_of(z, z / (w * (z * z * s1 - 1.0) * (z * z * s2 - 1.0)));
    let m = c(0.0, 0.5);
    let wm = rhs(m).sqrt();
    let i1 = to_branch_point(&rhs, &form, m, c(a1, 0.0), wm, 20000);
    let i2 = to_branch_point(&rhs, &form, m, c(-a1, 0.0), wm, 20000);
    let i3 = to_branch_point(&rhs, &form, m, c(a2, 0.0), wm, 20000);
    let v = |a: [C; 3], b: [C; 3]| [2.0 * (b[0] - a[0]).re, 2.0 * (b[1] - a[1]).re, 2.0 * (b[2] - a[2]).re];
    (v(i1, i2), v(i1, i3))
}
