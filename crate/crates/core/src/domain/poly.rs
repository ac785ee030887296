//! Dense complex polynomials.

use super::DomainError;
use crate::complex::{c, C64};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Relative radius within which computed roots are merged into one root of
/// higher multiplicity. Multiple roots are only resolved to about `√ε`, so this
/// is much looser than machine precision.
pub const ROOT_CLUSTER_TOL: f64 = 1e-6;

/// Coefficients in ascending order; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|x| *x == c(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(a: C64) -> Self {
        Self::new(vec![a])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![c(0.0, 0.0), c(1.0, 0.0)])
    }

    /// `Π (z − r)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        roots.iter().fold(Self::constant(c(1.0, 0.0)), |p, &r| &p * &Self::new(vec![-r, c(1.0, 0.0)]))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `Σ |a_k| |z|^k`, the scale for backward-error tests.
    pub fn eval_abs(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    /// Number of vanishing low-order coefficients (order of the root at 0).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|a| **a == c(0.0, 0.0)).count()
    }

    /// Divides by `z^k`, dropping the low coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![c(0.0, 0.0); k];
        v.extend_from_slice(&self.coeffs);
        Self::new(v)
    }

    /// `z^n p(1/z)` for `n ≥ deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut v = vec![c(0.0, 0.0); n + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            v[n - k] = a;
        }
        Self::new(v)
    }

    /// Synthetic division by `z − r`; returns quotient and remainder.
    pub fn deflate(&self, r: C64) -> (Self, C64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::zero(), c(0.0, 0.0));
        }
        let mut q = vec![c(0.0, 0.0); n - 1];
        let mut acc = c(0.0, 0.0);
        for k in (0..n).rev() {
            acc = acc * r + self.coeffs[k];
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        (Self::new(q), acc)
    }

    /// All roots with multiplicity, by Aberth–Ehrlich iteration. Roots at the
    /// origin are taken from the valuation exactly.
    pub fn roots(&self) -> Result<Vec<C64>, DomainError> {
        let Some(deg) = self.degree() else {
            return Err(DomainError::InvalidInput("roots of the zero polynomial".into()));
        };
        let v = self.valuation();
        let mut out = vec![c(0.0, 0.0); v];
        let p = self.shift_down(v);
        let n = deg - v;
        match n {
            0 => {}
            1 => out.push(-p.coeffs[0] / p.coeffs[1]),
            _ => out.extend(aberth(&p)?),
        }
        Ok(out)
    }

    /// Roots merged into `(centre, multiplicity)` clusters.
    pub fn root_clusters(&self) -> Result<Vec<(C64, usize)>, DomainError> {
        Ok(cluster(&self.roots()?, ROOT_CLUSTER_TOL))
    }
}

fn aberth(p: &Poly) -> Result<Vec<C64>, DomainError> {
    let n = p.degree().unwrap();
    let lead = p.leading();
    let a: Vec<C64> = p.coeffs.iter().map(|&x| x / lead).collect();
    let dp = Poly::new(a.iter().enumerate().skip(1).map(|(k, &x)| x * k as f64).collect());
    let pm = Poly::new(a.clone());

    // Start on a circle of the geometric-mean radius around the root centroid.
    let centre = -a[n - 1] / n as f64;
    let radius = a[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<C64> = (0..n)
        .map(|k| centre + C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();

    let mut converged = false;
    for _ in 0..800 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let pz = pm.eval(z[i]);
            if pz == c(0.0, 0.0) {
                continue;
            }
            let ratio = pz / dp.eval(z[i]);
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (c(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if worst <= 1e-15 {
            converged = true;
            break;
        }
    }
    let ok = z.iter().all(|&r| r.is_finite() && pm.eval(r).norm() <= 1e-8 * pm.eval_abs(r).max(1e-300));
    if !ok || (!converged && z.iter().any(|r| !r.is_finite())) {
        return Err(DomainError::RootFindingFailed { degree: n });
    }
    Ok(z)
}

/// Single-linkage clustering of roots; centres are cluster means.
pub fn cluster(roots: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= tol * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<(usize, C64, usize)> = vec![];
    for i in 0..n {
        let r = find(&mut label, i);
        match out.iter_mut().find(|e| e.0 == r) {
            Some(e) => {
                e.1 += roots[i];
                e.2 += 1;
            }
            None => out.push((r, roots[i], 1)),
        }
    }
    let mut out: Vec<(C64, usize)> = out.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect();
    // Exact zeros stay exact.
    for e in &mut out {
        if e.0.norm() <= f64::MIN_POSITIVE {
            e.0 = c(0.0, 0.0);
        }
    }
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or_default() + o.coeffs.get(k).copied().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(c(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![c(0.0, 0.0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}
