//! The lattice of real periods generated by loops around ends and by cycles
//! through pairs of branch points.

use super::path::clearance;
use super::{boundary_loop, integrate_between, loop_around, period, IntegrationError};
use crate::domain::{SurfacePoint, WeierstrassData};
use crate::lorentz::Vec3;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclePeriod {
    pub label: String,
    pub period: Vec3,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodLattice {
    /// Reduced basis; its length is the rank.
    pub basis: Vec<Vec3>,
    /// Periods of the generating cycles.
    pub cycles: Vec<CyclePeriod>,
    /// Periods of the boundary components (expected to vanish).
    pub boundary: Vec<CyclePeriod>,
}

impl PeriodLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether `v` is an integer combination of the basis within `tol`
    /// (relative to the basis scale).
    pub fn contains(&self, v: &Vec3, tol: f64) -> bool {
        let scale = self.basis.iter().map(|b| b.norm()).fold(1.0f64, f64::max);
        if v.norm() <= tol * scale {
            return true;
        }
        let Some(x) = coordinates(&self.basis, v) else { return false };
        let r: Vec3 = self.basis.iter().zip(&x).fold(Vec3::zeros(), |acc, (b, k)| acc + b * k.round());
        (r - v).norm() <= tol * scale
    }

    /// Closest lattice point to `v`.
    pub fn nearest(&self, v: &Vec3) -> Vec3 {
        match coordinates(&self.basis, v) {
            None => Vec3::zeros(),
            Some(x) => {
                // Search the neighbouring integer points; the basis is reduced so this is enough.
                let base: Vec<f64> = x.iter().map(|k| k.floor()).collect();
                let mut best = Vec3::zeros();
                let mut bd = f64::INFINITY;
                let n = self.basis.len();
                for mask in 0..(1u32 << n) {
                    let mut p = Vec3::zeros();
                    for j in 0..n {
                        let k = base[j] + ((mask >> j) & 1) as f64;
                        p += self.basis[j] * k;
                    }
                    let d = (p - v).norm();
                    if d < bd {
                        bd = d;
                        best = p;
                    }
                }
                best
            }
        }
    }
}

/// Least-squares coordinates of `v` in the span of `basis`.
fn coordinates(basis: &[Vec3], v: &Vec3) -> Option<Vec<f64>> {
    match basis.len() {
        0 => None,
        1 => Some(vec![basis[0].dot(v) / basis[0].norm_squared()]),
        2 => {
            let (a, b) = (basis[0], basis[1]);
            let g = nalgebra::Matrix2::new(a.dot(&a), a.dot(&b), a.dot(&b), b.dot(&b));
            let r = nalgebra::Vector2::new(a.dot(v), b.dot(v));
            let x = g.try_inverse()? * r;
            Some(vec![x.x, x.y])
        }
        _ => {
            let m = nalgebra::Matrix3::from_columns(&[basis[0], basis[1], basis[2]]);
            let x = m.try_inverse()? * v;
            Some(vec![x.x, x.y, x.z])
        }
    }
}

/// Basis of the subgroup of `Z^r` spanned by `vs` (integer elimination).
fn integer_basis(mut vs: Vec<Vec<i64>>, r: usize) -> Vec<Vec<i64>> {
    let mut basis = vec![];
    for col in 0..r {
        loop {
            let nz: Vec<usize> = (0..vs.len()).filter(|&i| vs[i][col] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    basis.push(vs.remove(i));
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| vs[i][col].abs()).unwrap();
            let pv = vs[p].clone();
            for &i in &nz {
                if i != p {
                    let q = vs[i][col] / pv[col];
                    for k in 0..r {
                        vs[i][k] -= q * pv[k];
                    }
                }
            }
        }
    }
    basis
}

/// Reduces a generating set of a discrete subgroup of `R³` to a basis.
/// `tol` is relative to the largest generator.
pub fn reduce_lattice(vectors: &[Vec3], tol: f64) -> Result<Vec<Vec3>, IntegrationError> {
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Ok(vec![]);
    }
    let vs: Vec<Vec3> = vectors.iter().copied().filter(|v| v.norm() > tol * scale).collect();
    // Independent directions, largest first for conditioning.
    let mut sorted = vs.clone();
    sorted.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let mut dirs: Vec<Vec3> = vec![];
    let mut ortho: Vec<Vec3> = vec![];
    for v in &sorted {
        let mut r = *v;
        for o in &ortho {
            r -= o * o.dot(&r);
        }
        if r.norm() > 1e3 * tol * scale {
            dirs.push(*v);
            ortho.push(r.normalize());
        }
    }
    let rank = dirs.len();
    if rank == 0 {
        return Ok(vec![]);
    }
    let coords: Vec<Vec<f64>> = vs.iter().map(|v| coordinates(&dirs, v).unwrap()).collect();
    let q = (1..=240)
        .find(|&q| {
            coords.iter().flatten().all(|x| {
                let y = x * q as f64;
                (y - y.round()).abs() <= 1e-6 * q as f64
            })
        })
        .ok_or(IntegrationError::NonDiscreteLattice)?;
    let ints: Vec<Vec<i64>> = coords.iter().map(|x| x.iter().map(|y| (y * q as f64).round() as i64).collect()).collect();
    let ib = integer_basis(ints, rank);
    let mut basis: Vec<Vec3> = ib
        .iter()
        .map(|h| h.iter().zip(&dirs).fold(Vec3::zeros(), |acc, (k, d)| acc + d * (*k as f64 / q as f64)))
        .collect();
    if basis.len() == 2 {
        gauss_reduce(&mut basis);
    }
    for b in basis.iter_mut() {
        let big = b.iter().copied().max_by(|x, y| x.abs().total_cmp(&y.abs())).unwrap();
        if big < 0.0 {
            *b = -*b;
        }
    }
    Ok(basis)
}

/// Lagrange–Gauss reduction of a planar basis.
fn gauss_reduce(b: &mut [Vec3]) {
    for _ in 0..64 {
        if b[1].norm_squared() < b[0].norm_squared() {
            b.swap(0, 1);
        }
        let mu = (b[0].dot(&b[1]) / b[0].norm_squared()).round();
        if mu == 0.0 {
            break;
        }
        b[1] -= b[0] * mu;
    }
}

/// Periods of the generating cycles and the reduced lattice they span.
pub fn period_lattice(data: &WeierstrassData, tol: f64) -> Result<PeriodLattice, IntegrationError> {
    let sing = data.singular_points();
    let mut cycles = vec![];
    for (j, e) in data.domain.ends.iter().enumerate() {
        let z = e.z_finite().unwrap();
        let lp = loop_around(data, e, 0.5 * clearance(z, &sing))?;
        let p = period(data, &lp, tol)?;
        cycles.push(CyclePeriod { label: format!("end[{j}]"), period: p.vector, error: p.error });
    }
    if data.is_hyperelliptic() && data.phi3.w_power == -1 {
        let mut bps = data.domain.interior_branch_points();
        bps.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
        if let Some((&e0, rest)) = bps.split_first() {
            let from = SurfacePoint::on_curve(e0, crate::complex::c(0.0, 0.0));
            for (k, &ek) in rest.iter().enumerate() {
                let to = SurfacePoint::on_curve(ek, crate::complex::c(0.0, 0.0));
                let r = integrate_between(data, &from, &to, tol)?;
                cycles.push(CyclePeriod { label: format!("branch[0,{}]", k + 1), period: r.real() * 2.0, error: 2.0 * r.error });
            }
        }
    }
    let mut boundary = vec![];
    for c0 in &data.domain.circles {
        let lp = boundary_loop(data, c0.id)?;
        let p = period(data, &lp, tol)?;
        boundary.push(CyclePeriod { label: format!("circle[{}]", c0.id), period: p.vector, error: p.error });
    }
    let gens: Vec<Vec3> = cycles.iter().map(|c| c.period).collect();
    let basis = reduce_lattice(&gens, 1e-7)?;
    Ok(PeriodLattice { basis, cycles, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_rank_one() {
        let v = Vec3::new(1.0, 2.0, 0.0);
        let b = reduce_lattice(&[v * 2.0, v * -3.0, v * 4.0], 1e-9).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0] - v).norm() < 1e-12);
    }

    #[test]
    fn reduces_rank_two() {
        let a = Vec3::new(1.0, 0.0, 0.0);
        let b = Vec3::new(0.3, 2.0, 0.0);
        let gens = [a + b, a * 2.0 + b, b * 3.0 - a, a * 5.0];
        let basis = reduce_lattice(&gens, 1e-9).unwrap();
        assert_eq!(basis.len(), 2);
        let det = |u: &Vec3, v: &Vec3| (u.x * v.y - u.y * v.x).abs();
        assert!((det(&basis[0], &basis[1]) - det(&a, &b)).abs() < 1e-10);
        let l = PeriodLattice { basis, cycles: vec![], boundary: vec![] };
        assert!(l.contains(&(a * 7.0 - b * 2.0), 1e-9));
        assert!(!l.contains(&(a * 0.5), 1e-9));
    }

    #[test]
    fn zero_generators() {
        assert!(reduce_lattice(&[Vec3::zeros()], 1e-9).unwrap().is_empty());
    }
}
