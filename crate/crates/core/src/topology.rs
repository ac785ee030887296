//! The topological formula `k1 − χ = V_s + V_l/2 + Deg(g) − W∞` and its
//! Riemann–Hurwitz decomposition.

use crate::complex::C64;
use crate::domain::WeierstrassData;
use crate::integrator::{gauss_legendre, PeriodLattice};
use crate::singularity::{EndReport, SingularityReport};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("V_l = {0} is odd")]
    OddVl(i64),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiemannHurwitz {
    pub chi_lhs: i64,
    pub chi_rhs: i64,
    pub b_s: i64,
    pub b_l: i64,
    pub b_inf: i64,
    /// Euler characteristic of the compactified base (sphere or torus).
    pub chi_base: i64,
    pub deg_h: i64,
    /// `Deg(h)` was obtained numerically (rank two).
    pub deg_h_approximate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub xi0: i64,
    pub k1: i64,
    pub k2: i64,
    pub r: i64,
    pub rank: i64,
    pub chi: i64,
    pub v_s: i64,
    pub v_l: i64,
    pub deg_g: i64,
    pub w_infinity: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub formula_holds: bool,
    pub double_genus: i64,
    /// Genus of the double counted from its branch points.
    pub double_genus_from_branch_points: i64,
    pub double_genus_consistent: bool,
    pub rh_lhs: i64,
    pub rh_rhs: i64,
    pub rh_holds: bool,
    pub riemann_hurwitz: RiemannHurwitz,
}

fn check_inputs(sing: &SingularityReport, ends: &EndReport, rank: i64) -> Result<(), TopologyError> {
    if sing.v_l % 2 != 0 {
        return Err(TopologyError::OddVl(sing.v_l));
    }
    if ends.rank as i64 != rank {
        return Err(TopologyError::RankMismatch(format!("declared rank {rank}, end census computed for rank {}", ends.rank)));
    }
    if rank == 2 && !ends.ends.is_empty() {
        return Err(TopologyError::RankMismatch("a compact quotient has no ends".into()));
    }
    Ok(())
}

/// `χ(ℳ̄) = χ_base·Deg(h) − (B_s + B_l + B_∞)`. For rank two `deg_h` must be
/// supplied (see [`covering_degree`]); otherwise it follows from the ends.
pub fn riemann_hurwitz_decompose(
    sing: &SingularityReport,
    ends: &EndReport,
    xi0: i64,
    rank: i64,
    deg_h: Option<i64>,
) -> Result<RiemannHurwitz, TopologyError> {
    check_inputs(sing, ends, rank)?;
    let k1 = sing.k1() as i64;
    let b_s = sing.v_s;
    let b_l = sing.deg_g + sing.v_l / 2 - k1;
    let (b_inf, chi_base) = if rank < 2 { (ends.ends.iter().map(|e| e.multiplicity - 1).sum(), 2) } else { (0, 0) };
    let (deg_h, approx) = match rank {
        0 => (ends.ends.iter().map(|e| e.multiplicity).sum(), false),
        1 => (ends.ends.iter().filter(|e| e.signature == Some(1)).map(|e| e.multiplicity).sum(), false),
        _ => (deg_h.unwrap_or(0), true),
    };
    Ok(RiemannHurwitz {
        chi_lhs: 2 - 2 * xi0,
        chi_rhs: chi_base * deg_h - (b_s + b_l + b_inf),
        b_s,
        b_l,
        b_inf,
        chi_base,
        deg_h,
        deg_h_approximate: approx,
    })
}

/// Evaluates both sides of the formula as exact integers.
pub fn check_formula(
    sing: &SingularityReport,
    ends: &EndReport,
    xi0: i64,
    rank: i64,
    deg_h: Option<i64>,
    branch_points: Option<usize>,
) -> Result<TopologyReport, TopologyError> {
    check_inputs(sing, ends, rank)?;
    let k1 = sing.k1() as i64;
    let chi = 2 - 2 * xi0;
    let lhs = k1 - chi;
    let rhs = sing.v_s + sing.v_l / 2 + sing.deg_g - ends.w_infinity;
    let rh = riemann_hurwitz_decompose(sing, ends, xi0, rank, deg_h)?;
    let double_genus = 2 * xi0 + k1 - 1;
    // A two-sheeted cover of the sphere with b branch points has genus b/2 − 1;
    // the double of a disk is the sphere.
    let from_bp = branch_points.map_or(0, |b| b as i64 / 2 - 1);
    Ok(TopologyReport {
        xi0,
        k1,
        k2: sing.k2() as i64,
        r: ends.ends.len() as i64,
        rank,
        chi,
        v_s: sing.v_s,
        v_l: sing.v_l,
        deg_g: sing.deg_g,
        w_infinity: ends.w_infinity,
        lhs,
        rhs,
        formula_holds: lhs == rhs,
        double_genus,
        double_genus_from_branch_points: from_bp,
        double_genus_consistent: from_bp == double_genus,
        rh_lhs: rh.chi_lhs,
        rh_rhs: rh.chi_rhs,
        rh_holds: rh.chi_lhs == rh.chi_rhs,
        riemann_hurwitz: rh,
    })
}

/// Number of branch points of the double (including `∞`), if hyperelliptic.
pub fn branch_point_count(data: &WeierstrassData) -> Option<usize> {
    data.is_hyperelliptic()
        .then(|| data.domain.branch_points.len() + usize::from(data.domain.branch_at_infinity))
}

/// Degree of the projection `(x1, x2)` of a compact quotient onto the flat
/// torus spanned by the lattice, as projected area over cell area. The
/// Jacobian of `(Re ∫φ1, Re ∫φ2)` is `Im(φ1 φ̄2)`; it is integrated over the
/// disk on both sheets with a Gauss product rule in polar coordinates.
/// Returns the raw ratio.
pub fn covering_degree(data: &WeierstrassData, lattice: &PeriodLattice) -> Option<f64> {
    if lattice.rank() != 2 {
        return None;
    }
    let (a, b) = (lattice.basis[0], lattice.basis[1]);
    let cell = (a.x * b.y - a.y * b.x).abs();
    if cell == 0.0 {
        return None;
    }
    let (x, w) = gauss_legendre(16);
    let (nr, nt) = (48usize, 96usize);
    let mut area = 0.0f64;
    for i in 0..nr {
        let (r0, r1) = (i as f64 / nr as f64, (i + 1) as f64 / nr as f64);
        for (xr, wr) in x.iter().zip(&w) {
            let r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * xr;
            let jr = 0.5 * (r1 - r0) * wr;
            for j in 0..nt {
                let (t0, t1) = (std::f64::consts::TAU * j as f64 / nt as f64, std::f64::consts::TAU * (j + 1) as f64 / nt as f64);
                for (xt, wt) in x.iter().zip(&w) {
                    let t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * xt;
                    let z = C64::from_polar(r, t);
                    let jac = |wv: C64| {
                        let phi = data.phi_unchecked(z, wv);
                        (phi[0] * phi[1].conj()).im
                    };
                    let val = if data.is_hyperelliptic() {
                        let s = data.domain.rhs_at(z).sqrt();
                        jac(s) + jac(-s)
                    } else {
                        jac(C64::new(1.0, 0.0))
                    };
                    if val.is_finite() {
                        area += val * r * jr * 0.5 * (t1 - t0) * wt;
                    }
                }
            }
        }
    }
    Some(area.abs() / cell)
}
