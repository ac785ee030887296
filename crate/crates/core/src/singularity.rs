//! Census of singular points and ends: lightlike circles (degree of `g`,
//! zeros of `φ3`, conelike test), spacelike zeros of `Φ`, and pole orders,
//! multiplicities and signatures at the ends.

use crate::complex::{c, nearest_sqrt, ExtComplex, C64};
use crate::domain::{DomainError, RationalFn, SurfacePoint, WeierstrassData};
use crate::integrator::{clearance, residue_numeric, residue_period, IntegrationError, PeriodLattice};
use crate::lorentz::Vec3;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// `|g|` must be within this of `1` on a boundary circle.
pub const TAU_G: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SingularityError {
    #[error("|g| deviates from 1 by {deviation:.3e} on circle {circle}")]
    NotUnitModulus { circle: usize, deviation: f64 },
    #[error("winding number did not stabilise ({what})")]
    WindingUnstable { what: String },
    #[error("zeros or poles of φ3 lie too close to circle {circle} to isolate it")]
    AnnulusContaminated { circle: usize },
    #[error("ω has a pole of order {order} at end {end}; Scherk-type ends need simple poles")]
    NonSimpleScherkPole { end: usize, order: i64 },
    #[error("residues at the ends do not balance (defect {defect:.3e})")]
    ResidueImbalance { defect: f64 },
    #[error("end {end} has non-integral lattice coordinate {coordinate}")]
    NonIntegralMultiplicity { end: usize, coordinate: f64 },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

/// Which count is reported as the branching number at a lightlike point:
/// `n/2 + m` or the local-multiplicity variant `n/2 + m − 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchingConvention {
    #[default]
    Shifted,
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Upward,
    Downward,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightlikeSingularity {
    pub circle: usize,
    pub m_q: i64,
    pub n_q: i64,
    pub branching_number: i64,
    pub conelike: bool,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacelikeSingularity {
    pub location: C64,
    pub sheet: Option<C64>,
    pub n_j: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub lightlike: Vec<LightlikeSingularity>,
    pub spacelike: Vec<SpacelikeSingularity>,
    pub v_s: i64,
    pub v_l: i64,
    /// `Σ m_q`.
    pub deg_g: i64,
    pub convention: BranchingConvention,
}

impl SingularityReport {
    pub fn k1(&self) -> usize {
        self.lightlike.len()
    }

    pub fn k2(&self) -> usize {
        self.spacelike.len()
    }

    pub fn all_conelike(&self) -> bool {
        self.lightlike.iter().all(|l| l.conelike)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndInfo {
    pub location: SurfacePoint,
    /// Pole order of `Φ`.
    pub pole_order: i64,
    /// Pole order of `ω = φ3/g`.
    pub omega_pole_order: i64,
    pub multiplicity: i64,
    /// Rank one only.
    pub signature: Option<i64>,
    pub scherk: bool,
    /// `Re(2πi Res)`: the real period of a small loop around the end.
    pub residue_period: Vec3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndReport {
    pub rank: u8,
    pub ends: Vec<EndInfo>,
    pub w_infinity: i64,
    /// `Σ ε_j w_j` (rank one).
    pub signature_sum: Option<i64>,
    /// `|Σ Re(2πi Res)|`.
    pub residue_defect: f64,
}

/// Winding number about `0` of the closed curve `t ↦ f(t)`, `t ∈ [0, 1]`.
/// Sampling is doubled until three consecutive counts agree.
pub fn winding_number(f: &dyn Fn(f64) -> C64, what: &str) -> Result<i64, SingularityError> {
    let unstable = || SingularityError::WindingUnstable { what: what.to_string() };
    let mut history: Vec<f64> = vec![];
    let mut n = 64usize;
    while n <= 1 << 18 {
        let mut total = 0.0;
        let mut prev = f(0.0);
        let mut coarse = false;
        for k in 1..=n {
            let cur = f(k as f64 / n as f64);
            if cur.norm() == 0.0 || !cur.is_finite() {
                return Err(unstable());
            }
            let d = (cur / prev).arg();
            coarse |= d.abs() > 0.5 * std::f64::consts::PI;
            total += d;
            prev = cur;
        }
        let wn = total / TAU;
        history.push(if coarse { f64::NAN } else { wn });
        if let [.., a, b, c3] = history[..] {
            if (a - b).abs() <= 0.01 && (b - c3).abs() <= 0.01 && (c3 - c3.round()).abs() <= 0.01 {
                return Ok(c3.round() as i64);
            }
        }
        n *= 2;
    }
    Err(unstable())
}

fn circle_turns(data: &WeierstrassData, circle: usize) -> Result<u32, SingularityError> {
    data.domain
        .circles
        .get(circle)
        .map(|c0| c0.turns)
        .ok_or_else(|| DomainError::InvalidInput(format!("no boundary circle {circle}")).into())
}

/// Degree of `g` restricted to a boundary circle.
pub fn degree_on_circle(data: &WeierstrassData, circle: usize) -> Result<i64, SingularityError> {
    let turns = circle_turns(data, circle)?;
    let mut dev = 0.0f64;
    for k in 0..256 {
        let z = C64::from_polar(1.0, TAU * k as f64 / 256.0);
        dev = dev.max((data.gauss(z).norm() - 1.0).abs());
    }
    if dev > TAU_G {
        return Err(SingularityError::NotUnitModulus { circle, deviation: dev });
    }
    // g depends on z only, so each turn of the lift contributes equally.
    let wn = winding_number(&|t| data.gauss(C64::from_polar(1.0, TAU * t)), "g on the unit circle")?;
    Ok(wn * turns as i64)
}

/// Zeros of `φ3` on a boundary circle, by the argument principle on a thin
/// annulus around `|z| = 1` that contains no other zeros or poles.
pub fn zero_count_on_circle(data: &WeierstrassData, circle: usize) -> Result<i64, SingularityError> {
    let turns = circle_turns(data, circle)?;
    let q = &data.forms[2];
    let mut gap = f64::INFINITY;
    for d in q.divisor()? {
        let lr = d.at.norm().ln().abs();
        if lr <= 1e-9 {
            if d.order < 0 {
                return Err(DomainError::PoleHit { at: d.at, distance: 0.0 }.into());
            }
            continue;
        }
        gap = gap.min(lr);
    }
    if gap < 1e-4 {
        return Err(SingularityError::AnnulusContaminated { circle });
    }
    let rho = (-(0.5 * gap).min(0.1)).exp();
    let outer = winding_number(&|t| q.eval(C64::from_polar(1.0 / rho, TAU * t)), "φ3 on the outer circle")?;
    let inner = winding_number(&|t| q.eval(C64::from_polar(rho, TAU * t)), "φ3 on the inner circle")?;
    // w has no zeros or poles on the circle.
    Ok((outer - inner) * turns as i64)
}

/// Samples `(z, w)` along the lift of a boundary circle.
fn circle_samples(data: &WeierstrassData, circle: usize, n: usize) -> Result<Vec<(C64, C64)>, SingularityError> {
    let c0 = data
        .domain
        .circles
        .get(circle)
        .ok_or_else(|| DomainError::InvalidInput(format!("no boundary circle {circle}")))?;
    let total = n * c0.turns as usize;
    let mut w = c0.w_at_one.unwrap_or(c(1.0, 0.0));
    let mut out = Vec::with_capacity(total);
    for k in 0..total {
        let z = C64::from_polar(1.0, TAU * k as f64 / n as f64);
        if data.is_hyperelliptic() {
            w = nearest_sqrt(data.domain.rhs_at(z), w);
        }
        out.push((z, w));
    }
    Ok(out)
}

/// Conelike iff `m = 1` and `n = 0`. The orientation is the sign of the
/// averaged `x3`-component of the inward radial derivative of `X`.
pub fn conelike_test(data: &WeierstrassData, circle: usize) -> Result<(bool, Orientation), SingularityError> {
    let m = degree_on_circle(data, circle)?;
    let n = zero_count_on_circle(data, circle)?;
    let samples = circle_samples(data, circle, 512)?;
    let avg: f64 = samples.iter().map(|&(z, w)| -(data.phi_unchecked(z, w)[2] * z).re).sum::<f64>() / samples.len() as f64;
    let orientation = if avg >= 0.0 { Orientation::Upward } else { Orientation::Downward };
    Ok((m == 1 && n == 0, orientation))
}

/// Order of `f(z)·w^p·dz` at a point of the curve (or of the plane), in a
/// local parameter: `z − z0`, `1/z`, or `t` with `t² = z − z0` at branch points.
pub fn form_order(data: &WeierstrassData, f: &RationalFn, at: ExtComplex) -> Result<i64, DomainError> {
    let p = if data.is_hyperelliptic() { data.phi3.w_power as i64 } else { 0 };
    let rhs = data.domain.curve_rhs.as_ref();
    let (of, k) = match at {
        ExtComplex::Finite(z0) => (f.order_at(z0)?, rhs.map(|r| r.order_at(z0)).transpose()?.unwrap_or(0)),
        ExtComplex::Infinity => (f.order_at_infinity() - 2, rhs.map(|r| r.order_at_infinity()).unwrap_or(0)),
    };
    Ok(if k % 2 != 0 { 2 * of + p * k + 1 } else { of + p * k / 2 })
}

/// Vanishing order of `Φ` (minimum over components; negative at poles).
pub fn phi_order(data: &WeierstrassData, at: ExtComplex) -> Result<i64, DomainError> {
    let mut m = i64::MAX;
    for f in &data.forms {
        if !f.is_zero() {
            m = m.min(form_order(data, f, at)?);
        }
    }
    Ok(m)
}

/// Common zeros of `(φ1, φ2, φ3)` inside the open fundamental piece.
pub fn spacelike_census(data: &WeierstrassData) -> Result<Vec<SpacelikeSingularity>, SingularityError> {
    let mut cand: Vec<C64> = vec![];
    let mut push = |z: C64| {
        if z.norm() < 1.0 - 1e-9 && !cand.iter().any(|x| (x - z).norm() <= 1e-8) {
            cand.push(z);
        }
    };
    for f in &data.forms {
        if f.is_zero() {
            continue;
        }
        for d in f.divisor()? {
            if d.order > 0 {
                push(d.at);
            }
        }
    }
    if let Some(r) = &data.domain.curve_rhs {
        for d in r.divisor()? {
            push(d.at);
        }
    }
    let ends: Vec<C64> = data.domain.ends.iter().filter_map(|e| e.z_finite()).collect();
    let mut out = vec![];
    for z in cand {
        if ends.iter().any(|e| (e - z).norm() <= 1e-8) {
            continue;
        }
        let n = phi_order(data, ExtComplex::Finite(z))?;
        if n <= 0 {
            continue;
        }
        if data.is_hyperelliptic() && !data.domain.is_branch_point(z) {
            let w = data.domain.rhs_at(z).sqrt();
            out.push(SpacelikeSingularity { location: z, sheet: Some(w), n_j: n });
            out.push(SpacelikeSingularity { location: z, sheet: Some(-w), n_j: n });
        } else {
            let sheet = data.is_hyperelliptic().then(|| c(0.0, 0.0));
            out.push(SpacelikeSingularity { location: z, sheet, n_j: n });
        }
    }
    Ok(out)
}

/// Full census of singular points.
pub fn singularity_census(data: &WeierstrassData, convention: BranchingConvention) -> Result<SingularityReport, SingularityError> {
    let mut lightlike = vec![];
    for c0 in &data.domain.circles {
        let m = degree_on_circle(data, c0.id)?;
        let n = zero_count_on_circle(data, c0.id)?;
        let (conelike, orientation) = conelike_test(data, c0.id)?;
        let branching_number = match convention {
            BranchingConvention::AsPrinted => n / 2 + m,
            BranchingConvention::Shifted => n / 2 + m - 1,
        };
        lightlike.push(LightlikeSingularity { circle: c0.id, m_q: m, n_q: n, branching_number, conelike, orientation });
    }
    let spacelike = spacelike_census(data)?;
    Ok(SingularityReport {
        v_s: spacelike.iter().map(|s| s.n_j).sum(),
        v_l: lightlike.iter().map(|l| l.n_q).sum(),
        deg_g: lightlike.iter().map(|l| l.m_q).sum(),
        lightlike,
        spacelike,
        convention,
    })
}

/// Pole orders, multiplicities and signatures at the ends. Rank one needs the
/// period lattice: an end's loop period is `ε_j w_j` times its generator.
pub fn end_census(data: &WeierstrassData, lattice: Option<&PeriodLattice>, tol: f64) -> Result<EndReport, SingularityError> {
    let rank = data.domain.rank;
    let sing = data.singular_points();
    let mut ends = vec![];
    for (j, e) in data.domain.ends.iter().enumerate() {
        let pole_order = -phi_order(data, e.z)?;
        let omega_pole_order = -form_order(data, &data.omega, e.z)?;
        let z = e.z_finite().ok_or_else(|| DomainError::InvalidInput("ends must be finite".into()))?;
        let res = residue_numeric(data, e, 0.5 * clearance(z, &sing), tol)?;
        let rp = residue_period(&res);
        let (multiplicity, signature) = match rank {
            1 => {
                if omega_pole_order != 1 {
                    return Err(SingularityError::NonSimpleScherkPole { end: j, order: omega_pole_order });
                }
                let v = lattice
                    .and_then(|l| l.basis.first())
                    .ok_or_else(|| SingularityError::RankMismatch("rank one needs a lattice generator".into()))?;
                let k = rp.dot(v) / v.norm_squared();
                let off = (rp - v * k).norm() / v.norm();
                if (k - k.round()).abs() > 1e-6 * k.abs().max(1.0) || off > 1e-6 || k.round() == 0.0 {
                    return Err(SingularityError::NonIntegralMultiplicity { end: j, coordinate: k });
                }
                (k.round().abs() as i64, Some(k.round().signum() as i64))
            }
            _ => (pole_order - 1, None),
        };
        ends.push(EndInfo {
            location: *e,
            pole_order,
            omega_pole_order,
            multiplicity,
            signature,
            scherk: rank == 1 && multiplicity == 1,
            residue_period: rp,
        });
    }
    let w_infinity: i64 = ends.iter().map(|e| e.pole_order).sum();
    let by_rank = match rank {
        0 => ends.iter().map(|e| e.multiplicity + 1).sum(),
        1 => ends.len() as i64,
        _ => 0,
    };
    if w_infinity != by_rank {
        return Err(SingularityError::RankMismatch(format!("W∞ = {w_infinity} but the rank-{rank} rule gives {by_rank}")));
    }
    let defect = ends.iter().fold(Vec3::zeros(), |acc, e| acc + e.residue_period).norm();
    let scale = ends.iter().map(|e| e.residue_period.norm()).fold(1.0f64, f64::max);
    if defect > 1e-8 * scale {
        return Err(SingularityError::ResidueImbalance { defect });
    }
    let signature_sum = (rank == 1).then(|| ends.iter().map(|e| e.signature.unwrap_or(0) * e.multiplicity).sum());
    Ok(EndReport { rank, ends, w_infinity, signature_sum, residue_defect: defect })
}
