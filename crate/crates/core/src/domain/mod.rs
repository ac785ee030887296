//! Riemann-surface domains: the punctured closed unit disk, and a closed disk
//! region of a hyperelliptic curve `w² = R(z)` lying over `|z| ≤ 1`.

pub mod poly;
pub mod rational;
pub mod weierstrass;

pub use poly::Poly;
pub use rational::{Divisor, RationalFn};
pub use weierstrass::{Phi3, WeierstrassData};

use crate::complex::{c, nearest_sqrt, ExtComplex, C64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Points closer than this to a branch point are rejected by sheet continuation.
pub const TAU_BRANCH: f64 = 1e-7;
/// Pole-proximity radius for evaluating the Weierstrass forms.
pub const TAU_POLE: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("root finding did not converge for a degree-{degree} polynomial")]
    RootFindingFailed { degree: usize },
    #[error("point is not on the curve (|w² − R(z)| = {residual:.3e})")]
    OffCurve { residual: f64 },
    #[error("path passes within {distance:.3e} of the branch point {at}")]
    BranchTooClose { at: C64, distance: f64 },
    #[error("point {at} lies within {distance:.3e} of a pole")]
    PoleHit { at: C64, distance: f64 },
    #[error("branch point {at} lies on the unit circle")]
    BranchOnUnitCircle { at: C64 },
    #[error("a sheet value w is required at {0}")]
    MissingSheet(C64),
    #[error("sheet continuation failed near {0}")]
    ContinuationFailed(C64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    PuncturedClosedDisk,
    HyperellipticDisk,
}

/// A point of the domain; `w` is present for hyperelliptic domains.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub z: ExtComplex,
    pub w: Option<ExtComplex>,
}

impl SurfacePoint {
    pub fn plane(z: C64) -> Self {
        Self { z: ExtComplex::Finite(z), w: None }
    }

    pub fn on_curve(z: C64, w: C64) -> Self {
        Self { z: ExtComplex::Finite(z), w: Some(ExtComplex::Finite(w)) }
    }

    pub fn z_finite(&self) -> Option<C64> {
        self.z.finite()
    }

    pub fn w_finite(&self) -> Option<C64> {
        self.w.and_then(|w| w.finite())
    }
}

/// A connected component of the boundary over `|z| = 1`. When `w` has
/// monodromy around the unit circle a single component winds twice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCircle {
    pub id: usize,
    /// Sheet at `z = 1`.
    pub w_at_one: Option<C64>,
    /// Number of times the component covers the unit circle.
    pub turns: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub curve_rhs: Option<RationalFn>,
    /// Genus of the compact surface bounded by the circles.
    pub genus: u32,
    /// Expected rank of the period lattice.
    pub rank: u8,
    pub base: SurfacePoint,
    pub ends: Vec<SurfacePoint>,
    pub circles: Vec<BoundaryCircle>,
    /// Finite branch points of the curve (odd-order zeros and poles of `R`).
    pub branch_points: Vec<C64>,
    pub branch_at_infinity: bool,
    /// `R = c·Π(z − p)^k`; the factored form stays accurate near branch points.
    #[serde(skip)]
    rhs_factors: Option<(C64, Vec<rational::Divisor>)>,
}

/// Requested end, optionally pinned to one sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndSpec {
    pub z: C64,
    pub w: Option<C64>,
}

impl EndSpec {
    pub fn at(z: C64) -> Self {
        Self { z, w: None }
    }
}

fn check_inside(z: C64, what: &str) -> Result<(), DomainError> {
    if !(z.norm() < 1.0 - 1e-12) {
        return Err(DomainError::InvalidInput(format!("{what} {z} is not inside the open unit disk")));
    }
    Ok(())
}

impl DomainSpec {
    pub fn disk(base: C64, ends: &[C64], rank: u8, genus: u32) -> Result<Self, DomainError> {
        check_inside(base, "base point")?;
        for &e in ends {
            check_inside(e, "end")?;
            if (e - base).norm() < TAU_POLE {
                return Err(DomainError::InvalidInput("base point coincides with an end".into()));
            }
        }
        Ok(Self {
            kind: DomainKind::PuncturedClosedDisk,
            curve_rhs: None,
            genus,
            rank,
            base: SurfacePoint::plane(base),
            ends: ends.iter().map(|&z| SurfacePoint::plane(z)).collect(),
            circles: vec![BoundaryCircle { id: 0, w_at_one: None, turns: 1 }],
            branch_points: vec![],
            branch_at_infinity: false,
            rhs_factors: None,
        })
    }

    pub fn hyperelliptic(
        rhs: RationalFn,
        base: C64,
        base_w: C64,
        ends: &[EndSpec],
        rank: u8,
        genus: u32,
    ) -> Result<Self, DomainError> {
        check_inside(base, "base point")?;
        let rhs = rhs.reduced()?;
        let mut branch_points = vec![];
        let divisor = rhs.divisor()?;
        let probe = c(0.3711, 0.6173);
        let lead = divisor.iter().fold(rhs.eval(probe), |v, d| v / (probe - d.at).powi(d.order as i32));
        for d in divisor.clone() {
            if d.order % 2 != 0 {
                if (d.at.norm() - 1.0).abs() <= 1e-9 {
                    return Err(DomainError::BranchOnUnitCircle { at: d.at });
                }
                branch_points.push(d.at);
            }
        }
        let branch_at_infinity = rhs.order_at_infinity() % 2 != 0;
        let v = rhs.eval(base);
        let residual = (base_w * base_w - v).norm();
        if residual > 1e-8 * v.norm().max(1.0) {
            return Err(DomainError::OffCurve { residual });
        }
        let mut spec = Self {
            kind: DomainKind::HyperellipticDisk,
            curve_rhs: Some(rhs),
            genus,
            rank,
            base: SurfacePoint::on_curve(base, base_w),
            ends: vec![],
            circles: vec![],
            branch_points,
            branch_at_infinity,
            rhs_factors: Some((lead, divisor)),
        };
        for e in ends {
            check_inside(e.z, "end")?;
            match e.w {
                Some(w) => {
                    spec.check_on_curve(e.z, w)?;
                    spec.ends.push(SurfacePoint::on_curve(e.z, w));
                }
                None => {
                    let r = spec.rhs_at(e.z).sqrt();
                    if spec.is_branch_point(e.z) {
                        spec.ends.push(SurfacePoint::on_curve(e.z, c(0.0, 0.0)));
                    } else {
                        spec.ends.push(SurfacePoint::on_curve(e.z, r));
                        spec.ends.push(SurfacePoint::on_curve(e.z, -r));
                    }
                }
            }
        }
        // Monodromy of w around the unit circle decides the boundary components.
        let w1 = spec.rhs_at(c(1.0, 0.0)).sqrt();
        let back = spec.continue_sheet(&|t: f64| C64::from_polar(1.0, std::f64::consts::TAU * t), w1)?;
        spec.circles = if (back - w1).norm() <= (back + w1).norm() {
            vec![
                BoundaryCircle { id: 0, w_at_one: Some(w1), turns: 1 },
                BoundaryCircle { id: 1, w_at_one: Some(-w1), turns: 1 },
            ]
        } else {
            vec![BoundaryCircle { id: 0, w_at_one: Some(w1), turns: 2 }]
        };
        Ok(spec)
    }

    pub fn is_hyperelliptic(&self) -> bool {
        self.kind == DomainKind::HyperellipticDisk
    }

    pub fn rhs_at(&self, z: C64) -> C64 {
        match &self.rhs_factors {
            Some((lead, divisor)) => divisor.iter().fold(*lead, |v, d| v * (z - d.at).powi(d.order as i32)),
            None => self.curve_rhs.as_ref().map(|r| r.eval(z)).unwrap_or(c(1.0, 0.0)),
        }
    }

    /// `R(z0 + delta)`, accurate in `delta` when `z0` is a zero or pole of `R`.
    pub fn rhs_near(&self, z0: C64, delta: C64) -> C64 {
        match &self.rhs_factors {
            Some((lead, divisor)) => divisor.iter().fold(*lead, |v, d| v * ((z0 - d.at) + delta).powi(d.order as i32)),
            None => self.rhs_at(z0 + delta),
        }
    }

    pub fn is_branch_point(&self, z: C64) -> bool {
        self.nearest_branch_point(z).is_some_and(|(_, d)| d <= 1e-10 * z.norm().max(1.0))
    }

    pub fn nearest_branch_point(&self, z: C64) -> Option<(C64, f64)> {
        self.branch_points
            .iter()
            .map(|&b| (b, (b - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Branch points in the open unit disk.
    pub fn interior_branch_points(&self) -> Vec<C64> {
        self.branch_points.iter().copied().filter(|b| b.norm() < 1.0).collect()
    }

    pub fn check_on_curve(&self, z: C64, w: C64) -> Result<(), DomainError> {
        let v = self.rhs_at(z);
        let residual = (w * w - v).norm();
        if residual > 1e-8 * v.norm().max(1.0) {
            return Err(DomainError::OffCurve { residual });
        }
        Ok(())
    }

    /// Continues the sheet `w` along `path: [0,1] → C` starting from `w_start`,
    /// always choosing the square root nearest the previous value and halving
    /// steps where `w` moves by half its modulus or more.
    pub fn continue_sheet(&self, path: &dyn Fn(f64) -> C64, w_start: C64) -> Result<C64, DomainError> {
        if !self.is_hyperelliptic() {
            return Ok(w_start);
        }
        let n = 64;
        let mut w = w_start;
        for k in 0..n {
            w = self.track(path, k as f64 / n as f64, (k + 1) as f64 / n as f64, w, 0)?;
        }
        Ok(w)
    }

    fn track(&self, path: &dyn Fn(f64) -> C64, t0: f64, t1: f64, w0: C64, depth: u32) -> Result<C64, DomainError> {
        let z1 = path(t1);
        if let Some((b, d)) = self.nearest_branch_point(z1) {
            if d <= TAU_BRANCH * b.norm().max(1.0) {
                return Err(DomainError::BranchTooClose { at: b, distance: d });
            }
        }
        let cand = nearest_sqrt(self.rhs_at(z1), w0);
        if (cand - w0).norm() < 0.5 * w0.norm() {
            return Ok(cand);
        }
        if depth >= 40 {
            return Err(DomainError::ContinuationFailed(z1));
        }
        let tm = 0.5 * (t0 + t1);
        let wm = self.track(path, t0, tm, w0, depth + 1)?;
        self.track(path, tm, t1, wm, depth + 1)
    }

    /// Both sheets over `z`.
    pub fn sheets_at(&self, z: C64) -> [C64; 2] {
        let r = self.rhs_at(z).sqrt();
        [r, -r]
    }
}

/// The anti-holomorphic involution `J(z, w) = (1/z̄, 1/w̄)`.
pub fn mirror(domain: &DomainSpec, p: &SurfacePoint) -> SurfacePoint {
    let z = p.z.mirror();
    let w = match (domain.kind, p.w) {
        (DomainKind::HyperellipticDisk, Some(w)) => Some(w.mirror()),
        _ => None,
    };
    SurfacePoint { z, w }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Plane,
    Disk { center: C64, radius: f64 },
    Annulus { center: C64, inner: f64, outer: f64 },
}

impl Region {
    pub fn contains(&self, z: C64) -> bool {
        match *self {
            Region::Plane => true,
            Region::Disk { center, radius } => (z - center).norm() < radius,
            Region::Annulus { center, inner, outer } => {
                let r = (z - center).norm();
                r > inner && r < outer
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZerosPoles {
    pub zeros: Vec<(C64, usize)>,
    pub poles: Vec<(C64, usize)>,
}

/// Zeros and poles of `f` inside `region`, multiplicities included.
pub fn zeros_and_poles(f: &RationalFn, region: &Region) -> Result<ZerosPoles, DomainError> {
    let mut out = ZerosPoles::default();
    for d in f.divisor()? {
        if !region.contains(d.at) {
            continue;
        }
        if d.order > 0 {
            out.zeros.push((d.at, d.order as usize));
        } else {
            out.poles.push((d.at, (-d.order) as usize));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: f64, b: f64) -> RationalFn {
        // (z − a)(z − b) / ((az − 1)(bz − 1))
        RationalFn::new(Poly::from_real(&[a * b, -(a + b), 1.0]), Poly::from_real(&[1.0, -(a + b), a * b])).unwrap()
    }

    #[test]
    fn hyperelliptic_has_two_boundary_circles() {
        let d = DomainSpec::hyperelliptic(curve(0.5, -0.5), c(0.0, 0.5), curve(0.5, -0.5).eval(c(0.0, 0.5)).sqrt(), &[EndSpec::at(c(0.0, 0.0))], 0, 0)
            .unwrap();
        assert_eq!(d.circles.len(), 2);
        assert_eq!(d.ends.len(), 2);
        assert_eq!(d.interior_branch_points().len(), 2);
    }

    #[test]
    fn loop_around_branch_point_flips_sheet() {
        let r = curve(0.5, -0.5);
        let d = DomainSpec::hyperelliptic(r.clone(), c(0.0, 0.5), r.eval(c(0.0, 0.5)).sqrt(), &[], 0, 0).unwrap();
        let z0 = c(0.7, 0.0);
        let w0 = r.eval(z0).sqrt();
        let w1 = d
            .continue_sheet(&|t| c(0.5, 0.0) + C64::from_polar(0.2, std::f64::consts::TAU * t), w0)
            .unwrap();
        assert!((w1 + w0).norm() < 1e-12);
    }

    #[test]
    fn mirror_is_involutive() {
        let d = DomainSpec::disk(c(0.0, 0.0), &[c(0.5, 0.0)], 1, 0).unwrap();
        let p = SurfacePoint::plane(c(0.2, 0.3));
        assert!(mirror(&d, &mirror(&d, &p)).z.chordal_distance(p.z) < 1e-15);
    }

    #[test]
    fn rejects_branch_on_circle() {
        let r = RationalFn::polynomial(Poly::from_real(&[-1.0, 0.0, 1.0]));
        assert!(matches!(
            DomainSpec::hyperelliptic(r, c(0.0, 0.0), c(0.0, 1.0), &[], 0, 0),
            Err(DomainError::BranchOnUnitCircle { .. })
        ));
    }
}
