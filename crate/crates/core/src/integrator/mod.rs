//! Numerical integration of the Weierstrass forms along paths, with analytic
//! continuation of the sheet on hyperelliptic domains.

mod lattice;
mod path;
mod quadrature;

pub use lattice::{period_lattice, reduce_lattice, CyclePeriod, PeriodLattice};
pub use path::{clearance, route, PathSpec, Segment};
pub use quadrature::{gauss_legendre, GL_ORDER};

use crate::complex::{c, nearest_sqrt, C64};
use crate::domain::{DomainError, SurfacePoint, WeierstrassData, TAU_BRANCH, TAU_POLE};
use crate::lorentz::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default absolute tolerance for path integrals.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum bisection depth of the adaptive rule.
pub const MAX_DEPTH: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("path passes within {distance:.3e} of the pole {at}")]
    PoleOnPath { at: C64, distance: f64 },
    #[error("path passes through the branch point {0}")]
    BranchOnPath(C64),
    #[error("paths may not start at the branch point {0}")]
    StartsAtBranchPoint(C64),
    #[error("tolerance {requested:.1e} not reached (estimate {achieved:.3e})")]
    ToleranceNotReached { achieved: f64, requested: f64 },
    #[error("loop is not closed (gap {gap:.3e})")]
    NotClosed { gap: f64 },
    #[error("integration circle encloses the singular point {0}")]
    EnclosureViolation(C64),
    #[error("cannot route around the singular point {0}")]
    Unroutable(C64),
    #[error("path segments are not contiguous")]
    Discontinuous,
    #[error("periods do not generate a discrete lattice")]
    NonDiscreteLattice,
    #[error("could not reach the requested sheet")]
    SheetMismatch,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathIntegral {
    /// `∫ (φ1, φ2, φ3)` along the path.
    pub value: [C64; 3],
    /// Sum of the local error estimates.
    pub error: f64,
    pub end_w: Option<C64>,
}

impl PathIntegral {
    pub fn real(&self) -> Vec3 {
        Vec3::new(self.value[0].re, self.value[1].re, self.value[2].re)
    }
}

type Triple = [C64; 3];

fn add3(a: Triple, b: Triple) -> Triple {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub3(a: Triple, b: Triple) -> Triple {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn max_diff(a: &Triple, b: &Triple) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).norm()).fold(0.0, f64::max)
}

/// One segment (or its final piece), parametrised by `s ∈ [0, 1]`. With
/// `branch_end` the map `t = ta + (tb − ta)(1 − (1 − s)²)` removes the
/// square-root singularity at a branch point reached at `s = 1`.
struct Job<'a> {
    data: &'a WeierstrassData,
    seg: Segment,
    ta: f64,
    tb: f64,
    branch_end: bool,
}

impl Job<'_> {
    #[inline]
    fn t_of(&self, s: f64) -> (f64, f64) {
        let h = self.tb - self.ta;
        if self.branch_end {
            let u = 1.0 - s;
            (self.ta + h * (1.0 - u * u), 2.0 * h * u)
        } else {
            (self.ta + h * s, h)
        }
    }

    #[inline]
    fn z_of(&self, s: f64) -> C64 {
        self.seg.point(self.t_of(s).0)
    }

    /// `R` at parameter `s`; near a branch endpoint the offset from it is
    /// formed directly so that `R` keeps full relative accuracy.
    fn rhs(&self, s: f64) -> C64 {
        if self.branch_end {
            if let Segment::Line { from, to } = self.seg {
                let u = 1.0 - s;
                let delta = (from - to) * ((self.tb - self.ta) * u * u + (1.0 - self.tb));
                return self.data.domain.rhs_near(to, delta);
            }
        }
        self.data.domain.rhs_at(self.z_of(s))
    }

    fn advance(&self, s0: f64, s1: f64, w0: C64, depth: u32) -> Result<C64, IntegrationError> {
        if !self.data.is_hyperelliptic() {
            return Ok(w0);
        }
        if self.branch_end && s1 >= 1.0 {
            return Ok(c(0.0, 0.0));
        }
        let z1 = self.z_of(s1);
        let cand = nearest_sqrt(self.rhs(s1), w0);
        if (cand - w0).norm() < 0.5 * w0.norm() {
            return Ok(cand);
        }
        if depth >= 48 {
            return Err(IntegrationError::BranchOnPath(z1));
        }
        let sm = 0.5 * (s0 + s1);
        let wm = self.advance(s0, sm, w0, depth + 1)?;
        self.advance(sm, s1, wm, depth + 1)
    }

    /// Gauss–Legendre sum on `[a, b]`; returns the sum, `∫|f|`, and `w(b)`.
    fn panel(&self, a: f64, b: f64, wa: C64) -> Result<(Triple, f64, C64), IntegrationError> {
        let (x, wts) = quadrature::gl10();
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = [c(0.0, 0.0); 3];
        let mut abs = 0.0;
        let mut s_prev = a;
        let mut w = wa;
        for (xi, wi) in x.iter().zip(wts) {
            let s = mid + half * xi;
            w = self.advance(s_prev, s, w, 0)?;
            s_prev = s;
            let (t, dt) = self.t_of(s);
            let z = self.seg.point(t);
            let dist = self.data.pole_distance(z);
            if dist <= TAU_POLE {
                return Err(IntegrationError::PoleOnPath { at: z, distance: dist });
            }
            let dz = self.seg.derivative(t) * dt;
            let phi = self.data.phi_unchecked(z, w);
            let k = dz * (half * wi);
            for j in 0..3 {
                let v = phi[j] * k;
                if !v.is_finite() {
                    return Err(IntegrationError::PoleOnPath { at: z, distance: dist });
                }
                sum[j] += v;
                abs += v.norm();
            }
        }
        let wb = self.advance(s_prev, b, w, 0)?;
        Ok((sum, abs, wb))
    }

    fn refine(
        &self,
        a: f64,
        b: f64,
        wa: C64,
        coarse: Triple,
        tol: f64,
        scale: f64,
        depth: u32,
    ) -> Result<(Triple, f64, C64), IntegrationError> {
        let m = 0.5 * (a + b);
        let (l, al, wm) = self.panel(a, m, wa)?;
        let (r, ar, wb) = self.panel(m, b, wm)?;
        let fine = add3(l, r);
        let diff = max_diff(&fine, &coarse);
        // Roundoff: local, and the panel's share of the whole segment's.
        let floor = 200.0 * f64::EPSILON * (al + ar) + 16.0 * f64::EPSILON * scale * (b - a);
        if diff <= tol.max(floor) {
            return Ok((fine, diff, wb));
        }
        if depth >= MAX_DEPTH {
            return Err(IntegrationError::ToleranceNotReached { achieved: diff, requested: tol });
        }
        let (lv, le, wm2) = self.refine(a, m, wa, l, 0.5 * tol, scale, depth + 1)?;
        let (rv, re, wb2) = self.refine(m, b, wm2, r, 0.5 * tol, scale, depth + 1)?;
        Ok((add3(lv, rv), le + re, wb2))
    }

    fn run(&self, w_start: C64, tol: f64, panels: usize) -> Result<(Triple, f64, C64), IntegrationError> {
        let mut total = [c(0.0, 0.0); 3];
        let mut err = 0.0;
        let mut w = w_start;
        let mut last = w_start;
        let mut coarse = Vec::with_capacity(panels);
        let mut scale = 0.0;
        for i in 0..panels {
            let (a, b) = (i as f64 / panels as f64, (i + 1) as f64 / panels as f64);
            let (v, abs, wb) = self.panel(a, b, w)?;
            coarse.push((v, w));
            scale += abs;
            w = wb;
        }
        for (i, (cv, w)) in coarse.into_iter().enumerate() {
            let a = i as f64 / panels as f64;
            let b = (i + 1) as f64 / panels as f64;
            let (v, e, wb) = self.refine(a, b, w, cv, tol / panels as f64, scale, 0)?;
            total = add3(total, v);
            err += e;
            last = wb;
        }
        Ok((total, err, last))
    }
}

/// Integrates `(φ1, φ2, φ3)` along `path`. Segments ending at a branch point
/// are handled by a square-root substitution; paths may not start at one.
pub fn integrate_path(data: &WeierstrassData, path: &PathSpec, tol: f64) -> Result<PathIntegral, IntegrationError> {
    let hyper = data.is_hyperelliptic();
    let mut w = if hyper {
        let z0 = path.start().unwrap_or(c(0.0, 0.0));
        let w = path.start_w.ok_or(DomainError::MissingSheet(z0))?;
        if data.domain.is_branch_point(z0) {
            return Err(IntegrationError::StartsAtBranchPoint(z0));
        }
        data.domain.check_on_curve(z0, w)?;
        w
    } else {
        c(1.0, 0.0)
    };
    for pair in path.segments.windows(2) {
        let (a, b) = (pair[0].end(), pair[1].start());
        if (a - b).norm() > 1e-10 * a.norm().max(1.0) {
            return Err(IntegrationError::Discontinuous);
        }
    }
    let nseg = path.segments.len().max(1);
    let seg_tol = tol / nseg as f64;
    let mut total = [c(0.0, 0.0); 3];
    let mut err = 0.0;
    for (k, seg) in path.segments.iter().enumerate() {
        for &p in &data.form_poles {
            let d = seg.distance_to(p);
            if d <= TAU_POLE {
                return Err(IntegrationError::PoleOnPath { at: p, distance: d });
            }
        }
        let end = seg.end();
        let last = k + 1 == path.segments.len();
        let branch_end = hyper && data.domain.is_branch_point(end);
        if branch_end && !last {
            return Err(IntegrationError::BranchOnPath(end));
        }
        if hyper {
            for &b in &data.domain.branch_points {
                let d = seg.distance_to(b);
                let at_end = (b - end).norm() <= 1e-10 * b.norm().max(1.0);
                if !at_end && d <= TAU_BRANCH {
                    return Err(IntegrationError::BranchOnPath(b));
                }
            }
        }
        if branch_end {
            let head = Job { data, seg: *seg, ta: 0.0, tb: 0.5, branch_end: false };
            let (v1, e1, w1) = head.run(w, 0.5 * seg_tol, seg.initial_panels().div_ceil(2).max(2))?;
            let tail = Job { data, seg: *seg, ta: 0.5, tb: 1.0, branch_end: true };
            let (v2, e2, w2) = tail.run(w1, 0.5 * seg_tol, 4)?;
            total = add3(total, add3(v1, v2));
            err += e1 + e2;
            w = w2;
        } else {
            let job = Job { data, seg: *seg, ta: 0.0, tb: 1.0, branch_end: false };
            let (v, e, w2) = job.run(w, seg_tol, seg.initial_panels())?;
            total = add3(total, v);
            err += e;
            w = w2;
        }
    }
    Ok(PathIntegral { value: total, error: err, end_w: hyper.then_some(w) })
}

fn same_sheet(a: C64, b: C64) -> bool {
    (a - b).norm() <= (a + b).norm()
}

/// Integral from `from` to `to` along a routed path. On hyperelliptic domains
/// a loop around a branch point is inserted when the straight route arrives on
/// the wrong sheet; a branch-point start is replaced by a nearby regular point.
pub fn integrate_between(
    data: &WeierstrassData,
    from: &SurfacePoint,
    to: &SurfacePoint,
    tol: f64,
) -> Result<PathIntegral, IntegrationError> {
    let z0 = from.z_finite().ok_or_else(|| DomainError::InvalidInput("path start at infinity".into()))?;
    let z1 = to.z_finite().ok_or_else(|| DomainError::InvalidInput("path end at infinity".into()))?;
    let sing = data.singular_points();
    let hyper = data.is_hyperelliptic();
    if hyper && data.domain.is_branch_point(z0) {
        let r = clearance(z0, &sing);
        let dir = if (z1 - z0).norm() > 0.0 { (z1 - z0) / (z1 - z0).norm() } else { c(1.0, 0.0) };
        let m = z0 + dir * r * 0.5;
        let wm = data.domain.rhs_at(m).sqrt();
        let mid = SurfacePoint::on_curve(m, wm);
        let a = integrate_between(data, &mid, to, tol * 0.5)?;
        let b = integrate_between(data, &mid, from, tol * 0.5)?;
        return Ok(PathIntegral { value: sub3(a.value, b.value), error: a.error + b.error, end_w: a.end_w });
    }
    let start_w = if hyper { Some(from.w_finite().ok_or(DomainError::MissingSheet(z0))?) } else { None };
    let direct = PathSpec::new(route(z0, z1, &sing)?, start_w);
    if direct.segments.is_empty() {
        return Ok(PathIntegral { value: [c(0.0, 0.0); 3], error: 0.0, end_w: start_w });
    }
    let res = integrate_path(data, &direct, tol)?;
    let target_w = if hyper && !data.domain.is_branch_point(z1) { to.w_finite() } else { None };
    match (res.end_w, target_w) {
        (Some(got), Some(want)) if !same_sheet(got, want) => {
            let e = data
                .domain
                .branch_points
                .iter()
                .copied()
                .min_by(|a, b| (a - z0).norm().total_cmp(&(b - z0).norm()))
                .ok_or(IntegrationError::SheetMismatch)?;
            let r = clearance(e, &sing);
            let u = if (z0 - e).norm() > 0.0 { (z0 - e) / (z0 - e).norm() } else { c(1.0, 0.0) };
            let q = e + u * r;
            let mut segs = route(z0, q, &sing)?;
            segs.push(Segment::circle(e, r, u.arg(), 1.0));
            segs.extend(route(q, z1, &sing)?);
            let res = integrate_path(data, &PathSpec::new(segs, start_w), tol)?;
            if !same_sheet(res.end_w.unwrap(), want) {
                return Err(IntegrationError::SheetMismatch);
            }
            Ok(res)
        }
        _ => Ok(res),
    }
}

/// `X(p) = Re ∫_{base}^{p} Φ`.
pub fn immerse(data: &WeierstrassData, p: &SurfacePoint, tol: f64) -> Result<Vec3, IntegrationError> {
    Ok(integrate_between(data, &data.domain.base, p, tol)?.real())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Period {
    pub vector: Vec3,
    pub complex: [C64; 3],
    pub error: f64,
}

/// Real period of a closed loop (closed on the curve, not only in `z`).
pub fn period(data: &WeierstrassData, path: &PathSpec, tol: f64) -> Result<Period, IntegrationError> {
    if !path.is_closed() {
        let gap = match (path.start(), path.end()) {
            (Some(a), Some(b)) => (a - b).norm(),
            _ => f64::INFINITY,
        };
        return Err(IntegrationError::NotClosed { gap });
    }
    let res = integrate_path(data, path, tol)?;
    if let (Some(w0), Some(w1)) = (path.start_w, res.end_w) {
        let gap = (w1 - w0).norm();
        if gap > 1e-6 * w0.norm().max(1e-12) {
            return Err(IntegrationError::NotClosed { gap });
        }
    }
    Ok(Period { vector: res.real(), complex: res.value, error: res.error })
}

/// Sheet at `z`, continued radially from the surface point `p`.
fn sheet_near(data: &WeierstrassData, p: &SurfacePoint, z: C64) -> Result<Option<C64>, IntegrationError> {
    if !data.is_hyperelliptic() {
        return Ok(None);
    }
    let zp = p.z_finite().unwrap();
    if data.domain.is_branch_point(zp) {
        return Ok(Some(data.domain.rhs_at(z).sqrt()));
    }
    let w = p.w_finite().ok_or(DomainError::MissingSheet(zp))?;
    Ok(Some(data.domain.continue_sheet(&|t| zp + (z - zp) * t, w)?))
}

/// Loop of radius `radius` around the surface point `p`; branch points are
/// encircled twice so that the loop closes on the curve.
pub fn loop_around(data: &WeierstrassData, p: &SurfacePoint, radius: f64) -> Result<PathSpec, IntegrationError> {
    let z = p.z_finite().ok_or_else(|| DomainError::InvalidInput("loop around infinity".into()))?;
    let turns = if data.is_hyperelliptic() && data.domain.is_branch_point(z) { 2.0 } else { 1.0 };
    let start = z + radius;
    Ok(PathSpec::new(vec![Segment::circle(z, radius, 0.0, turns)], sheet_near(data, p, start)?))
}

/// The boundary component as a closed loop over the unit circle.
pub fn boundary_loop(data: &WeierstrassData, circle: usize) -> Result<PathSpec, IntegrationError> {
    let c0 = data
        .domain
        .circles
        .get(circle)
        .ok_or_else(|| DomainError::InvalidInput(format!("no boundary circle {circle}")))?;
    Ok(PathSpec::new(vec![Segment::circle(c(0.0, 0.0), 1.0, 0.0, c0.turns as f64)], c0.w_at_one))
}

/// `(1/2πi) ∮ Φ` over a circle of the given radius around `pole`.
pub fn residue_numeric(
    data: &WeierstrassData,
    pole: &SurfacePoint,
    radius: f64,
    tol: f64,
) -> Result<[C64; 3], IntegrationError> {
    let z = pole.z_finite().ok_or_else(|| DomainError::InvalidInput("residue at infinity".into()))?;
    for s in data.singular_points() {
        let d = (s - z).norm();
        if d > 1e-12 * z.norm().max(1.0) && d <= radius * (1.0 + 1e-9) {
            return Err(IntegrationError::EnclosureViolation(s));
        }
    }
    let lp = loop_around(data, pole, radius)?;
    let res = integrate_path(data, &lp, tol)?;
    let k = C64::new(0.0, std::f64::consts::TAU).inv();
    Ok([res.value[0] * k, res.value[1] * k, res.value[2] * k])
}

/// Conformal factor of the induced metric at `p`.
pub fn metric_factor(data: &WeierstrassData, p: &SurfacePoint) -> Result<f64, IntegrationError> {
    Ok(data.metric_factor(p)?)
}

/// `Re(2πi · Res)`: the real period of a small loop around an end.
pub fn residue_period(res: &[C64; 3]) -> Vec3 {
    let k = C64::new(0.0, std::f64::consts::TAU);
    Vec3::new((res[0] * k).re, (res[1] * k).re, (res[2] * k).re)
}
