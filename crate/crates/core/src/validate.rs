//! End-to-end validation of a surface description.
//!
//! Every check is recorded with its measured value and tolerance; later stages
//! still run when an earlier one fails, as far as their inputs exist.

use crate::complex::{c, ExtComplex, C64};
use crate::domain::{mirror, SurfacePoint, WeierstrassData};
use crate::families::{check_quotients, sample_points, verify_lifts, BuiltFamily, QuotientReport};
use crate::integrator::{period_lattice, PeriodLattice};
use crate::io::SurfaceDescription;
use crate::lorentz::Isometry;
use crate::singularity::{end_census, phi_order, singularity_census, BranchingConvention, EndReport, SingularityReport};
use crate::topology::{branch_point_count, check_formula, covering_degree, TopologyReport};
use serde::{Deserialize, Serialize};

pub const TAU_MIRROR_G: f64 = 1e-10;
pub const TAU_MIRROR_PHI: f64 = 1e-8;
pub const TAU_BOUNDARY_PERIOD: f64 = 1e-8;
pub const TAU_RESIDUE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateOptions {
    /// Integration tolerance.
    pub tol: f64,
    pub samples: usize,
    pub convention: BranchingConvention,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { tol: 1e-10, samples: 24, convention: BranchingConvention::Shifted }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Measured quantity (a deviation, count or flag).
    pub value: f64,
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl Check {
    fn bound(name: &str, value: f64, tol: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass: value <= tol, value, tolerance: Some(tol), detail: detail.into() }
    }

    fn flag(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, value: f64::from(u8::from(pass)), tolerance: None, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Validation {
    pub pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportInput {
    pub description: SurfaceDescription,
    pub options: ValidateOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularitySection {
    #[serde(flatten)]
    pub report: SingularityReport,
    pub k1: usize,
    pub k2: usize,
    /// No spacelike singularities and every lightlike one conelike.
    pub embedded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftSummary {
    pub name: String,
    pub pass: bool,
    pub deviation: Option<f64>,
    pub isometry: Option<Isometry>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSection {
    pub family: String,
    pub lifts: Vec<LiftSummary>,
    pub quotients: Vec<QuotientReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub input: ReportInput,
    pub validation: Validation,
    pub periods: Option<PeriodLattice>,
    pub singularities: Option<SingularitySection>,
    pub ends: Option<EndReport>,
    pub topology: Option<TopologyReport>,
    pub group_case: Option<GroupSection>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.validation.pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.validation.checks.iter().find(|c| c.name == name)
    }
}

fn point(data: &WeierstrassData, z: C64, w: Option<C64>) -> SurfacePoint {
    match w {
        Some(w) if data.is_hyperelliptic() => SurfacePoint::on_curve(z, w),
        _ => SurfacePoint::plane(z),
    }
}

fn zw(p: &SurfacePoint) -> (C64, C64) {
    (p.z_finite().unwrap_or(c(0.0, 0.0)), p.w_finite().unwrap_or(c(1.0, 0.0)))
}

/// Points on every boundary circle, on every sheet.
fn circle_points(data: &WeierstrassData, n: usize) -> Vec<(C64, C64)> {
    let mut out = vec![];
    for k in 0..n {
        let z = C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.25) / n as f64);
        if data.is_hyperelliptic() {
            let [a, b] = data.domain.sheets_at(z);
            out.push((z, a));
            out.push((z, b));
        } else {
            out.push((z, c(1.0, 0.0)));
        }
    }
    out
}

/// `max |g(J p) − 1/ḡ(p)|`, relative to `max(1, |1/g|)`.
pub fn gauss_mirror_defect(data: &WeierstrassData, pts: &[SurfacePoint]) -> f64 {
    let mut worst = 0.0f64;
    for p in pts {
        let (z, _) = zw(p);
        let g = data.gauss(z);
        if g.norm() < 1e-8 || !g.norm().is_finite() {
            continue;
        }
        let target = g.conj().inv();
        let got = data.gauss(z.conj().inv());
        worst = worst.max((got - target).norm() / target.norm().max(1.0));
    }
    worst
}

/// Largest `|g|` over a polar grid of the open disk (it must stay below 1).
pub fn gauss_interior_max(data: &WeierstrassData) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..60 {
        // Cubic spacing crowds the rings towards the boundary.
        let r = (1.0 - (1.0 - (i as f64 + 0.5) / 60.0).powi(3)).min(1.0 - 1e-6);
        for j in 0..96 {
            let z = C64::from_polar(r, std::f64::consts::TAU * (j as f64 + 0.5) / 96.0);
            if data.pole_distance(z) < 1e-9 {
                continue;
            }
            worst = worst.max(data.gauss(z).norm());
        }
    }
    worst
}

/// `max ||g| − 1|` on the unit circle.
pub fn gauss_boundary_defect(data: &WeierstrassData) -> f64 {
    circle_points(data, 256).iter().map(|(z, _)| (data.gauss(*z).norm() - 1.0).abs()).fold(0.0, f64::max)
}

/// `max |J*φk + φ̄k|` over the samples, relative to `max(1, |φ|)`. The
/// pullback coefficient of `dz̄` is `∂(J)/∂x`, taken by Richardson-extrapolated
/// central differences.
pub fn phi_mirror_defect(data: &WeierstrassData, pts: &[SurfacePoint]) -> f64 {
    let jz = |z: C64| z.conj().inv();
    let mut worst = 0.0f64;
    for p in pts {
        let (z, w) = zw(p);
        let jp = mirror(&data.domain, p);
        let (z1, w1) = zw(&jp);
        let d = |h: f64| (jz(z + h) - jz(z - h)) / (2.0 * h);
        let h = 1e-3 * z.norm().max(0.1);
        let dj = (d(0.5 * h) * 4.0 - d(h)) / 3.0;
        let phi = data.phi_unchecked(z, w);
        let phij = data.phi_unchecked(z1, w1);
        let scale = phi.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for k in 0..3 {
            worst = worst.max((phij[k] * dj + phi[k].conj()).norm() / scale);
        }
    }
    worst
}

/// Whether the metric factor decreases along `z = r e^{iπ/7}` towards the
/// boundary, and its last value relative to the largest.
pub fn metric_decay(data: &WeierstrassData) -> (bool, f64) {
    let dir = C64::from_polar(1.0, std::f64::consts::PI / 7.0);
    let mut vals = vec![];
    for k in 0..=40 {
        let r = 1.0 - 1e-2 * 10f64.powf(-6.0 * k as f64 / 40.0);
        let z = dir * r;
        let w = if data.is_hyperelliptic() { data.domain.rhs_at(z).sqrt() } else { c(1.0, 0.0) };
        vals.push(data.metric_factor_unchecked(z, w));
    }
    let monotone = vals.windows(2).all(|p| p[1] < p[0]);
    let top = vals.iter().copied().fold(0.0, f64::max);
    (monotone, vals.last().copied().unwrap_or(0.0) / top.max(f64::MIN_POSITIVE))
}

/// Pole-order rules for the ends and holomorphy elsewhere inside the disk.
fn end_order_checks(data: &WeierstrassData, ends: Option<&EndReport>) -> Vec<Check> {
    let rank = data.domain.rank;
    let mut out = vec![];
    match ends {
        Some(e) => {
            let bad: Vec<String> = e
                .ends
                .iter()
                .filter(|x| match rank {
                    0 => x.pole_order < 2,
                    1 => x.pole_order != 1,
                    _ => true,
                })
                .map(|x| format!("{:?} has pole order {}", x.location.z, x.pole_order))
                .collect();
            let rule = match rank {
                0 => "pole orders ≥ 2",
                1 => "simple poles",
                _ => "no ends",
            };
            out.push(Check::flag("end_orders", bad.is_empty(), if bad.is_empty() { rule.to_string() } else { bad.join("; ") }));
        }
        None => out.push(Check::flag("end_orders", false, "end census unavailable")),
    }
    let end_zs: Vec<C64> = data.domain.ends.iter().filter_map(|e| e.z_finite()).collect();
    let mut bad = vec![];
    for s in data.singular_points() {
        if s.norm() >= 1.0 || end_zs.iter().any(|e| (e - s).norm() <= 1e-9) {
            continue;
        }
        match phi_order(data, ExtComplex::Finite(s)) {
            Ok(k) if k >= 0 => {}
            Ok(k) => bad.push(format!("pole of order {} at {s}", -k)),
            Err(e) => bad.push(e.to_string()),
        }
    }
    out.push(Check::flag(
        "holomorphic_interior",
        bad.is_empty(),
        if bad.is_empty() { "Φ is holomorphic away from the ends".into() } else { bad.join("; ") },
    ));
    out
}

/// Compares the forms of a description with those of the family it names.
fn family_consistency(data: &WeierstrassData, fam: &BuiltFamily, pts: &[SurfacePoint]) -> Check {
    let d0 = &data.domain;
    let d1 = &fam.data.domain;
    if d0.kind != d1.kind || d0.rank != d1.rank || d0.genus != d1.genus || d0.ends.len() != d1.ends.len() {
        return Check::flag("family_consistent", false, "domain differs from the named family");
    }
    let mut worst = 0.0f64;
    for p in pts {
        let (z, w) = zw(p);
        let a = data.phi_unchecked(z, w);
        let b = fam.data.phi_unchecked(z, w);
        let s = b.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for k in 0..3 {
            worst = worst.max((a[k] - b[k]).norm() / s);
        }
    }
    Check::bound("family_consistent", worst, 1e-12, format!("Φ matches family {}", fam.spec.name()))
}

pub fn validate_description(desc: &SurfaceDescription, opts: &ValidateOptions) -> VerificationReport {
    let input = ReportInput { description: desc.clone(), options: *opts };
    let mut checks = vec![];
    let data = match desc.to_data() {
        Ok(d) => {
            checks.push(Check::flag("description", true, "parsed and constructed"));
            d
        }
        Err(e) => {
            checks.push(Check::flag("description", false, e.to_string()));
            return VerificationReport {
                input,
                validation: Validation { pass: false, checks },
                periods: None,
                singularities: None,
                ends: None,
                topology: None,
                group_case: None,
            };
        }
    };
    let family = match desc.to_family() {
        Ok(f) => f,
        Err(e) => {
            checks.push(Check::flag("family", false, e.to_string()));
            None
        }
    };
    let mut report = validate_data(&data, family.as_ref(), opts, input);
    report.validation.checks.splice(0..0, checks);
    report.validation.pass = report.validation.checks.iter().all(|c| c.pass);
    report
}

/// Runs every check on constructed data; `family` adds the symmetry checks.
pub fn validate_data(data: &WeierstrassData, family: Option<&BuiltFamily>, opts: &ValidateOptions, input: ReportInput) -> VerificationReport {
    let mut checks = vec![];
    let pts = sample_points(data, opts.samples);
    let boundary: Vec<SurfacePoint> = circle_points(data, 32).into_iter().map(|(z, w)| point(data, z, Some(w))).collect();
    let mirror_pts: Vec<SurfacePoint> = pts.iter().chain(&boundary).copied().collect();

    checks.push(Check::bound("gauss_mirror", gauss_mirror_defect(data, &mirror_pts), TAU_MIRROR_G, "g∘J = 1/ḡ"));
    let gi = gauss_interior_max(data);
    checks.push(Check { name: "gauss_interior".into(), pass: gi < 1.0, value: gi, tolerance: Some(1.0), detail: "|g| < 1 inside".into() });
    checks.push(Check::bound("gauss_boundary", gauss_boundary_defect(data), TAU_MIRROR_G, "|g| = 1 on the boundary"));
    checks.push(Check::bound("phi_mirror", phi_mirror_defect(data, &pts), TAU_MIRROR_PHI, "J*Φ = −Φ̄"));

    let lattice = match period_lattice(data, opts.tol) {
        Ok(l) => {
            let declared = data.domain.rank as usize;
            checks.push(Check {
                name: "lattice_rank".into(),
                pass: l.rank() == declared,
                value: l.rank() as f64,
                tolerance: None,
                detail: format!("declared rank {declared}"),
            });
            let bp = l.boundary.iter().map(|b| b.period.norm()).fold(0.0, f64::max);
            checks.push(Check::bound("boundary_periods", bp, TAU_BOUNDARY_PERIOD, "real periods of the boundary circles vanish"));
            Some(l)
        }
        Err(e) => {
            checks.push(Check::flag("lattice_rank", false, e.to_string()));
            None
        }
    };

    let sing = match singularity_census(data, opts.convention) {
        Ok(s) => {
            let zeros: Vec<String> = s.lightlike.iter().filter(|l| l.n_q != 0).map(|l| format!("circle {}: {} zeros", l.circle, l.n_q)).collect();
            checks.push(Check::flag(
                "no_boundary_zeros",
                zeros.is_empty(),
                if zeros.is_empty() { "Φ has no zeros on the boundary".into() } else { zeros.join("; ") },
            ));
            Some(s)
        }
        Err(e) => {
            checks.push(Check::flag("no_boundary_zeros", false, e.to_string()));
            None
        }
    };

    let ends = match lattice.as_ref().map(|l| end_census(data, Some(l), opts.tol)) {
        Some(Ok(e)) => {
            checks.push(Check::bound("residue_balance", e.residue_defect, TAU_RESIDUE, "Σ Re(2πi Res) = 0"));
            Some(e)
        }
        Some(Err(e)) => {
            checks.push(Check::flag("residue_balance", false, e.to_string()));
            None
        }
        None => {
            checks.push(Check::flag("residue_balance", false, "period lattice unavailable"));
            None
        }
    };
    checks.extend(end_order_checks(data, ends.as_ref()));

    let (monotone, last) = metric_decay(data);
    checks.push(Check {
        name: "metric_decay".into(),
        pass: monotone && last < 1e-8,
        value: last,
        tolerance: Some(1e-8),
        detail: if monotone { "metric factor decreases to 0 at the boundary".into() } else { "metric factor is not monotone near the boundary".into() },
    });

    let topology = match (&sing, &ends) {
        (Some(s), Some(e)) => {
            let deg_h = lattice.as_ref().and_then(|l| covering_degree(data, l)).map(|x| x.round() as i64);
            match check_formula(s, e, data.domain.genus as i64, data.domain.rank as i64, deg_h, branch_point_count(data)) {
                Ok(t) => {
                    checks.push(Check::flag("topology_formula", t.formula_holds, format!("k1 − χ = {}, right side = {}", t.lhs, t.rhs)));
                    checks.push(Check::flag("riemann_hurwitz", t.rh_holds, format!("χ = {} vs {}", t.rh_lhs, t.rh_rhs)));
                    checks.push(Check::flag(
                        "double_genus",
                        t.double_genus_consistent,
                        format!("2ξ0 + k1 − 1 = {}, from branch points {}", t.double_genus, t.double_genus_from_branch_points),
                    ));
                    Some(t)
                }
                Err(e) => {
                    checks.push(Check::flag("topology_formula", false, e.to_string()));
                    None
                }
            }
        }
        _ => {
            checks.push(Check::flag("topology_formula", false, "census unavailable"));
            None
        }
    };

    let group_case = match (family, &lattice) {
        (Some(fam), Some(l)) => {
            checks.push(family_consistency(data, fam, &pts));
            for v in &fam.expected_translations {
                let ok = l.contains(v, 1e-8 * v.norm().max(1.0));
                checks.push(Check::flag("expected_translation", ok, format!("({:.12}, {:.12}, {:.12}) in the lattice", v.x, v.y, v.z)));
            }
            let lifts = verify_lifts(fam, l, opts.samples.min(12), opts.tol);
            let mut verified: Vec<(String, Isometry)> = vec![];
            let mut summaries = vec![];
            for (name, r) in lifts {
                match r {
                    Ok((iso, dev)) => {
                        checks.push(Check::bound(&format!("lift[{name}]"), dev, 1e-7, "X∘A = R∘X modulo the lattice"));
                        verified.push((name.clone(), iso));
                        summaries.push(LiftSummary { name, pass: true, deviation: Some(dev), isometry: Some(iso), error: None });
                    }
                    Err(e) => {
                        checks.push(Check::flag(&format!("lift[{name}]"), false, e.to_string()));
                        summaries.push(LiftSummary { name, pass: false, deviation: None, isometry: None, error: Some(e.to_string()) });
                    }
                }
            }
            let quotients = check_quotients(fam, l, &verified, 1e-7);
            for q in &quotients {
                let got = q.case.as_ref().map(|c| format!("{:?}", c.case)).unwrap_or_else(|| q.error.clone().unwrap_or_default());
                checks.push(Check::flag(&format!("quotient[{}]", q.name), q.pass, format!("expected {:?}, got {got}", q.expected)));
            }
            Some(GroupSection { family: fam.spec.name().into(), lifts: summaries, quotients })
        }
        _ => None,
    };

    let pass = checks.iter().all(|c| c.pass);
    VerificationReport {
        input,
        validation: Validation { pass, checks },
        periods: lattice,
        singularities: sing.map(|s| SingularitySection { k1: s.k1(), k2: s.k2(), embedded: s.k2() == 0 && s.all_conelike(), report: s }),
        ends,
        topology,
        group_case,
    }
}

/// Validates a family member, with its symmetry checks.
pub fn validate_family(fam: &BuiltFamily, opts: &ValidateOptions) -> VerificationReport {
    validate_description(&SurfaceDescription::from_family(fam), opts)
}
