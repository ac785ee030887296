//! Three worked families: a singly periodic Scherk-type surface on a punctured
//! disk, a singly periodic Riemann-type surface and a doubly periodic surface,
//! both on hyperelliptic domains.

use crate::complex::{c, ExtComplex, C64};
use crate::domain::{DomainError, DomainSpec, EndSpec, Phi3, Poly, RationalFn, SurfacePoint, WeierstrassData};
use crate::integrator::{clearance, immerse, IntegrationError, PeriodLattice};
use crate::lorentz::{classify_group, GroupCase, GroupCaseKind, Isometry, LorentzError, Mat3, Vec3};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("symmetry lift {name} fails: deviation {deviation:.3e}")]
    LiftMismatch { name: String, deviation: f64 },
    #[error("lattice has no cycle labelled {0}")]
    MissingCycle(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Ends at `±b`, `0 < b < 1`.
    Scherk { b: f64 },
    /// Branch points `a, b`; ends over `z = 0`.
    Riemann { a: f64, b: f64 },
    /// Branch points `±a1, ±a2`; compact quotient.
    Doubly { a1: f64, a2: f64 },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Scherk { .. } => "scherk",
            FamilySpec::Riemann { .. } => "riemann",
            FamilySpec::Doubly { .. } => "doubly",
        }
    }

    pub fn default_for(name: &str) -> Option<FamilySpec> {
        match name {
            "scherk" => Some(FamilySpec::Scherk { b: 0.5 }),
            "riemann" => Some(FamilySpec::Riemann { a: 0.5, b: -0.5 }),
            "doubly" => Some(FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 }),
            _ => None,
        }
    }

    /// Overrides named parameters of the default member of `name`.
    pub fn with_params(name: &str, params: &[(String, f64)]) -> Result<FamilySpec, FamilyError> {
        let mut spec = Self::default_for(name).ok_or_else(|| FamilyError::InvalidParameters(format!("unknown family {name}")))?;
        for (k, v) in params {
            let slot = match (&mut spec, k.as_str()) {
                (FamilySpec::Scherk { b }, "b") => b,
                (FamilySpec::Riemann { a, .. }, "a") => a,
                (FamilySpec::Riemann { b, .. }, "b") => b,
                (FamilySpec::Doubly { a1, .. }, "a1") => a1,
                (FamilySpec::Doubly { a2, .. }, "a2") => a2,
                _ => return Err(FamilyError::InvalidParameters(format!("{name} has no parameter {k}"))),
            };
            *slot = *v;
        }
        Ok(spec)
    }

    pub fn params(&self) -> Vec<(String, f64)> {
        match *self {
            FamilySpec::Scherk { b } => vec![("b".into(), b)],
            FamilySpec::Riemann { a, b } => vec![("a".into(), a), ("b".into(), b)],
            FamilySpec::Doubly { a1, a2 } => vec![("a1".into(), a1), ("a2".into(), a2)],
        }
    }
}

/// How a lift acts on `(z, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMap {
    /// `z ↦ −z̄`
    NegConj,
    /// `z ↦ z̄`
    Conj,
    /// `z ↦ −z`
    Neg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SheetMap {
    Same,
    Flip,
    Conj,
    FlipConj,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Involution {
    pub z: PointMap,
    pub w: SheetMap,
}

impl Involution {
    pub fn apply(&self, p: &SurfacePoint) -> SurfacePoint {
        let z = p.z.finite().map(|z| match self.z {
            PointMap::NegConj => -z.conj(),
            PointMap::Conj => z.conj(),
            PointMap::Neg => -z,
        });
        let w = p.w.and_then(|w| w.finite()).map(|w| match self.w {
            SheetMap::Same => w,
            SheetMap::Flip => -w,
            SheetMap::Conj => w.conj(),
            SheetMap::FlipConj => -w.conj(),
        });
        SurfacePoint {
            z: z.map(ExtComplex::Finite).unwrap_or(ExtComplex::Infinity),
            w: w.map(ExtComplex::Finite).or(p.w),
        }
    }
}

/// Translation part expected for a lift, modulo the period lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedShift {
    Zero,
    /// Half the period of the named cycle.
    HalfOfCycle(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryLift {
    pub name: String,
    pub map: Involution,
    pub linear: Mat3,
    pub shift: ExpectedShift,
}

/// Word in the verified lifts and lattice cycles; `lift` is applied first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupWord {
    pub lift: Option<String>,
    pub translation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientSpec {
    pub name: String,
    pub generators: Vec<GroupWord>,
    pub expected: GroupCaseKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltFamily {
    pub spec: FamilySpec,
    pub data: WeierstrassData,
    /// Closed-form lattice generators, where known (up to sign).
    pub expected_translations: Vec<Vec3>,
    pub lifts: Vec<SymmetryLift>,
    pub quotients: Vec<QuotientSpec>,
}

fn diag(a: f64, b: f64, c3: f64) -> Mat3 {
    Mat3::from_diagonal(&Vec3::new(a, b, c3))
}

fn word(lift: Option<&str>, translation: Option<&str>) -> GroupWord {
    GroupWord { lift: lift.map(str::to_string), translation: translation.map(str::to_string) }
}

fn check_unit(name: &str, x: f64) -> Result<(), FamilyError> {
    if !(x.abs() > 0.0 && x.abs() < 1.0) {
        return Err(FamilyError::InvalidParameters(format!("{name} = {x} must satisfy 0 < |{name}| < 1")));
    }
    Ok(())
}

/// Weierstrass data and expected symmetries of a family member.
pub fn build_family(spec: FamilySpec) -> Result<BuiltFamily, FamilyError> {
    match spec {
        FamilySpec::Scherk { b } => {
            if !(b > 0.0 && b < 1.0) {
                return Err(FamilyError::InvalidParameters(format!("b = {b} must lie in (0, 1)")));
            }
            let domain = DomainSpec::disk(c(0.0, 0.0), &[c(b, 0.0), c(-b, 0.0)], 1, 0)?;
            let b2 = b * b;
            let q = RationalFn::new(
                Poly::from_real(&[0.0, 1.0]),
                &Poly::from_real(&[-b2, 0.0, 1.0]) * &Poly::from_real(&[-1.0, 0.0, b2]),
            )?;
            let data = WeierstrassData::new(domain, RationalFn::identity(), Phi3 { q, w_power: 0 })?;
            Ok(BuiltFamily {
                spec,
                data,
                expected_translations: vec![Vec3::new(PI / (2.0 * b * (b2 + 1.0)), 0.0, 0.0)],
                lifts: vec![SymmetryLift {
                    name: "A".into(),
                    map: Involution { z: PointMap::NegConj, w: SheetMap::Same },
                    linear: diag(1.0, -1.0, 1.0),
                    shift: ExpectedShift::Zero,
                }],
                quotients: vec![QuotientSpec {
                    name: "<T R>".into(),
                    generators: vec![word(Some("A"), Some("end[0]"))],
                    expected: GroupCaseKind::R1,
                }],
            })
        }
        FamilySpec::Riemann { a, b } => {
            check_unit("a", a)?;
            check_unit("b", b)?;
            if (a - b).abs() < 1e-9 {
                return Err(FamilyError::InvalidParameters("a and b must differ".into()));
            }
            let rhs = RationalFn::new(Poly::from_real(&[a * b, -(a + b), 1.0]), Poly::from_real(&[1.0, -(a + b), a * b]))?;
            let q = RationalFn::new(Poly::constant(c(1.0, 0.0)), Poly::from_real(&[1.0, -(a + b), a * b]))?;
            let domain = DomainSpec::hyperelliptic(rhs, c(a, 0.0), c(0.0, 0.0), &[EndSpec::at(c(0.0, 0.0))], 1, 0)?;
            let data = WeierstrassData::new(domain, RationalFn::identity(), Phi3 { q, w_power: -1 })?;
            let w0 = C64::new(a * b, 0.0).sqrt();
            let v = Vec3::new((-PI / w0).re, (c(0.0, -PI) / w0).re, 0.0);
            let symmetric = (a + b).abs() < 1e-12;
            let (lifts, quotients) = if symmetric {
                (
                    vec![
                        SymmetryLift {
                            name: "A0".into(),
                            map: Involution { z: PointMap::NegConj, w: SheetMap::Conj },
                            linear: diag(-1.0, 1.0, -1.0),
                            shift: ExpectedShift::HalfOfCycle("end[0]".into()),
                        },
                        SymmetryLift {
                            name: "A1".into(),
                            map: Involution { z: PointMap::Conj, w: SheetMap::Conj },
                            linear: diag(-1.0, 1.0, 1.0),
                            shift: ExpectedShift::Zero,
                        },
                        SymmetryLift {
                            name: "A2".into(),
                            map: Involution { z: PointMap::Neg, w: SheetMap::Same },
                            linear: diag(1.0, 1.0, -1.0),
                            shift: ExpectedShift::HalfOfCycle("end[0]".into()),
                        },
                    ],
                    vec![
                        QuotientSpec { name: "<R0>".into(), generators: vec![word(Some("A0"), None)], expected: GroupCaseKind::R0 },
                        QuotientSpec {
                            name: "<T R1>".into(),
                            generators: vec![word(Some("A1"), Some("end[0]"))],
                            expected: GroupCaseKind::R1,
                        },
                        QuotientSpec { name: "<R2>".into(), generators: vec![word(Some("A2"), None)], expected: GroupCaseKind::R2 },
                    ],
                )
            } else {
                (vec![], vec![])
            };
            Ok(BuiltFamily { spec, data, expected_translations: vec![v], lifts, quotients })
        }
        FamilySpec::Doubly { a1, a2 } => {
            check_unit("a1", a1)?;
            check_unit("a2", a2)?;
            if (a1.abs() - a2.abs()).abs() < 1e-9 {
                return Err(FamilyError::InvalidParameters("|a1| and |a2| must differ".into()));
            }
            let (s1, s2) = (a1 * a1, a2 * a2);
            let num = &Poly::from_real(&[-s1, 0.0, 1.0]) * &Poly::from_real(&[-s2, 0.0, 1.0]);
            let den = &Poly::from_real(&[-1.0, 0.0, s1]) * &Poly::from_real(&[-1.0, 0.0, s2]);
            let rhs = RationalFn::new(num, den.clone())?;
            let q = RationalFn::new(Poly::from_real(&[0.0, 1.0]), den)?;
            let domain = DomainSpec::hyperelliptic(rhs, c(a1, 0.0), c(0.0, 0.0), &[], 2, 1)?;
            let data = WeierstrassData::new(domain, RationalFn::identity(), Phi3 { q, w_power: -1 })?;
            // Cycles are labelled from the branch point of largest real part.
            let (t1, t2) = ("branch[0,3]", "branch[0,1]");
            Ok(BuiltFamily {
                spec,
                data,
                expected_translations: vec![],
                lifts: vec![
                    SymmetryLift {
                        name: "A0".into(),
                        map: Involution { z: PointMap::Conj, w: SheetMap::FlipConj },
                        linear: diag(1.0, -1.0, -1.0),
                        shift: ExpectedShift::Zero,
                    },
                    SymmetryLift {
                        name: "A1".into(),
                        map: Involution { z: PointMap::Conj, w: SheetMap::Conj },
                        linear: diag(-1.0, 1.0, 1.0),
                        shift: ExpectedShift::Zero,
                    },
                    SymmetryLift {
                        name: "A2".into(),
                        map: Involution { z: PointMap::Neg, w: SheetMap::Flip },
                        linear: diag(1.0, 1.0, -1.0),
                        shift: ExpectedShift::HalfOfCycle(t1.into()),
                    },
                ],
                quotients: vec![
                    QuotientSpec {
                        name: "<T2 R0, T1>".into(),
                        generators: vec![word(Some("A0"), Some(t2)), word(None, Some(t1))],
                        expected: GroupCaseKind::R0T0,
                    },
                    QuotientSpec {
                        name: "<T1 R1, T2>".into(),
                        generators: vec![word(Some("A1"), Some(t1)), word(None, Some(t2))],
                        expected: GroupCaseKind::R1T1,
                    },
                    QuotientSpec {
                        name: "<R2, T2>".into(),
                        generators: vec![word(Some("A2"), None), word(None, Some(t2))],
                        expected: GroupCaseKind::R2T2,
                    },
                    QuotientSpec {
                        name: "<T2 R0, R2>".into(),
                        generators: vec![word(Some("A0"), Some(t2)), word(Some("A2"), None)],
                        expected: GroupCaseKind::R0R2,
                    },
                ],
            })
        }
    }
}

/// Deterministic sample of regular points of the fundamental piece, kept away
/// from singular points and the boundary.
pub fn sample_points(data: &WeierstrassData, n: usize) -> Vec<SurfacePoint> {
    let sing = data.singular_points();
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut out = vec![];
    let mut k = 0usize;
    while out.len() < n && k < 50 * n {
        k += 1;
        let r = 0.9 * ((k as f64 - 0.5) / (2 * n) as f64).sqrt().min(1.0);
        let z = C64::from_polar(r, golden * k as f64);
        if sing.iter().any(|&s| (s - z).norm() < 0.5 * clearance(s, &sing).max(0.02)) {
            continue;
        }
        if data.pole_distance(z) < 1e-3 || z.norm() > 0.95 {
            continue;
        }
        if data.is_hyperelliptic() {
            let w = data.domain.rhs_at(z).sqrt();
            let w = if k % 2 == 0 { w } else { -w };
            out.push(SurfacePoint::on_curve(z, w));
        } else {
            out.push(SurfacePoint::plane(z));
        }
    }
    out
}

fn cycle_period(lattice: &PeriodLattice, label: &str) -> Result<Vec3, FamilyError> {
    lattice
        .cycles
        .iter()
        .find(|c| c.label == label)
        .map(|c| c.period)
        .ok_or_else(|| FamilyError::MissingCycle(label.into()))
}

/// Checks `X∘A = R∘X` modulo the lattice at `samples` points, where `R` has
/// the lift's linear part and expected translation. Returns `R` with the
/// translation actually observed (reduced towards the expected one).
pub fn verify_symmetry_lift(
    data: &WeierstrassData,
    lift: &SymmetryLift,
    lattice: &PeriodLattice,
    samples: usize,
    tol: f64,
) -> Result<(Isometry, f64), FamilyError> {
    let expected = match &lift.shift {
        ExpectedShift::Zero => Vec3::zeros(),
        ExpectedShift::HalfOfCycle(label) => cycle_period(lattice, label)? * 0.5,
    };
    let pts = sample_points(data, samples);
    let mut worst = 0.0f64;
    let mut observed = None;
    for p in &pts {
        let x = immerse(data, p, tol)?;
        let y = immerse(data, &lift.map.apply(p), tol)?;
        let shift = y - lift.linear * x;
        let d = shift - expected;
        let dev = (d - lattice.nearest(&d)).norm();
        worst = worst.max(dev);
        if observed.is_none() {
            observed = Some(expected + d - lattice.nearest(&d));
        }
    }
    if worst > 1e-7 {
        return Err(FamilyError::LiftMismatch { name: lift.name.clone(), deviation: worst });
    }
    Ok((Isometry::new(lift.linear, observed.unwrap_or(expected)), worst))
}

/// Assembles the generators of a quotient group from verified lifts.
pub fn quotient_generators(
    q: &QuotientSpec,
    lifts: &[(String, Isometry)],
    lattice: &PeriodLattice,
) -> Result<Vec<Isometry>, FamilyError> {
    q.generators
        .iter()
        .map(|w| {
            let mut g = Isometry::identity();
            if let Some(name) = &w.lift {
                let l = lifts
                    .iter()
                    .find(|(n, _)| n == name)
                    .ok_or_else(|| FamilyError::InvalidParameters(format!("no verified lift {name}")))?;
                g = l.1;
            }
            if let Some(label) = &w.translation {
                g = Isometry::translation_by(cycle_period(lattice, label)?).compose(&g);
            }
            Ok(g)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub name: String,
    pub expected: GroupCaseKind,
    pub case: Option<GroupCase>,
    pub error: Option<String>,
    pub pass: bool,
}

/// Verified lifts of a family, by name.
pub fn verify_lifts(
    family: &BuiltFamily,
    lattice: &PeriodLattice,
    samples: usize,
    tol: f64,
) -> Vec<(String, Result<(Isometry, f64), FamilyError>)> {
    family
        .lifts
        .iter()
        .map(|l| (l.name.clone(), verify_symmetry_lift(&family.data, l, lattice, samples, tol)))
        .collect()
}

/// Classifies every quotient group of the family from verified lifts.
pub fn check_quotients(family: &BuiltFamily, lattice: &PeriodLattice, lifts: &[(String, Isometry)], tol: f64) -> Vec<QuotientReport> {
    family
        .quotients
        .iter()
        .map(|q| {
            let res = quotient_generators(q, lifts, lattice)
                .and_then(|gens| classify_group(&gens, tol).map_err(FamilyError::from));
            match res {
                Ok(case) => QuotientReport {
                    name: q.name.clone(),
                    expected: q.expected,
                    pass: case.case == q.expected,
                    case: Some(case),
                    error: None,
                },
                Err(e) => QuotientReport { name: q.name.clone(), expected: q.expected, case: None, error: Some(e.to_string()), pass: false },
            }
        })
        .collect()
}
