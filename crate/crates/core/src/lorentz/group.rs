use super::isometry::{frame_from_e1, frame_from_e2};
use super::{
    causal_class, classify_isometry, inner, lorentz_cross, normalize, CausalTag, Isometry, IsometryKind,
    LorentzError, Mat3, Vec3,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupCaseKind {
    Trivial,
    T,
    T1T2,
    R0,
    R0T0,
    R1,
    R1T1,
    R2,
    R2T2,
    R0R2,
}

/// Parameters of the normal generators; unused entries are `None`.
///
/// | case  | generators                               |
/// |-------|------------------------------------------|
/// | T     | `(0, λ, 0)`                              |
/// | T1T2  | `(λ, 0, 0)`, `(κ, μ, 0)`                 |
/// | R0    | `R0(ν)`                                  |
/// | R0T0  | `R0(ν)`, `(0, λ, 0)`                     |
/// | R1    | `R1(δ)`                                  |
/// | R1T1  | `R1(δ)`, `(0, λ, 0)`                     |
/// | R2    | `R2(δ)`                                  |
/// | R2T2  | `R2(δ)`, `(λ, μ, 0)`                     |
/// | R0R2  | `R0(ν)`, `R2(δ)`                         |
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupParameters {
    pub nu: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub kappa: Option<f64>,
}

/// Normal form of a group. Conjugating by the frame, `F⁻¹ ∘ g ∘ F`, maps the
/// input group onto the group generated by `normal_generators`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupCase {
    pub case: GroupCaseKind,
    pub parameters: GroupParameters,
    pub normal_generators: Vec<Isometry>,
    pub normalizing_frame: Isometry,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum InvKind {
    R0,
    R1,
    R2,
}

#[derive(Clone, Copy, Debug)]
enum Generator {
    Translation(Vec3),
    Involution { kind: InvKind, frame: Isometry, param: f64 },
}

struct Tols {
    lin: f64,
    trans: f64,
    int: f64,
}

fn unsupported(msg: impl Into<String>) -> LorentzError {
    LorentzError::UnsupportedGroup(msg.into())
}

fn not_free(msg: impl Into<String>) -> LorentzError {
    LorentzError::NotFreeProper(msg.into())
}

/// Column of `p` with the largest Euclidean norm.
fn dominant_column(p: &Mat3) -> Vec3 {
    (0..3)
        .map(|j| p.column(j).into_owned())
        .max_by(|a, b| a.norm_squared().total_cmp(&b.norm_squared()))
        .unwrap()
}

fn to_frame(frame: &Isometry, v: &Vec3) -> Vec3 {
    frame.inverse().linear * v
}

fn classify_generator(r: &Isometry, tol: &Tols) -> Result<Generator, LorentzError> {
    let l = r.linear;
    let c = r.translation;
    if r.linear_is_identity(tol.lin) {
        if c.norm() <= tol.trans {
            return Err(unsupported("identity generator"));
        }
        return Ok(Generator::Translation(c));
    }
    let involutive = (l * l - Mat3::identity()).amax() <= tol.lin;
    let positive = r.is_positive();
    let ortho = r.is_orthochronous();

    if !involutive || (positive && ortho) {
        let class = classify_isometry(r, tol.lin)?;
        let fixed = match class.kind {
            IsometryKind::Elliptic | IsometryKind::Hyperbolic | IsometryKind::Parabolic => !class.screw,
            _ => false,
        };
        return Err(if fixed {
            not_free(format!("{:?} generator has a fixed point", class.kind))
        } else {
            unsupported(format!("{:?} generator outside the admissible list", class.kind))
        });
    }

    let kind = match (positive, ortho) {
        (true, false) => InvKind::R0,
        (false, true) => InvKind::R1,
        (false, false) => {
            if (l + Mat3::identity()).amax() <= tol.lin {
                return Err(not_free("point reflection"));
            }
            InvKind::R2
        }
        (true, true) => unreachable!(),
    };

    match kind {
        InvKind::R0 => {
            let axis = dominant_column(&((Mat3::identity() + l) / 2.0));
            if causal_class(&axis, 1e-9).tag != CausalTag::Spacelike {
                return Err(unsupported("half-turn axis is not spacelike"));
            }
            let e1 = normalize(&axis).unwrap();
            let nu = inner(&c, &e1);
            if nu.abs() <= tol.trans {
                return Err(not_free("half-turn without translation along its axis"));
            }
            let d = (c - e1 * nu) / 2.0;
            let (e1, e2, e3) = frame_from_e1(e1);
            Ok(Generator::Involution { kind, frame: Isometry::from_frame(e1, e2, e3, d), param: nu })
        }
        InvKind::R1 => {
            let n = dominant_column(&((Mat3::identity() - l) / 2.0));
            if causal_class(&n, 1e-9).tag != CausalTag::Spacelike {
                return Err(unsupported("reflection normal is not spacelike"));
            }
            let n = normalize(&n).unwrap();
            let cm = n * inner(&c, &n);
            let cp = c - cm;
            if cp.norm() <= tol.trans {
                return Err(not_free("reflection without glide"));
            }
            if causal_class(&cp, 1e-9).tag != CausalTag::Spacelike {
                return Err(unsupported("glide direction is not spacelike"));
            }
            let delta = norm_s(&cp);
            let e1 = cp / delta;
            let mut e3 = normalize(&lorentz_cross(&e1, &n)).unwrap();
            if e3.z < 0.0 {
                e3 = -e3;
            }
            let e2 = if Mat3::from_columns(&[e1, n, e3]).determinant() < 0.0 { -n } else { n };
            Ok(Generator::Involution { kind, frame: Isometry::from_frame(e1, e2, e3, cm / 2.0), param: delta })
        }
        InvKind::R2 => {
            let n = dominant_column(&((Mat3::identity() - l) / 2.0));
            if causal_class(&n, 1e-9).tag != CausalTag::Timelike {
                return Err(unsupported("reflection normal is not timelike"));
            }
            let mut n = normalize(&n).unwrap();
            if n.z < 0.0 {
                n = -n;
            }
            let cm = -n * inner(&c, &n);
            let cp = c - cm;
            if cp.norm() <= tol.trans {
                return Err(not_free("reflection without glide"));
            }
            let delta = norm_s(&cp);
            // The frame must carry the reflection normal to e3.
            let e2 = cp / delta;
            let e1 = normalize(&lorentz_cross(&e2, &n)).ok_or_else(|| unsupported("degenerate reflection"))?;
            let e1 = if Mat3::from_columns(&[e1, e2, n]).determinant() < 0.0 { -e1 } else { e1 };
            Ok(Generator::Involution { kind, frame: Isometry::from_frame(e1, e2, n, cm / 2.0), param: delta })
        }
    }
}

fn norm_s(v: &Vec3) -> f64 {
    inner(v, v).max(0.0).sqrt()
}

fn spacelike_translation(v: &Vec3) -> Result<(), LorentzError> {
    if causal_class(v, 1e-9).tag != CausalTag::Spacelike {
        return Err(unsupported("translation is not spacelike"));
    }
    Ok(())
}

/// Splits `x` as `k + r` with integer `k`, failing when `|r|` exceeds `tol`.
fn integer_part(x: f64, tol: f64) -> Option<i64> {
    let k = x.round();
    ((x - k).abs() <= tol).then_some(k as i64)
}

fn case(kind: GroupCaseKind, parameters: GroupParameters, gens: Vec<Isometry>, frame: Isometry) -> GroupCase {
    GroupCase { case: kind, parameters, normal_generators: gens, normalizing_frame: frame }
}

/// Decides which normal-form case the group generated by `generators` falls
/// into. `tol` is a relative tolerance for equalities among matrix entries and
/// integer ratios of translation lengths.
pub fn classify_group(generators: &[Isometry], tol: f64) -> Result<GroupCase, LorentzError> {
    let scale = generators.iter().map(|g| g.translation.norm()).fold(1.0f64, f64::max);
    let tols = Tols { lin: tol, trans: tol * scale, int: tol.sqrt().max(1e-6) };
    for g in generators {
        Isometry::checked(g.linear, g.translation, tol)?;
    }
    let gens: Vec<Generator> = generators.iter().map(|g| classify_generator(g, &tols)).collect::<Result<_, _>>()?;
    use Generator::*;
    use InvKind as I;
    match gens.as_slice() {
        [] => Ok(case(GroupCaseKind::Trivial, GroupParameters::default(), vec![], Isometry::identity())),
        [Translation(v)] => {
            spacelike_translation(v)?;
            let lambda = norm_s(v);
            let (e1, e2, e3) = frame_from_e2(v / lambda);
            Ok(case(
                GroupCaseKind::T,
                GroupParameters { lambda: Some(lambda), ..Default::default() },
                vec![Isometry::translation_by(Vec3::new(0.0, lambda, 0.0))],
                Isometry::from_frame(e1, e2, e3, Vec3::zeros()),
            ))
        }
        [Involution { kind, frame, param }] => {
            let (k, g) = match kind {
                I::R0 => (GroupCaseKind::R0, Isometry::r0(*param)),
                I::R1 => (GroupCaseKind::R1, Isometry::r1(*param)),
                I::R2 => (GroupCaseKind::R2, Isometry::r2(*param)),
            };
            let p = match kind {
                I::R0 => GroupParameters { nu: Some(*param), ..Default::default() },
                _ => GroupParameters { delta: Some(*param), ..Default::default() },
            };
            Ok(case(k, p, vec![g], *frame))
        }
        [Translation(a), Translation(b)] => two_translations(a, b, &tols),
        [inv @ Involution { .. }, Translation(v)] | [Translation(v), inv @ Involution { .. }] => {
            let Involution { kind, frame, param } = *inv else { unreachable!() };
            spacelike_translation(v)?;
            match kind {
                I::R0 => r0_t0(&frame, param, v, &tols),
                I::R1 => r1_t1(&frame, param, v, &tols),
                I::R2 => r2_t2(&frame, param, v, &tols),
            }
        }
        [Involution { kind: I::R0, frame, param }, _] if generators_kind(&gens[1]) == Some(I::R2) => {
            r0_r2(frame, *param, &generators[1], &tols)
        }
        [_, Involution { kind: I::R0, frame, param }] if generators_kind(&gens[0]) == Some(I::R2) => {
            r0_r2(frame, *param, &generators[0], &tols)
        }
        [_, _] => Err(unsupported("generator pair outside the admissible list")),
        _ => Err(unsupported("more than two generators")),
    }
}

fn generators_kind(g: &Generator) -> Option<InvKind> {
    match g {
        Generator::Involution { kind, .. } => Some(*kind),
        Generator::Translation(_) => None,
    }
}

fn two_translations(a: &Vec3, b: &Vec3, tols: &Tols) -> Result<GroupCase, LorentzError> {
    spacelike_translation(a)?;
    spacelike_translation(b)?;
    let (g11, g12, g22) = (inner(a, a), inner(a, b), inner(b, b));
    if g11 * g22 - g12 * g12 <= tols.int * g11 * g22 {
        return Err(unsupported("translations do not span a spacelike plane"));
    }
    let lambda = g11.sqrt();
    let e1 = a / lambda;
    let mut e2 = normalize(&(b - e1 * inner(b, &e1))).unwrap();
    let mut e3 = normalize(&lorentz_cross(&e1, &e2)).unwrap();
    if e3.z < 0.0 {
        e3 = -e3;
    }
    if Mat3::from_columns(&[e1, e2, e3]).determinant() < 0.0 {
        e2 = -e2;
    }
    let kappa = inner(b, &e1);
    let mu = inner(b, &e2);
    Ok(case(
        GroupCaseKind::T1T2,
        GroupParameters { lambda: Some(lambda), mu: Some(mu), kappa: Some(kappa), ..Default::default() },
        vec![
            Isometry::translation_by(Vec3::new(lambda, 0.0, 0.0)),
            Isometry::translation_by(Vec3::new(kappa, mu, 0.0)),
        ],
        Isometry::from_frame(e1, e2, e3, Vec3::zeros()),
    ))
}

fn r0_t0(frame: &Isometry, nu: f64, v: &Vec3, tols: &Tols) -> Result<GroupCase, LorentzError> {
    let y = to_frame(frame, v);
    let k = integer_part(y.x / nu, tols.int).ok_or_else(|| unsupported("translation not commensurable with the half-turn"))?;
    if k % 2 != 0 {
        return Err(not_free("odd multiple of the half-turn translation"));
    }
    let (l, m) = (y.y, y.z);
    let q = l * l - m * m;
    if q <= tols.trans * tols.trans {
        return Err(unsupported("reduced translation is not spacelike"));
    }
    let s = q.sqrt();
    let f = frame.linear;
    let (e1, e2, e3) = (f.column(0).into_owned(), f.column(1).into_owned(), f.column(2).into_owned());
    let e2n = (e2 * l + e3 * m) / s;
    let mut e3n = (e2 * m + e3 * l) / s;
    if e3n.z < 0.0 {
        e3n = -e3n;
    }
    let (e1n, nu) = if Mat3::from_columns(&[e1, e2n, e3n]).determinant() < 0.0 { (-e1, -nu) } else { (e1, nu) };
    Ok(case(
        GroupCaseKind::R0T0,
        GroupParameters { nu: Some(nu), lambda: Some(s), ..Default::default() },
        vec![Isometry::r0(nu), Isometry::translation_by(Vec3::new(0.0, s, 0.0))],
        Isometry::from_frame(e1n, e2n, e3n, frame.translation),
    ))
}

fn r1_t1(frame: &Isometry, delta: f64, v: &Vec3, tols: &Tols) -> Result<GroupCase, LorentzError> {
    let y = to_frame(frame, v);
    if y.z.abs() > tols.trans {
        return Err(unsupported("translation has a component normal to the glide plane"));
    }
    if y.y.abs() <= tols.trans {
        return Err(unsupported("translation parallel to the glide"));
    }
    let k = integer_part(y.x / delta, tols.int).ok_or_else(|| unsupported("translation not commensurable with the glide"))?;
    if k % 2 != 0 {
        return Err(not_free("odd multiple of the glide translation"));
    }
    Ok(case(
        GroupCaseKind::R1T1,
        GroupParameters { delta: Some(delta), lambda: Some(y.y), ..Default::default() },
        vec![Isometry::r1(delta), Isometry::translation_by(Vec3::new(0.0, y.y, 0.0))],
        *frame,
    ))
}

fn r2_t2(frame: &Isometry, delta: f64, v: &Vec3, tols: &Tols) -> Result<GroupCase, LorentzError> {
    let y = to_frame(frame, v);
    if y.z.abs() > tols.trans {
        return Err(unsupported("translation is not horizontal"));
    }
    if y.x.abs() <= tols.trans {
        return Err(unsupported("translation parallel to the glide"));
    }
    Ok(case(
        GroupCaseKind::R2T2,
        GroupParameters { delta: Some(delta), lambda: Some(y.x), mu: Some(y.y), ..Default::default() },
        vec![Isometry::r2(delta), Isometry::translation_by(Vec3::new(y.x, y.y, 0.0))],
        *frame,
    ))
}

fn r0_r2(frame: &Isometry, nu: f64, other: &Isometry, tols: &Tols) -> Result<GroupCase, LorentzError> {
    let b = other.conjugate(frame);
    let lb = b.linear;
    let off = [lb[(0, 1)], lb[(0, 2)], lb[(1, 0)], lb[(2, 0)]];
    if off.iter().any(|x| x.abs() > tols.lin) || (lb[(0, 0)] - 1.0).abs() > tols.lin {
        return Err(unsupported("reflection does not commute with the half-turn"));
    }
    let mut n = dominant_column(&((Mat3::identity() - lb) / 2.0));
    n.x = 0.0;
    let mut n = normalize(&n).ok_or_else(|| unsupported("degenerate reflection"))?;
    if n.z < 0.0 {
        n = -n;
    }
    let boost = Isometry::from_frame(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, n.z, n.y), n, Vec3::zeros());
    let b = b.conjugate(&boost);
    let t = b.translation;
    if t.z.abs() > tols.trans {
        return Err(unsupported("reflection plane does not contain the half-turn axis"));
    }
    let k = integer_part(t.x / nu, tols.int).ok_or_else(|| unsupported("glide not commensurable with the half-turn"))?;
    if k % 2 != 0 {
        return Err(unsupported("reduced generator is not a timelike reflection"));
    }
    if t.y.abs() <= tols.trans {
        return Err(not_free("reflection without glide"));
    }
    Ok(case(
        GroupCaseKind::R0R2,
        GroupParameters { nu: Some(nu), delta: Some(t.y), ..Default::default() },
        vec![Isometry::r0(nu), Isometry::r2(t.y)],
        frame.compose(&boost),
    ))
}
