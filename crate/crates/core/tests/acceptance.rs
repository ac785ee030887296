//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use common::*;
use maxsurf::complex::ExtComplex;
use maxsurf::domain::*;
use maxsurf::families::*;
use maxsurf::integrator::*;
use maxsurf::lorentz::*;
use maxsurf::mesh::{check_mesh, mesh_surface, MeshOptions};
use maxsurf::singularity::*;
use maxsurf::topology::*;
use maxsurf::validate::{gauss_interior_max, gauss_mirror_defect, metric_decay, phi_mirror_defect};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

const TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn specs() -> [FamilySpec; 3] {
    [FamilySpec::Scherk { b: 0.5 }, FamilySpec::Riemann { a: 0.5, b: -0.5 }, FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 }]
}

fn built(spec: FamilySpec) -> Result<(BuiltFamily, PeriodLattice), String> {
    let f = build_family(spec).map_err(|e| format!("{spec:?}: {e}"))?;
    let l = period_lattice(&f.data, TOL).map_err(|e| format!("{spec:?}: {e}"))?;
    Ok((f, l))
}

fn catenoid() -> WeierstrassData {
    let d = DomainSpec::disk(c(0.3, 0.0), &[c(0.0, 0.0)], 0, 0).unwrap();
    let q = RationalFn::new(Poly::constant(c(1.0, 0.0)), Poly::z()).unwrap();
    WeierstrassData::new(d, RationalFn::identity(), Phi3 { q, w_power: 0 }).unwrap()
}

/// Lifts of `|z| = 1`, by brute-force continuation of `√R`.
fn lifted_circles(data: &WeierstrassData) -> i64 {
    if !data.is_hyperelliptic() {
        return 1;
    }
    let rhs = |z: C| data.domain.rhs_at(z);
    let w0 = rhs(c(1.0, 0.0)).sqrt();
    let back = brute_continue(&rhs, &|t| C::from_polar(1.0, TAU * t), w0, 20000);
    if (back - w0).norm() < 1e-6 {
        2
    } else {
        1
    }
}

/// `Deg g` as the winding of `g` on each lift of the unit circle.
fn degree_oracle(data: &WeierstrassData) -> i64 {
    let per_lift = winding(&|t| data.gauss(C::from_polar(1.0, t)), 4096);
    if lifted_circles(data) == 2 {
        2 * per_lift
    } else {
        per_lift
    }
}

/// Largest pole order of `Φ` at a finite end, on a local branch of `w`.
fn pole_order_oracle(data: &WeierstrassData, p: C) -> i64 {
    let w = |z: C| {
        if !data.is_hyperelliptic() {
            return c(1.0, 0.0);
        }
        let r0 = data.domain.rhs_at(p);
        r0.sqrt() * (data.domain.rhs_at(z) / r0).sqrt()
    };
    (0..3).map(|k| laurent_order(&|z| data.phi_unchecked(z, w(z))[k], p)).max().unwrap()
}

fn w_infinity_oracle(data: &WeierstrassData) -> i64 {
    let sheets = if data.is_hyperelliptic() { 2 } else { 1 };
    let mut ends: Vec<C> = vec![];
    for e in &data.domain.ends {
        if let Some(z) = e.z_finite() {
            if !ends.iter().any(|x| (x - z).norm() < 1e-12) {
                ends.push(z);
            }
        }
    }
    ends.iter().map(|&z| sheets * pole_order_oracle(data, z)).sum()
}

fn criterion_1() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for b in [0.25, 0.5, 0.75] {
        let t = Instant::now();
        let (_, l) = built(FamilySpec::Scherk { b })?;
        let secs = t.elapsed().as_secs_f64();
        ensure!(l.rank() == 1, "b = {b}: rank {}", l.rank());
        let want = Vec3::new(scherk_translation(b), 0.0, 0.0);
        let err = (l.basis[0] - want).norm().min((l.basis[0] + want).norm());
        ensure!(err < 1e-8, "b = {b}: error {err:e}");
        ensure!(secs < 1.0, "b = {b}: {secs:.2} s");
        worst = (worst.0.max(err), worst.1.max(secs));
    }
    Ok(format!("max error {:.1e}, max time {:.3} s", worst.0, worst.1))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for spec in specs() {
        let (_, l) = built(spec)?;
        ensure!(!l.boundary.is_empty(), "{spec:?}: no boundary loops");
        for b in &l.boundary {
            worst = worst.max(b.period.abs().max());
        }
    }
    ensure!(worst < 1e-8, "largest boundary period {worst:e}");
    Ok(format!("largest boundary period {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for b in [0.25, 0.5, 0.75] {
        let data = build_family(FamilySpec::Scherk { b }).unwrap().data;
        let res = scherk_residues(b);
        for (z, want) in [(b, res), (-b, [-res[0], -res[1], res[2]])] {
            let got = residue_numeric(&data, &SurfacePoint::plane(c(z, 0.0)), 0.1, TOL).map_err(|e| e.to_string())?;
            for k in 0..3 {
                worst = worst.max((got[k] - want[k]).norm());
            }
        }
    }
    let data = {
        let d = DomainSpec::disk(c(0.3, 0.0), &[c(0.0, 0.0)], 1, 0).unwrap();
        let q = RationalFn::new(Poly::constant(c(1.0, 0.0)), Poly::z()).unwrap();
        WeierstrassData::new(d, RationalFn::identity(), Phi3 { q, w_power: 0 }).unwrap()
    };
    let r = residue_numeric(&data, &SurfacePoint::plane(c(0.0, 0.0)), 0.2, TOL).map_err(|e| e.to_string())?;
    worst = worst.max((r[2] - c(1.0, 0.0)).norm());
    ensure!(worst < 1e-9, "largest residue error {worst:e}");
    Ok(format!("largest residue error {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut lines = vec![];
    let mut cases: Vec<(String, WeierstrassData, Option<PeriodLattice>)> = vec![];
    for spec in specs() {
        let (f, l) = built(spec)?;
        cases.push((spec.name().to_string(), f.data, Some(l)));
    }
    cases.push(("catenoid".into(), catenoid(), None));
    for (name, data, lattice) in &cases {
        let s = singularity_census(data, BranchingConvention::Shifted).map_err(|e| e.to_string())?;
        let e = end_census(data, lattice.as_ref(), TOL).map_err(|e| e.to_string())?;
        let deg_h = lattice.as_ref().and_then(|l| covering_degree(data, l)).map(|x| x.round() as i64);
        let t = check_formula(&s, &e, data.domain.genus as i64, data.domain.rank as i64, deg_h, branch_point_count(data))
            .map_err(|e| e.to_string())?;
        // Both sides again from the oracles: k1 − χ and V_s + V_l/2 + Deg g − W∞.
        let lhs = lifted_circles(data) - (2 - 2 * data.domain.genus as i64);
        let rhs = s.v_s + s.v_l / 2 + degree_oracle(data) - w_infinity_oracle(data);
        ensure!(t.formula_holds && t.lhs == lhs && t.rhs == rhs, "{name}: report {} = {}, oracle {lhs} = {rhs}", t.lhs, t.rhs);
        ensure!(t.rh_holds, "{name}: Riemann–Hurwitz {} ≠ {}", t.rh_lhs, t.rh_rhs);
        ensure!(t.double_genus_consistent || !data.is_hyperelliptic(), "{name}: double genus");
        lines.push(format!("{name} {lhs}={rhs}"));
    }
    Ok(lines.join(", "))
}

fn criterion_5() -> Outcome {
    let mut lines = vec![];
    for spec in specs() {
        let (f, _) = built(spec)?;
        let data = &f.data;
        let r = singularity_census(data, BranchingConvention::Shifted).map_err(|e| e.to_string())?;
        ensure!(r.k1() as i64 == lifted_circles(data), "{spec:?}: k1 {} vs {}", r.k1(), lifted_circles(data));
        ensure!(r.deg_g == degree_oracle(data), "{spec:?}: Deg g {} vs {}", r.deg_g, degree_oracle(data));
        let on_circle = roots(data.phi3.q.num.coeffs()).iter().filter(|z| (z.norm() - 1.0).abs() < 1e-6).count() as i64;
        for l in &r.lightlike {
            ensure!(l.n_q == on_circle && l.conelike, "{spec:?}: n_q {} vs {on_circle}", l.n_q);
        }
        ensure!(r.k2() == 0 && r.v_s == 0, "{spec:?}: spacelike singularities");
        lines.push(format!("{} k1={} Deg g={}", spec.name(), r.k1(), r.deg_g));
    }
    Ok(lines.join(", "))
}

fn criterion_6() -> Outcome {
    let mut lines = vec![];
    for spec in specs() {
        let (f, l) = built(spec)?;
        let e = end_census(&f.data, Some(&l), TOL).map_err(|e| e.to_string())?;
        for end in &e.ends {
            let z = end.location.z_finite().ok_or("end at ∞")?;
            let oracle = pole_order_oracle(&f.data, z);
            ensure!(end.pole_order == oracle, "{spec:?}: pole order {} vs {oracle}", end.pole_order);
            ensure!(end.omega_pole_order == 1, "{spec:?}: ω has a pole of order {}", end.omega_pole_order);
        }
        ensure!(e.w_infinity == w_infinity_oracle(&f.data), "{spec:?}: W∞ {}", e.w_infinity);
        if l.rank() == 1 {
            ensure!(e.signature_sum == Some(0), "{spec:?}: signatures {:?}", e.signature_sum);
            ensure!(e.residue_defect < 1e-8, "{spec:?}: residue defect {:e}", e.residue_defect);
        }
        lines.push(format!("{} {} ends, W∞={}", spec.name(), e.ends.len(), e.w_infinity));
    }
    let data = catenoid();
    let e = end_census(&data, None, TOL).map_err(|e| e.to_string())?;
    let at_inf = (0..3)
        .map(|k| laurent_order(&|u| data.forms[k].eval(1.0 / u) * (-1.0 / (u * u)), c(0.0, 0.0)))
        .max()
        .unwrap();
    let inf = -phi_order(&data, ExtComplex::Infinity).map_err(|e| e.to_string())?;
    ensure!(e.ends.len() == 1 && e.ends[0].pole_order == 2 && inf == at_inf, "catenoid: {e:?}");
    lines.push("catenoid pole order 2 at 0 and ∞".into());
    Ok(lines.join(", "))
}

fn frame(rng: &mut ChaCha8Rng) -> Isometry {
    let (s1, s2, t): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..TAU));
    let b13 = Mat3::new(s1.cosh(), 0.0, s1.sinh(), 0.0, 1.0, 0.0, s1.sinh(), 0.0, s1.cosh());
    let b23 = Mat3::new(1.0, 0.0, 0.0, 0.0, s2.cosh(), s2.sinh(), 0.0, s2.sinh(), s2.cosh());
    let rot = Mat3::new(t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.0, 1.0);
    let v = Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    Isometry::new(b13 * b23 * rot, v)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..100 {
        let lam = rng.gen_range(-3.0..3.0);
        let f = frame(&mut rng);
        let (iso, kind, t) = match i % 3 {
            0 => {
                let t = rng.gen_range(0.1..6.1);
                (Isometry::elliptic(t, lam), IsometryKind::Elliptic, t)
            }
            1 => {
                let t = rng.gen_range(0.05..3.0);
                (Isometry::hyperbolic(t, lam, if rng.gen() { 1 } else { -1 }), IsometryKind::Hyperbolic, t)
            }
            _ => {
                let t = rng.gen_range(0.1..2.0) * if rng.gen() { 1.0 } else { -1.0 };
                (Isometry::parabolic(t, lam), IsometryKind::Parabolic, t)
            }
        };
        let k = classify_isometry(&iso, 1e-9).map_err(|e| format!("#{i}: {e}"))?;
        ensure!(k.kind == kind && (k.angle - t).abs() < 1e-10 && (k.lambda - lam).abs() < 1e-10, "#{i}: {k:?}");
        let kc = classify_isometry(&iso.conjugate(&f), 1e-9).map_err(|e| format!("#{i} conjugated: {e}"))?;
        ensure!(kc.kind == kind, "#{i} conjugated: {:?} vs {kind:?}", kc.kind);
        if kind != IsometryKind::Parabolic {
            ensure!((kc.angle - t).abs() < 1e-7, "#{i} conjugated: angle {} vs {t}", kc.angle);
            ensure!((kc.lambda - lam).abs() < 1e-7 * (1.0 + lam.abs()), "#{i} conjugated: λ {} vs {lam}", kc.lambda);
        }
    }
    let mut cases = vec![];
    for spec in specs() {
        let (f, l) = built(spec)?;
        let lifts: Vec<(String, Isometry)> = verify_lifts(&f, &l, 12, TOL)
            .into_iter()
            .map(|(n, r)| r.map(|x| (n.clone(), x.0)).map_err(|e| format!("{n}: {e}")))
            .collect::<Result<_, _>>()?;
        for q in check_quotients(&f, &l, &lifts, 1e-7) {
            ensure!(q.pass, "{spec:?} {}: {:?}", q.name, q.error);
            cases.push(format!("{:?}", q.case.map(|x| x.case).unwrap_or(GroupCaseKind::Trivial)));
        }
    }
    let want = ["R1", "R0", "R1", "R2", "R0T0", "R1T1", "R2T2", "R0R2"];
    ensure!(cases == want, "quotient cases {cases:?}");
    Ok(format!("100 normal forms; quotients {}", cases.join(" ")))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut n = 0;
    for spec in specs() {
        let (f, l) = built(spec)?;
        for (name, r) in verify_lifts(&f, &l, 50, TOL) {
            let (_, dev) = r.map_err(|e| format!("{spec:?} {name}: {e}"))?;
            ensure!(dev < 1e-7, "{spec:?} {name}: deviation {dev:e}");
            worst = worst.max(dev);
            n += 1;
        }
    }
    Ok(format!("{n} lifts, largest deviation {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut j, mut gj) = (0.0f64, 0.0f64);
    for spec in specs() {
        let (f, _) = built(spec)?;
        let pts = sample_points(&f.data, 50);
        j = j.max(phi_mirror_defect(&f.data, &pts));
        gj = gj.max(gauss_mirror_defect(&f.data, &pts));
        let gmax = gauss_interior_max(&f.data);
        ensure!(gmax < 1.0, "{spec:?}: |g| reaches {gmax}");
        let (monotone, ratio) = metric_decay(&f.data);
        ensure!(monotone && ratio < 1e-3, "{spec:?}: metric decay {monotone} {ratio:e}");
    }
    ensure!(j < 1e-8, "J-symmetry defect {j:e}");
    ensure!(gj < 1e-10, "g∘J defect {gj:e}");
    let mut st = 0.0f64;
    let mut ip = 0.0f64;
    for _ in 0..1000 {
        let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        if (z.norm() - 1.0).abs() > 0.05 {
            let p = stereographic(ExtComplex::Finite(z), maxsurf::lorentz::DEFAULT_TOL).map_err(|e| e.to_string())?;
            st = st.max((norm_sq(&p) + 1.0).abs() / p.norm_squared().max(1.0));
        }
        let f = frame(&mut rng);
        let u = Vec3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let v = Vec3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let scale = 1.0 + u.norm() * v.norm() * f.linear.norm_squared();
        ip = ip.max((inner(&(f.linear * u), &(f.linear * v)) - inner(&u, &v)).abs() / scale);
    }
    ensure!(st <= 1e-12 && ip <= 1e-12, "stereographic {st:e}, inner product {ip:e}");
    let d = build_family(FamilySpec::Riemann { a: 0.3, b: -0.6 }).unwrap().data.domain;
    let mut loops = 0;
    while loops < 50 {
        let center = C::from_polar(0.8 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU));
        let r = rng.gen_range(0.05..0.9);
        if d.branch_points.iter().any(|b| ((b - center).norm() - r).abs() < 1e-3) {
            continue;
        }
        let path = |t: f64| center + C::from_polar(r, TAU * t);
        let w = d.rhs_at(path(0.0)).sqrt();
        let ratio = d.continue_sheet(&path, w).map_err(|e| e.to_string())? / w;
        ensure!((ratio - 1.0).norm() < 1e-8 || (ratio + 1.0).norm() < 1e-8, "monodromy {ratio}");
        loops += 1;
    }
    Ok(format!("J {j:.1e}, g∘J {gj:.1e}, stereographic {st:.1e}, inner product {ip:.1e}, 50 loops ±1"))
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let (f, l) = built(FamilySpec::Scherk { b: 0.5 })?;
    let mesh = mesh_surface(&f.data, &l, &MeshOptions { resolution: 64, copies: 3, tol: TOL }).map_err(|e| e.to_string())?;
    let ch = check_mesh(&mesh, &l, TOL);
    let secs = t.elapsed().as_secs_f64();
    ensure!(ch.periodicity_ok && ch.spacelike_ok && ch.injective_ok && ch.ring_ok, "{ch:?}");
    ensure!(secs < 30.0, "{secs:.1} s");
    Ok(format!("{} vertices, {} faces in {secs:.2} s", mesh.vertices.len(), mesh.faces.len()))
}

fn main() {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, run) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS — {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL — {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
