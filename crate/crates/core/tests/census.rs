mod common;

use common::*;
use maxsurf::complex::ExtComplex;
use maxsurf::domain::*;
use maxsurf::families::{build_family, FamilySpec};
use maxsurf::integrator::period_lattice;
use maxsurf::singularity::*;
use num_complex::Complex64 as C;
use std::f64::consts::TAU;

const TOL: f64 = 1e-10;

fn family(spec: FamilySpec) -> WeierstrassData {
    build_family(spec).unwrap().data
}

fn disk_data(g: RationalFn, q: RationalFn, ends: &[C], rank: u8) -> WeierstrassData {
    let d = DomainSpec::disk(c(0.3, 0.1), ends, rank, 0).unwrap();
    WeierstrassData::new(d, g, Phi3 { q, w_power: 0 }).unwrap()
}

fn zpow(k: i32) -> RationalFn {
    if k >= 0 {
        let mut v = vec![0.0; k as usize + 1];
        v[k as usize] = 1.0;
        RationalFn::polynomial(Poly::from_real(&v))
    } else {
        RationalFn::new(Poly::constant(c(1.0, 0.0)), zpow(-k).num).unwrap()
    }
}

/// Number of roots of `coeffs` on the unit circle, by the Durand–Kerner oracle.
fn roots_on_unit_circle(coeffs: &[C]) -> i64 {
    roots(coeffs).iter().filter(|z| (z.norm() - 1.0).abs() < 1e-6).count() as i64
}

/// Winding of `g` along `|z| = 1`, by the independent sampler.
fn winding_of_g(data: &WeierstrassData) -> i64 {
    winding(&|t| data.gauss(C::from_polar(1.0, t)), 4096)
}

/// Lifts of `|z| = 1` to the curve: two when an even number of branch points
/// lies inside, one otherwise; one on a plain disk.
fn lifted_circles(data: &WeierstrassData) -> usize {
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

#[test]
fn scherk_census() {
    let data = family(FamilySpec::Scherk { b: 0.5 });
    let r = singularity_census(&data, BranchingConvention::Shifted).unwrap();
    assert_eq!(r.k1(), lifted_circles(&data));
    assert_eq!(r.k1(), 1);
    let l = &r.lightlike[0];
    assert_eq!(l.m_q, winding_of_g(&data));
    assert_eq!(l.n_q, roots_on_unit_circle(data.phi3.q.num.coeffs()));
    assert_eq!((l.m_q, l.n_q), (1, 0));
    assert!(l.conelike && r.all_conelike());
    assert_eq!(r.k2(), 0);
    assert_eq!(l.branching_number, 0);
}

#[test]
fn riemann_census() {
    let data = family(FamilySpec::Riemann { a: 0.5, b: -0.5 });
    let r = singularity_census(&data, BranchingConvention::Shifted).unwrap();
    assert_eq!(r.k1(), lifted_circles(&data));
    assert_eq!(r.k1(), 2);
    for l in &r.lightlike {
        assert!(l.conelike);
        assert_eq!(l.m_q, winding_of_g(&data));
        assert_eq!(l.n_q, 0);
    }
    // g = z has one simple zero in the disk, over which the curve has two sheets.
    let zeros_inside = roots(data.g.num.coeffs()).iter().filter(|z| z.norm() < 1.0).count() as i64;
    let sheets_over_zero = if data.domain.rhs_at(c(0.0, 0.0)).norm() > 1e-12 { 2 } else { 1 };
    assert_eq!(r.deg_g, zeros_inside * sheets_over_zero);
    assert_eq!(r.deg_g, 2);
    assert_eq!(r.k2(), 0);
}

#[test]
fn doubly_census() {
    let data = family(FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 });
    let r = singularity_census(&data, BranchingConvention::Shifted).unwrap();
    assert_eq!(r.k1(), lifted_circles(&data));
    assert_eq!(r.k1(), 2);
    for l in &r.lightlike {
        assert!(l.conelike);
        // φ3 = z dz / (w (a1²z² − 1)(a2²z² − 1)); w never vanishes on |z| = 1.
        assert_eq!(l.n_q, roots_on_unit_circle(data.phi3.q.num.coeffs()));
        assert_eq!(l.n_q, 0);
    }
    assert_eq!(r.k2(), 0);
    assert_eq!(r.deg_g, 2);
}

#[test]
fn parity_and_degree_sum() {
    for spec in [FamilySpec::Scherk { b: 0.3 }, FamilySpec::Riemann { a: 0.3, b: -0.6 }, FamilySpec::Doubly { a1: 0.7, a2: 0.2 }] {
        let r = singularity_census(&family(spec), BranchingConvention::AsPrinted).unwrap();
        for l in &r.lightlike {
            assert_eq!(l.n_q % 2, 0);
            assert!(l.m_q >= 1);
            assert_eq!(l.branching_number, l.n_q / 2 + l.m_q);
        }
        assert_eq!(r.deg_g, r.lightlike.iter().map(|l| l.m_q).sum::<i64>());
        assert_eq!(r.v_l, r.lightlike.iter().map(|l| l.n_q).sum::<i64>());
    }
}

#[test]
fn degree_of_a_power_map() {
    for k in 1..=4 {
        let data = disk_data(zpow(k), zpow(0), &[], 0);
        assert_eq!(degree_on_circle(&data, 0).unwrap(), k as i64);
        assert_eq!(winding_of_g(&data), k as i64);
        assert_eq!(conelike_test(&data, 0).unwrap().0, k == 1);
    }
}

#[test]
fn zeros_on_the_circle_are_counted_with_multiplicity() {
    // (z² + 1)² vanishes to order two at ±i.
    let q = RationalFn::polynomial(Poly::from_real(&[1.0, 0.0, 2.0, 0.0, 1.0]));
    let data = disk_data(zpow(1), q, &[], 0);
    assert_eq!(zero_count_on_circle(&data, 0).unwrap(), 4);
    let r = singularity_census(&data, BranchingConvention::Shifted).unwrap();
    assert!(!r.lightlike[0].conelike);
    assert_eq!(r.lightlike[0].branching_number, 2);
}

#[test]
fn spacelike_examples() {
    // φ3 = z dz: φ1 = (i/2)(1 − z²) dz does not vanish at 0.
    let data = disk_data(zpow(1), zpow(1), &[], 0);
    assert!(spacelike_census(&data).unwrap().is_empty());
    // φ3 = z² dz: all three components vanish to order one at 0.
    let data = disk_data(zpow(1), zpow(2), &[], 0);
    let s = spacelike_census(&data).unwrap();
    assert_eq!(s.len(), 1);
    // The vanishing order of Φ is the least over its components.
    let oracle = (0..3).map(|k| -laurent_order(&|z| data.forms[k].eval(z), c(0.0, 0.0))).min().unwrap();
    assert_eq!(s[0].n_j, oracle);
    assert_eq!(s[0].n_j, 1);
    for spec in [FamilySpec::Scherk { b: 0.5 }, FamilySpec::Riemann { a: 0.5, b: -0.5 }, FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 }] {
        assert!(spacelike_census(&family(spec)).unwrap().is_empty());
    }
}

#[test]
fn scherk_ends() {
    let data = family(FamilySpec::Scherk { b: 0.5 });
    let lattice = period_lattice(&data, TOL).unwrap();
    let e = end_census(&data, Some(&lattice), TOL).unwrap();
    assert_eq!(e.ends.len(), 2);
    for end in &e.ends {
        let z = end.location.z_finite().unwrap();
        let oracle = (0..3).map(|k| laurent_order(&|u| data.forms[k].eval(u), z)).max().unwrap();
        assert_eq!(end.pole_order, oracle);
        assert_eq!(end.omega_pole_order, laurent_order(&|u| data.omega.eval(u), z));
        assert_eq!(end.omega_pole_order, 1);
        assert_eq!(end.multiplicity, 1);
        assert!(end.scherk);
    }
    let signs: Vec<i64> = e.ends.iter().map(|x| x.signature.unwrap()).collect();
    assert_eq!(signs[0], -signs[1]);
    assert_eq!(e.signature_sum, Some(0));
    assert_eq!(e.w_infinity, 2);
    assert!(e.residue_defect < 1e-8);
}

#[test]
fn riemann_ends() {
    let data = family(FamilySpec::Riemann { a: 0.5, b: -0.5 });
    let lattice = period_lattice(&data, TOL).unwrap();
    let e = end_census(&data, Some(&lattice), TOL).unwrap();
    // One z-value, two sheets.
    assert_eq!(e.ends.len(), 2);
    assert!(e.ends.iter().all(|x| x.multiplicity == 1 && x.omega_pole_order == 1));
    assert_eq!(e.signature_sum, Some(0));
    assert_eq!(e.w_infinity, 2);
}

#[test]
fn doubly_has_no_ends() {
    let data = family(FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 });
    let lattice = period_lattice(&data, TOL).unwrap();
    let e = end_census(&data, Some(&lattice), TOL).unwrap();
    assert!(e.ends.is_empty());
    assert_eq!(e.w_infinity, 0);
}

/// `g = z`, `φ3 = dz/z` on a disk with its end at 0; the mirror end is at ∞.
#[test]
fn catenoid_end() {
    let data = disk_data(zpow(1), zpow(-1), &[c(0.0, 0.0)], 0);
    let e = end_census(&data, None, TOL).unwrap();
    assert_eq!(e.ends.len(), 1);
    let oracle = (0..3).map(|k| laurent_order(&|z| data.forms[k].eval(z), c(0.0, 0.0))).max().unwrap();
    assert_eq!(e.ends[0].pole_order, oracle);
    assert_eq!(e.ends[0].pole_order, 2);
    assert_eq!(e.ends[0].multiplicity, 1);
    assert_eq!(e.w_infinity, 2);
    // At ∞ in the chart u = 1/z, with dz = −du/u².
    let at_inf = (0..3)
        .map(|k| laurent_order(&|u| data.forms[k].eval(1.0 / u) * (-1.0 / (u * u)), c(0.0, 0.0)))
        .max()
        .unwrap();
    assert_eq!(-phi_order(&data, ExtComplex::Infinity).unwrap(), at_inf);
    assert_eq!(at_inf, 2);
}

#[test]
fn non_simple_scherk_pole_is_rejected() {
    // φ3 = dz/z² gives ω = φ3/g a double pole.
    let data = disk_data(zpow(1), zpow(-2), &[c(0.0, 0.0)], 1);
    let lattice = maxsurf::integrator::PeriodLattice { basis: vec![maxsurf::lorentz::Vec3::new(1.0, 0.0, 0.0)], cycles: vec![], boundary: vec![] };
    assert!(matches!(end_census(&data, Some(&lattice), TOL), Err(SingularityError::NonSimpleScherkPole { .. })));
}

#[test]
fn report_serializes_with_stable_keys() {
    let r = singularity_census(&family(FamilySpec::Scherk { b: 0.5 }), BranchingConvention::Shifted).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for k in ["lightlike", "spacelike", "v_s", "v_l", "deg_g", "convention"] {
        assert!(v.get(k).is_some(), "{k}");
    }
}
