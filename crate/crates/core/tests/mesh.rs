mod common;

use common::*;
use maxsurf::families::{build_family, FamilySpec};
use maxsurf::integrator::{period_lattice, PeriodLattice};
use maxsurf::lorentz::{inner, Vec3};
use maxsurf::mesh::*;

const TOL: f64 = 1e-10;

fn quad() -> SurfaceMesh {
    SurfaceMesh {
        vertices: vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 0.5), Vec3::new(0.0, 1.0, 0.25)],
        faces: vec![[0, 1, 2], [0, 2, 3]],
        tags: vec![VertexTag::Regular; 4],
        copies: 1,
        copy_of: vec![0; 4],
        origin: (0..4).collect(),
        duplicate: vec![false; 4],
        ..Default::default()
    }
}

fn empty_lattice() -> PeriodLattice {
    PeriodLattice { basis: vec![], cycles: vec![], boundary: vec![] }
}

fn meshed(spec: FamilySpec, resolution: usize, copies: usize) -> (SurfaceMesh, PeriodLattice) {
    let data = build_family(spec).unwrap().data;
    let lattice = period_lattice(&data, TOL).unwrap();
    let mesh = mesh_surface(&data, &lattice, &MeshOptions { resolution, copies, tol: TOL }).unwrap();
    (mesh, lattice)
}

#[test]
fn golden_obj() {
    assert_eq!(mesh_to_string(&quad(), MeshFormat::Obj), include_str!("golden/quad.obj"));
}

#[test]
fn golden_ply() {
    assert_eq!(mesh_to_string(&quad(), MeshFormat::Ply), include_str!("golden/quad.ply"));
}

#[test]
fn obj_round_trip_of_a_family_mesh() {
    let (mesh, _) = meshed(FamilySpec::Scherk { b: 0.5 }, 12, 1);
    let dir = std::env::temp_dir().join(format!("maxsurf-mesh-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scherk.obj");
    export_mesh(&mesh, MeshFormat::Obj, &path).unwrap();
    let (v, f) = parse_obj(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(f, mesh.faces);
    assert_eq!(v.len(), mesh.vertices.len());
    for (a, b) in v.iter().zip(&mesh.vertices) {
        assert!((a - b).norm() <= 1e-6 * (1.0 + b.norm()));
    }
}

#[test]
fn malformed_obj_is_rejected() {
    for text in ["v 1 2\n", "v 0 0 0\nf 1 2 3\n", "v a b c\n", "v 0 0 0\nf 0 1 1\n"] {
        assert!(matches!(parse_obj(text), Err(MeshError::Parse(_))), "{text:?}");
    }
}

#[test]
fn low_resolution_is_rejected() {
    let data = build_family(FamilySpec::Scherk { b: 0.5 }).unwrap().data;
    let lattice = period_lattice(&data, TOL).unwrap();
    let r = mesh_surface(&data, &lattice, &MeshOptions { resolution: 4, ..Default::default() });
    assert!(matches!(r, Err(MeshError::Resolution(4))));
}

#[test]
fn vertex_bookkeeping() {
    for spec in [FamilySpec::Scherk { b: 0.5 }, FamilySpec::Riemann { a: 0.5, b: -0.5 }, FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 }] {
        let (mesh, _) = meshed(spec, 16, 2);
        let s = &mesh.stats;
        let per_copy = s.grid_vertices - s.ring_vertices + s.cone_vertices;
        assert_eq!(mesh.vertices.len(), 2 * per_copy, "{spec:?}: {s:?}");
        assert_eq!(mesh.tags.len(), mesh.vertices.len());
        assert_eq!(mesh.copy_of.iter().filter(|&&k| k == 1).count(), per_copy);
        assert!(mesh.faces.iter().flatten().all(|&i| i < mesh.vertices.len()));
        for (v, &o) in mesh.origin.iter().enumerate() {
            assert_eq!(mesh.copy_of[o], 0);
            assert!((mesh.vertices[v] - mesh.vertices[o] - mesh.shift * mesh.copy_of[v] as f64).norm() < 1e-9);
        }
    }
}

#[test]
fn rings_contract_and_pieces_are_embedded() {
    for spec in [FamilySpec::Scherk { b: 0.5 }, FamilySpec::Riemann { a: 0.5, b: -0.5 }, FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 }] {
        let (mesh, lattice) = meshed(spec, 24, 1);
        let ch = check_mesh(&mesh, &lattice, TOL);
        assert!(ch.ring_ok && mesh.stats.ring_spread <= 10.0 * TOL, "{spec:?}: {ch:?}");
        assert!(ch.spacelike_ok && ch.injective_ok, "{spec:?}: {ch:?}");
    }
}

#[test]
fn copies_are_translated_by_the_period() {
    let b = 0.5;
    let (mesh, lattice) = meshed(FamilySpec::Scherk { b }, 16, 3);
    assert_eq!(mesh.copies, 3);
    let want = Vec3::new(scherk_translation(b), 0.0, 0.0);
    assert!((mesh.shift - want).norm() < 1e-8 || (mesh.shift + want).norm() < 1e-8, "{}", mesh.shift);
    let ch = check_mesh(&mesh, &lattice, TOL);
    assert!(ch.periodicity_ok, "{ch:?}");
    let n0 = mesh.copy_of.iter().filter(|&&k| k == 0).count();
    for v in 0..n0 {
        let d = mesh.vertices[v + 2 * n0] - mesh.vertices[v];
        assert!((d - 2.0 * mesh.shift).norm() < 1e-9);
    }
}

#[test]
fn edges_of_family_meshes_are_spacelike() {
    let (mesh, _) = meshed(FamilySpec::Doubly { a1: 0.5, a2: 1.0 / 3.0 }, 16, 1);
    for f in &mesh.faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            if mesh.tags[a] == VertexTag::Regular && mesh.tags[b] == VertexTag::Regular {
                let d = mesh.vertices[b] - mesh.vertices[a];
                assert!(inner(&d, &d) > 0.0);
            }
        }
    }
}

#[test]
fn timelike_edge_is_detected() {
    let mut m = quad();
    m.vertices[2].z = 3.0;
    let ch = check_mesh(&m, &empty_lattice(), TOL);
    assert!(!ch.spacelike_ok && ch.non_spacelike_edges >= 1);
    assert!(check_mesh(&quad(), &empty_lattice(), TOL).spacelike_ok);
}

#[test]
fn folded_projection_is_detected() {
    // A fifth vertex, not joined to vertex 0, lands on top of it in the projection.
    let mut m = quad();
    m.vertices.push(Vec3::new(1e-4, 1e-4, -0.1));
    m.vertices.push(Vec3::new(2.0, 0.0, 0.0));
    m.faces.push([1, 5, 4]);
    m.tags.extend([VertexTag::Regular; 2]);
    m.copy_of.extend([0, 0]);
    m.origin.extend([4, 5]);
    m.duplicate.extend([false, false]);
    let ch = check_mesh(&m, &empty_lattice(), TOL);
    assert!(!ch.injective_ok && ch.projection_collisions >= 1, "{ch:?}");
    assert!(check_mesh(&quad(), &empty_lattice(), TOL).injective_ok);
}
