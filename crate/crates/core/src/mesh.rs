//! Triangle meshes of a fundamental piece and its translates.
//!
//! The `z`-disk is covered by a polar grid (both sheets on hyperelliptic
//! domains) whose radii accumulate geometrically at `|z| = 1`; grid nodes near
//! ends, poles and branch points are dropped. The column at angle `2π` is kept
//! as a separate slit column. Vertex positions come from integrating `Φ` along
//! grid edges over a spanning tree: outer ring first, then inward along rays.
//! Faces whose edges disagree with the tree (they straddle a cut behind a
//! hole) are dropped, and each boundary ring is collapsed to one vertex.

use crate::complex::{c, C64};
use crate::domain::{SurfacePoint, WeierstrassData};
use crate::integrator::{
    clearance, immerse, integrate_path, loop_around, period, IntegrationError, PathSpec, PeriodLattice, Segment,
};
use crate::lorentz::{inner, Vec3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("resolution must be at least 8, got {0}")]
    Resolution(usize),
    #[error("{count} faces collapse to zero area")]
    MeshDegenerate { count: usize },
    #[error("malformed mesh file: {0}")]
    Parse(String),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexTag {
    Regular,
    NearSingular,
    BoundaryCircle(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
    pub tags: Vec<VertexTag>,
    pub copies: usize,
    /// Copy index of every vertex.
    pub copy_of: Vec<usize>,
    /// Translation applied to copy `k` is `k · shift`.
    pub shift: Vec3,
    /// Index of a vertex in copy 0 for every vertex (its original).
    pub origin: Vec<usize>,
    /// Vertices that duplicate another vertex modulo the lattice (slit column).
    pub duplicate: Vec<bool>,
    pub stats: MeshStats,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub grid_nodes: usize,
    /// Grid vertices kept, over all sheets, before the rings are collapsed.
    pub grid_vertices: usize,
    pub ring_vertices: usize,
    pub cone_vertices: usize,
    pub dropped_faces: usize,
    /// Largest distance from a boundary-ring image to the ring's average.
    pub ring_spread: f64,
    /// Largest distance from a cut mismatch to the nearest lattice vector.
    pub cut_defect: f64,
    pub cut_edges: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshOptions {
    pub resolution: usize,
    pub copies: usize,
    pub tol: f64,
}

impl Default for MeshOptions {
    fn default() -> Self {
        Self { resolution: 32, copies: 1, tol: 1e-10 }
    }
}

/// Vertices whose metric factor is below this fraction of the median are near-singular.
pub const NEAR_SINGULAR_RATIO: f64 = 1e-3;
/// Closest approach of the grid to the unit circle, besides the circle itself.
const RIM_GAP: f64 = 1e-3;

struct Grid {
    nr: usize,
    nt: usize,
    radii: Vec<f64>,
}

impl Grid {
    fn new(res: usize) -> Self {
        let nr = res;
        let nt = 2 * res;
        let q = RIM_GAP.powf(1.0 / (nr - 1) as f64);
        let mut radii: Vec<f64> = (0..nr).map(|i| 1.0 - q.powi(i as i32)).collect();
        radii.push(1.0);
        Self { nr, nt, radii }
    }

    fn count(&self) -> usize {
        1 + self.nr * (self.nt + 1)
    }

    /// Node index of ring `i ≥ 1`, column `j ∈ 0..=nt`; ring 0 is the centre.
    fn node(&self, i: usize, j: usize) -> usize {
        if i == 0 {
            0
        } else {
            1 + (i - 1) * (self.nt + 1) + j
        }
    }

    fn z(&self, i: usize, j: usize) -> C64 {
        C64::from_polar(self.radii[i], std::f64::consts::TAU * j as f64 / self.nt as f64)
    }

    /// Directed edges `(from, to)` of the grid, by `(ring, column)`.
    fn edges(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = vec![];
        for j in 0..=self.nt {
            out.push(((0, 0), (1, j)));
        }
        for i in 1..=self.nr {
            for j in 0..=self.nt {
                if j < self.nt {
                    out.push(((i, j), (i, j + 1)));
                }
                if i < self.nr {
                    out.push(((i, j), (i + 1, j)));
                    if j < self.nt {
                        out.push(((i, j), (i + 1, j + 1)));
                    }
                }
            }
        }
        out
    }

    /// Triangles as node triples, oriented counterclockwise in `z`.
    fn triangles(&self) -> Vec<[(usize, usize); 3]> {
        let mut out = vec![];
        for j in 0..self.nt {
            out.push([(0, 0), (1, j), (1, j + 1)]);
        }
        for i in 1..self.nr {
            for j in 0..self.nt {
                out.push([(i, j), (i + 1, j), (i + 1, j + 1)]);
                out.push([(i, j), (i + 1, j + 1), (i, j + 1)]);
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
struct GridVertex {
    node: usize,
    ring: usize,
    column: usize,
    z: C64,
    w: C64,
}

fn sheet_label(data: &WeierstrassData, z: C64, w: C64) -> u8 {
    if !data.is_hyperelliptic() {
        return 0;
    }
    let p = data.domain.rhs_at(z).sqrt();
    u8::from((w - p).norm() > (w + p).norm())
}

fn principal(data: &WeierstrassData, z: C64, label: u8) -> C64 {
    if !data.is_hyperelliptic() {
        return c(1.0, 0.0);
    }
    let p = data.domain.rhs_at(z).sqrt();
    if label == 0 {
        p
    } else {
        -p
    }
}

/// Meshes the fundamental piece and `copies` translates along the first
/// lattice generator.
pub fn mesh_surface(data: &WeierstrassData, lattice: &PeriodLattice, opts: &MeshOptions) -> Result<SurfaceMesh, MeshError> {
    if opts.resolution < 8 {
        return Err(MeshError::Resolution(opts.resolution));
    }
    let grid = Grid::new(opts.resolution);
    let sing = data.singular_points();
    let holes: Vec<(C64, f64)> = sing
        .iter()
        .map(|&s| {
            let r = clearance(s, &sing);
            (s, if data.domain.is_branch_point(s) { 0.3 * r } else { 0.5 * r })
        })
        .collect();
    let hole = |z: C64| holes.iter().any(|&(s, r)| (z - s).norm() < r) || data.pole_distance(z) < 1e-6;
    let labels: &[u8] = if data.is_hyperelliptic() { &[0, 1] } else { &[0] };

    // Vertices of the grid on every sheet.
    let mut verts: Vec<GridVertex> = vec![];
    let mut index: HashMap<(usize, u8), usize> = HashMap::new();
    let mut add_node = |i: usize, j: usize| {
        let z = grid.z(i, j);
        if hole(z) {
            return;
        }
        let node = grid.node(i, j);
        for &l in labels {
            index.insert((node, l), verts.len());
            verts.push(GridVertex { node, ring: i, column: j, z, w: principal(data, z, l) });
        }
    };
    add_node(0, 0);
    for i in 1..=grid.nr {
        for j in 0..=grid.nt {
            add_node(i, j);
        }
    }

    // Edge integrals, in parallel; each edge is continued from its start sheet.
    let mut jobs = vec![];
    for (a, b) in grid.edges() {
        for &l in labels {
            if let (Some(&va), Some(_)) = (index.get(&(grid.node(a.0, a.1), l)), index.get(&(grid.node(b.0, b.1), 0))) {
                // Edges that cut deep into a hole are left out.
                let seg = Segment::line(grid.z(a.0, a.1), grid.z(b.0, b.1));
                if holes.iter().all(|&(s, r)| seg.distance_to(s) >= 0.5 * r) {
                    jobs.push((va, b));
                }
            }
        }
    }
    let results: Vec<Result<(usize, usize, Vec3), IntegrationError>> = jobs
        .par_iter()
        .map(|&(va, b)| {
            let v = verts[va];
            let zb = grid.z(b.0, b.1);
            let path = PathSpec::new(vec![Segment::line(v.z, zb)], data.is_hyperelliptic().then_some(v.w));
            let r = integrate_path(data, &path, opts.tol)?;
            let lb = r.end_w.map(|w| sheet_label(data, zb, w)).unwrap_or(0);
            let vb = index[&(grid.node(b.0, b.1), lb)];
            Ok((va, vb, r.real()))
        })
        .collect();
    let mut adj: Vec<Vec<(usize, Vec3)>> = vec![vec![]; verts.len()];
    let mut edge_map: HashMap<(usize, usize), Vec3> = HashMap::new();
    for r in results {
        let (a, b, d) = r?;
        adj[a].push((b, d));
        adj[b].push((a, -d));
        edge_map.insert((a, b), d);
        edge_map.insert((b, a), -d);
    }

    // Spanning tree: outer ring, then inward rays, then breadth-first.
    let mut pos: Vec<Option<Vec3>> = vec![None; verts.len()];
    let step = |pos: &mut Vec<Option<Vec3>>, from: usize, to: usize| -> bool {
        if pos[to].is_some() {
            return true;
        }
        match (pos[from], edge_map.get(&(from, to))) {
            (Some(x), Some(d)) => {
                pos[to] = Some(x + d);
                true
            }
            _ => false,
        }
    };
    let outer = grid.nr;
    let seed = |pos: &mut Vec<Option<Vec3>>, v: usize| -> Result<(), IntegrationError> {
        let g = verts[v];
        let sp = if data.is_hyperelliptic() { SurfacePoint::on_curve(g.z, g.w) } else { SurfacePoint::plane(g.z) };
        pos[v] = Some(immerse(data, &sp, opts.tol)?);
        Ok(())
    };
    // Every boundary ring is followed from its own seed before anything else.
    let ring_roots: Vec<usize> = (0..verts.len()).filter(|&v| verts[v].ring == outer && verts[v].column == 0).collect();
    for root in ring_roots {
        if pos[root].is_some() {
            continue;
        }
        seed(&mut pos, root)?;
        let mut cur = root;
        for _ in 0..grid.nt {
            let next = adj[cur].iter().map(|&(b, _)| b).find(|&b| verts[b].ring == outer && verts[b].column == verts[cur].column + 1);
            match next {
                Some(b) if step(&mut pos, cur, b) => cur = b,
                _ => break,
            }
        }
    }
    loop {
        // Inward along every ray that starts on a reached outer vertex.
        let ring_vs: Vec<usize> = (0..verts.len()).filter(|&v| verts[v].ring == outer && pos[v].is_some()).collect();
        for start in ring_vs {
            let mut cur = start;
            loop {
                let (ri, cj) = (verts[cur].ring, verts[cur].column);
                if ri == 0 {
                    break;
                }
                let next = adj[cur]
                    .iter()
                    .map(|&(b, _)| b)
                    .find(|&b| verts[b].ring + 1 == ri && (verts[b].column == cj || verts[b].ring == 0));
                match next {
                    Some(b) if step(&mut pos, cur, b) => cur = b,
                    _ => break,
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..verts.len()).filter(|&v| pos[v].is_some()).collect();
        while let Some(a) = queue.pop_front() {
            for &(b, _) in &adj[a] {
                if pos[b].is_none() && step(&mut pos, a, b) {
                    queue.push_back(b);
                }
            }
        }
        match (0..verts.len()).find(|&v| pos[v].is_none()) {
            Some(v) => seed(&mut pos, v)?,
            None => break,
        }
    }
    let pos: Vec<Vec3> = pos.into_iter().map(|p| p.unwrap()).collect();

    // Mismatches across cuts must be lattice vectors.
    let scale = lattice.basis.iter().map(|b| b.norm()).fold(1.0f64, f64::max);
    let consistent = |a: usize, b: usize| -> Option<bool> {
        edge_map.get(&(a, b)).map(|d| (pos[b] - pos[a] - d).norm() <= 1e-6 * scale)
    };
    let mut stats = MeshStats {
        grid_nodes: grid.count(),
        grid_vertices: verts.len(),
        ring_vertices: verts.iter().filter(|v| v.ring == outer).count(),
        ..Default::default()
    };
    for (&(a, b), d) in &edge_map {
        if a < b {
            let m = pos[b] - pos[a] - d;
            if m.norm() > 1e-6 * scale {
                stats.cut_edges += 1;
                stats.cut_defect = stats.cut_defect.max((m - lattice.nearest(&m)).norm());
            }
        }
    }

    // Faces, on every sheet of their first corner.
    let mut faces: Vec<[usize; 3]> = vec![];
    for tri in grid.triangles() {
        let n0 = grid.node(tri[0].0, tri[0].1);
        for &l in labels {
            let Some(&a) = index.get(&(n0, l)) else { continue };
            let target = |from: usize, node: usize| adj[from].iter().map(|&(b, _)| b).find(|&b| verts[b].node == node);
            let (n1, n2) = (grid.node(tri[1].0, tri[1].1), grid.node(tri[2].0, tri[2].1));
            let (Some(b), Some(cc)) = (target(a, n1), target(a, n2)) else {
                stats.dropped_faces += 1;
                continue;
            };
            let ok = consistent(a, b) == Some(true) && consistent(a, cc) == Some(true) && consistent(b, cc) == Some(true);
            if ok {
                faces.push([a, b, cc]);
            } else {
                stats.dropped_faces += 1;
            }
        }
    }

    // Boundary rings collapse to one vertex per circle.
    let circle_of = |v: &GridVertex| -> usize {
        if !data.is_hyperelliptic() {
            return 0;
        }
        // Continue w from the vertex back to z = 1 along the circle.
        let back = data.domain.continue_sheet(&|t| C64::from_polar(1.0, (1.0 - t) * std::f64::consts::TAU * v.column as f64 / grid.nt as f64), v.w);
        let w1 = back.unwrap_or(v.w);
        data.domain
            .circles
            .iter()
            .find(|c0| c0.w_at_one.is_some_and(|w| (w - w1).norm() <= (w + w1).norm()) || c0.turns == 2)
            .map(|c0| c0.id)
            .unwrap_or(0)
    };
    let mut new_index = vec![usize::MAX; verts.len()];
    let mut vertices: Vec<Vec3> = vec![];
    let mut tags: Vec<VertexTag> = vec![];
    let mut duplicate: Vec<bool> = vec![];
    let mut cone_sum: HashMap<usize, (Vec3, usize, usize)> = HashMap::new();
    let mf: Vec<f64> = verts.iter().map(|v| data.metric_factor_unchecked(v.z, v.w)).collect();
    let mut sorted: Vec<f64> = mf.iter().copied().filter(|x| x.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let median = sorted.get(sorted.len() / 2).copied().unwrap_or(0.0);
    for (k, v) in verts.iter().enumerate() {
        if v.ring == outer {
            let id = circle_of(v);
            let e = cone_sum.entry(id).or_insert_with(|| {
                vertices.push(Vec3::zeros());
                tags.push(VertexTag::BoundaryCircle(id));
                duplicate.push(false);
                (Vec3::zeros(), 0, vertices.len() - 1)
            });
            e.0 += pos[k];
            e.1 += 1;
            new_index[k] = e.2;
        } else {
            new_index[k] = vertices.len();
            vertices.push(pos[k]);
            tags.push(if mf[k] < NEAR_SINGULAR_RATIO * median { VertexTag::NearSingular } else { VertexTag::Regular });
            duplicate.push(v.column == grid.nt && v.ring > 0);
        }
    }
    for (sum, n, idx) in cone_sum.values() {
        vertices[*idx] = sum / *n as f64;
    }
    stats.cone_vertices = cone_sum.len();
    for (k, v) in verts.iter().enumerate() {
        if v.ring == outer {
            let centre = vertices[new_index[k]];
            stats.ring_spread = stats.ring_spread.max((pos[k] - centre).norm());
        }
    }
    let mut out_faces = vec![];
    for f in faces {
        let g = [new_index[f[0]], new_index[f[1]], new_index[f[2]]];
        if g[0] == g[1] || g[1] == g[2] || g[0] == g[2] {
            continue;
        }
        out_faces.push(g);
    }
    let degenerate = out_faces
        .iter()
        .filter(|f| (vertices[f[1]] - vertices[f[0]]).cross(&(vertices[f[2]] - vertices[f[0]])).norm() == 0.0)
        .count();
    if degenerate > 0 {
        return Err(MeshError::MeshDegenerate { count: degenerate });
    }

    // Translates along a freshly integrated generator loop.
    let shift = if lattice.rank() > 0 && opts.copies > 1 { generator_shift(data, lattice, opts.tol)? } else { Vec3::zeros() };
    let base_n = vertices.len();
    let mut mesh = SurfaceMesh {
        vertices: vec![],
        faces: vec![],
        tags: vec![],
        copies: opts.copies.max(1),
        copy_of: vec![],
        shift,
        origin: vec![],
        duplicate: vec![],
        stats,
    };
    for k in 0..mesh.copies {
        let off = shift * k as f64;
        mesh.vertices.extend(vertices.iter().map(|v| v + off));
        mesh.tags.extend(tags.iter().copied());
        mesh.duplicate.extend(duplicate.iter().copied());
        mesh.copy_of.extend(std::iter::repeat_n(k, base_n));
        mesh.origin.extend(0..base_n);
        mesh.faces.extend(out_faces.iter().map(|f| [f[0] + k * base_n, f[1] + k * base_n, f[2] + k * base_n]));
    }
    Ok(mesh)
}

/// Period of the first generating cycle that is not zero, re-integrated.
fn generator_shift(data: &WeierstrassData, lattice: &PeriodLattice, tol: f64) -> Result<Vec3, MeshError> {
    let target = lattice.basis[0];
    let sing = data.singular_points();
    for e in &data.domain.ends {
        let Some(z) = e.z_finite() else { continue };
        let p = period(data, &loop_around(data, e, 0.5 * clearance(z, &sing))?, tol)?.vector;
        if (p - target).norm() <= 1e-6 * target.norm() {
            return Ok(p);
        }
        if (p + target).norm() <= 1e-6 * target.norm() {
            return Ok(-p);
        }
    }
    Ok(target)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeshChecks {
    /// Largest deviation of copy-to-copy differences from the lattice generator.
    pub periodicity_defect: f64,
    pub periodicity_ok: bool,
    /// Edges away from near-singular vertices that fail to be spacelike.
    pub non_spacelike_edges: usize,
    pub spacelike_ok: bool,
    /// Non-adjacent vertex pairs of one fundamental piece whose projections
    /// to `x3 = 0` come closer than a quarter of the local spacing.
    pub projection_collisions: usize,
    pub injective_ok: bool,
    pub ring_spread: f64,
    pub ring_ok: bool,
}

/// Periodicity, spacelike edges, injective projection and ring contraction.
pub fn check_mesh(mesh: &SurfaceMesh, lattice: &PeriodLattice, tol: f64) -> MeshChecks {
    let mut out = MeshChecks::default();
    let n0 = mesh.copy_of.iter().filter(|&&k| k == 0).count();
    if mesh.copies > 1 {
        let gen = lattice.basis.first().copied().unwrap_or_else(Vec3::zeros);
        let mut worst = 0.0f64;
        for (v, &k) in mesh.copy_of.iter().enumerate() {
            if k + 1 < mesh.copies {
                let d = mesh.vertices[v + n0] - mesh.vertices[v];
                worst = worst.max((d - gen).norm().min((d + gen).norm()));
            }
        }
        out.periodicity_defect = worst;
    }
    out.periodicity_ok = out.periodicity_defect <= 10.0 * tol;

    let near = |v: usize| mesh.tags[v] != VertexTag::Regular;
    let mut neighbours: Vec<Vec<usize>> = vec![vec![]; mesh.vertices.len()];
    for f in &mesh.faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            neighbours[a].push(b);
            neighbours[b].push(a);
            if a < b && !near(a) && !near(b) {
                let d = mesh.vertices[b] - mesh.vertices[a];
                if inner(&d, &d) <= 0.0 {
                    out.non_spacelike_edges += 1;
                }
            }
        }
    }
    out.spacelike_ok = out.non_spacelike_edges == 0;

    // Projection of copy 0 without the slit duplicates.
    let ids: Vec<usize> = (0..n0).filter(|&v| !mesh.duplicate[v]).collect();
    let proj = |v: usize| (mesh.vertices[v].x, mesh.vertices[v].y);
    let spacing: Vec<f64> = (0..mesh.vertices.len())
        .map(|v| {
            neighbours[v]
                .iter()
                .map(|&b| {
                    let (p, q) = (proj(v), proj(b));
                    (p.0 - q.0).hypot(p.1 - q.1)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let cell = {
        let mut s: Vec<f64> = ids.iter().map(|&v| spacing[v]).filter(|x| x.is_finite() && *x > 0.0).collect();
        s.sort_by(f64::total_cmp);
        s.get(s.len() / 2).copied().unwrap_or(1.0).max(1e-12)
    };
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for &v in &ids {
        let (x, y) = proj(v);
        buckets.entry(((x / cell).floor() as i64, (y / cell).floor() as i64)).or_default().push(v);
    }
    for &v in &ids {
        let (x, y) = proj(v);
        let (bx, by) = ((x / cell).floor() as i64, (y / cell).floor() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &u in buckets.get(&(bx + dx, by + dy)).map(|b| b.as_slice()).unwrap_or(&[]) {
                    if u <= v || neighbours[v].contains(&u) {
                        continue;
                    }
                    let (p, q) = (proj(u), proj(v));
                    let lim = 0.25 * spacing[u].min(spacing[v]);
                    if (p.0 - q.0).hypot(p.1 - q.1) < lim {
                        out.projection_collisions += 1;
                    }
                }
            }
        }
    }
    out.injective_ok = out.projection_collisions == 0;
    out.ring_spread = mesh.stats.ring_spread;
    out.ring_ok = out.ring_spread <= 10.0 * tol;
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshFormat {
    Obj,
    Ply,
}

/// ASCII OBJ or PLY text; coordinates use the shortest round-trip form.
pub fn mesh_to_string(mesh: &SurfaceMesh, format: MeshFormat) -> String {
    let mut s = String::new();
    match format {
        MeshFormat::Obj => {
            s.push_str("# maxsurf mesh\n");
            for v in &mesh.vertices {
                let _ = writeln!(s, "v {:e} {:e} {:e}", v.x, v.y, v.z);
            }
            for f in &mesh.faces {
                let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
            }
        }
        MeshFormat::Ply => {
            s.push_str("ply\nformat ascii 1.0\ncomment maxsurf mesh\n");
            let _ = writeln!(s, "element vertex {}", mesh.vertices.len());
            s.push_str("property double x\nproperty double y\nproperty double z\n");
            let _ = writeln!(s, "element face {}", mesh.faces.len());
            s.push_str("property list uchar int vertex_indices\nend_header\n");
            for v in &mesh.vertices {
                let _ = writeln!(s, "{:e} {:e} {:e}", v.x, v.y, v.z);
            }
            for f in &mesh.faces {
                let _ = writeln!(s, "3 {} {} {}", f[0], f[1], f[2]);
            }
        }
    }
    s
}

pub fn export_mesh(mesh: &SurfaceMesh, format: MeshFormat, path: &Path) -> Result<(), MeshError> {
    std::fs::write(path, mesh_to_string(mesh, format))?;
    Ok(())
}

/// Vertices and faces of an OBJ file (triangles only).
pub fn parse_obj(text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 3]>), MeshError> {
    let mut vs = vec![];
    let mut fs = vec![];
    for (n, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        let bad = || MeshError::Parse(format!("line {}: {line}", n + 1));
        match it.next() {
            Some("v") => {
                let x: Vec<f64> = it.map(|t| t.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
                if x.len() != 3 {
                    return Err(bad());
                }
                vs.push(Vec3::new(x[0], x[1], x[2]));
            }
            Some("f") => {
                let x: Vec<usize> = it
                    .map(|t| t.split('/').next().unwrap_or("").parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_, _>>()?;
                if x.len() != 3 || x.iter().any(|&i| i == 0 || i > vs.len()) {
                    return Err(bad());
                }
                fs.push([x[0] - 1, x[1] - 1, x[2] - 1]);
            }
            _ => {}
        }
    }
    Ok((vs, fs))
}
