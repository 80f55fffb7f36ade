//! Triangulations of the parameter domain `U`.
//!
//! Meshes have straight edges; boundary vertices sit exactly on `∂U` and each
//! carries its boundary parameter `t`. The discrete domain `U_h` is the
//! polygon they span.

mod generate;
mod io;
mod quadrature;
mod refine;

use std::collections::HashMap;

use serde::Serialize;

pub use generate::generate_mesh;
pub use io::{read_mesh_csv, write_mesh_csv, MeshCsv};
pub(crate) use io::writer as csv_writer;
pub use quadrature::{edge_quadrature, quadrature, EdgeRule, QuadratureRule};
pub use refine::refine;

use crate::linalg::{cross2, norm2, sub2, Vec2};
use crate::{Error, Result};

/// One edge of `∂U_h`, oriented counterclockwise around the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    /// Outward unit normal of the straight edge.
    pub normal: Vec2,
    /// Boundary parameters of the two endpoints on `∂U`.
    pub params: [f64; 2],
    /// The triangle containing this edge.
    pub triangle: usize,
}

impl BoundaryEdge {
    pub fn length(&self, mesh: &ParamMesh) -> f64 {
        let [a, b] = self.vertices;
        norm2(sub2(mesh.vertices[b], mesh.vertices[a]))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamMesh {
    vertices: Vec<Vec2>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    on_boundary: Vec<bool>,
}

impl ParamMesh {
    /// Build a mesh from counterclockwise triangles and the boundary edges
    /// `(a, b, t_a, t_b)`. Boundary edge orientation is taken from the
    /// owning triangle; normals and adjacency are derived.
    pub fn new(
        vertices: Vec<Vec2>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<([usize; 2], [f64; 2])>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if vertices.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::InvalidMesh("non-finite vertex coordinate".into()));
        }
        for (k, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("triangle {k} references a missing vertex")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {k} repeats a vertex")));
            }
            let area = signed_area(&vertices, tri);
            if !(area > 0.0) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {k} has non-positive signed area {area:e}"
                )));
            }
        }

        // Directed edge -> (triangle, count of the undirected edge).
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut undirected: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, tri) in triangles.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                if directed.insert((a, b), k).is_some() {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({a}, {b}) used twice with the same orientation"
                    )));
                }
                *undirected.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }

        let mut boundary_edges = Vec::with_capacity(boundary.len());
        let mut on_boundary = vec![false; nv];
        let mut seen = HashMap::new();
        for ([a, b], [ta, tb]) in boundary {
            if a >= nv || b >= nv || a == b {
                return Err(Error::InvalidMesh(format!("bad boundary edge ({a}, {b})")));
            }
            if !(ta.is_finite() && tb.is_finite()) {
                return Err(Error::InvalidMesh("non-finite boundary parameter".into()));
            }
            let key = (a.min(b), a.max(b));
            if undirected.get(&key) != Some(&1) {
                return Err(Error::InvalidMesh(format!(
                    "boundary edge ({a}, {b}) is not a free edge of the triangulation"
                )));
            }
            if seen.insert(key, ()).is_some() {
                return Err(Error::InvalidMesh(format!("boundary edge ({a}, {b}) listed twice")));
            }
            let (vs, ps, triangle) = if let Some(&t) = directed.get(&(a, b)) {
                ([a, b], [ta, tb], t)
            } else {
                ([b, a], [tb, ta], directed[&(b, a)])
            };
            let d = sub2(vertices[vs[1]], vertices[vs[0]]);
            let len = norm2(d);
            boundary_edges.push(BoundaryEdge {
                vertices: vs,
                normal: [d[1] / len, -d[0] / len],
                params: ps,
                triangle,
            });
            on_boundary[a] = true;
            on_boundary[b] = true;
        }
        let free_edges = undirected.values().filter(|&&c| c == 1).count();
        if undirected.values().any(|&c| c > 2) {
            return Err(Error::InvalidMesh("non-manifold edge".into()));
        }
        if free_edges != boundary_edges.len() {
            return Err(Error::InvalidMesh(format!(
                "{free_edges} free edges but {} boundary edges listed",
                boundary_edges.len()
            )));
        }

        Ok(ParamMesh {
            vertices,
            triangles,
            boundary_edges,
            on_boundary,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.on_boundary
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.on_boundary[v])
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Vec2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        signed_area(&self.vertices, &self.triangles[t])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut edges: Vec<[usize; 2]> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |e| [t[e].min(t[(e + 1) % 3]), t[e].max(t[(e + 1) % 3])]))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&[a, b]| norm2(sub2(self.vertices[b], self.vertices[a])))
            .fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_degrees(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for k in 0..3 {
                let u = sub2(p[(k + 1) % 3], p[k]);
                let v = sub2(p[(k + 2) % 3], p[k]);
                let ang = cross2(u, v).atan2(u[0] * v[0] + u[1] * v[1]);
                min = min.min(ang.to_degrees());
            }
        }
        min
    }

    /// `V − E + T`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    /// Gradients of the three barycentric basis functions on triangle `t`.
    pub fn basis_gradients(&self, t: usize) -> [Vec2; 3] {
        let [p0, p1, p2] = self.triangle_points(t);
        let twice_area = cross2(sub2(p1, p0), sub2(p2, p0));
        let inv = 1.0 / twice_area;
        [
            [(p1[1] - p2[1]) * inv, (p2[0] - p1[0]) * inv],
            [(p2[1] - p0[1]) * inv, (p0[0] - p2[0]) * inv],
            [(p0[1] - p1[1]) * inv, (p1[0] - p0[0]) * inv],
        ]
    }

    /// Point with barycentric coordinates `bary` in triangle `t`.
    pub fn barycentric_point(&self, t: usize, bary: [f64; 3]) -> Vec2 {
        let p = self.triangle_points(t);
        [
            bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0],
            bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1],
        ]
    }

    /// Relabel vertices so that old vertex `v` becomes `perm[v]`.
    pub fn renumbered(&self, perm: &[usize]) -> Result<ParamMesh> {
        let n = self.vertices.len();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        let mut vertices = vec![[0.0; 2]; n];
        for (old, &new) in perm.iter().enumerate() {
            vertices[new] = self.vertices[old];
        }
        let triangles = self
            .triangles
            .iter()
            .map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]])
            .collect();
        let boundary = self
            .boundary_edges
            .iter()
            .map(|e| ([perm[e.vertices[0]], perm[e.vertices[1]]], e.params))
            .collect();
        ParamMesh::new(vertices, triangles, boundary)
    }

    /// Same mesh with the triangle list permuted.
    pub fn with_triangle_order(&self, order: &[usize]) -> Result<ParamMesh> {
        let triangles = order.iter().map(|&k| self.triangles[k]).collect();
        let boundary = self
            .boundary_edges
            .iter()
            .map(|e| (e.vertices, e.params))
            .collect();
        ParamMesh::new(self.vertices.clone(), triangles, boundary)
    }
}

pub(crate) fn signed_area(vertices: &[Vec2], tri: &[usize; 3]) -> f64 {
    let [a, b, c] = *tri;
    0.5 * cross2(sub2(vertices[b], vertices[a]), sub2(vertices[c], vertices[a]))
}

/// Midpoint of two boundary parameters along the shorter arc.
pub(crate) fn mid_param(t0: f64, t1: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut d = (t1 - t0).rem_euclid(TAU);
    if d > PI {
        d -= TAU;
    }
    (t0 + 0.5 * d).rem_euclid(TAU)
}
