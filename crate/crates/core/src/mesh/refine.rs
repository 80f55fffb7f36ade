use std::collections::HashMap;

use super::{mid_param, ParamMesh};
use crate::geometry::DomainSpec;
use crate::Result;

/// Uniform red refinement: every triangle is split into four through its
/// edge midpoints. Midpoints of boundary edges are placed on `∂U` at the
/// mean boundary parameter of the edge.
pub fn refine(mesh: &ParamMesh, domain: &DomainSpec) -> Result<ParamMesh> {
    let mut vertices = mesh.vertices().to_vec();
    let mut boundary_mid: HashMap<(usize, usize), f64> = HashMap::new();
    for e in mesh.boundary_edges() {
        let [a, b] = e.vertices;
        boundary_mid.insert((a.min(b), a.max(b)), mid_param(e.params[0], e.params[1]));
    }

    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            let p = match boundary_mid.get(&key) {
                Some(&t) => domain.boundary_point(t),
                None => {
                    let (p, q) = (vertices[a], vertices[b]);
                    [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]
                }
            };
            vertices.push(p);
            vertices.len() - 1
        })
    };

    let mut triangles = Vec::with_capacity(4 * mesh.num_triangles());
    for &[a, b, c] in mesh.triangles() {
        let ab = midpoint(a, b, &mut vertices);
        let bc = midpoint(b, c, &mut vertices);
        let ca = midpoint(c, a, &mut vertices);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }

    let mut boundary = Vec::with_capacity(2 * mesh.boundary_edges().len());
    for e in mesh.boundary_edges() {
        let [a, b] = e.vertices;
        let m = midpoints[&(a.min(b), a.max(b))];
        let tm = boundary_mid[&(a.min(b), a.max(b))];
        boundary.push(([a, m], [e.params[0], tm]));
        boundary.push(([m, b], [tm, e.params[1]]));
    }
    ParamMesh::new(vertices, triangles, boundary)
}
