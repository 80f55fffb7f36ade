use super::ParamMesh;
use crate::linalg::{norm2, sub2, Vec2};
use crate::geometry::DomainSpec;
use crate::{Error, Result};

const MIN_ANGLE_DEGREES: f64 = 20.0;
const MAX_EDGE_FACTOR: f64 = 1.5;

/// Layered triangulation of `U`: a center vertex surrounded by `K` scaled
/// copies of `∂U`, ring `k` carrying about `perimeter_k / spacing` vertices
/// equally spaced in arc length, consecutive rings stitched by a merge on
/// arc fraction.
///
/// Fails with [`Error::MeshFailure`] if the result has an edge longer than
/// `1.5 h` or an angle below 20°.
pub fn generate_mesh(domain: &DomainSpec, h: f64) -> Result<ParamMesh> {
    domain.validate()?;
    let diameter = domain.diameter();
    if !(h > 0.0 && h < diameter) {
        return Err(Error::InvalidInput(format!(
            "target edge length {h} outside (0, {diameter})"
        )));
    }
    let (a, b) = domain.semi_axes();
    let c = domain.center();
    let layers = (a.max(b) / h).ceil().max(1.0) as usize;
    let spacing = (a * b).sqrt() / layers as f64;
    let perimeter = domain.perimeter();

    let mut vertices = vec![c];
    let mut rings: Vec<Vec<usize>> = Vec::with_capacity(layers);
    let mut outer_params = Vec::new();
    for k in 1..=layers {
        let scale = k as f64 / layers as f64;
        let count = ((perimeter * scale / spacing).round() as usize).max(3);
        let offset = if k % 2 == 1 { 0.0 } else { 0.5 };
        let params = domain.equidistributed_params(count, offset);
        let mut ids = Vec::with_capacity(count);
        for &t in &params {
            let p = if k == layers {
                domain.boundary_point(t)
            } else {
                let q = domain.boundary_point(t);
                [c[0] + scale * (q[0] - c[0]), c[1] + scale * (q[1] - c[1])]
            };
            ids.push(vertices.len());
            vertices.push(p);
        }
        if k == layers {
            outer_params = params;
        }
        rings.push(ids);
    }

    let mut triangles = Vec::new();
    let first = &rings[0];
    for j in 0..first.len() {
        triangles.push([0, first[j], first[(j + 1) % first.len()]]);
    }
    for w in rings.windows(2) {
        stitch(&vertices, &w[0], &w[1], &mut triangles);
    }

    let outer = &rings[layers - 1];
    let n = outer.len();
    let boundary = (0..n)
        .map(|j| {
            (
                [outer[j], outer[(j + 1) % n]],
                [outer_params[j], outer_params[(j + 1) % n]],
            )
        })
        .collect();

    let mesh = ParamMesh::new(vertices, triangles, boundary)
        .map_err(|e| Error::MeshFailure(e.to_string()))?;
    let max_edge = mesh.max_edge_length();
    if max_edge > MAX_EDGE_FACTOR * h {
        return Err(Error::MeshFailure(format!(
            "longest edge {max_edge:.4} exceeds {MAX_EDGE_FACTOR} h = {:.4}",
            MAX_EDGE_FACTOR * h
        )));
    }
    let min_angle = mesh.min_angle_degrees();
    if min_angle < MIN_ANGLE_DEGREES {
        return Err(Error::MeshFailure(format!(
            "smallest angle {min_angle:.2} deg below {MIN_ANGLE_DEGREES} deg"
        )));
    }
    Ok(mesh)
}

/// Triangulate the annulus between an inner and an outer ring, both listed
/// counterclockwise from arc fraction near zero, always closing the strip
/// with the shorter of the two candidate diagonals.
fn stitch(vertices: &[Vec2], inner: &[usize], outer: &[usize], out: &mut Vec<[usize; 3]>) {
    let (m, n) = (inner.len(), outer.len());
    let dist = |p: usize, q: usize| norm2(sub2(vertices[p], vertices[q]));
    let (mut i, mut j) = (0, 0);
    while i < m || j < n {
        let (a, a_next) = (inner[i % m], inner[(i + 1) % m]);
        let (b, b_next) = (outer[j % n], outer[(j + 1) % n]);
        let advance_outer = if i == m {
            true
        } else if j == n {
            false
        } else {
            dist(a, b_next) <= dist(a_next, b)
        };
        if advance_outer {
            out.push([a, b, b_next]);
            j += 1;
        } else {
            out.push([a, b, a_next]);
            i += 1;
        }
    }
}
