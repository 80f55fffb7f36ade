//! Finite element operators on `Γ₀` in parameter coordinates.
//!
//! Integrals over the surface are computed on `U_h` with the area element:
//! `∫_{Γ₀} ψ = ∫_U ψ̂ √G dX`. Element contributions are computed in
//! parallel and merged in triangle order, so results do not depend on the
//! number of worker threads.

mod diffops;
mod field;
mod norms;
mod operators;

pub use diffops::{recover_nodal_gradient, surface_divergence, tangential_gradient};
pub use field::{SurfaceField, SurfaceVectorField, TriangleVectorField};
pub use norms::{boundary_lp_norm, h1_seminorm, integrate, lp_norm, parameter_lp_norm};
pub use operators::{boundary_mass, load, load_with_frame, mass, stiffness};

use rayon::prelude::*;

use crate::geometry::{metric_frame, Chart, MetricFrame};
use crate::mesh::{EdgeRule, ParamMesh, QuadratureRule};
use crate::Result;

/// One quadrature node of a triangle: barycentric coordinates, the weight
/// `w · |T| · √G`, and the metric frame there.
pub(crate) struct Node {
    pub bary: [f64; 3],
    pub weight: f64,
    pub frame: MetricFrame,
}

pub(crate) fn triangle_nodes(
    chart: &Chart,
    mesh: &ParamMesh,
    t: usize,
    quad: &QuadratureRule,
) -> Result<Vec<Node>> {
    let area = mesh.triangle_area(t);
    quad.iter()
        .map(|(bary, w)| {
            let frame = metric_frame(chart, mesh.barycentric_point(t, bary))?;
            Ok(Node {
                bary,
                weight: w * area * frame.sqrt_det,
                frame,
            })
        })
        .collect()
}

/// One quadrature node of a boundary edge: parameter along the edge,
/// weight `w · |e| · |n₁ᵁg₂ − n₂ᵁg₁|`, and the frame there.
pub(crate) struct EdgeNode {
    pub s: f64,
    pub weight: f64,
    pub frame: MetricFrame,
}

pub(crate) fn edge_nodes(
    chart: &Chart,
    mesh: &ParamMesh,
    e: usize,
    rule: &EdgeRule,
) -> Result<Vec<EdgeNode>> {
    let edge = &mesh.boundary_edges()[e];
    let [a, b] = edge.vertices;
    let (p, q) = (mesh.vertices()[a], mesh.vertices()[b]);
    let len = edge.length(mesh);
    rule.iter()
        .map(|(s, w)| {
            let x = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])];
            let frame = metric_frame(chart, x)?;
            Ok(EdgeNode {
                s,
                weight: w * len * frame.boundary_speed(edge.normal),
                frame,
            })
        })
        .collect()
}

/// Evaluate `f` on every triangle in parallel, preserving order.
pub(crate) fn per_triangle<T, F>(mesh: &ParamMesh, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..mesh.num_triangles()).into_par_iter().map(f).collect()
}
