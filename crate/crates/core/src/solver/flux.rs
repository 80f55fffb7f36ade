use crate::assembly::{edge_nodes, SurfaceField};
use crate::geometry::{metric_frame, Chart};
use crate::linalg::dot3;
use crate::mesh::{edge_quadrature, ParamMesh};
use crate::Result;

/// `ν · ∇_Γ v` at the midpoint of every boundary edge, with `∇_Γ v` from the
/// triangle owning the edge.
pub fn conormal_derivative(chart: &Chart, mesh: &ParamMesh, v: &SurfaceField) -> Result<Vec<f64>> {
    v.check(mesh)?;
    mesh.boundary_edges()
        .iter()
        .map(|edge| {
            let [a, b] = edge.vertices;
            let (p, q) = (mesh.vertices()[a], mesh.vertices()[b]);
            let frame = metric_frame(chart, [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])])?;
            let grad = frame.tangential_gradient(v.parameter_gradient(mesh, edge.triangle));
            Ok(dot3(frame.conormal(edge.normal)?, grad))
        })
        .collect()
}

/// `‖∂v/∂ν‖_{L²(∂Γ₀)}` for the discrete field `v`.
pub fn flux_residual(chart: &Chart, mesh: &ParamMesh, v: &SurfaceField) -> Result<f64> {
    v.check(mesh)?;
    let rule = edge_quadrature(5);
    let mut s = 0.0;
    for (e, edge) in mesh.boundary_edges().iter().enumerate() {
        let dv = v.parameter_gradient(mesh, edge.triangle);
        for node in edge_nodes(chart, mesh, e, &rule)? {
            let d = dot3(node.frame.conormal(edge.normal)?, node.frame.tangential_gradient(dv));
            s += node.weight * d * d;
        }
    }
    Ok(s.sqrt())
}
