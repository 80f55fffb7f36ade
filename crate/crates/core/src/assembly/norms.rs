use super::{edge_nodes, per_triangle, triangle_nodes, SurfaceField};
use crate::geometry::Chart;
use crate::mesh::{edge_quadrature, ParamMesh, QuadratureRule};
use crate::{Error, Result};

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("norm exponent must lie in [1, inf), got {p}")))
    }
}

/// `∫_{Γ₀} f dH²` for an integrand evaluated from the frame and the
/// triangle/barycentric location.
pub fn integrate<F>(chart: &Chart, mesh: &ParamMesh, quad: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(usize, [f64; 3], &crate::geometry::MetricFrame) -> f64 + Sync + Send,
{
    let parts = per_triangle(mesh, |t| {
        Ok(triangle_nodes(chart, mesh, t, quad)?
            .iter()
            .map(|n| n.weight * f(t, n.bary, &n.frame))
            .sum::<f64>())
    })?;
    Ok(parts.iter().sum())
}

/// `‖ψ‖_{L^p(Γ₀)} = (∫_U |φ|^p √G dX)^{1/p}`.
pub fn lp_norm(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    field: &SurfaceField,
    p: f64,
) -> Result<f64> {
    check_p(p)?;
    field.check(mesh)?;
    let s = integrate(chart, mesh, quad, |t, bary, _| field.at(mesh, t, bary).abs().powf(p))?;
    Ok(s.powf(1.0 / p))
}

/// `‖φ‖_{L^p(U)}`, the same integral without the area element.
pub fn parameter_lp_norm(
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    field: &SurfaceField,
    p: f64,
) -> Result<f64> {
    check_p(p)?;
    field.check(mesh)?;
    let mut s = 0.0;
    for t in 0..mesh.num_triangles() {
        let area = mesh.triangle_area(t);
        for (bary, w) in quad.iter() {
            s += w * area * field.at(mesh, t, bary).abs().powf(p);
        }
    }
    Ok(s.powf(1.0 / p))
}

/// `‖∇_Γ ψ‖_{L²(Γ₀)}`.
pub fn h1_seminorm(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    field: &SurfaceField,
) -> Result<f64> {
    field.check(mesh)?;
    let s = integrate(chart, mesh, quad, |t, _, frame| {
        let d = field.parameter_gradient(mesh, t);
        frame.inner(d, d)
    })?;
    Ok(s.sqrt())
}

/// `‖γψ‖_{L^p(∂Γ₀)}` with the line element of `∂Γ₀` pulled back to `∂U_h`.
pub fn boundary_lp_norm(chart: &Chart, mesh: &ParamMesh, field: &SurfaceField, p: f64) -> Result<f64> {
    check_p(p)?;
    field.check(mesh)?;
    let rule = edge_quadrature(5);
    let mut s = 0.0;
    for (e, edge) in mesh.boundary_edges().iter().enumerate() {
        let [a, b] = edge.vertices;
        for node in edge_nodes(chart, mesh, e, &rule)? {
            let v = (1.0 - node.s) * field.values[a] + node.s * field.values[b];
            s += node.weight * v.abs().powf(p);
        }
    }
    Ok(s.powf(1.0 / p))
}
