use std::io::Write;

use serde::Serialize;

use crate::assembly::{edge_nodes, integrate};
use crate::functions::{SmoothScalar, SmoothVector};
use crate::geometry::Chart;
use crate::linalg::dot3;
use crate::mesh::{csv_writer, edge_quadrature, ParamMesh, QuadratureRule};
use crate::Result;

/// Both sides of a checked identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_defect: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|, 1e-30)`.
    pub rel_defect: f64,
    pub mesh_h: f64,
    pub quadrature_order: usize,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, mesh: &ParamMesh, quad: &QuadratureRule) -> Self {
        let abs_defect = (lhs - rhs).abs();
        IdentityReport {
            name: name.into(),
            lhs,
            rhs,
            abs_defect,
            rel_defect: abs_defect / lhs.abs().max(rhs.abs()).max(1e-30),
            mesh_h: mesh.max_edge_length(),
            quadrature_order: quad.order,
        }
    }
}

/// `∮_{∂Γ₀} g dH¹` for an integrand of the co-normal and the point.
fn boundary_integral<G>(chart: &Chart, mesh: &ParamMesh, quad: &QuadratureRule, g: G) -> Result<f64>
where
    G: Fn([f64; 3], [f64; 2]) -> f64,
{
    let rule = edge_quadrature(quad.order);
    let mut s = 0.0;
    for (e, edge) in mesh.boundary_edges().iter().enumerate() {
        for node in edge_nodes(chart, mesh, e, &rule)? {
            s += node.weight * g(node.frame.conormal(edge.normal)?, node.frame.point);
        }
    }
    Ok(s)
}

/// Surface divergence theorem for an analytic field `f`, arranged as
/// `∫ div_Γ f + ∫ H_Γ (n·f) = ∮ ν·f` so that neither side vanishes
/// identically for constant fields.
pub fn check_divergence_theorem(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    f: &dyn SmoothVector,
) -> Result<IdentityReport> {
    let lhs = integrate(chart, mesh, quad, |_, _, fr| {
        let x = fr.point;
        fr.divergence(f.jacobian(x)) + fr.mean_curvature * dot3(fr.normal, f.value(x))
    })?;
    let rhs = boundary_integral(chart, mesh, quad, |nu, x| dot3(nu, f.value(x)))?;
    Ok(IdentityReport::new("divergence_theorem", lhs, rhs, mesh, quad))
}

/// Integration by parts for analytic `f`, `ψ` and direction `j ∈ {1,2,3}`,
/// arranged as `∫ f ∂_jψ + ∫ (∂_j f + H_Γ n_j f) ψ = ∮ ν_j f ψ`.
pub fn check_integration_by_parts(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    f: &dyn SmoothScalar,
    psi: &dyn SmoothScalar,
    j: usize,
) -> Result<IdentityReport> {
    if !(1..=3).contains(&j) {
        return Err(crate::Error::InvalidInput(format!("direction must be 1, 2 or 3, got {j}")));
    }
    let k = j - 1;
    let lhs = integrate(chart, mesh, quad, |_, _, fr| {
        let x = fr.point;
        let (fv, pv) = (f.value(x), psi.value(x));
        let df = fr.tangential_gradient(f.gradient(x))[k];
        let dpsi = fr.tangential_gradient(psi.gradient(x))[k];
        fv * dpsi + (df + fr.mean_curvature * fr.normal[k] * fv) * pv
    })?;
    let rhs = boundary_integral(chart, mesh, quad, |nu, x| nu[k] * f.value(x) * psi.value(x))?;
    Ok(IdentityReport::new(format!("integration_by_parts_j{j}"), lhs, rhs, mesh, quad))
}

/// Write identity reports with a header row, preceded by an optional
/// comment line.
pub fn write_identities_csv<W: Write>(w: W, reports: &[IdentityReport], comment: Option<&str>) -> Result<()> {
    let mut w = csv_writer(w, comment)?;
    for r in reports {
        w.serialize(r)?;
    }
    if reports.is_empty() {
        w.write_record(["name", "lhs", "rhs", "abs_defect", "rel_defect", "mesh_h", "quadrature_order"])?;
    }
    w.flush()?;
    Ok(())
}
