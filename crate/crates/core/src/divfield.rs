//! Vector fields with prescribed surface divergence and normal component.
//!
//! For `F` and `χ` on `Γ₀` the field `V = −∇_Γ v + χ n`, where `v` solves
//! `−Δ_Γ v = F + χ H_Γ` with `∂v/∂ν = 0`, satisfies `div_Γ V = F`,
//! `V·n = χ` and `V·ν = 0` on `∂Γ₀`. The load is solvable only when
//! `∫(F + χ H_Γ) dH² = 0`; that integral is measured and reported rather
//! than assumed.

use std::io::Write;

use serde::Serialize;

use crate::assembly::{edge_nodes, recover_nodal_gradient, surface_divergence, triangle_nodes, SurfaceField, SurfaceVectorField};
use crate::functions::SmoothScalar;
use crate::geometry::{metric_frame, Chart};
use crate::linalg::dot3;
use crate::mesh::{csv_writer, edge_quadrature, ParamMesh, QuadratureRule};
use crate::solver::{solve_poisson, NeumannOptions, SolveReport};
use crate::Result;

/// The three residuals of the system `div_Γ V = F`, `V·n = χ`, `V·ν = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivResiduals {
    /// `‖div_Γ V − F‖_{L²(Γ₀)}` with `div_Γ V` constant per triangle.
    pub div_residual: f64,
    /// `‖V·n − χ‖_{L²(Γ₀)}` for the nodal values of `V·n − χ`.
    pub normal_residual: f64,
    /// `‖V·ν‖_{L²(∂Γ₀)}`.
    pub conormal_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivSolveReport {
    #[serde(skip)]
    pub field: SurfaceVectorField,
    #[serde(flatten)]
    pub residuals: DivResiduals,
    /// `|∫(F + χH_Γ)| / ∫|F + χH_Γ|`.
    pub compatibility_defect: f64,
    /// The scalar solve that produced `v`.
    pub potential: SolveReport,
}

/// Build `V = −∇_Γ v + χ n` from the Neumann solve with load `F + χ H_Γ`.
/// The gradient is the recovered nodal tangential gradient of `v`, and `χ n`
/// is taken at the vertices, so `V·n = χ` holds at every vertex.
pub fn solve_div_system(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    f: &dyn SmoothScalar,
    chi: &dyn SmoothScalar,
    opts: &NeumannOptions,
) -> Result<DivSolveReport> {
    let (_, potential) = solve_poisson(
        chart,
        mesh,
        quad,
        |frame| f.value(frame.point) + chi.value(frame.point) * frame.mean_curvature,
        opts,
    )?;
    let grad = recover_nodal_gradient(chart, mesh, &potential.solution)?;
    let nodal = mesh
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let n = metric_frame(chart, x)?.normal;
            let c = chi.value(x);
            let g = grad.node(i);
            Ok(std::array::from_fn(|k| -g[k] + c * n[k]))
        })
        .collect::<Result<Vec<_>>>()?;
    let field = SurfaceVectorField::from_nodal(&nodal);
    let residuals = verify_div_system(chart, mesh, quad, &field, f, chi)?;
    Ok(DivSolveReport {
        field,
        residuals,
        compatibility_defect: potential.compatibility_defect,
        potential,
    })
}

/// Recompute the three residuals from `V` alone.
pub fn verify_div_system(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    v: &SurfaceVectorField,
    f: &dyn SmoothScalar,
    chi: &dyn SmoothScalar,
) -> Result<DivResiduals> {
    v.check(mesh)?;
    let div = surface_divergence(chart, mesh, v)?;
    let normal_defect = SurfaceField::new(
        mesh.vertices()
            .iter()
            .enumerate()
            .map(|(i, &x)| Ok(dot3(v.node(i), metric_frame(chart, x)?.normal) - chi.value(x)))
            .collect::<Result<_>>()?,
    );

    let mut div_sq = 0.0;
    let mut normal_sq = 0.0;
    for t in 0..mesh.num_triangles() {
        for node in triangle_nodes(chart, mesh, t, quad)? {
            let d = div[t] - f.value(node.frame.point);
            let nd = normal_defect.at(mesh, t, node.bary);
            div_sq += node.weight * d * d;
            normal_sq += node.weight * nd * nd;
        }
    }

    let rule = edge_quadrature(5);
    let mut conormal_sq = 0.0;
    for (e, edge) in mesh.boundary_edges().iter().enumerate() {
        let [a, b] = edge.vertices;
        let (va, vb) = (v.node(a), v.node(b));
        for node in edge_nodes(chart, mesh, e, &rule)? {
            let val: [f64; 3] = std::array::from_fn(|k| (1.0 - node.s) * va[k] + node.s * vb[k]);
            let d = dot3(val, node.frame.conormal(edge.normal)?);
            conormal_sq += node.weight * d * d;
        }
    }
    Ok(DivResiduals {
        div_residual: div_sq.sqrt(),
        normal_residual: normal_sq.sqrt(),
        conormal_residual: conormal_sq.sqrt(),
    })
}

/// Write `vertex_id,V1,V2,V3` rows, preceded by an optional comment line.
pub fn write_field_csv<W: Write>(
    w: W,
    mesh: &ParamMesh,
    field: &SurfaceVectorField,
    comment: Option<&str>,
) -> Result<()> {
    field.check(mesh)?;
    let mut w = csv_writer(w, comment)?;
    w.write_record(["vertex_id", "V1", "V2", "V3"])?;
    for i in 0..mesh.num_vertices() {
        let v = field.node(i);
        w.serialize((i, v[0], v[1], v[2]))?;
    }
    w.flush()?;
    Ok(())
}
