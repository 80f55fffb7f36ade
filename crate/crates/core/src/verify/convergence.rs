use std::io::Write;

use serde::Serialize;

use crate::assembly::{integrate, SurfaceField};
use crate::functions::SmoothScalar;
use crate::geometry::{Chart, DomainSpec};
use crate::mesh::{csv_writer, generate_mesh, refine, ParamMesh, QuadratureRule};
use crate::solver::{solve_poisson, NeumannOptions, SolveReport};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: usize,
    /// Longest edge of the level's mesh.
    pub h: f64,
    pub vertices: usize,
    /// `‖v_h − v − c‖_{L²(Γ₀)}` with `c` the mean of `v_h − v`.
    pub l2_error: f64,
    /// `‖∇_Γ(v_h − v)‖_{L²(Γ₀)}`.
    pub h1_error: f64,
    pub flux_residual: f64,
    pub mean_value: f64,
    pub iterations: usize,
    /// `log₂(e_{2h} / e_h)` against the previous row.
    pub l2_rate: Option<f64>,
    pub h1_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn last_l2_rate(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.l2_rate)
    }

    pub fn last_h1_rate(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.h1_rate)
    }

    /// Write one row per level with a header row, preceded by an optional
    /// comment line. Missing rates are empty fields.
    pub fn write_csv<W: Write>(&self, w: W, comment: Option<&str>) -> Result<()> {
        let mut w = csv_writer(w, comment)?;
        w.write_record([
            "level",
            "h",
            "vertices",
            "l2_error",
            "h1_error",
            "flux_residual",
            "mean_value",
            "iterations",
            "l2_rate",
            "h1_rate",
        ])?;
        for r in &self.rows {
            w.serialize((
                r.level,
                r.h,
                r.vertices,
                r.l2_error,
                r.h1_error,
                r.flux_residual,
                r.mean_value,
                r.iterations,
                r.l2_rate,
                r.h1_rate,
            ))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn rate(prev: f64, cur: f64) -> Option<f64> {
    (prev > 0.0 && cur > 0.0).then(|| (prev / cur).log2())
}

/// Errors of the discrete solution against an analytic one, measured with
/// the analytic values and gradients at the quadrature points.
pub fn solution_errors(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    v: &SurfaceField,
    exact: &dyn SmoothScalar,
) -> Result<(f64, f64)> {
    let diff = |t: usize, bary: [f64; 3], x: [f64; 2]| v.at(mesh, t, bary) - exact.value(x);
    let area = integrate(chart, mesh, quad, |_, _, _| 1.0)?;
    let mean = integrate(chart, mesh, quad, |t, b, fr| diff(t, b, fr.point))? / area;
    let l2 = integrate(chart, mesh, quad, |t, b, fr| (diff(t, b, fr.point) - mean).powi(2))?;
    let h1 = integrate(chart, mesh, quad, |t, _, fr| {
        let dv = v.parameter_gradient(mesh, t);
        let de = exact.gradient(fr.point);
        let d = [dv[0] - de[0], dv[1] - de[1]];
        fr.inner(d, d)
    })?;
    Ok((l2.sqrt(), h1.sqrt()))
}

/// Solve the manufactured problem `−Δ_Γ v = F`, `∂v/∂ν = 0` on
/// `generate_mesh(domain, h0)` and `levels − 1` uniform refinements.
#[allow(clippy::too_many_arguments)]
pub fn convergence_study(
    chart: &Chart,
    domain: &DomainSpec,
    exact: &dyn SmoothScalar,
    forcing: &dyn SmoothScalar,
    h0: f64,
    levels: usize,
    quad: &QuadratureRule,
    opts: &NeumannOptions,
) -> Result<(ConvergenceTable, Vec<SolveReport>)> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    let mut reports = Vec::with_capacity(levels);
    let mut mesh = generate_mesh(domain, h0)?;
    for level in 0..levels {
        if level > 0 {
            mesh = refine(&mesh, domain)?;
        }
        let (_, report) = solve_poisson(chart, &mesh, quad, |fr| forcing.value(fr.point), opts)?;
        let report = report.into_result()?;
        let (l2_error, h1_error) = solution_errors(chart, &mesh, quad, &report.solution, exact)?;
        let prev = rows.last();
        rows.push(ConvergenceRow {
            level,
            h: mesh.max_edge_length(),
            vertices: mesh.num_vertices(),
            l2_error,
            h1_error,
            flux_residual: report.flux_residual.unwrap_or(f64::NAN),
            mean_value: report.mean_value,
            iterations: report.iterations,
            l2_rate: prev.and_then(|p| rate(p.l2_error, l2_error)),
            h1_rate: prev.and_then(|p| rate(p.h1_error, h1_error)),
        });
        reports.push(report);
    }
    Ok((ConvergenceTable { rows }, reports))
}
