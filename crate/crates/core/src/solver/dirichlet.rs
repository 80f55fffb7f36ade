use std::collections::BTreeMap;

use super::cg::pcg;
use crate::assembly::{stiffness, SurfaceField};
use crate::geometry::Chart;
use crate::mesh::{quadrature, ParamMesh};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Solve `A v = b` on interior vertices with `v` fixed to
/// `boundary_values` on every boundary vertex.
pub fn solve_dirichlet(
    a: &CsrMatrix,
    b: &[f64],
    mesh: &ParamMesh,
    boundary_values: &BTreeMap<usize, f64>,
    tol: f64,
) -> Result<SurfaceField> {
    let n = mesh.num_vertices();
    for len in [a.dim(), b.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    if let Some((&v, _)) = boundary_values.iter().find(|(&v, _)| v >= n || !mesh.is_boundary_vertex(v)) {
        return Err(Error::InvalidInput(format!("vertex {v} is not a boundary vertex")));
    }
    let mut values = vec![0.0; n];
    for v in mesh.boundary_vertices() {
        values[v] = *boundary_values.get(&v).ok_or(Error::MissingBoundaryValue(v))?;
    }
    let interior: Vec<usize> = (0..n).filter(|&v| !mesh.is_boundary_vertex(v)).collect();
    if interior.is_empty() {
        return Ok(SurfaceField::new(values));
    }

    // b_I − A_IB g
    let ag = a.mul_vec(&values);
    let rhs: Vec<f64> = interior.iter().map(|&i| b[i] - ag[i]).collect();
    let block = a.submatrix(&interior);
    if block.diagonal().iter().any(|&d| !(d > 0.0)) {
        return Err(Error::SingularInteriorBlock);
    }
    let max_iter = 10 * interior.len();
    let out = pcg(&block, &rhs, vec![0.0; interior.len()], None, tol, max_iter, false);
    if out.breakdown {
        return Err(Error::SingularInteriorBlock);
    }
    if !out.converged {
        return Err(Error::MaxIterExceeded {
            iterations: out.iterations,
            residual: out.relative_residual,
        });
    }
    for (k, &i) in interior.iter().enumerate() {
        values[i] = out.x[k];
    }
    Ok(SurfaceField::new(values))
}

/// Extension of boundary data by the flat Laplacian `Δ_X` on `U`: the
/// Dirichlet solve with the planar stiffness and zero load. The chart only
/// supplies the domain.
pub fn harmonic_extension(
    chart: &Chart,
    mesh: &ParamMesh,
    trace: &BTreeMap<usize, f64>,
) -> Result<SurfaceField> {
    let flat = Chart::flat(chart.domain().clone());
    let a = stiffness(&flat, mesh, &quadrature(2)?)?;
    solve_dirichlet(&a, &vec![0.0; mesh.num_vertices()], mesh, trace, 1e-12)
}

/// Boundary data `g(X)` sampled at every boundary vertex.
pub fn boundary_trace(mesh: &ParamMesh, g: impl Fn([f64; 2]) -> f64) -> BTreeMap<usize, f64> {
    mesh.boundary_vertices().map(|v| (v, g(mesh.vertices()[v]))).collect()
}
