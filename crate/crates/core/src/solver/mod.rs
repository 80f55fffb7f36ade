//! Discrete solves: the projected pure-Neumann problem on the mean-zero
//! space, the Dirichlet companion problem, harmonic extension, and the
//! co-normal derivative of a discrete solution.

mod cg;
mod dirichlet;
mod flux;
mod neumann;

pub use dirichlet::{boundary_trace, harmonic_extension, solve_dirichlet};
pub use flux::{conormal_derivative, flux_residual};
pub use neumann::{
    check_compatibility, solve_neumann, solve_neumann_from, solve_poisson, NeumannOptions,
    NeumannSystem, SolveReport,
};

use std::io::Write;

use crate::assembly::SurfaceField;
use crate::mesh::{csv_writer, ParamMesh};
use crate::Result;

/// Write `vertex_id,X1,X2,value` rows, preceded by an optional comment line.
pub fn write_solution_csv<W: Write>(
    w: W,
    mesh: &ParamMesh,
    field: &SurfaceField,
    comment: Option<&str>,
) -> Result<()> {
    field.check(mesh)?;
    let mut w = csv_writer(w, comment)?;
    w.write_record(["vertex_id", "X1", "X2", "value"])?;
    for (i, (x, v)) in mesh.vertices().iter().zip(&field.values).enumerate() {
        w.serialize((i, x[0], x[1], v))?;
    }
    w.flush()?;
    Ok(())
}
