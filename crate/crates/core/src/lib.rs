//! Poisson problems with a zero co-normal boundary condition on parametrized
//! surfaces with boundary.
//!
//! A surface is described by a single chart `x̂ : U → ℝ³` over a planar
//! domain `U` (a disk or an ellipse). Every surface integral is pulled back to
//! `U` with the area element `√G`, and P1 Lagrange elements on a
//! triangulation of `U` carry the discrete fields.
//!
//! The crate is organized as
//!
//! * [`geometry`]: charts, metric frames, mean curvature, co-normals.
//! * [`mesh`]: layered triangulations of `U`, uniform refinement, quadrature.
//! * [`assembly`]: weighted stiffness/mass/boundary operators, loads,
//!   discrete tangential gradient and surface divergence, norms.
//! * [`solver`]: the projected pure-Neumann solve, Dirichlet and harmonic
//!   extension solves, co-normal derivatives.
//! * [`divfield`]: vector fields with prescribed surface divergence.
//! * [`verify`]: identity checks, Poincaré constants, coercivity, convergence
//!   studies.
//! * [`config`]: the JSON run configuration consumed by the CLI.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod config;
pub mod divfield;
mod error;
pub mod functions;
pub mod geometry;
pub(crate) mod linalg;
pub mod mesh;
pub mod solver;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};
