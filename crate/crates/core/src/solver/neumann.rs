use serde::Serialize;

use super::cg::pcg;
use super::flux_residual;
use crate::assembly::{integrate, load_with_frame, mass, stiffness, SurfaceField};
use crate::geometry::{Chart, MetricFrame};
use crate::linalg::dot;
use crate::mesh::{ParamMesh, QuadratureRule};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Settings for [`solve_neumann`].
#[derive(Clone, Debug, PartialEq)]
pub struct NeumannOptions {
    /// Relative residual target `‖Av − b‖ / ‖b‖` for the projected load.
    pub tol: f64,
    /// Iteration cap; `None` means ten times the number of unknowns.
    pub max_iter: Option<usize>,
    /// Fail with [`Error::IncompatibleLoad`] instead of projecting when the
    /// compatibility defect exceeds `compatibility_threshold`.
    pub strict_compatibility: bool,
    pub compatibility_threshold: f64,
    /// Keep the energy of every iterate in the report.
    pub record_energy: bool,
}

impl Default for NeumannOptions {
    fn default() -> Self {
        NeumannOptions {
            tol: 1e-10,
            max_iter: None,
            strict_compatibility: false,
            compatibility_threshold: 1e-8,
            record_energy: false,
        }
    }
}

/// Outcome of a pure-Neumann solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: SurfaceField,
    pub iterations: usize,
    pub converged: bool,
    /// `‖Av − b_p‖ / ‖b_p‖` for the projected load `b_p`.
    pub algebraic_residual: f64,
    /// `|∫F| / ∫|F|`. From the load vector alone this is estimated as
    /// `|𝟙ᵀb| / Σ|bᵢ|`; [`solve_poisson`] replaces it by the quadrature value.
    pub compatibility_defect: f64,
    /// `∫ v dH² / |Γ₀|`.
    pub mean_value: f64,
    /// Boundary `L²` norm of `∂v/∂ν`, filled in when the chart is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux_residual: Option<f64>,
    /// `½vᵀAv − bᵀv`.
    pub energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_history: Option<Vec<f64>>,
}

impl SolveReport {
    /// Turn an unconverged report into [`Error::MaxIterExceeded`].
    pub fn into_result(self) -> Result<SolveReport> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::MaxIterExceeded {
                iterations: self.iterations,
                residual: self.algebraic_residual,
            })
        }
    }
}

/// `|∫_{Γ₀} F dH²| / ∫_{Γ₀} |F| dH²`, or 0 when `F` vanishes.
pub fn check_compatibility<F>(chart: &Chart, mesh: &ParamMesh, quad: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(&MetricFrame) -> f64 + Sync + Send,
{
    let signed = integrate(chart, mesh, quad, |_, _, frame| f(frame))?;
    let total = integrate(chart, mesh, quad, |_, _, frame| f(frame).abs())?;
    Ok(if total > 0.0 { signed.abs() / total } else { 0.0 })
}

fn discrete_defect(b: &[f64]) -> f64 {
    let total: f64 = b.iter().map(|v| v.abs()).sum();
    if total > 0.0 {
        b.iter().sum::<f64>().abs() / total
    } else {
        0.0
    }
}

/// Minimize `½vᵀAv − bᵀv` over `{v : 𝟙ᵀMv = 0}` by Jacobi-preconditioned
/// conjugate gradients, starting from zero.
pub fn solve_neumann(a: &CsrMatrix, m: &CsrMatrix, b: &[f64], opts: &NeumannOptions) -> Result<SolveReport> {
    solve_neumann_from(a, m, b, vec![0.0; b.len()], opts)
}

/// Projected loads smaller than this relative to `‖b‖` are rounding noise
/// of a load that lies entirely in the constant direction.
const LOAD_ROUNDOFF: f64 = 1e-13;

/// [`solve_neumann`] from the start vector `x0`; its constant component is
/// removed first.
pub fn solve_neumann_from(
    a: &CsrMatrix,
    m: &CsrMatrix,
    b: &[f64],
    x0: Vec<f64>,
    opts: &NeumannOptions,
) -> Result<SolveReport> {
    let n = a.dim();
    for len in [m.dim(), b.len(), x0.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let defect = discrete_defect(b);
    if opts.strict_compatibility && defect > opts.compatibility_threshold {
        return Err(Error::IncompatibleLoad {
            defect,
            threshold: opts.compatibility_threshold,
        });
    }

    let m1 = m.mul_vec(&vec![1.0; n]);
    let area: f64 = m1.iter().sum();
    if !(area > 0.0) {
        return Err(Error::InvalidInput("mass matrix has no positive total".into()));
    }
    // b_p = b − (𝟙ᵀb / 𝟙ᵀM𝟙) M𝟙
    let shift = b.iter().sum::<f64>() / area;
    let mut bp: Vec<f64> = b.iter().zip(&m1).map(|(b, w)| b - shift * w).collect();
    if dot(&bp, &bp).sqrt() <= LOAD_ROUNDOFF * dot(b, b).sqrt() {
        bp.iter_mut().for_each(|x| *x = 0.0);
    }
    let project = |v: &mut [f64]| {
        let c = dot(&m1, v) / area;
        v.iter_mut().for_each(|x| *x -= c);
    };
    let max_iter = opts.max_iter.unwrap_or(10 * n);
    let out = pcg(a, &bp, x0, Some(&project), opts.tol, max_iter, opts.record_energy);
    if out.breakdown {
        return Err(Error::InvalidInput(
            "stiffness matrix is not positive semidefinite on the mean-zero space".into(),
        ));
    }
    let mut v = out.x;
    project(&mut v);
    let av = a.mul_vec(&v);
    Ok(SolveReport {
        iterations: out.iterations,
        converged: out.converged,
        algebraic_residual: out.relative_residual,
        compatibility_defect: defect,
        mean_value: dot(&m1, &v) / area,
        flux_residual: None,
        energy: 0.5 * dot(&v, &av) - dot(b, &v),
        energy_history: out.energy_history,
        solution: SurfaceField::new(v),
    })
}

/// Assembled pure-Neumann system of one chart and mesh.
#[derive(Clone, Debug)]
pub struct NeumannSystem {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
}

impl NeumannSystem {
    pub fn assemble(chart: &Chart, mesh: &ParamMesh, quad: &QuadratureRule) -> Result<Self> {
        Ok(NeumannSystem {
            stiffness: stiffness(chart, mesh, quad)?,
            mass: mass(chart, mesh, quad)?,
        })
    }

    /// `|Γ₀|` as `𝟙ᵀM𝟙`.
    pub fn area(&self) -> f64 {
        let ones = vec![1.0; self.mass.dim()];
        self.mass.quadratic_form(&ones)
    }
}

/// Assemble and solve `−Δ_Γ v = F` with `∂v/∂ν = 0` for a load given on
/// the metric frame. The compatibility defect is measured by quadrature and
/// checked before solving; the report carries the flux residual.
pub fn solve_poisson<F>(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    f: F,
    opts: &NeumannOptions,
) -> Result<(NeumannSystem, SolveReport)>
where
    F: Fn(&MetricFrame) -> f64 + Sync + Send,
{
    let defect = check_compatibility(chart, mesh, quad, &f)?;
    if opts.strict_compatibility && defect > opts.compatibility_threshold {
        return Err(Error::IncompatibleLoad {
            defect,
            threshold: opts.compatibility_threshold,
        });
    }
    let system = NeumannSystem::assemble(chart, mesh, quad)?;
    let b = load_with_frame(chart, mesh, quad, &f)?;
    let relaxed = NeumannOptions {
        strict_compatibility: false,
        ..opts.clone()
    };
    let mut report = solve_neumann(&system.stiffness, &system.mass, &b, &relaxed)?;
    report.compatibility_defect = defect;
    report.flux_residual = Some(flux_residual(chart, mesh, &report.solution)?);
    Ok((system, report))
}
