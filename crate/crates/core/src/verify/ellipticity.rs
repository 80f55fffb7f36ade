use serde::Serialize;

use crate::assembly::{lp_norm, parameter_lp_norm, SurfaceField};
use crate::geometry::Chart;
use crate::linalg::sym2_eigenvalues;
use crate::mesh::{ParamMesh, QuadratureRule};
use crate::Result;

/// `C_b = min{1/(1 + 2b'²), 1/2}`.
pub fn flattening_constant(b_prime: f64) -> f64 {
    (1.0 / (1.0 + 2.0 * b_prime * b_prime)).min(0.5)
}

/// `ξ₁² + (1 + b'²)ξ₂² − 2b'ξ₁ξ₂`.
pub fn flattening_form(b_prime: f64, xi: [f64; 2]) -> f64 {
    xi[0] * xi[0] + (1.0 + b_prime * b_prime) * xi[1] * xi[1] - 2.0 * b_prime * xi[0] * xi[1]
}

/// Smallest eigenvalue of the matrix `[[1, −b'], [−b', 1 + b'²]]` of
/// [`flattening_form`].
pub fn flattening_min_eigenvalue(b_prime: f64) -> f64 {
    sym2_eigenvalues([[1.0, -b_prime], [-b_prime, 1.0 + b_prime * b_prime]])[0]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatteningReport {
    pub samples: usize,
    /// Minimum of `form − C_b |ξ|²` over the samples.
    pub worst_margin: f64,
}

/// Check `ξ₁² + (1 + b'²)ξ₂² − 2b'ξ₁ξ₂ ≥ C_b |ξ|²` on `(b', ξ)` pairs.
pub fn check_flattening_ellipticity(samples: &[(f64, [f64; 2])]) -> FlatteningReport {
    let worst_margin = samples
        .iter()
        .map(|&(b, xi)| flattening_form(b, xi) - flattening_constant(b) * (xi[0] * xi[0] + xi[1] * xi[1]))
        .fold(f64::INFINITY, f64::min);
    FlatteningReport {
        samples: samples.len(),
        worst_margin,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEquivalenceReport {
    pub p: f64,
    pub samples: usize,
    /// Minimum of `‖ψ‖_{L^p(Γ₀)} − λ_min^{1/p} ‖φ‖_{L^p(U)}`.
    pub lower_margin: f64,
    /// Minimum of `λ_max^{1/p} ‖φ‖_{L^p(U)} − ‖ψ‖_{L^p(Γ₀)}`.
    pub upper_margin: f64,
    pub holds: bool,
}

/// Two-sided bound `λ_min^{1/p}‖φ‖_{L^p(U)} ≤ ‖ψ‖_{L^p(Γ₀)} ≤
/// λ_max^{1/p}‖φ‖_{L^p(U)}` for each field, with a relative slack of
/// `1e-12` for rounding.
pub fn check_norm_equivalence(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    fields: &[SurfaceField],
    p: f64,
    lambda_min: f64,
    lambda_max: f64,
) -> Result<NormEquivalenceReport> {
    let mut lower_margin = f64::INFINITY;
    let mut upper_margin = f64::INFINITY;
    let mut holds = true;
    for field in fields {
        let on_surface = lp_norm(chart, mesh, quad, field, p)?;
        let on_domain = parameter_lp_norm(mesh, quad, field, p)?;
        let lo = lambda_min.powf(1.0 / p) * on_domain;
        let hi = lambda_max.powf(1.0 / p) * on_domain;
        let slack = 1e-12 * on_surface.max(hi);
        lower_margin = lower_margin.min(on_surface - lo);
        upper_margin = upper_margin.min(hi - on_surface);
        holds &= on_surface >= lo - slack && on_surface <= hi + slack;
    }
    Ok(NormEquivalenceReport {
        p,
        samples: fields.len(),
        lower_margin,
        upper_margin,
        holds,
    })
}
