use serde::Serialize;

use super::Chart;
use crate::linalg::{cross, dot3, norm3, scale3, sub3, Vec2, Vec3};
use crate::{Error, Result};

/// Geometric data of the chart at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetricFrame {
    pub point: Vec2,
    pub g1: Vec3,
    pub g2: Vec3,
    /// `g_αβ = g_α · g_β`.
    pub g_lower: [[f64; 2]; 2],
    /// `g^αβ`, the matrix inverse of `g_lower`.
    pub g_upper: [[f64; 2]; 2],
    /// `G = g₁₁g₂₂ − g₁₂g₂₁`.
    pub det: f64,
    pub sqrt_det: f64,
    pub normal: Vec3,
    pub mean_curvature: f64,
}

impl MetricFrame {
    /// `Σ_{α,β} g^{αβ} g_α ∂v̂/∂X_β` for a parameter-space gradient `dv`.
    pub fn tangential_gradient(&self, dv: Vec2) -> Vec3 {
        let c1 = self.g_upper[0][0] * dv[0] + self.g_upper[0][1] * dv[1];
        let c2 = self.g_upper[1][0] * dv[0] + self.g_upper[1][1] * dv[1];
        std::array::from_fn(|k| c1 * self.g1[k] + c2 * self.g2[k])
    }

    /// `g^{αβ} a_α b_β`.
    pub fn inner(&self, a: Vec2, b: Vec2) -> f64 {
        let g = &self.g_upper;
        a[0] * (g[0][0] * b[0] + g[0][1] * b[1]) + a[1] * (g[1][0] * b[0] + g[1][1] * b[1])
    }

    /// Surface divergence of a field given its parameter derivatives
    /// `df[β] = ∂f̂/∂X_β`.
    pub fn divergence(&self, df: [Vec3; 2]) -> f64 {
        let g = [self.g1, self.g2];
        let mut acc = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                acc += self.g_upper[a][b] * dot3(g[a], df[b]);
            }
        }
        acc
    }

    /// Line element `|n₁ᵁ g₂ − n₂ᵁ g₁|` of `∂Γ₀` relative to arc length on `∂U`.
    pub fn boundary_speed(&self, n_u: Vec2) -> f64 {
        norm3(self.boundary_tangent(n_u))
    }

    fn boundary_tangent(&self, n_u: Vec2) -> Vec3 {
        sub3(scale3(n_u[0], self.g2), scale3(n_u[1], self.g1))
    }

    /// Unit outer co-normal for a boundary point with planar outward normal `n_u`.
    pub fn conormal(&self, n_u: Vec2) -> Result<Vec3> {
        let tangent = self.boundary_tangent(n_u);
        let len = norm3(tangent);
        if len <= f64::EPSILON * (norm3(self.g1) + norm3(self.g2)) || !len.is_finite() {
            return Err(Error::ZeroTangent { point: self.point });
        }
        Ok(cross(scale3(1.0 / len, tangent), self.normal))
    }
}

/// Metric, normal and mean curvature of `chart` at `x`.
pub fn metric_frame(chart: &Chart, x: Vec2) -> Result<MetricFrame> {
    let [g1, g2] = chart.jacobian(x);
    let g11 = dot3(g1, g1);
    let g12 = dot3(g1, g2);
    let g22 = dot3(g2, g2);
    let normal_raw = cross(g1, g2);
    let det = dot3(normal_raw, normal_raw);
    let floor = chart.lambda_min_floor();
    if !(det.is_finite() && det >= floor * floor) || det == 0.0 {
        return Err(Error::DegenerateMetric { point: x, det });
    }
    let sqrt_det = det.sqrt();
    let normal = scale3(1.0 / sqrt_det, normal_raw);
    // `det` from the cross product equals g11*g22 - g12^2 without cancellation.
    let inv = 1.0 / det;
    let g_upper = [[g22 * inv, -g12 * inv], [-g12 * inv, g11 * inv]];

    // H = -div_Γ n = g^{αβ} n · ∂²x̂/∂X_α∂X_β
    let [h11, h12, h22] = chart.hessian(x);
    let mean_curvature = g_upper[0][0] * dot3(normal, h11)
        + 2.0 * g_upper[0][1] * dot3(normal, h12)
        + g_upper[1][1] * dot3(normal, h22);

    Ok(MetricFrame {
        point: x,
        g1,
        g2,
        g_lower: [[g11, g12], [g12, g22]],
        g_upper,
        det,
        sqrt_det,
        normal,
        mean_curvature,
    })
}

/// Mean curvature `H_Γ = −div_Γ n` at `x`, with `n = g₁×g₂/|g₁×g₂|`.
pub fn mean_curvature(chart: &Chart, x: Vec2) -> Result<f64> {
    Ok(metric_frame(chart, x)?.mean_curvature)
}

/// Co-normal at boundary parameter `t` of the chart's domain.
pub fn conormal(chart: &Chart, t: f64) -> Result<Vec3> {
    let domain = chart.domain();
    conormal_at(chart, domain.boundary_point(t), domain.outward_normal(t))
}

/// Co-normal at an arbitrary point `x` for planar outward normal `n_u`.
pub fn conormal_at(chart: &Chart, x: Vec2, n_u: Vec2) -> Result<Vec3> {
    metric_frame(chart, x)?.conormal(n_u)
}
