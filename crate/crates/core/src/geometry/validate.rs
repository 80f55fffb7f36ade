use serde::Serialize;

use super::{metric_frame, Chart};
use crate::linalg::{sym2_eigenvalues, Vec2};

const WORST_POINTS_KEPT: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstPoint {
    pub point: Vec2,
    /// `√G` at the point, or `None` if the metric is degenerate there.
    pub sqrt_det: Option<f64>,
    pub lambda_0: Option<f64>,
    pub degenerate: bool,
}

/// Sampled nondegeneracy and ellipticity bounds of a chart over `Ū`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub chart: String,
    pub samples: usize,
    /// Minimum of `|g₁ × g₂| = √G` over the samples.
    pub lambda_min_est: f64,
    /// Maximum of `√G` over the samples.
    pub lambda_max_est: f64,
    /// Minimum over the samples of the smallest eigenvalue of `(g^{αβ})`.
    pub lambda_0_est: f64,
    pub floor: f64,
    pub degenerate_samples: usize,
    pub passed: bool,
    pub worst_points: Vec<WorstPoint>,
}

/// Sample the chart at the domain center, on a `sampling × sampling` grid
/// clipped to `Ū`, and at `4 · sampling` boundary points. Resolutions below 8 are raised to 8.
pub fn validate_chart(chart: &Chart, sampling: usize) -> ValidationReport {
    let n = sampling.max(8);
    let domain = chart.domain();
    let (a, b) = domain.semi_axes();
    let c = domain.center();

    let mut points = Vec::with_capacity(n * n + 4 * n + 1);
    points.push(c);
    for i in 0..n {
        for j in 0..n {
            let u = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let v = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
            let x = [c[0] + a * u, c[1] + b * v];
            if domain.contains(x) {
                points.push(x);
            }
        }
    }
    for k in 0..4 * n {
        let t = std::f64::consts::TAU * k as f64 / (4 * n) as f64;
        points.push(domain.boundary_point(t));
    }

    let floor = chart.lambda_min_floor();
    let mut lambda_min = f64::INFINITY;
    let mut lambda_max: f64 = 0.0;
    let mut lambda_0 = f64::INFINITY;
    let mut degenerate = Vec::new();
    let mut scored = Vec::with_capacity(points.len());
    for &x in &points {
        match metric_frame(chart, x) {
            Ok(f) => {
                let l0 = sym2_eigenvalues(f.g_upper)[0];
                lambda_min = lambda_min.min(f.sqrt_det);
                lambda_max = lambda_max.max(f.sqrt_det);
                lambda_0 = lambda_0.min(l0);
                scored.push(WorstPoint {
                    point: x,
                    sqrt_det: Some(f.sqrt_det),
                    lambda_0: Some(l0),
                    degenerate: false,
                });
            }
            Err(_) => {
                lambda_min = 0.0;
                degenerate.push(WorstPoint {
                    point: x,
                    sqrt_det: None,
                    lambda_0: None,
                    degenerate: true,
                });
            }
        }
    }
    if !lambda_0.is_finite() {
        lambda_0 = 0.0;
    }
    scored.sort_by(|p, q| p.sqrt_det.partial_cmp(&q.sqrt_det).unwrap());
    let degenerate_samples = degenerate.len();
    let mut worst_points: Vec<_> = degenerate.into_iter().take(WORST_POINTS_KEPT).collect();
    let room = WORST_POINTS_KEPT.saturating_sub(worst_points.len());
    worst_points.extend(scored.into_iter().take(room));

    let passed = degenerate_samples == 0 && lambda_min > floor && lambda_0 > floor;
    ValidationReport {
        chart: chart.kind().name().to_string(),
        samples: points.len(),
        lambda_min_est: lambda_min,
        lambda_max_est: lambda_max,
        lambda_0_est: lambda_0,
        floor,
        degenerate_samples,
        passed,
        worst_points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ChartKind, DomainSpec};

    #[test]
    fn flat_chart_bounds_are_one() {
        let r = validate_chart(&Chart::flat(DomainSpec::unit_disk()), 16);
        assert!(r.passed);
        assert_eq!(r.lambda_min_est, 1.0);
        assert_eq!(r.lambda_max_est, 1.0);
        assert_eq!(r.lambda_0_est, 1.0);
    }

    #[test]
    fn hemisphere_bounds_match_dense_sampling() {
        let chart =
            Chart::new(ChartKind::Hemisphere { radius: 2.0 }, DomainSpec::unit_disk()).unwrap();
        let r = validate_chart(&chart, 33);
        // Brute-force oracle: √G = R/√(R²−ρ²) and λ₀ = (R²−ρ²)/R² on a fine
        // polar sampling of the closed unit disk.
        let (mut smin, mut smax, mut l0min) = (f64::INFINITY, 0.0_f64, f64::INFINITY);
        for i in 0..=400 {
            let rho = i as f64 / 400.0;
            let z2 = 4.0 - rho * rho;
            smin = smin.min(2.0 / z2.sqrt());
            smax = smax.max(2.0 / z2.sqrt());
            l0min = l0min.min(z2 / 4.0);
        }
        assert!(r.passed);
        assert!((r.lambda_min_est - smin).abs() < 1e-12);
        assert!((r.lambda_max_est - smax).abs() < 1e-12);
        assert!((r.lambda_0_est - l0min).abs() < 1e-12);
    }

    #[test]
    fn pinched_chart_fails() {
        let chart =
            Chart::new(ChartKind::Pinched { offset: 0.0 }, DomainSpec::unit_disk()).unwrap();
        let r = validate_chart(&chart, 9);
        assert!(!r.passed);
        assert!(r.degenerate_samples > 0);
        assert!(r.worst_points[0].degenerate);
        assert!(r.worst_points[0].point[0].abs() < 1e-12);
    }
}
