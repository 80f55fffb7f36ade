use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::linalg::Vec2;
use crate::{Error, Result};

const ARC_TABLE_SIZE: usize = 4096;

/// Planar parameter domain `U`. Both kinds have a smooth boundary
/// parametrized by `t ∈ [0, 2π)` as `c + (a cos t, b sin t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Disk {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
    },
}

impl DomainSpec {
    pub fn unit_disk() -> Self {
        DomainSpec::Disk {
            radius: 1.0,
            center: [0.0, 0.0],
        }
    }

    pub fn disk(radius: f64) -> Self {
        DomainSpec::Disk {
            radius,
            center: [0.0, 0.0],
        }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        DomainSpec::Ellipse {
            a,
            b,
            center: [0.0, 0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.semi_axes();
        let c = self.center();
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidInput(format!(
                "domain semi-axes must be positive and finite, got ({a}, {b})"
            )));
        }
        if !(c[0].is_finite() && c[1].is_finite()) {
            return Err(Error::InvalidInput("domain center must be finite".into()));
        }
        Ok(())
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        match *self {
            DomainSpec::Disk { radius, .. } => (radius, radius),
            DomainSpec::Ellipse { a, b, .. } => (a, b),
        }
    }

    pub fn center(&self) -> Vec2 {
        match *self {
            DomainSpec::Disk { center, .. } | DomainSpec::Ellipse { center, .. } => center,
        }
    }

    pub fn is_disk(&self) -> bool {
        let (a, b) = self.semi_axes();
        a == b
    }

    pub fn diameter(&self) -> f64 {
        let (a, b) = self.semi_axes();
        2.0 * a.max(b)
    }

    pub fn area(&self) -> f64 {
        let (a, b) = self.semi_axes();
        PI * a * b
    }

    /// Largest distance from the origin of the plane to a point of `Ū`.
    pub fn max_distance_from_origin(&self) -> f64 {
        let c = self.center();
        let (a, b) = self.semi_axes();
        c[0].hypot(c[1]) + a.max(b)
    }

    /// `((X₁−c₁)/a)² + ((X₂−c₂)/b)²`; equal to 1 on `∂U`.
    pub fn level(&self, x: Vec2) -> f64 {
        let c = self.center();
        let (a, b) = self.semi_axes();
        let u = (x[0] - c[0]) / a;
        let v = (x[1] - c[1]) / b;
        u * u + v * v
    }

    pub fn contains(&self, x: Vec2) -> bool {
        self.level(x) <= 1.0
    }

    pub fn boundary_point(&self, t: f64) -> Vec2 {
        let c = self.center();
        let (a, b) = self.semi_axes();
        let (s, co) = t.sin_cos();
        [c[0] + a * co, c[1] + b * s]
    }

    /// Unit outward normal `nᵁ` at boundary parameter `t`.
    pub fn outward_normal(&self, t: f64) -> Vec2 {
        let (a, b) = self.semi_axes();
        let (s, co) = t.sin_cos();
        let n = [b * co, a * s];
        let len = n[0].hypot(n[1]);
        [n[0] / len, n[1] / len]
    }

    /// Boundary speed `|d/dt boundary_point(t)|`.
    pub fn boundary_speed(&self, t: f64) -> f64 {
        let (a, b) = self.semi_axes();
        let (s, co) = t.sin_cos();
        (a * s).hypot(b * co)
    }

    pub fn perimeter(&self) -> f64 {
        if self.is_disk() {
            return 2.0 * PI * self.semi_axes().0;
        }
        *ArcTable::new(self).cumulative.last().unwrap()
    }

    /// Boundary parameters of `n` points equally spaced in arc length,
    /// the first one shifted by `offset` spacings from `t = 0`.
    pub fn equidistributed_params(&self, n: usize, offset: f64) -> Vec<f64> {
        if self.is_disk() {
            return (0..n)
                .map(|j| 2.0 * PI * (j as f64 + offset) / n as f64)
                .collect();
        }
        let table = ArcTable::new(self);
        (0..n)
            .map(|j| table.param_at_fraction((j as f64 + offset) / n as f64))
            .collect()
    }
}

/// Cumulative arc length of the boundary on a uniform grid in `t`.
struct ArcTable {
    cumulative: Vec<f64>,
}

impl ArcTable {
    fn new(domain: &DomainSpec) -> Self {
        let dt = 2.0 * PI / ARC_TABLE_SIZE as f64;
        let mut cumulative = Vec::with_capacity(ARC_TABLE_SIZE + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..ARC_TABLE_SIZE {
            let t0 = k as f64 * dt;
            // Simpson on each cell.
            let f0 = domain.boundary_speed(t0);
            let fm = domain.boundary_speed(t0 + 0.5 * dt);
            let f1 = domain.boundary_speed(t0 + dt);
            acc += dt * (f0 + 4.0 * fm + f1) / 6.0;
            cumulative.push(acc);
        }
        ArcTable { cumulative }
    }

    fn param_at_fraction(&self, u: f64) -> f64 {
        let total = *self.cumulative.last().unwrap();
        let target = u.rem_euclid(1.0) * total;
        let k = match self
            .cumulative
            .binary_search_by(|probe| probe.partial_cmp(&target).unwrap())
        {
            Ok(k) => return 2.0 * PI * k as f64 / ARC_TABLE_SIZE as f64,
            Err(k) => k.clamp(1, ARC_TABLE_SIZE) - 1,
        };
        let (s0, s1) = (self.cumulative[k], self.cumulative[k + 1]);
        let frac = (target - s0) / (s1 - s0);
        2.0 * PI * (k as f64 + frac) / ARC_TABLE_SIZE as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_perimeter_matches_ramanujan() {
        let d = DomainSpec::ellipse(2.0, 1.0);
        let (a, b) = (2.0_f64, 1.0_f64);
        let h = ((a - b) / (a + b)).powi(2);
        let ramanujan = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((d.perimeter() - ramanujan).abs() < 1e-6);
    }

    #[test]
    fn equidistributed_points_have_equal_chords() {
        let d = DomainSpec::ellipse(2.0, 1.0);
        let ts = d.equidistributed_params(64, 0.0);
        let pts: Vec<_> = ts.iter().map(|&t| d.boundary_point(t)).collect();
        let chords: Vec<f64> = (0..64)
            .map(|j| {
                let p = pts[j];
                let q = pts[(j + 1) % 64];
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .collect();
        let max = chords.iter().cloned().fold(0.0, f64::max);
        let min = chords.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 1.01, "{min} {max}");
    }

    #[test]
    fn boundary_points_satisfy_level_set() {
        let d = DomainSpec::Ellipse {
            a: 2.0,
            b: 1.0,
            center: [0.5, -1.0],
        };
        for k in 0..100 {
            let t = k as f64 * 0.0628;
            assert!((d.level(d.boundary_point(t)) - 1.0).abs() < 1e-14);
            let n = d.outward_normal(t);
            assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_nonpositive_radius() {
        assert!(DomainSpec::disk(0.0).validate().is_err());
        assert!(DomainSpec::disk(-1.0).validate().is_err());
        assert!(DomainSpec::disk(1.0).validate().is_ok());
    }
}
