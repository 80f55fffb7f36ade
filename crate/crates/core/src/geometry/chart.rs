use serde::{Deserialize, Serialize};

use super::DomainSpec;
use crate::linalg::{Vec2, Vec3};
use crate::{Error, Result};

/// Default floor for `|g₁ × g₂|` below which a chart is treated as degenerate.
pub const DEFAULT_LAMBDA_MIN_FLOOR: f64 = 1e-8;

/// One monomial `c · X₁^i · X₂^j` of a Monge height function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MongeTerm {
    pub i: u32,
    pub j: u32,
    pub c: f64,
}

/// Built-in chart families. Every entry supplies its first and second
/// derivatives in closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChartKind {
    /// `x̂ = (X₁, X₂, 0)`.
    Flat {},
    /// Graph `x̂ = (X₁, X₂, Σ c X₁^i X₂^j)` with total degree at most 4.
    Monge { terms: Vec<MongeTerm> },
    /// Upper sphere cap `x̂ = (X₁, X₂, √(R² − |X|²))`.
    Hemisphere { radius: f64 },
    /// Arc-length cylinder `x̂ = (ρ cos(X₁/ρ), ρ sin(X₁/ρ), X₂)`; isometric
    /// to the plane.
    Cylinder { radius: f64 },
    /// `x̂ = (X₁, (X₁ − offset) X₂, 0)`; `g₂` vanishes on the line
    /// `X₁ = offset`. Exists to exercise degeneracy detection.
    Pinched { offset: f64 },
}

impl ChartKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChartKind::Flat {} => "flat",
            ChartKind::Monge { .. } => "monge",
            ChartKind::Hemisphere { .. } => "hemisphere",
            ChartKind::Cylinder { .. } => "cylinder",
            ChartKind::Pinched { .. } => "pinched",
        }
    }
}

/// A chart together with its parameter domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    kind: ChartKind,
    domain: DomainSpec,
    lambda_min_floor: f64,
}

impl Chart {
    pub fn new(kind: ChartKind, domain: DomainSpec) -> Result<Self> {
        domain.validate()?;
        match &kind {
            ChartKind::Flat {} | ChartKind::Pinched { .. } => {}
            ChartKind::Monge { terms } => {
                if let Some(t) = terms.iter().find(|t| t.i + t.j > 4 || !t.c.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "monge term X1^{} X2^{} (c = {}) exceeds degree 4 or is not finite",
                        t.i, t.j, t.c
                    )));
                }
            }
            ChartKind::Hemisphere { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidInput("hemisphere radius must be positive".into()));
                }
                if domain.max_distance_from_origin() >= *radius {
                    return Err(Error::InvalidInput(format!(
                        "hemisphere patch must lie strictly inside |X| < {radius}"
                    )));
                }
            }
            ChartKind::Cylinder { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidInput("cylinder radius must be positive".into()));
                }
            }
        }
        Ok(Chart {
            kind,
            domain,
            lambda_min_floor: DEFAULT_LAMBDA_MIN_FLOOR,
        })
    }

    pub fn flat(domain: DomainSpec) -> Self {
        Chart::new(ChartKind::Flat {}, domain).expect("flat chart on a valid domain")
    }

    pub fn with_lambda_min_floor(mut self, floor: f64) -> Self {
        self.lambda_min_floor = floor;
        self
    }

    pub fn kind(&self) -> &ChartKind {
        &self.kind
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn lambda_min_floor(&self) -> f64 {
        self.lambda_min_floor
    }

    /// `x̂(X)`.
    pub fn position(&self, x: Vec2) -> Vec3 {
        let [x1, x2] = x;
        match &self.kind {
            ChartKind::Flat {} => [x1, x2, 0.0],
            ChartKind::Monge { terms } => [x1, x2, monge_eval(terms, x, 0, 0)],
            ChartKind::Hemisphere { radius } => {
                [x1, x2, (radius * radius - x1 * x1 - x2 * x2).sqrt()]
            }
            ChartKind::Cylinder { radius } => {
                let (s, c) = (x1 / radius).sin_cos();
                [radius * c, radius * s, x2]
            }
            ChartKind::Pinched { offset } => [x1, (x1 - offset) * x2, 0.0],
        }
    }

    /// `[g₁, g₂]` with `g_α = ∂x̂/∂X_α`.
    pub fn jacobian(&self, x: Vec2) -> [Vec3; 2] {
        let [x1, x2] = x;
        match &self.kind {
            ChartKind::Flat {} => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            ChartKind::Monge { terms } => [
                [1.0, 0.0, monge_eval(terms, x, 1, 0)],
                [0.0, 1.0, monge_eval(terms, x, 0, 1)],
            ],
            ChartKind::Hemisphere { radius } => {
                let z = (radius * radius - x1 * x1 - x2 * x2).sqrt();
                [[1.0, 0.0, -x1 / z], [0.0, 1.0, -x2 / z]]
            }
            ChartKind::Cylinder { radius } => {
                let (s, c) = (x1 / radius).sin_cos();
                [[-s, c, 0.0], [0.0, 0.0, 1.0]]
            }
            ChartKind::Pinched { offset } => [[1.0, x2, 0.0], [0.0, x1 - offset, 0.0]],
        }
    }

    /// `[x̂₁₁, x̂₁₂, x̂₂₂]`, second derivatives in closed form.
    pub fn hessian(&self, x: Vec2) -> [Vec3; 3] {
        let [x1, x2] = x;
        match &self.kind {
            ChartKind::Flat {} => [[0.0; 3]; 3],
            ChartKind::Monge { terms } => [
                [0.0, 0.0, monge_eval(terms, x, 2, 0)],
                [0.0, 0.0, monge_eval(terms, x, 1, 1)],
                [0.0, 0.0, monge_eval(terms, x, 0, 2)],
            ],
            ChartKind::Hemisphere { radius } => {
                let z = (radius * radius - x1 * x1 - x2 * x2).sqrt();
                let z3 = z * z * z;
                [
                    [0.0, 0.0, -1.0 / z - x1 * x1 / z3],
                    [0.0, 0.0, -x1 * x2 / z3],
                    [0.0, 0.0, -1.0 / z - x2 * x2 / z3],
                ]
            }
            ChartKind::Cylinder { radius } => {
                let (s, c) = (x1 / radius).sin_cos();
                [[-c / radius, -s / radius, 0.0], [0.0; 3], [0.0; 3]]
            }
            ChartKind::Pinched { .. } => [[0.0; 3], [0.0, 1.0, 0.0], [0.0; 3]],
        }
    }
}

/// `∂^{d1+d2}/∂X₁^{d1}∂X₂^{d2}` of the Monge height function.
fn monge_eval(terms: &[MongeTerm], x: Vec2, d1: u32, d2: u32) -> f64 {
    terms
        .iter()
        .filter(|t| t.i >= d1 && t.j >= d2)
        .map(|t| {
            let f1 = falling(t.i, d1) * x[0].powi((t.i - d1) as i32);
            let f2 = falling(t.j, d2) * x[1].powi((t.j - d2) as i32);
            t.c * f1 * f2
        })
        .sum()
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).map(|m| (n - m) as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn catalog() -> Vec<Chart> {
        let disk = DomainSpec::unit_disk();
        vec![
            Chart::flat(disk.clone()),
            Chart::new(
                ChartKind::Monge {
                    terms: vec![
                        MongeTerm { i: 2, j: 0, c: 0.3 },
                        MongeTerm { i: 1, j: 1, c: -0.2 },
                        MongeTerm { i: 0, j: 3, c: 0.1 },
                        MongeTerm { i: 2, j: 2, c: 0.05 },
                        MongeTerm { i: 4, j: 0, c: -0.04 },
                    ],
                },
                disk.clone(),
            )
            .unwrap(),
            Chart::new(ChartKind::Hemisphere { radius: 2.0 }, disk.clone()).unwrap(),
            Chart::new(ChartKind::Cylinder { radius: 1.0 }, disk.clone()).unwrap(),
            Chart::new(ChartKind::Cylinder { radius: 0.7 }, disk.clone()).unwrap(),
            Chart::new(ChartKind::Pinched { offset: 0.3 }, disk).unwrap(),
        ]
    }

    fn rel_close(a: Vec3, b: Vec3, tol: f64) -> bool {
        let scale = a.iter().chain(&b).fold(1.0_f64, |m, v| m.max(v.abs()));
        (0..3).all(|k| (a[k] - b[k]).abs() <= tol * scale)
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let step = 1e-5;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for chart in catalog() {
            for _ in 0..1000 {
                let r = 0.99 * rng.random::<f64>().sqrt();
                let th = rng.random::<f64>() * std::f64::consts::TAU;
                let x = [r * th.cos(), r * th.sin()];
                let jac = chart.jacobian(x);
                let hess = chart.hessian(x);
                for a in 0..2 {
                    let mut xp = x;
                    let mut xm = x;
                    xp[a] += step;
                    xm[a] -= step;
                    let pp = chart.position(xp);
                    let pm = chart.position(xm);
                    let fd: Vec3 = std::array::from_fn(|k| (pp[k] - pm[k]) / (2.0 * step));
                    assert!(rel_close(fd, jac[a], 1e-6), "{:?} jac {a} at {x:?}", chart.kind());

                    let jp = chart.jacobian(xp);
                    let jm = chart.jacobian(xm);
                    for b in 0..2 {
                        let fd: Vec3 =
                            std::array::from_fn(|k| (jp[b][k] - jm[b][k]) / (2.0 * step));
                        let idx = a + b;
                        assert!(
                            rel_close(fd, hess[idx], 1e-6),
                            "{:?} hess ({a},{b}) at {x:?}",
                            chart.kind()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn monge_rejects_high_degree() {
        let kind = ChartKind::Monge {
            terms: vec![MongeTerm { i: 3, j: 2, c: 1.0 }],
        };
        assert!(Chart::new(kind, DomainSpec::unit_disk()).is_err());
    }

    #[test]
    fn hemisphere_patch_must_fit() {
        let kind = ChartKind::Hemisphere { radius: 1.0 };
        assert!(Chart::new(kind.clone(), DomainSpec::unit_disk()).is_err());
        assert!(Chart::new(kind, DomainSpec::disk(0.9)).is_ok());
    }

    #[test]
    fn flat_params_may_be_empty_object() {
        let k: ChartKind = serde_json::from_str(r#"{"kind":"flat","params":{}}"#).unwrap();
        assert_eq!(k, ChartKind::Flat {});
        let k: ChartKind =
            serde_json::from_str(r#"{"kind":"hemisphere","params":{"radius":2.0}}"#).unwrap();
        assert_eq!(k, ChartKind::Hemisphere { radius: 2.0 });
        assert!(serde_json::from_str::<ChartKind>(
            r#"{"kind":"hemisphere","params":{"radius":2.0,"extra":1}}"#
        )
        .is_err());
    }
}
