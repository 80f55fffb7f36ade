//! Analytic scalar and vector fields on the parameter domain, selectable
//! by name from the run configuration.
//!
//! All fields are pullbacks: a scalar `ψ` on `Γ₀` is represented by
//! `ψ̂(X) = ψ(x̂(X))`, and its parameter gradient is `∇_X ψ̂`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::MongeTerm;
use crate::linalg::{Vec2, Vec3};

/// Scalar field with a closed-form parameter gradient.
pub trait SmoothScalar: Sync {
    fn value(&self, x: Vec2) -> f64;
    fn gradient(&self, x: Vec2) -> Vec2;
}

/// Vector field `f̂ : U → ℝ³` with closed-form parameter derivatives
/// `[∂f̂/∂X₁, ∂f̂/∂X₂]`.
pub trait SmoothVector: Sync {
    fn value(&self, x: Vec2) -> Vec3;
    fn jacobian(&self, x: Vec2) -> [Vec3; 2];
}

/// Scalar field assembled from two closures.
pub struct FnScalar<V, G> {
    pub value: V,
    pub gradient: G,
}

impl<V, G> SmoothScalar for FnScalar<V, G>
where
    V: Fn(Vec2) -> f64 + Sync,
    G: Fn(Vec2) -> Vec2 + Sync,
{
    fn value(&self, x: Vec2) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: Vec2) -> Vec2 {
        (self.gradient)(x)
    }
}

/// Vector field assembled from two closures.
pub struct FnVector<V, J> {
    pub value: V,
    pub jacobian: J,
}

impl<V, J> SmoothVector for FnVector<V, J>
where
    V: Fn(Vec2) -> Vec3 + Sync,
    J: Fn(Vec2) -> [Vec3; 2] + Sync,
{
    fn value(&self, x: Vec2) -> Vec3 {
        (self.value)(x)
    }
    fn jacobian(&self, x: Vec2) -> [Vec3; 2] {
        (self.jacobian)(x)
    }
}

/// Named scalar fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", from = "ScalarRepr")]
pub enum ScalarSpec {
    Zero,
    Constant { value: f64 },
    X1,
    X2,
    /// `cos(π|X|²)`: mean-zero on the unit disk, zero radial derivative on
    /// the unit circle.
    CosR2,
    /// `4π sin(π|X|²) + 4π²|X|² cos(π|X|²) = −Δ cos(π|X|²)`.
    CosR2Forcing,
    /// `X₁² − X₂²`, harmonic; equals `cos 2θ` on the unit circle.
    HarmonicQuadratic,
    SinX1,
    ExpX2,
    Polynomial { terms: Vec<MongeTerm> },
}

// Unit variants of an internally tagged enum accept unknown keys, so
// parsing goes through struct variants that reject them.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ScalarRepr {
    Zero {},
    Constant { value: f64 },
    X1 {},
    X2 {},
    CosR2 {},
    CosR2Forcing {},
    HarmonicQuadratic {},
    SinX1 {},
    ExpX2 {},
    Polynomial { terms: Vec<MongeTerm> },
}

impl From<ScalarRepr> for ScalarSpec {
    fn from(r: ScalarRepr) -> Self {
        match r {
            ScalarRepr::Zero {} => ScalarSpec::Zero,
            ScalarRepr::Constant { value } => ScalarSpec::Constant { value },
            ScalarRepr::X1 {} => ScalarSpec::X1,
            ScalarRepr::X2 {} => ScalarSpec::X2,
            ScalarRepr::CosR2 {} => ScalarSpec::CosR2,
            ScalarRepr::CosR2Forcing {} => ScalarSpec::CosR2Forcing,
            ScalarRepr::HarmonicQuadratic {} => ScalarSpec::HarmonicQuadratic,
            ScalarRepr::SinX1 {} => ScalarSpec::SinX1,
            ScalarRepr::ExpX2 {} => ScalarSpec::ExpX2,
            ScalarRepr::Polynomial { terms } => ScalarSpec::Polynomial { terms },
        }
    }
}

impl SmoothScalar for ScalarSpec {
    fn value(&self, x: Vec2) -> f64 {
        let [x1, x2] = x;
        let r2 = x1 * x1 + x2 * x2;
        match self {
            ScalarSpec::Zero => 0.0,
            ScalarSpec::Constant { value } => *value,
            ScalarSpec::X1 => x1,
            ScalarSpec::X2 => x2,
            ScalarSpec::CosR2 => (PI * r2).cos(),
            ScalarSpec::CosR2Forcing => {
                let (s, c) = (PI * r2).sin_cos();
                4.0 * PI * s + 4.0 * PI * PI * r2 * c
            }
            ScalarSpec::HarmonicQuadratic => x1 * x1 - x2 * x2,
            ScalarSpec::SinX1 => x1.sin(),
            ScalarSpec::ExpX2 => x2.exp(),
            ScalarSpec::Polynomial { terms } => terms
                .iter()
                .map(|t| t.c * x1.powi(t.i as i32) * x2.powi(t.j as i32))
                .sum(),
        }
    }

    fn gradient(&self, x: Vec2) -> Vec2 {
        let [x1, x2] = x;
        let r2 = x1 * x1 + x2 * x2;
        match self {
            ScalarSpec::Zero | ScalarSpec::Constant { .. } => [0.0, 0.0],
            ScalarSpec::X1 => [1.0, 0.0],
            ScalarSpec::X2 => [0.0, 1.0],
            ScalarSpec::CosR2 => {
                let d = -2.0 * PI * (PI * r2).sin();
                [d * x1, d * x2]
            }
            ScalarSpec::CosR2Forcing => {
                let (s, c) = (PI * r2).sin_cos();
                // d/d(r²) then chain rule with ∇(r²) = 2X.
                let d = 8.0 * PI * PI * c - 4.0 * PI.powi(3) * r2 * s;
                [2.0 * d * x1, 2.0 * d * x2]
            }
            ScalarSpec::HarmonicQuadratic => [2.0 * x1, -2.0 * x2],
            ScalarSpec::SinX1 => [x1.cos(), 0.0],
            ScalarSpec::ExpX2 => [0.0, x2.exp()],
            ScalarSpec::Polynomial { terms } => {
                let mut g = [0.0, 0.0];
                for t in terms {
                    if t.i > 0 {
                        g[0] += t.c * t.i as f64 * x1.powi(t.i as i32 - 1) * x2.powi(t.j as i32);
                    }
                    if t.j > 0 {
                        g[1] += t.c * t.j as f64 * x1.powi(t.i as i32) * x2.powi(t.j as i32 - 1);
                    }
                }
                g
            }
        }
    }
}

impl ScalarSpec {
    pub fn is_zero(&self) -> bool {
        matches!(self, ScalarSpec::Zero) || *self == ScalarSpec::Constant { value: 0.0 }
    }
}

/// Named vector fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", from = "VectorRepr")]
pub enum VectorSpec {
    Constant { value: Vec3 },
    /// `(X₁, X₂, 0)`.
    Planar,
    /// `(X₂, −X₁, 0)`.
    Rotation,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum VectorRepr {
    Constant { value: Vec3 },
    Planar {},
    Rotation {},
}

impl From<VectorRepr> for VectorSpec {
    fn from(r: VectorRepr) -> Self {
        match r {
            VectorRepr::Constant { value } => VectorSpec::Constant { value },
            VectorRepr::Planar {} => VectorSpec::Planar,
            VectorRepr::Rotation {} => VectorSpec::Rotation,
        }
    }
}

impl SmoothVector for VectorSpec {
    fn value(&self, x: Vec2) -> Vec3 {
        match self {
            VectorSpec::Constant { value } => *value,
            VectorSpec::Planar => [x[0], x[1], 0.0],
            VectorSpec::Rotation => [x[1], -x[0], 0.0],
        }
    }

    fn jacobian(&self, _x: Vec2) -> [Vec3; 2] {
        match self {
            VectorSpec::Constant { .. } => [[0.0; 3]; 2],
            VectorSpec::Planar => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            VectorSpec::Rotation => [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0]],
        }
    }
}

/// Manufactured Neumann problems: an exact solution with vanishing
/// co-normal derivative and zero mean, and its forcing `−Δ_Γ v`.
/// Both entries are stated for the flat unit disk (and its isometric
/// images such as the unit-radius cylinder chart).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manufactured {
    CosR2,
    Zero,
}

impl Manufactured {
    pub fn exact(self) -> ScalarSpec {
        match self {
            Manufactured::CosR2 => ScalarSpec::CosR2,
            Manufactured::Zero => ScalarSpec::Zero,
        }
    }

    pub fn forcing(self) -> ScalarSpec {
        match self {
            Manufactured::CosR2 => ScalarSpec::CosR2Forcing,
            Manufactured::Zero => ScalarSpec::Zero,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<ScalarSpec> {
        vec![
            ScalarSpec::Constant { value: 2.5 },
            ScalarSpec::X1,
            ScalarSpec::X2,
            ScalarSpec::CosR2,
            ScalarSpec::CosR2Forcing,
            ScalarSpec::HarmonicQuadratic,
            ScalarSpec::SinX1,
            ScalarSpec::ExpX2,
            ScalarSpec::Polynomial {
                terms: vec![
                    MongeTerm { i: 2, j: 1, c: 0.5 },
                    MongeTerm { i: 0, j: 3, c: -1.0 },
                ],
            },
        ]
    }

    #[test]
    fn gradients_match_finite_differences() {
        let step = 1e-6;
        for f in catalog() {
            for &x in &[[0.3, -0.4], [0.0, 0.7], [-0.8, 0.1]] {
                let g = f.gradient(x);
                for a in 0..2 {
                    let (mut p, mut m) = (x, x);
                    p[a] += step;
                    m[a] -= step;
                    let fd = (f.value(p) - f.value(m)) / (2.0 * step);
                    assert!((fd - g[a]).abs() < 1e-6 * (1.0 + g[a].abs()), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn forcing_is_negative_laplacian_of_cos_r2() {
        // Five-point Laplacian of cos(π r²) against the closed-form forcing.
        let h = 1e-4;
        let v = ScalarSpec::CosR2;
        for &x in &[[0.2, 0.3], [0.6, -0.5], [-0.1, 0.9]] {
            let lap = (v.value([x[0] + h, x[1]])
                + v.value([x[0] - h, x[1]])
                + v.value([x[0], x[1] + h])
                + v.value([x[0], x[1] - h])
                - 4.0 * v.value(x))
                / (h * h);
            assert!((ScalarSpec::CosR2Forcing.value(x) + lap).abs() < 1e-5);
        }
    }

    #[test]
    fn parses_tagged_json() {
        let f: ScalarSpec = serde_json::from_str(r#"{"kind":"constant","value":1.0}"#).unwrap();
        assert_eq!(f, ScalarSpec::Constant { value: 1.0 });
        let f: ScalarSpec = serde_json::from_str(r#"{"kind":"cos_r2_forcing"}"#).unwrap();
        assert_eq!(f, ScalarSpec::CosR2Forcing);
        assert!(serde_json::from_str::<ScalarSpec>(r#"{"kind":"x1","extra":0}"#).is_err());
        assert!(serde_json::from_str::<ScalarSpec>(r#"{"kind":"constant","value":1,"c":2}"#).is_err());
        assert!(serde_json::from_str::<VectorSpec>(r#"{"kind":"planar","z":1}"#).is_err());
        let v: VectorSpec = serde_json::from_str(r#"{"kind":"rotation"}"#).unwrap();
        assert_eq!(v, VectorSpec::Rotation);
        for spec in [ScalarSpec::X1, ScalarSpec::Constant { value: -2.0 }] {
            let json = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<ScalarSpec>(&json).unwrap(), spec);
        }
    }
}
