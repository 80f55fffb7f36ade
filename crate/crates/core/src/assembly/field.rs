use crate::linalg::{Vec2, Vec3};
use crate::mesh::ParamMesh;
use crate::{Error, Result};

/// P1 scalar field: one value per mesh vertex, representing `v̂` with
/// `v = v̂ ∘ X̆` on `Γ₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceField {
    pub values: Vec<f64>,
}

impl SurfaceField {
    pub fn new(values: Vec<f64>) -> Self {
        SurfaceField { values }
    }

    pub fn zeros(mesh: &ParamMesh) -> Self {
        SurfaceField::new(vec![0.0; mesh.num_vertices()])
    }

    pub fn constant(mesh: &ParamMesh, c: f64) -> Self {
        SurfaceField::new(vec![c; mesh.num_vertices()])
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(mesh: &ParamMesh, f: impl Fn(Vec2) -> f64) -> Self {
        SurfaceField::new(mesh.vertices().iter().map(|&x| f(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check(&self, mesh: &ParamMesh) -> Result<()> {
        check_len(mesh.num_vertices(), self.values.len())
    }

    pub fn at(&self, mesh: &ParamMesh, t: usize, bary: [f64; 3]) -> f64 {
        let tri = mesh.triangles()[t];
        (0..3).map(|k| bary[k] * self.values[tri[k]]).sum()
    }

    /// Constant parameter gradient `∇_X v̂` on triangle `t`.
    pub fn parameter_gradient(&self, mesh: &ParamMesh, t: usize) -> Vec2 {
        let tri = mesh.triangles()[t];
        let g = mesh.basis_gradients(t);
        let mut d = [0.0, 0.0];
        for k in 0..3 {
            d[0] += self.values[tri[k]] * g[k][0];
            d[1] += self.values[tri[k]] * g[k][1];
        }
        d
    }
}

/// Nodal P1 vector field with values in ℝ³.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceVectorField {
    pub components: [SurfaceField; 3],
}

impl SurfaceVectorField {
    pub fn zeros(mesh: &ParamMesh) -> Self {
        let z = SurfaceField::zeros(mesh);
        SurfaceVectorField {
            components: [z.clone(), z.clone(), z],
        }
    }

    pub fn from_nodal(values: &[Vec3]) -> Self {
        SurfaceVectorField {
            components: std::array::from_fn(|j| {
                SurfaceField::new(values.iter().map(|v| v[j]).collect())
            }),
        }
    }

    pub fn interpolate(mesh: &ParamMesh, f: impl Fn(Vec2) -> Vec3) -> Self {
        let vals: Vec<Vec3> = mesh.vertices().iter().map(|&x| f(x)).collect();
        Self::from_nodal(&vals)
    }

    pub fn check(&self, mesh: &ParamMesh) -> Result<()> {
        self.components.iter().try_for_each(|c| c.check(mesh))
    }

    pub fn node(&self, i: usize) -> Vec3 {
        std::array::from_fn(|j| self.components[j].values[i])
    }

    pub fn at(&self, mesh: &ParamMesh, t: usize, bary: [f64; 3]) -> Vec3 {
        std::array::from_fn(|j| self.components[j].at(mesh, t, bary))
    }

    /// `[∂f̂/∂X₁, ∂f̂/∂X₂]` on triangle `t`.
    pub fn parameter_jacobian(&self, mesh: &ParamMesh, t: usize) -> [Vec3; 2] {
        let d: [Vec2; 3] = std::array::from_fn(|j| self.components[j].parameter_gradient(mesh, t));
        [[d[0][0], d[1][0], d[2][0]], [d[0][1], d[1][1], d[2][1]]]
    }
}

/// Piecewise-constant vector field, one value per triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleVectorField {
    pub values: Vec<Vec3>,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
