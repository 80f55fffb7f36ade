use super::{per_triangle, SurfaceField, SurfaceVectorField, TriangleVectorField};
use crate::geometry::{metric_frame, Chart, MetricFrame};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::linalg::{norm2, sub2, Vec2, Vec3};
#[cfg(test)]
use crate::linalg::dot3;
use crate::mesh::ParamMesh;
use crate::Result;

const CENTROID: [f64; 3] = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];

fn centroid_frame(chart: &Chart, mesh: &ParamMesh, t: usize) -> Result<MetricFrame> {
    metric_frame(chart, mesh.barycentric_point(t, CENTROID))
}

/// Piecewise-constant `∇_Γ v = Σ g^{αβ} g_α ∂v̂/∂X_β`, evaluated at each
/// triangle centroid.
pub fn tangential_gradient(
    chart: &Chart,
    mesh: &ParamMesh,
    v: &SurfaceField,
) -> Result<TriangleVectorField> {
    v.check(mesh)?;
    let values = per_triangle(mesh, |t| {
        let frame = centroid_frame(chart, mesh, t)?;
        Ok(frame.tangential_gradient(v.parameter_gradient(mesh, t)))
    })?;
    Ok(TriangleVectorField { values })
}

/// Per-triangle `div_Γ f = Σ_j Σ_{α,β} g^{αβ} (g_α)_j ∂f̂_j/∂X_β` at the
/// centroid, for a nodal field `f`.
pub fn surface_divergence(chart: &Chart, mesh: &ParamMesh, f: &SurfaceVectorField) -> Result<Vec<f64>> {
    f.check(mesh)?;
    per_triangle(mesh, |t| {
        let frame = centroid_frame(chart, mesh, t)?;
        Ok(frame.divergence(f.parameter_jacobian(mesh, t)))
    })
}

/// Nodal tangential gradient by polynomial-preserving recovery: a
/// least-squares quadratic is fitted to `v̂` on the two-ring patch of each
/// vertex, and its parameter gradient at the vertex is mapped to the
/// surface with the metric there. The result is tangent and reproduces the
/// gradient of quadratic `v̂` exactly.
pub fn recover_nodal_gradient(
    chart: &Chart,
    mesh: &ParamMesh,
    v: &SurfaceField,
) -> Result<SurfaceVectorField> {
    v.check(mesh)?;
    let neighbors = vertex_neighbors(mesh);
    let nodal: Vec<Vec3> = (0..mesh.num_vertices())
        .into_par_iter()
        .map(|i| {
            let patch = two_ring(&neighbors, i);
            let d = fit_gradient(mesh, v, i, &patch);
            Ok(metric_frame(chart, mesh.vertices()[i])?.tangential_gradient(d))
        })
        .collect::<Result<_>>()?;
    Ok(SurfaceVectorField::from_nodal(&nodal))
}

fn vertex_neighbors(mesh: &ParamMesh) -> Vec<Vec<usize>> {
    let mut nb: Vec<Vec<usize>> = vec![Vec::new(); mesh.num_vertices()];
    for tri in mesh.triangles() {
        for &a in tri {
            nb[a].extend(tri.iter().copied().filter(|&b| b != a));
        }
    }
    for list in &mut nb {
        list.sort_unstable();
        list.dedup();
    }
    nb
}

fn two_ring(neighbors: &[Vec<usize>], i: usize) -> Vec<usize> {
    let mut patch: Vec<usize> = neighbors[i]
        .iter()
        .flat_map(|&j| neighbors[j].iter().copied().chain(std::iter::once(j)))
        .filter(|&j| j != i)
        .collect();
    patch.sort_unstable();
    patch.dedup();
    patch
}

/// Parameter gradient at vertex `i` of the quadratic least-squares fit
/// `c₀ + c₁x + c₂y + c₃x² + c₄xy + c₅y²` through the patch values, in
/// coordinates centred at the vertex and scaled by the patch size.
fn fit_gradient(mesh: &ParamMesh, v: &SurfaceField, i: usize, patch: &[usize]) -> Vec2 {
    let xi = mesh.vertices()[i];
    let scale = patch
        .iter()
        .map(|&j| norm2(sub2(mesh.vertices()[j], xi)))
        .fold(0.0, f64::max);
    let rows = patch.len() + 1;
    let mut a = DMatrix::<f64>::zeros(rows, 6);
    let mut b = DVector::<f64>::zeros(rows);
    for (r, j) in std::iter::once(i).chain(patch.iter().copied()).enumerate() {
        let d = sub2(mesh.vertices()[j], xi);
        let (x, y) = (d[0] / scale, d[1] / scale);
        for (c, m) in [1.0, x, y, x * x, x * y, y * y].into_iter().enumerate() {
            a[(r, c)] = m;
        }
        b[r] = v.values[j];
    }
    let c = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .expect("SVD was computed with both factors");
    [c[1] / scale, c[2] / scale]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ChartKind, DomainSpec};
    use crate::mesh::generate_mesh;

    fn setup(kind: Option<ChartKind>) -> (Chart, ParamMesh) {
        let d = DomainSpec::unit_disk();
        let chart = match kind {
            None => Chart::flat(d.clone()),
            Some(k) => Chart::new(k, d.clone()).unwrap(),
        };
        (chart, generate_mesh(&d, 0.2).unwrap())
    }

    #[test]
    fn flat_gradient_of_linear() {
        let (chart, mesh) = setup(None);
        let v = SurfaceField::interpolate(&mesh, |x| x[0]);
        for g in tangential_gradient(&chart, &mesh, &v).unwrap().values {
            assert!((g[0] - 1.0).abs() < 1e-12 && g[1].abs() < 1e-12 && g[2] == 0.0);
        }
        let c = SurfaceField::constant(&mesh, 3.5);
        for g in tangential_gradient(&chart, &mesh, &c).unwrap().values {
            assert!(g.iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn hemisphere_gradient_of_x1() {
        let (chart, mesh) = setup(Some(ChartKind::Hemisphere { radius: 2.0 }));
        let v = SurfaceField::interpolate(&mesh, |x| x[0]);
        let grads = tangential_gradient(&chart, &mesh, &v).unwrap();
        for (t, g) in grads.values.iter().enumerate() {
            // On the sphere x₁ = X₁, so ∇_Γ v = e₁ − (n·e₁) n with n = x/R.
            let p = mesh.barycentric_point(t, CENTROID);
            let z = (4.0 - p[0] * p[0] - p[1] * p[1]).sqrt();
            let n = [p[0] / 2.0, p[1] / 2.0, z / 2.0];
            let expect = [1.0 - n[0] * n[0], -n[0] * n[1], -n[0] * n[2]];
            for k in 0..3 {
                assert!((g[k] - expect[k]).abs() < 1e-12);
            }
            assert!(dot3(*g, n).abs() < 1e-10);
        }
    }

    #[test]
    fn divergence_examples() {
        let (chart, mesh) = setup(None);
        let f = SurfaceVectorField::interpolate(&mesh, |x| [x[0], x[1], 0.0]);
        for d in surface_divergence(&chart, &mesh, &f).unwrap() {
            assert!((d - 2.0).abs() < 1e-12);
        }
        let c = SurfaceVectorField::interpolate(&mesh, |_| [1.0, -2.0, 0.5]);
        for d in surface_divergence(&chart, &mesh, &c).unwrap() {
            assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn cylinder_normal_divergence() {
        let (chart, mesh) = setup(Some(ChartKind::Cylinder { radius: 1.0 }));
        let f = SurfaceVectorField::interpolate(&mesh, |x| [x[0].cos(), x[0].sin(), 0.0]);
        for d in surface_divergence(&chart, &mesh, &f).unwrap() {
            // Interpolation error in cos/sin is O(h²).
            assert!((d - 1.0).abs() < 1e-2, "{d}");
        }
    }

    #[test]
    fn divergence_is_linear() {
        let (chart, mesh) = setup(Some(ChartKind::Hemisphere { radius: 2.0 }));
        let f = SurfaceVectorField::interpolate(&mesh, |x| [x[1], x[0] * x[0], x[0]]);
        let g = SurfaceVectorField::interpolate(&mesh, |x| [x[0].sin(), 1.0, x[1]]);
        let h = SurfaceVectorField::interpolate(&mesh, |x| {
            [2.0 * x[1] - 3.0 * x[0].sin(), 2.0 * x[0] * x[0] - 3.0, 2.0 * x[0] - 3.0 * x[1]]
        });
        let (df, dg, dh) = (
            surface_divergence(&chart, &mesh, &f).unwrap(),
            surface_divergence(&chart, &mesh, &g).unwrap(),
            surface_divergence(&chart, &mesh, &h).unwrap(),
        );
        for t in 0..df.len() {
            assert!((dh[t] - (2.0 * df[t] - 3.0 * dg[t])).abs() < 1e-10);
        }
    }

    #[test]
    fn recovered_gradient_reproduces_quadratics() {
        let (chart, mesh) = setup(None);
        let v = SurfaceField::interpolate(&mesh, |x| 1.0 + x[0] * x[0] - 3.0 * x[0] * x[1] + 0.5 * x[1]);
        let g = recover_nodal_gradient(&chart, &mesh, &v).unwrap();
        for (i, x) in mesh.vertices().iter().enumerate() {
            let gi = g.node(i);
            assert!((gi[0] - (2.0 * x[0] - 3.0 * x[1])).abs() < 1e-10);
            assert!((gi[1] - (-3.0 * x[0] + 0.5)).abs() < 1e-10);
        }
    }

    #[test]
    fn recovered_gradient_is_tangent_and_exact_for_linears_on_flat() {
        let (chart, mesh) = setup(None);
        let v = SurfaceField::interpolate(&mesh, |x| 2.0 * x[0] - x[1]);
        let g = recover_nodal_gradient(&chart, &mesh, &v).unwrap();
        for i in 0..mesh.num_vertices() {
            let gi = g.node(i);
            assert!((gi[0] - 2.0).abs() < 1e-12 && (gi[1] + 1.0).abs() < 1e-12 && gi[2] == 0.0);
        }
        let (chart, mesh) = setup(Some(ChartKind::Hemisphere { radius: 2.0 }));
        let v = SurfaceField::interpolate(&mesh, |x| x[0] * x[1]);
        let g = recover_nodal_gradient(&chart, &mesh, &v).unwrap();
        for (i, &x) in mesh.vertices().iter().enumerate() {
            let n = metric_frame(&chart, x).unwrap().normal;
            assert!(dot3(g.node(i), n).abs() < 1e-12);
        }
    }
}
