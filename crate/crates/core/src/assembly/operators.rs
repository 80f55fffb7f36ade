use super::{edge_nodes, per_triangle, triangle_nodes, SurfaceField};
use crate::geometry::{Chart, MetricFrame};
use crate::linalg::Vec2;
use crate::mesh::{edge_quadrature, ParamMesh, QuadratureRule};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

type Element = [[f64; 3]; 3];

fn merge(mesh: &ParamMesh, elements: Vec<Element>) -> CsrMatrix {
    let mut m = CsrMatrix::with_triangle_pattern(mesh.num_vertices(), mesh.triangles());
    for (tri, el) in mesh.triangles().iter().zip(&elements) {
        for a in 0..3 {
            for b in 0..3 {
                m.add(tri[a], tri[b], el[a][b]);
            }
        }
    }
    m
}

/// Weighted stiffness `A_ij = ∫_U g^{αβ} ∂_α φ_i ∂_β φ_j √G dX`, the
/// Dirichlet form `⟨∇_Γ φ_i, ∇_Γ φ_j⟩`.
pub fn stiffness(chart: &Chart, mesh: &ParamMesh, quad: &QuadratureRule) -> Result<CsrMatrix> {
    if quad.order < 2 {
        return Err(Error::InvalidInput(format!(
            "stiffness needs quadrature order >= 2, got {}",
            quad.order
        )));
    }
    let elements = per_triangle(mesh, |t| {
        let grads = mesh.basis_gradients(t);
        let mut el = [[0.0; 3]; 3];
        for node in triangle_nodes(chart, mesh, t, quad)? {
            for a in 0..3 {
                for b in a..3 {
                    el[a][b] += node.weight * node.frame.inner(grads[a], grads[b]);
                }
            }
        }
        for a in 0..3 {
            for b in 0..a {
                el[a][b] = el[b][a];
            }
        }
        Ok(el)
    })?;
    Ok(merge(mesh, elements))
}

/// Weighted mass `M_ij = ∫_U φ_i φ_j √G dX`.
pub fn mass(chart: &Chart, mesh: &ParamMesh, quad: &QuadratureRule) -> Result<CsrMatrix> {
    let elements = per_triangle(mesh, |t| {
        let mut el = [[0.0; 3]; 3];
        for node in triangle_nodes(chart, mesh, t, quad)? {
            for a in 0..3 {
                for b in 0..3 {
                    el[a][b] += node.weight * node.bary[a] * node.bary[b];
                }
            }
        }
        Ok(el)
    })?;
    Ok(merge(mesh, elements))
}

/// Load vector `b_i = ∫_U F̂ φ_i √G dX` for `F̂` given on `U`.
pub fn load<F>(chart: &Chart, mesh: &ParamMesh, quad: &QuadratureRule, f: F) -> Result<Vec<f64>>
where
    F: Fn(Vec2) -> f64 + Sync + Send,
{
    load_with_frame(chart, mesh, quad, |frame: &MetricFrame| f(frame.point))
}

/// Load vector for an integrand that may use the local geometry, for
/// example `F + χ H_Γ`.
pub fn load_with_frame<F>(
    chart: &Chart,
    mesh: &ParamMesh,
    quad: &QuadratureRule,
    f: F,
) -> Result<Vec<f64>>
where
    F: Fn(&MetricFrame) -> f64 + Sync + Send,
{
    let elements = per_triangle(mesh, |t| {
        let mut el = [0.0; 3];
        for node in triangle_nodes(chart, mesh, t, quad)? {
            let fx = f(&node.frame);
            for a in 0..3 {
                el[a] += node.weight * fx * node.bary[a];
            }
        }
        Ok(el)
    })?;
    let mut b = vec![0.0; mesh.num_vertices()];
    for (tri, el) in mesh.triangles().iter().zip(&elements) {
        for a in 0..3 {
            b[tri[a]] += el[a];
        }
    }
    Ok(b)
}

/// Boundary mass `B_ij = ∫_{∂U_h} φ_i φ_j |n₁ᵁg₂ − n₂ᵁg₁| dℓ`. The matrix
/// has full dimension; rows of interior vertices are empty.
pub fn boundary_mass(chart: &Chart, mesh: &ParamMesh) -> Result<CsrMatrix> {
    let rule = edge_quadrature(5);
    let edges: Vec<[usize; 2]> = mesh.boundary_edges().iter().map(|e| e.vertices).collect();
    let mut m = CsrMatrix::with_edge_pattern(mesh.num_vertices(), &edges);
    for (e, &[a, b]) in edges.iter().enumerate() {
        for node in edge_nodes(chart, mesh, e, &rule)? {
            node.frame.conormal(mesh.boundary_edges()[e].normal)?;
            let phi = [1.0 - node.s, node.s];
            let ids = [a, b];
            for p in 0..2 {
                for q in 0..2 {
                    m.add(ids[p], ids[q], node.weight * phi[p] * phi[q]);
                }
            }
        }
    }
    Ok(m)
}

impl SurfaceField {
    /// `∫_{Γ₀} v dH²` via the mass matrix row sums.
    pub fn integral(&self, mass: &CsrMatrix) -> f64 {
        let ones = vec![1.0; self.values.len()];
        mass.bilinear_form(&ones, &self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ChartKind, DomainSpec, MongeTerm};
    use crate::mesh::{generate_mesh, quadrature, refine};
    use std::f64::consts::PI;

    fn disk_mesh(h: f64) -> ParamMesh {
        generate_mesh(&DomainSpec::unit_disk(), h).unwrap()
    }

    fn charts() -> Vec<Chart> {
        let d = DomainSpec::unit_disk();
        vec![
            Chart::flat(d.clone()),
            Chart::new(ChartKind::Hemisphere { radius: 2.0 }, d.clone()).unwrap(),
            Chart::new(ChartKind::Cylinder { radius: 1.0 }, d.clone()).unwrap(),
            Chart::new(
                ChartKind::Monge {
                    terms: vec![
                        MongeTerm { i: 2, j: 0, c: 0.4 },
                        MongeTerm { i: 1, j: 2, c: -0.3 },
                    ],
                },
                d,
            )
            .unwrap(),
        ]
    }

    /// Classical cotangent-formula P1 stiffness of the planar triangle.
    fn planar_stiffness(mesh: &ParamMesh) -> CsrMatrix {
        let mut trip = Vec::new();
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let p = mesh.triangle_points(t);
            for k in 0..3 {
                let (i, j, o) = ((k + 1) % 3, (k + 2) % 3, k);
                let u = [p[i][0] - p[o][0], p[i][1] - p[o][1]];
                let v = [p[j][0] - p[o][0], p[j][1] - p[o][1]];
                let cot = (u[0] * v[0] + u[1] * v[1]) / (u[0] * v[1] - u[1] * v[0]);
                let w = 0.5 * cot;
                trip.push((tri[i], tri[j], -w));
                trip.push((tri[j], tri[i], -w));
                trip.push((tri[i], tri[i], w));
                trip.push((tri[j], tri[j], w));
            }
        }
        CsrMatrix::from_triplets(mesh.num_vertices(), &trip).unwrap()
    }

    #[test]
    fn flat_stiffness_is_cotangent_laplacian() {
        let mesh = disk_mesh(0.3);
        let a = stiffness(&Chart::flat(DomainSpec::unit_disk()), &mesh, &quadrature(4).unwrap())
            .unwrap();
        assert!(a.max_abs_diff(&planar_stiffness(&mesh)) < 1e-12);
    }

    #[test]
    fn constants_in_kernel_and_symmetric() {
        let mesh = disk_mesh(0.3);
        let q = quadrature(4).unwrap();
        for chart in charts() {
            let a = stiffness(&chart, &mesh, &q).unwrap();
            let r = a.mul_vec(&vec![1.0; mesh.num_vertices()]);
            assert!(r.iter().all(|v| v.abs() < 1e-12), "{:?}", chart.kind());
            assert!(a.is_symmetric(1e-12));
            let m = mass(&chart, &mesh, &q).unwrap();
            assert!(m.is_symmetric(1e-12));
        }
    }

    #[test]
    fn cylinder_matches_flat() {
        let mesh = disk_mesh(0.2);
        let q = quadrature(4).unwrap();
        let flat = Chart::flat(DomainSpec::unit_disk());
        let cyl = Chart::new(ChartKind::Cylinder { radius: 1.0 }, DomainSpec::unit_disk()).unwrap();
        let af = stiffness(&flat, &mesh, &q).unwrap();
        let ac = stiffness(&cyl, &mesh, &q).unwrap();
        assert!(af.max_abs_diff(&ac) < 1e-12);
        let mf = mass(&flat, &mesh, &q).unwrap();
        let mc = mass(&cyl, &mesh, &q).unwrap();
        assert!(mf.max_abs_diff(&mc) < 1e-12);
    }

    #[test]
    fn monge_with_zero_coefficients_is_flat() {
        let mesh = disk_mesh(0.3);
        let q = quadrature(4).unwrap();
        let d = DomainSpec::unit_disk();
        let zero = Chart::new(
            ChartKind::Monge {
                terms: vec![MongeTerm { i: 2, j: 0, c: 0.0 }],
            },
            d.clone(),
        )
        .unwrap();
        let m0 = mass(&zero, &mesh, &q).unwrap();
        let mf = mass(&Chart::flat(d), &mesh, &q).unwrap();
        assert_eq!(m0.max_abs_diff(&mf), 0.0);
    }

    fn total_mass(chart: &Chart, mesh: &ParamMesh) -> f64 {
        let m = mass(chart, mesh, &quadrature(4).unwrap()).unwrap();
        let ones = vec![1.0; mesh.num_vertices()];
        m.bilinear_form(&ones, &ones)
    }

    #[test]
    fn mass_totals_converge_to_areas() {
        let d = DomainSpec::unit_disk();
        let flat = Chart::flat(d.clone());
        let cap = Chart::new(ChartKind::Hemisphere { radius: 2.0 }, d.clone()).unwrap();
        // Spherical cap of height R − √(R² − 1) on a sphere of radius R = 2.
        let cap_area = 4.0 * PI * (2.0 - 3.0_f64.sqrt());
        let mut mesh = disk_mesh(0.4);
        let mut prev: Option<(f64, f64)> = None;
        for _ in 0..4 {
            let ef = (total_mass(&flat, &mesh) - PI).abs();
            let ec = (total_mass(&cap, &mesh) - cap_area).abs();
            if let Some((pf, pc)) = prev {
                assert!((pf / ef).log2() > 1.8, "flat {pf} -> {ef}");
                assert!((pc / ec).log2() > 1.8, "cap {pc} -> {ec}");
            }
            prev = Some((ef, ec));
            mesh = refine(&mesh, &d).unwrap();
        }
        assert!(prev.unwrap().0 < 2e-3 && prev.unwrap().1 < 2e-3);
    }

    #[test]
    fn load_examples() {
        let d = DomainSpec::unit_disk();
        let flat = Chart::flat(d.clone());
        let q = quadrature(4).unwrap();
        let mesh = disk_mesh(0.2);
        let b = load(&flat, &mesh, &q, |_| 0.0).unwrap();
        assert!(b.iter().all(|&v| v == 0.0));
        let b = load(&flat, &mesh, &q, |_| 1.0).unwrap();
        assert!((b.iter().sum::<f64>() - mesh.total_area()).abs() < 1e-13);

        // ∫_{U} −Δcos(πr²) = ∮ ∂_r cos(πr²) = 0 on the exact disk; on U_h
        // the defect vanishes with the geometric error.
        let mut mesh = disk_mesh(0.4);
        let f = |x: Vec2| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            4.0 * PI * (PI * r2).sin() + 4.0 * PI * PI * r2 * (PI * r2).cos()
        };
        let mut prev = f64::INFINITY;
        for _ in 0..4 {
            let s: f64 = load(&flat, &mesh, &q, f).unwrap().iter().sum();
            assert!((prev / s.abs()).log2() > 1.8 || prev.is_infinite());
            prev = s.abs();
            mesh = refine(&mesh, &d).unwrap();
        }
        assert!(prev < 5e-2);
    }

    fn boundary_total(chart: &Chart, mesh: &ParamMesh) -> f64 {
        let b = boundary_mass(chart, mesh).unwrap();
        let ones = vec![1.0; mesh.num_vertices()];
        b.bilinear_form(&ones, &ones)
    }

    /// Length of `x̂(∂U)` by a fine trapezoid rule on the exact boundary.
    fn boundary_length_oracle(chart: &Chart) -> f64 {
        let d = chart.domain();
        let n = 20000;
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                let x = d.boundary_point(t);
                let [g1, g2] = chart.jacobian(x);
                let dx = [-t.sin(), t.cos()];
                let v: [f64; 3] = std::array::from_fn(|j| dx[0] * g1[j] + dx[1] * g2[j]);
                (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() * 2.0 * PI / n as f64
            })
            .sum()
    }

    #[test]
    fn boundary_mass_totals() {
        let d = DomainSpec::unit_disk();
        let mut mesh = disk_mesh(0.2);
        mesh = refine(&mesh, &d).unwrap();
        for chart in charts() {
            let exact = boundary_length_oracle(&chart);
            let got = boundary_total(&chart, &mesh);
            assert!((got - exact).abs() < 2e-3 * exact, "{:?}: {got} vs {exact}", chart.kind());
            let b = boundary_mass(&chart, &mesh).unwrap();
            assert!(b.is_symmetric(1e-14));
            for v in 0..mesh.num_vertices() {
                if mesh.is_boundary_vertex(v) {
                    assert!(b.get(v, v) > 0.0);
                } else {
                    assert_eq!(b.row(v).count(), 0);
                }
            }
        }
        let flat = boundary_length_oracle(&Chart::flat(d));
        assert!((flat - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn assembly_is_independent_of_triangle_order() {
        let mesh = disk_mesh(0.2);
        let n = mesh.num_triangles();
        let order: Vec<usize> = (0..n).map(|k| (k * 7919) % n).collect();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), n);
        let shuffled = mesh.with_triangle_order(&order).unwrap();
        let q = quadrature(4).unwrap();
        for chart in charts() {
            let a1 = stiffness(&chart, &mesh, &q).unwrap();
            let a2 = stiffness(&chart, &shuffled, &q).unwrap();
            assert!(a1.max_abs_diff(&a2) < 1e-12);
            let m1 = mass(&chart, &mesh, &q).unwrap();
            let m2 = mass(&chart, &shuffled, &q).unwrap();
            assert!(m1.max_abs_diff(&m2) < 1e-12);
        }
    }

    #[test]
    fn rejects_low_order_stiffness() {
        let mesh = disk_mesh(0.5);
        let r = stiffness(&Chart::flat(DomainSpec::unit_disk()), &mesh, &quadrature(1).unwrap());
        assert!(r.is_err());
    }

    #[test]
    fn degenerate_chart_is_reported() {
        let d = DomainSpec::unit_disk();
        let chart = Chart::new(ChartKind::Pinched { offset: 0.0 }, d).unwrap();
        // Single triangle whose centroid lies on the degenerate line X₁ = 0.
        let mesh = ParamMesh::new(
            vec![[-0.3, -0.3], [0.3, -0.3], [0.0, 0.6]],
            vec![[0, 1, 2]],
            vec![([0, 1], [0.0, 1.0]), ([1, 2], [1.0, 2.0]), ([2, 0], [2.0, 3.0])],
        )
        .unwrap();
        let r = mass(&chart, &mesh, &quadrature(1).unwrap());
        assert!(matches!(r, Err(Error::DegenerateMetric { .. })));
    }
}
