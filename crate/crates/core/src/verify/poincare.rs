use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::dot;
use crate::solver::{solve_neumann, NeumannOptions};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Smallest positive eigenvalue of `A u = λ M u` and the Poincaré constant
/// `C⋆ = 1/√λ₁`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareEstimate {
    pub lambda1: f64,
    pub c_star: f64,
    pub iterations: usize,
    /// M-normalized, M-mean-zero eigenvector.
    #[serde(skip)]
    pub eigenvector: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenOptions {
    /// Stop when `|λ_k − λ_{k−1}| / λ_k` drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Tolerance of each inner Neumann solve.
    pub inner_tol: f64,
    /// Number of vectors iterated together. More than one vector keeps the
    /// iteration fast when the lowest eigenvalue is (nearly) multiple, as on
    /// symmetric domains.
    pub block: usize,
    /// Seed of the random start vectors.
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-8,
            max_iter: 500,
            inner_tol: 1e-12,
            block: 4,
            seed: 0,
        }
    }
}

fn remove_mean(m1: &[f64], area: f64, v: &mut [f64]) {
    let c = dot(m1, v) / area;
    v.iter_mut().for_each(|x| *x -= c);
}

/// Ritz pairs of the pencil `(WᵀAW, WᵀMW)`, ascending, with coefficient
/// vectors normalized so that `W y` is M-orthonormal.
fn rayleigh_ritz(a: &CsrMatrix, m: &CsrMatrix, w: &[Vec<f64>]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let p = w.len();
    let aw: Vec<Vec<f64>> = w.iter().map(|v| a.mul_vec(v)).collect();
    let mw: Vec<Vec<f64>> = w.iter().map(|v| m.mul_vec(v)).collect();
    let ap = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&w[i], &aw[j]) + dot(&w[j], &aw[i])));
    let mp = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&w[i], &mw[j]) + dot(&w[j], &mw[i])));
    let chol = mp
        .cholesky()
        .ok_or_else(|| Error::InvalidInput("iteration vectors became linearly dependent".into()))?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("iteration vectors became linearly dependent".into()))?;
    let c = &l_inv * ap * l_inv.transpose();
    let eig = SymmetricEigen::new(0.5 * (&c + c.transpose()));
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let z = DMatrix::from_fn(p, p, |r, k| eig.eigenvectors[(r, order[k])]);
    Ok((values, l_inv.transpose() * z))
}

fn combine(w: &[Vec<f64>], y: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let n = w[0].len();
    (0..y.ncols())
        .map(|k| {
            let mut u = vec![0.0; n];
            for (r, wr) in w.iter().enumerate() {
                let c = y[(r, k)];
                u.iter_mut().zip(wr).for_each(|(u, w)| *u += c * w);
            }
            u
        })
        .collect()
}

/// Block inverse iteration with Rayleigh–Ritz on the M-mean-zero space,
/// using the projected Neumann solver as the inverse action.
pub fn estimate_poincare_constant(a: &CsrMatrix, m: &CsrMatrix, opts: &EigenOptions) -> Result<PoincareEstimate> {
    let n = a.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
    }
    let p = opts.block.max(1);
    if n < p + 1 {
        return Err(Error::InvalidInput(format!("eigenproblem needs more than {p} unknowns")));
    }
    let m1 = m.mul_vec(&vec![1.0; n]);
    let area: f64 = m1.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut u: Vec<Vec<f64>> = (0..p)
        .map(|_| {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            remove_mean(&m1, area, &mut v);
            v
        })
        .collect();

    let solve_opts = NeumannOptions {
        tol: opts.inner_tol,
        ..NeumannOptions::default()
    };
    let mut lambda = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let w = u
            .par_iter()
            .map(|v| {
                let report = solve_neumann(a, m, &m.mul_vec(v), &solve_opts)?.into_result()?;
                let mut x = report.solution.values;
                remove_mean(&m1, area, &mut x);
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        let (values, y) = rayleigh_ritz(a, m, &w)?;
        u = combine(&w, &y);
        let next = values[0];
        let change = (next - lambda).abs() / next.abs();
        lambda = next;
        if change < opts.tol {
            let eigenvector = u.swap_remove(0);
            return Ok(PoincareEstimate {
                lambda1: lambda,
                c_star: 1.0 / lambda.sqrt(),
                iterations: it,
                eigenvector,
            });
        }
    }
    Err(Error::EigenNoConvergence { iterations: opts.max_iter })
}

/// `vᵀAv (C⋆² + 1) / (vᵀMv + vᵀAv)` for a mean-zero `v`: the Dirichlet form
/// relative to the coercivity lower bound `‖v‖²_{W^{1,2}} / (C⋆² + 1)`.
pub fn coercivity_ratio(a: &CsrMatrix, m: &CsrMatrix, c_star: f64, v: &[f64]) -> f64 {
    let e = a.quadratic_form(v);
    let l2 = m.quadratic_form(v);
    e * (c_star * c_star + 1.0) / (l2 + e)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoercivityReport {
    pub samples: usize,
    pub min_ratio: f64,
}

/// Smallest [`coercivity_ratio`] over `samples` random fields with entries
/// uniform in `[−1, 1]`, each projected to M-mean zero.
pub fn check_coercivity(a: &CsrMatrix, m: &CsrMatrix, c_star: f64, samples: usize, seed: u64) -> CoercivityReport {
    let n = a.dim();
    let m1 = m.mul_vec(&vec![1.0; n]);
    let area: f64 = m1.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = f64::INFINITY;
    for _ in 0..samples {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        remove_mean(&m1, area, &mut v);
        min_ratio = min_ratio.min(coercivity_ratio(a, m, c_star, &v));
    }
    CoercivityReport { samples, min_ratio }
}
