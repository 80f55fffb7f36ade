use crate::linalg::{dot, norm};
use crate::sparse::CsrMatrix;

pub(crate) struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `‖b − Ax‖ / ‖b‖` from the final true residual.
    pub relative_residual: f64,
    /// Set when `pᵀAp ≤ 0` stopped the iteration.
    pub breakdown: bool,
    pub energy_history: Option<Vec<f64>>,
}

pub(crate) type Projection<'a> = &'a dyn Fn(&mut [f64]);

/// Jacobi-preconditioned conjugate gradients for `A x = b`.
///
/// `project`, when given, maps a vector onto the subspace the iterates must
/// stay in; it is applied to the start vector and to every preconditioned
/// residual. With `record` set the energy `½xᵀAx − bᵀx` of every iterate is
/// kept, starting with `x0`.
pub(crate) fn pcg(
    a: &CsrMatrix,
    b: &[f64],
    x0: Vec<f64>,
    project: Option<Projection>,
    tol: f64,
    max_iter: usize,
    record: bool,
) -> CgOutcome {
    let n = b.len();
    let mut x = x0;
    let apply_projection = |v: &mut [f64]| {
        if let Some(p) = project {
            p(v)
        }
    };
    apply_projection(&mut x);

    let bnorm = norm(b);
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();

    let mut ax = a.mul_vec(&x);
    let mut r: Vec<f64> = (0..n).map(|i| b[i] - ax[i]).collect();
    let energy = |x: &[f64], ax: &[f64]| 0.5 * dot(x, ax) - dot(b, x);
    let mut history = record.then(|| vec![energy(&x, &ax)]);

    let finish = |x: Vec<f64>, iterations, converged, breakdown, history| {
        let ax = a.mul_vec(&x);
        let res: Vec<f64> = (0..n).map(|i| b[i] - ax[i]).collect();
        let relative_residual = if bnorm > 0.0 { norm(&res) / bnorm } else { norm(&res) };
        CgOutcome {
            x,
            iterations,
            converged,
            relative_residual,
            breakdown,
            energy_history: history,
        }
    };

    if bnorm == 0.0 {
        let x = vec![0.0; n];
        if let Some(h) = history.as_mut() {
            h.push(0.0);
        }
        return finish(x, 0, true, false, history);
    }
    let target = tol * bnorm;
    if norm(&r) <= target {
        return finish(x, 0, true, false, history);
    }

    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    apply_projection(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 1..=max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return finish(x, it - 1, false, true, history);
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            ax[i] += alpha * ap[i];
        }
        if let Some(h) = history.as_mut() {
            h.push(energy(&x, &ax));
        }
        if norm(&r) <= target {
            // Confirm against the true residual to rule out drift.
            a.mul_vec_into(&x, &mut ax);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
            if norm(&r) <= target {
                return finish(x, it, true, false, history);
            }
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        apply_projection(&mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let out = finish(x, max_iter, false, false, history);
    let converged = out.relative_residual <= tol;
    CgOutcome { converged, ..out }
}
