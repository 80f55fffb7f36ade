//! Compressed sparse row matrices with a fixed sparsity pattern.

use std::io::Write;

use rayon::prelude::*;

use crate::{Error, Result};

const PARALLEL_ROWS: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    symmetric: bool,
}

impl CsrMatrix {
    /// Zero matrix with the vertex-adjacency pattern of a triangle list
    /// (each vertex couples with itself and every vertex sharing a triangle).
    pub fn with_triangle_pattern(n: usize, triangles: &[[usize; 3]]) -> Self {
        let mut rows: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for t in triangles {
            for &a in t {
                rows[a].extend_from_slice(t);
            }
        }
        Self::from_rows(n, rows)
    }

    /// Zero matrix whose only nonzeros couple the endpoints of each edge.
    pub fn with_edge_pattern(n: usize, edges: &[[usize; 2]]) -> Self {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &[a, b] in edges {
            rows[a].extend_from_slice(&[a, b]);
            rows[b].extend_from_slice(&[a, b]);
        }
        Self::from_rows(n, rows)
    }

    fn from_rows(n: usize, mut rows: Vec<Vec<usize>>) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        CsrMatrix {
            n,
            row_ptr,
            col_idx,
            values: vec![0.0; nnz],
            symmetric: true,
        }
    }

    /// Build from coordinate triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j, _) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("entry ({i}, {j}) outside {n}x{n}")));
            }
            rows[i].push(j);
        }
        let mut m = Self::from_rows(n, rows);
        for &(i, j, v) in triplets {
            m.add(i, j, v);
        }
        m.symmetric = m.is_symmetric(0.0);
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_symmetric_flag(&self) -> bool {
        self.symmetric
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[lo..hi].binary_search(&j).ok().map(|k| lo + k)
    }

    /// Add `v` at `(i, j)`, which must be inside the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside sparsity pattern"));
        self.values[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`. Rows are computed in parallel for large matrices; each
    /// row sum is formed in a fixed order, so the result is deterministic.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        let row = |(i, yi): (usize, &mut f64)| {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        };
        if self.n >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().with_min_len(1024).for_each(row);
        } else {
            y.iter_mut().enumerate().for_each(row);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * x[j]).sum::<f64>())
            .sum()
    }

    /// `xᵀ A y`.
    pub fn bilinear_form(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>())
            .sum()
    }

    /// Largest `|Aᵢⱼ − Aⱼᵢ|` relative check against `tol · max|A|`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        self.triplets()
            .all(|(i, j, v)| (v - self.get(j, i)).abs() <= tol * scale)
    }

    /// Max entrywise difference over the union of both patterns.
    pub fn max_abs_diff(&self, other: &CsrMatrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let a = self.triplets().map(|(i, j, v)| (v - other.get(i, j)).abs());
        let b = other.triplets().map(|(i, j, v)| (v - self.get(i, j)).abs());
        a.chain(b).fold(0.0, f64::max)
    }

    /// Principal submatrix on `keep` (indices in the new numbering follow
    /// the order of `keep`).
    pub fn submatrix(&self, keep: &[usize]) -> CsrMatrix {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for &old in keep {
            let mut row: Vec<(usize, f64)> = self
                .row(old)
                .filter(|&(j, _)| map[j] != usize::MAX)
                .map(|(j, v)| (map[j], v))
                .collect();
            row.sort_unstable_by_key(|&(j, _)| j);
            for (j, v) in row {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n: keep.len(),
            row_ptr,
            col_idx,
            values,
            symmetric: self.symmetric,
        }
    }

    /// Coordinate-list CSV `row,col,value`, preceded by an optional
    /// `# comment` line.
    pub fn write_coo_csv<W: Write>(&self, mut w: W, comment: Option<&str>) -> Result<()> {
        if let Some(c) = comment {
            writeln!(w, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["row", "col", "value"])?;
        for (i, j, v) in self.triplets() {
            w.write_record([i.to_string(), j.to_string(), format!("{v:e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_pattern_and_products() {
        let mut m = CsrMatrix::with_triangle_pattern(4, &[[0, 1, 2], [0, 2, 3]]);
        assert_eq!(m.nnz(), 4 + 2 * 5);
        m.add(0, 0, 2.0);
        m.add(0, 1, -1.0);
        m.add(1, 0, -1.0);
        m.add(1, 1, 2.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0, 0.0, 0.0]), vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.quadratic_form(&[1.0, 1.0, 0.0, 0.0]), 2.0);
        assert_eq!(m.get(1, 3), 0.0);
        assert!(m.is_symmetric(0.0));
    }

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(m.get(0, 0), 3.0);
        assert!(!m.is_symmetric_flag());
        assert!(CsrMatrix::from_triplets(2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn submatrix_keeps_order() {
        let m = CsrMatrix::from_triplets(3, &[(0, 0, 1.0), (1, 1, 2.0), (2, 2, 3.0), (0, 2, 4.0)])
            .unwrap();
        let s = m.submatrix(&[2, 0]);
        assert_eq!(s.get(0, 0), 3.0);
        assert_eq!(s.get(1, 1), 1.0);
        assert_eq!(s.get(1, 0), 4.0);
    }

    #[test]
    fn coo_csv_has_header() {
        let m = CsrMatrix::from_triplets(1, &[(0, 0, 1.5)]).unwrap();
        let mut out = Vec::new();
        m.write_coo_csv(&mut out, Some("hash")).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s, "# hash\nrow,col,value\n0,0,1.5e0\n");
    }
}
