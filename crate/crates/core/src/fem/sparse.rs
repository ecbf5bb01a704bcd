//! Compressed sparse row storage and the direct solve.

use faer::sparse::{SparseColMat, Triplet};

use crate::error::{Error, Result};

/// Square CSR matrix with sorted, duplicate-free column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` entries, summing duplicates in a
    /// fixed order so the result does not depend on insertion interleaving
    /// beyond the order of the input list.
    pub fn from_triplets(n: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0; n + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, col_idx, values }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|i| (i, i, 1.0)).collect())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let row = &self.col_idx[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.values[self.row_ptr[r] + k],
            Err(_) => 0.0,
        }
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }
}

/// Linear system `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Direct sparse LU with partial pivoting.
pub fn solve_linear(system: &SparseSystem) -> Result<Vec<f64>> {
    let a = &system.matrix;
    let n = a.n;
    if system.rhs.len() != n {
        return Err(Error::validation("rhs", "length does not match the matrix"));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let mut trip = Vec::with_capacity(a.values.len());
    for r in 0..n {
        for (c, v) in a.row(r) {
            if !v.is_finite() {
                return Err(Error::SingularMatrix(format!("non-finite entry at ({r}, {c})")));
            }
            trip.push(Triplet::new(r, c, v));
        }
    }
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
        .map_err(|e| Error::SingularMatrix(format!("{e:?}")))?;
    let lu = mat.sp_lu().map_err(|e| Error::SingularMatrix(format!("{e:?}")))?;
    let b = faer::col::Col::<f64>::from_fn(n, |i| system.rhs[i]);
    let x = faer::linalg::solvers::Solve::solve(&lu, &b);
    let x: Vec<f64> = (0..n).map(|i| x[i]).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix("factorization produced non-finite values".into()));
    }
    let ax = a.mul_vec(&x);
    let res: Vec<f64> = ax.iter().zip(&system.rhs).map(|(p, q)| p - q).collect();
    let bn = norm(&system.rhs);
    let rn = norm(&res);
    let an = (0..n).map(|r| a.row(r).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let scale = an * norm(&x) + bn;
    if rn > 1e-10 * scale.max(f64::MIN_POSITIVE) && rn > 1e-300 {
        return Err(Error::SingularMatrix(format!("residual {:e} relative to rhs {:e}", rn, bn)));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let s = SparseSystem { matrix: CsrMatrix::identity(3), rhs: vec![1.0, -2.0, 3.5] };
        assert_eq!(solve_linear(&s).unwrap(), vec![1.0, -2.0, 3.5]);
    }

    #[test]
    fn diagonal_system() {
        let m = CsrMatrix::from_triplets(2, vec![(0, 0, 2.0), (1, 1, 4.0)]);
        let x = solve_linear(&SparseSystem { matrix: m, rhs: vec![2.0, 8.0] }).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_pivot_row_is_singular() {
        let m = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0)]);
        let r = solve_linear(&SparseSystem { matrix: m, rhs: vec![1.0, 1.0] });
        assert!(matches!(r, Err(Error::SingularMatrix(_))), "{r:?}");
    }

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, vec![(1, 0, 1.0), (0, 0, 1.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.row_ptr, vec![0, 1, 3]);
    }

    #[test]
    fn general_system() {
        let m = CsrMatrix::from_triplets(3, vec![(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0), (1, 2, -1.0), (2, 1, -1.0), (2, 2, 2.0), (2, 0, 0.5)]);
        let x0 = [1.0, -2.0, 0.25];
        let b = m.mul_vec(&x0);
        let x = solve_linear(&SparseSystem { matrix: m, rhs: b }).unwrap();
        for (a, b) in x.iter().zip(x0) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
