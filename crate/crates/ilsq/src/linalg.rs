//! Small dense real linear algebra: LU solves, inverses, extreme singular
//! values via cyclic Jacobi on the Gram matrix, spectral radius of
//! nonnegative matrices, and the Moore-Penrose pseudoinverse.
//!
//! The matrices here are tiny (the largest extended system in the test suite
//! is 27x27), so everything favors robustness over speed.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::Error;

/// Pivot is declared singular when its magnitude drops below this times the
/// largest magnitude in the matrix.
const PIVOT_TOL: f64 = 1e-12;

/// Dense row-major real matrix.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> RealMatrix {
        RealMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> RealMatrix {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> RealMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RealMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> RealMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RealMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn abs(&self) -> RealMatrix {
        RealMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.abs()).collect() }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Gram matrix `A^T A`.
    pub fn gram(&self) -> RealMatrix {
        let mut g = RealMatrix::zeros(self.cols, self.cols);
        for i in 0..self.cols {
            for j in i..self.cols {
                let mut acc = 0.0;
                for k in 0..self.rows {
                    acc += self[(k, i)] * self[(k, j)];
                }
                g[(i, j)] = acc;
                g[(j, i)] = acc;
            }
        }
        g
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} {{", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "}}")
    }
}

/// LU factorization with partial pivoting, reused for solves and inverses.
pub struct LuFactor {
    lu: RealMatrix,
    perm: Vec<usize>,
}

impl LuFactor {
    pub fn new(a: &RealMatrix) -> Result<LuFactor, Error> {
        assert_eq!(a.rows, a.cols, "LU of a non-square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for col in 0..n {
            let (mut best, mut best_abs) = (col, lu[(col, col)].abs());
            for row in (col + 1)..n {
                let v = lu[(row, col)].abs();
                if v > best_abs {
                    best = row;
                    best_abs = v;
                }
            }
            if best_abs <= PIVOT_TOL * scale {
                return Err(Error::SingularPoint);
            }
            if best != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(best, j)];
                    lu[(best, j)] = tmp;
                }
                perm.swap(col, best);
            }
            let piv = lu[(col, col)];
            for row in (col + 1)..n {
                let f = lu[(row, col)] / piv;
                lu[(row, col)] = f;
                for j in (col + 1)..n {
                    let s = lu[(col, j)];
                    lu[(row, j)] -= f * s;
                }
            }
        }
        Ok(LuFactor { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Solves the square system `Qx = r` by LU with partial pivoting.
pub fn solve(q: &RealMatrix, r: &[f64]) -> Result<Vec<f64>, Error> {
    Ok(LuFactor::new(q)?.solve(r))
}

/// Inverse of a square matrix, column by column.
pub fn inverse(q: &RealMatrix) -> Result<RealMatrix, Error> {
    let n = q.rows;
    let lu = LuFactor::new(q)?;
    let mut inv = RealMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = lu.solve(&e);
        e[j] = 0.0;
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(sym: &RealMatrix) -> Vec<f64> {
    let n = sym.rows;
    let mut a = sym.clone();
    let scale = a.max_abs();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// Smallest and greatest singular values, via the eigenvalues of the Gram
/// matrix of the thinner side.
pub fn sigma_extremes(a: &RealMatrix) -> (f64, f64) {
    let gram = if a.rows >= a.cols { a.gram() } else { a.transpose().gram() };
    let eigs = jacobi_eigenvalues(&gram);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for e in eigs {
        let s = e.max(0.0).sqrt();
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

/// Spectral radius of an elementwise nonnegative matrix by power iteration.
pub fn spectral_radius_nonneg(m: &RealMatrix) -> Result<f64, Error> {
    assert_eq!(m.rows, m.cols, "spectral radius of a non-square matrix");
    if m.iter().any(|&v| v < 0.0) {
        return Err(Error::NegativeEntry);
    }
    let n = m.rows;
    if n == 0 || m.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let mut x = vec![1.0; n];
    let mut rho = 0.0;
    for _ in 0..100_000 {
        let y = m.matvec(&x);
        let norm = y.iter().fold(0.0f64, |acc, v| acc.max(*v));
        if norm == 0.0 {
            return Ok(0.0);
        }
        let next = norm;
        let done = (next - rho).abs() <= 1e-10 * next.max(1.0);
        rho = next;
        x = y.iter().map(|v| v / norm).collect();
        if done {
            break;
        }
    }
    Ok(rho)
}

/// Moore-Penrose pseudoinverse of a full-column-rank matrix with `m >= n`,
/// computed as `(A^T A)^-1 A^T`.
pub fn pseudoinverse(a: &RealMatrix) -> Result<RealMatrix, Error> {
    assert!(a.rows >= a.cols, "pseudoinverse expects m >= n");
    let gram_inv = inverse(&a.gram()).map_err(|_| Error::MidpointRankDeficient)?;
    Ok(gram_inv.matmul(&a.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn solve_identity() {
        let id = RealMatrix::identity(3);
        let x = solve(&id, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(x, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn solve_known_2x2() {
        // normal system at t = 0 for the one-parameter 3x2 test problem
        let q = RealMatrix::from_rows(vec![vec![10.0, -9.0], vec![-9.0, 17.0]]);
        let x = solve(&q, &[20.0, -40.0]).unwrap();
        assert!((x[0] - (-20.0 / 89.0)).abs() < 1e-14);
        assert!((x[1] - (-220.0 / 89.0)).abs() < 1e-14);
    }

    #[test]
    fn solve_random_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 8;
            let q = RealMatrix::from_fn(n, n, |i, j| {
                let base: f64 = rng.random_range(-1.0..1.0);
                if i == j {
                    base + 10.0
                } else {
                    base
                }
            });
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let x = solve(&q, &b).unwrap();
            let back = q.matvec(&x);
            assert!(max_abs_diff(&back, &b) < 1e-10);
        }
    }

    #[test]
    fn singular_detected() {
        let q = RealMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(solve(&q, &[1.0, 1.0]), Err(Error::SingularPoint));
    }

    #[test]
    fn inverse_basics() {
        let id = RealMatrix::identity(4);
        assert_eq!(inverse(&id).unwrap(), id);

        let d = RealMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 4.0]]);
        let di = inverse(&d).unwrap();
        assert_eq!(di[(0, 0)], 0.5);
        assert_eq!(di[(1, 1)], 0.25);
    }

    #[test]
    fn inverse_random_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 6;
            let q = RealMatrix::from_fn(n, n, |i, j| {
                let base: f64 = rng.random_range(-1.0..1.0);
                if i == j {
                    base + 8.0
                } else {
                    base
                }
            });
            let qi = inverse(&q).unwrap();
            let prod = qi.matmul(&q);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((prod[(i, j)] - expect).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn sigma_of_identity() {
        let (lo, hi) = sigma_extremes(&RealMatrix::identity(3));
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_transpose_invariant() {
        let a = RealMatrix::from_rows(vec![
            vec![-12.0, -6.0],
            vec![-2.0, 2.0],
            vec![6.0, 12.0],
        ]);
        let (lo, hi) = sigma_extremes(&a);
        let (lo_t, hi_t) = sigma_extremes(&a.transpose());
        assert!((lo - lo_t).abs() < 1e-9 && (hi - hi_t).abs() < 1e-9);
        assert!(lo <= hi);
        // known spectrum: gram eigenvalues 44 and 324
        assert!((lo - 44.0f64.sqrt()).abs() < 1e-9);
        assert!((hi - 18.0).abs() < 1e-9);
    }

    #[test]
    fn sigma_of_all_ones() {
        let ones = RealMatrix::from_fn(3, 2, |_, _| 1.0);
        let (_, hi) = sigma_extremes(&ones);
        assert!((hi - 6.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn spectral_radius_zero_and_known() {
        assert_eq!(spectral_radius_nonneg(&RealMatrix::zeros(3, 3)).unwrap(), 0.0);
        // 2x2 stochastic-like matrix, rho = 1
        let m = RealMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.25, 0.75]]);
        assert!((spectral_radius_nonneg(&m).unwrap() - 1.0).abs() < 1e-9);
        let neg = RealMatrix::from_rows(vec![vec![-1.0]]);
        assert_eq!(spectral_radius_nonneg(&neg), Err(Error::NegativeEntry));
    }

    #[test]
    fn pseudoinverse_square_is_inverse() {
        let q = RealMatrix::from_rows(vec![vec![3.0, 1.0], vec![1.0, 2.0]]);
        let pinv = pseudoinverse(&q).unwrap();
        let inv = inverse(&q).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((pinv[(i, j)] - inv[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pseudoinverse_of_column_pair_averages() {
        let a = RealMatrix::from_rows(vec![vec![1.0], vec![1.0]]);
        let pinv = pseudoinverse(&a).unwrap();
        assert_eq!(pinv.rows(), 1);
        assert_eq!(pinv.cols(), 2);
        assert!((pinv[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((pinv[(0, 1)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn moore_penrose_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = RealMatrix::from_fn(6, 3, |_, _| rng.random_range(-2.0..2.0));
            let p = pseudoinverse(&a).unwrap();
            let apa = a.matmul(&p).matmul(&a);
            let pap = p.matmul(&a).matmul(&p);
            for i in 0..6 {
                for j in 0..3 {
                    assert!((apa[(i, j)] - a[(i, j)]).abs() < 1e-8);
                }
            }
            for i in 0..3 {
                for j in 0..6 {
                    assert!((pap[(i, j)] - p[(i, j)]).abs() < 1e-8);
                }
            }
            // A P and P A symmetric
            let ap = a.matmul(&p);
            let pa = p.matmul(&a);
            for i in 0..6 {
                for j in 0..6 {
                    assert!((ap[(i, j)] - ap[(j, i)]).abs() < 1e-8);
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    assert!((pa[(i, j)] - pa[(j, i)]).abs() < 1e-8);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((pa[(i, j)] - expect).abs() < 1e-10);
                }
            }
        }
    }
}
