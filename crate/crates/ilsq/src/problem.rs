//! Problem construction: the interval least squares problem itself, its
//! reduction to a bordered symmetric interval system, test-system
//! generators, and the Monte-Carlo / grid oracles used to validate solver
//! output from below.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, LuFactor, RealMatrix};
use crate::{Error, Interval, IntervalMatrix, IntervalVector};

/// An interval least squares problem `Ax = b` with `m >= n >= 1`.
#[derive(Clone, Debug)]
pub struct LsqProblem {
    a: IntervalMatrix,
    b: IntervalVector,
}

impl LsqProblem {
    pub fn new(a: IntervalMatrix, b: IntervalVector) -> Result<LsqProblem, Error> {
        let (m, n) = (a.rows(), a.cols());
        if m < n || n == 0 || b.len() != m {
            return Err(Error::BadShape { m, n });
        }
        Ok(LsqProblem { a, b })
    }

    pub fn matrix(&self) -> &IntervalMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &IntervalVector {
        &self.b
    }

    pub fn nrows(&self) -> usize {
        self.a.rows()
    }

    pub fn ncols(&self) -> usize {
        self.a.cols()
    }

    /// Same problem with every radius scaled by `factor >= 0` about the
    /// midpoints. Handy for exploring how the solution set grows with the
    /// uncertainty.
    pub fn scale_radius(&self, factor: f64) -> LsqProblem {
        assert!(factor >= 0.0 && factor.is_finite());
        let scale = |e: Interval| Interval::outward_from(e.mid(), factor * e.rad());
        let mut a = IntervalMatrix::zeros(self.nrows(), self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                a.set(i, j, scale(self.a.get(i, j)));
            }
        }
        let b = self.b.iter().map(|&e| scale(e)).collect();
        LsqProblem { a, b }
    }

    /// Bordered symmetric reformulation of the normal equations.
    ///
    /// The unknown becomes `(y, x)` with `y = b - Ax`; the x-part of any
    /// enclosure of the united solution set of this system encloses the
    /// least squares solution set of the original problem.
    pub fn extended(&self) -> ExtendedSystem {
        let (m, n) = (self.nrows(), self.ncols());
        let dim = m + n;
        let mut s = IntervalMatrix::zeros(dim, dim);
        for i in 0..m {
            s.set(i, i, Interval::ONE);
        }
        for i in 0..m {
            for j in 0..n {
                let e = self.a.get(i, j);
                s.set(i, m + j, e);
                s.set(m + j, i, e);
            }
        }
        let mut rhs = IntervalVector::zeros(dim);
        for i in 0..m {
            rhs[i] = self.b[i];
        }
        ExtendedSystem { matrix: s.into_symmetric(), rhs, m, n }
    }
}

/// The `(m+n) x (m+n)` symmetric interval system equivalent to the normal
/// equations: block layout `(I, A; A^T, 0)`, right-hand side `(b; 0)`.
#[derive(Clone, Debug)]
pub struct ExtendedSystem {
    pub matrix: IntervalMatrix,
    pub rhs: IntervalVector,
    m: usize,
    n: usize,
}

impl ExtendedSystem {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    /// Index of original unknown `j` inside the aggregated `(y, x)` vector.
    pub fn component_of(&self, j: usize) -> usize {
        assert!(j < self.n);
        self.m + j
    }

    /// Projects an enclosure of the aggregated unknown onto the x-part.
    pub fn project(&self, full: &IntervalVector) -> IntervalVector {
        assert_eq!(full.len(), self.dim(), "projection length mismatch");
        (self.m..self.dim()).map(|i| full[i]).collect()
    }
}

/// Least squares solutions of uniformly sampled member problems, via the
/// normal equations. Deterministic for a fixed seed.
pub fn sample_solutions(p: &LsqProblem, count: usize, seed: u64) -> Result<Vec<Vec<f64>>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = (p.nrows(), p.ncols());
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut accepted = None;
        for _attempt in 0..100 {
            let a = RealMatrix::from_fn(m, n, |i, j| {
                let e = p.matrix().get(i, j);
                rng.random_range(e.lo()..=e.hi())
            });
            let b: Vec<f64> = (0..m)
                .map(|i| {
                    let e = p.rhs()[i];
                    rng.random_range(e.lo()..=e.hi())
                })
                .collect();
            let atb = a.transpose().matvec(&b);
            if let Ok(x) = linalg::solve(&a.gram(), &atb) {
                accepted = Some(x);
                break;
            }
        }
        out.push(accepted.ok_or(Error::DegenerateSampling)?);
    }
    Ok(out)
}

/// Writes sampled solutions as CSV with header `x1..xn`.
pub fn write_samples_csv<W: std::io::Write>(
    w: &mut W,
    n: usize,
    samples: &[Vec<f64>],
) -> std::io::Result<()> {
    let header: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for row in samples {
        debug_assert_eq!(row.len(), n);
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Hull of least squares solutions over a dense grid of the interval matrix
/// entries crossed with all corners of the interval right-hand side.
///
/// The solution is affine in `b` for fixed `A`, so right-hand side corners
/// are exact; matrix parameters are swept on a grid because their extrema
/// need not sit at endpoints. The hull refines monotonically with
/// `grid_per_param` and under-approximates the true hull, which makes it a
/// one-sided oracle for the solver.
pub fn grid_inner_hull(p: &LsqProblem, grid_per_param: usize) -> Result<IntervalVector, Error> {
    assert!(grid_per_param >= 2, "need at least the two endpoints per parameter");
    let (m, n) = (p.nrows(), p.ncols());
    let mut mat_params = Vec::new();
    for i in 0..m {
        for j in 0..n {
            if p.matrix().get(i, j).wid() > 0.0 {
                mat_params.push((i, j));
            }
        }
    }
    let rhs_params: Vec<usize> = (0..m).filter(|&i| p.rhs()[i].wid() > 0.0).collect();

    if mat_params.len() + rhs_params.len() > 20 {
        return Err(Error::TooManyParameters(mat_params.len() + rhs_params.len()));
    }
    let combos = (grid_per_param as f64).powi(mat_params.len() as i32)
        * 2f64.powi(rhs_params.len() as i32);
    if combos > 2e7 {
        return Err(Error::TooManyParameters(mat_params.len() + rhs_params.len()));
    }

    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    let mut a = p.matrix().mid();
    let b_mid = p.rhs().mid();

    let mut mat_idx = vec![0usize; mat_params.len()];
    loop {
        for (t, &(i, j)) in mat_params.iter().enumerate() {
            let e = p.matrix().get(i, j);
            a[(i, j)] = e.lo() + e.wid() * mat_idx[t] as f64 / (grid_per_param - 1) as f64;
        }
        if let Ok(lu) = LuFactor::new(&a.gram()) {
            let at = a.transpose();
            let mut b = b_mid.clone();
            for corner in 0..(1usize << rhs_params.len()) {
                for (t, &i) in rhs_params.iter().enumerate() {
                    let e = p.rhs()[i];
                    b[i] = if corner >> t & 1 == 0 { e.lo() } else { e.hi() };
                }
                let x = lu.solve(&at.matvec(&b));
                for k in 0..n {
                    lo[k] = lo[k].min(x[k]);
                    hi[k] = hi[k].max(x[k]);
                }
            }
        }
        // odometer over the matrix grid
        let mut t = 0;
        loop {
            if t == mat_idx.len() {
                let hull = (0..n)
                    .map(|k| Interval::new(lo[k], hi[k]))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(IntervalVector::new(hull));
            }
            mat_idx[t] += 1;
            if mat_idx[t] < grid_per_param {
                break;
            }
            mat_idx[t] = 0;
            t += 1;
        }
    }
}

/// Overdetermined arrow-plus-band test system family.
///
/// The upper `n x n` block has `[1-r, 1+r]` on the diagonal and
/// `[k-r, k+r]` along the last column and last row; `extra_rows` further
/// rows carry `[theta-s, theta+s]` on their diagonal with `[0, s]` strictly
/// below it. Every right-hand side component is `[1-rhs_rad, 1+rhs_rad]`.
pub fn toft(
    n: usize,
    extra_rows: usize,
    r: f64,
    s: f64,
    theta: f64,
    rhs_rad: f64,
) -> LsqProblem {
    assert!(n >= 2 && extra_rows <= n, "need n >= 2 and extra_rows <= n");
    assert!(r >= 0.0 && s >= 0.0 && rhs_rad >= 0.0 && theta > 0.0);
    let m = n + extra_rows;
    let iv = |c: f64, rad: f64| Interval::new(c - rad, c + rad).unwrap();
    let mut a = IntervalMatrix::zeros(m, n);
    for i in 0..n - 1 {
        a.set(i, i, iv(1.0, r));
        a.set(i, n - 1, iv((i + 1) as f64, r));
    }
    for j in 0..n {
        a.set(n - 1, j, iv((j + 1) as f64, r));
    }
    for e in 0..extra_rows {
        let row = n + e;
        a.set(row, e, iv(theta, s));
        for j in 0..e {
            a.set(row, j, Interval::new(0.0, s).unwrap());
        }
    }
    let b = (0..m).map(|_| iv(1.0, rhs_rad)).collect();
    LsqProblem::new(a, b).expect("generator dimensions are valid")
}

/// The worked test problems referenced by the command-line `gen` families.
pub mod presets {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn pt(v: f64) -> Interval {
        Interval::point(v)
    }

    /// 3x2 system with a single interval entry at (1,1) and a point
    /// right-hand side; its solution set is a parametric curve.
    pub fn example1() -> LsqProblem {
        let a = IntervalMatrix::from_rows(vec![
            vec![iv(0.0, 10.0), pt(2.0)],
            vec![pt(-1.0), pt(3.0)],
            vec![pt(3.0), pt(-2.0)],
        ]);
        let b = IntervalVector::from_points(&[10.0, -20.0, 0.0]);
        LsqProblem::new(a, b).unwrap()
    }

    /// Gay's 6x2 uniformly intervalized regression problem.
    pub fn gay() -> LsqProblem {
        let col1 = [1.0, 2.0, 5.0, 6.0, 9.0, 10.0];
        let rhs = [2.5, 1.5, 3.5, 4.5, 7.5, 6.5];
        let a = IntervalMatrix::from_rows(
            col1.iter().map(|&c| vec![iv(c - 0.25, c + 0.25), pt(1.0)]).collect(),
        );
        let b = rhs.iter().map(|&v| iv(v - 0.25, v + 0.25)).collect();
        LsqProblem::new(a, b).unwrap()
    }

    /// Bentbib's 3x2 system.
    pub fn bentbib() -> LsqProblem {
        let a = IntervalMatrix::from_rows(vec![
            vec![iv(0.1, 0.3), iv(0.9, 1.1)],
            vec![iv(8.9, 9.1), iv(0.4, 0.6)],
            vec![iv(0.9, 1.1), iv(6.9, 7.1)],
        ]);
        let b = IntervalVector::new(vec![iv(0.8, 1.2), iv(-0.2, 0.2), iv(1.8, 2.2)]);
        LsqProblem::new(a, b).unwrap()
    }

    /// Bentbib's matrix with Rohn's right-hand side.
    pub fn bentbib_rohn() -> LsqProblem {
        let base = bentbib();
        let b = IntervalVector::new(vec![iv(0.8, 1.2), iv(0.3, 0.7), iv(6.8, 7.2)]);
        LsqProblem::new(base.matrix().clone(), b).unwrap()
    }

    /// 3x2 system with two interval entries and a point right-hand side;
    /// its solution set has curved boundaries.
    pub fn example4() -> LsqProblem {
        let a = IntervalMatrix::from_rows(vec![
            vec![iv(0.0, 2.0), pt(2.0)],
            vec![pt(-1.0), iv(3.0, 5.0)],
            vec![pt(5.0), pt(-2.0)],
        ]);
        let b = IntervalVector::from_points(&[-3.0, 5.0, 7.0]);
        LsqProblem::new(a, b).unwrap()
    }

    /// 3x2 system with every entry interval; the standard small benchmark.
    pub fn example5() -> LsqProblem {
        let a = IntervalMatrix::from_rows(vec![
            vec![iv(-13.0, -11.0), iv(-7.0, -5.0)],
            vec![iv(-3.0, -1.0), iv(1.0, 3.0)],
            vec![iv(5.0, 7.0), iv(11.0, 13.0)],
        ]);
        let b = IntervalVector::new(vec![iv(-1.0, 0.0), iv(0.0, 1.0), iv(-1.0, 1.0)]);
        LsqProblem::new(a, b).unwrap()
    }

    /// The 15x12 instance of [`toft`] used as the moderate-size benchmark.
    pub fn toft_15x12() -> LsqProblem {
        toft(12, 3, 0.1, 0.05, 4.0, 0.2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        let a = IntervalMatrix::zeros(2, 3);
        let b = IntervalVector::zeros(2);
        assert!(matches!(LsqProblem::new(a, b), Err(Error::BadShape { m: 2, n: 3 })));
        let a = IntervalMatrix::zeros(2, 2);
        let b = IntervalVector::zeros(3);
        assert!(LsqProblem::new(a, b).is_err());
        let a = IntervalMatrix::zeros(0, 0);
        let b = IntervalVector::zeros(0);
        assert!(LsqProblem::new(a, b).is_err());
    }

    #[test]
    fn extended_block_assembly() {
        // A = (1; 1), b = (1, 1)  ->  ((1,0,1),(0,1,1),(1,1,0)), rhs (1,1,0)
        let p = LsqProblem::new(
            IntervalMatrix::from_rows(vec![vec![Interval::ONE], vec![Interval::ONE]]),
            IntervalVector::from_points(&[1.0, 1.0]),
        )
        .unwrap();
        let sys = p.extended();
        let expect = [
            [1.0, 0.0, 1.0],
            [0.0, 1.0, 1.0],
            [1.0, 1.0, 0.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sys.matrix.get(i, j), Interval::point(expect[i][j]));
            }
        }
        assert!(sys.matrix.is_symmetric());
        assert_eq!(sys.rhs[0], Interval::ONE);
        assert_eq!(sys.rhs[1], Interval::ONE);
        assert_eq!(sys.rhs[2], Interval::ZERO);
    }

    #[test]
    fn extended_keeps_intervals_and_rhs() {
        let sys = presets::example5().extended();
        assert_eq!(sys.dim(), 5);
        assert_eq!(sys.matrix.get(0, 3), iv(-13.0, -11.0));
        assert_eq!(sys.matrix.get(3, 0), iv(-13.0, -11.0));
        assert_eq!(sys.matrix.get(2, 4), iv(11.0, 13.0));
        assert_eq!(sys.rhs[0], iv(-1.0, 0.0));
        assert_eq!(sys.rhs[1], iv(0.0, 1.0));
        assert_eq!(sys.rhs[2], iv(-1.0, 1.0));
        assert_eq!(sys.rhs[3], Interval::ZERO);
        assert_eq!(sys.rhs[4], Interval::ZERO);
    }

    #[test]
    fn extended_point_solve_matches_normal_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let (m, n) = (5, 3);
            let a = RealMatrix::from_fn(m, n, |_, _| rng.random_range(-3.0..3.0));
            let b: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
            let p = LsqProblem::new(
                IntervalMatrix::from_real(&a),
                IntervalVector::from_points(&b),
            )
            .unwrap();
            let sys = p.extended();
            let full = match linalg::solve(&sys.matrix.mid(), &sys.rhs.mid()) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let normal = linalg::solve(&a.gram(), &a.transpose().matvec(&b)).unwrap();
            for j in 0..n {
                assert!((full[m + j] - normal[j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn projection_takes_trailing_components() {
        let p = LsqProblem::new(IntervalMatrix::zeros(3, 2), IntervalVector::zeros(3));
        let p = {
            let mut a = IntervalMatrix::zeros(3, 2);
            a.set(0, 0, Interval::ONE);
            a.set(1, 1, Interval::ONE);
            LsqProblem::new(a, IntervalVector::zeros(3)).unwrap_or_else(|_| p.unwrap())
        };
        let sys = p.extended();
        let full = IntervalVector::new(vec![
            iv(9.0, 9.0),
            iv(8.0, 8.0),
            iv(7.0, 7.0),
            iv(1.0, 2.0),
            iv(3.0, 4.0),
        ]);
        let x = sys.project(&full);
        assert_eq!(x.len(), 2);
        assert_eq!(x[0], iv(1.0, 2.0));
        assert_eq!(x[1], iv(3.0, 4.0));
        assert_eq!(sys.component_of(0), 3);
    }

    #[test]
    fn sampling_is_deterministic_and_degenerate_problems_collapse() {
        let p = presets::example5();
        let s1 = sample_solutions(&p, 50, 77).unwrap();
        let s2 = sample_solutions(&p, 50, 77).unwrap();
        assert_eq!(s1, s2);
        let s3 = sample_solutions(&p, 10, 78).unwrap();
        assert_ne!(s1[..10], s3[..]);

        let a = RealMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        let point = LsqProblem::new(
            IntervalMatrix::from_real(&a),
            IntervalVector::from_points(&[1.0, 2.0, 3.0]),
        )
        .unwrap();
        let samples = sample_solutions(&point, 5, 1).unwrap();
        for s in &samples[1..] {
            assert_eq!(s, &samples[0]);
        }
    }

    #[test]
    fn grid_hull_of_point_problem_is_the_solution() {
        let a = RealMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 4.0], vec![1.0, 1.0]]);
        let b = [2.0, 4.0, 2.0];
        let p = LsqProblem::new(
            IntervalMatrix::from_real(&a),
            IntervalVector::from_points(&b),
        )
        .unwrap();
        let hull = grid_inner_hull(&p, 8).unwrap();
        let exact = linalg::solve(&a.gram(), &a.transpose().matvec(&b)).unwrap();
        for k in 0..2 {
            assert!(hull[k].is_point());
            assert!((hull[k].lo() - exact[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_hull_guards_parameter_explosion() {
        let p = presets::toft_15x12();
        assert!(matches!(grid_inner_hull(&p, 8), Err(Error::TooManyParameters(_))));
    }

    #[test]
    fn toft_generator_layout() {
        let p = presets::toft_15x12();
        assert_eq!((p.nrows(), p.ncols()), (15, 12));
        let a = p.matrix();
        assert_eq!(a.get(0, 0), iv(0.9, 1.1));
        assert_eq!(a.get(0, 11), iv(0.9, 1.1));
        assert_eq!(a.get(1, 11), iv(1.9, 2.1));
        assert_eq!(a.get(10, 10), iv(0.9, 1.1));
        assert_eq!(a.get(11, 0), iv(0.9, 1.1));
        assert_eq!(a.get(11, 11), iv(11.9, 12.1));
        assert_eq!(a.get(0, 1), Interval::ZERO);
        assert_eq!(a.get(12, 0), iv(3.95, 4.05));
        assert_eq!(a.get(13, 0), iv(0.0, 0.05));
        assert_eq!(a.get(13, 1), iv(3.95, 4.05));
        assert_eq!(a.get(14, 2), iv(3.95, 4.05));
        assert_eq!(a.get(14, 3), Interval::ZERO);
        assert_eq!(p.rhs()[0], iv(0.8, 1.2));
        assert_eq!(p.rhs()[14], iv(0.8, 1.2));
    }

    #[test]
    fn degenerate_toft_has_counting_last_column() {
        let p = toft(6, 2, 0.0, 0.0, 4.0, 0.0);
        assert!(p.matrix().is_point());
        for i in 0..6 {
            assert_eq!(p.matrix().get(i, 5), Interval::point((i + 1) as f64));
        }
        assert!(p.rhs().is_point());
    }

    #[test]
    fn radius_scaling() {
        let p = presets::example5();
        let shrunk = p.scale_radius(0.0);
        assert!(shrunk.matrix().is_point());
        assert_eq!(shrunk.matrix().get(0, 0), Interval::point(-12.0));
        let grown = p.scale_radius(2.0);
        assert_eq!(grown.matrix().get(0, 0).wid(), 4.0);
        assert!(grown.matrix().get(0, 0).encloses(&p.matrix().get(0, 0)));
    }

    #[test]
    fn csv_output_shape() {
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, 2, &[vec![1.0, 2.5], vec![-0.25, 3.0]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x1,x2\n1,2.5\n-0.25,3\n");
    }
}
