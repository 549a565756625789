//! Closed bounded intervals with outward-rounded arithmetic, plus dense
//! interval vectors and matrices.
//!
//! Every operation returns an interval that contains the exact real result.
//! Instead of switching the FPU rounding mode, each endpoint is computed in
//! round-to-nearest and corrected afterwards: an error-free transform
//! (`two_sum` / fused `two_prod`) recovers the exact rounding error, and the
//! endpoint is nudged one ulp outward only when the computed value lies on
//! the wrong side. Exact operations therefore stay exact, which matters for
//! the point-system paths of the enclosure routines.

use std::fmt;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use crate::linalg::RealMatrix;
use crate::Error;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

// The fma error term is exact only for normal products; subnormal or
// overflowed products fall back to an unconditional nudge.
#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let (p, e) = two_prod(a, b);
    if p == 0.0 || p.is_normal() {
        if e < 0.0 {
            p.next_down()
        } else {
            p
        }
    } else {
        p.next_down()
    }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let (p, e) = two_prod(a, b);
    if p == 0.0 || p.is_normal() {
        if e > 0.0 {
            p.next_up()
        } else {
            p
        }
    } else {
        p.next_up()
    }
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q != 0.0 && !q.is_normal() {
        return q.next_down();
    }
    let r = q.mul_add(b, -a); // q*b - a, sign-exact
    let too_high = if b > 0.0 { r > 0.0 } else { r < 0.0 };
    if too_high {
        q.next_down()
    } else {
        q
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q != 0.0 && !q.is_normal() {
        return q.next_up();
    }
    let r = q.mul_add(b, -a);
    let too_low = if b > 0.0 { r < 0.0 } else { r > 0.0 };
    if too_low {
        q.next_up()
    } else {
        q
    }
}

/// A closed bounded interval `[lo, hi]` of reals.
///
/// Invariants: both endpoints finite and `lo <= hi`. Degenerate intervals
/// (`lo == hi`) represent point values. The empty set is not representable;
/// [`Interval::intersect`] returns `None` instead.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds an interval, rejecting non-finite endpoints and `lo > hi`.
    pub fn new(lo: f64, hi: f64) -> Result<Interval, Error> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::BadInterval(lo, hi))
        }
    }

    /// The degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Interval {
        assert!(v.is_finite(), "point interval from non-finite {v}");
        Interval { lo: v, hi: v }
    }

    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo.is_finite() && hi.is_finite() && lo <= hi, "[{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// `mid ± rad`, with the radius rounded up so the result contains `self`.
    pub fn outward_from(mid: f64, rad: f64) -> Interval {
        debug_assert!(rad >= 0.0);
        Interval::raw(sub_down(mid, rad), add_up(mid, rad))
    }

    /// `[-s, s]` for `s >= 0`.
    #[inline]
    pub(crate) fn raw_symmetric(s: f64) -> Interval {
        Interval::raw(-s, s)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    #[inline]
    pub fn rad(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// Upper bound on the distance from [`Interval::mid`] to either endpoint,
    /// so that `mid ± rad_up` is guaranteed to contain the interval.
    #[inline]
    pub fn rad_up(&self) -> f64 {
        let m = self.mid();
        f64::max(sub_up(self.hi, m), sub_up(m, self.lo))
    }

    #[inline]
    pub fn wid(&self) -> f64 {
        self.hi - self.lo
    }

    /// Magnitude: `max(|lo|, |hi|)`.
    #[inline]
    pub fn mag(&self) -> f64 {
        f64::max(self.lo.abs(), self.hi.abs())
    }

    /// Mignitude: smallest absolute value over the interval.
    #[inline]
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            f64::min(self.lo.abs(), self.hi.abs())
        }
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when `x` lies strictly inside (endpoints excluded).
    #[inline]
    pub fn interior_contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn hull_with(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    /// Division, failing when the divisor contains zero.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval, Error> {
        if rhs.contains(0.0) {
            return Err(Error::ZeroDivisor);
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = div_down(a, c)
            .min(div_down(a, d))
            .min(div_down(b, c))
            .min(div_down(b, d));
        let hi = div_up(a, c)
            .max(div_up(a, d))
            .max(div_up(b, c))
            .max(div_up(b, d));
        Ok(Interval::raw(lo, hi))
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(v: f64) -> Interval {
        Interval::point(v)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(sub_down(self.lo, rhs.hi), sub_up(self.hi, rhs.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

// Min/max over the four endpoint products. Case analysis would save a few
// multiplications but subdivision dominates the runtime anyway.
impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c)
            .max(mul_up(a, d))
            .max(mul_up(b, c))
            .max(mul_up(b, d));
        Interval::raw(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs).expect("zero divisor interval")
    }
}

/// A dense interval vector.
#[derive(Clone, PartialEq)]
pub struct IntervalVector {
    elems: Vec<Interval>,
}

impl IntervalVector {
    pub fn new(elems: Vec<Interval>) -> IntervalVector {
        IntervalVector { elems }
    }

    pub fn zeros(n: usize) -> IntervalVector {
        IntervalVector { elems: vec![Interval::ZERO; n] }
    }

    /// Degenerate vector from point values.
    pub fn from_points(values: &[f64]) -> IntervalVector {
        IntervalVector { elems: values.iter().map(|&v| Interval::point(v)).collect() }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.elems.iter()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.elems.iter().map(Interval::mid).collect()
    }

    pub fn max_wid(&self) -> f64 {
        self.elems.iter().map(Interval::wid).fold(0.0, f64::max)
    }

    pub fn is_point(&self) -> bool {
        self.elems.iter().all(Interval::is_point)
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.len() == x.len() && self.elems.iter().zip(x).all(|(iv, &v)| iv.contains(v))
    }

    pub fn encloses(&self, other: &IntervalVector) -> bool {
        self.len() == other.len()
            && self.elems.iter().zip(other.iter()).all(|(a, b)| a.encloses(b))
    }

    /// Tightest box containing every point of a nonempty set.
    pub fn hull_of_points<'a, I>(points: I) -> Result<IntervalVector, Error>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = points.into_iter();
        let first = iter.next().ok_or(Error::EmptyHull)?;
        let mut elems: Vec<Interval> = first.iter().map(|&v| Interval::point(v)).collect();
        for p in iter {
            assert_eq!(p.len(), elems.len(), "hull of points with mixed dimensions");
            for (iv, &v) in elems.iter_mut().zip(p) {
                *iv = iv.hull_with(&Interval::point(v));
            }
        }
        Ok(IntervalVector { elems })
    }
}

impl fmt::Debug for IntervalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elems.iter()).finish()
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.elems[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.elems[i]
    }
}

impl Neg for &IntervalVector {
    type Output = IntervalVector;
    fn neg(self) -> IntervalVector {
        IntervalVector { elems: self.elems.iter().map(|&iv| -iv).collect() }
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> IntervalVector {
        IntervalVector { elems: iter.into_iter().collect() }
    }
}

/// A dense row-major interval matrix.
///
/// The `symmetric` flag records that `(i, j)` and `(j, i)` hold the same
/// logical parameter; [`IntervalMatrix::set`] keeps the two entries in sync
/// when the flag is on.
#[derive(Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    symmetric: bool,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn filled(rows: usize, cols: usize, fill: Interval) -> IntervalMatrix {
        IntervalMatrix { rows, cols, symmetric: false, data: vec![fill; rows * cols] }
    }

    pub fn zeros(rows: usize, cols: usize) -> IntervalMatrix {
        Self::filled(rows, cols, Interval::ZERO)
    }

    /// Degenerate identity.
    pub fn identity(n: usize) -> IntervalMatrix {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Interval::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Interval>>) -> IntervalMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntervalMatrix {
            rows: nrows,
            cols: ncols,
            symmetric: false,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Degenerate matrix from a point matrix.
    pub fn from_real(m: &RealMatrix) -> IntervalMatrix {
        IntervalMatrix {
            rows: m.rows(),
            cols: m.cols(),
            symmetric: false,
            data: m.iter().map(|&v| Interval::point(v)).collect(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Marks the matrix symmetric after verifying it actually is.
    pub fn into_symmetric(mut self) -> IntervalMatrix {
        assert_eq!(self.rows, self.cols, "symmetric matrix must be square");
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                assert!(
                    self.get(i, j) == self.get(j, i),
                    "entries ({i},{j}) and ({j},{i}) differ"
                );
            }
        }
        self.symmetric = true;
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.data[i * self.cols + j]
    }

    /// Writes entry `(i, j)`, mirroring to `(j, i)` when symmetric.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Interval) {
        self.data[i * self.cols + j] = v;
        if self.symmetric && i != j {
            self.data[j * self.cols + i] = v;
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.data.iter()
    }

    pub fn mid(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mid())
    }

    pub fn rad(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).rad())
    }

    pub fn mag(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mag())
    }

    pub fn max_wid(&self) -> f64 {
        self.data.iter().map(Interval::wid).fold(0.0, f64::max)
    }

    pub fn is_point(&self) -> bool {
        self.data.iter().all(Interval::is_point)
    }

    pub fn transpose(&self) -> IntervalMatrix {
        let mut t = IntervalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t.symmetric = self.symmetric;
        t
    }

    pub fn encloses(&self, other: &IntervalMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(other.data.iter()).all(|(a, b)| a.encloses(b))
    }

    pub fn contains_real(&self, m: &RealMatrix) -> bool {
        self.rows == m.rows()
            && self.cols == m.cols()
            && self.data.iter().zip(m.iter()).all(|(iv, &v)| iv.contains(v))
    }

    pub fn matvec(&self, v: &IntervalVector) -> IntervalVector {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Interval::ZERO;
                for j in 0..self.cols {
                    acc = acc + self.get(i, j) * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = IntervalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Interval::ZERO;
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        out
    }
}

impl fmt::Debug for IntervalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntervalMatrix {}x{} {{", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "}}")
    }
}

impl Add for &IntervalMatrix {
    type Output = IntervalMatrix;
    fn add(self, rhs: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add dimension mismatch");
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            symmetric: self.symmetric && rhs.symmetric,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl Sub for &IntervalMatrix {
    type Output = IntervalMatrix;
    fn sub(self, rhs: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub dimension mismatch");
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            symmetric: self.symmetric && rhs.symmetric,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// Compensated dot-product residual `rhs - row . x`, returned as a tight
/// interval around the exact value.
///
/// The main sum is accumulated with error-free transforms; the exact error
/// terms are folded in with interval arithmetic, so the only widening is the
/// rounding of the (tiny) compensation sum. Used by the verified enclosure to
/// keep point-system boxes at ulp width.
pub(crate) fn residual_dot(rhs: f64, row: &[f64], x: &[f64]) -> Interval {
    debug_assert_eq!(row.len(), x.len());
    let mut main = rhs;
    let mut comp = Interval::ZERO;
    for (&a, &b) in row.iter().zip(x) {
        accumulate_product(&mut main, &mut comp, a, b);
    }
    Interval::point(main) + comp
}

/// As [`residual_dot`], with the solution held as an unevaluated pair:
/// `rhs - row . x1 - row . x2`.
pub(crate) fn residual_dot2(rhs: f64, row: &[f64], x1: &[f64], x2: &[f64]) -> Interval {
    debug_assert_eq!(row.len(), x1.len());
    debug_assert_eq!(row.len(), x2.len());
    let mut main = rhs;
    let mut comp = Interval::ZERO;
    for (&a, (&b1, &b2)) in row.iter().zip(x1.iter().zip(x2)) {
        accumulate_product(&mut main, &mut comp, a, b1);
        accumulate_product(&mut main, &mut comp, a, b2);
    }
    Interval::point(main) + comp
}

#[inline]
fn accumulate_product(main: &mut f64, comp: &mut Interval, a: f64, b: f64) {
    let (p, e) = two_prod(a, b);
    if p != 0.0 && !p.is_normal() {
        // Error term unreliable; fall back to a full interval product.
        *comp = *comp - Interval::point(a) * Interval::point(b);
        return;
    }
    let (s, t) = two_sum(*main, -p);
    *main = s;
    *comp = *comp + Interval::point(t) - Interval::point(e);
}
