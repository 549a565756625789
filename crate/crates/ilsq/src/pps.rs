//! Branch-and-bound over the parameters of a symmetric interval linear
//! system, bounding one solution component at a time.
//!
//! A work list holds subsystems of the root system ordered by their verified
//! lower bound. Each iteration pops the leading (smallest-bound) record,
//! splits one interval element, and re-encloses the two descendants:
//! symmetric matrix entries are halved in mirrored pairs, right-hand side
//! components are split straight to their endpoints (the componentwise
//! extrema are attained there, so endpoint splitting loses nothing).
//!
//! On top of the plain loop sit three accelerations, all optional:
//! - a monotonicity test pins a parameter to one endpoint whenever the
//!   enclosed derivative of the target component has a fixed sign;
//! - the element to split is chosen by largest `|derivative| * width`
//!   instead of largest width;
//! - midpoint solves maintain an upper bound `omega` on the sought minimum,
//!   which filters and periodically cleans the work list.
//!
//! The returned bound is always valid: child bounds are clamped to never
//! fall below the parent's, so the reported minimum estimate only improves,
//! budget exhaustion simply stops early, and `omega` is computed from
//! verified point solves so cleaning can never discard the eventual winner.

use std::time::{Duration, Instant};

use crate::enclose::{enclose, enclose_node, EnclosureMethod};
use crate::problem::LsqProblem;
use crate::rank::{check_full_rank, RankReport};
use crate::{Error, Interval, IntervalMatrix, IntervalVector};

/// How descendant right-hand sides are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsSplit {
    /// Split an interval component to its two endpoints.
    Endpoints,
    /// Halve it like a matrix entry. Kept for cross-checking; endpoint
    /// splitting converges to the same bounds faster.
    Halve,
}

/// How the element to subdivide is selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Largest width.
    Widest,
    /// Largest `|derivative enclosure| * width`.
    MaxImpact,
}

/// One interval parameter of a symmetric system: either a mirrored matrix
/// pair, addressed by its upper-triangle position (`row <= col`), or a
/// right-hand side component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementId {
    Matrix { row: usize, col: usize },
    Rhs { index: usize },
}

/// Tuning knobs for the branch-and-bound loop.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Subdivision stops once every element of the leading system is at most
    /// this wide.
    pub eps: f64,
    /// Iteration budget per bound; exceeding it is not an error, the current
    /// lower bound is simply returned as not converged.
    pub max_iters: usize,
    /// Wall-clock budget per bound.
    pub time_limit: Option<Duration>,
    /// Optional early exit once `omega - Z` drops below this.
    pub target_gap: Option<f64>,
    /// Monotonicity pinning on or off.
    pub squeeze: bool,
    pub selection: Selection,
    pub rhs_split: RhsSplit,
    /// Clean the work list on every `clean_period`-th improvement of `omega`.
    pub clean_period: usize,
    /// Reuse the parent's inverse enclosure for descendants instead of
    /// recomputing; faster but wider derivative enclosures.
    pub reuse_parent_inverse: bool,
    pub encl: EnclosureMethod,
    /// Record `(Z, omega)` after every iteration.
    pub trace: bool,
    /// Solve even when neither full-rank criterion certifies the matrix.
    pub skip_rank_check: bool,
}

impl SolveOptions {
    /// All accelerations on: monotonicity pinning, impact-guided selection,
    /// list cleaning.
    pub fn modified() -> SolveOptions {
        SolveOptions {
            eps: 1e-6,
            max_iters: 1_000_000,
            time_limit: None,
            target_gap: None,
            squeeze: true,
            selection: Selection::MaxImpact,
            rhs_split: RhsSplit::Endpoints,
            clean_period: 8,
            reuse_parent_inverse: false,
            encl: EnclosureMethod::krawczyk(),
            trace: false,
            skip_rank_check: false,
        }
    }

    /// The plain loop: widest-element selection, no pinning.
    pub fn simple() -> SolveOptions {
        SolveOptions { squeeze: false, selection: Selection::Widest, ..SolveOptions::modified() }
    }

    fn validate(&self) {
        assert!(self.eps > 0.0, "eps must be positive");
        assert!(self.clean_period >= 1, "clean_period must be at least 1");
    }
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions::modified()
    }
}

/// Lower/upper bound pair logged after an iteration.
#[derive(Clone, Copy, Debug)]
pub struct TracePoint {
    pub lower: f64,
    pub upper: f64,
}

/// Per-bound run statistics.
#[derive(Clone, Debug)]
pub struct BoundStats {
    pub iterations: usize,
    pub wall: Duration,
    /// `omega - Z` at exit; certifies how far the bound can be from sharp.
    pub gap: f64,
    pub peak_list: usize,
    /// False when an iteration or time budget stopped the loop early.
    pub converged: bool,
    pub trace: Vec<TracePoint>,
}

/// Work-list record: a descendant system, its verified lower bound for the
/// target component, the solution enclosure, and (when derivative
/// information is in use) an enclosure of the inverse matrix family.
struct Record {
    q: IntervalMatrix,
    r: IntervalVector,
    lower: f64,
    x: IntervalVector,
    inv: Option<IntervalMatrix>,
}

impl Record {
    fn max_wid(&self) -> f64 {
        self.q.max_wid().max(self.r.max_wid())
    }
}

/// Ascending by `lower`; FIFO among equal bounds so runs are reproducible.
struct WorkList {
    records: Vec<Record>,
    peak: usize,
}

impl WorkList {
    fn new(root: Record) -> WorkList {
        WorkList { records: vec![root], peak: 1 }
    }

    fn leading(&self) -> Option<&Record> {
        self.records.first()
    }

    fn pop_leading(&mut self) -> Record {
        self.records.remove(0)
    }

    fn insert(&mut self, rec: Record) {
        let at = self.records.partition_point(|r| r.lower <= rec.lower);
        self.records.insert(at, rec);
        self.peak = self.peak.max(self.records.len());
    }

    /// Drops every record whose lower bound exceeds `omega`. The leading
    /// record survives by construction: its bound is the list minimum and
    /// never exceeds the sought minimum, which `omega` bounds from above.
    fn clean(&mut self, omega: f64) {
        self.records.retain(|r| r.lower <= omega);
    }

    fn len(&self) -> usize {
        self.records.len()
    }
}

/// Halves the mirrored pair `(row, col)` / `(col, row)` of a symmetric
/// interval matrix, producing the two symmetric descendants.
pub fn split_matrix(
    q: &IntervalMatrix,
    row: usize,
    col: usize,
) -> Result<(IntervalMatrix, IntervalMatrix), Error> {
    assert!(q.is_symmetric(), "matrix splitting requires a symmetric matrix");
    let e = q.get(row, col);
    if e.is_point() {
        return Err(Error::DegenerateSplit);
    }
    let m = e.mid();
    let mut left = q.clone();
    left.set(row, col, Interval::new(e.lo(), m)?);
    let mut right = q.clone();
    right.set(row, col, Interval::new(m, e.hi())?);
    Ok((left, right))
}

/// Splits right-hand side component `k` to its two endpoints.
pub fn split_rhs_endpoints(
    r: &IntervalVector,
    k: usize,
) -> Result<(IntervalVector, IntervalVector), Error> {
    let e = r[k];
    if e.is_point() {
        return Err(Error::DegenerateSplit);
    }
    let mut left = r.clone();
    left[k] = Interval::point(e.lo());
    let mut right = r.clone();
    right[k] = Interval::point(e.hi());
    Ok((left, right))
}

/// Halves right-hand side component `k`.
pub fn split_rhs_halves(
    r: &IntervalVector,
    k: usize,
) -> Result<(IntervalVector, IntervalVector), Error> {
    let e = r[k];
    if e.is_point() {
        return Err(Error::DegenerateSplit);
    }
    let m = e.mid();
    let mut left = r.clone();
    left[k] = Interval::new(e.lo(), m)?;
    let mut right = r.clone();
    right[k] = Interval::new(m, e.hi())?;
    Ok((left, right))
}

/// Widest nondegenerate element; matrix entries win ties over right-hand
/// side components, lexicographic within the upper triangle.
pub fn widest_element(q: &IntervalMatrix, r: &IntervalVector) -> Option<ElementId> {
    let mut best: Option<(ElementId, f64)> = None;
    let n = q.rows();
    for row in 0..n {
        for col in row..n {
            let w = q.get(row, col).wid();
            if w > 0.0 && best.map_or(true, |(_, bw)| w > bw) {
                best = Some((ElementId::Matrix { row, col }, w));
            }
        }
    }
    for index in 0..r.len() {
        let w = r[index].wid();
        if w > 0.0 && best.map_or(true, |(_, bw)| w > bw) {
            best = Some((ElementId::Rhs { index }, w));
        }
    }
    best.map(|(id, _)| id)
}

/// Interval enclosures of the derivatives of solution component `comp` with
/// respect to every nondegenerate interval parameter.
///
/// With `Y` enclosing the inverses and `x` the solution set:
/// `-Y[c][k]*x[l] - Y[c][l]*x[k]` for an off-diagonal pair, the single term
/// `-Y[c][k]*x[k]` on the diagonal (the perturbation hits one equation
/// once), and `Y[c][k]` for right-hand side components.
pub fn derivative_enclosures(
    q: &IntervalMatrix,
    r: &IntervalVector,
    inv: &IntervalMatrix,
    x: &IntervalVector,
    comp: usize,
) -> Vec<(ElementId, Interval)> {
    let n = q.rows();
    let mut out = Vec::new();
    for row in 0..n {
        for col in row..n {
            if q.get(row, col).wid() == 0.0 {
                continue;
            }
            let d = if row == col {
                -(inv.get(comp, row) * x[row])
            } else {
                -(inv.get(comp, row) * x[col]) - inv.get(comp, col) * x[row]
            };
            out.push((ElementId::Matrix { row, col }, d));
        }
    }
    for index in 0..r.len() {
        if r[index].wid() > 0.0 {
            out.push((ElementId::Rhs { index }, inv.get(comp, index)));
        }
    }
    out
}

/// Pins every parameter whose derivative enclosure has a fixed sign to the
/// endpoint that minimizes the target component. The minimum over the
/// symmetric solution set is unchanged. Returns the (possibly) thinned
/// system and whether anything was pinned.
pub fn monotonic_pin(
    q: &IntervalMatrix,
    r: &IntervalVector,
    derivs: &[(ElementId, Interval)],
) -> (IntervalMatrix, IntervalVector, bool) {
    let mut q2 = q.clone();
    let mut r2 = r.clone();
    let mut changed = false;
    for &(id, d) in derivs {
        let pick = if d.lo() >= 0.0 {
            Some(true) // increasing: minimum at the lower endpoint
        } else if d.hi() <= 0.0 {
            Some(false)
        } else {
            None
        };
        let Some(take_lo) = pick else { continue };
        match id {
            ElementId::Matrix { row, col } => {
                let e = q2.get(row, col);
                if !e.is_point() {
                    q2.set(row, col, Interval::point(if take_lo { e.lo() } else { e.hi() }));
                    changed = true;
                }
            }
            ElementId::Rhs { index } => {
                let e = r2[index];
                if !e.is_point() {
                    r2[index] = Interval::point(if take_lo { e.lo() } else { e.hi() });
                    changed = true;
                }
            }
        }
    }
    (q2, r2, changed)
}

/// Element maximizing `|derivative| * width` among the still-nondegenerate
/// parameters; falls back to the first candidate on all-zero scores, and
/// coincides with [`widest_element`] when all derivative magnitudes agree.
pub fn max_impact_element(
    q: &IntervalMatrix,
    r: &IntervalVector,
    derivs: &[(ElementId, Interval)],
) -> Option<ElementId> {
    let mut best: Option<(ElementId, f64)> = None;
    for &(id, d) in derivs {
        let w = match id {
            ElementId::Matrix { row, col } => q.get(row, col).wid(),
            ElementId::Rhs { index } => r[index].wid(),
        };
        if w == 0.0 {
            continue;
        }
        let score = d.mag() * w;
        if best.map_or(true, |(_, bs)| score > bs) {
            best = Some((id, score));
        }
    }
    best.map(|(id, _)| id)
}

/// Verified upper bound of the target component of the midpoint system, or
/// `None` when the midpoint system cannot be solved. Any such value is the
/// component of one admissible point system, hence an upper bound on the
/// sought minimum.
fn feasible_upper(
    method: &EnclosureMethod,
    q: &IntervalMatrix,
    r: &IntervalVector,
    comp: usize,
) -> Option<f64> {
    let qm = IntervalMatrix::from_real(&q.mid());
    let rm = IntervalVector::from_points(&r.mid());
    enclose(method, &qm, &rm).ok().map(|x| x[comp].hi())
}

/// Lower bound for `min { x[comp] : x solves some symmetric point system
/// within (q, r) }` by branch-and-bound, together with run statistics.
pub fn minimize_component(
    q: &IntervalMatrix,
    r: &IntervalVector,
    comp: usize,
    opts: &SolveOptions,
) -> Result<(f64, BoundStats), Error> {
    opts.validate();
    assert!(q.is_symmetric(), "branch-and-bound requires a symmetric system");
    assert!(comp < r.len(), "component out of range");
    let start = Instant::now();
    let needs_derivs = opts.squeeze || opts.selection == Selection::MaxImpact;

    let root = enclose_node(&opts.encl, q, r, needs_derivs)?;
    let mut list = WorkList::new(Record {
        q: q.clone(),
        r: r.clone(),
        lower: root.x[comp].lo(),
        x: root.x,
        inv: root.inv,
    });

    let mut stats = BoundStats {
        iterations: 0,
        wall: Duration::ZERO,
        gap: f64::INFINITY,
        peak_list: 1,
        converged: false,
        trace: Vec::new(),
    };
    let mut omega = f64::INFINITY;
    let mut omega_improvements = 0usize;
    let mut best_lower = f64::NEG_INFINITY;

    loop {
        let Some(leading) = list.leading() else {
            // Cannot happen for admissible inputs; the current bound stays valid.
            stats.converged = true;
            break;
        };
        best_lower = leading.lower;
        if leading.max_wid() <= opts.eps {
            stats.converged = true;
            break;
        }
        if opts.target_gap.is_some_and(|t| omega - best_lower <= t) {
            stats.converged = true;
            break;
        }
        if stats.iterations >= opts.max_iters
            || opts.time_limit.is_some_and(|t| start.elapsed() >= t)
        {
            break;
        }

        let mut rec = list.pop_leading();

        let mut derivs = None;
        if needs_derivs {
            let inv = rec.inv.as_ref().expect("inverse tracked when derivatives are needed");
            let d = derivative_enclosures(&rec.q, &rec.r, inv, &rec.x, comp);
            if opts.squeeze {
                let (q2, r2, changed) = monotonic_pin(&rec.q, &rec.r, &d);
                if changed {
                    rec.q = q2;
                    rec.r = r2;
                    if rec.max_wid() <= opts.eps {
                        // Pinning alone finished this record; tighten its
                        // bound and put it back.
                        let node = enclose_node(&opts.encl, &rec.q, &rec.r, false)?;
                        rec.lower = rec.lower.max(node.x[comp].lo());
                        rec.x = node.x;
                        list.insert(rec);
                        stats.iterations += 1;
                        if opts.trace {
                            let z = list.leading().map_or(best_lower, |l| l.lower);
                            stats.trace.push(TracePoint { lower: z, upper: omega });
                        }
                        continue;
                    }
                }
            }
            derivs = Some(d);
        }

        let elem = match opts.selection {
            Selection::Widest => widest_element(&rec.q, &rec.r),
            Selection::MaxImpact => {
                max_impact_element(&rec.q, &rec.r, derivs.as_deref().unwrap())
            }
        }
        .expect("leading system wider than eps must have a splittable element");

        let children = match elem {
            ElementId::Matrix { row, col } => {
                let (left, right) = split_matrix(&rec.q, row, col)?;
                [(left, rec.r.clone()), (right, rec.r.clone())]
            }
            ElementId::Rhs { index } => {
                let (left, right) = match opts.rhs_split {
                    RhsSplit::Endpoints => split_rhs_endpoints(&rec.r, index)?,
                    RhsSplit::Halve => split_rhs_halves(&rec.r, index)?,
                };
                [(rec.q.clone(), left), (rec.q.clone(), right)]
            }
        };

        let mut mu = f64::INFINITY;
        for (qc, rc) in children {
            if let Some(fu) = feasible_upper(&opts.encl, &qc, &rc, comp) {
                mu = mu.min(fu);
            }
            let node = enclose_node(&opts.encl, &qc, &rc, needs_derivs && !opts.reuse_parent_inverse)?;
            // The parent's bound also holds on the child, so bounds never regress.
            let lower = node.x[comp].lo().max(rec.lower);
            let inv = if needs_derivs {
                if opts.reuse_parent_inverse { rec.inv.clone() } else { node.inv }
            } else {
                None
            };
            if lower <= omega {
                list.insert(Record { q: qc, r: rc, lower, x: node.x, inv });
            }
        }
        if mu < omega {
            omega = mu;
            omega_improvements += 1;
            if omega_improvements % opts.clean_period == 0 {
                list.clean(omega);
            }
        }

        stats.iterations += 1;
        stats.peak_list = stats.peak_list.max(list.len());
        if opts.trace {
            let z = list.leading().map_or(best_lower, |l| l.lower);
            stats.trace.push(TracePoint { lower: z, upper: omega });
        }
    }

    // Report a finite gap whenever the leading midpoint system is solvable.
    if let Some(leading) = list.leading() {
        if let Some(fu) = feasible_upper(&opts.encl, &leading.q, &leading.r, comp) {
            omega = omega.min(fu);
        }
    }
    stats.gap = omega - best_lower;
    stats.wall = start.elapsed();
    Ok((best_lower, stats))
}

/// Upper bound for `max { x[comp] }` over the same set, via reflection:
/// negating the right-hand side negates the solution set, so the maximum is
/// `-min` of the reflected problem. Trace values refer to the reflected
/// minimization.
pub fn maximize_component(
    q: &IntervalMatrix,
    r: &IntervalVector,
    comp: usize,
    opts: &SolveOptions,
) -> Result<(f64, BoundStats), Error> {
    let (z, stats) = minimize_component(q, &-r, comp, opts)?;
    Ok((-z, stats))
}

/// Statistics for both bounds of one solution component.
#[derive(Clone, Debug)]
pub struct ComponentStats {
    pub lower: BoundStats,
    pub upper: BoundStats,
}

/// Result of [`solve`]: the enclosing box plus per-component diagnostics.
#[derive(Clone, Debug)]
pub struct Solution {
    pub enclosure: IntervalVector,
    pub rank: RankReport,
    pub components: Vec<ComponentStats>,
}

impl Solution {
    pub fn converged(&self) -> bool {
        self.components.iter().all(|c| c.lower.converged && c.upper.converged)
    }

    pub fn total_iterations(&self) -> usize {
        self.components.iter().map(|c| c.lower.iterations + c.upper.iterations).sum()
    }
}

/// Full pipeline: certify full rank, build the extended symmetric system,
/// and bound every solution component from both sides.
pub fn solve(p: &LsqProblem, opts: &SolveOptions) -> Result<Solution, Error> {
    let rank = check_full_rank(p.matrix())?;
    if !rank.certified() && !opts.skip_rank_check {
        return Err(Error::RankNotCertified {
            spectral: rank.spectral_value,
            ratio: rank.ratio,
        });
    }
    let sys = p.extended();
    let mut enclosure = Vec::with_capacity(p.ncols());
    let mut components = Vec::with_capacity(p.ncols());
    for j in 0..p.ncols() {
        let comp = sys.component_of(j);
        let (lo, lower) = minimize_component(&sys.matrix, &sys.rhs, comp, opts)?;
        let (hi, upper) = maximize_component(&sys.matrix, &sys.rhs, comp, opts)?;
        enclosure.push(Interval::new(lo, hi)?);
        components.push(ComponentStats { lower, upper });
    }
    Ok(Solution { enclosure: IntervalVector::new(enclosure), rank, components })
}
