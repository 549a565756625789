//! Outer enclosures for interval linear least squares problems.
//!
//! Given an `m x n` interval matrix **A** (`m >= n`) and an interval
//! right-hand side **b**, this crate computes a box guaranteed to contain
//! every least squares solution of `Ax = b` over all `A` in **A** and `b` in
//! **b**. The normal equations are rewritten as a bordered symmetric interval
//! system, and each component bound is obtained by branch-and-bound over the
//! interval parameters, with a verified linear-system enclosure at every node.
//!
//! Entry points:
//! - [`solve`] runs the full pipeline (rank certification, system extension,
//!   per-component bounds) and returns the enclosing box with statistics.
//! - [`problem`] holds problem construction, test-system generators and the
//!   Monte-Carlo / grid oracles used for validation.
//! - [`pps`] exposes the branch-and-bound engine for a single component of a
//!   symmetric interval system.

pub mod enclose;
pub mod interval;
pub mod linalg;
pub mod pps;
pub mod problem;
pub mod rank;

pub use enclose::{EnclosureKind, EnclosureMethod};
pub use interval::{Interval, IntervalMatrix, IntervalVector};
pub use linalg::RealMatrix;
pub use pps::{solve, BoundStats, RhsSplit, Selection, SolveOptions, Solution};
pub use problem::{ExtendedSystem, LsqProblem};
pub use rank::{check_full_rank, RankReport};

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid interval endpoints [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("zero divisor interval")]
    ZeroDivisor,
    #[error("empty point set has no hull")]
    EmptyHull,
    #[error("problem must have m >= n >= 1, got {m}x{n}")]
    BadShape { m: usize, n: usize },
    #[error("singular point system")]
    SingularPoint,
    #[error("matrix must be elementwise nonnegative")]
    NegativeEntry,
    #[error("midpoint rank deficient")]
    MidpointRankDeficient,
    #[error("regularity not verified")]
    RegularityNotVerified,
    #[error("full rank not certified (spectral {spectral:.4}, sigma ratio {ratio:.4})")]
    RankNotCertified { spectral: f64, ratio: f64 },
    #[error("too many interval parameters for the exhaustive oracle ({0})")]
    TooManyParameters(usize),
    #[error("sampling kept hitting singular systems")]
    DegenerateSampling,
    #[error("degenerate element cannot be split")]
    DegenerateSplit,
}
