//! Verified sufficient conditions for an interval matrix to contain only
//! full-rank point matrices, which is the precondition for the least squares
//! solution set to be bounded.
//!
//! Two independent criteria are evaluated:
//! - spectral: `rho(|pinv(mid A)| . rad A) < 1`, with the absolute value
//!   applied entrywise to the pseudoinverse of the midpoint;
//! - singular values: `sigma_max(rad A) < sigma_min(mid A)`.
//!
//! Either one certifies full rank. The report also carries the sigma ratio,
//! a rough indicator of how much rank reserve the matrix has and hence how
//! hard branch-and-bound will have to work.

use crate::linalg::{pseudoinverse, sigma_extremes, spectral_radius_nonneg};
use crate::{Error, IntervalMatrix};

/// Outcome of the two full-rank criteria.
#[derive(Clone, Copy, Debug)]
pub struct RankReport {
    /// `rho(|pinv(mid A)| . rad A)`; certifies full rank when `< 1`.
    pub spectral_value: f64,
    pub sigma_mid_min: f64,
    pub sigma_rad_max: f64,
    /// `sigma_mid_min / sigma_rad_max`, infinite for point matrices.
    pub ratio: f64,
    pub spectral_holds: bool,
    pub sigma_holds: bool,
}

impl RankReport {
    /// True when at least one criterion certifies full rank.
    pub fn certified(&self) -> bool {
        self.spectral_holds || self.sigma_holds
    }
}

/// Evaluates both full-rank criteria for an `m x n` interval matrix, `m >= n`.
///
/// Fails with [`Error::MidpointRankDeficient`] when the midpoint matrix does
/// not have full column rank (no certificate is possible then).
pub fn check_full_rank(a: &IntervalMatrix) -> Result<RankReport, Error> {
    assert!(a.rows() >= a.cols(), "expected a tall matrix (m >= n)");
    let mid = a.mid();
    let rad = a.rad();
    let pinv_abs = pseudoinverse(&mid)?.abs();
    let spectral_value = spectral_radius_nonneg(&pinv_abs.matmul(&rad))?;
    let (sigma_mid_min, _) = sigma_extremes(&mid);
    let (_, sigma_rad_max) = sigma_extremes(&rad);
    let ratio =
        if sigma_rad_max > 0.0 { sigma_mid_min / sigma_rad_max } else { f64::INFINITY };
    Ok(RankReport {
        spectral_value,
        sigma_mid_min,
        sigma_rad_max,
        ratio,
        spectral_holds: spectral_value < 1.0,
        sigma_holds: sigma_rad_max < sigma_mid_min,
    })
}
