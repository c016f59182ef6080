//! Exact Clopper-Pearson bounds and closed-form brackets around them.
//!
//! The lower bound for `x >= 1` is the `p` with `P_p(X >= x) = 1 - beta`
//! for `X ~ Binomial(n, p)`; the upper bound is `1 - lower(n - x)`.
//! Bracket values are raw expressions and may leave `[0, 1]`.

use crate::error::{Error, Result};
use crate::kernels::DiscreteLaw;
use crate::normal::phi_quantile;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const MAX_BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpQuery {
    pub n: u64,
    pub x: u64,
    pub beta: f64,
}

impl CpQuery {
    pub fn new(n: u64, x: u64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if x > n {
            return Err(Error::InvalidParameter(format!("x = {x} exceeds n = {n}")));
        }
        if !(0.5..1.0).contains(&beta) {
            return Err(Error::Domain(format!("beta = {beta} must lie in [1/2, 1)")));
        }
        Ok(Self { n, x, beta })
    }

    pub fn p_hat(&self) -> f64 {
        self.x as f64 / self.n as f64
    }

    pub fn q_hat(&self) -> f64 {
        (self.n - self.x) as f64 / self.n as f64
    }

    pub fn z(&self) -> f64 {
        phi_quantile(self.beta).expect("beta checked at construction")
    }

    /// `p_hat - 1/n`, defined for `x >= 1`.
    pub fn u(&self) -> Option<f64> {
        (self.x >= 1).then(|| (self.x - 1) as f64 / self.n as f64)
    }

    /// The same query for `n - x`.
    pub fn mirrored(&self) -> Self {
        Self { n: self.n, x: self.n - self.x, beta: self.beta }
    }
}

/// `P_p(X >= x)` for `X ~ Binomial(n, p)`.
pub fn binomial_upper_tail(n: u64, p: f64, x: u64) -> f64 {
    if x == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    DiscreteLaw::binomial(n, p).expect("valid parameters").upper_tail(x as i64)
}

pub fn cp_lower_exact(q: &CpQuery) -> f64 {
    if q.x == 0 {
        return 0.0;
    }
    let target = 1.0 - q.beta;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binomial_upper_tail(q.n, mid, q.x) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn cp_upper_exact(q: &CpQuery) -> f64 {
    1.0 - cp_lower_exact(&q.mirrored())
}

/// `(z / sqrt n) sqrt(p q + (1 + z^2/9) / n) + (1 + z^2/3) / n`.
fn plain_offset(q: &CpQuery, z: f64) -> f64 {
    let n = q.n as f64;
    let (ph, qh) = (q.p_hat(), q.q_hat());
    z / n.sqrt() * (ph * qh + (1.0 + z * z / 9.0) / n).sqrt() + (1.0 + z * z / 3.0) / n
}

fn shrink(q: &CpQuery, z: f64) -> f64 {
    1.0 + z * z / (3.0 * q.n as f64)
}

/// `p_hat - plain_offset`.
pub fn plain_lower(q: &CpQuery) -> f64 {
    q.p_hat() - plain_offset(q, q.z())
}

/// `p_hat - plain_offset / (1 + z^2/(3n))`.
pub fn simple_refined_lower(q: &CpQuery) -> f64 {
    let z = q.z();
    q.p_hat() - plain_offset(q, z) / shrink(q, z)
}

/// `u - (z^2 (2u-1)/(3n) + (z/sqrt n) sqrt(u(1-u) + z^2 (1-u(1-u))/(9n))) / (1 + z^2/(3n))`
/// for `x >= 1`.
pub fn refined_lower(q: &CpQuery) -> Option<f64> {
    let u = q.u()?;
    let z = q.z();
    let n = q.n as f64;
    let v = u * (1.0 - u);
    let inner = z * z * (2.0 * u - 1.0) / (3.0 * n) + z / n.sqrt() * (v + z * z * (1.0 - v) / (9.0 * n)).sqrt();
    Some(u - inner / shrink(q, z))
}

/// `p_hat + (z / sqrt n) sqrt(p_hat q_hat)`; not a valid confidence bound.
pub fn lagrange_point(q: &CpQuery) -> f64 {
    q.p_hat() + q.z() / (q.n as f64).sqrt() * (q.p_hat() * q.q_hat()).sqrt()
}

/// Exact bounds, every closed-form bracket, and the Lagrange point.
/// `refined_*` are `None` where they are not defined (`x = 0` below, `x = n`
/// above).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpBoundSet {
    pub n: u64,
    pub x: u64,
    pub beta: f64,
    pub z: f64,
    pub exact_lower: f64,
    pub exact_upper: f64,
    pub refined_lower: Option<f64>,
    pub simple_refined_lower: f64,
    pub plain_lower: f64,
    pub refined_upper: Option<f64>,
    pub simple_refined_upper: f64,
    pub plain_upper: f64,
    pub lagrange_point: f64,
}

impl CpBoundSet {
    /// `exact_lower > refined_lower >= simple_refined_lower >= plain_lower`
    /// when `x >= 1`, the weak chain through `simple_refined_lower` always.
    pub fn lower_chain_holds(&self) -> bool {
        let weak = self.exact_lower >= self.simple_refined_lower && self.simple_refined_lower >= self.plain_lower;
        match self.refined_lower {
            Some(r) => weak && self.exact_lower > r && r >= self.simple_refined_lower,
            None => weak,
        }
    }

    pub fn upper_chain_holds(&self) -> bool {
        let weak = self.exact_upper <= self.simple_refined_upper && self.simple_refined_upper <= self.plain_upper;
        match self.refined_upper {
            Some(r) => weak && self.exact_upper < r && r <= self.simple_refined_upper,
            None => weak,
        }
    }
}

struct LowerLevels {
    exact: f64,
    refined: Option<f64>,
    simple_refined: f64,
    plain: f64,
}

fn lower_levels(q: &CpQuery) -> LowerLevels {
    LowerLevels {
        exact: cp_lower_exact(q),
        refined: refined_lower(q),
        simple_refined: simple_refined_lower(q),
        plain: plain_lower(q),
    }
}

fn assemble(q: &CpQuery, low: &LowerLevels, mirror: &LowerLevels) -> CpBoundSet {
    CpBoundSet {
        n: q.n,
        x: q.x,
        beta: q.beta,
        z: q.z(),
        exact_lower: low.exact,
        exact_upper: 1.0 - mirror.exact,
        refined_lower: low.refined,
        simple_refined_lower: low.simple_refined,
        plain_lower: low.plain,
        refined_upper: mirror.refined.map(|r| 1.0 - r),
        simple_refined_upper: 1.0 - mirror.simple_refined,
        plain_upper: 1.0 - mirror.plain,
        lagrange_point: lagrange_point(q),
    }
}

pub fn cp_brackets(q: &CpQuery) -> CpBoundSet {
    assemble(q, &lower_levels(q), &lower_levels(&q.mirrored()))
}

/// Bound sets for `x = 0, ..., n`, sharing the lower-bound work between
/// `x` and `n - x`.
pub fn cp_table(n: u64, beta: f64) -> Result<Vec<CpBoundSet>> {
    let queries: Vec<CpQuery> = (0..=n).map(|x| CpQuery::new(n, x, beta)).collect::<Result<_>>()?;
    let lows: Vec<LowerLevels> = queries.par_iter().map(lower_levels).collect();
    Ok(queries
        .iter()
        .map(|q| assemble(q, &lows[q.x as usize], &lows[(n - q.x) as usize]))
        .collect())
}

/// Two-sided interval from one-sided bounds at level `(1 + beta) / 2`.
pub fn cp_two_sided(n: u64, x: u64, beta: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("beta = {beta} must lie in (0, 1)")));
    }
    let q = CpQuery::new(n, x, 0.5 * (1.0 + beta))?;
    Ok((cp_lower_exact(&q), cp_upper_exact(&q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpGapRow {
    #[serde(flatten)]
    pub bounds: CpBoundSet,
    /// `exact_lower - bracket` for the refined, simple refined and plain levels.
    pub lower_gaps: (Option<f64>, f64, f64),
    /// `bracket - exact_upper`, same order.
    pub upper_gaps: (Option<f64>, f64, f64),
    /// `lagrange_point - exact_upper`; negative where the Lagrange point
    /// falls short of the exact bound.
    pub lagrange_gap: f64,
}

impl From<CpBoundSet> for CpGapRow {
    fn from(b: CpBoundSet) -> Self {
        CpGapRow {
            bounds: b,
            lower_gaps: (
                b.refined_lower.map(|r| b.exact_lower - r),
                b.exact_lower - b.simple_refined_lower,
                b.exact_lower - b.plain_lower,
            ),
            upper_gaps: (
                b.refined_upper.map(|r| r - b.exact_upper),
                b.simple_refined_upper - b.exact_upper,
                b.plain_upper - b.exact_upper,
            ),
            lagrange_gap: b.lagrange_point - b.exact_upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpGapReport {
    pub n: u64,
    pub beta: f64,
    pub rows: Vec<CpGapRow>,
    /// Exact lower and upper bounds are increasing in `x`.
    pub monotone: bool,
}

pub fn cp_gap_report(n: u64, beta: f64) -> Result<CpGapReport> {
    let rows: Vec<CpGapRow> = cp_table(n, beta)?
        .into_iter()
        .map(CpGapRow::from)
        .collect();
    let monotone = rows.windows(2).all(|w| {
        w[0].bounds.exact_lower < w[1].bounds.exact_lower && w[0].bounds.exact_upper < w[1].bounds.exact_upper
    });
    Ok(CpGapReport { n, beta, rows, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, x: u64, beta: f64) -> CpQuery {
        CpQuery::new(n, x, beta).unwrap()
    }

    #[test]
    fn query_validation() {
        assert!(CpQuery::new(0, 0, 0.9).is_err());
        assert!(CpQuery::new(5, 6, 0.9).is_err());
        assert!(CpQuery::new(5, 2, 0.4).is_err());
        assert!(CpQuery::new(5, 2, 1.0).is_err());
        assert_eq!(q(10, 0, 0.9).u(), None);
        assert_eq!(q(10, 3, 0.9).u(), Some(0.2));
    }

    #[test]
    fn closed_forms() {
        for n in [1u64, 2, 7, 40] {
            for beta in [0.5, 0.9, 0.95, 0.99] {
                let nf = n as f64;
                assert_eq!(cp_lower_exact(&q(n, 0, beta)), 0.0);
                assert!((cp_lower_exact(&q(n, 1, beta)) - (1.0 - beta.powf(1.0 / nf))).abs() < 1e-12);
                assert!((cp_lower_exact(&q(n, n, beta)) - (1.0 - beta).powf(1.0 / nf)).abs() < 1e-12);
                assert_eq!(cp_upper_exact(&q(n, n, beta)), 1.0);
                assert!((cp_upper_exact(&q(n, 0, beta)) - (1.0 - (1.0 - beta).powf(1.0 / nf))).abs() < 1e-12);
                assert!((cp_upper_exact(&q(n, n - 1, beta)) - beta.powf(1.0 / nf)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_successes_at_95_percent() {
        let b = cp_brackets(&q(10, 0, 0.95));
        assert!((b.plain_upper * 10.0 - 3.777).abs() < 1e-3);
        assert!(b.exact_upper < 0.3);
        assert_eq!(b.lagrange_point, 0.0);
        assert_eq!(b.refined_lower, None);
        assert!(b.refined_upper.is_some());
    }

    #[test]
    fn median_level_collapses() {
        let b = cp_brackets(&q(8, 3, 0.5));
        assert_eq!(b.z, 0.0);
        assert!((b.plain_lower - 0.25).abs() < 1e-16);
        assert!((b.simple_refined_lower - 0.25).abs() < 1e-16);
    }

    #[test]
    fn chain_for_twenty_trials() {
        let b = cp_brackets(&q(20, 7, 0.95));
        assert!(b.lower_chain_holds() && b.upper_chain_holds(), "{b:?}");
        let residual = binomial_upper_tail(20, b.exact_lower, 7) - 0.05;
        assert!(residual.abs() < 1e-12);
    }

    #[test]
    fn table_matches_single_queries() {
        let t = cp_table(9, 0.9).unwrap();
        for b in &t {
            assert_eq!(*b, cp_brackets(&q(9, b.x, 0.9)));
        }
    }

    #[test]
    fn gap_report_for_one_trial() {
        let r = cp_gap_report(1, 0.95).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.monotone);
        assert!((r.rows[1].bounds.exact_lower - 0.05).abs() < 1e-12);
        assert!((r.rows[0].bounds.exact_upper - 0.95).abs() < 1e-12);
    }

    #[test]
    fn two_sided_uses_half_tails() {
        let (lo, hi) = cp_two_sided(10, 0, 0.9).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.05f64.powf(0.1))).abs() < 1e-12);
        assert!(cp_two_sided(10, 0, 1.0).is_err());
    }
}
