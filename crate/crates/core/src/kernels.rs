//! Exact point masses, distribution functions and moments for binomial,
//! hypergeometric and Poisson laws.
//!
//! Point masses use saddle-point evaluation (see [`crate::special`]). Tail
//! sums start at the cut point, walk outward with the ratio recurrence of the
//! family, and are accumulated in increasing order of magnitude. The lighter
//! tail is always the one summed, so `cdf` and `sf` both keep relative
//! precision deep in their respective tails.

use crate::error::{Error, Result};
use crate::interval::LatticeInterval;
use crate::normal::{phi_sf, LOG_DOMAIN_BELOW};
use crate::special::{dbinom_raw, dhyper_raw, dpois_raw, ln_dbinom_raw, ln_dhyper_raw, ln_dpois_raw};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Upper-tail mass below which the Poisson support is cut off.
pub const POISSON_TAIL_CUTOFF: f64 = 1e-15;

/// Parameters of one of the three supported families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Binomial { n: u64, p: f64 },
    /// `draws` balls drawn without replacement from `population`, of which
    /// `successes` are marked.
    Hypergeometric { population: u64, successes: u64, draws: u64 },
    Poisson { lambda: f64 },
}

/// A validated binomial, hypergeometric or Poisson law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct DiscreteLaw {
    family: Family,
}

impl TryFrom<Family> for DiscreteLaw {
    type Error = Error;

    fn try_from(family: Family) -> Result<Self> {
        Self::new(family)
    }
}

impl From<DiscreteLaw> for Family {
    fn from(law: DiscreteLaw) -> Self {
        law.family
    }
}

impl fmt::Display for DiscreteLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Binomial { n, p } => write!(f, "binomial {n} {p}"),
            Family::Hypergeometric { population, successes, draws } => {
                write!(f, "hypergeometric {population} {successes} {draws}")
            }
            Family::Poisson { lambda } => write!(f, "poisson {lambda}"),
        }
    }
}

impl DiscreteLaw {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Binomial { n, p } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("binomial needs n >= 1".into()));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParameter(format!("binomial p must lie in [0, 1], got {p}")));
                }
            }
            Family::Hypergeometric { population, successes, draws } => {
                if population == 0 {
                    return Err(Error::InvalidParameter("hypergeometric needs N >= 1".into()));
                }
                if successes > population {
                    return Err(Error::InvalidParameter(format!(
                        "hypergeometric needs K <= N, got K = {successes}, N = {population}"
                    )));
                }
                if draws == 0 || draws > population {
                    return Err(Error::InvalidParameter(format!(
                        "hypergeometric needs 1 <= n <= N, got n = {draws}, N = {population}"
                    )));
                }
            }
            Family::Poisson { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidParameter(format!("poisson needs finite lambda > 0, got {lambda}")));
                }
            }
        }
        Ok(Self { family })
    }

    pub fn binomial(n: u64, p: f64) -> Result<Self> {
        Self::new(Family::Binomial { n, p })
    }

    pub fn hypergeometric(population: u64, successes: u64, draws: u64) -> Result<Self> {
        Self::new(Family::Hypergeometric { population, successes, draws })
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        Self::new(Family::Poisson { lambda })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn mean(&self) -> f64 {
        match self.family {
            Family::Binomial { n, p } => n as f64 * p,
            Family::Hypergeometric { population, successes, draws } => {
                draws as f64 * successes as f64 / population as f64
            }
            Family::Poisson { lambda } => lambda,
        }
    }

    pub fn variance(&self) -> f64 {
        match self.family {
            Family::Binomial { n, p } => n as f64 * p * (1.0 - p),
            Family::Hypergeometric { population, successes, draws } => {
                if population == 1 {
                    return 0.0;
                }
                let big_n = population as f64;
                let frac = successes as f64 / big_n;
                let other = (population - successes) as f64 / big_n;
                draws as f64 * frac * other * (population - draws) as f64 / (big_n - 1.0)
            }
            Family::Poisson { lambda } => lambda,
        }
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    /// `(mean, standard deviation)`.
    pub fn mean_sd(&self) -> (f64, f64) {
        (self.mean(), self.sd())
    }

    pub fn is_degenerate(&self) -> bool {
        self.variance() == 0.0
    }

    /// Standard deviation, or an error for degenerate laws.
    pub fn require_spread(&self) -> Result<f64> {
        let sd = self.sd();
        if sd > 0.0 {
            Ok(sd)
        } else {
            Err(Error::DegenerateLaw)
        }
    }

    /// Smallest point of the support.
    pub fn support_min(&self) -> i64 {
        match self.family {
            Family::Binomial { n, p } => {
                if p == 1.0 {
                    n as i64
                } else {
                    0
                }
            }
            Family::Hypergeometric { population, successes, draws } => {
                (draws + successes).saturating_sub(population) as i64
            }
            Family::Poisson { .. } => 0,
        }
    }

    /// Largest point of the support; `None` for Poisson laws.
    pub fn support_max(&self) -> Option<i64> {
        match self.family {
            Family::Binomial { n, p } => Some(if p == 0.0 { 0 } else { n as i64 }),
            Family::Hypergeometric { successes, draws, .. } => Some(successes.min(draws) as i64),
            Family::Poisson { .. } => None,
        }
    }

    /// Largest support point retained by exhaustive operations, together with
    /// the mass beyond it (zero for finite supports).
    pub fn truncation(&self) -> (i64, f64) {
        match self.support_max() {
            Some(hi) => (hi, 0.0),
            None => poisson_truncation(self.mean()),
        }
    }

    /// Point mass at `k`; zero outside the support.
    pub fn pmf(&self, k: i64) -> f64 {
        if k < self.support_min() {
            return 0.0;
        }
        if let Some(hi) = self.support_max() {
            if k > hi {
                return 0.0;
            }
        }
        let x = k as f64;
        match self.family {
            Family::Binomial { n, p } => dbinom_raw(x, n as f64, p, 1.0 - p),
            Family::Hypergeometric { population, successes, draws } => dhyper_raw(
                x,
                successes as f64,
                (population - successes) as f64,
                draws as f64,
            ),
            Family::Poisson { lambda } => dpois_raw(x, lambda),
        }
    }

    /// `ln pmf(k)`, finite on the support even where `pmf(k)` underflows.
    pub fn ln_pmf(&self, k: i64) -> f64 {
        if k < self.support_min() || self.support_max().is_some_and(|hi| k > hi) {
            return f64::NEG_INFINITY;
        }
        let x = k as f64;
        match self.family {
            Family::Binomial { n, p } => ln_dbinom_raw(x, n as f64, p, 1.0 - p),
            Family::Hypergeometric { population, successes, draws } => ln_dhyper_raw(
                x,
                successes as f64,
                (population - successes) as f64,
                draws as f64,
            ),
            Family::Poisson { lambda } => ln_dpois_raw(x, lambda),
        }
    }

    /// `pmf(j + 1) / pmf(j)` inside the support.
    fn ratio(&self, j: i64) -> f64 {
        let jf = j as f64;
        match self.family {
            Family::Binomial { n, p } => (n as f64 - jf) / (jf + 1.0) * (p / (1.0 - p)),
            Family::Hypergeometric { population, successes, draws } => {
                let (big_n, k, n) = (population as f64, successes as f64, draws as f64);
                (k - jf) * (n - jf) / ((jf + 1.0) * (big_n - k - n + jf + 1.0))
            }
            Family::Poisson { lambda } => lambda / (jf + 1.0),
        }
    }

    /// `P(X <= k)` summed directly over `support_min ..= k`.
    fn lower_sum(&self, k: i64) -> f64 {
        self.lower_terms(k, self.pmf(k))
    }

    /// `P(X <= k) / pmf(k)` when `start` is 1; the walk is the same.
    fn lower_terms(&self, k: i64, start: f64) -> f64 {
        let lo = self.support_min();
        if k < lo {
            return 0.0;
        }
        let mut terms = Vec::new();
        let mut t = start;
        let mut acc = 0.0;
        let mut j = k;
        loop {
            terms.push(t);
            acc += t;
            if j == lo {
                break;
            }
            // Terms are nonincreasing from k downward; bound the rest by
            // (number of remaining terms) * current term.
            if t * (j - lo) as f64 <= acc * 1e-18 {
                break;
            }
            j -= 1;
            t /= self.ratio(j);
        }
        terms.iter().rev().sum()
    }

    /// `P(X >= k)` summed directly over `k ..`.
    fn upper_sum(&self, k: i64) -> f64 {
        let k = k.max(self.support_min());
        self.upper_terms(k, self.pmf(k))
    }

    /// `P(X >= k) / pmf(k)` when `start` is 1, for `k` on or above the support minimum.
    fn upper_terms(&self, k: i64, start: f64) -> f64 {
        let hi = self.support_max();
        if let Some(h) = hi {
            if k > h {
                return 0.0;
            }
        }
        let mut terms = Vec::new();
        let mut t = start;
        let mut acc = 0.0;
        let mut j = k;
        loop {
            terms.push(t);
            acc += t;
            if Some(j) == hi {
                break;
            }
            let r = self.ratio(j);
            let remaining = match hi {
                Some(h) => (h - j) as f64,
                None if r < 1.0 => r / (1.0 - r),
                None => f64::INFINITY,
            };
            if t * remaining <= acc * 1e-18 || (t == 0.0 && acc > 0.0) {
                break;
            }
            t *= r;
            j += 1;
        }
        terms.iter().rev().sum()
    }

    /// Distribution function `P(X <= k)`.
    pub fn cdf(&self, k: i64) -> f64 {
        if k < self.support_min() {
            return 0.0;
        }
        if let Some(hi) = self.support_max() {
            if k >= hi {
                return 1.0;
            }
        }
        if (k as f64) < self.mean() {
            self.lower_sum(k)
        } else {
            1.0 - self.upper_sum(k + 1)
        }
    }

    /// Survival function `P(X > k)`.
    pub fn sf(&self, k: i64) -> f64 {
        if k < self.support_min() {
            return 1.0;
        }
        if let Some(hi) = self.support_max() {
            if k >= hi {
                return 0.0;
            }
        }
        if ((k + 1) as f64) > self.mean() {
            self.upper_sum(k + 1)
        } else {
            1.0 - self.lower_sum(k)
        }
    }

    /// `ln P(X <= k)`, finite on the support even where `cdf(k)` underflows.
    pub fn ln_cdf(&self, k: i64) -> f64 {
        let c = self.cdf(k);
        if c >= LOG_DOMAIN_BELOW || k < self.support_min() {
            return c.ln();
        }
        self.ln_pmf(k) + self.lower_terms(k, 1.0).ln()
    }

    /// `ln P(X > k)`, finite wherever `P(X > k) > 0` even if `sf(k)` underflows.
    pub fn ln_sf(&self, k: i64) -> f64 {
        let s = self.sf(k);
        if s >= LOG_DOMAIN_BELOW || self.support_max().is_some_and(|hi| k >= hi) {
            return s.ln();
        }
        let k = (k + 1).max(self.support_min());
        self.ln_pmf(k) + self.upper_terms(k, 1.0).ln()
    }

    /// `P(X >= k)`.
    pub fn upper_tail(&self, k: i64) -> f64 {
        self.sf(k - 1)
    }

    /// Mass of the integers contained in `interval`.
    pub fn interval_mass(&self, interval: &LatticeInterval) -> f64 {
        if interval.is_empty() {
            return 0.0;
        }
        let lo = interval.first_integer().map_or(self.support_min(), |k| k.max(self.support_min()));
        let hi = match (interval.last_integer(), self.support_max()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, b) => b,
        };
        if let Some(h) = hi {
            if lo > h {
                return 0.0;
            }
        }
        let mean = self.mean();
        match hi {
            // Summing upward from below the mean can start on an underflowed
            // point mass; take the complement there instead.
            None if (lo as f64) <= mean => (1.0 - self.lower_sum(lo - 1)).clamp(0.0, 1.0),
            None => self.upper_sum(lo),
            Some(h) if (h as f64) < mean => self.lower_sum(h) - self.lower_sum(lo - 1),
            Some(h) if (lo as f64) > mean => self.upper_sum(lo) - self.upper_sum(h + 1),
            Some(h) => {
                let mass = 1.0 - self.lower_sum(lo - 1) - self.upper_sum(h + 1);
                mass.clamp(0.0, 1.0)
            }
        }
    }

    /// Point masses, distribution function and survival function over the
    /// (truncated) support.
    ///
    /// Poisson tables run to at least `mu + 9 sigma`, so the normal mass
    /// beyond the last point is negligible as well.
    pub fn tabulate(&self) -> LawTable {
        let lo = self.support_min();
        let (hi, tail) = match self.family {
            Family::Poisson { .. } => {
                let (m, _) = self.truncation();
                let hi = m.max((self.mean() + 9.0 * self.sd()).ceil() as i64);
                (hi, self.upper_sum(hi + 1))
            }
            _ => self.truncation(),
        };
        let pmf: Vec<f64> = (lo..=hi).map(|k| self.pmf(k)).collect();
        LawTable::assemble(lo, pmf, tail, self.mean(), self.sd())
    }
}

/// Smallest `m` with `P(X > m) < POISSON_TAIL_CUTOFF`, and that tail mass.
fn poisson_truncation(lambda: f64) -> (i64, f64) {
    let law = DiscreteLaw { family: Family::Poisson { lambda } };
    let mut m = (lambda + 10.0 * lambda.sqrt() + 10.0).ceil() as i64;
    while law.upper_sum(m + 1) < POISSON_TAIL_CUTOFF && m > 0 {
        m -= 1;
    }
    while law.upper_sum(m + 1) >= POISSON_TAIL_CUTOFF {
        m += 1;
    }
    (m, law.upper_sum(m + 1))
}

/// A law tabulated on consecutive integers `offset ..= offset + len - 1`.
///
/// Besides the three families this also represents arbitrary finitely
/// supported lattice laws built from weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LawTable {
    offset: i64,
    pmf: Vec<f64>,
    /// `cdf[i] = P(X <= offset + i)`, prefix sums.
    cdf: Vec<f64>,
    /// `sf[i] = P(X > offset + i)`, suffix sums plus any truncated tail.
    sf: Vec<f64>,
    tail: f64,
    mean: f64,
    sd: f64,
}

impl LawTable {
    fn assemble(offset: i64, pmf: Vec<f64>, tail: f64, mean: f64, sd: f64) -> Self {
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for &w in &pmf {
            acc += w;
            cdf.push(acc);
        }
        let mut sf = vec![0.0; pmf.len()];
        let mut acc = tail;
        for i in (0..pmf.len()).rev() {
            sf[i] = acc;
            acc += pmf[i];
        }
        Self { offset, pmf, cdf, sf, tail, mean, sd }
    }

    /// Law with `P(X = offset + i) = weights[i] / sum(weights)`.
    pub fn from_weights(offset: i64, weights: &[f64]) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be finite, nonnegative and nonempty".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter("weights sum to zero".into()));
        }
        let pmf: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mean: f64 = pmf.iter().enumerate().map(|(i, w)| (offset + i as i64) as f64 * w).sum();
        let var: f64 = pmf
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let d = (offset + i as i64) as f64 - mean;
                d * d * w
            })
            .sum();
        Ok(Self::assemble(offset, pmf, 0.0, mean, var.sqrt()))
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Largest tabulated point.
    pub fn last(&self) -> i64 {
        self.offset + self.pmf.len() as i64 - 1
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    /// Mass beyond the last tabulated point.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn pmf(&self, k: i64) -> f64 {
        if k < self.offset || k > self.last() {
            0.0
        } else {
            self.pmf[(k - self.offset) as usize]
        }
    }

    /// `P(X <= k)`.
    pub fn cdf(&self, k: i64) -> f64 {
        if k < self.offset {
            0.0
        } else if k > self.last() {
            1.0
        } else {
            self.cdf[(k - self.offset) as usize]
        }
    }

    /// `P(X > k)`.
    pub fn sf(&self, k: i64) -> f64 {
        if k < self.offset {
            1.0
        } else if k > self.last() {
            0.0
        } else {
            self.sf[(k - self.offset) as usize]
        }
    }

    /// `F(k) - G(x)` where `G` is the moment-matched normal distribution
    /// function, evaluated in whichever tail keeps both terms small.
    pub(crate) fn deviation(&self, k: i64, x: f64) -> f64 {
        let z = (x - self.mean) / self.sd;
        if z <= 0.0 {
            self.cdf(k) - crate::normal::phi_cdf(z)
        } else {
            phi_sf(z) - self.sf(k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn validation() {
        assert!(DiscreteLaw::binomial(0, 0.5).is_err());
        assert!(DiscreteLaw::binomial(3, 1.5).is_err());
        assert!(DiscreteLaw::binomial(3, f64::NAN).is_err());
        assert!(DiscreteLaw::hypergeometric(10, 11, 3).is_err());
        assert!(DiscreteLaw::hypergeometric(10, 4, 0).is_err());
        assert!(DiscreteLaw::hypergeometric(10, 4, 11).is_err());
        assert!(DiscreteLaw::poisson(0.0).is_err());
        assert!(DiscreteLaw::poisson(f64::INFINITY).is_err());
    }

    #[test]
    fn moments() {
        let b = DiscreteLaw::binomial(1, 0.5).unwrap();
        assert_eq!(b.mean_sd(), (0.5, 0.5));
        let d = DiscreteLaw::binomial(7, 0.0).unwrap();
        assert_eq!(d.mean_sd(), (0.0, 0.0));
        assert!(d.require_spread().is_err());
        let h = DiscreteLaw::hypergeometric(10, 4, 5).unwrap();
        let (mu, sd) = h.mean_sd();
        assert!(close(mu, 2.0, 1e-15));
        assert!(close(sd, (5.0 * 0.4 * 0.6 * 5.0 / 9.0f64).sqrt(), 1e-15));
        assert!(DiscreteLaw::hypergeometric(1, 1, 1).unwrap().is_degenerate());
        assert!(DiscreteLaw::hypergeometric(8, 3, 8).unwrap().is_degenerate());
    }

    #[test]
    fn point_masses() {
        let b = DiscreteLaw::binomial(2, 0.5).unwrap();
        assert!(close(b.pmf(1), 0.5, 1e-16));
        assert_eq!(b.pmf(-1), 0.0);
        assert_eq!(b.pmf(3), 0.0);
        let p = DiscreteLaw::poisson(0.5).unwrap();
        assert!(close(p.pmf(0), (-0.5f64).exp(), 1e-16));
        let h = DiscreteLaw::hypergeometric(10, 4, 5).unwrap();
        assert!(close(h.pmf(2), 6.0 * 20.0 / 252.0, 1e-15));
        let one = DiscreteLaw::binomial(4, 1.0).unwrap();
        assert_eq!((one.pmf(4), one.pmf(3)), (1.0, 0.0));
    }

    #[test]
    fn distribution_function_edges() {
        let b = DiscreteLaw::binomial(2, 0.5).unwrap();
        assert_eq!(b.cdf(2), 1.0);
        assert_eq!(b.cdf(-1), 0.0);
        assert!(close(b.cdf(0), 0.25, 1e-16));
        assert!(close(b.sf(0), 0.75, 1e-16));
        assert!(close(b.upper_tail(2), 0.25, 1e-16));
        let p = DiscreteLaw::poisson(3.0).unwrap();
        assert!(close(p.cdf(0), (-3.0f64).exp(), 1e-16));
        assert_eq!(p.sf(-1), 1.0);
    }

    #[test]
    fn deep_tails_keep_relative_precision() {
        let b = DiscreteLaw::binomial(100, 0.02).unwrap();
        // P(X = 100) = 0.02^100 is the whole upper tail above 99.
        let exact = 0.02f64.powi(100);
        assert!(((b.sf(99) - exact) / exact).abs() < 1e-12);
        let q = DiscreteLaw::binomial(100, 0.98).unwrap();
        assert!(((q.cdf(0) - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn interval_masses() {
        let b = DiscreteLaw::binomial(1, 0.5).unwrap();
        assert!(close(b.interval_mass(&LatticeInterval::singleton(0)), 0.5, 1e-16));
        for law in [
            DiscreteLaw::binomial(9, 0.3).unwrap(),
            DiscreteLaw::poisson(2.5).unwrap(),
            DiscreteLaw::hypergeometric(20, 7, 9).unwrap(),
        ] {
            assert!(close(law.interval_mass(&LatticeInterval::whole_line()), 1.0, 1e-15));
        }
        let b6 = DiscreteLaw::binomial(6, 0.4).unwrap();
        let i = LatticeInterval::open(1.5, 4.5).unwrap();
        let brute: f64 = (2..=4).map(|k| b6.pmf(k)).sum();
        assert!(close(b6.interval_mass(&i), brute, 1e-15));
        assert_eq!(b6.interval_mass(&LatticeInterval::open(2.0, 3.0).unwrap()), 0.0);
        assert_eq!(b6.interval_mass(&LatticeInterval::closed(7.0, 9.0).unwrap()), 0.0);
    }

    #[test]
    fn log_tails_past_underflow() {
        // 60-digit references, with p taken as the exact double.
        let b = DiscreteLaw::binomial(167, 0.01).unwrap();
        assert_eq!(b.sf(165), 0.0);
        assert!((b.ln_sf(165) / -759.350_246_914_198_634_087_1 - 1.0).abs() < 1e-14);
        assert_eq!(b.ln_sf(167), f64::NEG_INFINITY);
        let b = DiscreteLaw::binomial(300, 0.98).unwrap();
        assert!((b.ln_cdf(0) / -1_173.606_901_628_443_551_132 - 1.0).abs() < 1e-14);
        assert!((b.ln_cdf(2) / -1_155.112_045_655_313_555_648 - 1.0).abs() < 1e-14);
        assert_eq!(b.ln_cdf(-1), f64::NEG_INFINITY);
        let p = DiscreteLaw::poisson(1000.0).unwrap();
        assert!((p.ln_cdf(200) / -481.458_099_324_735_754_429_4 - 1.0).abs() < 1e-14);
        // Away from underflow the logs are plain logarithms.
        assert_eq!(p.ln_sf(1000), p.sf(1000).ln());
    }

    #[test]
    fn upper_rays_below_the_mean_with_underflowed_start() {
        // e^-2000 underflows, so P(X = 0) is 0 in f64.
        let p = DiscreteLaw::poisson(2000.0).unwrap();
        assert_eq!(p.pmf(0), 0.0);
        assert!(close(p.interval_mass(&LatticeInterval::whole_line()), 1.0, 1e-15));
        let ray = LatticeInterval::upper_ray(1950.0, true).unwrap();
        assert!(close(p.interval_mass(&ray), p.sf(1949), 1e-15));
        let far = LatticeInterval::upper_ray(2300.0, true).unwrap();
        assert!(close(p.interval_mass(&far), p.sf(2299), 1e-20));
    }

    #[test]
    fn poisson_truncation_point() {
        let law = DiscreteLaw::poisson(4.0).unwrap();
        let (m, tail) = law.truncation();
        assert!(tail < POISSON_TAIL_CUTOFF);
        assert!(law.upper_sum(m) >= POISSON_TAIL_CUTOFF);
    }

    #[test]
    fn tables_agree_with_direct_kernels() {
        for law in [
            DiscreteLaw::binomial(30, 0.37).unwrap(),
            DiscreteLaw::poisson(7.5).unwrap(),
            DiscreteLaw::hypergeometric(40, 15, 12).unwrap(),
        ] {
            let t = law.tabulate();
            for k in t.offset() - 1..=t.last() + 1 {
                assert!(close(t.cdf(k), law.cdf(k), 1e-14), "{law} k = {k}");
                assert!(close(t.sf(k), law.sf(k), 1e-14), "{law} k = {k}");
            }
        }
    }

    #[test]
    fn weighted_table() {
        let t = LawTable::from_weights(-1, &[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(t.mean(), 0.0);
        assert!(close(t.sd(), 0.5f64.sqrt(), 1e-16));
        assert!(close(t.cdf(0), 0.75, 1e-16));
        assert!(LawTable::from_weights(0, &[]).is_err());
        assert!(LawTable::from_weights(0, &[0.0, -1.0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let law = DiscreteLaw::hypergeometric(50, 20, 10).unwrap();
        let text = serde_json::to_string(&law).unwrap();
        assert_eq!(text, r#"{"family":"hypergeometric","population":50,"successes":20,"draws":10}"#);
        let back: DiscreteLaw = serde_json::from_str(&text).unwrap();
        assert_eq!(back, law);
        assert!(serde_json::from_str::<DiscreteLaw>(r#"{"family":"poisson","lambda":-1}"#).is_err());
    }
}
