//! Normal approximations to interval probabilities with guaranteed error bounds.
//!
//! For a law with mean `mu` and standard deviation `sigma > 0`, the estimate
//! of `P(I)` for an interval with boundary points `a <= b` is
//! `Phi((b - mu) / sigma) - Phi((a - mu) / sigma)`. Whether the endpoints
//! belong to `I` does not enter the estimate; it only changes `P(I)`, and the
//! error bounds hold for every choice.

use crate::constants::{
    concentration_lower_bound, continuity_corrected_coefficient, near_half_coefficient,
    quadratic_coefficient, symmetric_interval_constant, symmetric_kolmogorov_constant,
    BINOMIAL_INTERVAL, BINOMIAL_KOLMOGOROV, HYPERGEOMETRIC_INTERVAL, HYPERGEOMETRIC_KOLMOGOROV,
    KOLMOGOROV_CAP,
};
use crate::error::{Error, Result};
use crate::interval::LatticeInterval;
use crate::kernels::{DiscreteLaw, Family};
use crate::normal::{phi_cdf, standardize};
use serde::{Deserialize, Serialize};

/// Which inequality produced an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// Empty interval or the whole line: estimate and probability coincide.
    Exact,
    /// Two probabilities never differ by more than 1.
    TrivialCap,
    /// `0.6879 / sigma`, any of the three families.
    Hypergeometric0_6879,
    /// `0.6379 / sigma`, binomial and Poisson.
    Binomial0_6379,
    /// Half the family interval constant, for unbounded intervals.
    OneSidedHalf,
    /// `0.5410`, uniform Kolmogorov cap.
    KolmogorovCap,
    /// Family Kolmogorov constant `0.3440 / sigma` or `0.3190 / sigma`.
    KolmogorovFamily,
    /// `(1/2 + |p - 1/2| / 3) / (sqrt(2 pi) sigma)`, binomial with `p` in `[1/3, 2/3]`.
    PCloseHalf,
    /// `(3 + sqrt 10) / (6 sqrt(2 pi)) (1/2 + 2 (p - 1/2)^2) / sigma`, binomial.
    JonaQuadratic,
    /// `Phi(-3/sqrt 2) / sigma^2` for symmetric binomial laws with
    /// continuity-corrected (half-integer) endpoints.
    #[serde(rename = "symmetric_cc")]
    SymmetricCC,
    /// `1 / (sqrt(2 pi) sigma)` for symmetric laws; rests on results outside
    /// this crate's own checks and is only used on request.
    SymmetricDensity,
}

/// A normal-approximation estimate with a guaranteed absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedApprox {
    pub estimate: f64,
    pub error_bound: f64,
    pub bound_source: BoundSource,
    /// `[estimate - error_bound, estimate + error_bound]` clipped to `[0, 1]`.
    pub bracket: (f64, f64),
}

impl CertifiedApprox {
    fn new(estimate: f64, error_bound: f64, bound_source: BoundSource) -> Self {
        let estimate = estimate.clamp(0.0, 1.0);
        let bracket = ((estimate - error_bound).max(0.0), (estimate + error_bound).min(1.0));
        Self { estimate, error_bound, bound_source, bracket }
    }
}

/// An upper bound on `sup_x |F(x) - G(x)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KolmogorovBound {
    pub value: f64,
    pub source: BoundSource,
}

/// Lower bounds guaranteed to be attained by some interval (two-sided) and
/// some point (one-sided, i.e. Kolmogorov distance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerGuarantee {
    pub two_sided: f64,
    pub one_sided: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ApproxOptions {
    /// Also consider the `1/sqrt(2 pi)` constant for symmetric laws.
    pub symmetric_density_constant: bool,
}

/// Smallest candidate; earlier entries win ties.
fn best(candidates: &[(f64, BoundSource)]) -> (f64, BoundSource) {
    let mut winner = candidates[0];
    for &c in &candidates[1..] {
        if c.0 < winner.0 {
            winner = c;
        }
    }
    winner
}

fn is_symmetric(law: &DiscreteLaw) -> bool {
    match law.family() {
        Family::Binomial { p, .. } => p == 0.5,
        Family::Hypergeometric { population, successes, draws } => {
            2 * successes == population || 2 * draws == population
        }
        Family::Poisson { .. } => false,
    }
}

/// Two-sided interval constant of the family: `(constant, source)`.
pub fn family_interval_constant(law: &DiscreteLaw) -> (f64, BoundSource) {
    match law.family() {
        Family::Hypergeometric { .. } => (HYPERGEOMETRIC_INTERVAL, BoundSource::Hypergeometric0_6879),
        Family::Binomial { .. } | Family::Poisson { .. } => {
            (BINOMIAL_INTERVAL, BoundSource::Binomial0_6379)
        }
    }
}

/// `min(1, c / sigma)` with the family constant `c`: the bound on the worst
/// two-sided interval discrepancy.
pub fn two_sided_certificate(law: &DiscreteLaw) -> Result<f64> {
    let sigma = law.require_spread()?;
    Ok((family_interval_constant(law).0 / sigma).min(1.0))
}

/// Normal estimate `Phi((b - mu) / sigma) - Phi((a - mu) / sigma)`.
pub fn normal_estimate(mu: f64, sigma: f64, interval: &LatticeInterval) -> f64 {
    if interval.is_empty() {
        return 0.0;
    }
    let za = standardize(interval.a(), mu, sigma);
    let zb = standardize(interval.b(), mu, sigma);
    // Subtract in the tail where both terms are small.
    let diff = if za >= 0.0 {
        phi_cdf(-za) - phi_cdf(-zb)
    } else {
        phi_cdf(zb) - phi_cdf(za)
    };
    diff.clamp(0.0, 1.0)
}

/// Certified approximation of `P(I)` with the default bound selection.
pub fn approx_interval(law: &DiscreteLaw, interval: &LatticeInterval) -> Result<CertifiedApprox> {
    approx_interval_with(law, interval, ApproxOptions::default())
}

pub fn approx_interval_with(
    law: &DiscreteLaw,
    interval: &LatticeInterval,
    options: ApproxOptions,
) -> Result<CertifiedApprox> {
    let sigma = law.require_spread()?;
    let mu = law.mean();
    let estimate = normal_estimate(mu, sigma, interval);
    if interval.is_empty() || interval.is_whole_line() {
        return Ok(CertifiedApprox::new(estimate, 0.0, BoundSource::Exact));
    }
    let (c, family_source) = family_interval_constant(law);
    let symmetric = options.symmetric_density_constant && is_symmetric(law);
    let mut candidates = Vec::with_capacity(6);
    if interval.is_unbounded() {
        candidates.push((c / (2.0 * sigma), BoundSource::OneSidedHalf));
        let k = kolmogorov_bound(law)?;
        candidates.push((k.value, k.source));
        if symmetric {
            candidates.push((symmetric_kolmogorov_constant() / sigma, BoundSource::SymmetricDensity));
        }
    } else {
        candidates.push((c / sigma, family_source));
        candidates.push((1.0, BoundSource::TrivialCap));
        if symmetric {
            candidates.push((symmetric_interval_constant() / sigma, BoundSource::SymmetricDensity));
        }
    }
    let (bound, source) = best(&candidates);
    Ok(CertifiedApprox::new(estimate, bound, source))
}

/// Continuity-corrected approximation for Binomial(n, 1/2) on an interval
/// whose finite endpoints are half-integers.
///
/// The error is at most `Phi(-3/sqrt 2) / sigma^2 = 4 Phi(-3/sqrt 2) / n`,
/// halved for unbounded intervals. To approximate `P({k, ..., l})` use
/// `a = k - 1/2`, `b = l + 1/2`.
pub fn cc_approx_symmetric(n: u64, interval: &LatticeInterval) -> Result<CertifiedApprox> {
    if n == 0 {
        return Err(Error::InvalidParameter("binomial needs n >= 1".into()));
    }
    for x in [interval.a(), interval.b()] {
        if x.is_finite() && (x + 0.5).fract() != 0.0 {
            return Err(Error::Domain(format!("endpoint {x} is not a half-integer")));
        }
    }
    let nf = n as f64;
    let mu = nf / 2.0;
    let sigma = nf.sqrt() / 2.0;
    let estimate = normal_estimate(mu, sigma, interval);
    if interval.is_empty() || interval.is_whole_line() {
        return Ok(CertifiedApprox::new(estimate, 0.0, BoundSource::Exact));
    }
    let mut bound = continuity_corrected_coefficient() / (sigma * sigma);
    if interval.is_unbounded() {
        bound *= 0.5;
    }
    Ok(CertifiedApprox::new(estimate, bound, BoundSource::SymmetricCC))
}

/// Smallest applicable upper bound on `sup_x |F(x) - G(x)|`.
pub fn kolmogorov_bound(law: &DiscreteLaw) -> Result<KolmogorovBound> {
    let sigma = law.require_spread()?;
    let mut candidates = vec![(KOLMOGOROV_CAP, BoundSource::KolmogorovCap)];
    match law.family() {
        Family::Hypergeometric { .. } => {
            candidates.push((HYPERGEOMETRIC_KOLMOGOROV / sigma, BoundSource::KolmogorovFamily));
        }
        Family::Poisson { .. } => {
            candidates.push((BINOMIAL_KOLMOGOROV / sigma, BoundSource::KolmogorovFamily));
        }
        Family::Binomial { p, .. } => {
            candidates.push((BINOMIAL_KOLMOGOROV / sigma, BoundSource::KolmogorovFamily));
            if (1.0 / 3.0..=2.0 / 3.0).contains(&p) {
                candidates.push((near_half_coefficient(p) / sigma, BoundSource::PCloseHalf));
            }
            candidates.push((quadratic_coefficient(p) / sigma, BoundSource::JonaQuadratic));
        }
    }
    let (value, source) = best(&candidates);
    Ok(KolmogorovBound { value, source })
}

/// `1 / sqrt(1 + 12 sigma^2)` and half of it.
pub fn lower_bound_guarantee(law: &DiscreteLaw) -> Result<LowerGuarantee> {
    let sigma = law.require_spread()?;
    let two_sided = concentration_lower_bound(sigma);
    Ok(LowerGuarantee { two_sided, one_sided: 0.5 * two_sided })
}
