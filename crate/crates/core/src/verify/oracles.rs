//! Slow reference computations the fast paths are checked against.

use crate::approx::normal_estimate;
use crate::interval::LatticeInterval;
use crate::kernels::DiscreteLaw;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Worst interval discrepancy by enumerating every interval with integer
/// endpoints in `[lo - 1, hi + 1]` (all four closure choices), every ray and
/// the whole line, summing point masses directly.
pub fn brute_force_max_discrepancy(law: &DiscreteLaw) -> f64 {
    let (mu, sigma) = law.mean_sd();
    let lo = law.support_min();
    let hi = law.truncation().0;
    let pmf: Vec<f64> = (lo..=hi).map(|k| law.pmf(k)).collect();
    let mass = |i: &LatticeInterval| -> f64 {
        pmf.iter()
            .enumerate()
            .filter(|(j, _)| i.contains((lo + *j as i64) as f64))
            .map(|(_, w)| w)
            .sum()
    };
    let err = |i: &LatticeInterval| (mass(i) - normal_estimate(mu, sigma, i)).abs();
    let mut best = 0.0f64;
    for a in lo - 1..=hi + 1 {
        let af = a as f64;
        for closed in [true, false] {
            best = best.max(err(&LatticeInterval::lower_ray(af, closed).unwrap()));
            best = best.max(err(&LatticeInterval::upper_ray(af, closed).unwrap()));
        }
        for b in a..=hi + 1 {
            for lc in [true, false] {
                for rc in [true, false] {
                    let i = LatticeInterval::new(af, b as f64, lc, rc).unwrap();
                    best = best.max(err(&i));
                }
            }
        }
    }
    best
}

/// Extremes of `F(x) - G(x)` and of the left limits `F(x-) - G(x)` over the
/// grid `x = i / per_unit`, `from <= i <= to`: `(max, min)`.
pub fn dense_grid_deviation(law: &DiscreteLaw, from: i64, to: i64, per_unit: i64) -> (f64, f64) {
    let (mu, sigma) = law.mean_sd();
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for i in from..=to {
        let x = i as f64 / per_unit as f64;
        let g = crate::normal::phi_cdf((x - mu) / sigma);
        let at = law.cdf(x.floor() as i64) - g;
        let left = law.cdf(x.ceil() as i64 - 1) - g;
        hi = hi.max(at).max(left);
        lo = lo.min(at).min(left);
    }
    (hi, lo)
}

fn binomial_coefficient(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// A probability `num / den` given exactly.
pub fn exact_probability(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binomial point masses `C(n, k) p^k (1-p)^(n-k)`, `k = 0..=n`.
pub fn binomial_pmf_exact(n: u64, p: &BigRational) -> Vec<BigRational> {
    let q = BigRational::one() - p;
    (0..=n)
        .map(|k| {
            let c = BigRational::from_integer(binomial_coefficient(n, k));
            c * num_traits::pow(p.clone(), k as usize) * num_traits::pow(q.clone(), (n - k) as usize)
        })
        .collect()
}

/// Exact hypergeometric point masses for `k = 0..=draws` (zero outside the support).
pub fn hypergeometric_pmf_exact(population: u64, successes: u64, draws: u64) -> Vec<BigRational> {
    let total = binomial_coefficient(population, draws);
    (0..=draws)
        .map(|k| {
            if k > successes || draws - k > population - successes {
                BigRational::zero()
            } else {
                let num = binomial_coefficient(successes, k) * binomial_coefficient(population - successes, draws - k);
                BigRational::new(num, total.clone())
            }
        })
        .collect()
}

/// Prefix sums of exact point masses.
pub fn cumulative(pmf: &[BigRational]) -> Vec<BigRational> {
    let mut acc = BigRational::zero();
    pmf.iter()
        .map(|w| {
            acc += w;
            acc.clone()
        })
        .collect()
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergeometric_example() {
        let pmf = hypergeometric_pmf_exact(10, 4, 5);
        // C(4,2) C(6,3) / C(10,5) = 6 * 20 / 252
        assert_eq!(pmf[2], BigRational::new(BigInt::from(120), BigInt::from(252)));
        let law = DiscreteLaw::hypergeometric(10, 4, 5).unwrap();
        assert!((law.pmf(2) - 120.0 / 252.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_cdf_example() {
        let pmf = binomial_pmf_exact(10, &exact_probability(3, 10));
        let cdf = cumulative(&pmf);
        let law = DiscreteLaw::binomial(10, 0.3).unwrap();
        assert!((law.cdf(4) - to_f64(&cdf[4])).abs() < 1e-15);
        assert_eq!(cdf[10], BigRational::one());
    }

    #[test]
    fn brute_force_coin_flip() {
        let law = DiscreteLaw::binomial(1, 0.5).unwrap();
        let v = brute_force_max_discrepancy(&law);
        assert!((v - (2.0 * crate::normal::phi_cdf(1.0) - 1.0)).abs() < 1e-15);
    }
}
