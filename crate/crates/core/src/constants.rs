//! Numerical constants of the error bounds.
//!
//! Interval constants are for two-sided intervals; unbounded intervals get
//! half of them. Kolmogorov constants bound `sup |F - G|`.

use crate::normal::{inv_sqrt_2pi, phi_cdf};

/// Interval-probability constant valid for hypergeometric, binomial and Poisson laws.
pub const HYPERGEOMETRIC_INTERVAL: f64 = 0.6879;
/// Sharper interval-probability constant for binomial and Poisson laws.
pub const BINOMIAL_INTERVAL: f64 = 0.6379;
/// Uniform cap on the Kolmogorov distance between a law and its moment-matched normal.
pub const KOLMOGOROV_CAP: f64 = 0.5410;
/// Kolmogorov constant for hypergeometric (and general Bernoulli-convolution) laws.
pub const HYPERGEOMETRIC_KOLMOGOROV: f64 = 0.3440;
/// Kolmogorov constant for binomial and Poisson laws.
pub const BINOMIAL_KOLMOGOROV: f64 = 0.3190;

/// Berry-Esseen type constant for Bernoulli convolutions from which the
/// hypergeometric constants are rounded up (`0.3057 * 9 / 8`).
pub const BERNOULLI_CONVOLUTION_ESSEEN: f64 = 0.343_912_5;
/// Same for identically distributed summands (maximum of `0.3031 (1 - 2x^2 + 0.646 x)`).
pub const BINOMIAL_ESSEEN: f64 = 0.318_911_059_95;
/// Sharp value behind [`KOLMOGOROV_CAP`].
pub const KOLMOGOROV_CAP_SHARP: f64 = 0.540_936_5;

/// Lower limit for any constant replacing the interval constants, witnessed by
/// Poisson(1/2) on `{0}`: `1 / sqrt(2e)`.
pub fn interval_constant_floor() -> f64 {
    1.0 / (2.0 * std::f64::consts::E).sqrt()
}

/// Interval constant for symmetric binomial and hypergeometric laws, `1 / sqrt(2 pi)`.
pub fn symmetric_interval_constant() -> f64 {
    inv_sqrt_2pi()
}

/// Kolmogorov constant for symmetric laws, `1 / (2 sqrt(2 pi))`.
pub fn symmetric_kolmogorov_constant() -> f64 {
    0.5 * inv_sqrt_2pi()
}

/// Conjectured optimal Kolmogorov constant `2 / (3 sqrt(2 pi))` (reported only).
pub fn conjectured_kolmogorov_constant() -> f64 {
    2.0 / 3.0 * inv_sqrt_2pi()
}

/// `sigma * sup|F - G|` bound for binomial `p` in `[1/3, 2/3]`:
/// `(1/2 + |p - 1/2| / 3) / sqrt(2 pi)`.
pub fn near_half_coefficient(p: f64) -> f64 {
    (0.5 + (p - 0.5).abs() / 3.0) * inv_sqrt_2pi()
}

/// Its worst case over `[1/3, 2/3]`, `5 / (9 sqrt(2 pi))`.
pub fn near_half_coefficient_max() -> f64 {
    5.0 / 9.0 * inv_sqrt_2pi()
}

/// `sigma * sup|F - G|` bound for all binomial `p`:
/// `(3 + sqrt 10) / (6 sqrt(2 pi)) * (1/2 + 2 (p - 1/2)^2)`.
pub fn quadratic_coefficient(p: f64) -> f64 {
    let d = p - 0.5;
    (3.0 + 10f64.sqrt()) / 6.0 * inv_sqrt_2pi() * (0.5 + 2.0 * d * d)
}

/// Continuity-corrected symmetric binomial bound coefficient: the error is at
/// most `Phi(-3/sqrt 2) / sigma^2`.
pub fn continuity_corrected_coefficient() -> f64 {
    phi_cdf(-3.0 / std::f64::consts::SQRT_2)
}

/// Lower bound on the worst interval discrepancy of any lattice law with
/// standard deviation `sigma`: `1 / sqrt(1 + 12 sigma^2)`.
pub fn concentration_lower_bound(sigma: f64) -> f64 {
    1.0 / (1.0 + 12.0 * sigma * sigma).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounded_constants_dominate_sharp_ones() {
        assert!(HYPERGEOMETRIC_KOLMOGOROV >= BERNOULLI_CONVOLUTION_ESSEEN);
        assert!(HYPERGEOMETRIC_INTERVAL >= 2.0 * BERNOULLI_CONVOLUTION_ESSEEN);
        assert!(BINOMIAL_KOLMOGOROV >= BINOMIAL_ESSEEN);
        assert!(BINOMIAL_INTERVAL >= 2.0 * BINOMIAL_ESSEEN);
        assert!(KOLMOGOROV_CAP >= KOLMOGOROV_CAP_SHARP);
    }

    #[test]
    fn quadratic_coefficient_beats_binomial_constant_near_half() {
        // Crossover at |p - 1/2| = 0.3732...
        assert!(quadratic_coefficient(0.5 + 0.373) < BINOMIAL_KOLMOGOROV);
        assert!(quadratic_coefficient(0.5 + 0.3735) > BINOMIAL_KOLMOGOROV);
        assert!(quadratic_coefficient(0.5 - 0.373) < BINOMIAL_KOLMOGOROV);
    }

    #[test]
    fn near_half_worst_case() {
        assert!((near_half_coefficient(1.0 / 3.0) - near_half_coefficient_max()).abs() < 1e-16);
        assert!(near_half_coefficient(0.5) < near_half_coefficient_max());
    }
}
