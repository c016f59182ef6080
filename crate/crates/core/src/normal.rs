//! Standard normal distribution function, density and quantile.
//!
//! `phi_cdf` is built on the fdlibm complementary error function (`libm`),
//! with the argument `x / sqrt 2` carried in double-double so the lower tail
//! keeps full relative precision down to the underflow threshold.

use crate::error::{Error, Result};
use crate::special::LN_2PI;

const FRAC_1_SQRT_2_HI: f64 = std::f64::consts::FRAC_1_SQRT_2;
const FRAC_1_SQRT_2_LO: f64 = -4.833_646_656_726_456_5e-17;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// `Phi(-t)` for `t >= 0`.
fn upper_tail(t: f64) -> f64 {
    if t == f64::INFINITY {
        return 0.0;
    }
    let s = t * FRAC_1_SQRT_2_HI;
    let s_lo = t.mul_add(FRAC_1_SQRT_2_HI, -s) + t * FRAC_1_SQRT_2_LO;
    let base = libm::erfc(s);
    // First-order correction for the rounding of t / sqrt 2.
    let corr = s_lo * FRAC_2_SQRT_PI * (-s * s).exp();
    0.5 * (base - corr)
}

/// Standard normal distribution function.
///
/// `phi_cdf(-x)` and `1 - phi_cdf(x)` agree to the last bit by construction:
/// both sides are derived from the same tail evaluation.
pub fn phi_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        upper_tail(-x)
    } else {
        1.0 - upper_tail(x)
    }
}

/// Upper tail `1 - Phi(x)`, accurate in relative terms for large `x`.
pub fn phi_sf(x: f64) -> f64 {
    phi_cdf(-x)
}

/// Below this a probability is compared through its logarithm.
pub(crate) const LOG_DOMAIN_BELOW: f64 = 1e-280;

/// `ln Phi(x)`, finite for every finite `x` even where `Phi(x)` underflows.
pub fn ln_phi_cdf(x: f64) -> f64 {
    let p = phi_cdf(x);
    if p >= LOG_DOMAIN_BELOW || x.is_nan() || x == f64::NEG_INFINITY {
        return p.ln();
    }
    // ln phi(t) + ln R(t) at t = -x > 35.
    let t = -x;
    let hi = t * t;
    let lo = t.mul_add(t, -hi);
    -0.5 * hi - 0.5 * lo - 0.5 * LN_2PI + mills_ratio(t).ln()
}

/// Standard normal density.
pub fn phi_pdf(x: f64) -> f64 {
    if !x.is_finite() {
        return if x.is_nan() { f64::NAN } else { 0.0 };
    }
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    FRAC_1_SQRT_2PI * (-0.5 * hi).exp() * (1.0 - 0.5 * lo)
}

// Rational initial approximation (Acklam), relative error ~1.2e-9.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_690e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

/// Initial guess for the quantile of a lower-tail probability `q <= 1/2`.
fn initial_lower_quantile(q: f64) -> f64 {
    const Q_LOW: f64 = 0.024_25;
    if q < Q_LOW {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    } else {
        let r = q - 0.5;
        let s = r * r;
        (((((A[0] * s + A[1]) * s + A[2]) * s + A[3]) * s + A[4]) * s + A[5]) * r
            / (((((B[0] * s + B[1]) * s + B[2]) * s + B[3]) * s + B[4]) * s + 1.0)
    }
}

/// Quantile for a lower-tail probability `q` in `(0, 1/2]`, refined by Halley steps.
fn lower_quantile(q: f64) -> f64 {
    let mut x = initial_lower_quantile(q);
    for _ in 0..3 {
        let err = phi_cdf(x) - q;
        if err == 0.0 {
            break;
        }
        let density = phi_pdf(x);
        if density == 0.0 {
            break;
        }
        let u = err / density;
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// Standard normal quantile `Phi^-1(beta)` for `0 < beta < 1`.
pub fn phi_quantile(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {beta}")));
    }
    if beta == 0.5 {
        return Ok(0.0);
    }
    if beta < 0.5 {
        Ok(lower_quantile(beta))
    } else {
        // 1 - beta is exact for beta >= 1/2.
        Ok(-lower_quantile(1.0 - beta))
    }
}

/// Whether `Phi(-z) < phi(z) / z` holds numerically at `z > 0`.
pub fn tail_inequality_check(z: f64) -> Result<bool> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("tail inequality needs finite z > 0, got {z}")));
    }
    if z < 5.0 {
        return Ok(phi_sf(z) < phi_pdf(z) / z);
    }
    // Both sides underflow near z = 38; compare z * Phi(-z) / phi(z) with 1.
    Ok(z * mills_ratio(z) < 1.0)
}

/// Mills ratio `Phi(-z) / phi(z)` for `z >= 5` by its continued fraction.
fn mills_ratio(z: f64) -> f64 {
    // R(z) = 1 / (z + 1 / (z + 2 / (z + 3 / (z + ...)))), evaluated bottom-up.
    let mut tail = z;
    for k in (1..=60).rev() {
        tail = z + f64::from(k) / tail;
    }
    1.0 / tail
}

/// Tolerance for `phi_quantile(phi_cdf(x)) == x`: `1e-9` plus the shift of
/// `x` caused by rounding `Phi(x)` to the nearest double.
pub fn inversion_tolerance(x: f64) -> f64 {
    let p = phi_cdf(x);
    let half_ulp = 0.5 * (f64::from_bits(p.to_bits() + 1) - p);
    1e-9 + half_ulp / phi_pdf(x)
}

/// `1 / sqrt(2 pi)`.
pub const fn inv_sqrt_2pi() -> f64 {
    FRAC_1_SQRT_2PI
}

/// `(x - mu) / sigma`, passing infinities through unchanged.
pub(crate) fn standardize(x: f64, mu: f64, sigma: f64) -> f64 {
    if x.is_infinite() {
        x
    } else {
        (x - mu) / sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Reference values from 40-digit evaluations.
    const PHI_1_2: f64 = 0.884_930_329_778_291_731_977_78;
    const PHI_NEG_3_OVER_SQRT2: f64 = 0.016_947_426_762_344_636_466_511_87;
    const PDF_2: f64 = 0.053_990_966_513_188_051_950_564_2;
    const Q_975: f64 = 1.959_963_984_540_054_235_524_594;
    const PHI_NEG_8: f64 = 6.220_960_574_271_784_123_515_995e-16;
    const PHI_NEG_30: f64 = 4.906_713_927_148_187_059_533_809e-198;

    #[test]
    fn cdf_reference_points() {
        assert_eq!(phi_cdf(0.0), 0.5);
        assert!((phi_cdf(1.2) - PHI_1_2).abs() <= 1e-15);
        let x = -3.0 / 2f64.sqrt();
        assert!((phi_cdf(x) - PHI_NEG_3_OVER_SQRT2).abs() <= 1e-15);
        assert!(((phi_cdf(-8.0) - PHI_NEG_8) / PHI_NEG_8).abs() < 1e-14);
        assert!(((phi_cdf(-30.0) - PHI_NEG_30) / PHI_NEG_30).abs() < 1e-13);
        assert_eq!(phi_cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(phi_cdf(f64::INFINITY), 1.0);
    }

    #[test]
    fn log_cdf_past_underflow() {
        // 40-digit references for ln Phi(x).
        for (x, frozen) in [
            (-35.6, -638.172_071_662_407_708_793_4),
            (-38.945, -762.938_259_664_842_620_409_9),
            (-40.0, -804.608_442_013_753_788_166_6),
            (-100.0, -5_005.524_208_694_205_088_627),
        ] {
            assert!(((ln_phi_cdf(x) - frozen) / frozen).abs() < 1e-15, "x = {x}");
        }
        assert_eq!(ln_phi_cdf(-30.0), phi_cdf(-30.0).ln());
        assert_eq!(ln_phi_cdf(f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert_eq!(ln_phi_cdf(50.0), 0.0);
    }

    #[test]
    fn cdf_symmetry_and_monotonicity() {
        let mut prev = 0.0;
        for i in -8000..=8000 {
            let x = f64::from(i) * 1e-3;
            let v = phi_cdf(x);
            assert!((v + phi_cdf(-x) - 1.0).abs() <= 1e-15, "x = {x}");
            assert!(v >= prev, "not monotone at {x}");
            prev = v;
        }
    }

    #[test]
    fn pdf_reference_points() {
        assert!((phi_pdf(0.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-17);
        assert!(((phi_pdf(2.0) - PDF_2) / PDF_2).abs() <= 1e-15);
        assert_eq!(phi_pdf(1.7), phi_pdf(-1.7));
        assert!((inv_sqrt_2pi() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-17);
    }

    #[test]
    fn quantile_reference_points() {
        assert_eq!(phi_quantile(0.5).unwrap(), 0.0);
        assert!((phi_quantile(0.975).unwrap() - Q_975).abs() < 1e-14);
        let z = phi_quantile(0.95).unwrap();
        let k = z * (1.0 + z * z / 9.0).sqrt() + 1.0 + z * z / 3.0;
        assert!((k - 3.777).abs() < 1e-3 && k > 3.777);
        assert!(phi_quantile(0.0).is_err());
        assert!(phi_quantile(1.0).is_err());
        assert!(phi_quantile(f64::NAN).is_err());
    }

    #[test]
    fn quantile_residuals() {
        for i in 1..1000 {
            let beta = f64::from(i) / 1000.0;
            let z = phi_quantile(beta).unwrap();
            assert!((phi_cdf(z) - beta).abs() <= 1e-13, "beta = {beta}");
        }
        for &beta in &[1e-10, 1e-300, 1.0 - 1e-12] {
            let z = phi_quantile(beta).unwrap();
            let rel = if beta < 0.5 {
                (phi_cdf(z) - beta) / beta
            } else {
                phi_cdf(z) - beta
            };
            assert!(rel.abs() < 1e-12, "beta = {beta}");
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for i in -600..=600 {
            let x = f64::from(i) * 0.01;
            let back = phi_quantile(phi_cdf(x)).unwrap();
            assert!((back - x).abs() <= inversion_tolerance(x), "x = {x}");
            if x <= 5.0 {
                assert!((back - x).abs() < 1e-9, "x = {x}");
            }
        }
    }

    #[test]
    fn mills_ratio_matches_direct_ratio() {
        for &z in &[5.0, 7.5, 12.0, 20.0] {
            let direct = phi_sf(z) / phi_pdf(z);
            assert!(((mills_ratio(z) - direct) / direct).abs() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn tail_inequality_on_log_grid() {
        assert!(tail_inequality_check(1.0).unwrap());
        assert!(tail_inequality_check(10.0).unwrap());
        assert!(tail_inequality_check(0.01).unwrap());
        for i in 0..=400 {
            let z = 1e-4 * (40.0f64 / 1e-4).powf(f64::from(i) / 400.0);
            assert!(tail_inequality_check(z).unwrap(), "z = {z}");
        }
        assert!(tail_inequality_check(0.0).is_err());
        assert!(tail_inequality_check(-1.0).is_err());
    }
}
