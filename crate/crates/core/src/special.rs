//! Saddle-point building blocks for lattice point masses.
//!
//! Point masses are evaluated as `exp(-stirlerr - bd0) / sqrt(2 pi ...)`
//! (Loader's method), which keeps full relative precision where naive
//! log-gamma differences cancel.

use std::f64::consts::PI;

/// `ln Gamma(n + 1) - (n + 1/2) ln n + n - ln sqrt(2 pi)` at half-integers `0.5 ..= 15`.
const STIRLERR_HALVES: [f64; 31] = [
    0.0,
    0.153_426_409_720_027_345_291_383_9,
    0.081_061_466_795_327_258_219_670_26,
    0.054_814_121_051_917_653_896_138_7,
    0.041_340_695_955_409_294_093_822_08,
    0.033_162_873_519_936_287_485_110_51,
    0.027_677_925_684_998_339_148_789_29,
    0.023_746_163_656_297_495_971_330_28,
    0.020_790_672_103_765_093_111_522_77,
    0.018_488_450_532_673_185_230_779_36,
    0.016_644_691_189_821_192_163_194_87,
    0.015_134_973_221_917_378_873_513_84,
    0.013_876_128_823_070_747_998_745_73,
    0.012_810_465_242_920_226_924_250_66,
    0.011_896_709_945_891_770_095_055_72,
    0.011_104_559_758_206_917_326_630_76,
    0.010_411_265_261_972_096_497_478_57,
    0.009_799_416_126_158_803_298_390_373,
    0.009_255_462_182_712_732_917_728_637,
    0.008_768_700_134_139_385_462_955_047,
    0.008_330_563_433_362_871_256_469_319,
    0.007_934_114_564_314_020_547_249_562,
    0.007_573_675_487_951_840_794_972_024,
    0.007_244_554_301_320_383_179_546_197,
    0.006_942_840_107_209_529_865_664_153,
    0.006_665_247_032_707_682_442_356_181,
    0.006_408_994_188_004_207_068_439_631,
    0.006_171_712_263_039_457_647_534_605,
    0.005_951_370_112_758_847_735_624_416,
    0.005_746_216_513_010_115_682_026_102,
    0.005_554_733_551_962_801_371_038_69,
];

const S0: f64 = 1.0 / 12.0;
const S1: f64 = 1.0 / 360.0;
const S2: f64 = 1.0 / 1260.0;
const S3: f64 = 1.0 / 1680.0;
const S4: f64 = 1.0 / 1188.0;
const S5: f64 = 691.0 / 360_360.0;
const S6: f64 = 1.0 / 156.0;

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Error of Stirling's approximation to `ln n!`.
///
/// Exact table lookup for half-integers up to 15, asymptotic series beyond.
/// Callers only pass nonnegative integers or half-integers.
pub fn stirlerr(n: f64) -> f64 {
    if n <= 15.0 {
        let twice = n + n;
        if twice == twice.floor() {
            return STIRLERR_HALVES[twice as usize];
        }
        // Not reached for lattice arguments; fall back to the series, which
        // is still accurate to ~1e-10 for n > 1.
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - (S4 - (S5 - S6 / nn) / nn) / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / m) + m - x`, evaluated without cancellation when
/// `x` is close to `m`.
pub fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        if s.abs() < f64::MIN_POSITIVE {
            return s;
        }
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        return s;
    }
    x * (x / m).ln() + m - x
}

/// Binomial point mass `C(n, x) p^x q^(n-x)` with `q = 1 - p` supplied separately.
pub fn dbinom_raw(x: f64, n: f64, p: f64, q: f64) -> f64 {
    ln_dbinom_raw(x, n, p, q).exp()
}

/// Natural log of [`dbinom_raw`], finite where the mass itself underflows.
pub fn ln_dbinom_raw(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    if x == 0.0 {
        if n == 0.0 {
            return 0.0;
        }
        return if p < 0.1 { -bd0(n, n * q) - n * p } else { n * q.ln() };
    }
    if x == n {
        return if q < 0.1 { -bd0(n, n * p) - n * q } else { n * p.ln() };
    }
    if x < 0.0 || x > n {
        return f64::NEG_INFINITY;
    }
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
    let lf = LN_2PI + x.ln() + (-x / n).ln_1p();
    lc - 0.5 * lf
}

/// Poisson point mass `e^-lambda lambda^x / x!`.
pub fn dpois_raw(x: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return (-lambda).exp();
    }
    (-stirlerr(x) - bd0(x, lambda)).exp() / (2.0 * PI * x).sqrt()
}

/// Natural log of [`dpois_raw`].
pub fn ln_dpois_raw(x: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if x < 0.0 {
        return f64::NEG_INFINITY;
    }
    if x == 0.0 {
        return -lambda;
    }
    -stirlerr(x) - bd0(x, lambda) - 0.5 * (LN_2PI + x.ln())
}

/// Hypergeometric point mass: `x` successes in `draws` draws from an urn with
/// `successes` marked and `failures` unmarked balls.
pub fn dhyper_raw(x: f64, successes: f64, failures: f64, draws: f64) -> f64 {
    if x < 0.0 || x > successes || draws - x > failures || x > draws {
        return 0.0;
    }
    if draws == 0.0 {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    let total = successes + failures;
    let p = draws / total;
    let q = (total - draws) / total;
    let p1 = dbinom_raw(x, successes, p, q);
    let p2 = dbinom_raw(draws - x, failures, p, q);
    let p3 = dbinom_raw(draws, total, p, q);
    p1 * p2 / p3
}

/// Natural log of [`dhyper_raw`].
pub fn ln_dhyper_raw(x: f64, successes: f64, failures: f64, draws: f64) -> f64 {
    if x < 0.0 || x > successes || draws - x > failures || x > draws {
        return f64::NEG_INFINITY;
    }
    if draws == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let total = successes + failures;
    let p = draws / total;
    let q = (total - draws) / total;
    ln_dbinom_raw(x, successes, p, q) + ln_dbinom_raw(draws - x, failures, p, q) - ln_dbinom_raw(draws, total, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial(n: u32) -> f64 {
        (1..=n).map(|k| f64::from(k).ln()).sum()
    }

    #[test]
    fn stirlerr_table_matches_definition() {
        for n in 1..=15u32 {
            let nf = f64::from(n);
            let direct = ln_factorial(n) - (nf + 0.5) * nf.ln() + nf - 0.5 * LN_2PI;
            assert!((stirlerr(nf) - direct).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn stirlerr_series_is_continuous_with_table() {
        // 15.5 is past the table; value from a 40-digit evaluation.
        let frozen = 0.005_375_599_032_926_834_493_641_72;
        assert!((stirlerr(15.5) - frozen).abs() < 1e-16);
        let frozen_40 = 0.002_083_289_938_302_421_748_749;
        assert!((stirlerr(40.0) - frozen_40).abs() / frozen_40 < 1e-13);
    }

    #[test]
    fn bd0_agrees_with_naive_form_away_from_diagonal() {
        for &(x, m) in &[(3.0, 10.0), (50.0, 20.0), (1.0, 0.2)] {
            let naive: f64 = x * (x / m as f64).ln() + m - x;
            assert!((bd0(x, m) - naive).abs() < 1e-13 * naive.abs().max(1.0));
        }
        assert_eq!(bd0(7.0, 7.0), 0.0);
        // Close to the diagonal the naive form cancels, the series does not.
        let s = bd0(100.0, 100.5);
        let frozen = 0.001_245_848_896_092_638_789_78;
        assert!((s - frozen).abs() / frozen < 1e-13, "{s}");
    }

    #[test]
    fn point_masses_small_cases() {
        assert!((dbinom_raw(1.0, 2.0, 0.5, 0.5) - 0.5).abs() < 1e-16);
        assert!((dpois_raw(0.0, 0.5) - (-0.5f64).exp()).abs() < 1e-16);
        // C(4,2) C(6,3) / C(10,5) = 6 * 20 / 252
        assert!((dhyper_raw(2.0, 4.0, 6.0, 5.0) - 120.0 / 252.0).abs() < 1e-15);
        assert_eq!(dhyper_raw(5.0, 4.0, 6.0, 5.0), 0.0);
    }

    #[test]
    fn log_point_masses() {
        assert!((ln_dhyper_raw(2.0, 4.0, 6.0, 5.0) - (120.0f64 / 252.0).ln()).abs() < 1e-15);
        assert!((ln_dpois_raw(3.0, 2.0) - dpois_raw(3.0, 2.0).ln()).abs() < 1e-15);
        // 0.01^300 underflows; its log does not.
        let frozen = 300.0 * 0.01f64.ln();
        assert!(((ln_dbinom_raw(300.0, 300.0, 0.01, 0.99) - frozen) / frozen).abs() < 1e-15);
        assert_eq!(dbinom_raw(300.0, 300.0, 0.01, 0.99), 0.0);
        // 60-digit reference for ln(C(400, 390) 0.01^390 0.99^10).
        let frozen_mid = -1_751.420_044_319_898_063_904;
        assert!(((ln_dbinom_raw(390.0, 400.0, 0.01, 0.99) - frozen_mid) / frozen_mid).abs() < 1e-14);
        assert_eq!(ln_dpois_raw(1.0, 0.0), f64::NEG_INFINITY);
        assert_eq!(ln_dhyper_raw(5.0, 4.0, 6.0, 5.0), f64::NEG_INFINITY);
    }
}
