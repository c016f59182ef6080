//! Bernoulli rate function `H`, its rational lower bound `G`, and the
//! normal sandwich `C(k) <= F(k) <= C(k + 1)` for binomial distribution
//! functions with `C(k) = Phi(sgn(k/n - p) sqrt(2 n H(k/n, p)))`.

use crate::error::{Error, Result};
use crate::kernels::DiscreteLaw;
use crate::normal::{ln_phi_cdf, phi_cdf};
use crate::special::bd0;
use serde::{Deserialize, Serialize};

/// Relative margin below which two probabilities are not told apart.
pub const STRICTNESS_TOLERANCE: f64 = 1e-11;
/// Relative margin for detecting `H == G`.
pub const EQUALITY_TOLERANCE: f64 = 1e-12;

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("p = {p} must lie in (0, 1)")))
    }
}

/// `H(u, p) = u log(u/p) + (1-u) log((1-u)/(1-p))`, infinite outside `[0, 1]`.
pub fn rate_h(u: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if u.is_nan() {
        return Err(Error::Domain("u is NaN".into()));
    }
    Ok(if !(0.0..=1.0).contains(&u) {
        f64::INFINITY
    } else if u == 0.0 {
        -(-p).ln_1p()
    } else if u == 1.0 {
        -p.ln()
    } else {
        // Each bd0 term is accurate near its diagonal; the `p - u` parts cancel
        // exactly between the two.
        bd0(u, p) + bd0(1.0 - u, 1.0 - p)
    })
}

/// `p(1-p) + ((1-2p)/3)(u-p)`, positive for `u` in `[0, 1]`.
pub fn denominator(u: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("u = {u} must lie in [0, 1]")));
    }
    Ok(p * (1.0 - p) + (1.0 - 2.0 * p) / 3.0 * (u - p))
}

/// `G(u, p) = (u-p)^2 / (2 (p(1-p) + ((1-2p)/3)(u-p)))`.
pub fn rate_g(u: f64, p: f64) -> Result<f64> {
    let d = denominator(u, p)?;
    let x = u - p;
    Ok(x * x / (2.0 * d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Strict,
    Equal,
    Violated,
}

/// A probability stored as both `P` and `1 - P`, each also as a logarithm so
/// that the smaller side stays comparable below the underflow threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoTail {
    pub lower: f64,
    pub upper: f64,
    pub ln_lower: f64,
    pub ln_upper: f64,
}

impl TwoTail {
    /// From linear values that are exact or far from underflow.
    pub fn from_linear(lower: f64, upper: f64) -> Self {
        Self { lower, upper, ln_lower: lower.ln(), ln_upper: upper.ln() }
    }

    pub fn value(self) -> f64 {
        if self.lower <= 0.5 {
            self.lower
        } else {
            1.0 - self.upper
        }
    }

    /// How `self <= other` holds.
    pub fn relation_to(self, other: TwoTail) -> Relation {
        // Compare on the side where both numbers are small.
        let (x, y) = if self.lower + other.lower <= self.upper + other.upper {
            (self.ln_lower, other.ln_lower)
        } else {
            (other.ln_upper, self.ln_upper)
        };
        if x == y {
            return Relation::Equal;
        }
        let margin = -(-STRICTNESS_TOLERANCE).ln_1p();
        if y - x > margin {
            Relation::Strict
        } else if x - y > margin {
            Relation::Violated
        } else {
            Relation::Equal
        }
    }
}

/// `Phi(w)` in two-tail form.
fn phi_two_tail(w: f64) -> TwoTail {
    TwoTail { lower: phi_cdf(w), upper: phi_cdf(-w), ln_lower: ln_phi_cdf(w), ln_upper: ln_phi_cdf(-w) }
}

/// `C(k)` in two-tail form.
pub fn zubkov_serov_c_tails(n: u64, p: f64, k: i64) -> Result<TwoTail> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if k < 0 {
        return Ok(TwoTail::from_linear(0.0, 1.0));
    }
    if k as u64 > n {
        return Ok(TwoTail::from_linear(1.0, 0.0));
    }
    let u = k as f64 / n as f64;
    let h = rate_h(u, p)?;
    let r = (2.0 * n as f64 * h).sqrt();
    let w = if u < p {
        -r
    } else if u > p {
        r
    } else {
        0.0
    };
    Ok(phi_two_tail(w))
}

/// `C(k) = Phi(sgn(k/n - p) sqrt(2 n H(k/n, p)))`.
pub fn zubkov_serov_c(n: u64, p: f64, k: i64) -> Result<f64> {
    Ok(zubkov_serov_c_tails(n, p, k)?.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub k: i64,
    pub c_k: f64,
    pub f_k: f64,
    pub c_next: f64,
    /// `C(k) <= F(k)`.
    pub lower: Relation,
    /// `F(k) <= C(k + 1)`.
    pub upper: Relation,
    pub lower_expected: Relation,
    pub upper_expected: Relation,
}

impl SandwichRow {
    pub fn ok(&self) -> bool {
        self.lower == self.lower_expected && self.upper == self.upper_expected
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub n: u64,
    pub p: f64,
    pub rows: Vec<SandwichRow>,
    /// Every row shows the expected strict/equal pattern.
    pub pattern_holds: bool,
    /// `F(0) > 2 C(0)`.
    pub origin_gap_holds: bool,
    /// `ln(F(0) / (2 C(0)))`.
    pub origin_log_ratio: f64,
}

/// Checks the sandwich for `k = -2, ..., n + 1`.
///
/// The left inequality is strict exactly for `k` in `0..=n`, the right one
/// exactly for `k` in `-1..n`; elsewhere both sides are 0 or 1.
pub fn sandwich_check(n: u64, p: f64) -> Result<SandwichReport> {
    let law = DiscreteLaw::binomial(n, p)?;
    check_p(p)?;
    let f = |k: i64| TwoTail { lower: law.cdf(k), upper: law.sf(k), ln_lower: law.ln_cdf(k), ln_upper: law.ln_sf(k) };
    let n_i = n as i64;
    let mut rows = Vec::with_capacity(n as usize + 4);
    for k in -2..=n_i + 1 {
        let c = zubkov_serov_c_tails(n, p, k)?;
        let c_next = zubkov_serov_c_tails(n, p, k + 1)?;
        let fk = f(k);
        let expect = |strict: bool| if strict { Relation::Strict } else { Relation::Equal };
        rows.push(SandwichRow {
            k,
            c_k: c.value(),
            f_k: fk.value(),
            c_next: c_next.value(),
            lower: c.relation_to(fk),
            upper: fk.relation_to(c_next),
            lower_expected: expect((0..=n_i).contains(&k)),
            upper_expected: expect((-1..n_i).contains(&k)),
        });
    }
    let pattern_holds = rows.iter().all(SandwichRow::ok);
    let origin_log_ratio = law.ln_cdf(0) - std::f64::consts::LN_2 - zubkov_serov_c_tails(n, p, 0)?.ln_lower;
    let origin_gap_holds = origin_log_ratio + (-STRICTNESS_TOLERANCE).ln_1p() > 0.0;
    Ok(SandwichReport { n, p, rows, pattern_holds, origin_gap_holds, origin_log_ratio })
}

/// How `G(u, p) <= H(u, p)` holds: equality is expected only at `u = p`.
pub fn janson_relation(u: f64, p: f64) -> Result<Relation> {
    let h = rate_h(u, p)?;
    let g = rate_g(u, p)?;
    let margin = EQUALITY_TOLERANCE * h.max(g);
    Ok(if h - g > margin {
        Relation::Strict
    } else if g - h > margin {
        Relation::Violated
    } else {
        Relation::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_function_values() {
        assert_eq!(rate_h(0.3, 0.3).unwrap(), 0.0);
        assert!((rate_h(0.0, 0.3).unwrap() - (1.0f64 / 0.7).ln()).abs() < 1e-16);
        assert!((rate_h(1.0, 0.3).unwrap() - (1.0f64 / 0.3).ln()).abs() < 1e-15);
        assert_eq!(rate_h(-0.1, 0.3).unwrap(), f64::INFINITY);
        assert_eq!(rate_h(1.5, 0.3).unwrap(), f64::INFINITY);
        assert!(rate_h(0.5, 1.0).is_err());
        // mpmath, 30 digits.
        let h = rate_h(0.9, 0.4).unwrap();
        assert!((h - 0.550_661_247_671_890_387_479_2).abs() < 1e-15);
    }

    #[test]
    fn janson_bound_values() {
        assert_eq!(rate_g(0.4, 0.4).unwrap(), 0.0);
        let g = rate_g(0.8, 0.5).unwrap();
        assert!((g - 2.0 * 0.3f64 * 0.3).abs() < 1e-16);
        let g = rate_g(0.9, 0.4).unwrap();
        // 0.25 / (2 (0.24 + 0.2/3 * 0.5))
        assert!((g - 0.25 / (2.0 * (0.24 + 0.1 / 3.0))).abs() < 1e-16);
        assert_eq!(janson_relation(0.9, 0.4).unwrap(), Relation::Strict);
        assert_eq!(janson_relation(0.4, 0.4).unwrap(), Relation::Equal);
        assert!(rate_g(1.2, 0.4).is_err());
    }

    #[test]
    fn c_values() {
        assert_eq!(zubkov_serov_c(10, 0.3, 3).unwrap(), 0.5);
        assert_eq!(zubkov_serov_c(10, 0.3, -1).unwrap(), 0.0);
        assert_eq!(zubkov_serov_c(10, 0.3, 11).unwrap(), 1.0);
        for k in -2..=12 {
            let a = zubkov_serov_c(10, 0.3, k).unwrap();
            let b = zubkov_serov_c(10, 0.7, 10 - k).unwrap();
            assert!((a - (1.0 - b)).abs() < 1e-15, "k = {k}");
        }
        // mpmath: Phi(sqrt(20 H(0.5, 0.3)))
        let c = zubkov_serov_c(10, 0.3, 5).unwrap();
        assert!((c - 0.906_654_157_948_302_846_4).abs() < 1e-13, "{c}");
    }

    #[test]
    fn sandwich_pattern() {
        let r = sandwich_check(25, 0.17).unwrap();
        assert!(r.pattern_holds, "{:?}", r.rows.iter().find(|x| !x.ok()));
        assert!(r.origin_gap_holds);
        let first = r.rows[0];
        assert_eq!((first.k, first.c_k, first.f_k), (-2, 0.0, 0.0));
        let at_n = r.rows.iter().find(|row| row.k == 25).unwrap();
        assert_eq!(at_n.f_k, 1.0);
        assert_eq!(at_n.lower, Relation::Strict);
        assert_eq!(at_n.upper, Relation::Equal);
    }

    #[test]
    fn extreme_tails_keep_strictness() {
        for p in [0.02, 0.98] {
            let r = sandwich_check(100, p).unwrap();
            assert!(r.pattern_holds && r.origin_gap_holds, "p = {p}");
        }
    }

    #[test]
    fn two_tail_comparison() {
        let a = TwoTail::from_linear(1.0, 1e-200);
        let b = TwoTail::from_linear(1.0, 0.0);
        assert_eq!(a.relation_to(b), Relation::Strict);
        assert_eq!(b.relation_to(a), Relation::Violated);
        assert_eq!(b.relation_to(b), Relation::Equal);
        // Both upper tails underflow; their logarithms still differ.
        let c = TwoTail { lower: 1.0, upper: 0.0, ln_lower: 0.0, ln_upper: -760.0 };
        let d = TwoTail { lower: 1.0, upper: 0.0, ln_lower: 0.0, ln_upper: -759.0 };
        assert_eq!(d.relation_to(c), Relation::Strict);
        assert_eq!(c.relation_to(d), Relation::Violated);
    }

    #[test]
    fn strictness_past_underflow() {
        // Tails beyond 1e-308 at both ends of the support.
        for (n, p) in [(167, 0.01), (300, 0.01), (300, 0.99), (300, 0.98)] {
            let r = sandwich_check(n, p).unwrap();
            let bad: Vec<_> = r.rows.iter().filter(|row| !row.ok()).map(|row| row.k).collect();
            assert!(bad.is_empty(), "n = {n}, p = {p}: {bad:?}");
            assert!(r.origin_gap_holds, "n = {n}, p = {p}");
        }
    }
}
