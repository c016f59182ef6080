use normcert::approx::{approx_interval, kolmogorov_bound, lower_bound_guarantee, normal_estimate};
use normcert::clopper_pearson::{binomial_upper_tail, cp_brackets, cp_lower_exact, cp_upper_exact, CpQuery};
use normcert::extremal::max_interval_discrepancy;
use normcert::normal::{inversion_tolerance, phi_cdf, phi_quantile};
use normcert::rate::{janson_relation, rate_g, rate_h, sandwich_check, Relation};
use normcert::verify::oracles::brute_force_max_discrepancy;
use normcert::{DiscreteLaw, LatticeInterval};
use proptest::prelude::*;

fn law() -> impl Strategy<Value = DiscreteLaw> {
    prop_oneof![
        (1u64..=300, 1u32..100).prop_map(|(n, p)| DiscreteLaw::binomial(n, f64::from(p) / 100.0).unwrap()),
        (1u64..=120, any::<prop::sample::Index>(), any::<prop::sample::Index>()).prop_map(|(pop, k, d)| {
            let successes = k.index(pop as usize + 1) as u64;
            let draws = d.index(pop as usize) as u64 + 1;
            DiscreteLaw::hypergeometric(pop, successes, draws).unwrap()
        }),
        (1u32..=1000).prop_map(|l| DiscreteLaw::poisson(f64::from(l) / 10.0).unwrap()),
    ]
}

fn spread_law() -> impl Strategy<Value = DiscreteLaw> {
    law().prop_filter("needs sigma > 0", |l| !l.is_degenerate())
}

/// Intervals with integer, half-integer or infinite endpoints and random closure.
fn interval() -> impl Strategy<Value = LatticeInterval> {
    let end = prop_oneof![
        1 => Just(f64::NEG_INFINITY),
        1 => Just(f64::INFINITY),
        8 => (-20i32..=420).prop_map(|h| f64::from(h) / 2.0),
    ];
    (end.clone(), end, any::<bool>(), any::<bool>()).prop_filter_map("ordered", |(a, b, l, r)| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        LatticeInterval::new(a, b, l || a.is_infinite(), r || b.is_infinite()).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn phi_symmetry(x in -8.0f64..8.0) {
        prop_assert!((phi_cdf(x) + phi_cdf(-x) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn log_tails_sum_point_masses(n in 1u64..=400, p in 1u32..200, k in 0i64..=400) {
        let law = DiscreteLaw::binomial(n, f64::from(p) / 200.0).unwrap();
        let k = k.min(n as i64);
        let log_sum = |ks: Vec<i64>| {
            let logs: Vec<f64> = ks.into_iter().map(|j| law.ln_pmf(j)).collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
        };
        let lower = log_sum((0..=k).collect());
        prop_assert!((law.ln_cdf(k) - lower).abs() <= 1e-12 * lower.abs().max(1.0), "{} vs {}", law.ln_cdf(k), lower);
        if k < n as i64 {
            let upper = log_sum((k + 1..=n as i64).collect());
            prop_assert!((law.ln_sf(k) - upper).abs() <= 1e-12 * upper.abs().max(1.0), "{} vs {}", law.ln_sf(k), upper);
        }
    }

    #[test]
    fn phi_monotone(x in -40.0f64..40.0, h in 0.0f64..1.0) {
        prop_assert!(phi_cdf(x) <= phi_cdf(x + h));
    }

    #[test]
    fn quantile_inverts_cdf(x in -6.0f64..6.0) {
        let back = phi_quantile(phi_cdf(x)).unwrap();
        prop_assert!((back - x).abs() <= inversion_tolerance(x));
    }

    #[test]
    fn quantile_residual(beta in 1e-300f64..1.0) {
        let q = phi_quantile(beta).unwrap();
        prop_assert!((phi_cdf(q) - beta).abs() <= 1e-13, "beta = {}", beta);
    }

    #[test]
    fn cdf_increments_are_point_masses(l in law(), i in any::<prop::sample::Index>()) {
        let lo = l.support_min();
        let (hi, _) = l.truncation();
        let k = lo + i.index((hi - lo + 1) as usize) as i64;
        prop_assert!((l.cdf(k) - l.cdf(k - 1) - l.pmf(k)).abs() <= 1e-13);
        prop_assert!((l.cdf(k) + l.sf(k) - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn interval_mass_is_monotone(l in law(), outer in interval(), shrink_a in 0u8..4, shrink_b in 0u8..4) {
        let a = if outer.a().is_finite() { outer.a() + f64::from(shrink_a) / 2.0 } else { outer.a() };
        let b = if outer.b().is_finite() { outer.b() - f64::from(shrink_b) / 2.0 } else { outer.b() };
        prop_assume!(a <= b);
        let inner = LatticeInterval::new(a, b, outer.left_closed() && shrink_a == 0, outer.right_closed() && shrink_b == 0).unwrap();
        prop_assert!(l.interval_mass(&inner) <= l.interval_mass(&outer) + 1e-15);
    }

    #[test]
    fn certificate_covers_true_probability(l in spread_law(), i in interval()) {
        let c = approx_interval(&l, &i).unwrap();
        let truth = l.interval_mass(&i);
        prop_assert!((truth - c.estimate).abs() <= c.error_bound + 1e-14, "{} on {:?}: {:?}", l, i, c);
        prop_assert!(c.bracket.0 <= truth + 1e-14 && truth <= c.bracket.1 + 1e-14);
    }

    #[test]
    fn estimate_ignores_closure(l in spread_law(), i in interval()) {
        let (mu, sigma) = l.mean_sd();
        let flipped = LatticeInterval::new(i.a(), i.b(), !i.left_closed() || i.a().is_infinite(), !i.right_closed() || i.b().is_infinite());
        if let Ok(f) = flipped {
            prop_assert_eq!(normal_estimate(mu, sigma, &i), normal_estimate(mu, sigma, &f));
        }
    }

    #[test]
    fn discrepancy_sandwich(l in spread_law()) {
        let r = max_interval_discrepancy(&l).unwrap();
        let g = lower_bound_guarantee(&l).unwrap();
        let k = kolmogorov_bound(&l).unwrap();
        prop_assert!(g.two_sided <= r.max_two_sided + r.truncation_allowance);
        prop_assert!(g.one_sided <= r.kolmogorov_exact + r.truncation_allowance);
        prop_assert!(r.max_two_sided + r.truncation_allowance <= r.upper_certificate);
        prop_assert!(r.kolmogorov_exact + r.truncation_allowance <= k.value);
        let w = &r.witness_interval;
        let (mu, sigma) = l.mean_sd();
        let attained = (l.interval_mass(w) - normal_estimate(mu, sigma, w)).abs();
        prop_assert!((attained - r.max_two_sided).abs() <= 1e-13);
    }

    #[test]
    fn extremal_matches_brute_force(n in 1u64..=25, p in 0.001f64..0.999) {
        let l = DiscreteLaw::binomial(n, p).unwrap();
        let fast = max_interval_discrepancy(&l).unwrap().max_two_sided;
        prop_assert!((fast - brute_force_max_discrepancy(&l)).abs() <= 1e-10);
    }

    #[test]
    fn clopper_pearson_chain(n in 1u64..=200, x in any::<prop::sample::Index>(), beta in 0.5f64..0.999) {
        let x = x.index(n as usize + 1) as u64;
        let q = CpQuery::new(n, x, beta).unwrap();
        let b = cp_brackets(&q);
        prop_assert!(b.lower_chain_holds() && b.upper_chain_holds(), "{:?}", b);
        if x >= 1 {
            prop_assert!((binomial_upper_tail(n, b.exact_lower, x) - (1.0 - beta)).abs() <= 1e-10);
        }
        let mirror = cp_lower_exact(&q.mirrored());
        prop_assert!((cp_upper_exact(&q) - (1.0 - mirror)).abs() <= 1e-12);
    }

    #[test]
    fn clopper_pearson_is_monotone_in_x(n in 2u64..=200, x in any::<prop::sample::Index>(), beta in 0.5f64..0.999) {
        let x = x.index(n as usize) as u64;
        let a = CpQuery::new(n, x, beta).unwrap();
        let b = CpQuery::new(n, x + 1, beta).unwrap();
        prop_assert!(cp_lower_exact(&a) < cp_lower_exact(&b));
        prop_assert!(cp_upper_exact(&a) < cp_upper_exact(&b));
    }

    #[test]
    fn rate_dominates_quadratic(u in 0.0f64..=1.0, p in 0.001f64..0.999) {
        let rel = janson_relation(u, p).unwrap();
        if u == p {
            prop_assert_eq!(rel, Relation::Equal);
        } else {
            prop_assert!(rel != Relation::Violated, "H = {}, G = {}", rate_h(u, p).unwrap(), rate_g(u, p).unwrap());
        }
    }

    #[test]
    fn rate_is_convex(u in 0.01f64..0.99, h in 1e-3f64..0.01, p in 0.01f64..0.99) {
        let f = |v: f64| rate_h(v, p).unwrap();
        prop_assert!(f(u - h) + f(u + h) - 2.0 * f(u) > 0.0);
    }

    #[test]
    fn sandwich_holds(n in 1u64..=100, p in 0.02f64..0.98) {
        let r = sandwich_check(n, p).unwrap();
        prop_assert!(r.pattern_holds && r.origin_gap_holds);
    }
}
