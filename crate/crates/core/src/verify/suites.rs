use super::oracles::{
    brute_force_max_discrepancy, cumulative, dense_grid_deviation, hypergeometric_pmf_exact, to_f64,
};
use super::{golden_constants, Failure, SweepSpec, VerificationReport};
use crate::approx::{kolmogorov_bound, normal_estimate};
use crate::clopper_pearson::{binomial_upper_tail, cp_table, CpQuery};
use crate::constants::{
    concentration_lower_bound, continuity_corrected_coefficient, near_half_coefficient, quadratic_coefficient,
    symmetric_interval_constant, symmetric_kolmogorov_constant, BINOMIAL_INTERVAL, BINOMIAL_KOLMOGOROV,
    HYPERGEOMETRIC_INTERVAL, KOLMOGOROV_CAP,
};
use crate::extremal::{
    max_interval_discrepancy, signed_deviation_extrema, symmetric_half_integer_discrepancy, table_discrepancy,
};
use crate::interval::LatticeInterval;
use crate::kernels::{DiscreteLaw, Family, LawTable};
use crate::normal::{phi_cdf, phi_quantile, tail_inequality_check};
use crate::rate::{denominator, janson_relation, rate_h, sandwich_check, Relation};
use num_rational::BigRational;
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy)]
enum Agg {
    Max,
    Min,
    Sum,
}

/// Outcome of one grid cell.
#[derive(Default)]
struct Case {
    label: String,
    rerun: String,
    cases: u64,
    failures: Vec<Failure>,
    observations: Vec<(&'static str, f64, Agg)>,
}

impl Case {
    fn new(label: impl Into<String>, rerun: impl Into<String>) -> Self {
        Self { label: label.into(), rerun: rerun.into(), cases: 1, ..Self::default() }
    }

    fn fail(&mut self, check: &str, lhs: f64, relation: &str, rhs: f64) {
        self.failures.push(Failure {
            check: check.to_string(),
            case: self.label.clone(),
            lhs,
            rhs,
            relation: relation.to_string(),
            rerun: self.rerun.clone(),
        });
    }

    fn le(&mut self, check: &str, lhs: f64, rhs: f64) {
        if !(lhs <= rhs) {
            self.fail(check, lhs, "<=", rhs);
        }
    }

    /// Weak inequality between two evaluations of expressions that coincide
    /// in exact arithmetic for some inputs. Upper bounds come from `1 - lower`,
    /// so a few ulps of 1 are allowed.
    fn le_rounded(&mut self, check: &str, lhs: f64, rhs: f64) {
        let slack = 4.0 * f64::EPSILON * lhs.abs().max(rhs.abs()).max(1.0);
        if !(lhs <= rhs + slack) {
            self.fail(check, lhs, "<= (up to rounding)", rhs);
        }
    }

    fn lt(&mut self, check: &str, lhs: f64, rhs: f64) {
        if !(lhs < rhs) {
            self.fail(check, lhs, "<", rhs);
        }
    }

    fn close(&mut self, check: &str, lhs: f64, rhs: f64, tol: f64) {
        if !((lhs - rhs).abs() <= tol) {
            self.fail(check, lhs, &format!("== (tol {tol:e})"), rhs);
        }
    }

    fn holds(&mut self, check: &str, ok: bool, lhs: f64, relation: &str, rhs: f64) {
        if !ok {
            self.fail(check, lhs, relation, rhs);
        }
    }

    fn max(&mut self, key: &'static str, v: f64) {
        self.observations.push((key, v, Agg::Max));
    }

    fn min(&mut self, key: &'static str, v: f64) {
        self.observations.push((key, v, Agg::Min));
    }

    fn count(&mut self, key: &'static str, v: f64) {
        self.observations.push((key, v, Agg::Sum));
    }
}

pub(super) struct Tally {
    cases: u64,
    complete: bool,
    failures_total: u64,
    failures: Vec<Failure>,
    statistics: BTreeMap<String, f64>,
}

impl Tally {
    pub(super) fn into_report(self, suite: &str, spec: &SweepSpec, wall_time_ms: Option<f64>) -> VerificationReport {
        VerificationReport {
            suite: suite.to_string(),
            preset: spec.name.clone(),
            cases: self.cases,
            passed: self.failures_total == 0,
            complete: self.complete,
            failures_total: self.failures_total,
            failures: self.failures,
            statistics: self.statistics,
            wall_time_ms,
        }
    }
}

/// Runs `check` over `items` in parallel and folds the outcomes in order.
fn sweep<T, F>(spec: &SweepSpec, mut items: Vec<T>, check: F) -> Tally
where
    T: Sync,
    F: Fn(&T) -> Case + Sync + Send,
{
    let mut complete = true;
    if let Some(cap) = spec.max_cases {
        if items.len() as u64 > cap {
            items.truncate(cap as usize);
            complete = false;
        }
    }
    let outcomes: Vec<Case> = items.par_iter().map(|t| check(t)).collect();
    let mut tally =
        Tally { cases: 0, complete, failures_total: 0, failures: Vec::new(), statistics: BTreeMap::new() };
    for case in outcomes {
        tally.cases += case.cases;
        tally.failures_total += case.failures.len() as u64;
        for f in case.failures {
            if tally.failures.len() < spec.failure_cap {
                tally.failures.push(f);
            }
        }
        for (key, v, agg) in case.observations {
            let slot = tally.statistics.entry(key.to_string());
            match agg {
                Agg::Max => {
                    let e = slot.or_insert(f64::NEG_INFINITY);
                    *e = e.max(v);
                }
                Agg::Min => {
                    let e = slot.or_insert(f64::INFINITY);
                    *e = e.min(v);
                }
                Agg::Sum => *slot.or_insert(0.0) += v,
            }
        }
    }
    tally
}

pub(super) fn run(suite: &str, spec: &SweepSpec) -> Tally {
    match suite {
        "golden-constants" => golden(spec),
        "hypergeometric-certificate" => certificates(spec, hypergeometric_grid(spec.hypergeometric_population_max)),
        "binomial-certificate" => certificates(spec, binomial_grid(spec)),
        "poisson-certificate" => certificates(spec, poisson_grid(spec)),
        "lower-bounds" => lower_bounds(spec),
        "symmetric-cc" => symmetric_cc(spec),
        "cp-chain" => cp_chain(spec),
        "cp-reflection" => cp_reflection(spec),
        "cp-coverage" => cp_coverage(spec),
        "zubkov-serov" => zubkov_serov(spec),
        "janson-bound" => janson(spec),
        "rate-convexity" => convexity(spec),
        "normal-tail" => normal_tail(spec),
        "oracle-equivalence" => oracle_equivalence(spec),
        "kernel-invariants" => kernel_invariants(spec),
        "lagrange-invalidity" => lagrange(spec),
        "symmetric-density" => symmetric_density(spec),
        other => unreachable!("suite {other} is in the inventory but has no runner"),
    }
}

fn rerun_law(law: &DiscreteLaw) -> String {
    format!("normcert extremal {law}")
}

fn hypergeometric_grid(max_population: u64) -> Vec<DiscreteLaw> {
    let mut laws = Vec::new();
    for population in 1..=max_population {
        for successes in 0..=population {
            for draws in 1..=population {
                let law = DiscreteLaw::hypergeometric(population, successes, draws).expect("valid grid");
                if !law.is_degenerate() {
                    laws.push(law);
                }
            }
        }
    }
    laws
}

fn binomial_grid(spec: &SweepSpec) -> Vec<DiscreteLaw> {
    let ps = spec.binomial_p.values();
    (1..=spec.binomial_n_max)
        .flat_map(|n| ps.iter().map(move |&p| DiscreteLaw::binomial(n, p).expect("valid grid")))
        .collect()
}

fn poisson_grid(spec: &SweepSpec) -> Vec<DiscreteLaw> {
    spec.poisson_lambda.values().into_iter().map(|l| DiscreteLaw::poisson(l).expect("valid grid")).collect()
}

fn golden(spec: &SweepSpec) -> Tally {
    sweep(spec, golden_constants(), |c| {
        let mut case = Case::new(c.name.clone(), "normcert constants");
        let printed: f64 = c.printed.parse().unwrap_or(f64::NAN);
        case.holds("printed-digits", c.matches, c.value, "matches digits of", printed);
        case
    })
}

/// Upper certificates against exact discrepancies. Truncation allowances are
/// added to the exact values so the checks stay conservative.
fn certificates(spec: &SweepSpec, laws: Vec<DiscreteLaw>) -> Tally {
    sweep(spec, laws, |law| {
        let mut case = Case::new(law.to_string(), rerun_law(law));
        let sigma = law.sd();
        let r = max_interval_discrepancy(law).expect("grid laws have spread");
        let worst = r.max_two_sided + r.truncation_allowance;
        let kolmogorov = r.kolmogorov_exact + r.truncation_allowance;
        let c = match law.family() {
            Family::Hypergeometric { .. } => HYPERGEOMETRIC_INTERVAL,
            _ => BINOMIAL_INTERVAL,
        };
        case.le("interval-constant", worst, c / sigma);
        case.le("one-sided-half-constant", kolmogorov, c / (2.0 * sigma));
        let k = kolmogorov_bound(law).expect("grid laws have spread");
        case.le("kolmogorov-bound", kolmogorov, k.value);
        case.le("kolmogorov-cap", kolmogorov, KOLMOGOROV_CAP);
        match law.family() {
            Family::Hypergeometric { .. } => {}
            Family::Poisson { .. } => case.le("kolmogorov-family", kolmogorov, BINOMIAL_KOLMOGOROV / sigma),
            Family::Binomial { p, .. } => {
                case.le("kolmogorov-family", kolmogorov, BINOMIAL_KOLMOGOROV / sigma);
                if (1.0 / 3.0..=2.0 / 3.0).contains(&p) {
                    case.le("kolmogorov-near-half", kolmogorov, near_half_coefficient(p) / sigma);
                }
                case.le("kolmogorov-quadratic", kolmogorov, quadratic_coefficient(p) / sigma);
            }
        }
        case.max("max_sigma_times_discrepancy", sigma * r.max_two_sided);
        case.max("max_sigma_times_kolmogorov", sigma * r.kolmogorov_exact);
        case.max("max_discrepancy_over_certificate", worst / (c / sigma));
        case.max("max_truncation_allowance", r.truncation_allowance);
        case
    })
}

fn lower_bounds(spec: &SweepSpec) -> Tally {
    enum Item {
        Law(DiscreteLaw),
        Weights(Vec<f64>),
        CoinFlip,
    }
    let mut items: Vec<Item> = vec![Item::CoinFlip];
    items.extend(hypergeometric_grid(spec.hypergeometric_population_max).into_iter().map(Item::Law));
    items.extend(binomial_grid(spec).into_iter().map(Item::Law));
    items.extend(poisson_grid(spec).into_iter().map(Item::Law));
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 1..=4 {
                if a + b > 0 {
                    items.push(Item::Weights(vec![a as f64, b as f64, c as f64]));
                }
            }
        }
    }
    for w in [&[1.0, 0.0, 0.0, 1.0][..], &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0], &[5.0, 0.0, 1.0, 0.0, 5.0]] {
        items.push(Item::Weights(w.to_vec()));
    }
    sweep(spec, items, |item| match item {
        Item::CoinFlip => {
            let mut case = Case::new("binomial 1 0.5 on {0}", "normcert approx binomial 1 0.5 --interval 0 0");
            let law = DiscreteLaw::binomial(1, 0.5).expect("valid");
            let i = LatticeInterval::singleton(0);
            let (mu, sigma) = law.mean_sd();
            let err = (law.interval_mass(&i) - normal_estimate(mu, sigma, &i)).abs();
            let lower = concentration_lower_bound(sigma);
            case.close("coin-flip-equality", err, lower, spec.tolerances.equality);
            case.close("coin-flip-value", lower, 0.5, spec.tolerances.equality);
            case
        }
        Item::Law(law) => {
            let mut case = Case::new(law.to_string(), rerun_law(law));
            let r = max_interval_discrepancy(law).expect("grid laws have spread");
            let lower = r.lower_guarantee;
            case.le("two-sided-lower", lower, r.max_two_sided + r.truncation_allowance);
            case.le("kolmogorov-lower", 0.5 * lower, r.kolmogorov_exact + r.truncation_allowance);
            case.le("upper-certificate", r.max_two_sided - r.truncation_allowance, r.upper_certificate);
            case.le("kolmogorov-within-discrepancy", r.kolmogorov_exact, r.max_two_sided);
            case.le("discrepancy-within-twice-kolmogorov", r.max_two_sided, 2.0 * r.kolmogorov_exact);
            case.min("min_discrepancy_over_lower", r.max_two_sided / lower);
            case
        }
        Item::Weights(w) => {
            let label = format!("lattice law with weights {w:?}");
            let mut case = Case::new(label, "normcert verify --suite lower-bounds");
            let table = LawTable::from_weights(0, w).expect("valid weights");
            let t = table_discrepancy(&table);
            let lower = concentration_lower_bound(table.sd());
            case.le("arbitrary-law-lower", lower, t.max_two_sided);
            case.le("arbitrary-law-kolmogorov-lower", 0.5 * lower, t.kolmogorov);
            case.min("min_arbitrary_discrepancy_over_lower", t.max_two_sided / lower);
            case
        }
    })
}

fn symmetric_cc(spec: &SweepSpec) -> Tally {
    let tol = spec.tolerances.equality;
    let maximal = LatticeInterval::open(-0.5, 2.5).expect("valid");
    sweep(spec, (1..=spec.symmetric_n_max).collect(), |&n| {
        let mut case = Case::new(format!("binomial {n} 0.5"), format!("normcert approx binomial {n} 0.5 --cc --interval -0.5 {}.5", n));
        let h = symmetric_half_integer_discrepancy(n).expect("n >= 1");
        let bound = continuity_corrected_coefficient() / (n as f64 / 4.0);
        case.le("bounded", h.bounded, bound + tol);
        case.le("unbounded", h.unbounded, 0.5 * bound + tol);
        if n == 2 {
            case.close("equality-bounded", h.bounded, bound, tol);
            case.close("equality-unbounded", h.unbounded, 0.5 * bound, tol);
            case.holds("equality-witness", h.bounded_witness == maximal, h.bounded_witness.a(), "witness is", -0.5);
        } else {
            case.lt("strict-bounded", h.bounded + tol, bound);
            case.lt("strict-unbounded", h.unbounded + tol, 0.5 * bound);
            case.max("max_ratio_bounded_excluding_two", h.bounded / bound);
            case.max("max_ratio_unbounded_excluding_two", h.unbounded / (0.5 * bound));
        }
        case
    })
}

fn cp_pairs(n_max: u64, spec: &SweepSpec) -> Vec<(u64, f64)> {
    let betas = spec.cp_beta.values();
    (1..=n_max).flat_map(|n| betas.iter().map(move |&b| (n, b))).collect()
}

fn cp_chain(spec: &SweepSpec) -> Tally {
    let tol = spec.tolerances;
    sweep(spec, cp_pairs(spec.cp_n_max, spec), |&(n, beta)| {
        let mut all = Case::new(format!("n = {n}, beta = {beta}"), "");
        all.cases = 0;
        let nf = n as f64;
        for b in cp_table(n, beta).expect("valid grid") {
            let x = b.x;
            let mut case = Case::new(format!("n = {n}, x = {x}, beta = {beta}"), format!("normcert cp {n} {x} {beta}"));
            if let Some(r) = b.refined_lower {
                case.lt("lower-exact-above-refined", r, b.exact_lower);
                case.le_rounded("lower-refined-above-simple", b.simple_refined_lower, r);
                case.max("max_n_times_refined_lower_gap", nf * (b.exact_lower - r));
            }
            if let Some(r) = b.refined_upper {
                case.lt("upper-exact-below-refined", b.exact_upper, r);
                case.le_rounded("upper-refined-below-simple", r, b.simple_refined_upper);
            }
            case.le_rounded("lower-unrestricted-exact", b.simple_refined_lower, b.exact_lower);
            case.le_rounded("lower-unrestricted-plain", b.plain_lower, b.simple_refined_lower);
            case.le_rounded("upper-unrestricted-exact", b.exact_upper, b.simple_refined_upper);
            case.le_rounded("upper-unrestricted-plain", b.simple_refined_upper, b.plain_upper);
            if x >= 1 {
                let residual = binomial_upper_tail(n, b.exact_lower, x) - (1.0 - beta);
                case.le("bisection-residual", residual.abs(), tol.residual);
                case.max("max_bisection_residual", residual.abs());
            }
            let closed_lower = match x {
                0 => Some(0.0),
                1 => Some(1.0 - beta.powf(1.0 / nf)),
                _ if x == n => Some((1.0 - beta).powf(1.0 / nf)),
                _ => None,
            };
            if let Some(v) = closed_lower {
                case.close("lower-closed-form", b.exact_lower, v, tol.closed_form);
            }
            let closed_upper = if x == n {
                Some(1.0)
            } else if x == 0 {
                Some(1.0 - (1.0 - beta).powf(1.0 / nf))
            } else if x == n - 1 {
                Some(beta.powf(1.0 / nf))
            } else {
                None
            };
            if let Some(v) = closed_upper {
                case.close("upper-closed-form", b.exact_upper, v, tol.closed_form);
            }
            all.cases += 1;
            all.failures.append(&mut case.failures);
            all.observations.append(&mut case.observations);
        }
        all
    })
}

/// The upper bound solved directly: the `p` with `P_p(X <= x) = 1 - beta`.
fn direct_upper(n: u64, x: u64, beta: f64) -> f64 {
    if x == n {
        return 1.0;
    }
    let target = 1.0 - beta;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..crate::clopper_pearson::MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let cdf = DiscreteLaw::binomial(n, mid).expect("valid").cdf(x as i64);
        if cdf > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn cp_reflection(spec: &SweepSpec) -> Tally {
    let tol = spec.tolerances.closed_form;
    sweep(spec, cp_pairs(spec.reflection_n_max, spec), |&(n, beta)| {
        let mut case = Case::new(format!("n = {n}, beta = {beta}"), format!("normcert cp {n} {beta} --all"));
        case.cases = n + 1;
        let nf = n as f64;
        for b in cp_table(n, beta).expect("valid grid") {
            let q = CpQuery::new(n, b.x, beta).expect("valid");
            let (ph, qh, z) = (q.p_hat(), q.q_hat(), b.z);
            let offset = z / nf.sqrt() * (ph * qh + (1.0 + z * z / 9.0) / nf).sqrt() + (1.0 + z * z / 3.0) / nf;
            let shrink = 1.0 + z * z / (3.0 * nf);
            case.close("exact-upper-direct", b.exact_upper, direct_upper(n, b.x, beta), tol);
            case.close("simple-refined-upper-direct", b.simple_refined_upper, ph + offset / shrink, tol);
            case.close("plain-upper-direct", b.plain_upper, ph + offset, tol);
        }
        case
    })
}

fn cp_coverage(spec: &SweepSpec) -> Tally {
    let ps = spec.coverage_p.values();
    let slack = spec.tolerances.closed_form;
    sweep(spec, cp_pairs(spec.coverage_n_max, spec), |&(n, beta)| {
        let mut case = Case::new(format!("n = {n}, beta = {beta}"), format!("normcert cp {n} {beta} --all"));
        case.cases = ps.len() as u64;
        let table = cp_table(n, beta).expect("valid grid");
        for &p in &ps {
            let law = DiscreteLaw::binomial(n, p).expect("valid");
            let mut lower_cover = 0.0;
            let mut upper_cover = 0.0;
            for b in &table {
                let w = law.pmf(b.x as i64);
                if b.exact_lower <= p {
                    lower_cover += w;
                }
                if b.exact_upper >= p {
                    upper_cover += w;
                }
            }
            case.le("lower-bound-coverage", beta - slack, lower_cover);
            case.le("upper-bound-coverage", beta - slack, upper_cover);
            case.min("min_coverage_minus_level", lower_cover.min(upper_cover) - beta);
        }
        case
    })
}

fn zubkov_serov(spec: &SweepSpec) -> Tally {
    let ps = spec.sandwich_p.values();
    let items: Vec<(u64, f64)> = (1..=spec.sandwich_n_max).flat_map(|n| ps.iter().map(move |&p| (n, p))).collect();
    sweep(spec, items, |&(n, p)| {
        let mut case = Case::new(format!("n = {n}, p = {p}"), format!("normcert verify --suite zubkov-serov"));
        let r = sandwich_check(n, p).expect("valid grid");
        case.cases = r.rows.len() as u64;
        let name = |rel: Relation| format!("{rel:?}").to_lowercase();
        for row in &r.rows {
            if row.lower != row.lower_expected {
                let rel = format!("C(k) <= F(k) at k = {}: {} instead of {}", row.k, name(row.lower), name(row.lower_expected));
                case.fail("sandwich-lower", row.c_k, &rel, row.f_k);
            }
            if row.upper != row.upper_expected {
                let rel = format!("F(k) <= C(k+1) at k = {}: {} instead of {}", row.k, name(row.upper), name(row.upper_expected));
                case.fail("sandwich-upper", row.f_k, &rel, row.c_next);
            }
        }
        let f0 = r.rows.iter().find(|row| row.k == 0).map_or(f64::NAN, |row| row.f_k);
        let c0 = r.rows.iter().find(|row| row.k == 0).map_or(f64::NAN, |row| row.c_k);
        case.holds("origin-gap", r.origin_gap_holds, f0, "> 2 *", c0);
        case.min("min_origin_ratio", r.origin_log_ratio.exp());
        case
    })
}

fn janson_grid(spec: &SweepSpec) -> (u64, u64) {
    (spec.janson_u_points - 1, spec.janson_p_points + 1)
}

fn janson(spec: &SweepSpec) -> Tally {
    let (u_den, p_den) = janson_grid(spec);
    sweep(spec, (1..p_den).collect(), |&j| {
        let p = j as f64 / p_den as f64;
        let mut case = Case::new(format!("p = {j}/{p_den}"), "normcert verify --suite janson-bound");
        case.cases = u_den + 1;
        for i in 0..=u_den {
            let u = i as f64 / u_den as f64;
            let d = denominator(u, p).expect("grid inside the domain");
            case.lt("denominator-positive", 0.0, d);
            let on_diagonal = i * p_den == j * u_den;
            let rel = janson_relation(u, p).expect("grid inside the domain");
            let expected = if on_diagonal { Relation::Equal } else { Relation::Strict };
            if rel != expected {
                let h = rate_h(u, p).unwrap_or(f64::NAN);
                let g = crate::rate::rate_g(u, p).unwrap_or(f64::NAN);
                case.label = format!("u = {i}/{u_den}, p = {j}/{p_den}");
                case.fail("janson", h, &format!("{rel:?} instead of {expected:?} for H vs G"), g);
            }
            case.min("min_denominator", d);
        }
        case
    })
}

fn convexity(spec: &SweepSpec) -> Tally {
    let (u_den, p_den) = janson_grid(spec);
    sweep(spec, (1..p_den).collect(), |&j| {
        let p = j as f64 / p_den as f64;
        let mut case = Case::new(format!("p = {j}/{p_den}"), "normcert verify --suite rate-convexity");
        let h: Vec<f64> = (0..=u_den).map(|i| rate_h(i as f64 / u_den as f64, p).expect("valid")).collect();
        case.cases = h.len() as u64 - 2;
        for w in h.windows(3) {
            let d2 = w[0] - 2.0 * w[1] + w[2];
            case.lt("second-difference", 0.0, d2);
            case.min("min_second_difference", d2);
        }
        case
    })
}

fn normal_tail(spec: &SweepSpec) -> Tally {
    enum Item {
        Tail(f64),
        Symmetry(f64),
        Quantile(f64),
        Residual(f64),
    }
    let mut items = Vec::new();
    let points = 2001;
    let (l0, l1) = (1e-4f64.ln(), 40f64.ln());
    for i in 0..points {
        items.push(Item::Tail((l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp()));
    }
    for i in -512..=512 {
        items.push(Item::Symmetry(i as f64 / 64.0));
    }
    for i in -384..=384 {
        items.push(Item::Quantile(i as f64 / 64.0));
    }
    for i in 1..1000 {
        items.push(Item::Residual(i as f64 / 1000.0));
    }
    sweep(spec, items, |item| match *item {
        Item::Tail(z) => {
            let mut case = Case::new(format!("z = {z}"), "normcert verify --suite normal-tail");
            let ok = tail_inequality_check(z).unwrap_or(false);
            case.holds("tail-inequality", ok, phi_cdf(-z), "<", crate::normal::phi_pdf(z) / z);
            case
        }
        Item::Symmetry(x) => {
            let mut case = Case::new(format!("x = {x}"), "normcert verify --suite normal-tail");
            case.close("symmetry", phi_cdf(x) + phi_cdf(-x), 1.0, 1e-15);
            case.le("monotone", phi_cdf(x - 1.0 / 64.0), phi_cdf(x));
            case
        }
        Item::Quantile(x) => {
            let mut case = Case::new(format!("x = {x}"), "normcert verify --suite normal-tail");
            let back = phi_quantile(phi_cdf(x)).unwrap_or(f64::NAN);
            case.close("quantile-inverse", back, x, crate::normal::inversion_tolerance(x));
            case
        }
        Item::Residual(b) => {
            let mut case = Case::new(format!("beta = {b}"), "normcert verify --suite normal-tail");
            let q = phi_quantile(b).unwrap_or(f64::NAN);
            case.close("quantile-residual", phi_cdf(q), b, 1e-13);
            case
        }
    })
}

fn oracle_equivalence(spec: &SweepSpec) -> Tally {
    enum Item {
        BruteForce(DiscreteLaw),
        DenseGrid(DiscreteLaw, i64, i64),
        Binomial(u64, f64),
        Hypergeometric(u64),
    }
    let mut items = Vec::new();
    let ps = spec.oracle_p.values();
    for n in 1..=spec.oracle_n_max {
        for &p in &ps {
            items.push(Item::BruteForce(DiscreteLaw::binomial(n, p).expect("valid")));
        }
    }
    items.push(Item::DenseGrid(DiscreteLaw::binomial(10, 0.3).expect("valid"), -5, 15));
    items.push(Item::DenseGrid(DiscreteLaw::poisson(4.0).expect("valid"), -5, 25));
    for n in 1..=spec.rational_n_max {
        for &p in &ps {
            items.push(Item::Binomial(n, p));
        }
        items.push(Item::Hypergeometric(n));
    }
    let tol = spec.tolerances;
    sweep(spec, items, |item| match item {
        Item::BruteForce(law) => {
            let mut case = Case::new(law.to_string(), rerun_law(law));
            let fast = max_interval_discrepancy(law).expect("spread").max_two_sided;
            let slow = brute_force_max_discrepancy(law);
            case.close("extremal-vs-brute-force", fast, slow, tol.oracle);
            case.max("max_abs_difference", (fast - slow).abs());
            case
        }
        Item::DenseGrid(law, from, to) => {
            let mut case = Case::new(law.to_string(), rerun_law(law));
            let (d_max, d_min) = signed_deviation_extrema(law).expect("spread");
            let (g_max, g_min) = dense_grid_deviation(law, from * 10_000, to * 10_000, 10_000);
            case.close("dense-grid-max", d_max, g_max, 1e-6);
            case.close("dense-grid-min", d_min, g_min, 1e-6);
            case
        }
        Item::Binomial(n, p) => {
            let law = DiscreteLaw::binomial(*n, *p).expect("valid");
            let mut case = Case::new(law.to_string(), rerun_law(&law));
            let exact_p = BigRational::from_float(*p).expect("finite");
            let pmf = super::oracles::binomial_pmf_exact(*n, &exact_p);
            compare_exact(&mut case, &law, &pmf, 0, tol.pmf_relative, tol.kernel);
            case
        }
        Item::Hypergeometric(population) => {
            let mut case = Case::new(format!("hypergeometric {population} * *"), "normcert verify --suite oracle-equivalence");
            case.cases = 0;
            for successes in 0..=*population {
                for draws in 1..=*population {
                    let law = DiscreteLaw::hypergeometric(*population, successes, draws).expect("valid");
                    case.label = law.to_string();
                    case.cases += 1;
                    let pmf = hypergeometric_pmf_exact(*population, successes, draws);
                    compare_exact(&mut case, &law, &pmf, 0, tol.pmf_relative, tol.kernel);
                }
            }
            case
        }
    })
}

fn compare_exact(case: &mut Case, law: &DiscreteLaw, pmf: &[BigRational], offset: i64, rel: f64, abs: f64) {
    let cdf = cumulative(pmf);
    for (i, (w, c)) in pmf.iter().zip(&cdf).enumerate() {
        let k = offset + i as i64;
        let exact = to_f64(w);
        let got = law.pmf(k);
        if exact >= 1e-300 {
            case.close("pmf-relative", got / exact, 1.0, rel);
        } else {
            case.le("pmf-underflow", got, 1e-300);
        }
        case.close("cdf", law.cdf(k), to_f64(c), abs);
        case.max("max_cdf_error", (law.cdf(k) - to_f64(c)).abs());
    }
}

fn kernel_invariants(spec: &SweepSpec) -> Tally {
    let mut laws = Vec::new();
    let ps = spec.kernel_p.values();
    for n in 1..=spec.kernel_n_max {
        for &p in &ps {
            laws.push(DiscreteLaw::binomial(n, p).expect("valid"));
        }
        laws.push(DiscreteLaw::binomial(n, 0.0).expect("valid"));
    }
    for &population in &spec.kernel_population {
        for successes in 0..=population {
            for draws in 1..=population {
                laws.push(DiscreteLaw::hypergeometric(population, successes, draws).expect("valid"));
            }
        }
    }
    for l in spec.kernel_lambda.values() {
        laws.push(DiscreteLaw::poisson(l).expect("valid"));
    }
    let tol = spec.tolerances.kernel;
    sweep(spec, laws, |law| {
        let mut case = Case::new(law.to_string(), format!("normcert verify --suite kernel-invariants"));
        let lo = law.support_min();
        let (hi, tail) = law.truncation();
        let (mu, sigma) = law.mean_sd();
        let mut total = 0.0;
        let mut first = 0.0;
        let mut second = 0.0;
        for k in lo..=hi {
            let w = law.pmf(k);
            total += w;
            first += k as f64 * w;
            let d = k as f64 - mu;
            second += d * d * w;
            case.close("cdf-increment", law.cdf(k) - law.cdf(k - 1), w, tol);
        }
        case.close("normalization", total + tail, 1.0, 1e-12);
        case.close("mean", first, mu, 1e-10);
        case.close("sd", second.sqrt(), sigma, 1e-10);
        // Nested intervals around the mean, then rays.
        let centre = mu.round();
        let mut previous = 0.0;
        for r in 0..=(hi - lo + 1) {
            let i = LatticeInterval::closed(centre - r as f64, centre + r as f64).expect("ordered");
            let m = law.interval_mass(&i);
            case.le("interval-monotone", previous, m + tol);
            previous = m;
        }
        let whole = law.interval_mass(&LatticeInterval::whole_line());
        case.le("interval-monotone-whole", previous, whole + tol);
        case.close("whole-line", whole, 1.0, 1e-12);
        case
    })
}

fn lagrange(spec: &SweepSpec) -> Tally {
    sweep(spec, cp_pairs(spec.cp_n_max, spec), |&(n, beta)| {
        let mut case = Case::new(format!("n = {n}, beta = {beta}"), format!("normcert cp {n} {beta} --all"));
        case.cases = n + 1;
        let mut undercut = 0.0;
        for b in cp_table(n, beta).expect("valid grid") {
            if b.lagrange_point < b.exact_upper {
                undercut += 1.0;
            }
        }
        case.count("cases_lagrange_below_exact_upper", undercut);
        if undercut > 0.0 {
            case.min("smallest_n_with_undercut", n as f64);
        }
        case
    })
}

fn symmetric_density(spec: &SweepSpec) -> Tally {
    let mut laws: Vec<DiscreteLaw> =
        (1..=spec.binomial_n_max).map(|n| DiscreteLaw::binomial(n, 0.5).expect("valid")).collect();
    laws.extend(hypergeometric_grid(spec.hypergeometric_population_max).into_iter().filter(|l| match l.family() {
        Family::Hypergeometric { population, successes, draws } => 2 * successes == population || 2 * draws == population,
        _ => false,
    }));
    sweep(spec, laws, |law| {
        let mut case = Case::new(law.to_string(), rerun_law(law));
        let sigma = law.sd();
        let r = max_interval_discrepancy(law).expect("spread");
        case.le("symmetric-interval", r.max_two_sided, symmetric_interval_constant() / sigma);
        case.le("symmetric-kolmogorov", r.kolmogorov_exact, symmetric_kolmogorov_constant() / sigma);
        case.max("max_sigma_times_discrepancy", sigma * r.max_two_sided);
        case
    })
}
