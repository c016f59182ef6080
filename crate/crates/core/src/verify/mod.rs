//! Exhaustive grid sweeps over every implemented inequality.
//!
//! A [`SweepSpec`] names the grids; [`run_suite`] runs one suite over them and
//! returns a [`VerificationReport`]. Cases run in parallel, but results are
//! folded in grid order, so a report depends only on its spec.

mod golden;
pub mod oracles;
mod suites;

pub use golden::{golden_constants, GoldenConstant};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

/// Suite names with a one-line description. `default` suites run when a spec
/// lists none.
pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo::new("golden-constants", "printed constants recomputed from their definitions", true),
    SuiteInfo::new("hypergeometric-certificate", "hypergeometric certificates against exact discrepancies", true),
    SuiteInfo::new("binomial-certificate", "binomial certificates against exact discrepancies", true),
    SuiteInfo::new("poisson-certificate", "Poisson certificates against exact discrepancies", true),
    SuiteInfo::new("lower-bounds", "exact discrepancies reach the concentration lower bounds", true),
    SuiteInfo::new("symmetric-cc", "continuity-corrected symmetric binomial bound and its equality case", true),
    SuiteInfo::new("cp-chain", "Clopper-Pearson bounds against their closed-form brackets", true),
    SuiteInfo::new("cp-reflection", "upper bounds equal reflected lower bounds at every level", true),
    SuiteInfo::new("cp-coverage", "exact coverage of the one-sided Clopper-Pearson bounds", true),
    SuiteInfo::new("zubkov-serov", "normal sandwich of binomial distribution functions", true),
    SuiteInfo::new("janson-bound", "rational lower bound of the Bernoulli rate function", true),
    SuiteInfo::new("rate-convexity", "convexity of the Bernoulli rate function", true),
    SuiteInfo::new("normal-tail", "normal distribution function, quantile and tail inequality", true),
    SuiteInfo::new("oracle-equivalence", "extremal reduction and kernels against brute-force oracles", true),
    SuiteInfo::new("kernel-invariants", "normalization, moments and monotonicity of the kernels", true),
    SuiteInfo::new("lagrange-invalidity", "cases where the Lagrange point undercuts the exact upper bound", true),
    SuiteInfo::new("symmetric-density", "the 1/sqrt(2 pi) constant for symmetric laws, opt-in", false),
];

/// Invariant id to the one suite that checks it.
pub const MANIFEST: &[(&str, &str)] = &[
    ("kernels.normalization", "kernel-invariants"),
    ("kernels.cdf-increments", "kernel-invariants"),
    ("kernels.moments", "kernel-invariants"),
    ("kernels.interval-monotone", "kernel-invariants"),
    ("kernels.rational-oracle", "oracle-equivalence"),
    ("normal.symmetry", "normal-tail"),
    ("normal.monotone", "normal-tail"),
    ("normal.quantile-inverse", "normal-tail"),
    ("normal.tail-inequality", "normal-tail"),
    ("approx.certificate-hypergeometric", "hypergeometric-certificate"),
    ("approx.certificate-binomial", "binomial-certificate"),
    ("approx.certificate-poisson", "poisson-certificate"),
    ("approx.sandwich-consistency", "lower-bounds"),
    ("approx.symmetric-continuity-correction", "symmetric-cc"),
    ("approx.symmetric-density", "symmetric-density"),
    ("extremal.oracle-equivalence", "oracle-equivalence"),
    ("extremal.lower-bound-achieved", "lower-bounds"),
    ("extremal.kolmogorov-lower", "lower-bounds"),
    ("extremal.arbitrary-lattice-laws", "lower-bounds"),
    ("cp.strict-chain", "cp-chain"),
    ("cp.unrestricted-chain", "cp-chain"),
    ("cp.defining-property", "cp-chain"),
    ("cp.closed-forms", "cp-chain"),
    ("cp.reflection", "cp-reflection"),
    ("cp.coverage", "cp-coverage"),
    ("cp.lagrange-invalidity", "lagrange-invalidity"),
    ("rate.janson-bound", "janson-bound"),
    ("rate.denominator-positive", "janson-bound"),
    ("rate.convexity", "rate-convexity"),
    ("rate.sandwich", "zubkov-serov"),
    ("rate.origin-gap", "zubkov-serov"),
    ("constants.golden", "golden-constants"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub default: bool,
}

impl SuiteInfo {
    const fn new(name: &'static str, description: &'static str, default: bool) -> Self {
        Self { name, description, default }
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Values `from/denom, (from+step)/denom, ..., to/denom`, or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Range { from: i64, to: i64, step: i64, denom: i64 },
    Values(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { from, to, step, denom } => {
                if *step <= 0 || *denom <= 0 {
                    return Vec::new();
                }
                (0..)
                    .map(|i| from + i * step)
                    .take_while(|k| k <= to)
                    .map(|k| k as f64 / *denom as f64)
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Extremal reduction against brute force.
    pub oracle: f64,
    /// Absolute error of distribution functions.
    pub kernel: f64,
    /// Relative error of point masses against exact rational arithmetic.
    pub pmf_relative: f64,
    /// `|P_p(X >= x) - (1 - beta)|` at the bisection root.
    pub residual: f64,
    /// Clopper-Pearson closed forms and reflection.
    pub closed_form: f64,
    /// Equality detection for the continuity-corrected bound.
    pub equality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub name: String,
    /// Suites to run; empty means every default suite.
    #[serde(default)]
    pub suites: Vec<String>,
    pub hypergeometric_population_max: u64,
    pub binomial_n_max: u64,
    pub binomial_p: Grid,
    pub poisson_lambda: Grid,
    pub symmetric_n_max: u64,
    pub cp_n_max: u64,
    pub cp_beta: Grid,
    pub reflection_n_max: u64,
    pub coverage_n_max: u64,
    pub coverage_p: Grid,
    pub sandwich_n_max: u64,
    pub sandwich_p: Grid,
    pub janson_u_points: u64,
    pub janson_p_points: u64,
    pub oracle_n_max: u64,
    pub oracle_p: Grid,
    pub rational_n_max: u64,
    pub kernel_n_max: u64,
    pub kernel_p: Grid,
    pub kernel_population: Vec<u64>,
    pub kernel_lambda: Grid,
    pub tolerances: Tolerances,
    /// At most this many failures are kept per suite.
    pub failure_cap: usize,
    /// Suites with more cases stop early and are flagged incomplete.
    #[serde(default)]
    pub max_cases: Option<u64>,
    /// Worker threads; `None` uses all cores.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Record wall time in reports (which then differ between runs).
    #[serde(default)]
    pub timing: bool,
}

const DESK: &str = include_str!("../../presets/desk.json");
const EXTENDED: &str = include_str!("../../presets/extended.json");
const SMOKE: &str = include_str!("../../presets/smoke.json");

pub const PRESETS: &[&str] = &["desk", "extended", "smoke"];

impl SweepSpec {
    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "desk" => DESK,
            "extended" => EXTENDED,
            "smoke" => SMOKE,
            other => return Err(Error::UnknownPreset(other.to_string())),
        };
        Self::from_json(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::InvalidSweep(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSweep(m.to_string()));
        for name in &self.suites {
            if !SUITES.iter().any(|s| s.name == name) {
                return Err(Error::UnknownSuite(name.clone()));
            }
        }
        let probability_grids = [
            ("binomial_p", &self.binomial_p),
            ("coverage_p", &self.coverage_p),
            ("sandwich_p", &self.sandwich_p),
            ("oracle_p", &self.oracle_p),
            ("kernel_p", &self.kernel_p),
        ];
        for (name, grid) in probability_grids {
            let v = grid.values();
            if v.is_empty() || v.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
                return bad(&format!("{name} must be a nonempty grid inside (0, 1)"));
            }
        }
        let betas = self.cp_beta.values();
        if betas.is_empty() || betas.iter().any(|b| !(0.5..1.0).contains(b)) {
            return bad("cp_beta must be a nonempty grid inside [1/2, 1)");
        }
        for (name, grid) in [("poisson_lambda", &self.poisson_lambda), ("kernel_lambda", &self.kernel_lambda)] {
            let v = grid.values();
            if v.is_empty() || v.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                return bad(&format!("{name} must be a nonempty grid of positive values"));
            }
        }
        let sizes = [
            self.hypergeometric_population_max,
            self.binomial_n_max,
            self.symmetric_n_max,
            self.cp_n_max,
            self.reflection_n_max,
            self.coverage_n_max,
            self.sandwich_n_max,
            self.oracle_n_max,
            self.rational_n_max,
            self.kernel_n_max,
        ];
        if sizes.iter().any(|&s| s == 0) || self.kernel_population.is_empty() {
            return bad("every size bound must be positive");
        }
        if self.janson_u_points < 3 || self.janson_p_points < 1 {
            return bad("janson grid needs at least 3 u points and 1 p point");
        }
        let t = &self.tolerances;
        if [t.oracle, t.kernel, t.pmf_relative, t.residual, t.closed_form, t.equality].iter().any(|x| !(*x > 0.0)) {
            return bad("tolerances must be positive");
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        Ok(())
    }

    /// Suites this spec runs, in inventory order.
    pub fn selected_suites(&self) -> Vec<&'static str> {
        SUITES
            .iter()
            .filter(|s| if self.suites.is_empty() { s.default } else { self.suites.iter().any(|n| n == s.name) })
            .map(|s| s.name)
            .collect()
    }
}

/// A violated check with enough data to rerun it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub case: String,
    /// The two sides of the violated relation `lhs <op> rhs`.
    pub lhs: f64,
    pub rhs: f64,
    pub relation: String,
    pub rerun: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub preset: String,
    pub cases: u64,
    pub passed: bool,
    /// False when `max_cases` cut the sweep short.
    pub complete: bool,
    pub failures_total: u64,
    pub failures: Vec<Failure>,
    pub statistics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

impl VerificationReport {
    /// Long-format rows `(suite, section, key, value)`.
    pub fn long_rows(&self) -> Vec<[String; 4]> {
        let row = |section: &str, key: &str, value: String| {
            [self.suite.clone(), section.to_string(), key.to_string(), value]
        };
        let mut rows = vec![
            row("summary", "preset", self.preset.clone()),
            row("summary", "cases", self.cases.to_string()),
            row("summary", "passed", self.passed.to_string()),
            row("summary", "complete", self.complete.to_string()),
            row("summary", "failures_total", self.failures_total.to_string()),
        ];
        if let Some(ms) = self.wall_time_ms {
            rows.push(row("summary", "wall_time_ms", format!("{ms}")));
        }
        for (k, v) in &self.statistics {
            rows.push(row("statistic", k, format!("{v:?}")));
        }
        for (i, f) in self.failures.iter().enumerate() {
            let section = format!("failure.{i}");
            rows.push(row(&section, "check", f.check.clone()));
            rows.push(row(&section, "case", f.case.clone()));
            rows.push(row(&section, "lhs", format!("{:?}", f.lhs)));
            rows.push(row(&section, "relation", f.relation.clone()));
            rows.push(row(&section, "rhs", format!("{:?}", f.rhs)));
            rows.push(row(&section, "rerun", f.rerun.clone()));
        }
        rows
    }
}

/// Runs one suite.
pub fn run_suite(name: &str, spec: &SweepSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let info = SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let start = Instant::now();
    let tally = match spec.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidSweep(e.to_string()))?
            .install(|| suites::run(info.name, spec)),
        None => suites::run(info.name, spec),
    };
    let wall = start.elapsed().as_secs_f64() * 1e3;
    Ok(tally.into_report(info.name, spec, spec.timing.then_some(wall)))
}

/// Runs every suite the spec selects.
pub fn run_all(spec: &SweepSpec) -> Result<Vec<VerificationReport>> {
    spec.selected_suites().into_iter().map(|s| run_suite(s, spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for p in PRESETS {
            let spec = SweepSpec::preset(p).unwrap();
            assert_eq!(&spec.name, p);
        }
        assert!(matches!(SweepSpec::preset("huge"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn manifest_covers_suites() {
        for (_, suite) in MANIFEST {
            assert!(SUITES.iter().any(|s| s.name == *suite), "{suite}");
        }
        for s in SUITES {
            assert!(MANIFEST.iter().any(|(_, m)| *m == s.name), "{}", s.name);
        }
        let mut ids: Vec<_> = MANIFEST.iter().map(|(i, _)| *i).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), MANIFEST.len());
    }

    #[test]
    fn grids() {
        let g = Grid::Range { from: 2, to: 98, step: 3, denom: 100 };
        let v = g.values();
        assert_eq!(v.len(), 33);
        assert_eq!((v[0], v[32]), (0.02, 0.98));
        assert_eq!(Grid::Values(vec![0.5]).values(), vec![0.5]);
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let mut spec = SweepSpec::preset("smoke").unwrap();
        spec.suites = vec!["nope".into()];
        assert!(matches!(spec.validate(), Err(Error::UnknownSuite(_))));
        let mut spec = SweepSpec::preset("smoke").unwrap();
        spec.binomial_p = Grid::Values(vec![]);
        assert!(spec.validate().is_err());
        let mut spec = SweepSpec::preset("smoke").unwrap();
        spec.tolerances.oracle = 0.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn default_selection_skips_optional_suite() {
        let spec = SweepSpec::preset("smoke").unwrap();
        let s = spec.selected_suites();
        assert!(!s.contains(&"symmetric-density"));
        assert_eq!(s.len(), SUITES.len() - 1);
    }
}
