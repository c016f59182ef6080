use crate::render::{self, exact, exact_opt, opt, sig15, SCHEMA_VERSION};
use crate::{ApproxArgs, CpArgs, ExtremalArgs, Format, VerifyArgs};
use anyhow::{anyhow, bail, Context, Result};
use normcert::approx::{
    approx_interval_with, cc_approx_symmetric, kolmogorov_bound, lower_bound_guarantee, ApproxOptions,
};
use normcert::clopper_pearson::{cp_brackets, cp_gap_report, cp_two_sided, CpBoundSet, CpGapRow, CpQuery};
use normcert::constants;
use normcert::extremal::max_interval_discrepancy;
use normcert::interval::parse_endpoint;
use normcert::verify::{golden_constants, run_all, SweepSpec, VerificationReport, PRESETS, SUITES};
use normcert::{DiscreteLaw, Family, LatticeInterval};
use serde_json::json;
use std::io::Write;

const LAW_USAGE: &str = "LAW must be `binomial N P`, `hypergeometric POPULATION SUCCESSES DRAWS` or `poisson LAMBDA`";

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.parse().map_err(|_| anyhow!("{what} must be a nonnegative integer, got `{s}`"))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse().map_err(|_| anyhow!("{what} must be a number, got `{s}`"))
}

pub fn parse_law(args: &[String]) -> Result<DiscreteLaw> {
    let law = match (args[0].as_str(), args.len()) {
        ("binomial", 3) => DiscreteLaw::binomial(parse_u64(&args[1], "N")?, parse_f64(&args[2], "P")?),
        ("hypergeometric", 4) => DiscreteLaw::hypergeometric(
            parse_u64(&args[1], "POPULATION")?,
            parse_u64(&args[2], "SUCCESSES")?,
            parse_u64(&args[3], "DRAWS")?,
        ),
        ("poisson", 2) => DiscreteLaw::poisson(parse_f64(&args[1], "LAMBDA")?),
        _ => bail!("{LAW_USAGE}"),
    };
    Ok(law?)
}

fn parse_interval(args: &ApproxArgs) -> Result<LatticeInterval> {
    let i = match (&args.bracket, args.interval.as_slice()) {
        (Some(expr), _) => expr.parse()?,
        (None, [a, b]) => LatticeInterval::closed(parse_endpoint(a)?, parse_endpoint(b)?)?,
        _ => bail!("give --interval A B or --bracket EXPR"),
    };
    Ok(i)
}

pub fn approx(args: &ApproxArgs, format: Format, out: &mut dyn Write) -> Result<bool> {
    let law = parse_law(&args.law)?;
    let interval = parse_interval(args)?;
    let c = if args.cc {
        match law.family() {
            Family::Binomial { n, p } if p == 0.5 => cc_approx_symmetric(n, &interval)?,
            _ => bail!("--cc needs the law `binomial N 0.5`"),
        }
    } else {
        let options = ApproxOptions { symmetric_density_constant: args.symmetric_density };
        approx_interval_with(&law, &interval, options)?
    };
    let (mu, sigma) = law.mean_sd();
    let mass = law.interval_mass(&interval);
    let true_error = (mass - c.estimate).abs();
    let source = serde_json::to_value(c.bound_source)?;
    let source = source.as_str().unwrap_or_default().to_string();
    match format {
        Format::Json => render::json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "query": {
                    "law": law,
                    "interval": interval,
                    "cc": args.cc,
                    "symmetric_density": args.symmetric_density,
                },
                "mean": mu,
                "sd": sigma,
                "estimate": c.estimate,
                "error_bound": c.error_bound,
                "bound_source": source,
                "bracket": [c.bracket.0, c.bracket.1],
                "exact_probability": mass,
                "true_error": true_error,
            }),
        )?,
        Format::Csv => render::csv_rows(
            out,
            &[
                "schema_version",
                "law",
                "interval",
                "cc",
                "mean",
                "sd",
                "estimate",
                "error_bound",
                "bound_source",
                "bracket_lower",
                "bracket_upper",
                "exact_probability",
                "true_error",
            ],
            &[vec![
                SCHEMA_VERSION.to_string(),
                law.to_string(),
                interval.to_string(),
                args.cc.to_string(),
                exact(mu),
                exact(sigma),
                exact(c.estimate),
                exact(c.error_bound),
                source,
                exact(c.bracket.0),
                exact(c.bracket.1),
                exact(mass),
                exact(true_error),
            ]],
        )?,
        Format::Plain => render::key_values(
            out,
            &[
                ("law", law.to_string()),
                ("interval", interval.to_string()),
                ("mean", sig15(mu)),
                ("sd", sig15(sigma)),
                ("normal estimate", sig15(c.estimate)),
                ("error bound", sig15(c.error_bound)),
                ("bound source", source),
                ("bracket", format!("[{}, {}]", sig15(c.bracket.0), sig15(c.bracket.1))),
                ("exact probability", sig15(mass)),
                ("true error", sig15(true_error)),
            ],
        )?,
    }
    Ok(true)
}

fn clamp_brackets(b: &CpBoundSet) -> CpBoundSet {
    let c = |x: f64| x.clamp(0.0, 1.0);
    CpBoundSet {
        refined_lower: b.refined_lower.map(c),
        simple_refined_lower: c(b.simple_refined_lower),
        plain_lower: c(b.plain_lower),
        refined_upper: b.refined_upper.map(c),
        simple_refined_upper: c(b.simple_refined_upper),
        plain_upper: c(b.plain_upper),
        lagrange_point: c(b.lagrange_point),
        ..*b
    }
}

pub fn cp(args: &CpArgs, format: Format, out: &mut dyn Write) -> Result<bool> {
    let v = &args.values;
    let (n, x, beta) = match (args.all, v.len()) {
        (true, 2) => (parse_u64(&v[0], "N")?, None, parse_f64(&v[1], "BETA")?),
        (false, 3) => (parse_u64(&v[0], "N")?, Some(parse_u64(&v[1], "X")?), parse_f64(&v[2], "BETA")?),
        (true, _) => bail!("with --all give `N BETA`"),
        (false, _) => bail!("give `N X BETA`, or `N BETA` with --all"),
    };
    let query = json!({
        "n": n,
        "x": x,
        "beta": beta,
        "all": args.all,
        "two_sided": args.two_sided,
        "clamp": args.clamp,
    });
    if args.two_sided {
        let xs: Vec<u64> = match x {
            Some(x) => vec![x],
            None => (0..=n).collect(),
        };
        let rows = xs.iter().map(|&x| Ok((x, cp_two_sided(n, x, beta)?))).collect::<Result<Vec<_>>>()?;
        let side = 0.5 * (1.0 + beta);
        return two_sided_output(format, out, query, n, beta, side, &rows).map(|()| true);
    }
    let (rows, monotone) = match x {
        Some(x) => (vec![CpGapRow::from(cp_brackets(&CpQuery::new(n, x, beta)?))], None),
        None => {
            let r = cp_gap_report(n, beta)?;
            (r.rows, Some(r.monotone))
        }
    };
    let shown: Vec<CpGapRow> = rows
        .iter()
        .map(|r| if args.clamp { CpGapRow { bounds: clamp_brackets(&r.bounds), ..*r } } else { *r })
        .collect();
    match format {
        Format::Json => {
            let mut doc = json!({ "schema_version": SCHEMA_VERSION, "query": query, "rows": shown });
            if let Some(m) = monotone {
                doc["monotone"] = json!(m);
            }
            render::json(out, &doc)?;
        }
        Format::Csv => {
            let header = [
                "n",
                "x",
                "beta",
                "z",
                "exact_lower",
                "refined_lower",
                "simple_refined_lower",
                "plain_lower",
                "exact_upper",
                "refined_upper",
                "simple_refined_upper",
                "plain_upper",
                "lagrange_point",
                "refined_lower_gap",
                "simple_refined_lower_gap",
                "plain_lower_gap",
                "refined_upper_gap",
                "simple_refined_upper_gap",
                "plain_upper_gap",
                "lagrange_gap",
            ];
            let body: Vec<Vec<String>> = shown
                .iter()
                .map(|r| {
                    let b = &r.bounds;
                    vec![
                        b.n.to_string(),
                        b.x.to_string(),
                        exact(b.beta),
                        exact(b.z),
                        exact(b.exact_lower),
                        exact_opt(b.refined_lower),
                        exact(b.simple_refined_lower),
                        exact(b.plain_lower),
                        exact(b.exact_upper),
                        exact_opt(b.refined_upper),
                        exact(b.simple_refined_upper),
                        exact(b.plain_upper),
                        exact(b.lagrange_point),
                        exact_opt(r.lower_gaps.0),
                        exact(r.lower_gaps.1),
                        exact(r.lower_gaps.2),
                        exact_opt(r.upper_gaps.0),
                        exact(r.upper_gaps.1),
                        exact(r.upper_gaps.2),
                        exact(r.lagrange_gap),
                    ]
                })
                .collect();
            render::csv_rows(out, &header, &body)?;
        }
        Format::Plain if x.is_some() => {
            let r = &shown[0];
            let b = &r.bounds;
            render::key_values(
                out,
                &[
                    ("n", b.n.to_string()),
                    ("x", b.x.to_string()),
                    ("beta", sig15(b.beta)),
                    ("z", sig15(b.z)),
                    ("exact lower", sig15(b.exact_lower)),
                    ("refined lower", opt(b.refined_lower)),
                    ("simple refined lower", sig15(b.simple_refined_lower)),
                    ("plain lower", sig15(b.plain_lower)),
                    ("exact upper", sig15(b.exact_upper)),
                    ("refined upper", opt(b.refined_upper)),
                    ("simple refined upper", sig15(b.simple_refined_upper)),
                    ("plain upper", sig15(b.plain_upper)),
                    ("lagrange point", sig15(b.lagrange_point)),
                    ("lower gaps", format!("{} {} {}", opt(r.lower_gaps.0), sig15(r.lower_gaps.1), sig15(r.lower_gaps.2))),
                    ("upper gaps", format!("{} {} {}", opt(r.upper_gaps.0), sig15(r.upper_gaps.1), sig15(r.upper_gaps.2))),
                    ("lagrange gap", sig15(r.lagrange_gap)),
                ],
            )?;
        }
        Format::Plain => {
            writeln!(out, "n = {n}, beta = {}", sig15(beta))?;
            let header = [
                "x",
                "exact_lower",
                "refined_lower",
                "simple_lower",
                "plain_lower",
                "exact_upper",
                "refined_upper",
                "simple_upper",
                "plain_upper",
                "lagrange",
            ];
            let body: Vec<Vec<String>> = shown
                .iter()
                .map(|r| {
                    let b = &r.bounds;
                    vec![
                        b.x.to_string(),
                        sig15(b.exact_lower),
                        opt(b.refined_lower),
                        sig15(b.simple_refined_lower),
                        sig15(b.plain_lower),
                        sig15(b.exact_upper),
                        opt(b.refined_upper),
                        sig15(b.simple_refined_upper),
                        sig15(b.plain_upper),
                        sig15(b.lagrange_point),
                    ]
                })
                .collect();
            render::table(out, &header, &body)?;
            if let Some(m) = monotone {
                writeln!(out, "exact bounds increasing in x: {m}")?;
            }
        }
    }
    Ok(true)
}

fn two_sided_output(
    format: Format,
    out: &mut dyn Write,
    query: serde_json::Value,
    n: u64,
    beta: f64,
    side: f64,
    rows: &[(u64, (f64, f64))],
) -> Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(x, (lo, hi))| json!({ "n": n, "x": x, "beta": beta, "side_level": side, "lower": lo, "upper": hi }))
                .collect();
            render::json(out, &json!({ "schema_version": SCHEMA_VERSION, "query": query, "rows": rows }))
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(x, (lo, hi))| vec![n.to_string(), x.to_string(), exact(beta), exact(side), exact(*lo), exact(*hi)])
                .collect();
            render::csv_rows(out, &["n", "x", "beta", "side_level", "lower", "upper"], &body)
        }
        Format::Plain => {
            writeln!(out, "n = {n}, level {}, each side at {}", sig15(beta), sig15(side))?;
            let body: Vec<Vec<String>> =
                rows.iter().map(|(x, (lo, hi))| vec![x.to_string(), sig15(*lo), sig15(*hi)]).collect();
            render::table(out, &["x", "lower", "upper"], &body)
        }
    }
}

pub fn extremal(args: &ExtremalArgs, format: Format, out: &mut dyn Write) -> Result<bool> {
    let law = parse_law(&args.law)?;
    let r = max_interval_discrepancy(&law)?;
    let k = kolmogorov_bound(&law)?;
    let g = lower_bound_guarantee(&law)?;
    let (mu, sigma) = law.mean_sd();
    let source = serde_json::to_value(k.source)?.as_str().unwrap_or_default().to_string();
    match format {
        Format::Json => {
            let mut doc = json!({
                "schema_version": SCHEMA_VERSION,
                "query": { "law": law },
                "mean": mu,
                "sd": sigma,
                "kolmogorov_lower_guarantee": g.one_sided,
                "kolmogorov_bound": k.value,
                "kolmogorov_bound_source": source,
            });
            for (key, value) in serde_json::to_value(r)?.as_object().expect("struct serializes to an object") {
                doc[key] = value.clone();
            }
            render::json(out, &doc)?;
        }
        Format::Csv => render::csv_rows(
            out,
            &[
                "schema_version",
                "law",
                "mean",
                "sd",
                "max_two_sided",
                "witness_interval",
                "kolmogorov_exact",
                "kolmogorov_witness",
                "truncation_allowance",
                "lower_guarantee",
                "upper_certificate",
                "kolmogorov_lower_guarantee",
                "kolmogorov_bound",
                "kolmogorov_bound_source",
            ],
            &[vec![
                SCHEMA_VERSION.to_string(),
                law.to_string(),
                exact(mu),
                exact(sigma),
                exact(r.max_two_sided),
                r.witness_interval.to_string(),
                exact(r.kolmogorov_exact),
                exact(r.kolmogorov_witness),
                exact(r.truncation_allowance),
                exact(r.lower_guarantee),
                exact(r.upper_certificate),
                exact(g.one_sided),
                exact(k.value),
                source,
            ]],
        )?,
        Format::Plain => render::key_values(
            out,
            &[
                ("law", law.to_string()),
                ("mean", sig15(mu)),
                ("sd", sig15(sigma)),
                ("max interval discrepancy", sig15(r.max_two_sided)),
                ("witness interval", r.witness_interval.to_string()),
                ("sd * max discrepancy", sig15(sigma * r.max_two_sided)),
                ("kolmogorov distance", sig15(r.kolmogorov_exact)),
                ("kolmogorov witness", sig15(r.kolmogorov_witness)),
                ("truncation allowance", sig15(r.truncation_allowance)),
                ("guaranteed lower bound", sig15(r.lower_guarantee)),
                ("certified upper bound", sig15(r.upper_certificate)),
                ("kolmogorov lower bound", sig15(g.one_sided)),
                ("kolmogorov upper bound", format!("{} ({source})", sig15(k.value))),
            ],
        )?,
    }
    Ok(true)
}

fn sweep_spec(args: &VerifyArgs) -> Result<SweepSpec> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            SweepSpec::from_json(&text)?
        }
        None => SweepSpec::preset(&args.preset)
            .with_context(|| format!("available presets: {}", PRESETS.join(", ")))?,
    };
    if !args.suites.is_empty() {
        spec.suites = args.suites.clone();
    }
    if args.threads.is_some() {
        spec.threads = args.threads;
    }
    if args.max_cases.is_some() {
        spec.max_cases = args.max_cases;
    }
    spec.timing |= args.timing;
    let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
    spec.validate().with_context(|| format!("available suites: {}", names.join(", ")))?;
    Ok(spec)
}

pub fn verify(args: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<bool> {
    if args.list {
        let body: Vec<Vec<String>> = SUITES
            .iter()
            .map(|s| vec![s.name.to_string(), if s.default { "yes" } else { "no" }.to_string(), s.description.to_string()])
            .collect();
        match format {
            Format::Json => render::json(out, &json!({ "schema_version": SCHEMA_VERSION, "suites": SUITES.iter().map(|s| json!({"name": s.name, "default": s.default, "description": s.description})).collect::<Vec<_>>(), "presets": PRESETS }))?,
            Format::Csv => render::csv_rows(out, &["suite", "default", "description"], &body)?,
            Format::Plain => {
                let width = SUITES.iter().map(|s| s.name.len()).max().unwrap_or(0);
                for r in &body {
                    writeln!(out, "{:<width$}  {:<4} {}", r[0], r[1], r[2])?;
                }
                writeln!(out, "presets: {}", PRESETS.join(", "))?;
            }
        }
        return Ok(true);
    }
    let spec = sweep_spec(args)?;
    let reports = run_all(&spec)?;
    let passed = reports.iter().all(|r| r.passed);
    let complete = reports.iter().all(|r| r.complete);
    match format {
        Format::Json => render::json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "preset": spec.name,
                "passed": passed,
                "complete": complete,
                "reports": reports,
            }),
        )?,
        Format::Csv => {
            let body: Vec<Vec<String>> =
                reports.iter().flat_map(VerificationReport::long_rows).map(|r| r.to_vec()).collect();
            render::csv_rows(out, &["suite", "section", "key", "value"], &body)?;
        }
        Format::Plain => plain_reports(out, &spec, &reports, passed, complete)?,
    }
    Ok(passed && complete)
}

fn plain_reports(
    out: &mut dyn Write,
    spec: &SweepSpec,
    reports: &[VerificationReport],
    passed: bool,
    complete: bool,
) -> Result<()> {
    writeln!(out, "preset {}", spec.name)?;
    let body: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let status = match (r.passed, r.complete) {
                (true, true) => "pass",
                (true, false) => "incomplete",
                (false, _) => "FAIL",
            };
            let mut row = vec![r.suite.clone(), status.to_string(), r.cases.to_string(), r.failures_total.to_string()];
            if let Some(ms) = r.wall_time_ms {
                row.push(format!("{ms:.0} ms"));
            }
            row
        })
        .collect();
    let mut header = vec!["suite", "result", "cases", "failures"];
    if spec.timing {
        header.push("time");
    }
    render::table(out, &header, &body)?;
    for r in reports {
        if !r.statistics.is_empty() {
            writeln!(out, "\n{}", r.suite)?;
            let stats: Vec<(&str, String)> = r.statistics.iter().map(|(k, v)| (k.as_str(), sig15(*v))).collect();
            let indented: Vec<(String, String)> = stats.iter().map(|(k, v)| (format!("  {k}"), v.clone())).collect();
            let view: Vec<(&str, String)> = indented.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
            render::key_values(out, &view)?;
        }
        for f in &r.failures {
            writeln!(
                out,
                "  failed {} [{}]: {} {} {}\n    rerun: {}",
                f.check,
                f.case,
                sig15(f.lhs),
                f.relation,
                sig15(f.rhs),
                f.rerun
            )?;
        }
        if r.failures_total > r.failures.len() as u64 {
            writeln!(out, "  ... {} more failures", r.failures_total - r.failures.len() as u64)?;
        }
    }
    let verdict = match (passed, complete) {
        (true, true) => "all checks passed",
        (true, false) => "no failures, but some suites stopped early",
        (false, _) => "verification failed",
    };
    writeln!(out, "\n{verdict}")?;
    Ok(())
}

pub fn constants(format: Format, out: &mut dyn Write) -> Result<bool> {
    let golden = golden_constants();
    let all_match = golden.iter().all(|c| c.matches);
    let inputs = [
        ("hypergeometric_interval", constants::HYPERGEOMETRIC_INTERVAL),
        ("binomial_interval", constants::BINOMIAL_INTERVAL),
        ("kolmogorov_cap", constants::KOLMOGOROV_CAP),
        ("hypergeometric_kolmogorov", constants::HYPERGEOMETRIC_KOLMOGOROV),
        ("binomial_kolmogorov", constants::BINOMIAL_KOLMOGOROV),
    ];
    match format {
        Format::Json => render::json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "inputs": inputs.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
                "recomputed": golden,
                "all_match": all_match,
            }),
        )?,
        Format::Csv => {
            let body: Vec<Vec<String>> = golden
                .iter()
                .map(|c| {
                    vec![c.name.clone(), c.expression.clone(), exact(c.value), c.printed.clone(), c.truncated.to_string(), c.matches.to_string()]
                })
                .collect();
            render::csv_rows(out, &["name", "expression", "value", "printed", "truncated", "matches"], &body)?;
        }
        Format::Plain => {
            let body: Vec<Vec<String>> = golden
                .iter()
                .map(|c| {
                    let printed = if c.truncated { format!("{}...", c.printed) } else { c.printed.clone() };
                    vec![c.name.clone(), sig15(c.value), printed, if c.matches { "ok" } else { "MISMATCH" }.to_string()]
                })
                .collect();
            render::table(out, &["name", "value", "printed", "match"], &body)?;
            writeln!(out)?;
            let rows: Vec<(&str, String)> = inputs.iter().map(|(k, v)| (*k, sig15(*v))).collect();
            render::key_values(out, &rows)?;
        }
    }
    Ok(all_match)
}
