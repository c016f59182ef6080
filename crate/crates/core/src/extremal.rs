//! Exact worst-case interval discrepancy and Kolmogorov distance.
//!
//! With `F` the distribution function of a lattice law and `G` the normal
//! distribution function with the same mean and standard deviation, put
//! `D(x) = F(x) - G(x)`. `F` is constant between lattice points and `G` is
//! increasing, so the extrema of `D` and of its left limits `D(x-)` are all
//! found among `D(k)` and `D(k-) = F(k - 1) - G(k)` for lattice points `k`,
//! plus the value 0 at both infinities.
//!
//! The signed error of an interval with boundary points `a < b` is the
//! difference of two such values, one per end, and the end types can be
//! chosen independently. Hence the worst interval error is
//! `max(D_max, 0) - min(D_min, 0)`.

use crate::approx::two_sided_certificate;
use crate::constants::concentration_lower_bound;
use crate::error::{Error, Result};
use crate::interval::LatticeInterval;
use crate::kernels::{DiscreteLaw, LawTable};
use crate::normal::phi_sf;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Deviations within this of the extreme value count as ties when picking a
/// witness.
const TIE: f64 = 1e-15;

/// Where a deviation value is taken: just left of `k` or at `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cut {
    Before(i64),
    At(i64),
}

impl Cut {
    pub fn point(self) -> i64 {
        match self {
            Cut::Before(k) | Cut::At(k) => k,
        }
    }

    fn key(self) -> i64 {
        match self {
            Cut::Before(k) => 2 * k,
            Cut::At(k) => 2 * k + 1,
        }
    }
}

impl PartialOrd for Cut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cut {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// All candidate values of `D`, in increasing position order.
pub fn deviation_profile(table: &LawTable) -> Vec<(Cut, f64)> {
    let lo = table.offset() - 1;
    let hi = table.last() + 1;
    let mut out = Vec::with_capacity(2 * (hi - lo + 1) as usize);
    for k in lo..=hi {
        let x = k as f64;
        out.push((Cut::Before(k), table.deviation(k - 1, x)));
        out.push((Cut::At(k), table.deviation(k, x)));
    }
    out
}

/// `(D_max, D_min)` including the value 0 at the infinities.
pub fn signed_deviation_extrema(law: &DiscreteLaw) -> Result<(f64, f64)> {
    law.require_spread()?;
    Ok(table_extrema(&deviation_profile(&law.tabulate())))
}

fn table_extrema(profile: &[(Cut, f64)]) -> (f64, f64) {
    profile
        .iter()
        .fold((0.0f64, 0.0f64), |(hi, lo), &(_, d)| (hi.max(d), lo.min(d)))
}

/// One end of a witness: a cut or an infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
enum End {
    Cut(Cut),
    Infinite,
}

/// Interval whose error is the difference of the deviations at two ends.
/// `first` precedes `second`; a missing cut stands for an infinity.
fn interval_between(first: End, second: End) -> LatticeInterval {
    let (a, left_closed) = match first {
        End::Infinite => (f64::NEG_INFINITY, false),
        // F(a-) = F(k - 1) for a closed left end at k.
        End::Cut(Cut::Before(k)) => (k as f64, true),
        End::Cut(Cut::At(k)) => (k as f64, false),
    };
    let (b, right_closed) = match second {
        End::Infinite => (f64::INFINITY, false),
        End::Cut(Cut::At(k)) => (k as f64, true),
        End::Cut(Cut::Before(k)) => (k as f64, false),
    };
    LatticeInterval::new(a, b, left_closed, right_closed).expect("cuts are ordered")
}

fn ordered(p: End, q: End) -> LatticeInterval {
    match (p, q) {
        (End::Cut(x), End::Cut(y)) if y < x => interval_between(q, p),
        (End::Infinite, End::Cut(_)) => interval_between(End::Infinite, q),
        (End::Cut(_), End::Infinite) => interval_between(End::Infinite, p),
        _ => interval_between(p, q),
    }
}

/// Smaller under (length, left endpoint).
fn shorter(x: &LatticeInterval, y: &LatticeInterval) -> bool {
    match x.length().partial_cmp(&y.length()) {
        Some(Ordering::Less) => true,
        Some(Ordering::Greater) => false,
        _ => x.a() < y.a(),
    }
}

/// Worst interval error of a tabulated law and the smallest interval
/// attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableDiscrepancy {
    pub max_two_sided: f64,
    pub witness_interval: LatticeInterval,
    pub kolmogorov: f64,
    pub kolmogorov_witness: f64,
}

pub fn table_discrepancy(table: &LawTable) -> TableDiscrepancy {
    let profile = deviation_profile(table);
    let (d_max, d_min) = table_extrema(&profile);
    let max_two_sided = d_max - d_min;

    let ends = |target: f64| -> Vec<End> {
        let mut v: Vec<End> = profile
            .iter()
            .filter(|(_, d)| (d - target).abs() <= TIE)
            .map(|&(c, _)| End::Cut(c))
            .collect();
        if target.abs() <= TIE {
            v.push(End::Infinite);
        }
        v
    };
    let tops = ends(d_max);
    let bottoms = ends(d_min);
    let mut witness: Option<LatticeInterval> = None;
    for &p in &tops {
        for &q in &bottoms {
            if p == q {
                continue;
            }
            let cand = ordered(p, q);
            if witness.as_ref().map_or(true, |w| shorter(&cand, w)) {
                witness = Some(cand);
            }
        }
    }
    let witness_interval = witness.unwrap_or_else(LatticeInterval::whole_line);

    let mut kolmogorov = 0.0;
    let mut kolmogorov_witness = f64::NAN;
    for &(c, d) in &profile {
        if d.abs() > kolmogorov {
            kolmogorov = d.abs();
            kolmogorov_witness = c.point() as f64;
        }
    }
    TableDiscrepancy { max_two_sided, witness_interval, kolmogorov, kolmogorov_witness }
}

/// Exact worst-case discrepancies of a law against its moment-matched normal,
/// next to the guaranteed lower bound and the certified upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub max_two_sided: f64,
    pub witness_interval: LatticeInterval,
    pub kolmogorov_exact: f64,
    pub kolmogorov_witness: f64,
    /// Bound on how much the values above can miss because the support was
    /// truncated; zero for finite supports.
    pub truncation_allowance: f64,
    pub lower_guarantee: f64,
    pub upper_certificate: f64,
}

pub fn max_interval_discrepancy(law: &DiscreteLaw) -> Result<DiscrepancyReport> {
    let sigma = law.require_spread()?;
    let table = law.tabulate();
    let t = table_discrepancy(&table);
    Ok(DiscrepancyReport {
        max_two_sided: t.max_two_sided,
        witness_interval: t.witness_interval,
        kolmogorov_exact: t.kolmogorov,
        kolmogorov_witness: t.kolmogorov_witness,
        truncation_allowance: truncation_allowance(&table),
        lower_guarantee: concentration_lower_bound(sigma),
        upper_certificate: two_sided_certificate(law)?,
    })
}

/// Beyond the last tabulated point the table's `F` is 1 while the true `F`
/// lies in `[1 - tail, 1]`, and `G` is within `Phi`'s upper tail of 1.
fn truncation_allowance(table: &LawTable) -> f64 {
    if table.tail() == 0.0 {
        return 0.0;
    }
    let z = (table.last() as f64 - table.mean()) / table.sd();
    table.tail() + phi_sf(z)
}

/// `(value, witness)` with `value = sup_x |F(x) - G(x)|`.
pub fn kolmogorov_exact(law: &DiscreteLaw) -> Result<(f64, f64)> {
    law.require_spread()?;
    let t = table_discrepancy(&law.tabulate());
    Ok((t.kolmogorov, t.kolmogorov_witness))
}

/// Worst errors of the continuity-corrected approximation for
/// Binomial(n, 1/2) over intervals with half-integer endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfIntegerDiscrepancy {
    /// Over bounded intervals `(k + 1/2, l + 1/2)`.
    pub bounded: f64,
    pub bounded_witness: LatticeInterval,
    /// Over rays with one half-integer endpoint.
    pub unbounded: f64,
    pub unbounded_witness: LatticeInterval,
}

/// Exact maximum of `|P(I) - (G(b) - G(a))|` over half-integer endpoints.
///
/// With `E(k) = F(k) - G(k + 1/2)` for `k = -1, ..., n` the error of
/// `(k + 1/2, l + 1/2)` is `E(l) - E(k)`, and that of a ray is `+-E(k)`.
pub fn symmetric_half_integer_discrepancy(n: u64) -> Result<HalfIntegerDiscrepancy> {
    if n == 0 {
        return Err(Error::InvalidParameter("binomial needs n >= 1".into()));
    }
    let law = DiscreteLaw::binomial(n, 0.5)?;
    let table = law.tabulate();
    let e: Vec<(i64, f64)> = (-1..=n as i64).map(|k| (k, table.deviation(k, k as f64 + 0.5))).collect();

    let (mut imax, mut imin) = (0, 0);
    for (i, &(_, v)) in e.iter().enumerate() {
        if v > e[imax].1 + TIE {
            imax = i;
        }
        if v < e[imin].1 - TIE {
            imin = i;
        }
    }
    let (i, j) = if imax < imin { (imax, imin) } else { (imin, imax) };
    let half = |k: i64| k as f64 + 0.5;
    let bounded = e[imax].1 - e[imin].1;
    let bounded_witness = LatticeInterval::open(half(e[i].0), half(e[j].0))?;

    // Ray: prefer the upper one `(k + 1/2, inf)` on ties, it has P = 1 when
    // it covers the support.
    let mut best = 0;
    for (idx, &(_, v)) in e.iter().enumerate() {
        if v.abs() > e[best].1.abs() + TIE {
            best = idx;
        }
    }
    let unbounded = e[best].1.abs();
    let unbounded_witness = LatticeInterval::upper_ray(half(e[best].0), false)?;
    Ok(HalfIntegerDiscrepancy { bounded, bounded_witness, unbounded, unbounded_witness })
}
