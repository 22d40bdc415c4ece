//! Bound checks over scannable ranges, evaluated at the points where the
//! piecewise-monotone statistics attain their extrema: both endpoints of
//! each prime gap (x = p and x just below the next prime), or both
//! endpoints of each prime-power gap for the ψ-based statistics.

use alloc::vec::Vec;

use crate::chebyshev::ThetaTable;
use crate::error::{Error, Result};
use crate::fmath;
use crate::mertens::point_from_cursor;
use crate::numeric::constants::PI;
use crate::primes::PrimeCache;
use crate::sweep::{CacheTotals, EventCursor, PrimeCursor};

use super::{d_from, e_of_with, f_from, u_v_points, EOptions};

/// The checks this crate knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    /// |R(x)| ≤ log x/(8π√x)
    Robin13,
    /// |Δ(x)| ≤ √x·log²x/(8π)
    Koch22iii,
    /// A(x) = Q·√x·log x against the window [1.5, 2.5]
    NarrowA18,
    /// H·√x·log x against the window −2 ± 5·δ₀
    NarrowH25,
    /// D·√x·log x against [17/30, 23/30] and E·√x·log x against [−92/30, −68/30]
    WindowDE210,
    /// H ≤ D + E within combined error bounds, and F ≤ 0
    Unconditional211,
    /// sup of ∫₀ˣ(ψ(t)−t)²dt / x²
    Cramer31iii,
    /// |∫₀ˣ(ψ(t)−t)dt| < 0.1·x^{3/2}
    InghamProp4,
    /// U_k against k^{−1/2+ε} and U_k·√p_k·log p_k against (−2.5−ε, −1.5+ε)
    Uk35,
    /// V_k against k^{−1/2+ε} and V_k·√p_k/log p_k against (1+ε)/(4π)
    Vk35,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::Robin13,
        CheckId::Koch22iii,
        CheckId::NarrowA18,
        CheckId::NarrowH25,
        CheckId::WindowDE210,
        CheckId::Unconditional211,
        CheckId::Cramer31iii,
        CheckId::InghamProp4,
        CheckId::Uk35,
        CheckId::Vk35,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Robin13 => "robin_13",
            CheckId::Koch22iii => "koch_22iii",
            CheckId::NarrowA18 => "narrow_A_18",
            CheckId::NarrowH25 => "narrow_H_25",
            CheckId::WindowDE210 => "window_D_E_210",
            CheckId::Unconditional211 => "unconditional_211",
            CheckId::Cramer31iii => "cramer_31iii",
            CheckId::InghamProp4 => "ingham_prop4",
            CheckId::Uk35 => "uk_35",
            CheckId::Vk35 => "vk_35",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckId> {
        CheckId::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Tunables shared by all checks; every field has a sensible default.
#[derive(Debug, Clone, Copy)]
pub struct CheckParams {
    /// ε in the k^{−1/2+ε} and (1+ε)/(4π) criteria.
    pub eps: f64,
    /// Window half-width parameter: the H window is −2 ± 5·δ₀.
    pub delta0: f64,
    /// Integration horizon for E; defaults to the cache limit.
    pub t_max: Option<f64>,
    /// Absolute quadrature tolerance for E; default is scale-relative.
    pub quad_tol: Option<f64>,
    /// Number of log-spaced points for the E-based statistics.
    pub e_points: usize,
    /// Violation threshold for the Cramér ratio.
    pub cramer_threshold: f64,
    /// Cap on individually recorded violations (the count is always exact).
    pub max_recorded_violations: usize,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            eps: 0.25,
            delta0: 0.1,
            t_max: None,
            quad_tol: None,
            e_points: 48,
            cramer_threshold: 0.05,
            max_recorded_violations: 1000,
        }
    }
}

/// A point where a check's inequality failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub stat: &'static str,
    /// The x (or k) where the violation occurred.
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Running extrema of one normalized statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatExtrema {
    pub stat: &'static str,
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

impl StatExtrema {
    fn new(stat: &'static str) -> Self {
        Self {
            stat,
            min: f64::INFINITY,
            argmin: f64::NAN,
            max: f64::NEG_INFINITY,
            argmax: f64::NAN,
        }
    }

    fn observe(&mut self, at: f64, value: f64) {
        if value < self.min {
            self.min = value;
            self.argmin = at;
        }
        if value > self.max {
            self.max = value;
            self.argmax = at;
        }
    }
}

/// Outcome of one check over one range.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaReport {
    pub check_id: CheckId,
    pub lo: f64,
    pub hi: f64,
    pub points_evaluated: u64,
    /// Exact number of violating points (each grid point counts once even
    /// if several statistics fail there).
    pub violation_count: u64,
    /// The first `max_recorded_violations` violations, in evaluation order.
    pub violations: Vec<Violation>,
    /// Smallest sampled point from which no violation was observed;
    /// `None` when violations persist to the end of the range.
    pub onset: Option<f64>,
    pub extrema: Vec<StatExtrema>,
}

impl CriteriaReport {
    /// True when violations persist to the end of the range.
    pub fn violations_persist(&self) -> bool {
        self.violation_count > 0 && self.onset.is_none()
    }
}

struct Collector {
    violations: Vec<Violation>,
    cap: usize,
    violation_count: u64,
    points: u64,
}

impl Collector {
    fn new(cap: usize) -> Self {
        Self {
            violations: Vec::new(),
            cap,
            violation_count: 0,
            points: 0,
        }
    }

    fn violation(&mut self, stat: &'static str, at: f64, lhs: f64, rhs: f64) {
        if self.violations.len() < self.cap {
            self.violations.push(Violation { stat, at, lhs, rhs });
        }
    }
}

#[derive(Default, Clone, Copy)]
struct OnsetTracker {
    onset: Option<f64>,
}

impl OnsetTracker {
    fn observe(&mut self, at: f64, violated: bool) {
        if violated {
            self.onset = None;
        } else if self.onset.is_none() {
            self.onset = Some(at);
        }
    }

    /// Combine with another grid: clean only from where both are clean.
    fn merge(self, other: OnsetTracker) -> OnsetTracker {
        let onset = match (self.onset, other.onset) {
            (Some(a), Some(b)) => Some(if a > b { a } else { b }),
            _ => None,
        };
        OnsetTracker { onset }
    }
}

/// Ascending sample positions at both endpoints of every prime gap meeting
/// [lo, hi], with lo and hi themselves included.
fn gap_endpoint_samples<'a>(primes: &'a [u64], lo: f64, hi: f64) -> impl Iterator<Item = f64> + 'a {
    let start = primes.partition_point(|&p| (p as f64) <= lo);
    let inner = primes[start..]
        .iter()
        .take_while(move |&&p| (p as f64) <= hi)
        .flat_map(|&p| {
            let pf = p as f64;
            [pf.next_down(), pf]
        });
    dedup_ascending(
        core::iter::once(lo)
            .chain(inner)
            .chain(core::iter::once(hi)),
        lo,
        hi,
    )
}

fn dedup_ascending(iter: impl Iterator<Item = f64>, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let mut last = f64::NEG_INFINITY;
    iter.filter(move |&x| {
        let keep = x > last && x >= lo && x <= hi;
        if keep {
            last = x;
        }
        keep
    })
}

/// As [`gap_endpoint_samples`], over prime-power events.
fn event_samples(cache: &PrimeCache, lo: f64, hi: f64) -> Vec<f64> {
    let mut positions: Vec<f64> = Vec::new();
    positions.push(lo);
    for ev in crate::primes::stream_prime_powers(cache, cache.limit()).expect("limit within cache")
    {
        let vf = ev.value as f64;
        if vf <= lo {
            continue;
        }
        if vf > hi {
            break;
        }
        positions.push(vf.next_down());
        positions.push(vf);
    }
    positions.push(hi);
    positions
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (llo, lhi) = (fmath::ln(lo), fmath::ln(hi));
    let mut grid: Vec<f64> = (0..n)
        .map(|i| fmath::exp(llo + (lhi - llo) * i as f64 / (n - 1) as f64))
        .collect();
    grid[0] = lo;
    let last = grid.len() - 1;
    grid[last] = hi;
    let mut prev = f64::NEG_INFINITY;
    grid.retain(|&x| {
        let keep = x > prev;
        if keep {
            prev = x;
        }
        keep
    });
    grid
}

fn validate_range(lo: f64, hi: f64, min_lo: f64, cache: &PrimeCache) -> Result<()> {
    if lo.is_nan() || lo < min_lo {
        return Err(Error::Domain {
            what: "check range start",
            value: lo,
        });
    }
    if hi.is_nan() || hi < lo {
        return Err(Error::Domain {
            what: "check range end",
            value: hi,
        });
    }
    if hi > cache.limit() as f64 {
        return Err(Error::InsufficientCache {
            requested: hi,
            limit: cache.limit(),
        });
    }
    Ok(())
}

/// Run one check over [lo, hi] (a k-range for the U/V checks).
pub fn run_check(
    check_id: CheckId,
    lo: f64,
    hi: f64,
    cache: &PrimeCache,
    params: &CheckParams,
) -> Result<CriteriaReport> {
    match check_id {
        CheckId::Robin13 => mertens_endpoint_check(check_id, lo, hi, cache, params, robin_point),
        CheckId::Koch22iii => mertens_endpoint_check(check_id, lo, hi, cache, params, koch_point),
        CheckId::NarrowA18 => {
            mertens_endpoint_check(check_id, lo, hi, cache, params, narrow_a_point)
        }
        CheckId::NarrowH25 => narrow_h_check(lo, hi, cache, params),
        CheckId::WindowDE210 => window_de_check(lo, hi, cache, params),
        CheckId::Unconditional211 => unconditional_check(lo, hi, cache, params),
        CheckId::Cramer31iii => event_check(check_id, lo, hi, cache, params, cramer_point),
        CheckId::InghamProp4 => event_check(check_id, lo, hi, cache, params, ingham_point),
        CheckId::Uk35 => uv_check(check_id, lo, hi, cache, params),
        CheckId::Vk35 => uv_check(check_id, lo, hi, cache, params),
    }
}

/// Per-point outcome handed back by the simple per-sample checks.
struct PointOutcome {
    stat_value: f64,
    violated: bool,
    lhs: f64,
    rhs: f64,
}

fn robin_point(x: f64, cur: &PrimeCursor, _: &CheckParams) -> PointOutcome {
    let pt = point_from_cursor(x, cur);
    let bound = fmath::ln(x) / (8.0 * PI * fmath::sqrt(x));
    let lhs = fmath::abs(pt.r);
    PointOutcome {
        stat_value: lhs / bound,
        violated: lhs > bound,
        lhs,
        rhs: bound,
    }
}

fn koch_point(x: f64, cur: &PrimeCursor, _: &CheckParams) -> PointOutcome {
    let lx = fmath::ln(x);
    let bound = fmath::sqrt(x) * lx * lx / (8.0 * PI);
    let lhs = fmath::abs(cur.theta.total() - x);
    PointOutcome {
        stat_value: lhs / bound,
        violated: lhs > bound,
        lhs,
        rhs: bound,
    }
}

fn narrow_a_point(x: f64, cur: &PrimeCursor, _: &CheckParams) -> PointOutcome {
    let a = point_from_cursor(x, cur).a;
    let violated = !(1.5..=2.5).contains(&a);
    let rhs = if a > 2.5 { 2.5 } else { 1.5 };
    PointOutcome {
        stat_value: a,
        violated,
        lhs: a,
        rhs,
    }
}

fn stat_name(check_id: CheckId) -> &'static str {
    match check_id {
        CheckId::Robin13 => "robin_ratio",
        CheckId::Koch22iii => "koch_ratio",
        CheckId::NarrowA18 => "A_scaled",
        CheckId::NarrowH25 => "H_scaled",
        CheckId::Cramer31iii => "cramer_ratio",
        CheckId::InghamProp4 => "ingham_ratio",
        _ => "stat",
    }
}

fn mertens_endpoint_check(
    check_id: CheckId,
    lo: f64,
    hi: f64,
    cache: &PrimeCache,
    params: &CheckParams,
    point: fn(f64, &PrimeCursor, &CheckParams) -> PointOutcome,
) -> Result<CriteriaReport> {
    validate_range(lo, hi, 3.0, cache)?;
    let name = stat_name(check_id);
    let mut collector = Collector::new(params.max_recorded_violations);
    let mut extrema = StatExtrema::new(name);
    let mut onset = OnsetTracker::default();
    let mut cur = PrimeCursor::new();
    for x in gap_endpoint_samples(cache.primes(), lo, hi) {
        cur.advance_to(cache.primes(), x);
        let out = point(x, &cur, params);
        extrema.observe(x, out.stat_value);
        if out.violated {
            collector.violation_count += 1;
            collector.violation(name, x, out.lhs, out.rhs);
        }
        onset.observe(x, out.violated);
        collector.points += 1;
    }
    Ok(finish(
        check_id,
        lo,
        hi,
        collector,
        onset,
        alloc::vec![extrema],
    ))
}

fn narrow_h_check(
    lo: f64,
    hi: f64,
    cache: &PrimeCache,
    params: &CheckParams,
) -> Result<CriteriaReport> {
    validate_range(lo, hi, 3.0, cache)?;
    let totals = CacheTotals::compute(cache);
    let (w_lo, w_hi) = (-2.0 - 5.0 * params.delta0, -2.0 + 5.0 * params.delta0);
    let t_err = super::t_tail_bound(cache.limit());
    let mut collector = Collector::new(params.max_recorded_violations);
    let mut extrema = StatExtrema::new("H_scaled");
    let mut onset = OnsetTracker::default();
    let mut cur = PrimeCursor::new();
    for x in gap_endpoint_samples(cache.primes(), lo, hi) {
        cur.advance_to(cache.primes(), x);
        let pt = point_from_cursor(x, &cur);
        let h = -pt.q - (totals.tail_terms - cur.tail_terms.total());
        let scale = fmath::sqrt(x) * fmath::ln(x);
        let hs = h * scale;
        let margin = t_err * scale;
        extrema.observe(x, hs);
        let violated = hs > w_hi + margin || hs < w_lo - margin;
        if violated {
            let rhs = if hs > w_hi + margin { w_hi } else { w_lo };
            collector.violation_count += 1;
            collector.violation("H_scaled", x, hs, rhs);
        }
        onset.observe(x, violated);
        collector.points += 1;
    }
    Ok(finish(
        CheckId::NarrowH25,
        lo,
        hi,
        collector,
        onset,
        alloc::vec![extrema],
    ))
}

fn window_de_check(
    lo: f64,
    hi: f64,
    cache: &PrimeCache,
    params: &CheckParams,
) -> Result<CriteriaReport> {
    validate_range(lo, hi, 3.0, cache)?;
    let (d_lo, d_hi) = (17.0 / 30.0, 23.0 / 30.0);
    let (e_lo, e_hi) = (-92.0 / 30.0, -68.0 / 30.0);

    let mut collector = Collector::new(params.max_recorded_violations);
    let mut d_extrema = StatExtrema::new("D_scaled");
    let mut d_onset = OnsetTracker::default();
    let mut cur = PrimeCursor::new();
    for x in gap_endpoint_samples(cache.primes(), lo, hi) {
        cur.advance_to(cache.primes(), x);
        let ds = d_from(x, cur.phi_at(x)) * fmath::sqrt(x) * fmath::ln(x);
        d_extrema.observe(x, ds);
        let violated = !(d_lo..=d_hi).contains(&ds);
        if violated {
            collector.violation_count += 1;
            collector.violation("D_scaled", x, ds, if ds > d_hi { d_hi } else { d_lo });
        }
        d_onset.observe(x, violated);
        collector.points += 1;
    }

    let table = ThetaTable::new(cache);
    let t_max = params.t_max.unwrap_or(cache.limit() as f64);
    let opts = EOptions {
        quad_tol: params.quad_tol,
        max_rel_error: None,
    };
    let mut e_extrema = StatExtrema::new("E_scaled");
    let mut e_onset = OnsetTracker::default();
    for &x in &log_grid(lo, hi, params.e_points) {
        let (e, _) = e_of_with(x, t_max, &table, &opts)?;
        let scale = fmath::sqrt(x) * fmath::ln(x);
        let es = e.value * scale;
        let margin = e.error_bound * scale;
        e_extrema.observe(x, es);
        let violated = es > e_hi + margin || es < e_lo - margin;
        if violated {
            collector.violation_count += 1;
            collector.violation("E_scaled", x, es, if es > e_hi { e_hi } else { e_lo });
        }
        e_onset.observe(x, violated);
        collector.points += 1;
    }

    let onset = d_onset.merge(e_onset);
    Ok(finish(
        CheckId::WindowDE210,
        lo,
        hi,
        collector,
        onset,
        alloc::vec![d_extrema, e_extrema],
    ))
}

fn unconditional_check(
    lo: f64,
    hi: f64,
    cache: &PrimeCache,
    params: &CheckParams,
) -> Result<CriteriaReport> {
    validate_range(lo, hi, 3.0, cache)?;
    let mut collector = Collector::new(params.max_recorded_violations);

    // F(x) ≤ 0 at every gap endpoint; the value is exact so the tolerance
    // is zero.
    let mut f_extrema = StatExtrema::new("F");
    let mut f_onset = OnsetTracker::default();
    let mut cur = PrimeCursor::new();
    for x in gap_endpoint_samples(cache.primes(), lo, hi) {
        cur.advance_to(cache.primes(), x);
        let f = f_from(x, cur.theta.total());
        f_extrema.observe(x, f);
        let violated = f > 0.0;
        if violated {
            collector.violation_count += 1;
            collector.violation("F", x, f, 0.0);
        }
        f_onset.observe(x, violated);
        collector.points += 1;
    }

    // H ≤ D + E within the combined truncation bounds, on a log grid.
    let table = ThetaTable::new(cache);
    let totals = CacheTotals::compute(cache);
    let t_max = params.t_max.unwrap_or(cache.limit() as f64);
    let opts = EOptions {
        quad_tol: params.quad_tol,
        max_rel_error: None,
    };
    let mut h_extrema = StatExtrema::new("H_minus_D_minus_E");
    let mut h_onset = OnsetTracker::default();
    for &x in &log_grid(lo, hi, params.e_points) {
        let dec = super::decompose_with(x, t_max, cache, &table, &totals, &opts)?;
        let excess = dec.h.value - dec.d - dec.e.value;
        let bound = dec.h.error_bound + dec.e.error_bound;
        h_extrema.observe(x, excess);
        let violated = excess > bound;
        if violated {
            collector.violation_count += 1;
            collector.violation("H_minus_D_minus_E", x, excess, bound);
        }
        h_onset.observe(x, violated);
        collector.points += 1;
    }

    let onset = f_onset.merge(h_onset);
    Ok(finish(
        CheckId::Unconditional211,
        lo,
        hi,
        collector,
        onset,
        alloc::vec![f_extrema, h_extrema],
    ))
}

fn cramer_point(x: f64, cur: &EventCursor, params: &CheckParams) -> PointOutcome {
    let ratio = cur.cramer_at(x) / (x * x);
    PointOutcome {
        stat_value: ratio,
        violated: ratio >= params.cramer_threshold,
        lhs: ratio,
        rhs: params.cramer_threshold,
    }
}

fn ingham_point(x: f64, cur: &EventCursor, _: &CheckParams) -> PointOutcome {
    let lhs = fmath::abs(cur.psi_primitive_at(x));
    let bound = 0.1 * x * fmath::sqrt(x);
    PointOutcome {
        stat_value: lhs / bound,
        violated: lhs >= bound,
        lhs,
        rhs: bound,
    }
}

fn event_check(
    check_id: CheckId,
    lo: f64,
    hi: f64,
    cache: &PrimeCache,
    params: &CheckParams,
    point: fn(f64, &EventCursor, &CheckParams) -> PointOutcome,
) -> Result<CriteriaReport> {
    validate_range(lo, hi, 2.0, cache)?;
    let name = stat_name(check_id);
    let mut collector = Collector::new(params.max_recorded_violations);
    let mut extrema = StatExtrema::new(name);
    let mut onset = OnsetTracker::default();
    let mut cur = EventCursor::new(cache);
    for x in dedup_ascending(event_samples(cache, lo, hi).into_iter(), lo, hi) {
        cur.advance_to(x);
        let out = point(x, &cur, params);
        extrema.observe(x, out.stat_value);
        if out.violated {
            collector.violation_count += 1;
            collector.violation(name, x, out.lhs, out.rhs);
        }
        onset.observe(x, out.violated);
        collector.points += 1;
    }
    Ok(finish(
        check_id,
        lo,
        hi,
        collector,
        onset,
        alloc::vec![extrema],
    ))
}

fn uv_check(
    check_id: CheckId,
    lo: f64,
    hi: f64,
    cache: &PrimeCache,
    params: &CheckParams,
) -> Result<CriteriaReport> {
    if lo.is_nan() || hi.is_nan() || lo < 1.0 || hi < lo {
        return Err(Error::Domain {
            what: "k range",
            value: lo,
        });
    }
    let k_lo = lo as u64;
    let k_lo = if (k_lo as f64) < lo {
        k_lo + 1
    } else {
        k_lo.max(1)
    };
    let k_hi = hi as u64;
    if k_hi > cache.count() {
        return Err(Error::InsufficientCache {
            requested: hi,
            limit: cache.limit(),
        });
    }
    let ks: Vec<u64> = (k_lo..=k_hi).collect();
    let points = u_v_points(&ks, cache)?;

    let eps = params.eps;
    let mut collector = Collector::new(params.max_recorded_violations);
    let mut onset = OnsetTracker::default();
    let (mut power_ex, mut scaled_ex, power_name, scaled_name) = match check_id {
        CheckId::Uk35 => (
            StatExtrema::new("U_power"),
            StatExtrema::new("U_scaled"),
            "U_power",
            "U_scaled",
        ),
        _ => (
            StatExtrema::new("V_power"),
            StatExtrema::new("V_scaled"),
            "V_power",
            "V_scaled",
        ),
    };

    for pt in &points {
        let k = pt.k as f64;
        let p = pt.p_k as f64;
        let lp = fmath::ln(p);
        let threshold = fmath::exp((-0.5 + eps) * fmath::ln(k));
        let mut violated = false;
        match check_id {
            CheckId::Uk35 => {
                let u = pt.u.value;
                power_ex.observe(k, u / threshold);
                if fmath::abs(u) >= threshold {
                    violated = true;
                    collector.violation(power_name, k, u, threshold);
                }
                let scaled = u * fmath::sqrt(p) * lp;
                scaled_ex.observe(k, scaled);
                let (w_lo, w_hi) = (-2.5 - eps, -1.5 + eps);
                if !(w_lo..=w_hi).contains(&scaled) {
                    violated = true;
                    collector.violation(
                        scaled_name,
                        k,
                        scaled,
                        if scaled > w_hi { w_hi } else { w_lo },
                    );
                }
            }
            _ => {
                let v = pt.v.value;
                power_ex.observe(k, v / threshold);
                if v >= threshold {
                    violated = true;
                    collector.violation(power_name, k, v, threshold);
                }
                let scaled = v * fmath::sqrt(p) / lp;
                scaled_ex.observe(k, scaled);
                let limit = (1.0 + eps) / (4.0 * PI);
                if scaled >= limit {
                    violated = true;
                    collector.violation(scaled_name, k, scaled, limit);
                }
            }
        }
        if violated {
            collector.violation_count += 1;
        }
        onset.observe(k, violated);
        collector.points += 1;
    }
    Ok(finish(
        check_id,
        lo,
        hi,
        collector,
        onset,
        alloc::vec![power_ex, scaled_ex],
    ))
}

fn finish(
    check_id: CheckId,
    lo: f64,
    hi: f64,
    collector: Collector,
    onset: OnsetTracker,
    extrema: Vec<StatExtrema>,
) -> CriteriaReport {
    CriteriaReport {
        check_id,
        lo,
        hi,
        points_evaluated: collector.points,
        violation_count: collector.violation_count,
        violations: collector.violations,
        onset: onset.onset,
        extrema,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::build_cache;

    fn cache_1e6() -> PrimeCache {
        build_cache(1_000_000, 1 << 16).unwrap()
    }

    #[test]
    fn check_names_round_trip() {
        for id in CheckId::ALL {
            assert_eq!(CheckId::from_name(id.name()), Some(id));
        }
        assert_eq!(CheckId::from_name("nonsense"), None);
    }

    #[test]
    fn koch_holds_on_mid_range() {
        let cache = cache_1e6();
        let report = run_check(
            CheckId::Koch22iii,
            1e3,
            1e6,
            &cache,
            &CheckParams::default(),
        )
        .unwrap();
        assert_eq!(
            report.violation_count, 0,
            "violations: {:?}",
            report.violations
        );
        assert_eq!(report.onset, Some(1e3));
        assert!(report.extrema[0].max < 1.0);
        assert!(report.points_evaluated > 100_000);
    }

    #[test]
    fn robin_holds_on_mid_range() {
        let cache = cache_1e6();
        let report =
            run_check(CheckId::Robin13, 1e3, 1e6, &cache, &CheckParams::default()).unwrap();
        assert_eq!(
            report.violation_count, 0,
            "violations: {:?}",
            report.violations
        );
        assert!(report.extrema[0].max < 1.0);
    }

    #[test]
    fn ingham_violation_at_ten() {
        // |∫₀¹⁰(ψ−t)dt| = 16.23... > 0.1·10^{3/2} = 3.16...
        let cache = cache_1e6();
        let report = run_check(
            CheckId::InghamProp4,
            10.0,
            10.0,
            &cache,
            &CheckParams::default(),
        )
        .unwrap();
        assert_eq!(report.violation_count, 1);
        assert!((report.violations[0].lhs - 16.235_826_792_359_556).abs() < 1e-6);
        assert!((report.violations[0].rhs - 0.1 * 10f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn ingham_violations_at_small_x_with_onset() {
        let cache = cache_1e6();
        let report = run_check(
            CheckId::InghamProp4,
            3.0,
            1e5,
            &cache,
            &CheckParams::default(),
        )
        .unwrap();
        assert!(report.violation_count > 0);
        let onset = report.onset.expect("bound must hold from some onset on");
        assert!(onset < 1e3, "onset {onset}");
        assert!(!report.violations_persist());
    }

    #[test]
    fn narrow_a_single_point() {
        let cache = cache_1e6();
        let report = run_check(
            CheckId::NarrowA18,
            10.0,
            10.0,
            &cache,
            &CheckParams::default(),
        )
        .unwrap();
        assert_eq!(report.points_evaluated, 1);
        assert!((report.extrema[0].min - 2.781_130_787_972_413).abs() < 1e-9);
        assert!((report.extrema[0].max - report.extrema[0].min).abs() < 1e-15);
        // 2.78 lies outside [1.5, 2.5]
        assert_eq!(report.violation_count, 1);
        assert!(report.violations_persist());
    }

    #[test]
    fn narrow_h_window_scales_with_delta0() {
        let cache = cache_1e6();
        let tight = CheckParams {
            delta0: 0.001,
            ..Default::default()
        };
        let loose = CheckParams {
            delta0: 10.0,
            ..Default::default()
        };
        let r_tight = run_check(CheckId::NarrowH25, 1e4, 1e5, &cache, &tight).unwrap();
        let r_loose = run_check(CheckId::NarrowH25, 1e4, 1e5, &cache, &loose).unwrap();
        assert!(r_tight.violation_count > 0);
        assert_eq!(r_loose.violation_count, 0);
    }

    #[test]
    fn cramer_reports_extrema() {
        let cache = cache_1e6();
        let report = run_check(
            CheckId::Cramer31iii,
            1e3,
            1e5,
            &cache,
            &CheckParams::default(),
        )
        .unwrap();
        assert_eq!(report.violation_count, 0);
        assert!(
            report.extrema[0].max < 0.05,
            "sup {}",
            report.extrema[0].max
        );
        assert!(report.extrema[0].max > 0.0);
    }

    #[test]
    fn unconditional_holds_everywhere_sampled() {
        let cache = cache_1e6();
        let params = CheckParams {
            e_points: 8,
            ..Default::default()
        };
        let report = run_check(CheckId::Unconditional211, 10.0, 1e5, &cache, &params).unwrap();
        assert_eq!(
            report.violation_count, 0,
            "violations: {:?}",
            report.violations
        );
        // F extrema must be non-positive
        let f = report.extrema.iter().find(|e| e.stat == "F").unwrap();
        assert!(f.max <= 0.0);
    }

    #[test]
    fn window_de_reports_both_stats() {
        let cache = cache_1e6();
        let params = CheckParams {
            e_points: 6,
            ..Default::default()
        };
        let report = run_check(CheckId::WindowDE210, 1e5, 9e5, &cache, &params).unwrap();
        let d = report
            .extrema
            .iter()
            .find(|e| e.stat == "D_scaled")
            .unwrap();
        let e = report
            .extrema
            .iter()
            .find(|e| e.stat == "E_scaled")
            .unwrap();
        assert!(d.min > 0.0 && d.max < 1.0);
        assert!(e.max < 0.0 && e.min > -4.0);
    }

    #[test]
    fn uv_checks_hold_in_tested_band() {
        let cache = cache_1e6();
        let params = CheckParams::default();
        let u = run_check(CheckId::Uk35, 100.0, 2000.0, &cache, &params).unwrap();
        assert_eq!(
            u.violation_count,
            0,
            "violations: {:?}",
            &u.violations[..u.violations.len().min(3)]
        );
        let v = run_check(CheckId::Vk35, 1000.0, 2000.0, &cache, &params).unwrap();
        assert_eq!(
            v.violation_count,
            0,
            "violations: {:?}",
            &v.violations[..v.violations.len().min(3)]
        );
        let vs = v.extrema.iter().find(|e| e.stat == "V_scaled").unwrap();
        assert!(vs.max < (1.0 + params.eps) / (4.0 * PI));
    }

    #[test]
    fn range_validation() {
        let cache = build_cache(1000, 64).unwrap();
        assert!(run_check(
            CheckId::Robin13,
            2.0,
            100.0,
            &cache,
            &CheckParams::default()
        )
        .is_err());
        assert!(run_check(
            CheckId::Robin13,
            100.0,
            10.0,
            &cache,
            &CheckParams::default()
        )
        .is_err());
        assert!(matches!(
            run_check(
                CheckId::Koch22iii,
                10.0,
                2000.0,
                &cache,
                &CheckParams::default()
            ),
            Err(Error::InsufficientCache { .. })
        ));
    }
}
