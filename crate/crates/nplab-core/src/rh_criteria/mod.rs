//! Tail identities, the narrow decomposition H = D + E + F, the U/V tail
//! sequences, and the bound checks built on all of them.
//!
//! The central objects:
//!
//! * `T(x) = Σ_{p>x} Σ_{k≥2} 1/(k·p^k) = Σ_{p>x} (log(p/(p−1)) − 1/p)`,
//!   computed to the cache limit with the rigorous tail bound `1/(2·limit)`
//!   (term-wise `Σ_{k≥2} 1/(k p^k) ≤ 1/(2p(p−1))`, telescoped over the
//!   integers beyond the limit).
//! * `H(x) = −Q(x) − T(x)`, which holds unconditionally and turns the slowly
//!   convergent limit defining H into a fast sum plus a bounded tail.
//! * The exact decomposition `H = D + E + F` with
//!   `D(x) = −Φ(x)(log x+1)/(x² log²x)`,
//!   `E(x) = ∫ₓ^∞ Φ(t)/(t³ log t)·(2 + 3/log t + 2/log²t) dt`, and
//!   `F(x) = log log θ(x) − log log x − Δ(x)/(x log x)` in mean-value-free
//!   form, so the identity is exact and only truncation error remains.
//!   F(x) ≤ 0 always, by concavity of log log.
//!
//! E's infinite upper limit is handled by a modeled tail beyond `t_max`
//! using the main term Φ(t) ≈ −(2/3)·t^{3/2} with a ±15% band; that band is
//! conditional on the square-root bound for Φ and is flagged as such
//! wherever it is reported.

mod checks;

pub use checks::{run_check, CheckId, CheckParams, CriteriaReport, StatExtrema, Violation};

use alloc::vec::Vec;

use crate::chebyshev::ThetaTable;
use crate::error::{Error, Result};
use crate::fmath;
use crate::mertens::point_from_cursor;
use crate::numeric::{adaptive_integral, constants::PI, ValueWithError};
use crate::primes::PrimeCache;
use crate::sweep::{CacheTotals, PrimeCursor};

pub use crate::sweep::CacheTotals as Totals;

/// H(x), its exact split and the residual of the identity H = D + E + F.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NarrowDecomposition {
    pub x: f64,
    pub h: ValueWithError,
    pub t: ValueWithError,
    pub d: f64,
    pub e: ValueWithError,
    pub f: f64,
    /// h − (d + e + f); its magnitude must stay within its own error bound.
    pub residual: ValueWithError,
    /// Magnitude of the modeled E-tail beyond t_max. This term (and the 15%
    /// band it contributes to `e.error_bound`) rides on the square-root
    /// bound for Φ and is therefore conditional, unlike everything else.
    pub e_tail_model: f64,
}

/// One entry of the U/V tail sequences at index k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UkPoint {
    pub k: u64,
    pub p_k: u64,
    /// U_k = Σ_{j>k} (1/p_j − 1/θ(p_j)), truncated at the cache limit.
    pub u: ValueWithError,
    /// V_k = Σ_{j>k} |1/p_j − 1/θ(p_j)|, truncated at the cache limit.
    pub v: ValueWithError,
}

/// Rigorous bound on the T-tail beyond the cache limit.
pub fn t_tail_bound(limit: u64) -> f64 {
    1.0 / (2.0 * limit as f64)
}

/// Modeled bound on the U/V tails beyond the cache limit: the envelope
/// |1/p − 1/θ(p)| ≤ log²p/(8π·p^{3/2}) integrated over t > limit, which is
/// (log²L + 4·log L + 8)/(4π·√L). Conditional on the square-root Δ bound.
pub fn uv_tail_bound(limit: u64) -> f64 {
    let l = fmath::ln(limit as f64);
    (l * l + 4.0 * l + 8.0) / (4.0 * PI * fmath::sqrt(limit as f64))
}

fn check_tail_domain(x: f64, cache: &PrimeCache, min: f64) -> Result<()> {
    if x.is_nan() || x < min {
        return Err(Error::Domain {
            what: "evaluation point",
            value: x,
        });
    }
    if x > cache.limit() as f64 {
        return Err(Error::InsufficientCache {
            requested: x,
            limit: cache.limit(),
        });
    }
    Ok(())
}

/// Cursor state snapshotted at x, plus whole-cache totals from the same pass.
struct SplitPass {
    at_x: PrimeCursor,
    totals: CacheTotals,
}

fn split_pass(x: f64, cache: &PrimeCache) -> SplitPass {
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    let at_x = cur.clone();
    cur.advance_to(cache.primes(), cache.limit() as f64);
    let totals = CacheTotals {
        theta: cur.theta.total(),
        log_ratio: cur.log_ratio.total(),
        recip: cur.recip.total(),
        tail_terms: cur.tail_terms.total(),
    };
    SplitPass { at_x, totals }
}

fn tail_from(at_x: &PrimeCursor, totals: &CacheTotals, limit: u64) -> ValueWithError {
    ValueWithError::new(
        totals.tail_terms - at_x.tail_terms.total(),
        t_tail_bound(limit),
    )
}

/// T(x) = Σ_{x<p≤limit} (log(p/(p−1)) − 1/p) with the tail bound 1/(2·limit).
pub fn tail_t(x: f64, cache: &PrimeCache) -> Result<ValueWithError> {
    check_tail_domain(x, cache, 1.0)?;
    let pass = split_pass(x, cache);
    Ok(tail_from(&pass.at_x, &pass.totals, cache.limit()))
}

/// As [`tail_t`], requiring the tail bound to meet `tol`; fails with the
/// cache limit that would be needed otherwise.
pub fn tail_t_with_tol(x: f64, cache: &PrimeCache, tol: f64) -> Result<ValueWithError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain {
            what: "tolerance",
            value: tol,
        });
    }
    let bound = t_tail_bound(cache.limit());
    if bound > tol {
        let required_limit = (0.5 / tol) as u64 + 1;
        return Err(Error::CacheBudget {
            requested_tol: tol,
            required_limit,
        });
    }
    tail_t(x, cache)
}

/// H(x) = −Q(x) − T(x), unconditionally; error bound is the T tail.
pub fn h_of(x: f64, cache: &PrimeCache) -> Result<ValueWithError> {
    check_tail_domain(x, cache, 3.0)?;
    let pass = split_pass(x, cache);
    let q = point_from_cursor(x, &pass.at_x).q;
    let t = tail_from(&pass.at_x, &pass.totals, cache.limit());
    Ok(ValueWithError::new(-q - t.value, t.error_bound))
}

/// H(x, y) = Σ_{x<p≤y} 1/p − log log θ(y) + log log θ(x), the finite
/// partial whose y→∞ limit is H(x). Kept as a cross-check on [`h_of`].
pub fn h_partial(x: f64, y: f64, cache: &PrimeCache) -> Result<f64> {
    check_tail_domain(x, cache, 3.0)?;
    if y.is_nan() || y < x {
        return Err(Error::Domain {
            what: "upper point (needs y ≥ x)",
            value: y,
        });
    }
    if y > cache.limit() as f64 {
        return Err(Error::InsufficientCache {
            requested: y,
            limit: cache.limit(),
        });
    }
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    let theta_x = cur.theta.total();
    let recip_to_x = cur.recip.total();
    cur.advance_to(cache.primes(), y);
    let theta_y = cur.theta.total();
    let between = cur.recip.total() - recip_to_x;
    Ok(between - fmath::ln(fmath::ln(theta_y)) + fmath::ln(fmath::ln(theta_x)))
}

/// D(x) = −Φ(x)(log x + 1)/(x²·log²x), exact.
pub fn d_of(x: f64, cache: &PrimeCache) -> Result<f64> {
    check_tail_domain(x, cache, 3.0)?;
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    Ok(d_from(x, cur.phi_at(x)))
}

fn d_from(x: f64, phi: f64) -> f64 {
    let lx = fmath::ln(x);
    -phi * (lx + 1.0) / (x * x * lx * lx)
}

/// F(x) = log log θ(x) − log log x − Δ(x)/(x·log x), the mean-value-free
/// curvature term; always ≤ 0 on x ≥ 3 by concavity of log log.
pub fn f_of(x: f64, cache: &PrimeCache) -> Result<f64> {
    check_tail_domain(x, cache, 3.0)?;
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    Ok(f_from(x, cur.theta.total()))
}

fn f_from(x: f64, theta: f64) -> f64 {
    let lx = fmath::ln(x);
    fmath::ln(fmath::ln(theta)) - fmath::ln(lx) - (theta - x) / (x * lx)
}

/// The kernel (1/(t·log t))″ = (2 + 3/log t + 2/log²t)/(t³·log t).
fn kernel(t: f64) -> f64 {
    let u = fmath::ln(t);
    (2.0 + 3.0 / u + 2.0 / u / u) / (t * t * t * u)
}

/// Options for [`e_of_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct EOptions {
    /// Absolute quadrature tolerance; `None` picks 1e-6 of E's natural
    /// scale (8/3)/(√x·log x).
    pub quad_tol: Option<f64>,
    /// When set, fail with a budget error if the conditional tail band
    /// alone exceeds this relative error.
    pub max_rel_error: Option<f64>,
}

/// E's natural magnitude (8/3)/(√x·log x); used for scaling tolerances.
pub fn e_scale(x: f64) -> f64 {
    (8.0 / 3.0) / (fmath::sqrt(x) * fmath::ln(x))
}

/// Size of the conditional band on E's modeled tail beyond `t_max`.
pub fn e_band(t_max: f64) -> f64 {
    0.15 * e_scale(t_max)
}

/// Smallest integration horizon whose conditional band fits `abs_tol`.
pub fn e_band_required_t_max(abs_tol: f64) -> f64 {
    // solve 0.15·(8/3)/(√T·log T) = abs_tol for T
    let c = 0.15 * (8.0 / 3.0) / abs_tol;
    let mut t = (c * c).max(16.0);
    for _ in 0..60 {
        t = (c / fmath::ln(t)) * (c / fmath::ln(t));
    }
    t
}

/// E(x) = ∫ₓ^∞ Φ(t)·(1/(t log t))″ dt, as quadrature over [x, t_max] plus
/// the modeled tail beyond t_max. The returned bound is the quadrature
/// estimate plus 15% of the modeled tail (the conditional band).
pub fn e_of(x: f64, t_max: f64, cache: &PrimeCache) -> Result<ValueWithError> {
    let table = ThetaTable::new(cache);
    e_of_with(x, t_max, &table, &EOptions::default()).map(|(e, _)| e)
}

/// As [`e_of`], reusing a prebuilt table; also returns the modeled tail
/// magnitude.
pub fn e_of_with(
    x: f64,
    t_max: f64,
    table: &ThetaTable<'_>,
    opts: &EOptions,
) -> Result<(ValueWithError, f64)> {
    if x.is_nan() || x < 3.0 {
        return Err(Error::Domain {
            what: "evaluation point",
            value: x,
        });
    }
    if t_max.is_nan() || t_max < x {
        return Err(Error::Domain {
            what: "integration horizon (needs t_max ≥ x)",
            value: t_max,
        });
    }
    if t_max > table.limit() as f64 {
        return Err(Error::InsufficientCache {
            requested: t_max,
            limit: table.limit(),
        });
    }
    if let Some(rel) = opts.max_rel_error {
        let band = 0.15 * two_thirds_tail_scale(t_max);
        if band > rel * e_scale(x) {
            return Err(Error::TailBudget {
                requested_rel: rel,
                required_t_max: required_t_max(x, rel),
            });
        }
    }

    let tol = opts.quad_tol.unwrap_or(1e-6 * e_scale(x));
    let main = if t_max > x {
        adaptive_integral(|t| table.phi(t) * kernel(t), x, t_max, tol)?
    } else {
        crate::numeric::ValueWithError::exact(0.0)
    };

    // tail: ∫_{t_max}^∞ (−2/3)·t^{3/2}·kernel(t) dt mapped onto s ∈ (0, 1]
    // by t = t_max/s²; the integrand tends to 0 as s → 0.
    let lt = fmath::ln(t_max);
    let g = move |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let u = lt - 2.0 * fmath::ln(s);
        (2.0 + 3.0 / u + 2.0 / u / u) / u
    };
    let j = adaptive_integral(g, 0.0, 1.0, 1e-9)?;
    let scale = (2.0 / 3.0) * 2.0 / fmath::sqrt(t_max);
    let tail_value = -scale * j.value;
    let tail_mag = fmath::abs(tail_value);

    let e = ValueWithError::new(
        main.value + tail_value,
        main.error_bound + scale * j.error_bound + 0.15 * tail_mag,
    );
    Ok((e, tail_mag))
}

/// Leading size of the modeled tail, ≈ (8/3)/(√t·log t).
fn two_thirds_tail_scale(t_max: f64) -> f64 {
    e_scale(t_max)
}

/// Smallest t_max for which the conditional band meets the relative error.
fn required_t_max(x: f64, rel: f64) -> f64 {
    // solve 0.15·(8/3)/(√T·log T) = rel·(8/3)/(√x·log x) for T
    let c = 0.15 * fmath::sqrt(x) * fmath::ln(x) / rel;
    let mut t = c * c;
    for _ in 0..40 {
        t = (c / fmath::ln(t)) * (c / fmath::ln(t));
    }
    t
}

/// Assemble H, T, D, E, F and the identity residual at one x.
pub fn decompose(x: f64, t_max: f64, cache: &PrimeCache) -> Result<NarrowDecomposition> {
    let table = ThetaTable::new(cache);
    let totals = CacheTotals::compute(cache);
    decompose_with(x, t_max, cache, &table, &totals, &EOptions::default())
}

/// As [`decompose`], reusing a prebuilt table and totals.
pub fn decompose_with(
    x: f64,
    t_max: f64,
    cache: &PrimeCache,
    table: &ThetaTable<'_>,
    totals: &CacheTotals,
    opts: &EOptions,
) -> Result<NarrowDecomposition> {
    check_tail_domain(x, cache, 3.0)?;
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    decompose_at(x, t_max, cache.limit(), &cur, table, totals, opts)
}

/// One ascending pass assembling a decomposition at every grid point;
/// identical to pointwise [`decompose_with`] at each x.
pub fn decompose_scan(
    grid: &[f64],
    t_max: f64,
    cache: &PrimeCache,
    table: &ThetaTable<'_>,
    totals: &CacheTotals,
    opts: &EOptions,
) -> Result<Vec<NarrowDecomposition>> {
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        if x.is_nan() || x < prev {
            return Err(Error::UnsortedGrid { index: i });
        }
        check_tail_domain(x, cache, 3.0)?;
        prev = x;
    }
    let mut cur = PrimeCursor::new();
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        cur.advance_to(cache.primes(), x);
        out.push(decompose_at(
            x,
            t_max,
            cache.limit(),
            &cur,
            table,
            totals,
            opts,
        )?);
    }
    Ok(out)
}

fn decompose_at(
    x: f64,
    t_max: f64,
    limit: u64,
    cur: &PrimeCursor,
    table: &ThetaTable<'_>,
    totals: &CacheTotals,
    opts: &EOptions,
) -> Result<NarrowDecomposition> {
    let q = point_from_cursor(x, cur).q;
    let t = tail_from(cur, totals, limit);
    let h = ValueWithError::new(-q - t.value, t.error_bound);
    let d = d_from(x, cur.phi_at(x));
    let f = f_from(x, cur.theta.total());
    let (e, e_tail_model) = e_of_with(x, t_max, table, opts)?;
    let residual = ValueWithError::new(h.value - (d + e.value + f), h.error_bound + e.error_bound);
    Ok(NarrowDecomposition {
        x,
        h,
        t,
        d,
        e,
        f,
        residual,
        e_tail_model,
    })
}

/// U_k and V_k for each requested k, truncated at the cache limit, with the
/// modeled tail bound attached. One ascending pass over the whole cache.
pub fn u_v_points(k_list: &[u64], cache: &PrimeCache) -> Result<Vec<UkPoint>> {
    let count = cache.count();
    let mut prev = 0u64;
    for (i, &k) in k_list.iter().enumerate() {
        if k < 1 || k < prev {
            return Err(Error::UnsortedGrid { index: i });
        }
        if k > count {
            return Err(Error::InsufficientCache {
                requested: k as f64,
                limit: cache.limit(),
            });
        }
        prev = k;
    }

    let bound = uv_tail_bound(cache.limit());
    let mut theta = crate::numeric::CompensatedAccumulator::new();
    let mut cum_u = crate::numeric::CompensatedAccumulator::new();
    let mut cum_abs = crate::numeric::CompensatedAccumulator::new();
    let mut snapshots: Vec<(f64, f64)> = Vec::with_capacity(k_list.len());
    let mut next = 0usize;
    for (j, &p) in cache.primes().iter().enumerate() {
        let pf = p as f64;
        theta.add(fmath::ln(pf));
        let term = 1.0 / pf - 1.0 / theta.total();
        cum_u.add(term);
        cum_abs.add(fmath::abs(term));
        while next < k_list.len() && k_list[next] == (j + 1) as u64 {
            snapshots.push((cum_u.total(), cum_abs.total()));
            next += 1;
        }
    }
    let total_u = cum_u.total();
    let total_abs = cum_abs.total();

    Ok(k_list
        .iter()
        .zip(snapshots)
        .map(|(&k, (su, sa))| UkPoint {
            k,
            p_k: cache.primes()[(k - 1) as usize],
            u: ValueWithError::new(total_u - su, bound),
            v: ValueWithError::new(total_abs - sa, bound),
        })
        .collect())
}
