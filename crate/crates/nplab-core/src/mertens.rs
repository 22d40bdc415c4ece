//! Mertens sums over primes and their two remainders: the classical one
//! against log log x and the modified one against log log θ(x), plus the
//! normalized quantity A(x) = Q(x)·√x·log x.
//!
//! Everything is defined for x ≥ 3 only: below 3, θ(x) ≤ 1 and
//! log log θ(x) is not a real number.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::numeric::constants::GAMMA;
use crate::primes::PrimeCache;
use crate::sweep::PrimeCursor;

/// All Mertens-side evaluations at one x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertensPoint {
    pub x: f64,
    /// S(x) = Σ_{p≤x} log(p/(p−1))
    pub s: f64,
    /// P(x) = Σ_{p≤x} 1/p
    pub p: f64,
    /// R(x) = S(x) − log log x − γ
    pub r: f64,
    /// Q(x) = S(x) − log log θ(x) − γ
    pub q: f64,
    /// A(x) = Q(x)·√x·log x
    pub a: f64,
}

/// Running extrema of Q(x)·x^{1/2−ε} over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BEpsStats {
    pub sup: f64,
    pub sup_at: f64,
    pub inf: f64,
    pub inf_at: f64,
}

fn check_domain(x: f64, cache: &PrimeCache) -> Result<()> {
    if x.is_nan() || x < 3.0 {
        return Err(Error::Domain {
            what: "Mertens evaluation point (needs x ≥ 3)",
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

pub(crate) fn point_from_cursor(x: f64, cur: &PrimeCursor) -> MertensPoint {
    let s = cur.log_ratio.total();
    let p = cur.recip.total();
    let log_x = fmath::ln(x);
    let theta = cur.theta.total();
    let r = s - fmath::ln(log_x) - GAMMA;
    let q = s - fmath::ln(fmath::ln(theta)) - GAMMA;
    MertensPoint {
        x,
        s,
        p,
        r,
        q,
        a: q * fmath::sqrt(x) * log_x,
    }
}

/// Evaluate S, P, R, Q and A at one point.
pub fn mertens_point(x: f64, cache: &PrimeCache) -> Result<MertensPoint> {
    check_domain(x, cache)?;
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    Ok(point_from_cursor(x, &cur))
}

/// One incremental pass evaluating [`mertens_point`] on an ascending grid;
/// identical to pointwise evaluation.
pub fn scan_mertens(grid: &[f64], cache: &PrimeCache) -> Result<Vec<MertensPoint>> {
    validate_grid(grid, cache)?;
    let mut cur = PrimeCursor::new();
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        cur.advance_to(cache.primes(), x);
        out.push(point_from_cursor(x, &cur));
    }
    Ok(out)
}

/// Running extrema of the normalized remainder Q(x)·x^{1/2−ε} over a grid,
/// with the achieving x values. Requires 0 < ε < 1/2.
pub fn b_eps_stats(eps: f64, grid: &[f64], cache: &PrimeCache) -> Result<BEpsStats> {
    if eps.is_nan() || eps <= 0.0 || eps >= 0.5 {
        return Err(Error::Domain {
            what: "ε (needs 0 < ε < 1/2)",
            value: eps,
        });
    }
    if grid.is_empty() {
        return Err(Error::Domain {
            what: "grid (needs at least one point)",
            value: f64::NAN,
        });
    }
    validate_grid(grid, cache)?;
    let mut cur = PrimeCursor::new();
    let mut stats = BEpsStats {
        sup: f64::NEG_INFINITY,
        sup_at: f64::NAN,
        inf: f64::INFINITY,
        inf_at: f64::NAN,
    };
    for &x in grid {
        cur.advance_to(cache.primes(), x);
        let pt = point_from_cursor(x, &cur);
        let scaled = pt.q * fmath::exp((0.5 - eps) * fmath::ln(x));
        if scaled > stats.sup {
            stats.sup = scaled;
            stats.sup_at = x;
        }
        if scaled < stats.inf {
            stats.inf = scaled;
            stats.inf_at = x;
        }
    }
    Ok(stats)
}

fn validate_grid(grid: &[f64], cache: &PrimeCache) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        if x.is_nan() || x < prev {
            return Err(Error::UnsortedGrid { index: i });
        }
        check_domain(x, cache)?;
        prev = x;
    }
    Ok(())
}
