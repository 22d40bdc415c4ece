//! The Chebyshev step functions θ and ψ, the deviation Δ(x) = θ(x) − x,
//! and their primitives in exact piecewise closed form over prime events.
//!
//! θ and ψ are right-continuous: an evaluation at x = p includes the jump
//! at p. Nothing here integrates numerically; every primitive is the exact
//! closed form of a step-function integral, so downstream identity tests
//! carry no discretization error.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::numeric::CompensatedAccumulator;
use crate::primes::PrimeCache;
use crate::sweep::{EventCursor, PrimeCursor};

/// All θ/ψ-derived quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevPoint {
    pub x: f64,
    pub theta: f64,
    pub psi: f64,
    /// θ(x) − x
    pub delta: f64,
    /// ∫₀ˣ(θ(t)−t)dt
    pub phi: f64,
    /// Φ(x)·x^{−3/2} + 2/3 (NaN at x = 0)
    pub b: f64,
}

fn check_range(x: f64, cache: &PrimeCache) -> Result<()> {
    if x.is_nan() || x < 0.0 {
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

/// θ(x) = Σ_{p≤x} log p, compensated.
pub fn theta(x: f64, cache: &PrimeCache) -> Result<f64> {
    check_range(x, cache)?;
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    Ok(cur.theta.total())
}

/// ψ(x) = Σ_{p^k≤x} log p, compensated.
pub fn psi(x: f64, cache: &PrimeCache) -> Result<f64> {
    check_range(x, cache)?;
    let mut cur = EventCursor::new(cache);
    cur.advance_to(x);
    Ok(cur.psi.total())
}

/// Φ(x) = ∫₀ˣ(θ(t)−t)dt = Σ_{p≤x} log p·(x−p) − x²/2, exact.
pub fn phi(x: f64, cache: &PrimeCache) -> Result<f64> {
    check_range(x, cache)?;
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), x);
    Ok(cur.phi_at(x))
}

/// ∫₀ˣ(ψ(t)−t)dt = Σ_{p^k≤x} log p·(x−p^k) − x²/2, exact.
pub fn psi_primitive(x: f64, cache: &PrimeCache) -> Result<f64> {
    check_range(x, cache)?;
    let mut cur = EventCursor::new(cache);
    cur.advance_to(x);
    Ok(cur.psi_primitive_at(x))
}

/// ∫₀ˣ(ψ(t)−t)²dt in exact piecewise closed form: between consecutive
/// prime-power events ψ is a constant c and ∫(c−t)²dt telescopes through
/// (t−c)³/3.
pub fn cramer_integral(x: f64, cache: &PrimeCache) -> Result<f64> {
    check_range(x, cache)?;
    let mut cur = EventCursor::new(cache);
    cur.advance_to(x);
    Ok(cur.cramer_at(x))
}

/// Everything at once, sharing the two cursor passes.
pub fn chebyshev_point(x: f64, cache: &PrimeCache) -> Result<ChebyshevPoint> {
    check_range(x, cache)?;
    let mut pc = PrimeCursor::new();
    pc.advance_to(cache.primes(), x);
    let mut ec = EventCursor::new(cache);
    ec.advance_to(x);
    Ok(point_from_cursors(x, &pc, &ec))
}

fn point_from_cursors(x: f64, pc: &PrimeCursor, ec: &EventCursor) -> ChebyshevPoint {
    let theta = pc.theta.total();
    let phi = pc.phi_at(x);
    ChebyshevPoint {
        x,
        theta,
        psi: ec.psi.total(),
        delta: theta - x,
        phi,
        b: phi / (x * fmath::sqrt(x)) + 2.0 / 3.0,
    }
}

/// One ascending pass evaluating [`chebyshev_point`] at every grid point.
pub fn scan_chebyshev(grid: &[f64], cache: &PrimeCache) -> Result<Vec<ChebyshevPoint>> {
    validate_grid(grid, cache)?;
    let mut pc = PrimeCursor::new();
    let mut ec = EventCursor::new(cache);
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        pc.advance_to(cache.primes(), x);
        ec.advance_to(x);
        out.push(point_from_cursors(x, &pc, &ec));
    }
    Ok(out)
}

fn validate_grid(grid: &[f64], cache: &PrimeCache) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        if x.is_nan() || x < prev {
            return Err(Error::UnsortedGrid { index: i });
        }
        check_range(x, cache)?;
        prev = x;
    }
    Ok(())
}

/// Number of sign changes of Δ(x) = θ(x) − x on [lo, hi], found exactly:
/// Δ decreases linearly between primes and jumps up by log p at p, so every
/// crossing is visible from the gap-boundary values.
pub fn delta_sign_changes(lo: f64, hi: f64, cache: &PrimeCache) -> Result<u64> {
    if lo.is_nan() || hi.is_nan() || lo < 2.0 || hi < lo {
        return Err(Error::Domain {
            what: "sign-change interval",
            value: lo,
        });
    }
    check_range(hi, cache)?;
    if lo == hi {
        return Ok(0);
    }
    let mut cur = PrimeCursor::new();
    cur.advance_to(cache.primes(), lo);
    let first = cur.consumed();
    let jumps = cache.primes()[first..]
        .iter()
        .take_while(|&&p| (p as f64) <= hi)
        .map(|&p| (p as f64, fmath::ln(p as f64)));
    Ok(count_crossings(cur.theta, jumps, lo, hi))
}

/// Crossing counter over an explicit piecewise-linear profile: the value
/// starts at `theta_at_lo − lo`, decreases with slope −1, and jumps up by
/// `jump` at each event position. Zeros do not flip the tracked sign.
fn count_crossings(
    theta_at_lo: CompensatedAccumulator,
    jumps: impl Iterator<Item = (f64, f64)>,
    lo: f64,
    hi: f64,
) -> u64 {
    let mut theta = theta_at_lo;
    let mut count = 0u64;
    let mut sign = 0i8;
    let update = |v: f64, sign: &mut i8, count: &mut u64| {
        if v > 0.0 {
            if *sign < 0 {
                *count += 1;
            }
            *sign = 1;
        } else if v < 0.0 {
            if *sign > 0 {
                *count += 1;
            }
            *sign = -1;
        }
    };
    update(theta.total() - lo, &mut sign, &mut count);
    for (pos, jump) in jumps {
        update(theta.total() - pos, &mut sign, &mut count); // end of the gap below pos
        theta.add(jump);
        update(theta.total() - pos, &mut sign, &mut count); // right after the jump
    }
    update(theta.total() - hi, &mut sign, &mut count);
    count
}

/// Random-access θ/Φ/Δ built from per-prime prefix snapshots; used where
/// evaluation order is not monotone (quadrature).
pub struct ThetaTable<'a> {
    cache: &'a PrimeCache,
    theta: Vec<f64>,
    p_logp: Vec<f64>,
}

impl<'a> ThetaTable<'a> {
    /// One compensated pass storing a snapshot at every prime.
    pub fn new(cache: &'a PrimeCache) -> Self {
        let mut theta = Vec::with_capacity(cache.primes().len());
        let mut p_logp = Vec::with_capacity(cache.primes().len());
        let mut acc_t = CompensatedAccumulator::new();
        let mut acc_w = CompensatedAccumulator::new();
        for &p in cache.primes() {
            let pf = p as f64;
            let lp = fmath::ln(pf);
            acc_t.add(lp);
            acc_w.add(pf * lp);
            theta.push(acc_t.total());
            p_logp.push(acc_w.total());
        }
        Self {
            cache,
            theta,
            p_logp,
        }
    }

    pub fn limit(&self) -> u64 {
        self.cache.limit()
    }

    fn index(&self, t: f64) -> usize {
        debug_assert!(t >= 0.0 && t <= self.cache.limit() as f64);
        self.cache.count_below(t)
    }

    pub fn theta(&self, t: f64) -> f64 {
        match self.index(t) {
            0 => 0.0,
            i => self.theta[i - 1],
        }
    }

    pub fn delta(&self, t: f64) -> f64 {
        self.theta(t) - t
    }

    pub fn phi(&self, t: f64) -> f64 {
        match self.index(t) {
            0 => -0.5 * t * t,
            i => t * self.theta[i - 1] - self.p_logp[i - 1] - 0.5 * t * t,
        }
    }
}
