//! Internal ascending cursors over the prime cache.
//!
//! Every scan and pointwise evaluation in the crate funnels through these
//! two cursors, so a value computed by a scan and the same value recomputed
//! pointwise follow the identical accumulation order.

use alloc::vec::Vec;

use crate::fmath;
use crate::numeric::CompensatedAccumulator;
use crate::primes::{higher_powers, PrimeCache, PrimePowerEvent};

/// Prefix sums over primes p ≤ x, advanced monotonically.
#[derive(Debug, Clone, Default)]
pub(crate) struct PrimeCursor {
    next: usize,
    /// Σ log p
    pub theta: CompensatedAccumulator,
    /// Σ log(p/(p−1)), evaluated as log1p(1/(p−1))
    pub log_ratio: CompensatedAccumulator,
    /// Σ 1/p
    pub recip: CompensatedAccumulator,
    /// Σ p·log p
    pub p_logp: CompensatedAccumulator,
    /// Σ (log(p/(p−1)) − 1/p), the tail integrand prefix
    pub tail_terms: CompensatedAccumulator,
}

impl PrimeCursor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Consume all primes ≤ x. `x` must not decrease between calls.
    pub fn advance_to(&mut self, primes: &[u64], x: f64) {
        while let Some(&p) = primes.get(self.next) {
            let pf = p as f64;
            if pf > x {
                break;
            }
            self.push(pf);
            self.next += 1;
        }
    }

    #[inline]
    fn push(&mut self, pf: f64) {
        let log_p = fmath::ln(pf);
        let ratio = fmath::ln_1p(1.0 / (pf - 1.0));
        let recip = 1.0 / pf;
        self.theta.add(log_p);
        self.log_ratio.add(ratio);
        self.recip.add(recip);
        self.p_logp.add(pf * log_p);
        self.tail_terms.add(ratio - recip);
    }

    /// Number of primes consumed so far.
    pub fn consumed(&self) -> usize {
        self.next
    }

    /// Φ(x) = Σ_{p≤x} log p·(x−p) − x²/2 in prefix form.
    pub fn phi_at(&self, x: f64) -> f64 {
        x * self.theta.total() - self.p_logp.total() - 0.5 * x * x
    }
}

/// Whole-cache totals of the prime prefix sums.
#[derive(Debug, Clone, Copy)]
pub struct CacheTotals {
    pub theta: f64,
    pub log_ratio: f64,
    pub recip: f64,
    pub tail_terms: f64,
}

impl CacheTotals {
    /// One full compensated pass over the cache.
    pub fn compute(cache: &PrimeCache) -> Self {
        let mut cur = PrimeCursor::new();
        cur.advance_to(cache.primes(), cache.limit() as f64);
        Self {
            theta: cur.theta.total(),
            log_ratio: cur.log_ratio.total(),
            recip: cur.recip.total(),
            tail_terms: cur.tail_terms.total(),
        }
    }
}

/// Prefix sums over prime powers p^k ≤ x (ψ support), advanced monotonically,
/// plus the running integrals that only change at events.
pub(crate) struct EventCursor<'a> {
    primes: &'a [u64],
    higher: Vec<PrimePowerEvent>,
    pi: usize,
    hi: usize,
    /// Σ log p over events
    pub psi: CompensatedAccumulator,
    /// Σ p^k·log p over events
    pub v_logp: CompensatedAccumulator,
    /// ∫₀^pos (ψ(t)−t)² dt, pos = position of the last consumed event
    cramer: CompensatedAccumulator,
    pos: f64,
}

impl<'a> EventCursor<'a> {
    pub fn new(cache: &'a PrimeCache) -> Self {
        Self {
            primes: cache.primes(),
            higher: higher_powers(cache, cache.limit()),
            pi: 0,
            hi: 0,
            psi: CompensatedAccumulator::new(),
            v_logp: CompensatedAccumulator::new(),
            cramer: CompensatedAccumulator::new(),
            pos: 0.0,
        }
    }

    fn peek(&self) -> Option<(u64, f64)> {
        let p = self.primes.get(self.pi).copied();
        let w = self.higher.get(self.hi).copied();
        match (p, w) {
            (Some(p), Some(w)) if w.value < p => Some((w.value, w.base_log)),
            (Some(p), _) => Some((p, fmath::ln(p as f64))),
            (None, Some(w)) => Some((w.value, w.base_log)),
            (None, None) => None,
        }
    }

    fn consume(&mut self) {
        let p = self.primes.get(self.pi).copied();
        let w = self.higher.get(self.hi).copied();
        match (p, w) {
            (Some(p), Some(w)) if w.value < p => self.hi += 1,
            (Some(_), _) => self.pi += 1,
            (None, Some(_)) => self.hi += 1,
            (None, None) => {}
        }
    }

    /// Consume all events ≤ x. `x` must not decrease between calls.
    pub fn advance_to(&mut self, x: f64) {
        while let Some((value, base_log)) = self.peek() {
            let vf = value as f64;
            if vf > x {
                break;
            }
            // close the constant-ψ gap [pos, vf)
            let c = self.psi.total();
            self.cramer.add((cube(vf - c) - cube(self.pos - c)) / 3.0);
            self.psi.add(base_log);
            self.v_logp.add(vf * base_log);
            self.pos = vf;
            self.consume();
        }
    }

    /// ∫₀ˣ(ψ(t)−t)dt = Σ_{p^k≤x} log p·(x−p^k) − x²/2 in prefix form.
    pub fn psi_primitive_at(&self, x: f64) -> f64 {
        x * self.psi.total() - self.v_logp.total() - 0.5 * x * x
    }

    /// ∫₀ˣ(ψ(t)−t)²dt, exact piecewise closed form.
    pub fn cramer_at(&self, x: f64) -> f64 {
        let c = self.psi.total();
        self.cramer.total() + (cube(x - c) - cube(self.pos - c)) / 3.0
    }
}

#[inline]
fn cube(v: f64) -> f64 {
    v * v * v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::build_cache;

    #[test]
    fn prime_cursor_is_monotone_prefix() {
        let cache = build_cache(100, 64).unwrap();
        let mut cur = PrimeCursor::new();
        cur.advance_to(cache.primes(), 10.0);
        assert_eq!(cur.consumed(), 4);
        let theta10 = cur.theta.total();
        cur.advance_to(cache.primes(), 10.0); // no-op
        assert_eq!(cur.theta.total(), theta10);
        cur.advance_to(cache.primes(), 11.0);
        assert_eq!(cur.consumed(), 5);
    }

    #[test]
    fn event_cursor_cramer_small() {
        let cache = build_cache(100, 64).unwrap();
        let mut cur = EventCursor::new(&cache);
        cur.advance_to(2.0);
        assert!((cur.cramer_at(2.0) - 8.0 / 3.0).abs() < 1e-12);
        // two-piece value at 3, closed form
        cur.advance_to(3.0);
        let l2 = 2f64.ln();
        let expected = 8.0 / 3.0 + ((3.0 - l2).powi(3) - (2.0 - l2).powi(3)) / 3.0;
        assert!((cur.cramer_at(3.0) - expected).abs() < 1e-12);
    }
}
