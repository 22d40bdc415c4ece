//! Segmented prime generation, prime-power streaming and the immutable
//! prime cache every sum in this crate runs over.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;

/// Default segment size for the sieve, in odd-number slots.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

/// Largest limit accepted without an explicit budget override.
pub const DEFAULT_MEMORY_BUDGET_LIMIT: u64 = 1 << 34;

/// Sorted primes up to a limit. Immutable after construction and safe to
/// share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCache {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeCache {
    /// Assemble a cache from parts already known to be the primes up to
    /// `limit`, validating structure (ascending, in range, first element 2).
    pub fn from_parts(limit: u64, primes: Vec<u64>) -> Result<Self> {
        if limit < 2 {
            return Err(Error::LimitTooSmall { limit });
        }
        if primes.first() != Some(&2) {
            return Err(Error::MalformedCache {
                reason: "first prime must be 2",
            });
        }
        let mut prev = 0u64;
        for &p in &primes {
            if p <= prev {
                return Err(Error::MalformedCache {
                    reason: "primes not strictly increasing",
                });
            }
            if p > limit {
                return Err(Error::MalformedCache {
                    reason: "prime exceeds stated limit",
                });
            }
            if p != 2 && p % 2 == 0 {
                return Err(Error::MalformedCache {
                    reason: "even entry other than 2",
                });
            }
            prev = p;
        }
        Ok(Self { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn count(&self) -> u64 {
        self.primes.len() as u64
    }

    /// Number of primes ≤ x.
    pub fn count_below(&self, x: f64) -> usize {
        self.primes.partition_point(|&p| (p as f64) <= x)
    }
}

/// One prime power p^k with its base logarithm, streamed in ascending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimePowerEvent {
    pub value: u64,
    pub base_log: f64,
    pub exponent: u32,
}

/// Build the full set of primes ≤ `limit` with the default memory budget.
///
/// The output is independent of `segment_size`.
pub fn build_cache(limit: u64, segment_size: usize) -> Result<PrimeCache> {
    build_cache_with_budget(limit, segment_size, DEFAULT_MEMORY_BUDGET_LIMIT)
}

/// As [`build_cache`], with an explicit budget on the largest allowed limit.
pub fn build_cache_with_budget(
    limit: u64,
    segment_size: usize,
    max_limit: u64,
) -> Result<PrimeCache> {
    if limit < 2 {
        return Err(Error::LimitTooSmall { limit });
    }
    if segment_size < 64 {
        return Err(Error::SegmentTooSmall { segment_size });
    }
    if limit > max_limit {
        return Err(Error::CapacityExceeded {
            limit,
            budget: max_limit,
        });
    }

    let estimate = if limit >= 17 {
        let x = limit as f64;
        (x / fmath::ln(x) * 1.2) as usize + 16
    } else {
        8
    };
    let mut primes = Vec::with_capacity(estimate);
    primes.push(2u64);
    if limit < 3 {
        return PrimeCache::from_parts(limit, primes);
    }

    // base sieve of odd numbers up to sqrt(limit)
    let root = limit.isqrt();
    let mut base = alloc::vec![true; (root as usize) / 2 + 1]; // index i -> 2i+1
    base[0] = false; // 1
    let mut base_primes: Vec<u64> = Vec::new();
    let mut i = 1usize;
    while 2 * i < root as usize {
        if base[i] {
            let p = (2 * i + 1) as u64;
            base_primes.push(p);
            let mut j = (p * p) as usize / 2;
            while j < base.len() {
                base[j] = false;
                j += p as usize;
            }
        }
        i += 1;
    }

    // segmented sieve over odd numbers 3..=limit
    let mut seg = alloc::vec![false; segment_size]; // true = composite
    let mut low = 3u64; // odd start of the current segment
    while low <= limit {
        let slots = segment_size.min(((limit - low) / 2 + 1) as usize);
        let high = low + 2 * (slots as u64 - 1);
        seg[..slots].fill(false);
        for &p in &base_primes {
            let mut m = p * p;
            if m > high {
                break;
            }
            if m < low {
                m = low.div_ceil(p) * p;
                if m % 2 == 0 {
                    m += p;
                }
            }
            let mut idx = ((m - low) / 2) as usize;
            while idx < slots {
                seg[idx] = true;
                idx += p as usize;
            }
        }
        for (k, &composite) in seg[..slots].iter().enumerate() {
            if !composite {
                primes.push(low + 2 * k as u64);
            }
        }
        low = high + 2;
    }

    PrimeCache::from_parts(limit, primes)
}

/// Ascending stream of all prime powers p^k ≤ `limit`, primes included.
pub fn stream_prime_powers(cache: &PrimeCache, limit: u64) -> Result<PrimePowers<'_>> {
    if limit > cache.limit() {
        return Err(Error::InsufficientCache {
            requested: limit as f64,
            limit: cache.limit(),
        });
    }
    Ok(PrimePowers::new(cache, limit))
}

/// Higher prime powers (k ≥ 2) up to a limit, sorted ascending.
pub(crate) fn higher_powers(cache: &PrimeCache, limit: u64) -> Vec<PrimePowerEvent> {
    let mut events = Vec::new();
    for &p in cache.primes() {
        if p.saturating_mul(p) > limit {
            break;
        }
        let base_log = fmath::ln(p as f64);
        let mut value = p * p;
        let mut exponent = 2u32;
        loop {
            events.push(PrimePowerEvent {
                value,
                base_log,
                exponent,
            });
            if value > limit / p {
                break;
            }
            value *= p;
            exponent += 1;
        }
    }
    events.sort_unstable_by_key(|e| e.value);
    events
}

/// Iterator merging the primes with their higher powers in ascending order.
pub struct PrimePowers<'a> {
    primes: &'a [u64],
    higher: Vec<PrimePowerEvent>,
    limit: u64,
    pi: usize,
    hi: usize,
}

impl<'a> PrimePowers<'a> {
    fn new(cache: &'a PrimeCache, limit: u64) -> Self {
        Self {
            primes: cache.primes(),
            higher: higher_powers(cache, limit),
            limit,
            pi: 0,
            hi: 0,
        }
    }
}

impl Iterator for PrimePowers<'_> {
    type Item = PrimePowerEvent;

    fn next(&mut self) -> Option<PrimePowerEvent> {
        let next_prime = self
            .primes
            .get(self.pi)
            .copied()
            .filter(|&p| p <= self.limit);
        let next_power = self.higher.get(self.hi).copied();
        match (next_prime, next_power) {
            (Some(p), Some(w)) if w.value < p => {
                self.hi += 1;
                Some(w)
            }
            (Some(p), _) => {
                self.pi += 1;
                Some(PrimePowerEvent {
                    value: p,
                    base_log: fmath::ln(p as f64),
                    exponent: 1,
                })
            }
            (None, Some(w)) => {
                self.hi += 1;
                Some(w)
            }
            (None, None) => None,
        }
    }
}
