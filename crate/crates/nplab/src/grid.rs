//! Evaluation grids for scans: prime-gap endpoints (optionally thinned
//! log-uniformly) or plain log-spaced points.

use std::str::FromStr;

use nplab_core::primes::PrimeCache;

/// Default row cap for gap-endpoint grids.
pub const DEFAULT_MAX_ROWS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// Both endpoints of every prime gap, thinned log-uniformly to at most
    /// `max_rows` points when set.
    GapEndpoints { max_rows: Option<usize> },
    /// n log-spaced points including both range ends.
    LogSpaced(usize),
}

impl Default for GridMode {
    fn default() -> Self {
        GridMode::GapEndpoints {
            max_rows: Some(DEFAULT_MAX_ROWS),
        }
    }
}

impl FromStr for GridMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "gap-endpoints" || s == "gaps" {
            return Ok(GridMode::default());
        }
        if let Some(n) = s
            .strip_prefix("log:")
            .or_else(|| s.strip_prefix("log-spaced:"))
        {
            let n: usize = n.parse().map_err(|_| format!("bad point count in `{s}`"))?;
            if n < 1 {
                return Err("log-spaced grid needs at least one point".into());
            }
            return Ok(GridMode::LogSpaced(n));
        }
        Err(format!(
            "unknown grid mode `{s}` (use `gap-endpoints` or `log:N`)"
        ))
    }
}

/// Build an ascending grid over [lo, hi] under the given mode. `lo` and
/// `hi` themselves are always included.
pub fn build_grid(cache: &PrimeCache, lo: f64, hi: f64, mode: GridMode) -> Vec<f64> {
    let mut grid = match mode {
        GridMode::LogSpaced(n) => log_spaced(lo, hi, n),
        GridMode::GapEndpoints { max_rows } => gap_endpoints(cache, lo, hi, max_rows),
    };
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

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 || hi == lo {
        return vec![lo];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut out: Vec<f64> = (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect();
    out[0] = lo;
    *out.last_mut().unwrap() = hi;
    out
}

fn gap_endpoints(cache: &PrimeCache, lo: f64, hi: f64, max_rows: Option<usize>) -> Vec<f64> {
    let primes = cache.primes();
    let start = primes.partition_point(|&p| (p as f64) <= lo);
    let end = primes.partition_point(|&p| (p as f64) <= hi);
    let inner = &primes[start..end];

    let selected: Vec<u64> = match max_rows {
        Some(cap) if 2 * inner.len() + 2 > cap => thin_log_uniform(inner, lo, hi, cap / 2),
        _ => inner.to_vec(),
    };

    let mut out = Vec::with_capacity(2 * selected.len() + 2);
    out.push(lo);
    for &p in &selected {
        let pf = p as f64;
        out.push(pf.next_down());
        out.push(pf);
    }
    out.push(hi);
    out
}

/// Keep the first prime that enters each of `buckets` log-uniform bins.
/// Deterministic and independent of everything but the inputs.
fn thin_log_uniform(primes: &[u64], lo: f64, hi: f64, buckets: usize) -> Vec<u64> {
    let buckets = buckets.max(1);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let span = (lhi - llo).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(buckets);
    let mut last_bucket = usize::MAX;
    for &p in primes {
        let frac = ((p as f64).ln() - llo) / span;
        let bucket = ((frac * buckets as f64) as usize).min(buckets - 1);
        if bucket != last_bucket {
            out.push(p);
            last_bucket = bucket;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nplab_core::primes::build_cache;

    #[test]
    fn parses_modes() {
        assert_eq!(
            "gap-endpoints".parse::<GridMode>().unwrap(),
            GridMode::default()
        );
        assert_eq!("log:5".parse::<GridMode>().unwrap(), GridMode::LogSpaced(5));
        assert!("mystery".parse::<GridMode>().is_err());
        assert!("log:0".parse::<GridMode>().is_err());
    }

    #[test]
    fn log_spaced_has_requested_shape() {
        let cache = build_cache(1 << 20, 1 << 16).unwrap();
        let grid = build_grid(&cache, 1e3, 1e5, GridMode::LogSpaced(5));
        assert_eq!(grid.len(), 5);
        assert_eq!(grid[0], 1e3);
        assert_eq!(grid[4], 1e5);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn gap_endpoints_bracket_each_prime() {
        let cache = build_cache(100, 64).unwrap();
        let grid = build_grid(
            &cache,
            10.0,
            30.0,
            GridMode::GapEndpoints { max_rows: None },
        );
        // primes 11,13,17,19,23,29 each contribute p.next_down() and p
        assert_eq!(grid.len(), 2 + 2 * 6);
        assert!(grid.contains(&11.0));
        assert!(grid.contains(&11f64.next_down()));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn thinning_caps_rows_and_keeps_ends() {
        let cache = build_cache(1 << 20, 1 << 16).unwrap();
        let grid = build_grid(
            &cache,
            1e3,
            1e6,
            GridMode::GapEndpoints {
                max_rows: Some(1000),
            },
        );
        assert!(grid.len() <= 1002, "{} rows", grid.len());
        assert!(grid.len() > 500);
        assert_eq!(grid[0], 1e3);
        assert_eq!(*grid.last().unwrap(), 1e6);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }
}
