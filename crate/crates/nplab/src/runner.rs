//! Scan orchestration: grid construction, budget validation, the worker
//! pool, and assembly of [`ScanRow`]s.
//!
//! Determinism contract: chunks hand each worker a fresh cursor that
//! replays the primes from the start in ascending order, so every row is a
//! pure function of (x, cache, t_max, tol) and any chunking — hence any
//! worker count — produces byte-identical output.

use nplab_core::chebyshev::ThetaTable;
use nplab_core::mertens::scan_mertens;
use nplab_core::primes::PrimeCache;
use nplab_core::rh_criteria::{self, EOptions, Totals};
use nplab_core::{Error, Result};
use rayon::prelude::*;

use crate::grid::{build_grid, GridMode};
use crate::rows::ScanRow;

/// Everything `scan` needs besides the cache.
#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    pub lo: f64,
    pub hi: f64,
    pub grid: GridMode,
    /// Integration horizon for E; defaults to the cache limit.
    pub t_max: Option<f64>,
    /// Absolute tolerance budget: the T tail bound must fit under it, and
    /// E's quadrature is run to it.
    pub tol: f64,
    /// Worker threads; 0 means one per core.
    pub workers: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            lo: 3.0,
            hi: 1e6,
            grid: GridMode::default(),
            t_max: None,
            tol: 1e-6,
            workers: 0,
        }
    }
}

/// Compute all scan rows; deterministic across worker counts.
pub fn scan_rows(cache: &PrimeCache, cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    let limit = cache.limit() as f64;
    if cfg.lo.is_nan() || cfg.lo < 3.0 {
        return Err(Error::Domain {
            what: "scan range start (needs x ≥ 3)",
            value: cfg.lo,
        });
    }
    if cfg.hi.is_nan() || cfg.hi < cfg.lo {
        return Err(Error::Domain {
            what: "scan range end",
            value: cfg.hi,
        });
    }
    if cfg.hi > limit {
        return Err(Error::InsufficientCache {
            requested: cfg.hi,
            limit: cache.limit(),
        });
    }
    let t_max = cfg.t_max.unwrap_or(limit);
    if t_max < cfg.hi || t_max > limit {
        return Err(Error::Domain {
            what: "t_max (needs hi ≤ t_max ≤ cache limit)",
            value: t_max,
        });
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::Domain {
            what: "tolerance",
            value: cfg.tol,
        });
    }
    // unmeetable budget: the unconditional T tail cannot fit under tol
    if rh_criteria::t_tail_bound(cache.limit()) > cfg.tol {
        return Err(Error::CacheBudget {
            requested_tol: cfg.tol,
            required_limit: (0.5 / cfg.tol) as u64 + 1,
        });
    }

    let grid = build_grid(cache, cfg.lo, cfg.hi, cfg.grid);
    let table = ThetaTable::new(cache);
    let totals = Totals::compute(cache);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|_| Error::Domain {
            what: "worker pool size",
            value: cfg.workers as f64,
        })?;
    let threads = pool.current_num_threads().max(1);
    let chunk_size = grid.len().div_ceil(threads).max(1);

    let chunks: Vec<Vec<ScanRow>> = pool.install(|| {
        grid.par_chunks(chunk_size)
            .map(|chunk| scan_chunk(cache, &table, &totals, chunk, t_max, cfg.tol))
            .collect::<Result<_>>()
    })?;
    let mut rows = Vec::with_capacity(grid.len());
    for chunk in chunks {
        rows.extend(chunk);
    }
    Ok(rows)
}

fn scan_chunk(
    cache: &PrimeCache,
    table: &ThetaTable<'_>,
    totals: &Totals,
    grid: &[f64],
    t_max: f64,
    tol: f64,
) -> Result<Vec<ScanRow>> {
    let opts = EOptions {
        quad_tol: Some(tol),
        max_rel_error: None,
    };
    let decs = rh_criteria::decompose_scan(grid, t_max, cache, table, totals, &opts)?;
    let pts = scan_mertens(grid, cache)?;
    Ok(grid
        .iter()
        .zip(pts.iter().zip(&decs))
        .map(|(&x, (pt, dec))| {
            let theta = table.theta(x);
            let phi = table.phi(x);
            ScanRow {
                x,
                theta,
                delta: theta - x,
                phi,
                b: phi / (x * x.sqrt()) + 2.0 / 3.0,
                s: pt.s,
                p: pt.p,
                r: pt.r,
                q: pt.q,
                a: pt.a,
                h: dec.h.value,
                h_err: dec.h.error_bound,
                t: dec.t.value,
                t_err: dec.t.error_bound,
                d: dec.d,
                e: dec.e.value,
                e_err: dec.e.error_bound,
                f: dec.f,
                residual: dec.residual.value,
                residual_err: dec.residual.error_bound,
            }
        })
        .collect())
}
