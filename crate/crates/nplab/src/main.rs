//! Command line for building prime caches, scanning the Mertens-remainder
//! quantities, and running bound checks.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nplab::exit_codes;
use nplab::grid::GridMode;
use nplab::nplc;
use nplab::report::{decomposition_to_json, report_summary, report_to_csv, report_to_json};
use nplab::rows::CSV_HEADER;
use nplab::runner::{scan_rows, ScanConfig};
use nplab_core::primes::{build_cache, PrimeCache, DEFAULT_SEGMENT_SIZE};
use nplab_core::rh_criteria::{run_check, CheckId, CheckParams, EOptions};

/// Environment variable naming a default cache directory; flags override.
const CACHE_DIR_ENV: &str = "NPLAB_CACHE_DIR";

#[derive(Parser)]
#[command(
    name = "nplab",
    version,
    about = "Prime-sum remainder laboratory: caches, scans, bound checks",
    after_help = "Exit codes: 0 ok, 1 bound violated through range end, \
                  2 tool error, 3 tolerance budget unmeetable."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or inspect prime cache files.
    Cache {
        #[command(subcommand)]
        cmd: CacheCmd,
    },
    /// Scan all point quantities over a range and export rows.
    Scan(ScanArgs),
    /// Run one bound check over a range and export the report.
    Check(CheckArgs),
    /// Print the H = D + E + F decomposition at one point.
    Decompose(DecomposeArgs),
}

#[derive(Subcommand)]
enum CacheCmd {
    /// Sieve primes up to --limit and write an .nplc file.
    Build {
        /// Largest value to sieve (accepts 1e8 style).
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        /// Sieve segment size in odd-number slots.
        #[arg(long, default_value_t = DEFAULT_SEGMENT_SIZE)]
        segment_size: usize,
        /// Raise the refusal threshold for very large limits.
        #[arg(long, value_parser = parse_count)]
        max_limit: Option<u64>,
        /// Output path; defaults to $NPLAB_CACHE_DIR/nplc-<limit>.nplc.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the header of an .nplc file.
    Info { path: PathBuf },
}

#[derive(Args)]
struct CommonEval {
    /// Prime cache file to load.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Sieve in memory up to this limit when no cache file is given
    /// (or resolve $NPLAB_CACHE_DIR/nplc-<limit>.nplc if it exists).
    #[arg(long, value_parser = parse_count)]
    limit: Option<u64>,
    /// Evaluation range, as lo:hi (accepts 1e3:1e6 style). For uk_35 and
    /// vk_35 this is a range of prime indices k.
    #[arg(long, value_parser = parse_range)]
    range: (f64, f64),
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonEval,
    /// Grid: `gap-endpoints` (default, thinned to 1e6 rows) or `log:N`.
    #[arg(long, default_value = "gap-endpoints")]
    grid: GridMode,
    /// Keep every gap endpoint (disables log-uniform thinning).
    #[arg(long)]
    full: bool,
    /// Integration horizon for E; defaults to the cache limit.
    #[arg(long, value_parser = parse_float)]
    tmax: Option<f64>,
    /// Absolute tolerance budget (T tail bound and E quadrature).
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Worker threads; 0 = one per core. Output is identical regardless.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// One of: robin_13 koch_22iii narrow_A_18 narrow_H_25 window_D_E_210
    /// unconditional_211 cramer_31iii ingham_prop4 uk_35 vk_35
    check_id: String,
    #[command(flatten)]
    common: CommonEval,
    /// ε in the k^(−1/2+ε) and (1+ε)/(4π) criteria.
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    /// Half-width parameter of the H window (window = −2 ± 5·δ₀).
    #[arg(long, default_value_t = 0.1)]
    delta0: f64,
    /// Integration horizon for E-based checks; defaults to the cache limit.
    #[arg(long, value_parser = parse_float)]
    tmax: Option<f64>,
    /// Absolute quadrature tolerance for E-based checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Log-spaced points for the E-based statistics.
    #[arg(long, default_value_t = 48)]
    e_points: usize,
    /// Violation threshold for the Cramér ratio.
    #[arg(long, default_value_t = 0.05)]
    cramer_threshold: f64,
    /// Worker threads (accepted for interface symmetry; checks are
    /// single-pass and deterministic regardless).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Evaluation point.
    #[arg(long, value_parser = parse_float)]
    x: f64,
    /// Integration horizon for E; defaults to the cache limit.
    #[arg(long, value_parser = parse_float)]
    tmax: Option<f64>,
    /// Fail (exit 3) if the conditional E-tail band exceeds this relative error.
    #[arg(long)]
    max_rel_e: Option<f64>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, value_parser = parse_count)]
    limit: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_float(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let f: f64 = s
        .parse()
        .map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if f < 0.0 || f > (1u64 << 62) as f64 || f.fract() != 0.0 {
        return Err(format!("`{s}` is not a whole non-negative count"));
    }
    Ok(f as u64)
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}` is not of the form lo:hi"))?;
    Ok((parse_float(lo)?, parse_float(hi)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(nplab::exit_code_for(&err))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Cache { cmd } => run_cache(cmd),
        Cmd::Scan(args) => run_scan(args),
        Cmd::Check(args) => run_check_cmd(args),
        Cmd::Decompose(args) => run_decompose(args),
    }
}

fn default_cache_path(limit: u64) -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("nplc-{limit}.nplc")))
}

fn run_cache(cmd: CacheCmd) -> anyhow::Result<u8> {
    match cmd {
        CacheCmd::Build {
            limit,
            segment_size,
            max_limit,
            out,
        } => {
            let out = out
                .or_else(|| default_cache_path(limit))
                .ok_or_else(|| anyhow!("--out required (or set ${CACHE_DIR_ENV})"))?;
            let cache = match max_limit {
                Some(budget) => {
                    nplab_core::primes::build_cache_with_budget(limit, segment_size, budget)?
                }
                None => build_cache(limit, segment_size)?,
            };
            nplc::save_cache(&cache, &out).with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "wrote {} primes (limit {limit}) to {}",
                cache.count(),
                out.display()
            );
            Ok(exit_codes::OK)
        }
        CacheCmd::Info { path } => {
            let header =
                nplc::load_header(&path).with_context(|| format!("reading {}", path.display()))?;
            println!(
                "path: {}\nformat version: {}\nlimit: {}\ncount: {}",
                path.display(),
                header.version,
                header.limit,
                header.count
            );
            Ok(exit_codes::OK)
        }
    }
}

fn resolve_cache(
    cache: &Option<PathBuf>,
    limit: &Option<u64>,
    need: f64,
) -> anyhow::Result<PrimeCache> {
    if let Some(path) = cache {
        return nplc::load_cache(path).with_context(|| format!("loading {}", path.display()));
    }
    if let Some(limit) = limit {
        if let Some(path) = default_cache_path(*limit) {
            if path.exists() {
                return nplc::load_cache(&path)
                    .with_context(|| format!("loading {}", path.display()));
            }
        }
        eprintln!("sieving primes up to {limit} in memory (use `cache build` to persist)");
        return Ok(build_cache(*limit, DEFAULT_SEGMENT_SIZE)?);
    }
    bail!("need --cache FILE or --limit N (range end {need} must be covered)")
}

/// Write the finished body to `--out` or stdout. Callers compute first and
/// write last, so a failed run leaves no partial output file behind.
fn write_output(out: &Option<PathBuf>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

fn run_scan(args: ScanArgs) -> anyhow::Result<u8> {
    let (lo, hi) = args.common.range;
    let cache = resolve_cache(&args.common.cache, &args.common.limit, hi)?;
    let grid = match (args.full, args.grid) {
        (true, GridMode::GapEndpoints { .. }) => GridMode::GapEndpoints { max_rows: None },
        (_, g) => g,
    };
    let cfg = ScanConfig {
        lo,
        hi,
        grid,
        t_max: args.tmax,
        tol: args.tol,
        workers: args.workers,
    };
    let rows = scan_rows(&cache, &cfg)?;

    let mut body = String::with_capacity(rows.len() * 512);
    match args.common.format {
        Format::Csv => {
            body.push_str(CSV_HEADER);
            body.push('\n');
            for row in &rows {
                body.push_str(&row.csv_line());
                body.push('\n');
            }
        }
        Format::Json => {
            for row in &rows {
                body.push_str(&serde_json::to_string(row)?);
                body.push('\n');
            }
        }
    }
    write_output(&args.common.out, &body)?;
    eprintln!("scan: {} rows over [{lo:e}, {hi:e}]", rows.len());
    Ok(exit_codes::OK)
}

fn run_check_cmd(args: CheckArgs) -> anyhow::Result<u8> {
    let check_id = CheckId::from_name(&args.check_id).ok_or_else(|| {
        anyhow!(
            "unknown check `{}`; known checks: {}",
            args.check_id,
            CheckId::ALL.map(|c| c.name()).join(" ")
        )
    })?;
    let (lo, hi) = args.common.range;
    let cache = resolve_cache(&args.common.cache, &args.common.limit, hi)?;
    let params = CheckParams {
        eps: args.eps,
        delta0: args.delta0,
        t_max: args.tmax,
        quad_tol: args.tol,
        e_points: args.e_points,
        cramer_threshold: args.cramer_threshold,
        ..Default::default()
    };
    let report = run_check(check_id, lo, hi, &cache, &params)?;

    let body = match args.common.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&report_to_json(&report))?
        ),
        Format::Csv => report_to_csv(&report),
    };
    write_output(&args.common.out, &body)?;
    eprintln!("{}", report_summary(&report));
    if report.violations_persist() {
        Ok(exit_codes::VIOLATIONS_PERSIST)
    } else {
        Ok(exit_codes::OK)
    }
}

fn run_decompose(args: DecomposeArgs) -> anyhow::Result<u8> {
    let cache = resolve_cache(&args.cache, &args.limit, args.x)?;
    let t_max = args.tmax.unwrap_or(cache.limit() as f64);
    let table = nplab_core::chebyshev::ThetaTable::new(&cache);
    let totals = nplab_core::rh_criteria::Totals::compute(&cache);
    let opts = EOptions {
        quad_tol: None,
        max_rel_error: args.max_rel_e,
    };
    let dec =
        nplab_core::rh_criteria::decompose_with(args.x, t_max, &cache, &table, &totals, &opts)?;
    let body = format!(
        "{}\n",
        serde_json::to_string_pretty(&decomposition_to_json(&dec))?
    );
    write_output(&args.out, &body)?;
    Ok(exit_codes::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parser() {
        assert_eq!(parse_range("1e3:1e6").unwrap(), (1e3, 1e6));
        assert_eq!(parse_range("10:11.5").unwrap(), (10.0, 11.5));
        assert!(parse_range("10").is_err());
    }

    #[test]
    fn count_parser() {
        assert_eq!(parse_count("1000000").unwrap(), 1_000_000);
        assert_eq!(parse_count("1e8").unwrap(), 100_000_000);
        assert!(parse_count("1.5e0").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
