use core::fmt;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by the computational core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Sieve limit below the smallest prime.
    LimitTooSmall { limit: u64 },
    /// Sieve segment size below the supported minimum.
    SegmentTooSmall { segment_size: usize },
    /// Requested limit exceeds the configured memory budget.
    CapacityExceeded { limit: u64, budget: u64 },
    /// A prime cache failed structural validation.
    MalformedCache { reason: &'static str },
    /// An evaluation point lies beyond the cached primes.
    InsufficientCache { requested: f64, limit: u64 },
    /// An argument lies outside an operation's domain.
    Domain { what: &'static str, value: f64 },
    /// A scan grid is not ascending.
    UnsortedGrid { index: usize },
    /// The cache is too small to reach the requested tail bound.
    CacheBudget {
        requested_tol: f64,
        required_limit: u64,
    },
    /// The integration horizon is too small for the requested relative error.
    TailBudget {
        requested_rel: f64,
        required_t_max: f64,
    },
    /// Adaptive quadrature ran out of subdivisions before reaching the
    /// tolerance; carries the best-effort value and the nested-rule
    /// estimate it reached (no longer a certified bound).
    QuadratureBudget { value: f64, achieved: f64, tol: f64 },
    /// The integrand returned a non-finite value.
    NonFiniteIntegrand { at: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::LimitTooSmall { limit } => {
                write!(f, "sieve limit {limit} is below 2")
            }
            Error::SegmentTooSmall { segment_size } => {
                write!(f, "segment size {segment_size} is below the minimum of 64")
            }
            Error::CapacityExceeded { limit, budget } => {
                write!(
                    f,
                    "limit {limit} exceeds the memory budget (max limit {budget}); \
                     raise the budget explicitly to sieve this far"
                )
            }
            Error::MalformedCache { reason } => write!(f, "malformed prime cache: {reason}"),
            Error::InsufficientCache { requested, limit } => {
                write!(
                    f,
                    "evaluation at {requested} needs primes beyond the cache limit {limit}"
                )
            }
            Error::Domain { what, value } => write!(f, "{what} is undefined at {value}"),
            Error::UnsortedGrid { index } => {
                write!(f, "grid is not ascending at index {index}")
            }
            Error::CacheBudget {
                requested_tol,
                required_limit,
            } => {
                write!(
                    f,
                    "tail bound cannot reach {requested_tol:e} with this cache; \
                     a cache limit of at least {required_limit} is required"
                )
            }
            Error::TailBudget {
                requested_rel,
                required_t_max,
            } => {
                write!(
                    f,
                    "relative error {requested_rel:e} needs an integration horizon \
                     of at least {required_t_max:.3e}"
                )
            }
            Error::QuadratureBudget {
                value,
                achieved,
                tol,
            } => {
                write!(
                    f,
                    "quadrature stopped at error bound {achieved:e} (value {value:e}) \
                     before reaching tolerance {tol:e}"
                )
            }
            Error::NonFiniteIntegrand { at } => {
                write!(f, "integrand is not finite at t = {at}")
            }
        }
    }
}

impl core::error::Error for Error {}
