//! Computational core for scanning prime-sum remainders.
//!
//! Everything here is pure computation over an immutable [`primes::PrimeCache`]:
//! compensated summation and adaptive quadrature (`numeric`), the Chebyshev
//! step functions and their exact primitives (`chebyshev`), the Mertens sums
//! and their remainders (`mertens`), and the tail identities, decompositions
//! and bound checks built on top of them (`rh_criteria`).
//!
//! The crate is `no_std`-compatible (allocation required); enable the `libm`
//! feature instead of `std` for freestanding builds. File formats, CSV/JSON
//! export and the command line live in the companion `nplab` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("nplab-core requires either the `std` or the `libm` feature");

mod error;
mod fmath;
mod sweep;

pub mod chebyshev;
pub mod mertens;
pub mod numeric;
pub mod primes;
pub mod rh_criteria;

pub use error::{Error, Result};
