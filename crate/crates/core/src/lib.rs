//! Exact arithmetic toolkit for rational periodic and preperiodic points of the
//! unicritical family `f(x) = x^d + c` over the rationals.
//!
//! The crate is `no_std` (it needs `alloc`). Searches are exposed as
//! range-partitioned kernels so that callers with threads can split the work
//! and merge the sorted results; the `preper` crate does exactly that.
#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod error;
pub mod exactnum;
pub mod poly;
pub mod dynamics;
pub mod search;
pub mod fermat_catalan;
pub mod abc;
pub mod curves;

pub use error::{Error, Result};
pub use exactnum::{Integer, Rational};
pub use poly::{Ring, UniPoly};
