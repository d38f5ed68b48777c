//! Std companion to `preper-core`: parallel search drivers, JSON
//! certificates, and the `preper` command-line front end.

pub mod cert;
pub mod cli;
pub mod parallel;

pub use cert::{Certificate, Payload, Provenance};
