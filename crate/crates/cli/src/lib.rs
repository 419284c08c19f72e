//! Command-line front end: atom listings, factorization reports, Clifford algebra
//! diagnostics and the seeded verification suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod sample;
pub mod verify;
