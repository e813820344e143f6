//! Computational engine for the open XXX spin chain with simultaneously
//! triangularizable boundary matrices: explicit lattice operators at desk
//! scale, a numerical Bethe-equation solver, generalized Bethe vectors, and
//! a brute-force verification suite with seeded, machine-readable reports.

pub mod error;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod serde_c64;

pub mod bethe;
pub mod boundary;
pub mod config;
pub mod lattice;
pub mod runner;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
