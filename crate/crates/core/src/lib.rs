//! Exact and numeric tools for twisted (co)homology of Riemann-Wirtinger
//! integrals on a once-punctured elliptic curve.

pub mod cli;
pub mod cohomology;
pub mod config;
pub mod homology;
pub mod pairing;
pub mod par;
pub mod report;
pub mod suite;
pub mod symfield;
mod symtext;
pub mod theta;

pub use config::{parse_config, ConfigError, ModuliConfig};
pub use num_complex::Complex64;
pub use report::{IdentityCheck, IdentityReport};
pub use symfield::{LaurentPoly, Shift, SymError, SymMatrix, SymRat};
