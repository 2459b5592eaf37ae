//! Exact and numerical certificates for arithmetic holonomy bounds: formal power
//! series over ℚ, denominator growth rates, conformal maps and their sizes, Bost–Charles
//! type integrals, dimension bounds, and the special holonomic functions they are
//! applied to.

pub mod arith;
pub mod certs;
pub mod error;
pub mod growth;
pub mod linalg;
pub mod maps;
pub mod oracle;
pub mod poly;
pub mod rates;
pub mod series;
pub mod special;

pub use error::{Error, Result};

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
