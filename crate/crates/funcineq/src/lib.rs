//! Numerical toolkit for modified logarithmic Sobolev inequalities,
//! transportation inequalities, Hardy criteria and concentration bounds of
//! one-dimensional measures `exp(-phi)` and their finite products.
//!
//! The crate certifies inequality constants by supremizing entropy/energy
//! ratios over explicit test-function families, maps constants along the
//! standard transfer rules (tensorisation, bounded perturbation, the
//! LSI <-> transportation chain), and cross-checks concentration predictions
//! against Monte Carlo tails.

pub mod certify;
pub mod costs;
pub mod families;
pub mod functionals;
pub mod grid;
pub mod hardy;
pub mod error;
pub mod measures;
pub mod quad;
pub mod report;
pub mod transport;
pub(crate) mod roots;

pub use error::{Error, Result};
pub use measures::{Measure1D, MeasureSpec, ProductMeasure, Support};

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema version for JSON reports.
pub const REPORT_SCHEMA_VERSION: u32 = 1;
