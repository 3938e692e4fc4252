//! Natural extensions of piecewise homographic interval maps.
//!
//! The crate models continued fraction maps as piecewise Möbius systems,
//! builds their planar natural extensions, computes the compact invariant
//! domain as the fixed point of a contracting set map, and extracts the
//! invariant density from its fibers.
//!
//! ```
//! use cfx::catalog;
//! use cfx::skew::{skew_step, SkewPoint};
//!
//! let (gauss, _) = catalog::gauss();
//! let (p, digit) = skew_step(&gauss, SkewPoint::new(0.7, 0.2)).unwrap();
//! assert_eq!(digit.to_string(), "1");
//! assert!((p.y - 0.602).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attractor;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod interval;
pub mod io;
pub mod measure;
pub mod mobius;
pub mod skew;
pub mod svg;

pub use error::{Error, Result};
pub use interval::Interval;
