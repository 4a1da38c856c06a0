//! Root numbers, reduction data, torsion and rational right triangles for the
//! family of elliptic curves
//!
//! ```text
//! E_t : y^2 = x(x+1)(x+t^2),   t in Q \ {0, 1, -1}
//! ```
//!
//! All arithmetic is exact; there is no floating point anywhere in the crate.

pub mod curve;
pub mod error;
pub mod exactq;
pub mod experiments;
pub mod localroot;
pub mod rootnumber;
pub mod search;
pub mod triangles;

pub use error::{Error, Result};
pub use exactq::{Rational, Sign};
