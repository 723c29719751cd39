//! Exact formal group law calculus over truncated series rings.

pub mod coefficients;
pub mod equivariant;
pub mod error;
pub mod fgl;
pub mod genus;
pub mod polyseries;
pub mod prospectrum;
pub mod quotient;
pub mod tate;

pub use coefficients::{Elem, Ring, RingKind, Value};
pub use error::{Error, Result};
pub use fgl::{FormalGroupLaw, Isomorphism};
pub use polyseries::{MultiSeries, SeriesSpace};
