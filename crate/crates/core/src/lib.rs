//! Exact construction and verification of algebraic-geometry codes over
//! explicit function fields, and of their conorm lifts along towers of
//! Kummer and Artin-Schreier extensions.

pub mod agcode;
pub mod conorm;
pub mod error;
pub mod extff;
pub mod galois;
pub mod hermitian;
pub mod linalg;
pub mod job;
pub mod ratff;
pub mod registry;
pub mod series;
pub mod upoly;

pub use error::{Error, Result};
pub use galois::{Field, FieldElement};
pub use upoly::{Poly, RatFunc};
