//! Exact arithmetic for post-critically finite unicritical polynomials
//! `z^d + c` and bicritical cubics `z^3 - 3a^2 z + (2a^3 + v)`: Gleason and
//! Misiurewicz defining polynomials, their discriminants and factorizations,
//! transversality tests in positive characteristic, and numerically certified
//! solutions of the bicritical PCF variety.

pub mod bicritical;
pub mod dynatomic;
pub mod error;
pub mod exactpoly;
pub mod finitefield;
pub mod intfactor;
pub mod ratfactor;
pub mod transversality;

pub use error::{Error, Result};
