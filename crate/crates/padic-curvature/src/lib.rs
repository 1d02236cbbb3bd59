//! Exact p-adic workbench for arithmetic differential geometry: Weil monoids,
//! Levi-Civita and Chern pi-connections, curvature mod pi, gauge cocycles and
//! Legendre-symbol identities over truncated ramified p-adic rings.

pub mod cli;
pub mod connections;
pub mod curvature;
pub mod error;
pub mod gauge;
pub mod local_field;
pub mod random;
pub mod weil_monoid;

pub use error::{Error, Result};
