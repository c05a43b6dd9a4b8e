//! Principal polarizations on squares of CM elliptic curves.
//!
//! The combinatorial layer ([`quad_order`], [`hermitian`], [`classify`],
//! [`moduli`]) is exact integer arithmetic. The [`analytic`] layer turns a
//! polarization into a genus-2 curve numerically and checks it against
//! known equations.

pub mod analytic;
pub mod classify;
pub mod error;
pub mod fixtures;
pub mod hermitian;
pub mod intmath;
pub mod lattice;
pub mod moduli;
pub mod quad_order;

pub use error::{Error, Result};
