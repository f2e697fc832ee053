//! Exact and semi-exact computations on the moduli curves of quadratic
//! rational maps with a marked periodic critical point.
//!
//! The crate is organised around five subsystems:
//!
//! - [`counting`]: closed-form counting quantities (divisor sums, limb
//!   counts, bitransitive-center counts, Euler characteristics) over
//!   arbitrary-precision integers and rationals.
//! - [`series`]: truncated Puiseux series with exact rational exponents
//!   and complex coefficients, plus forward-mode parameter jets.
//! - [`curves`]: the period condition as an exact integer bivariate
//!   polynomial, Newton-polygon branch expansion at the two lines at
//!   infinity, Gleason polynomials and the bitransitive-center oracle.
//! - [`dynamics`]: the quadratic family over the Puiseux field - orbits,
//!   derivative valuations, limbs, level-0 ball structure, returns and
//!   periodic-ball (renormalization) detection.
//! - [`verify`]: branch-by-branch order-identity checks, the one-form
//!   order ledger, rescaling-limit fits and the three-way
//!   Euler-characteristic cross-check.
//!
//! [`pipeline`] ties the subsystems together and owns the branch cache.

pub mod counting;
pub mod curves;
pub mod dynamics;
pub mod pipeline;
pub mod series;
pub mod verify;

mod ctx;
mod error;

pub use ctx::{Ctx, MarginStats};
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Library version recorded in cache manifests.
pub const LIB_VERSION: &str = env!("CARGO_PKG_VERSION");
