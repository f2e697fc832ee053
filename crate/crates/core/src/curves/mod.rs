//! The period condition as an exact object: integer bivariate
//! polynomials for the critical-orbit iteration, Newton-polygon branch
//! expansion at the two lines at infinity, exact-period filtering,
//! Gleason polynomials and the bitransitive-center enumeration oracle.

mod centers;
mod newton_puiseux;
mod poly;
mod roots;

pub use centers::{type2_centers, Center, CentersReport};
pub use newton_puiseux::{exact_period_filter, newton_puiseux, BranchSeries, Chart};
pub use poly::{gleason, omega_pair, omega_poly, resultant, IntBivarPoly, IntPoly};
pub use roots::{all_roots, cluster_roots, newton_polish_compensated};
