//! The quadratic family `phi_beta(z) = 1 + beta/z + a/z^2` over the
//! Puiseux field, with `a = t` for bounded parameters and `a = 1/t` for
//! unbounded ones: orbits of the marked critical point, parameter and
//! dynamical derivatives with exact valuations, limb classification,
//! level-0 ball structure, returns and periodic-ball detection.

mod balls;
mod limbs;
mod renorm;

pub use balls::{ball_image, BallChart, BallSpec};
pub use limbs::{classify_limb, level0_structure, Level0, LimbInfo};
pub use renorm::{
    deriv_order_table_check, first_noncentral_return, renorm_detect, RegionSample, RenormInfo,
    ReturnInfo, TableCheck,
};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::series::{exp_int, Exp, PuiseuxSeries, Valuation};
use crate::{Ctx, Error, Result};

/// A point of the projective line over the series field.
#[derive(Clone, Debug)]
pub enum Point {
    Finite(PuiseuxSeries),
    Infinity,
}

impl Point {
    pub fn finite(&self) -> Option<&PuiseuxSeries> {
        match self {
            Point::Finite(s) => Some(s),
            Point::Infinity => None,
        }
    }
}

/// Which normalization of the family applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// `a = t`, bounded parameter (branch at the line `a = 0`).
    Plus,
    /// `a = 1/t`, unbounded parameter (branch at the line at infinity).
    Minus,
}

/// The family member for one parameter, with the chart fixed by the
/// valuation of the parameter.
#[derive(Clone, Debug)]
pub struct MapChart {
    pub kind: ChartKind,
    pub beta: PuiseuxSeries,
    a_term: PuiseuxSeries,
}

impl MapChart {
    /// Chart selection: `|beta| <= 1` takes `a = t`, `|beta| > 1` takes
    /// `a = 1/t`.
    pub fn new(beta: PuiseuxSeries, _ctx: &Ctx) -> Result<Self> {
        let nonneg = beta
            .ord()
            .is_nonnegative()
            .ok_or_else(|| Error::IndeterminateOrder {
                what: "chart selection from parameter valuation".into(),
            })?;
        let (kind, a_term) = if nonneg {
            (ChartKind::Plus, PuiseuxSeries::var())
        } else {
            (
                ChartKind::Minus,
                PuiseuxSeries::monomial(exp_int(-1), Complex64::new(1.0, 0.0)),
            )
        };
        Ok(MapChart { kind, beta, a_term })
    }

    /// `ord tau`: 1 in the unbounded chart, 0 otherwise.
    pub fn tau_ord(&self) -> i64 {
        match self.kind {
            ChartKind::Plus => 0,
            ChartKind::Minus => 1,
        }
    }

    pub fn a_term(&self) -> &PuiseuxSeries {
        &self.a_term
    }

    /// The free critical point `-2a/beta`.
    pub fn cocritical(&self, ctx: &Ctx) -> Result<PuiseuxSeries> {
        self.a_term
            .scale(Complex64::new(-2.0, 0.0))
            .div(&self.beta, ctx)
    }

    /// Total evaluation on the projective line: `phi(0) = infinity`,
    /// `phi(infinity) = 1`.
    pub fn apply(&self, z: &Point, ctx: &Ctx) -> Result<Point> {
        match z {
            Point::Infinity => Ok(Point::Finite(PuiseuxSeries::one())),
            Point::Finite(s) => {
                if s.ord().is_zero_like() {
                    return Ok(Point::Infinity);
                }
                // (z^2 + beta z + a) / z^2
                let z2 = s.mul(s, ctx);
                let num = z2.add(&self.beta.mul(s, ctx), ctx).add(&self.a_term, ctx);
                Ok(Point::Finite(num.div(&z2, ctx)?))
            }
        }
    }

    /// `phi'(z) = -(beta z + 2a)/z^3`.
    pub fn deriv_z(&self, z: &PuiseuxSeries, ctx: &Ctx) -> Result<PuiseuxSeries> {
        let num = self
            .beta
            .mul(z, ctx)
            .add(&self.a_term.scale(Complex64::new(2.0, 0.0)), ctx)
            .neg();
        let z3 = z.mul(z, ctx).mul(z, ctx);
        num.div(&z3, ctx)
    }

    /// `d phi / d beta (z) = 1/z`.
    pub fn deriv_beta(&self, z: &PuiseuxSeries, ctx: &Ctx) -> Result<PuiseuxSeries> {
        z.inverse(ctx)
    }
}

/// Orbit of the critical point with the position of the first entry that
/// vanished (to truncation or exactly), where iteration stops.
pub struct OrbitScan {
    pub points: Vec<Point>,
    pub first_zero: Option<usize>,
}

/// Iterate the critical point `0 -> infinity -> 1 -> ...` up to `omega_n`,
/// stopping early at the first vanishing entry past the start.
pub fn orbit_scan(map: &MapChart, n: u32, ctx: &Ctx) -> Result<OrbitScan> {
    let mut points = vec![Point::Finite(PuiseuxSeries::zero())];
    let mut first_zero = None;
    if n >= 1 {
        points.push(Point::Infinity);
    }
    let mut j = 1;
    while j < n {
        let next = map.apply(&points[j as usize], ctx)?;
        if let Point::Finite(s) = &next {
            if s.ord().is_zero_like() {
                points.push(next);
                first_zero = Some(j as usize + 1);
                return Ok(OrbitScan { points, first_zero });
            }
        }
        points.push(next);
        j += 1;
    }
    Ok(OrbitScan { points, first_zero })
}

/// The full orbit `omega_0 .. omega_n`; errors if an intermediate entry
/// vanishes before step `n` (the working depth cannot resolve it).
pub fn critical_orbit(map: &MapChart, n: u32, ctx: &Ctx) -> Result<Vec<Point>> {
    let scan = orbit_scan(map, n, ctx)?;
    match scan.first_zero {
        Some(j) if j < n as usize => Err(Error::TruncationExhausted { index: j }),
        _ => Ok(scan.points),
    }
}

/// The derivative of the `(p-1)`-th iterate at infinity, in the chart
/// `w = 1/z`: the chain rule gives `beta * prod_{j=2}^{p-1} phi'(omega_j)`
/// with every factor's valuation exact.
pub fn deriv_at_infinity(map: &MapChart, p: u32, ctx: &Ctx) -> Result<PuiseuxSeries> {
    assert!(p >= 2);
    let orbit = orbit_scan(map, p, ctx)?;
    let mut g = map.beta.clone();
    for j in 2..p as usize {
        let z = orbit
            .points
            .get(j)
            .and_then(|pt| pt.finite())
            .ok_or_else(|| Error::invalid(format!("orbit entry {j} is not finite")))?;
        if z.ord().is_zero_like() {
            return Err(Error::TruncationExhausted { index: j });
        }
        g = g.mul(&map.deriv_z(z, ctx)?, ctx);
    }
    Ok(g)
}

/// The parameter derivative of `omega_p`, via the forward recursion
/// `d omega_{j+1} = dphi/dbeta(omega_j) + phi'(omega_j) d omega_j`
/// seeded at `omega_2 = 1` (a constant, so `d omega_2 = 0`).
pub fn dbeta_orbit(map: &MapChart, p: u32, ctx: &Ctx) -> Result<PuiseuxSeries> {
    assert!(p >= 2);
    let orbit = orbit_scan(map, p, ctx)?;
    let mut d = PuiseuxSeries::zero();
    for j in 2..p as usize {
        let z = orbit
            .points
            .get(j)
            .and_then(|pt| pt.finite())
            .ok_or_else(|| Error::invalid(format!("orbit entry {j} is not finite")))?;
        if z.ord().is_zero_like() {
            return Err(Error::TruncationExhausted { index: j });
        }
        let db = map.deriv_beta(z, ctx)?;
        let dz = map.deriv_z(z, ctx)?;
        d = db.add(&dz.mul(&d, ctx), ctx);
    }
    Ok(d)
}

/// `min(ord, 0)` helper for spherical corrections.
fn min0(e: Exp) -> Exp {
    e.min(Exp::zero())
}

/// Order of the spherical norm of `phi'` at a finite point:
/// `ord phi'(z) + 2 min(ord z, 0) - 2 min(ord phi(z), 0)`.
pub fn spherical_deriv_z_ord(map: &MapChart, z: &PuiseuxSeries, ctx: &Ctx) -> Result<Exp> {
    let dz = map.deriv_z(z, ctx)?.ord().finite("spherical z-derivative")?;
    let oz = z.ord().finite("spherical z-derivative argument")?;
    let phi = match map.apply(&Point::Finite(z.clone()), ctx)? {
        Point::Finite(s) => s.ord().finite("spherical z-derivative image")?,
        Point::Infinity => {
            return Err(Error::RegionUnresolved {
                what: "derivative at a pole".into(),
            })
        }
    };
    Ok(dz + min0(oz) * 2 - min0(phi) * 2)
}

/// Order of the parameter-derivative norm: the standard coordinate in
/// parameter space, the spherical one in dynamical space, so
/// `ord (1/z) - 2 min(ord phi(z), 0)`.
pub fn spherical_deriv_beta_ord(map: &MapChart, z: &PuiseuxSeries, ctx: &Ctx) -> Result<Exp> {
    let oz = z.ord().finite("spherical beta-derivative argument")?;
    let phi = match map.apply(&Point::Finite(z.clone()), ctx)? {
        Point::Finite(s) => s.ord().finite("spherical beta-derivative image")?,
        Point::Infinity => {
            return Err(Error::RegionUnresolved {
                what: "parameter derivative at a pole".into(),
            })
        }
    };
    Ok(-oz - min0(phi) * 2)
}

/// Spherical distance (order form) between projective points.
pub fn spherical_ord_points(a: &Point, b: &Point, ctx: &Ctx) -> Result<Valuation> {
    match (a, b) {
        (Point::Infinity, Point::Infinity) => Ok(Valuation::ExactZero),
        (Point::Infinity, Point::Finite(s)) | (Point::Finite(s), Point::Infinity) => {
            let nonneg = s
                .ord()
                .is_nonnegative()
                .ok_or_else(|| Error::IndeterminateOrder {
                    what: "spherical distance to infinity".into(),
                })?;
            if nonneg {
                Ok(Valuation::Finite(Exp::zero()))
            } else {
                Ok(s.inverse(ctx)?.ord())
            }
        }
        (Point::Finite(x), Point::Finite(y)) => crate::series::spherical_ord(x, y, ctx),
    }
}

#[cfg(test)]
mod tests;
