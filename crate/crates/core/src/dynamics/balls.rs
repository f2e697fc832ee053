//! Balls of the projective line over the series field and their exact
//! images under the quadratic family.
//!
//! A ball is stored in one of two charts: `Standard` is
//! `{z : ord(z - c) >= rho}` (or `>` when open); `Inverted` is the same
//! in the coordinate `w = 1/z`, so it contains infinity when `w = 0` is
//! inside. Log-radii are exact rationals; with the convention that every
//! stored ball either lies in the integral hemisphere or contains the
//! non-integral one, the log-radius is the spherical one.

use num_complex::Complex64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::series::{Exp, PuiseuxSeries, Valuation};
use crate::{Ctx, Error, Result};

use super::{MapChart, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallChart {
    Standard,
    Inverted,
}

/// A rational ball: center series, log-radius `rho` (radius `|t|^rho`),
/// open or closed.
#[derive(Clone, Debug)]
pub struct BallSpec {
    pub chart: BallChart,
    pub center: PuiseuxSeries,
    pub log_radius: Exp,
    pub closed: bool,
}

impl BallSpec {
    pub fn standard(center: PuiseuxSeries, log_radius: Exp, closed: bool) -> Self {
        BallSpec {
            chart: BallChart::Standard,
            center,
            log_radius,
            closed,
        }
    }

    pub fn inverted(center_w: PuiseuxSeries, log_radius: Exp, closed: bool) -> Self {
        BallSpec {
            chart: BallChart::Inverted,
            center: center_w,
            log_radius,
            closed,
        }
    }

    /// Spherical log-diameter (valid under the chart convention above).
    pub fn log_diam(&self) -> Exp {
        self.log_radius
    }

    fn admits(&self, ord: Valuation) -> Result<bool> {
        let rho = self.log_radius;
        Ok(match ord {
            Valuation::Finite(e) => {
                if self.closed {
                    e >= rho
                } else {
                    e > rho
                }
            }
            Valuation::ZeroToTrunc(bound) => {
                if bound >= rho || (!self.closed && bound > rho) {
                    true
                } else {
                    return Err(Error::IndeterminateOrder {
                        what: "ball membership at truncation".into(),
                    });
                }
            }
            Valuation::ExactZero => true,
        })
    }

    /// Exact membership test by order comparison.
    pub fn contains(&self, p: &Point, ctx: &Ctx) -> Result<bool> {
        match (self.chart, p) {
            (BallChart::Standard, Point::Infinity) => Ok(false),
            (BallChart::Standard, Point::Finite(z)) => {
                self.admits(z.sub(&self.center, ctx).ord())
            }
            (BallChart::Inverted, Point::Infinity) => self.admits(self.center.neg().ord()),
            (BallChart::Inverted, Point::Finite(z)) => {
                if z.ord().is_zero_like() {
                    // w = 1/z is at infinity in the w-chart.
                    return Ok(false);
                }
                let w = z.inverse(ctx)?;
                self.admits(w.sub(&self.center, ctx).ord())
            }
        }
    }

    /// Ultrametric ball equality: identical radius/closedness and each
    /// center inside the other.
    pub fn same_ball(&self, other: &BallSpec, ctx: &Ctx) -> Result<bool> {
        if self.log_radius != other.log_radius || self.closed != other.closed {
            return Ok(false);
        }
        let center_pt = match other.chart {
            BallChart::Standard => Point::Finite(other.center.clone()),
            BallChart::Inverted => {
                if other.center.ord().is_zero_like() {
                    Point::Infinity
                } else {
                    Point::Finite(other.center.inverse(ctx)?)
                }
            }
        };
        self.contains(&center_pt, ctx)
    }

    /// Subset test. Standard-in-standard and inverted-in-inverted reduce
    /// to center membership plus radius comparison; a standard ball lies
    /// in an inverted one only via the zero-centered case used here.
    pub fn subset_of(&self, outer: &BallSpec, ctx: &Ctx) -> Result<bool> {
        match (self.chart, outer.chart) {
            (BallChart::Standard, BallChart::Standard)
            | (BallChart::Inverted, BallChart::Inverted) => {
                let center_in = outer.admits(self.center.sub(&outer.center, ctx).ord())?;
                let radius_ok = self.log_radius > outer.log_radius
                    || (self.log_radius == outer.log_radius
                        && (outer.closed || !self.closed));
                Ok(center_in && radius_ok)
            }
            (BallChart::Inverted, BallChart::Standard) => Ok(false),
            (BallChart::Standard, BallChart::Inverted) => {
                if !outer.center.ord().is_zero_like() {
                    return Err(Error::invalid(
                        "subset test against an inverted ball with nonzero center",
                    ));
                }
                // outer = {ord(1/z) >= rho}; inner standard ball has
                // constant valuation ord(center) when radius < |center|.
                let oc = self.center.ord().finite("subset test center")?;
                let inside = if outer.closed { -oc >= outer.log_radius } else { -oc > outer.log_radius };
                Ok(inside && self.log_radius > oc)
            }
        }
    }
}

/// Exact image of a ball under the family map, with the covering degree.
/// The image log-radius comes off the Newton polygon of
/// `phi(c + h) - phi(c)`, a quadratic in `h` over the series field.
pub fn ball_image(map: &MapChart, ball: &BallSpec, ctx: &Ctx) -> Result<(BallSpec, u32)> {
    let rho = ball.log_radius;
    match ball.chart {
        BallChart::Inverted => {
            // z = 1/w: phi(1/w) = 1 + beta w + a w^2, polynomial in w.
            let wc = &ball.center;
            let val = PuiseuxSeries::one()
                .add(&map.beta.mul(wc, ctx), ctx)
                .add(&map.a_term().mul(wc, ctx).mul(wc, ctx), ctx);
            // Linear and quadratic parts over the ball.
            let lin = map
                .beta
                .add(&map.a_term().scale(Complex64::new(2.0, 0.0)).mul(wc, ctx), ctx);
            let quad = map.a_term().clone();
            let rho_img = min_term_ord(&lin, rho, &quad, rho * 2)?;
            let degree = 1 + u32::from(contains_cocritical(map, ball, ctx)?);
            Ok((normalized_standard(val, rho_img, ball.closed, ctx)?, degree))
        }
        BallChart::Standard => {
            let c = &ball.center;
            let pole_in = ball.admits(c.neg().ord())?;
            if !pole_in {
                // phi(c+h) - phi(c) = -h (a1 + a2 h) / (c^2 (c+h)^2),
                // a1 = beta c^2 + 2 a c, a2 = beta c + a; |c+h| = |c|.
                let c2 = c.mul(c, ctx);
                let a1 = map
                    .beta
                    .mul(&c2, ctx)
                    .add(&map.a_term().scale(Complex64::new(2.0, 0.0)).mul(c, ctx), ctx);
                let a2 = map.beta.mul(c, ctx).add(map.a_term(), ctx);
                let oc = c.ord().finite("ball image center")?;
                let rho_img = min_term_ord(&a1, rho, &a2, rho * 2)? - oc * 4;
                let val = match map.apply(&Point::Finite(c.clone()), ctx)? {
                    Point::Finite(s) => s,
                    Point::Infinity => unreachable!("pole-free ball"),
                };
                let degree = 1 + u32::from(contains_cocritical(map, ball, ctx)?);
                Ok((normalized_standard(val, rho_img, ball.closed, ctx)?, degree))
            } else {
                // Pole inside: work with 1/phi = z^2 / P(z),
                // P(z) = z^2 + beta z + a. Needs P nonvanishing on the
                // ball: ord P(c) < min(ord P'(c) + rho, 2 rho).
                let pc = c
                    .mul(c, ctx)
                    .add(&map.beta.mul(c, ctx), ctx)
                    .add(map.a_term(), ctx);
                let dpc = c.scale(Complex64::new(2.0, 0.0)).add(&map.beta, ctx);
                let opc = pc.ord().finite("ball image P(center)")?;
                let dp_bound = match dpc.ord() {
                    Valuation::Finite(e) => (e + rho).min(rho * 2),
                    _ => rho * 2,
                };
                if opc >= dp_bound {
                    return Err(Error::ImageIsP1);
                }
                if contains_cocritical(map, ball, ctx)? {
                    return Err(Error::ImageIsP1);
                }
                // 1/phi(c+h) - 1/phi(c) = h (b1 + b2 h) / (P(c) P(c+h)).
                let b1 = c
                    .scale(Complex64::new(2.0, 0.0))
                    .mul(&pc, ctx)
                    .sub(&c.mul(c, ctx).mul(&dpc, ctx), ctx);
                let b2 = pc.sub(&c.mul(c, ctx), ctx);
                let rho_img = min_term_ord(&b1, rho, &b2, rho * 2)? - opc * 2;
                let wval = c.mul(c, ctx).div(&pc, ctx)?;
                Ok((
                    BallSpec {
                        chart: BallChart::Inverted,
                        center: wval,
                        log_radius: rho_img,
                        closed: ball.closed,
                    },
                    2,
                ))
            }
        }
    }
}

/// `min(ord x + sx, ord y + sy)`, treating zero-to-truncation terms as
/// absent when their bound cannot undercut the other term.
fn min_term_ord(x: &PuiseuxSeries, sx: Exp, y: &PuiseuxSeries, sy: Exp) -> Result<Exp> {
    let ox = x.ord();
    let oy = y.ord();
    match (ox, oy) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Ok((a + sx).min(b + sy)),
        (Valuation::Finite(a), _) => {
            let safe = match oy {
                Valuation::ExactZero => true,
                Valuation::ZeroToTrunc(bound) => bound + sy >= a + sx,
                _ => unreachable!(),
            };
            if safe {
                Ok(a + sx)
            } else {
                Err(Error::IndeterminateOrder {
                    what: "ball image radius".into(),
                })
            }
        }
        (_, Valuation::Finite(b)) => {
            let safe = match ox {
                Valuation::ExactZero => true,
                Valuation::ZeroToTrunc(bound) => bound + sx >= b + sy,
                _ => unreachable!(),
            };
            if safe {
                Ok(b + sy)
            } else {
                Err(Error::IndeterminateOrder {
                    what: "ball image radius".into(),
                })
            }
        }
        _ => Err(Error::IndeterminateOrder {
            what: "ball image radius (both parts vanish)".into(),
        }),
    }
}

fn contains_cocritical(map: &MapChart, ball: &BallSpec, ctx: &Ctx) -> Result<bool> {
    let w = map.cocritical(ctx)?;
    ball.contains(&Point::Finite(w), ctx)
}

/// Standard-chart output, converted to the inverted chart when the
/// center escapes the integral hemisphere.
fn normalized_standard(
    center: PuiseuxSeries,
    rho: Exp,
    closed: bool,
    ctx: &Ctx,
) -> Result<BallSpec> {
    match center.ord() {
        Valuation::Finite(e) if e.is_negative() && rho > e => Ok(BallSpec {
            chart: BallChart::Inverted,
            center: center.inverse(ctx)?,
            log_radius: rho - e * 2,
            closed,
        }),
        _ => Ok(BallSpec {
            chart: BallChart::Standard,
            center,
            log_radius: rho,
            closed,
        }),
    }
}
