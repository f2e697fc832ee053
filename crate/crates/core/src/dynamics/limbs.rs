//! Limb classification of branch parameters and the level-0 ball
//! structure of the corresponding maps.
//!
//! An unbounded parameter (`ord beta = -1` with unit leading part) sits
//! in the order-2 limb. A bounded one reduces to one of the special
//! values `c_theta = -(2 cos(pi theta))^{-2}` for a rational angle
//! `theta` of order `q >= 3`; the angle is recovered by matching the
//! reduction against every admissible `c_theta` and the limb coordinate
//! is `gamma = (beta - c_theta)/t` (resp. `gamma = t beta` at order 2).

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::series::{exp_int, PuiseuxSeries, Reduced, Valuation};
use crate::{Ctx, Error, Result};

use super::{BallSpec, MapChart, Point};

/// Rational angle data of a limb.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimbInfo {
    pub theta_num: i64,
    pub theta_den: i64,
    /// Order of the angle; equals `theta_den`.
    pub q: u32,
    /// The root value the parameter reduces to; `None` in the order-2
    /// limb (the parameter is unbounded there).
    pub c_theta: Option<Complex64>,
    /// Limb coordinate series.
    #[serde(skip, default = "PuiseuxSeries::zero")]
    pub gamma: PuiseuxSeries,
    /// Reduction of the limb coordinate.
    pub gamma_red: Complex64,
}

pub fn c_theta_value(num: i64, den: i64) -> Complex64 {
    let c = 2.0 * (std::f64::consts::PI * num as f64 / den as f64).cos();
    Complex64::new(-1.0 / (c * c), 0.0)
}

/// Identify the limb of a period-`p` branch parameter. The angle search
/// is capped at denominator `p`: an order-`q` limb carries period-`p`
/// parameters only for `q <= p`.
pub fn classify_limb(map: &MapChart, p: u32, ctx: &Ctx) -> Result<LimbInfo> {
    let beta = &map.beta;
    match beta.ord() {
        Valuation::Finite(e) if e == exp_int(-1) => {
            let gamma = beta.shift(exp_int(1));
            let gamma_red = match gamma.reduce()? {
                Reduced::Finite(c) => c,
                Reduced::Infinity => unreachable!("gamma has order zero"),
            };
            Ok(LimbInfo {
                theta_num: 1,
                theta_den: 2,
                q: 2,
                c_theta: None,
                gamma,
                gamma_red,
            })
        }
        Valuation::Finite(e) if e == exp_int(0) => {
            let red = match beta.reduce()? {
                Reduced::Finite(c) => c,
                Reduced::Infinity => unreachable!(),
            };
            let mut best: Option<(i64, i64, f64)> = None;
            for den in 3..=p as i64 {
                for num in 1..=den / 2 {
                    if num.gcd(&den) != 1 {
                        continue;
                    }
                    let resid = (red - c_theta_value(num, den)).norm();
                    if best.map(|(_, _, r)| resid < r).unwrap_or(true) {
                        best = Some((num, den, resid));
                    }
                }
            }
            let (num, den, resid) = best.ok_or(Error::NoLimbMatch { residual: f64::NAN })?;
            if resid > 1e-6 {
                return Err(Error::NoLimbMatch { residual: resid });
            }
            let c_th = c_theta_value(num, den);
            let gamma = beta
                .sub(&PuiseuxSeries::constant(c_th), ctx)
                .shift(exp_int(-1));
            match gamma.ord() {
                Valuation::Finite(g) if g.is_negative() => {
                    return Err(Error::NoLimbMatch {
                        residual: resid.max(1e-12),
                    })
                }
                _ => {}
            }
            let gamma_red = match gamma.reduce()? {
                Reduced::Finite(c) => c,
                Reduced::Infinity => unreachable!("checked nonnegative order"),
            };
            Ok(LimbInfo {
                theta_num: num,
                theta_den: den,
                q: den as u32,
                c_theta: Some(c_th),
                gamma,
                gamma_red,
            })
        }
        _ => Err(Error::NoLimbMatch { residual: f64::NAN }),
    }
}

/// The level-0 balls of a limb: the cycle `B_0 .. B_{q-1}`, the
/// distinguished open ball `D_0` inside `B_0`, and the preimages
/// `C_j = (phi|_{D_0})^{-1}(B_{j+1})` for `1 <= j <= q-1`.
#[derive(Clone, Debug)]
pub struct Level0 {
    pub b: Vec<BallSpec>,
    pub d0: BallSpec,
    pub c: Vec<BallSpec>,
    /// Maximal open ball of `B_0` around the free critical point.
    pub d0_prime: BallSpec,
}

pub fn level0_structure(limb: &LimbInfo, map: &MapChart, ctx: &Ctx) -> Result<Level0> {
    let one = Complex64::new(1.0, 0.0);
    let (b, d0): (Vec<BallSpec>, BallSpec) = if limb.q == 2 {
        let b0 = BallSpec::standard(PuiseuxSeries::zero(), exp_int(0), true);
        let b1 = BallSpec::inverted(PuiseuxSeries::zero(), exp_int(1), true);
        // D_0 is the open unit ball around -1/gamma: the ball the
        // reduced coordinate sends to the preimage of the parabolic
        // point (it contains the finite zero of the map).
        let center = limb.gamma.inverse(ctx)?.neg();
        let d0 = BallSpec::standard(center, exp_int(0), false);
        (vec![b0, b1], d0)
    } else {
        let c_th = limb.c_theta.unwrap();
        let q = limb.q as usize;
        // Reduced map M(z) = 1 + c_theta / z; orbit 0 -> inf -> 1 -> ...
        let mut centers = vec![Complex64::ZERO; q];
        // centers[1] is unused (B_1 is the inverted ball).
        if q >= 3 {
            centers[2] = one;
            for j in 3..q {
                centers[j] = one + c_th / centers[j - 1];
            }
        }
        let mut b = Vec::with_capacity(q);
        for (j, item) in centers.iter().enumerate() {
            if j == 1 {
                b.push(BallSpec::inverted(
                    PuiseuxSeries::zero(),
                    exp_int(1),
                    true,
                ));
            } else {
                b.push(BallSpec::standard(
                    PuiseuxSeries::constant(*item),
                    exp_int(1),
                    true,
                ));
            }
        }
        let d0_center = PuiseuxSeries::monomial(exp_int(1), -one / c_th);
        let d0 = BallSpec::standard(d0_center, exp_int(1), false);
        (b, d0)
    };

    // C_j: one exact preimage step of phi restricted to D_0.
    let q = limb.q as usize;
    let mut c = Vec::with_capacity(q - 1);
    for j in 1..q {
        let target = &b[(j + 1) % q];
        debug_assert_eq!(target.chart, super::BallChart::Standard);
        let z_star = preimage_in(map, &target.center, &d0, ctx)?;
        let dord = map
            .deriv_z(&z_star, ctx)?
            .ord()
            .finite("preimage derivative")?;
        c.push(BallSpec {
            chart: super::BallChart::Standard,
            center: z_star,
            log_radius: target.log_radius - dord,
            closed: target.closed,
        });
    }

    let cocrit = map.cocritical(ctx)?;
    let d0_prime = BallSpec::standard(cocrit, b[0].log_radius, false);

    Ok(Level0 {
        b,
        d0,
        c,
        d0_prime,
    })
}

/// Solve `phi(z) = w` for the root lying in the given ball, by the exact
/// series quadratic formula on `(1 - w) z^2 + beta z + a = 0`.
fn preimage_in(
    map: &MapChart,
    w: &PuiseuxSeries,
    inside: &BallSpec,
    ctx: &Ctx,
) -> Result<PuiseuxSeries> {
    let one = PuiseuxSeries::one();
    let lead = one.sub(w, ctx);
    if lead.ord().is_zero_like() {
        // w = 1: the equation degenerates to beta z + a = 0 (the other
        // preimage of 1 is at infinity).
        let root = map.a_term().neg().div(&map.beta, ctx)?;
        if inside.contains(&Point::Finite(root.clone()), ctx)? {
            return Ok(root);
        }
    } else {
        let disc = map
            .beta
            .mul(&map.beta, ctx)
            .sub(&map.a_term().mul(&lead, ctx).scale(Complex64::new(4.0, 0.0)), ctx);
        let sq = disc.sqrt(ctx)?;
        let two_lead = lead.scale(Complex64::new(2.0, 0.0));
        for sign in [1.0f64, -1.0] {
            let num = map.beta.neg().add(&sq.scale(Complex64::new(sign, 0.0)), ctx);
            let root = num.div(&two_lead, ctx)?;
            if inside.contains(&Point::Finite(root.clone()), ctx)? {
                return Ok(root);
            }
        }
    }
    Err(Error::RegionUnresolved {
        what: "no quadratic preimage inside the requested ball".into(),
    })
}
