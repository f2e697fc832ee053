//! Critical returns and the periodic-ball (renormalization) structure of
//! non-satellite branches, plus the per-region derivative-order tables.

use serde::{Deserialize, Serialize};

use crate::series::{exp_int, Exp, PuiseuxSeries, Valuation};
use crate::{Ctx, Error, Result};

use super::{
    ball_image, deriv_at_infinity, orbit_scan, spherical_deriv_beta_ord, spherical_deriv_z_ord,
    spherical_ord_points, BallSpec, Level0, LimbInfo, MapChart, Point,
};

/// Outcome of scanning the critical orbit for entries of the
/// distinguished ball at multiples of the limb order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReturnInfo {
    pub satellite: bool,
    /// Minimal `l` with `omega_{q l}` in the distinguished ball.
    pub ell0: Option<u32>,
}

/// Scan `omega_q, omega_{2q}, ...` for membership in `D_0`. A parameter
/// with no such entry is a satellite; its limb order then divides the
/// period.
pub fn first_noncentral_return(
    limb: &LimbInfo,
    level0: &Level0,
    map: &MapChart,
    p: u32,
    ctx: &Ctx,
) -> Result<ReturnInfo> {
    let q = limb.q;
    let orbit = orbit_scan(map, p, ctx)?;
    let mut ell = 1;
    while q * ell < p {
        let idx = (q * ell) as usize;
        if idx >= orbit.points.len() {
            break;
        }
        if level0.d0.contains(&orbit.points[idx], ctx)? {
            return Ok(ReturnInfo {
                satellite: false,
                ell0: Some(ell),
            });
        }
        ell += 1;
    }
    // No return before closing: satellite, so the limb order must
    // divide the period.
    if p % q != 0 {
        return Err(Error::invalid(format!(
            "no non-central return found but limb order {q} does not divide the period {p}"
        )));
    }
    Ok(ReturnInfo {
        satellite: true,
        ell0: None,
    })
}

/// Renormalization data of a non-satellite branch.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RenormInfo {
    pub satellite: bool,
    /// First non-central return time `q * ell0`.
    pub return_time: u32,
    /// Period of the cycle of closed balls around the critical point.
    pub q_prime: u32,
    /// Log-diameters of the first two balls of the cycle.
    pub rho0: (i64, i64),
    pub rho1: (i64, i64),
    /// Depth levels `L_j = rho(X_j) - rho(B_containing)`, `j = 0..q'-1`.
    pub levels: Vec<(i64, i64)>,
    /// The first `q*ell0` levels are equal and strictly dominate later
    /// ones; `L_1 = 2 L_0` closes the cycle.
    pub levels_ok: bool,
    /// Degree of the return map to the ball around the critical point.
    pub cycle_degree: u32,
    /// Raw clustering evidence per candidate period: minimum spherical
    /// order over orbit entries at multiples (closer = larger), maximum
    /// over the rest.
    pub clusters: Vec<(u32, f64, f64)>,
}

fn exp_pair(e: Exp) -> (i64, i64) {
    (*e.numer(), *e.denom())
}

/// Detect the cycle of periodic closed balls around the critical point:
/// the candidate period must divide `p` and exceed the limb order; the
/// log-diameters are pinned by the derivative valuation at infinity and
/// the closure relation between the first two depth levels; the cycle is
/// confirmed by iterating exact ball images, requiring primitivity and
/// total degree two.
pub fn renorm_detect(
    limb: &LimbInfo,
    level0: &Level0,
    map: &MapChart,
    p: u32,
    ret: &ReturnInfo,
    ctx: &Ctx,
) -> Result<RenormInfo> {
    let ell0 = ret
        .ell0
        .ok_or_else(|| Error::invalid("renormalization detection on a satellite branch"))?;
    let q = limb.q;
    let return_time = q * ell0;

    // Clustering evidence from spherical distances to the critical point.
    let orbit = orbit_scan(map, p, ctx)?;
    let dists: Vec<Option<Exp>> = (1..p as usize)
        .map(|j| {
            spherical_ord_points(&Point::Finite(PuiseuxSeries::zero()), &orbit.points[j], ctx)
                .ok()
                .and_then(|v| match v {
                    Valuation::Finite(e) => Some(e),
                    _ => None,
                })
        })
        .collect();
    let candidates: Vec<u32> = crate::counting::divisors(p)
        .into_iter()
        .filter(|&d| d > q && d <= p)
        .collect();
    let mut clusters = Vec::new();
    for &cand in &candidates {
        let mut min_mult = f64::INFINITY;
        let mut max_rest = f64::NEG_INFINITY;
        for (j, d) in dists.iter().enumerate() {
            let j1 = (j + 1) as u32;
            if let Some(e) = d {
                let v = *e.numer() as f64 / *e.denom() as f64;
                if j1 % cand == 0 {
                    min_mult = min_mult.min(v);
                } else {
                    max_rest = max_rest.max(v);
                }
            }
        }
        clusters.push((cand, min_mult, max_rest));
    }

    // Pin the log-diameters: with g the valuation of the dynamical
    // derivative at infinity, rho0 - rho1 = g and the depth-doubling
    // closure gives rho1 - rho(B_1) = 2 (rho0 - rho(B_0)).
    let g = deriv_at_infinity(map, p, ctx)?
        .ord()
        .finite("derivative at infinity")?;
    let rho_b0 = level0.b[0].log_radius;
    let rho0 = rho_b0 * 2 - exp_int(1) - g;
    let rho1 = rho0 - g;

    let x0 = BallSpec::standard(PuiseuxSeries::zero(), rho0, true);
    for &cand in &candidates {
        if let Some(info) = try_cycle(
            limb, level0, map, p, cand, return_time, &x0, rho0, rho1, &clusters, ctx,
        )? {
            return Ok(info);
        }
    }
    Err(Error::NoPeriodicBall {
        p,
        candidates: candidates.clone(),
    })
}

#[allow(clippy::too_many_arguments)]
fn try_cycle(
    limb: &LimbInfo,
    level0: &Level0,
    map: &MapChart,
    p: u32,
    q_prime: u32,
    return_time: u32,
    x0: &BallSpec,
    rho0: Exp,
    rho1: Exp,
    clusters: &[(u32, f64, f64)],
    ctx: &Ctx,
) -> Result<Option<RenormInfo>> {
    let mut cycle = vec![x0.clone()];
    let mut total_degree = 1u32;
    for _ in 0..q_prime {
        let (img, deg) = match ball_image(map, cycle.last().unwrap(), ctx) {
            Ok(v) => v,
            Err(Error::ImageIsP1) => return Ok(None),
            Err(e) => return Err(e),
        };
        total_degree = total_degree.saturating_mul(deg);
        cycle.push(img);
    }
    // Primitivity: the cycle must close exactly at q', not earlier.
    for (j, ball) in cycle.iter().enumerate().skip(1) {
        let closes = ball.same_ball(x0, ctx)?;
        if j < q_prime as usize {
            if closes {
                return Ok(None);
            }
        } else if !closes || total_degree != 2 {
            return Ok(None);
        }
    }
    if rho1 != cycle[1].log_radius {
        return Err(Error::invalid(format!(
            "pinned rho1 = {rho1} disagrees with the computed image radius {}",
            cycle[1].log_radius
        )));
    }

    // Depth levels relative to the containing level-0 ball.
    let _q = limb.q as usize;
    let mut levels = Vec::with_capacity(q_prime as usize);
    let mut levels_ok = true;
    for (j, xj) in cycle.iter().take(q_prime as usize).enumerate() {
        let mut found = None;
        for (k, bk) in level0.b.iter().enumerate() {
            if xj.subset_of(bk, ctx)? {
                found = Some(k);
                break;
            }
        }
        let k = found.ok_or_else(|| {
            Error::RegionUnresolved {
                what: format!("periodic ball {j} lies in no level-0 ball"),
            }
        })?;
        levels.push(xj.log_diam() - level0.b[k].log_diam());
    }
    // L_1 = ... = L_{return_time} > later levels, and L_1 = 2 L_0.
    let l1 = levels[1.min(levels.len() - 1)];
    for (j, l) in levels.iter().enumerate() {
        if j == 0 {
            levels_ok &= l1 == *l * 2;
        } else if (j as u32) <= return_time {
            levels_ok &= *l == l1;
        } else {
            levels_ok &= *l < l1;
        }
    }

    let _ = p;
    Ok(Some(RenormInfo {
        satellite: false,
        return_time,
        q_prime,
        rho0: exp_pair(rho0),
        rho1: exp_pair(rho1),
        levels: levels.iter().map(|e| exp_pair(*e)).collect(),
        levels_ok,
        cycle_degree: total_degree,
        clusters: clusters.to_vec(),
    }))
}

/// One row of the derivative-order table check: a sample point, the
/// region it was classified into, and the expected/computed orders of
/// the two derivative norms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableCheck {
    pub region: String,
    pub z_ord_expected: (i64, i64),
    pub z_ord_got: (i64, i64),
    pub beta_ord_expected: (i64, i64),
    pub beta_ord_got: (i64, i64),
    pub pass: bool,
}

/// A sample point tagged by the region it is meant to probe.
#[derive(Clone, Debug)]
pub struct RegionSample {
    pub z: PuiseuxSeries,
    pub region: Region,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `B_0` minus the two distinguished open balls.
    B0Prime,
    /// The union of the preimage balls inside `D_0`.
    BHalf,
    /// The inverted ball at infinity.
    B1,
    /// `B_j` for `2 <= j < q`.
    BJ(usize),
}

impl Region {
    fn name(self) -> String {
        match self {
            Region::B0Prime => "B0'".into(),
            Region::BHalf => "B1/2".into(),
            Region::B1 => "B1".into(),
            Region::BJ(j) => format!("B{j}"),
        }
    }
}

/// Classify a point against the level-0 regions; boundary or outside
/// points are rejected.
pub fn classify_region(level0: &Level0, z: &PuiseuxSeries, ctx: &Ctx) -> Result<Region> {
    let pt = Point::Finite(z.clone());
    if level0.b[0].contains(&pt, ctx)? {
        for cj in &level0.c {
            if cj.contains(&pt, ctx)? {
                return Ok(Region::BHalf);
            }
        }
        if level0.d0.contains(&pt, ctx)? || level0.d0_prime.contains(&pt, ctx)? {
            return Err(Error::RegionUnresolved {
                what: "inside a distinguished open ball but no preimage ball".into(),
            });
        }
        return Ok(Region::B0Prime);
    }
    if level0.b[1].contains(&pt, ctx)? {
        return Ok(Region::B1);
    }
    for (j, bj) in level0.b.iter().enumerate().skip(2) {
        if bj.contains(&pt, ctx)? {
            return Ok(Region::BJ(j));
        }
    }
    Err(Error::RegionUnresolved {
        what: "sample lies in the invariant complement".into(),
    })
}

/// Compare the computed spherical derivative orders at a sample point
/// against the tabulated values for its region.
pub fn deriv_order_table_check(
    limb: &LimbInfo,
    level0: &Level0,
    map: &MapChart,
    z: &PuiseuxSeries,
    ctx: &Ctx,
) -> Result<TableCheck> {
    let region = classify_region(level0, z, ctx)?;
    let oz = z.ord().finite("table sample")?;
    let q2 = limb.q == 2;
    let z_expect = match (q2, region) {
        (true, Region::B0Prime) => oz + exp_int(1),
        (true, Region::BHalf) | (true, Region::B1) => exp_int(-1),
        (false, Region::B0Prime) => oz - exp_int(1),
        (false, Region::BHalf) => exp_int(-2),
        (false, Region::B1) | (false, Region::BJ(_)) => exp_int(0),
        (true, Region::BJ(_)) => unreachable!("order-2 limb has no such ball"),
    };
    let b_expect = match (q2, region) {
        (true, Region::B0Prime) => oz * 3 + exp_int(2),
        (true, Region::BHalf) => exp_int(0),
        (true, Region::B1) => -oz,
        (false, Region::B0Prime) => oz * 3 - exp_int(2),
        (false, Region::BHalf) => exp_int(-1),
        (false, Region::B1) => -oz,
        (false, Region::BJ(_)) => exp_int(0),
        (true, Region::BJ(_)) => unreachable!("order-2 limb has no such ball"),
    };
    let z_got = spherical_deriv_z_ord(map, z, ctx)?;
    let b_got = spherical_deriv_beta_ord(map, z, ctx)?;
    Ok(TableCheck {
        region: region.name(),
        z_ord_expected: exp_pair(z_expect),
        z_ord_got: exp_pair(z_got),
        beta_ord_expected: exp_pair(b_expect),
        beta_ord_got: exp_pair(b_got),
        pass: z_expect == z_got && b_expect == b_got,
    })
}
