//! Enumeration of the parameters where both critical points lie in one
//! periodic orbit: the independent oracle for the bitransitive-center
//! count and hence for the Euler-characteristic cross-check.
//!
//! For each `1 <= j < p` the system is `{omega_p = 0, omega_j = nu}`
//! with `nu = -2a/b` the free critical point. The second equation clears
//! to the integer polynomial `b N_j + 2 a D_j`; eliminating `b` by exact
//! integer resultants (evaluation + fraction-free determinants +
//! interpolation) reduces to one variable, whose roots seed a 2x2 Newton
//! refinement. `nu = infinity` degenerates to `b = 0`, where the free
//! critical point lands on the orbit entry at infinity.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::curves::poly::{omega_pair, omega_poly, resultant, IntBivarPoly, IntPoly};
use crate::curves::roots::{all_roots, newton_polish_compensated};
use crate::{Ctx, Error, Result};

/// One bitransitive center.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Center {
    pub a: (f64, f64),
    pub b: (f64, f64),
    /// Index with `omega_j = nu` (0 encodes `b = 0`, i.e. `nu` at the
    /// orbit entry at infinity).
    pub j: u32,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CentersReport {
    pub p: u32,
    pub centers: Vec<Center>,
    pub count: u32,
}

/// Tolerance for accepting a refined solution.
const REFINE_TOL: f64 = 1e-10;
/// Deduplication distance between centers.
const DEDUP_TOL: f64 = 1e-6;

pub fn type2_centers(p: u32, ctx: &Ctx) -> Result<CentersReport> {
    assert!(p >= 3);
    let n_p = omega_poly(p);
    let d_n_da = n_p.d_da();
    let d_n_db = n_p.d_db();

    let mut found: Vec<Center> = Vec::new();

    // Degenerate branch: b = 0 puts the free critical point at the orbit
    // entry at infinity, so any exact-period-p parameter with b = 0 is
    // bitransitive.
    {
        let pa = n_p.eval_b_int(&BigInt::zero());
        let coeffs = pa.to_complex_coeffs();
        for root in all_roots(&coeffs, ctx)? {
            let a = newton_polish_compensated(&coeffs, root, 8);
            if a.norm() < 1e-8 {
                continue;
            }
            if exact_period_is(a, Complex64::ZERO, p) {
                push_center(&mut found, a, Complex64::ZERO, 0, pa.eval_complex(a).norm());
            }
        }
    }

    // Proper indices: eliminate b between N_p and b N_j + 2 a D_j.
    for j in 2..p {
        let (nj, dj) = omega_pair(j);
        let cj = IntBivarPoly::var_b()
            .mul(&nj)
            .add(&IntBivarPoly::var_a().mul(&dj).mul(&IntBivarPoly::constant(2)))
            .content_reduced();
        let res = resultant_in_b(&n_p, &cj)?;
        if res.is_zero() {
            return Err(Error::IllConditioned {
                residual: f64::INFINITY,
                tol: 0.0,
            });
        }
        let res_coeffs = res.to_complex_coeffs();
        let a_roots = all_roots(&res_coeffs, ctx)?;
        for root in a_roots {
            let a0 = newton_polish_compensated(&res_coeffs, root, 8);
            if a0.norm() < 1e-8 {
                continue;
            }
            // Candidate b values: roots of N_p(a0, .).
            let pb: Vec<Complex64> = {
                let coeffs = n_p.b_coefficients();
                let evaluated: Vec<Complex64> = coeffs
                    .iter()
                    .map(|c| c.eval_complex(a0))
                    .collect();
                all_roots(&evaluated, ctx)?
            };
            for b0 in pb {
                let resid = cj.eval_complex(a0, b0).norm();
                let scale = 1.0 + a0.norm().max(b0.norm()).powi(cj.total_degree() as i32);
                if resid > 1e-3 * scale {
                    continue;
                }
                if let Some((a, b, r)) =
                    refine_system(&n_p, &d_n_da, &d_n_db, &cj, a0, b0)
                {
                    if a.norm() < 1e-8 || b.norm() < 1e-8 {
                        continue;
                    }
                    if exact_period_is(a, b, p) && nu_hits_orbit_at(a, b, j, p) {
                        push_center(&mut found, a, b, j, r);
                    }
                }
            }
        }
    }

    found.sort_by(|x, y| {
        x.a.0
            .total_cmp(&y.a.0)
            .then(x.a.1.total_cmp(&y.a.1))
            .then(x.b.0.total_cmp(&y.b.0))
            .then(x.b.1.total_cmp(&y.b.1))
    });
    let count = found.len() as u32;
    Ok(CentersReport {
        p,
        centers: found,
        count,
    })
}

fn push_center(found: &mut Vec<Center>, a: Complex64, b: Complex64, j: u32, residual: f64) {
    let dup = found.iter().any(|c| {
        (Complex64::new(c.a.0, c.a.1) - a).norm() < DEDUP_TOL
            && (Complex64::new(c.b.0, c.b.1) - b).norm() < DEDUP_TOL
    });
    if !dup {
        found.push(Center {
            a: (a.re, a.im),
            b: (b.re, b.im),
            j,
            residual,
        });
    }
}

/// Exact integer resultant with respect to `b`, by evaluation at integer
/// nodes, fraction-free determinants, and Lagrange interpolation. The
/// result must have integer coefficients; failure to interpolate
/// integrally is a hard error.
fn resultant_in_b(f: &IntBivarPoly, g: &IntBivarPoly) -> Result<IntPoly> {
    let bound = (f.deg_a() * g.deg_b() + g.deg_a() * f.deg_b()) as usize;
    let nodes: Vec<BigInt> = (0..=bound as i64)
        .map(|k| BigInt::from(if k % 2 == 0 { k / 2 } else { -(k / 2) - 1 }))
        .collect();
    let mut values = Vec::with_capacity(nodes.len());
    for a in &nodes {
        let fa = f.eval_a_int(a);
        let ga = g.eval_a_int(a);
        // Degree drops at special nodes would corrupt the interpolation
        // through the Sylvester matrix dimensions; keep only full-degree
        // nodes by perturbing the node set if needed.
        if fa.degree() != Some(f.deg_b() as usize) || ga.degree() != Some(g.deg_b() as usize) {
            return Err(Error::invalid(
                "degree drop at interpolation node (extend the node set)",
            ));
        }
        values.push(resultant(&fa, &ga));
    }
    interpolate_integer(&nodes, &values)
}

/// Newton divided-difference interpolation over the rationals with an
/// integrality check on the final coefficients.
fn interpolate_integer(nodes: &[BigInt], values: &[BigInt]) -> Result<IntPoly> {
    let n = nodes.len();
    let mut dd: Vec<BigRational> = values
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    for k in 1..n {
        for i in (k..n).rev() {
            let num = dd[i].clone() - dd[i - 1].clone();
            let den = BigRational::from_integer(&nodes[i] - &nodes[i - k]);
            dd[i] = num / den;
        }
    }
    // Accumulate sum dd[k] prod_{i<k} (x - x_i) from the top down:
    // acc <- acc * (x - x_k) + dd[k].
    let mut acc = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let xk = BigRational::from_integer(nodes[k].clone());
        let mut next = vec![BigRational::zero(); n];
        for d in (0..n - 1).rev() {
            let c = acc[d].clone();
            next[d + 1] += c.clone();
            next[d] -= c * xk.clone();
        }
        next[0] += dd[k].clone();
        acc = next;
    }
    let mut out = IntPoly::zero();
    for (d, c) in acc.iter().enumerate() {
        if !c.is_integer() {
            return Err(Error::invalid("non-integral resultant interpolation"));
        }
        out.add_to_coeff(d, c.to_integer());
    }
    Ok(out)
}

/// Newton refinement of the 2x2 system `{N_p = 0, C_j = 0}`.
fn refine_system(
    n_p: &IntBivarPoly,
    d_n_da: &IntBivarPoly,
    d_n_db: &IntBivarPoly,
    cj: &IntBivarPoly,
    mut a: Complex64,
    mut b: Complex64,
) -> Option<(Complex64, Complex64, f64)> {
    let dc_da = cj.d_da();
    let dc_db = cj.d_db();
    for _ in 0..60 {
        let f1 = n_p.eval_complex(a, b);
        let f2 = cj.eval_complex(a, b);
        let j11 = d_n_da.eval_complex(a, b);
        let j12 = d_n_db.eval_complex(a, b);
        let j21 = dc_da.eval_complex(a, b);
        let j22 = dc_db.eval_complex(a, b);
        let det = j11 * j22 - j12 * j21;
        if det.norm() < 1e-14 {
            return None;
        }
        let da = (f1 * j22 - f2 * j12) / det;
        let db = (f2 * j11 - f1 * j21) / det;
        a -= da;
        b -= db;
        if da.norm() + db.norm() < 1e-14 * (1.0 + a.norm() + b.norm()) {
            break;
        }
    }
    let resid = n_p.eval_complex(a, b).norm() + cj.eval_complex(a, b).norm();
    let scale = (1.0 + a.norm().max(b.norm())).powi(n_p.total_degree() as i32);
    if resid < REFINE_TOL * scale {
        Some((a, b, resid))
    } else {
        None
    }
}

/// Numerical orbit of the critical point on the sphere; returns the
/// chordal positions `omega_0 .. omega_n` (None encodes infinity).
fn numeric_orbit(a: Complex64, b: Complex64, n: u32) -> Vec<Option<Complex64>> {
    let mut pts = vec![Some(Complex64::ZERO), None];
    for _ in 2..=n {
        let next = match pts.last().unwrap() {
            None => Some(Complex64::new(1.0, 0.0)),
            Some(z) => {
                if z.norm() < 1e-13 {
                    None
                } else {
                    Some(1.0 + b / z + a / (z * z))
                }
            }
        };
        pts.push(next);
    }
    pts
}

fn chordal(x: Option<Complex64>, y: Option<Complex64>) -> f64 {
    match (x, y) {
        (None, None) => 0.0,
        (None, Some(z)) | (Some(z), None) => {
            let n = z.norm();
            if n > 1.0 {
                1.0 / n
            } else {
                1.0
            }
        }
        (Some(z), Some(w)) => {
            (z - w).norm() / ((1.0 + z.norm().powi(2)) * (1.0 + w.norm().powi(2))).sqrt()
        }
    }
}

/// Whether the critical orbit has exact period `p` numerically.
fn exact_period_is(a: Complex64, b: Complex64, p: u32) -> bool {
    let orbit = numeric_orbit(a, b, p);
    let closing = chordal(orbit[p as usize], Some(Complex64::ZERO));
    if closing > 1e-6 {
        return false;
    }
    for d in crate::counting::divisors(p) {
        if d < p && chordal(orbit[d as usize], Some(Complex64::ZERO)) < 1e-6 {
            return false;
        }
    }
    true
}

/// Whether the free critical point coincides with `omega_j`.
fn nu_hits_orbit_at(a: Complex64, b: Complex64, j: u32, p: u32) -> bool {
    let nu = -2.0 * a / b;
    let orbit = numeric_orbit(a, b, p);
    chordal(orbit[j as usize], Some(nu)) < 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_centers_by_hand() {
        let ctx = Ctx::for_period(3);
        let rep = type2_centers(3, &ctx).unwrap();
        assert_eq!(rep.count, 2, "{:?}", rep.centers);
        // (-1, 0) and (1, -2), in canonical order.
        let c0 = &rep.centers[0];
        let c1 = &rep.centers[1];
        assert!((Complex64::new(c0.a.0, c0.a.1) - Complex64::new(-1.0, 0.0)).norm() < 1e-8);
        assert!((Complex64::new(c0.b.0, c0.b.1)).norm() < 1e-8);
        assert!((Complex64::new(c1.a.0, c1.a.1) - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        assert!((Complex64::new(c1.b.0, c1.b.1) - Complex64::new(-2.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn resultant_in_b_linear_case() {
        // f = b + a, g = b - a: res_b = 2a (up to sign).
        let f = IntBivarPoly::var_b().add(&IntBivarPoly::var_a());
        let g = IntBivarPoly::var_b().sub(&IntBivarPoly::var_a());
        let r = resultant_in_b(&f, &g).unwrap();
        let two_a = IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::from(2)]);
        let neg = IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::from(-2)]);
        assert!(r == two_a || r == neg, "{r:?}");
    }
}
