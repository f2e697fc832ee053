//! Newton-polygon expansion of the period condition at the two lines at
//! infinity.
//!
//! The input is the exact integer numerator of the period condition.
//! Substituting `a = t` (branches at the line `a = 0`) or `a = 1/t` with
//! denominators cleared (branches at the line at infinity) gives a
//! polynomial in `b` whose coefficients are exact Puiseux polynomials in
//! `t`. The classical iteration then reads candidate leading exponents
//! off the lower convex hull of `(j, ord coeff_j)`, solves the exact
//! initial-form equation for the leading coefficients, and recurses on
//! the substituted polynomial until every branch separates, after which a
//! verified Newton iteration extends coefficients to the requested
//! truncation depth. Exponent bookkeeping is exact throughout; only the
//! root values are floating.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curves::poly::{squarefree_decomposition, IntBivarPoly, IntPoly, RatPoly};
use crate::curves::roots::{all_roots, cluster_roots, newton_polish_compensated};
use crate::dynamics::{orbit_scan, MapChart};
use crate::series::{exp_int, Exp, PuiseuxSeries, Trunc, Valuation};
use crate::{Ctx, Error, Result};

/// Which line at infinity the chart opens on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// `a = t`: branches at the line `a = 0`.
    LPlus,
    /// `a = 1/t`: branches at the line at infinity.
    LMinus,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::LPlus => "L+",
            Chart::LMinus => "L-",
        }
    }
}

/// One branch: a Puiseux series parameter with its ramification.
#[derive(Clone, Debug)]
pub struct BranchSeries {
    pub chart: Chart,
    pub beta: PuiseuxSeries,
    /// Ramification of the branch: the number of conjugate series glued
    /// into this record, equal to the intersection multiplicity with the
    /// line at infinity.
    pub mu: u32,
}

/// Relative cluster radius for face-polynomial roots. Distinct branches
/// of the period curves separate far above this at desk scale, while the
/// fuzz of a multiple root after compensated polishing stays well below.
const CLUSTER_REL: f64 = 1e-6;

const MAX_DEPTH: usize = 200;
const MAX_RAM: i64 = 128;

struct Expander<'a> {
    ctx: &'a Ctx,
    /// Level-0 coefficients, for the final verified refinement.
    base: Vec<PuiseuxSeries>,
    /// The same coefficients as exact integer polynomials in `t`; the
    /// first-level initial forms are solved exactly through these.
    exact_base: Vec<IntPoly>,
    out: Vec<RawBranch>,
}

struct RawBranch {
    beta: PuiseuxSeries,
    path_ram: i64,
}

/// Expand all Puiseux branches of the chart polynomial of `poly`.
/// Returns one record per branch with conjugates grouped and the
/// canonical (minimal sort key) conjugate as representative.
pub fn newton_puiseux(
    poly: &IntBivarPoly,
    chart: Chart,
    ctx: &Ctx,
) -> Result<Vec<BranchSeries>> {
    let coeffs = chart_coefficients(poly, chart);
    if coeffs.len() <= 1 {
        return Ok(vec![]);
    }
    if coeffs[0].is_structural_zero() {
        return Err(Error::invalid(
            "period polynomial vanishes along b = 0 (unexpected component)",
        ));
    }
    let mut ex = Expander {
        ctx,
        base: coeffs.clone(),
        exact_base: exact_chart_coefficients(poly, chart),
        out: Vec::new(),
    };
    ex.expand(coeffs, PuiseuxSeries::zero(), Exp::zero(), 1, 0, true)?;

    let expected: usize = poly.deg_b() as usize;
    if ex.out.len() != expected {
        return Err(Error::invalid(format!(
            "expansion produced {} series roots, expected {}",
            ex.out.len(),
            expected
        )));
    }
    // Undo the chart normalization w = t b before grouping.
    if chart == Chart::LMinus {
        for r in ex.out.iter_mut() {
            r.beta = r.beta.shift(exp_int(-1));
        }
    }
    group_conjugates(ex.out, chart, ctx)
}

/// Coefficient series of the expansion variable after the chart
/// substitution. For the line `a = 0` the variable is `b` itself
/// (`a = t`). For the line at infinity (`a = 1/t`) we expand in the
/// normalized variable `w = t b`, whose branches all have order >= 0, so
/// no negative orders circulate through the refinement: the coefficient
/// of `w^j` is `sum_i c_{ij} t^{deg_a - i + deg_b - j}`.
fn chart_coefficients(poly: &IntBivarPoly, chart: Chart) -> Vec<PuiseuxSeries> {
    let deg_a = poly.deg_a() as i64;
    let deg_b = poly.deg_b() as i64;
    let maxj = poly.deg_b() as usize;
    let mut out = vec![Vec::new(); maxj + 1];
    for ((i, j), c) in poly.iter_terms() {
        let cf = num_traits::ToPrimitive::to_f64(c).expect("coefficient exceeds f64 range");
        let e = match chart {
            Chart::LPlus => exp_int(*i as i64),
            Chart::LMinus => exp_int(deg_a - *i as i64 + deg_b - *j as i64),
        };
        out[*j as usize].push((e, Complex64::new(cf, 0.0)));
    }
    out.into_iter()
        .map(|terms| PuiseuxSeries::from_terms(terms, Trunc::Exact))
        .collect()
}

/// Exact mirror of `chart_coefficients`: integer polynomials in `t`.
fn exact_chart_coefficients(poly: &IntBivarPoly, chart: Chart) -> Vec<IntPoly> {
    let deg_a = poly.deg_a() as i64;
    let deg_b = poly.deg_b() as i64;
    let maxj = poly.deg_b() as usize;
    let mut out = vec![IntPoly::zero(); maxj + 1];
    for ((i, j), c) in poly.iter_terms() {
        let e = match chart {
            Chart::LPlus => *i as i64,
            Chart::LMinus => deg_a - *i as i64 + deg_b - *j as i64,
        };
        out[*j as usize].add_to_coeff(e as usize, c.clone());
    }
    out
}

impl<'a> Expander<'a> {
    /// `poly` is the current-level polynomial in the unknown tail `y`;
    /// the final series is `prefix + t^shift * y`. At the first level any
    /// leading exponent is admissible; deeper levels require strictly
    /// positive ones.
    fn expand(
        &mut self,
        poly: Vec<PuiseuxSeries>,
        prefix: PuiseuxSeries,
        shift: Exp,
        path_ram: i64,
        depth: usize,
        first: bool,
    ) -> Result<()> {
        if depth > MAX_DEPTH {
            return Err(Error::UnresolvedCluster { depth });
        }
        let mut poly = poly;

        // Exact-termination: y = 0 solves the level polynomial.
        if poly[0].is_structural_zero() {
            self.out.push(RawBranch {
                beta: prefix.clone(),
                path_ram,
            });
            poly.remove(0);
            while matches!(poly.last(), Some(s) if s.is_structural_zero()) {
                poly.pop();
            }
            if poly.len() <= 1 {
                return Ok(());
            }
            if poly[0].is_structural_zero() {
                // A repeated exact root would mean a non-reduced curve.
                return Err(Error::UnresolvedCluster { depth });
            }
        }

        let orders: Vec<Option<Exp>> = poly
            .iter()
            .map(|s| match s.ord() {
                Valuation::Finite(e) => Some(e),
                _ => None,
            })
            .collect();

        for (gamma, lo, hi) in lower_hull_edges(&orders) {
            if !first && gamma <= Exp::zero() {
                continue;
            }
            let abs_exp = shift + gamma;
            if abs_exp >= self.ctx.trunc {
                // Tail falls beyond truncation: every series root on this
                // edge is the prefix to the working depth.
                let n_roots = hi - lo;
                for _ in 0..n_roots {
                    self.out.push(RawBranch {
                        beta: prefix.truncate_to(self.ctx.trunc),
                        path_ram: path_ram.lcm(gamma.denom()),
                    });
                }
                continue;
            }
            if path_ram.lcm(gamma.denom()) > MAX_RAM {
                return Err(Error::invalid("ramification exceeds supported bound"));
            }
            // Initial-form equation on this edge. At the first level
            // the coefficients are exact integers, so multiplicities
            // come from an exact squarefree decomposition; deeper levels
            // cluster the polished floating roots.
            let clusters = if first {
                self.exact_face_roots(&orders, gamma, lo, hi)?
            } else {
                float_face_roots(&poly, &orders, gamma, lo, hi, self.ctx)?
            };
            for (c, m) in clusters {
                if c == Complex64::ZERO {
                    continue;
                }
                let new_prefix = prefix.add(
                    &PuiseuxSeries::monomial(abs_exp, c),
                    self.ctx,
                );
                let new_ram = path_ram.lcm(abs_exp.denom());
                if m == 1 {
                    let beta = self.refine(new_prefix)?;
                    self.out.push(RawBranch {
                        beta,
                        path_ram: new_ram,
                    });
                } else {
                    let sub = substitute(&poly, gamma, c, self.ctx);
                    self.expand(sub, new_prefix, abs_exp, new_ram, depth + 1, false)?;
                }
            }
        }
        Ok(())
    }

    /// Exact first-level face roots: build the initial form over the
    /// integers, split off multiplicities by squarefree decomposition,
    /// and root-find only squarefree factors (simple roots keep full
    /// floating accuracy).
    fn exact_face_roots(
        &self,
        orders: &[Option<Exp>],
        gamma: Exp,
        lo: usize,
        hi: usize,
    ) -> Result<Vec<(Complex64, usize)>> {
        let m = orders[lo].unwrap() + gamma * Exp::from_integer(lo as i64);
        let mut face = IntPoly::zero();
        for j in lo..=hi {
            if let Some(e) = orders[j] {
                if e + gamma * Exp::from_integer(j as i64) == m {
                    if *e.denom() != 1 {
                        return Err(Error::invalid("fractional exponent at the first level"));
                    }
                    face.set_coeff(j - lo, self.exact_base[j].coeff(*e.numer() as usize));
                }
            }
        }
        let mut out = Vec::new();
        for (factor, mult) in squarefree_decomposition(&RatPoly::from_int(&face))? {
            let coeffs = factor.to_complex_coeffs();
            for root in all_roots(&coeffs, self.ctx)? {
                let polished = newton_polish_compensated(&coeffs, root, 8);
                if polished != Complex64::ZERO {
                    out.push((polished, mult));
                }
            }
        }
        let total: usize = out.iter().map(|(_, m)| m).sum();
        if total != hi - lo {
            return Err(Error::invalid(format!(
                "face roots account for {total} of {} slots",
                hi - lo
            )));
        }
        Ok(out)
    }

    /// Verified Newton iteration against the level-0 polynomial. The
    /// residual order must strictly increase every step; a stall before
    /// the truncation bound means the root was not separated.
    fn refine(&self, start: PuiseuxSeries) -> Result<PuiseuxSeries> {
        let ctx = self.ctx;
        let target = ctx.trunc;
        let mut y = start.truncate_to(target);
        let mut last_ord: Option<Exp> = None;
        for _ in 0..64 {
            let (val, dval) = eval_with_derivative(&self.base, &y, ctx);
            let vord = match val.ord() {
                Valuation::Finite(e) => e,
                _ => {
                    // Residual vanished to working depth. If it vanished
                    // structurally the branch is an exact polynomial
                    // solution and keeps its exact bound.
                    return Ok(y);
                }
            };
            let dord = dval.ord().finite("branch refinement derivative")?;
            if vord - dord >= target {
                return Ok(y);
            }
            if let Some(prev) = last_ord {
                if vord <= prev {
                    return Err(Error::UnresolvedCluster { depth: 0 });
                }
            }
            last_ord = Some(vord);
            let step = val.div(&dval, ctx)?;
            y = y.sub(&step, ctx).truncate_to(target);
        }
        Err(Error::UnresolvedCluster { depth: 0 })
    }
}

/// Lower convex hull of `(j, ord_j)`, returned as `(gamma, j_lo, j_hi)`
/// per edge with `gamma` the candidate leading exponent (minus the
/// slope), in increasing `j`.
fn lower_hull_edges(orders: &[Option<Exp>]) -> Vec<(Exp, usize, usize)> {
    let pts: Vec<(usize, Exp)> = orders
        .iter()
        .enumerate()
        .filter_map(|(j, o)| o.map(|e| (j, e)))
        .collect();
    if pts.len() < 2 {
        return vec![];
    }
    // Monotone chain on exact rationals.
    let mut hull: Vec<(usize, Exp)> = Vec::new();
    for &(j, e) in &pts {
        while hull.len() >= 2 {
            let (j1, e1) = hull[hull.len() - 2];
            let (j2, e2) = hull[hull.len() - 1];
            // Keep if (j2,e2) is strictly below the segment (j1,e1)-(j,e).
            let lhs = (e2 - e1) * Exp::from_integer((j - j1) as i64);
            let rhs = (e - e1) * Exp::from_integer((j2 - j1) as i64);
            if lhs < rhs {
                break;
            }
            hull.pop();
        }
        hull.push((j, e));
    }
    hull.windows(2)
        .map(|w| {
            let (j1, e1) = w[0];
            let (j2, e2) = w[1];
            let gamma = (e1 - e2) / Exp::from_integer((j2 - j1) as i64);
            (gamma, j1, j2)
        })
        .collect()
}

/// `sum_{j on the edge} lead(coeff_j) c^{j - lo}` as a dense complex
/// polynomial in the leading coefficient.
fn face_polynomial(
    poly: &[PuiseuxSeries],
    orders: &[Option<Exp>],
    gamma: Exp,
    lo: usize,
    hi: usize,
) -> Vec<Complex64> {
    let m = orders[lo].unwrap() + gamma * Exp::from_integer(lo as i64);
    let mut face = vec![Complex64::ZERO; hi - lo + 1];
    for (j, s) in poly.iter().enumerate().take(hi + 1).skip(lo) {
        if let Some(e) = orders[j] {
            if e + gamma * Exp::from_integer(j as i64) == m {
                face[j - lo] = s.leading().unwrap().1;
            }
        }
    }
    face
}

/// Floating-point face roots: polished Aberth roots grouped into
/// clusters, with multiple clusters re-centered through the derivative
/// of matching order (a multiple root of `f` is a simple root of
/// `f^{(m-1)}`, restoring full accuracy to the cluster center).
fn float_face_roots(
    poly: &[PuiseuxSeries],
    orders: &[Option<Exp>],
    gamma: Exp,
    lo: usize,
    hi: usize,
    ctx: &Ctx,
) -> Result<Vec<(Complex64, usize)>> {
    let face = face_polynomial(poly, orders, gamma, lo, hi);
    let scale = face.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    let mut roots = all_roots(&face, ctx)?;
    for r in roots.iter_mut() {
        *r = newton_polish_compensated(&face, *r, 8);
    }
    let mut clusters = cluster_roots(&roots, CLUSTER_REL * scale);
    for (c, m) in clusters.iter_mut() {
        if *m > 1 {
            let mut deriv = face.clone();
            for _ in 0..*m - 1 {
                deriv = formal_derivative(&deriv);
            }
            *c = newton_polish_compensated(&deriv, *c, 12);
        }
        if c.norm() <= CLUSTER_REL * scale {
            *c = Complex64::ZERO; // zero roots belong to other edges
        }
    }
    Ok(clusters)
}

fn formal_derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// Substitute `y = t^gamma (c + y')` and recenter by the common power.
fn substitute(poly: &[PuiseuxSeries], gamma: Exp, c: Complex64, ctx: &Ctx) -> Vec<PuiseuxSeries> {
    let n = poly.len() - 1;
    let mut out = vec![PuiseuxSeries::zero(); n + 1];
    let mut binom = vec![vec![0f64; n + 1]; n + 1];
    for i in 0..=n {
        binom[i][0] = 1.0;
        for k in 1..=i {
            binom[i][k] = binom[i - 1][k - 1] + if k <= i - 1 { binom[i - 1][k] } else { 0.0 };
        }
    }
    let mut c_pows = vec![Complex64::new(1.0, 0.0); n + 1];
    for k in 1..=n {
        c_pows[k] = c_pows[k - 1] * c;
    }
    for k in 0..=n {
        let mut acc = PuiseuxSeries::zero();
        for j in k..=n {
            if poly[j].is_structural_zero() {
                continue;
            }
            let w = binom[j][k] * c_pows[j - k];
            let term = poly[j]
                .shift(gamma * Exp::from_integer(j as i64))
                .scale(w);
            acc = acc.add(&term, ctx);
        }
        out[k] = acc;
    }
    // Recenter magnitudes: divide by the minimal order among entries.
    let min_ord = out
        .iter()
        .filter_map(|s| match s.ord() {
            Valuation::Finite(e) => Some(e),
            _ => None,
        })
        .min();
    if let Some(m) = min_ord {
        for s in out.iter_mut() {
            *s = s.shift(-m);
        }
    }
    out
}

/// Evaluate the polynomial (coefficient list in `y`) and its
/// `y`-derivative at a series point.
fn eval_with_derivative(
    coeffs: &[PuiseuxSeries],
    y: &PuiseuxSeries,
    ctx: &Ctx,
) -> (PuiseuxSeries, PuiseuxSeries) {
    let mut p = PuiseuxSeries::zero();
    let mut dp = PuiseuxSeries::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(y, ctx).add(&p, ctx);
        p = p.mul(y, ctx).add(c, ctx);
    }
    (p, dp)
}

/// Group the raw series roots into conjugacy classes under
/// `t^{1/mu} -> zeta t^{1/mu}` and pick the canonical representative.
fn group_conjugates(
    raw: Vec<RawBranch>,
    chart: Chart,
    ctx: &Ctx,
) -> Result<Vec<BranchSeries>> {
    let mut items: Vec<(PuiseuxSeries, i64)> = raw
        .into_iter()
        .map(|r| {
            let mu = r.path_ram.lcm(&r.beta.ram());
            (r.beta, mu)
        })
        .collect();
    let mut groups: Vec<BranchSeries> = Vec::new();
    while let Some((beta, mu)) = items.pop() {
        let mut members = vec![beta.clone()];
        if mu > 1 {
            // Pull out the conjugates of this series.
            let mut k = 0;
            while k < items.len() {
                let (other, omu) = &items[k];
                if *omu == mu && is_conjugate(&beta, other, mu) {
                    members.push(items.remove(k).0);
                } else {
                    k += 1;
                }
            }
            if members.len() != mu as usize {
                return Err(Error::invalid(format!(
                    "found {} conjugates of a ramification-{} branch",
                    members.len(),
                    mu
                )));
            }
        }
        let canonical = canonical_twist(&members[0], mu);
        groups.push(BranchSeries {
            chart,
            beta: canonical,
            mu: mu as u32,
        });
    }
    // Deterministic order: by series sort key.
    groups.sort_by(|a, b| series_sort_key(&a.beta).cmp(&series_sort_key(&b.beta)));
    let _ = ctx;
    Ok(groups)
}

fn is_conjugate(a: &PuiseuxSeries, b: &PuiseuxSeries, mu: i64) -> bool {
    let scale = a.max_coeff_abs().max(b.max_coeff_abs()).max(1.0);
    (0..mu).any(|k| a.twist(k, mu).approx_eq(b, 1e-6 * scale))
}

/// Among the conjugates, the one minimizing the quantized
/// (exponent, re, im) term sequence. Deterministic reports depend on it.
fn canonical_twist(beta: &PuiseuxSeries, mu: i64) -> PuiseuxSeries {
    let mut best = beta.clone();
    let mut best_key = series_sort_key(&best);
    for k in 1..mu {
        let cand = beta.twist(k, mu);
        let key = series_sort_key(&cand);
        if key < best_key {
            best_key = key;
            best = cand;
        }
    }
    best
}

/// Lexicographic key on quantized terms.
pub fn series_sort_key(s: &PuiseuxSeries) -> Vec<(i64, i64, i64, i64)> {
    s.iter_terms()
        .map(|(e, c)| {
            let q = 1e9;
            (
                *e.numer(),
                *e.denom(),
                (c.re * q).round() as i64,
                (c.im * q).round() as i64,
            )
        })
        .collect()
}

/// Keep only branches whose critical point has exact period `p`: the
/// first vanishing orbit entry must be the `p`-th. Dropped branches are
/// returned tagged with their true period. A branch whose residual does
/// not vanish at all signals a corrupted expansion and errors.
pub fn exact_period_filter(
    branches: Vec<BranchSeries>,
    p: u32,
    ctx: &Ctx,
) -> Result<(Vec<BranchSeries>, Vec<(BranchSeries, u32)>)> {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for br in branches {
        // Chart sanity: the line at a=0 carries bounded parameters, the
        // line at infinity carries ord -1 parameters.
        let ord_ok = match (br.chart, br.beta.ord()) {
            (Chart::LPlus, Valuation::Finite(e)) => !e.is_negative(),
            (Chart::LMinus, Valuation::Finite(e)) => e.is_negative(),
            _ => false,
        };
        if !ord_ok {
            dropped.push((br, 0));
            continue;
        }
        let map = MapChart::new(br.beta.clone(), ctx)?;
        let scan = orbit_scan(&map, p, ctx)?;
        match scan.first_zero {
            Some(j) if j as u32 == p => kept.push(br),
            Some(j) => dropped.push((br, j as u32)),
            None => {
                return Err(Error::invalid(format!(
                    "branch residual does not vanish at period {p} (corrupted expansion)"
                )))
            }
        }
    }
    Ok((kept, dropped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::poly::omega_poly;
    use crate::series::exp;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn p3_single_branch_per_line() {
        let ctx = Ctx::for_period(3);
        let n3 = omega_poly(3);
        // a = t: the single branch beta = -1 - t.
        let plus = newton_puiseux(&n3, Chart::LPlus, &ctx).unwrap();
        assert_eq!(plus.len(), 1);
        assert_eq!(plus[0].mu, 1);
        let expect = PuiseuxSeries::from_terms(
            [(exp_int(0), c(-1.0)), (exp_int(1), c(-1.0))],
            Trunc::Exact,
        );
        assert!(plus[0].beta.approx_eq(&expect, 1e-9), "got {}", plus[0].beta);

        // a = 1/t: the single branch beta = -1 - 1/t.
        let minus = newton_puiseux(&n3, Chart::LMinus, &ctx).unwrap();
        assert_eq!(minus.len(), 1);
        assert_eq!(minus[0].mu, 1);
        let expect = PuiseuxSeries::from_terms(
            [(exp_int(-1), c(-1.0)), (exp_int(0), c(-1.0))],
            Trunc::Exact,
        );
        assert!(
            minus[0].beta.approx_eq(&expect, 1e-9),
            "got {}",
            minus[0].beta
        );
    }

    #[test]
    fn p4_branches_both_lines() {
        let ctx = Ctx::for_period(4);
        let n4 = omega_poly(4);
        // Two bounded branches, leading parts worked by hand from the
        // conic: -1 + t^2 + 3t^3 and -1/2 - (3/2)t - t^2 - 3t^3.
        let plus = newton_puiseux(&n4, Chart::LPlus, &ctx).unwrap();
        assert_eq!(plus.len(), 2);
        assert!(plus.iter().all(|b| b.mu == 1));
        let b13 = plus
            .iter()
            .find(|b| (b.beta.coeff_at(exp_int(0)).unwrap() - c(-1.0)).norm() < 1e-9)
            .expect("branch over the order-3 root value");
        assert!((b13.beta.coeff_at(exp_int(1)).unwrap()).norm() < 1e-9);
        assert!((b13.beta.coeff_at(exp_int(2)).unwrap() - c(1.0)).norm() < 1e-9);
        assert!((b13.beta.coeff_at(exp_int(3)).unwrap() - c(3.0)).norm() < 1e-9);
        let b14 = plus
            .iter()
            .find(|b| (b.beta.coeff_at(exp_int(0)).unwrap() - c(-0.5)).norm() < 1e-9)
            .expect("branch over the order-4 root value");
        assert!((b14.beta.coeff_at(exp_int(1)).unwrap() - c(-1.5)).norm() < 1e-9);
        assert!((b14.beta.coeff_at(exp_int(2)).unwrap() - c(-1.0)).norm() < 1e-9);

        // Unbounded branches: leading coefficients -1 and -1/2 over 1/t,
        // with -1/t + t + ... for the first.
        let minus = newton_puiseux(&n4, Chart::LMinus, &ctx).unwrap();
        assert_eq!(minus.len(), 2);
        assert!(minus.iter().all(|b| b.mu == 1));
        let m1 = minus
            .iter()
            .find(|b| (b.beta.coeff_at(exp_int(-1)).unwrap() - c(-1.0)).norm() < 1e-9)
            .unwrap();
        assert!((m1.beta.coeff_at(exp_int(1)).unwrap() - c(1.0)).norm() < 1e-9);
        assert!(minus
            .iter()
            .any(|b| (b.beta.coeff_at(exp_int(-1)).unwrap() - c(-0.5)).norm() < 1e-9));
    }

    #[test]
    fn residuals_vanish_on_expanded_branches() {
        let ctx = Ctx::for_period(4);
        let n4 = omega_poly(4);
        for chart in [Chart::LPlus, Chart::LMinus] {
            for br in newton_puiseux(&n4, chart, &ctx).unwrap() {
                let a = match chart {
                    Chart::LPlus => PuiseuxSeries::var(),
                    Chart::LMinus => PuiseuxSeries::monomial(exp_int(-1), c(1.0)),
                };
                let resid = n4.eval_series(&a, &br.beta, &ctx);
                assert!(
                    resid.ord().is_zero_like(),
                    "{} residual {})",
                    chart.name(),
                    resid
                );
            }
        }
    }

    #[test]
    fn exact_period_filter_keeps_p3_and_p4() {
        let ctx = Ctx::for_period(4);
        let n4 = omega_poly(4);
        let plus = newton_puiseux(&n4, Chart::LPlus, &ctx).unwrap();
        let (kept, dropped) = exact_period_filter(plus, 4, &ctx).unwrap();
        assert_eq!(kept.len(), 2);
        assert!(dropped.is_empty());
    }

    #[test]
    fn exact_period_filter_drops_subperiod_at_p6() {
        // The period-6 numerator contains the period-3 line 1 + a + b;
        // its branch must be dropped and tagged with true period 3.
        let ctx = Ctx::for_period(6);
        let n6 = omega_poly(6);
        let plus = newton_puiseux(&n6, Chart::LPlus, &ctx).unwrap();
        let total: u32 = plus.iter().map(|b| b.mu).sum();
        assert_eq!(total, 10, "b-degree of the period-6 numerator");
        let (kept, dropped) = exact_period_filter(plus, 6, &ctx).unwrap();
        let kept_mu: u32 = kept.iter().map(|b| b.mu).sum();
        assert_eq!(kept_mu, 9, "exact-period-6 intersection count");
        assert_eq!(dropped.len(), 1);
        assert_eq!(dropped[0].1, 3);
    }

    /// Ramified toy input: y^2 = t^3 (1 + t) has one branch with mu = 2.
    #[test]
    fn ramified_branch_grouping() {
        let ctx = Ctx::default();
        // Build the polynomial b^2 - a^3 - a^4 and expand at a = t.
        let b2 = IntBivarPoly::var_b().mul(&IntBivarPoly::var_b());
        let a3 = {
            let a = IntBivarPoly::var_a();
            a.mul(&a).mul(&a)
        };
        let a4 = a3.mul(&IntBivarPoly::var_a());
        let poly = b2.sub(&a3).sub(&a4);
        let branches = newton_puiseux(&poly, Chart::LPlus, &ctx).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].mu, 2);
        let beta = &branches[0].beta;
        assert_eq!(beta.ord(), Valuation::Finite(exp(3, 2)));
        // beta^2 = t^3 + t^4 termwise.
        let sq = beta.mul(beta, &ctx);
        let expect = PuiseuxSeries::from_terms(
            [(exp_int(3), c(1.0)), (exp_int(4), c(1.0))],
            Trunc::Exact,
        );
        assert!(sq.approx_eq(&expect, 1e-9), "got {sq}");
    }
}
