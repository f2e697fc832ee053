//! Exact integer polynomials: the bivariate numerators of the iterated
//! critical-orbit map in the `(a, b)` family, and the univariate
//! machinery (Gleason factors, squarefree decomposition, modular gcd
//! certificates) built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::series::{exp_int, PuiseuxSeries, Trunc};
use crate::{Ctx, Error, Result};

/// Sparse bivariate polynomial `sum c_{ij} a^i b^j` over the integers,
/// stored reduced by integer content (sign normalized so the
/// lexicographically largest monomial has positive coefficient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntBivarPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl IntBivarPoly {
    pub fn zero() -> Self {
        IntBivarPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((0, 0), BigInt::from(c));
        }
        IntBivarPoly { terms }
    }

    pub fn var_a() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((1, 0), BigInt::one());
        IntBivarPoly { terms }
    }

    pub fn var_b() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 1), BigInt::one());
        IntBivarPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn deg_a(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn deg_b(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(*k).or_insert_with(BigInt::zero);
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        IntBivarPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntBivarPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                let e = terms
                    .entry((i1 + i2, j1 + j2))
                    .or_insert_with(BigInt::zero);
                *e += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        IntBivarPoly { terms }
    }

    pub fn mul_var(&self, var: &Self) -> Self {
        self.mul(var)
    }

    /// Divide out the integer content and normalize the leading sign.
    pub fn content_reduced(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::gcd(g, c.abs());
            if g.is_one() {
                break;
            }
        }
        let lead_negative = self
            .terms
            .iter()
            .next_back()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if lead_negative {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        IntBivarPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c / &g)).collect(),
        }
    }

    /// Partial derivative in `a`.
    pub fn d_da(&self) -> Self {
        let mut terms = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            if *i > 0 {
                terms.insert((i - 1, *j), c * BigInt::from(*i));
            }
        }
        IntBivarPoly { terms }
    }

    /// Partial derivative in `b`.
    pub fn d_db(&self) -> Self {
        let mut terms = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            if *j > 0 {
                terms.insert((*i, j - 1), c * BigInt::from(*j));
            }
        }
        IntBivarPoly { terms }
    }

    /// Numeric evaluation.
    pub fn eval_complex(&self, a: Complex64, b: Complex64) -> Complex64 {
        // Horner in b over Horner-in-a rows.
        let mut rows: BTreeMap<u32, Vec<(u32, f64)>> = BTreeMap::new();
        let mut ok = true;
        for ((i, j), c) in &self.terms {
            let cf = c.to_f64().unwrap_or_else(|| {
                ok = false;
                f64::NAN
            });
            rows.entry(*j).or_default().push((*i, cf));
        }
        debug_assert!(ok, "coefficient exceeds f64 range");
        let mut acc = Complex64::ZERO;
        let maxj = self.deg_b();
        for j in (0..=maxj).rev() {
            acc *= b;
            if let Some(row) = rows.get(&j) {
                let mut row_acc = Complex64::ZERO;
                for (i, cf) in row {
                    row_acc += cf * a.powu(*i);
                }
                acc += row_acc;
            }
        }
        acc
    }

    /// Substitute exact series for both variables.
    pub fn eval_series(&self, a: &PuiseuxSeries, b: &PuiseuxSeries, ctx: &Ctx) -> PuiseuxSeries {
        let coeffs = self.b_coefficients_as_series(a, ctx);
        let mut acc = PuiseuxSeries::zero();
        for cj in coeffs.iter().rev() {
            acc = acc.mul(b, ctx).add(cj, ctx);
        }
        acc
    }

    /// The coefficients of powers of `b` after substituting a series for
    /// `a`: index `j` holds `sum_i c_{ij} a(t)^i`.
    pub fn b_coefficients_as_series(&self, a: &PuiseuxSeries, ctx: &Ctx) -> Vec<PuiseuxSeries> {
        let maxj = self.deg_b() as usize;
        let maxi = self.deg_a();
        // Precompute powers of a.
        let mut pows = Vec::with_capacity(maxi as usize + 1);
        pows.push(PuiseuxSeries::one());
        for _ in 0..maxi {
            pows.push(pows.last().unwrap().mul(a, ctx));
        }
        let mut out = vec![PuiseuxSeries::zero(); maxj + 1];
        for ((i, j), c) in &self.terms {
            let cf = c.to_f64().expect("coefficient exceeds f64 range");
            let term = pows[*i as usize].scale(Complex64::new(cf, 0.0));
            out[*j as usize] = out[*j as usize].add(&term, ctx);
        }
        out
    }

    /// View as a univariate polynomial in `b` with `IntPoly`-in-`a`
    /// coefficients: index `j` gives the coefficient of `b^j`.
    pub fn b_coefficients(&self) -> Vec<IntPoly> {
        let maxj = self.deg_b() as usize;
        let mut out = vec![IntPoly::zero(); maxj + 1];
        for ((i, j), c) in &self.terms {
            out[*j as usize].set_coeff(*i as usize, c.clone());
        }
        out
    }

    /// Substitute an exact integer for `a`, producing a polynomial in `b`.
    pub fn eval_a_int(&self, a: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero();
        for ((i, j), c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..*i {
                v *= a;
            }
            out.add_to_coeff(*j as usize, v);
        }
        out
    }

    /// Substitute an exact integer for `b`, producing a polynomial in `a`.
    pub fn eval_b_int(&self, b: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero();
        for ((i, j), c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..*j {
                v *= b;
            }
            out.add_to_coeff(*i as usize, v);
        }
        out
    }
}

/// The critical-orbit value `omega_p` of the family
/// `f_{a,b}(z) = 1 + b/z + a/z^2` as an exact fraction `N_p / D_p`,
/// starting from the normalized prefix `0 -> infinity -> 1` and iterating
/// `N' = N^2 + b D N + a D^2`, `D' = N^2` with content reduction at each
/// step.
pub fn omega_pair(p: u32) -> (IntBivarPoly, IntBivarPoly) {
    assert!(p >= 2, "the first two orbit entries are not rational in (a,b)");
    let mut n = IntBivarPoly::constant(1);
    let mut d = IntBivarPoly::constant(1);
    let a = IntBivarPoly::var_a();
    let b = IntBivarPoly::var_b();
    for _ in 2..p {
        let n2 = n.mul(&n);
        let new_n = n2.add(&b.mul(&d).mul(&n)).add(&a.mul(&d).mul(&d));
        let new_d = n2;
        // Joint content reduction keeps the fraction exact.
        let mut g = BigInt::zero();
        for c in new_n.terms.values().chain(new_d.terms.values()) {
            g = num_integer::gcd(g, c.abs());
            if g.is_one() {
                break;
            }
        }
        if g.is_one() || g.is_zero() {
            n = new_n;
            d = new_d;
        } else {
            n = IntBivarPoly {
                terms: new_n.terms.iter().map(|(k, c)| (*k, c / &g)).collect(),
            };
            d = IntBivarPoly {
                terms: new_d.terms.iter().map(|(k, c)| (*k, c / &g)).collect(),
            };
        }
    }
    (n, d)
}

/// Numerator of the period-`p` condition, content-reduced. `p = 2`
/// returns the constant `1`: the period-2 locus is invisible in this
/// chart.
pub fn omega_poly(p: u32) -> IntBivarPoly {
    omega_pair(p).0.content_reduced()
}

/// Dense univariate polynomial over the integers (index = power).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn var() -> Self {
        IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set_coeff(&mut self, k: usize, v: BigInt) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, BigInt::zero());
        }
        self.coeffs[k] = v;
        self.trim();
    }

    pub fn add_to_coeff(&mut self, k: usize, v: BigInt) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, BigInt::zero());
        }
        self.coeffs[k] += v;
        self.trim();
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        IntPoly::from_coeffs(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::invalid("division by the zero polynomial"));
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree().unwrap();
        let lead = divisor.coeffs.last().unwrap().clone();
        if rem.len() < divisor.coeffs.len() {
            return if self.is_zero() {
                Ok(IntPoly::zero())
            } else {
                Err(Error::NonzeroRemainder)
            };
        }
        let qd = rem.len() - divisor.coeffs.len();
        let mut q = vec![BigInt::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, r) = num_integer::div_rem(top, lead.clone());
            if !r.is_zero() {
                return Err(Error::NonzeroRemainder);
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &qc * dc;
            }
            q[k] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonzeroRemainder);
        }
        Ok(IntPoly::from_coeffs(q))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().expect("coefficient exceeds f64 range");
        }
        acc
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| Complex64::new(c.to_f64().expect("coefficient exceeds f64 range"), 0.0))
            .collect()
    }

    /// Exact polynomial as a Puiseux series in `t`.
    pub fn to_series(&self) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            self.coeffs.iter().enumerate().filter_map(|(i, c)| {
                let cf = c.to_f64().expect("coefficient exceeds f64 range");
                if cf == 0.0 {
                    None
                } else {
                    Some((exp_int(i as i64), Complex64::new(cf, 0.0)))
                }
            }),
            Trunc::Exact,
        )
    }

    /// Monic gcd with the derivative reduced mod `q` (odd prime, fits
    /// u64). Because the inputs here are monic, a constant gcd mod one
    /// prime certifies a constant gcd over the rationals.
    pub fn gcd_with_derivative_is_constant_mod(&self, q: u64) -> bool {
        let a = self.reduce_mod(q);
        let b = self.derivative().reduce_mod(q);
        let g = gcd_mod(a, b, q);
        g.len() == 1
    }

    fn reduce_mod(&self, q: u64) -> Vec<u64> {
        let m = BigInt::from(q);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = ((c % &m) + &m) % &m;
                r.to_u64().unwrap()
            })
            .collect();
        while matches!(out.last(), Some(0)) {
            out.pop();
        }
        out
    }
}

fn mod_pow(base: u64, mut e: u64, q: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b: u128 = base as u128 % q as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q as u128;
        }
        b = b * b % q as u128;
        e >>= 1;
    }
    acc as u64
}

fn mod_inv(a: u64, q: u64) -> u64 {
    mod_pow(a, q - 2, q)
}

fn trim_mod(v: &mut Vec<u64>) {
    while matches!(v.last(), Some(0)) {
        v.pop();
    }
}

/// Remainder of `a` by `b` in `F_q[x]`; `b` nonempty and trimmed.
fn rem_mod(mut a: Vec<u64>, b: &[u64], q: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], q);
    while a.len() > db {
        let da = a.len() - 1;
        let f = (a[da] as u128 * lead_inv as u128 % q as u128) as u64;
        if f != 0 {
            let shift = da - db;
            for (i, bc) in b.iter().enumerate() {
                let sub = (*bc as u128 * f as u128 % q as u128) as u64;
                a[i + shift] = (a[i + shift] + q - sub) % q;
            }
        }
        a.pop();
        trim_mod(&mut a);
    }
    a
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Vec<u64> {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let r = rem_mod(a, &b, q);
        a = b;
        b = r;
    }
    if !a.is_empty() {
        let inv = mod_inv(*a.last().unwrap(), q);
        for c in a.iter_mut() {
            *c = (*c as u128 * inv as u128 % q as u128) as u64;
        }
    }
    a
}

/// Period-`p` Gleason factor of the quadratic family: the exact-period
/// part of the critical-orbit polynomial `Q_c^{op}(0)`, obtained by
/// dividing out every lower factor. The returned certificate is exact:
/// the polynomial is squarefree over the rationals, established by a
/// monic modular gcd with its derivative.
pub fn gleason(p: u32) -> Result<(IntPoly, bool)> {
    assert!(p >= 1);
    // Q_c^{op}(0) as an integer polynomial in c.
    let orbit_poly = |n: u32| -> IntPoly {
        let mut q = IntPoly::zero();
        let c = IntPoly::var();
        for _ in 0..n {
            q = q.mul(&q).add(&c);
        }
        q
    };
    let mut g = orbit_poly(p);
    for d in crate::counting::divisors(p) {
        if d < p {
            let (gd, _) = gleason(d)?;
            g = g.exact_div(&gd)?;
        }
    }
    // Two independent primes; one suffices for monic inputs.
    let cert = g.gcd_with_derivative_is_constant_mod(1_000_000_007)
        && g.gcd_with_derivative_is_constant_mod(998_244_353);
    Ok((g, cert))
}

/// Resultant of two integer polynomials with respect to their variable,
/// by fraction-free Gaussian elimination (Bareiss) on the Sylvester
/// matrix.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (da, db) = match (a.degree(), b.degree()) {
        (Some(da), Some(db)) => (da, db),
        _ => return BigInt::zero(),
    };
    if da == 0 {
        let mut r = BigInt::one();
        for _ in 0..db {
            r *= a.coeff(0);
        }
        return r;
    }
    if db == 0 {
        let mut r = BigInt::one();
        for _ in 0..da {
            r *= b.coeff(0);
        }
        return r;
    }
    let n = da + db;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for row in 0..db {
        for (k, c) in a.coeffs.iter().enumerate() {
            m[row][row + da - k] = c.clone();
        }
    }
    for row in 0..da {
        for (k, c) in b.coeffs.iter().enumerate() {
            m[db + row][row + db - k] = c.clone();
        }
    }
    bareiss_det(m)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        for i in k + 1..n {
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_poly_small_periods() {
        // Orbit by hand: 0 -> inf -> 1 -> 1 + b + a.
        assert_eq!(omega_poly(2), IntBivarPoly::constant(1));
        let n3 = omega_poly(3);
        let expect = IntBivarPoly::constant(1)
            .add(&IntBivarPoly::var_a())
            .add(&IntBivarPoly::var_b());
        assert_eq!(n3, expect);
        // Hand expansion: (1+a+b)^2 + b(1+a+b) + a.
        let n4 = omega_poly(4);
        let one = IntBivarPoly::constant(1);
        let a = IntBivarPoly::var_a();
        let b = IntBivarPoly::var_b();
        let w3 = one.add(&a).add(&b);
        let expect4 = w3.mul(&w3).add(&b.mul(&w3)).add(&a).content_reduced();
        assert_eq!(n4, expect4);
        assert_eq!(n4.coeff(0, 2), BigInt::from(2));
        assert_eq!(n4.coeff(1, 1), BigInt::from(3));
        assert_eq!(n4.coeff(2, 0), BigInt::from(1));
        assert_eq!(n4.total_degree(), 2);
    }

    /// The total and b-degrees of the period numerator match the count of
    /// all periodic parameters of period >= 3 dividing p.
    #[test]
    fn omega_poly_degree_matches_counting() {
        for p in 3..=8u32 {
            let n = omega_poly(p);
            let nu2 = crate::counting::nu2(p).to_u32().unwrap();
            assert_eq!(n.total_degree(), nu2, "total degree at p={p}");
            assert_eq!(n.deg_b(), nu2, "b-degree at p={p}");
        }
    }

    #[test]
    fn gleason_small() {
        let (g1, sf1) = gleason(1).unwrap();
        assert_eq!(g1, IntPoly::var());
        assert!(sf1);
        let (g2, sf2) = gleason(2).unwrap();
        assert_eq!(g2, IntPoly::from_coeffs(vec![BigInt::one(), BigInt::one()]));
        assert!(sf2);
        // c^3 + 2c^2 + c + 1
        let (g3, sf3) = gleason(3).unwrap();
        assert_eq!(
            g3,
            IntPoly::from_coeffs(vec![
                BigInt::one(),
                BigInt::one(),
                BigInt::from(2),
                BigInt::one()
            ])
        );
        assert!(sf3);
    }

    #[test]
    fn gleason_degree_is_eta_prime() {
        for p in 1..=10u32 {
            let (g, sf) = gleason(p).unwrap();
            assert!(sf, "squarefree certificate fails at p={p}");
            assert_eq!(
                BigInt::from(g.degree().unwrap()),
                crate::counting::eta_prime(p),
                "degree at p={p}"
            );
        }
    }

    #[test]
    fn resultant_known_values() {
        // res(x^2 - 1, x - 2) = value of x^2-1 at 2 = 3 (times lead^0)
        let a = IntPoly::from_coeffs(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]);
        let b = IntPoly::from_coeffs(vec![BigInt::from(-2), BigInt::one()]);
        assert_eq!(resultant(&a, &b), BigInt::from(3));
        // res(x^2+1, x^2-1): roots +-i vs +-1: prod of (r_i - s_j) = 4
        let c = IntPoly::from_coeffs(vec![BigInt::one(), BigInt::zero(), BigInt::one()]);
        let d = IntPoly::from_coeffs(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]);
        assert_eq!(resultant(&c, &d), BigInt::from(4));
        // Common root => 0.
        let e = IntPoly::from_coeffs(vec![BigInt::from(-1), BigInt::one()]);
        let f = IntPoly::from_coeffs(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]);
        assert_eq!(resultant(&e, &f), BigInt::zero());
    }

    #[test]
    fn exact_div_detects_remainder() {
        let x2 = IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::zero(), BigInt::one()]);
        let xp1 = IntPoly::from_coeffs(vec![BigInt::one(), BigInt::one()]);
        assert!(x2.exact_div(&xp1).is_err());
        let prod = x2.mul(&xp1);
        assert_eq!(prod.exact_div(&xp1).unwrap(), x2);
    }
}

/// Dense univariate polynomial over the rationals, used for exact
/// squarefree decomposition of initial-form polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn from_int(p: &IntPoly) -> Self {
        RatPoly {
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn monic(&self) -> RatPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => RatPoly {
                coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
            },
        }
    }

    fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly { coeffs: vec![] };
        }
        RatPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    fn rem(&self, div: &RatPoly) -> RatPoly {
        let mut r = self.coeffs.clone();
        let dd = div.degree();
        let lead = div.coeffs.last().unwrap();
        while r.len() > dd {
            let q = r.last().unwrap() / lead;
            let shift = r.len() - 1 - dd;
            for (i, c) in div.coeffs.iter().enumerate() {
                let v = &q * c;
                r[shift + i] -= v;
            }
            r.pop();
            while matches!(r.last(), Some(c) if c.is_zero()) {
                r.pop();
            }
        }
        RatPoly::from_coeffs(r)
    }

    /// Exact quotient (remainder must vanish).
    fn exact_div(&self, div: &RatPoly) -> Result<RatPoly> {
        let mut r = self.coeffs.clone();
        let dd = div.degree();
        let lead = div.coeffs.last().unwrap();
        if r.len() < div.coeffs.len() {
            return if self.is_zero() {
                Ok(RatPoly { coeffs: vec![] })
            } else {
                Err(Error::NonzeroRemainder)
            };
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let qc = top / lead;
            for (i, c) in div.coeffs.iter().enumerate() {
                let v = &qc * c;
                r[k + i] -= v;
            }
            q[k] = qc;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonzeroRemainder);
        }
        Ok(RatPoly::from_coeffs(q))
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::from_coeffs(out)
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| {
                let v = c.numer().to_f64().expect("numerator exceeds f64")
                    / c.denom().to_f64().expect("denominator exceeds f64");
                Complex64::new(v, 0.0)
            })
            .collect()
    }
}

/// Yun's algorithm: exact squarefree decomposition `f = prod f_i^i`
/// over the rationals. Returns the nontrivial `(f_i, i)` pairs.
pub fn squarefree_decomposition(f: &RatPoly) -> Result<Vec<(RatPoly, usize)>> {
    if f.degree() == 0 {
        return Ok(vec![]);
    }
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.exact_div(&a0)?.monic();
    let mut d = fp.exact_div(&a0)?.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        let g = b.gcd(&d.monic()).monic();
        if g.degree() > 0 {
            out.push((g.clone(), i));
        }
        b = b.exact_div(&g)?.monic();
        d = d.exact_div(&g)?.sub(&b.derivative());
        i += 1;
        if i > 64 {
            return Err(Error::invalid("squarefree decomposition did not terminate"));
        }
    }
    Ok(out)
}
