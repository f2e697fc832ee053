//! Truncated Puiseux series: finitely many terms `c_k t^{k/ram}` with
//! exact rational exponents, complex `f64` coefficients and an explicit
//! truncation bound. Exponent bookkeeping is always exact; only
//! coefficients are floating.
//!
//! A series is either `Exact` (a Puiseux polynomial, e.g. `1 + 1/t`) or
//! truncated `At(T)`: all exponents strictly below `T` are correct,
//! nothing is known at or beyond `T`. Ring operations propagate the
//! bound; division and square roots of exact operands are capped at the
//! context truncation.

mod jet;

pub use jet::Jet;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Ctx, Error, Result};

/// Exact rational exponent.
pub type Exp = Ratio<i64>;

pub fn exp(num: i64, den: i64) -> Exp {
    Ratio::new(num, den)
}

pub fn exp_int(num: i64) -> Exp {
    Ratio::from_integer(num)
}

/// Truncation bound of a series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Trunc {
    /// Puiseux polynomial: every exponent is known.
    Exact,
    /// Exponents `< T` are exact, terms at or beyond `T` are unknown.
    At(Exp),
}

impl Trunc {
    pub fn min_of(a: Trunc, b: Trunc) -> Trunc {
        match (a, b) {
            (Trunc::Exact, t) | (t, Trunc::Exact) => t,
            (Trunc::At(x), Trunc::At(y)) => Trunc::At(x.min(y)),
        }
    }

    pub fn shifted(self, by: Exp) -> Trunc {
        match self {
            Trunc::Exact => Trunc::Exact,
            Trunc::At(x) => Trunc::At(x + by),
        }
    }

    pub fn bound(self) -> Option<Exp> {
        match self {
            Trunc::Exact => None,
            Trunc::At(x) => Some(x),
        }
    }

    fn admits(self, e: Exp) -> bool {
        match self {
            Trunc::Exact => true,
            Trunc::At(x) => e < x,
        }
    }
}

/// Result of `ord0`. `ZeroToTrunc(T)` means every known coefficient
/// vanished: the order is provably `>= T` but not determined. `ExactZero`
/// is the structural zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Valuation {
    Finite(Exp),
    ZeroToTrunc(Exp),
    ExactZero,
}

impl Valuation {
    /// The exact order, or an error when it is not determined.
    pub fn finite(self, what: &str) -> Result<Exp> {
        match self {
            Valuation::Finite(e) => Ok(e),
            _ => Err(Error::IndeterminateOrder { what: what.into() }),
        }
    }

    /// Whether `ord >= 0` is decidable and true.
    pub fn is_nonnegative(self) -> Option<bool> {
        match self {
            Valuation::Finite(e) => Some(!e.is_negative()),
            Valuation::ZeroToTrunc(t) => {
                if !t.is_negative() {
                    Some(true)
                } else {
                    None
                }
            }
            Valuation::ExactZero => Some(true),
        }
    }

    pub fn is_zero_like(self) -> bool {
        !matches!(self, Valuation::Finite(_))
    }
}

/// Image of a series under the set-t-to-zero reduction map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reduced {
    Finite(Complex64),
    Infinity,
}

impl Reduced {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Reduced::Finite(c) => Some(c),
            Reduced::Infinity => None,
        }
    }
}

/// A truncated Puiseux series `sum_k c_k t^{k/ram}`.
#[derive(Clone)]
pub struct PuiseuxSeries {
    ram: i64,
    terms: BTreeMap<i64, Complex64>,
    trunc: Trunc,
}

impl PuiseuxSeries {
    pub fn zero() -> Self {
        PuiseuxSeries {
            ram: 1,
            terms: BTreeMap::new(),
            trunc: Trunc::Exact,
        }
    }

    /// A zero-to-truncation series: no known term below `t`.
    pub fn zero_to(t: Exp) -> Self {
        PuiseuxSeries {
            ram: 1,
            terms: BTreeMap::new(),
            trunc: Trunc::At(t),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(exp_int(0), c)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn monomial(e: Exp, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c != Complex64::ZERO {
            terms.insert(*e.numer(), c);
        }
        PuiseuxSeries {
            ram: *e.denom(),
            terms,
            trunc: Trunc::Exact,
        }
        .canonical()
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Self::monomial(exp_int(1), Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exp, Complex64)>, trunc: Trunc) -> Self {
        let mut ram: i64 = 1;
        let items: Vec<(Exp, Complex64)> = terms.into_iter().collect();
        for (e, _) in &items {
            ram = ram.lcm(e.denom());
        }
        let mut map = BTreeMap::new();
        for (e, c) in items {
            if c == Complex64::ZERO || !trunc.admits(e) {
                continue;
            }
            let k = e.numer() * (ram / e.denom());
            *map.entry(k).or_insert(Complex64::ZERO) += c;
        }
        map.retain(|_, c| *c != Complex64::ZERO);
        PuiseuxSeries {
            ram,
            terms: map,
            trunc,
        }
        .canonical()
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn ram(&self) -> i64 {
        self.ram
    }

    pub fn is_structural_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc == Trunc::Exact
    }

    /// Iterate `(exponent, coefficient)` in increasing exponent order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (Exp, Complex64)> + '_ {
        let ram = self.ram;
        self.terms.iter().map(move |(k, c)| (exp(*k, ram), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Exponent of the lowest stored term.
    pub fn ord(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(k) => Valuation::Finite(exp(*k, self.ram)),
            None => match self.trunc {
                Trunc::Exact => Valuation::ExactZero,
                Trunc::At(t) => Valuation::ZeroToTrunc(t),
            },
        }
    }

    pub fn leading(&self) -> Option<(Exp, Complex64)> {
        self.terms
            .iter()
            .next()
            .map(|(k, c)| (exp(*k, self.ram), *c))
    }

    /// Coefficient at an exact exponent (zero if absent but below trunc,
    /// `None` if the exponent is at or beyond the truncation bound).
    pub fn coeff_at(&self, e: Exp) -> Option<Complex64> {
        if !self.trunc.admits(e) {
            return None;
        }
        if self.ram % e.denom() != 0 {
            return Some(Complex64::ZERO);
        }
        let k = e.numer() * (self.ram / e.denom());
        Some(self.terms.get(&k).copied().unwrap_or(Complex64::ZERO))
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Reduce `ram` to the minimal denominator for the stored support.
    fn canonical(mut self) -> Self {
        if self.terms.is_empty() {
            self.ram = 1;
            return self;
        }
        let mut g = self.ram;
        for k in self.terms.keys() {
            g = g.gcd(k);
            if g == 1 {
                return self;
            }
        }
        if g > 1 {
            self.terms = self.terms.iter().map(|(k, c)| (k / g, *c)).collect();
            self.ram /= g;
        }
        self
    }

    /// Drop coefficients that are negligible relative to the magnitudes
    /// that were accumulated at their own exponent (cancellation
    /// detection), recording the kept/dropped margins.
    fn normalized_per_key(mut self, ctx: &Ctx, contrib: &BTreeMap<i64, f64>) -> Self {
        self.terms.retain(|k, c| {
            let m = c.norm();
            if m == 0.0 {
                return false;
            }
            let scale = contrib.get(k).copied().unwrap_or(0.0);
            if scale == 0.0 {
                return true;
            }
            let kept = m > ctx.tol_rel * scale;
            ctx.record_margin(m / scale, kept);
            kept
        });
        self.canonical()
    }

    /// Forget terms at or beyond `t` and cap the bound.
    pub fn truncate_to(&self, t: Exp) -> Self {
        let mut out = self.clone();
        let ram = out.ram;
        out.terms.retain(|k, _| exp(*k, ram) < t);
        out.trunc = Trunc::min_of(out.trunc, Trunc::At(t));
        out.canonical()
    }

    fn common_ram(&self, other: &Self) -> i64 {
        self.ram.lcm(&other.ram)
    }

    fn rescaled(&self, ram: i64) -> BTreeMap<i64, Complex64> {
        let f = ram / self.ram;
        self.terms.iter().map(|(k, c)| (k * f, *c)).collect()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, a: Complex64) -> Self {
        if a == Complex64::ZERO {
            return match self.trunc {
                Trunc::Exact => Self::zero(),
                Trunc::At(t) => Self::zero_to(t),
            };
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= a;
        }
        out
    }

    /// Multiply by `t^e`.
    pub fn shift(&self, e: Exp) -> Self {
        let ram = self.ram.lcm(e.denom());
        let ke = e.numer() * (ram / e.denom());
        let f = ram / self.ram;
        PuiseuxSeries {
            ram,
            terms: self.terms.iter().map(|(k, c)| (k * f + ke, *c)).collect(),
            trunc: self.trunc.shifted(e),
            }
        .canonical()
    }

    pub fn add(&self, other: &Self, ctx: &Ctx) -> Self {
        let ram = self.common_ram(other);
        let mut terms = self.rescaled(ram);
        let mut contrib: BTreeMap<i64, f64> =
            terms.iter().map(|(k, c)| (*k, c.norm())).collect();
        for (k, c) in other.rescaled(ram) {
            *terms.entry(k).or_insert(Complex64::ZERO) += c;
            let e = contrib.entry(k).or_insert(0.0);
            *e = e.max(c.norm());
        }
        let trunc = Trunc::min_of(self.trunc, other.trunc);
        let mut out = PuiseuxSeries { ram, terms, trunc };
        if let Trunc::At(t) = trunc {
            out = out.truncate_to(t);
        }
        out.normalized_per_key(ctx, &contrib)
    }

    pub fn sub(&self, other: &Self, ctx: &Ctx) -> Self {
        self.add(&other.neg(), ctx)
    }

    /// Order used for truncation propagation: the bound itself when no
    /// term is known, `None` for the structural zero.
    fn ord_for_trunc(&self) -> Option<Exp> {
        match self.ord() {
            Valuation::Finite(e) => Some(e),
            Valuation::ZeroToTrunc(t) => Some(t),
            Valuation::ExactZero => None,
        }
    }

    pub fn mul(&self, other: &Self, ctx: &Ctx) -> Self {
        let (oa, ob) = (self.ord_for_trunc(), other.ord_for_trunc());
        let (oa, ob) = match (oa, ob) {
            (Some(a), Some(b)) => (a, b),
            _ => return Self::zero(),
        };
        let trunc = Trunc::min_of(
            self.trunc.shifted(ob),
            other.trunc.shifted(oa),
        );
        let ram = self.common_ram(other);
        let a = self.rescaled(ram);
        let b = other.rescaled(ram);
        let mut terms: BTreeMap<i64, Complex64> = BTreeMap::new();
        let mut contrib: BTreeMap<i64, f64> = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let k = ka + kb;
                if trunc.admits(exp(k, ram)) {
                    let prod = ca * cb;
                    *terms.entry(k).or_insert(Complex64::ZERO) += prod;
                    let e = contrib.entry(k).or_insert(0.0);
                    *e = e.max(prod.norm());
                }
            }
        }
        PuiseuxSeries { ram, terms, trunc }.normalized_per_key(ctx, &contrib)
    }

    pub fn pow(&self, n: u32, ctx: &Ctx) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self, ctx);
        }
        acc
    }

    /// Multiplicative inverse. The relative depth is capped at the
    /// context truncation when the operand is exact.
    pub fn inverse(&self, ctx: &Ctx) -> Result<Self> {
        let (lead_e, lead_c) = self.leading().ok_or_else(|| match self.trunc {
            Trunc::Exact => Error::invalid("inverse of the zero series"),
            Trunc::At(t) => Error::DivisionByZeroToTrunc {
                trunc: t.to_string(),
            },
        })?;
        // y = c t^e (1 + u); 1/y = t^{-e}/c (1 - u + u^2 - ...).
        let t_out = match self.trunc {
            Trunc::Exact => Trunc::At(ctx.trunc),
            Trunc::At(t) => Trunc::At((t - lead_e * 2).min(ctx.trunc)),
        };
        let rel = match t_out {
            Trunc::At(t) => t + lead_e, // relative depth of the result
            Trunc::Exact => unreachable!(),
        };
        let unit = self
            .shift(-lead_e)
            .scale(Complex64::new(1.0, 0.0) / lead_c)
            .truncate_to(rel);
        let u = unit.sub(&Self::one(), ctx);
        let mut acc = Self::one().truncate_to(rel);
        match u.ord() {
            Valuation::Finite(d) if d > Exp::zero() => {
                let mut pw = Self::one().truncate_to(rel);
                let mut n_ord = Exp::zero();
                loop {
                    n_ord += d;
                    if n_ord >= rel {
                        break;
                    }
                    pw = pw.mul(&u, ctx).neg().truncate_to(rel);
                    if pw.terms.is_empty() {
                        break;
                    }
                    acc = acc.add(&pw, ctx);
                }
            }
            Valuation::Finite(_) => {
                return Err(Error::invalid(
                    "inverse: unit part not normalized (internal bug)",
                ))
            }
            _ => {}
        }
        Ok(acc
            .shift(-lead_e)
            .scale(Complex64::new(1.0, 0.0) / lead_c))
    }

    pub fn div(&self, other: &Self, ctx: &Ctx) -> Result<Self> {
        // Monomial divisor: exact shift, no truncation introduced.
        if other.terms.len() == 1 && other.trunc == Trunc::Exact {
            let (e, c) = other.leading().unwrap();
            return Ok(self.shift(-e).scale(Complex64::new(1.0, 0.0) / c));
        }
        Ok(self.mul(&other.inverse(ctx)?, ctx))
    }

    /// Principal square root: `sqrt(c t^e (1+u)) = sqrt(c) t^{e/2} s`,
    /// `s^2 = 1+u` by Newton iteration.
    pub fn sqrt(&self, ctx: &Ctx) -> Result<Self> {
        let (lead_e, lead_c) = self
            .leading()
            .ok_or_else(|| Error::IndeterminateOrder {
                what: "sqrt of a zero-to-truncation series".into(),
            })?;
        let t_out = match self.trunc {
            Trunc::Exact => Trunc::At(ctx.trunc),
            Trunc::At(t) => Trunc::At((t - lead_e / 2).min(ctx.trunc)),
        };
        let rel = match t_out {
            Trunc::At(t) => t - lead_e / 2,
            Trunc::Exact => unreachable!(),
        };
        let unit = self
            .shift(-lead_e)
            .scale(Complex64::new(1.0, 0.0) / lead_c)
            .truncate_to(rel);
        let mut s = Self::one().truncate_to(rel);
        let half = Complex64::new(0.5, 0.0);
        // Contact order doubles per step.
        let steps = 2 + (rel.to_integer().unsigned_abs() + 2).ilog2() as usize + 2;
        for _ in 0..steps {
            let next = s.add(&unit.div(&s, ctx)?, ctx).scale(half).truncate_to(rel);
            let diff = next.sub(&s, ctx);
            s = next;
            if diff.terms.is_empty() {
                break;
            }
        }
        Ok(s.shift(lead_e / 2).scale(lead_c.sqrt()))
    }

    /// Set-t-to-zero reduction to the complex projective line.
    pub fn reduce(&self) -> Result<Reduced> {
        match self.ord() {
            Valuation::Finite(e) => {
                if e.is_negative() {
                    Ok(Reduced::Infinity)
                } else if e.is_zero() {
                    Ok(Reduced::Finite(self.leading().unwrap().1))
                } else {
                    Ok(Reduced::Finite(Complex64::ZERO))
                }
            }
            Valuation::ExactZero => Ok(Reduced::Finite(Complex64::ZERO)),
            Valuation::ZeroToTrunc(t) => {
                if t > Exp::zero() {
                    Ok(Reduced::Finite(Complex64::ZERO))
                } else {
                    Err(Error::IndeterminateOrder {
                        what: "reduction of a series with indeterminate sign of ord".into(),
                    })
                }
            }
        }
    }

    /// Conjugate the series by `t^{1/mu} -> zeta^k t^{1/mu}` where
    /// `zeta = exp(2 pi i / mu)`: the coefficient at `t^e` picks up the
    /// factor `exp(2 pi i k e)`.
    pub fn twist(&self, k: i64, mu: i64) -> Self {
        let mut out = self.clone();
        for (key, c) in out.terms.iter_mut() {
            let e = exp(*key, out.ram);
            let angle = 2.0 * std::f64::consts::PI * (k as f64)
                * (*e.numer() as f64 / *e.denom() as f64);
            // Exact for the rational multiples of 2*pi that occur here up
            // to f64 rounding; mu is tiny.
            let _ = mu;
            *c *= Complex64::from_polar(1.0, angle);
        }
        out
    }

    /// Termwise comparison of the overlap below both truncation bounds.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let bound = Trunc::min_of(self.trunc, other.trunc);
        let ram = self.common_ram(other);
        let a = self.rescaled(ram);
        let b = other.rescaled(ram);
        let keys: std::collections::BTreeSet<i64> =
            a.keys().chain(b.keys()).copied().collect();
        for k in keys {
            if !bound.admits(exp(k, ram)) {
                continue;
            }
            let ca = a.get(&k).copied().unwrap_or(Complex64::ZERO);
            let cb = b.get(&k).copied().unwrap_or(Complex64::ZERO);
            if (ca - cb).norm() > tol {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (e, c)) in self.iter_terms().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "({:.6}{:+.6}i)t^{}", c.re, c.im, e)?;
            }
        }
        match self.trunc {
            Trunc::Exact => Ok(()),
            Trunc::At(t) => write!(f, " + O(t^{t})"),
        }
    }
}

/// Spherical distance between two finite series points, in order form:
/// `ord(z-w)` when both are integral, `ord(1/z - 1/w)` when both are
/// non-integral, zero across hemispheres.
pub fn spherical_ord(z: &PuiseuxSeries, w: &PuiseuxSeries, ctx: &Ctx) -> Result<Valuation> {
    let zn = z
        .ord()
        .is_nonnegative()
        .ok_or_else(|| Error::IndeterminateOrder {
            what: "spherical distance: hemisphere of first argument".into(),
        })?;
    let wn = w
        .ord()
        .is_nonnegative()
        .ok_or_else(|| Error::IndeterminateOrder {
            what: "spherical distance: hemisphere of second argument".into(),
        })?;
    match (zn, wn) {
        (true, true) => Ok(z.sub(w, ctx).ord()),
        (false, false) => {
            let iz = z.inverse(ctx)?;
            let iw = w.inverse(ctx)?;
            Ok(iz.sub(&iw, ctx).ord())
        }
        _ => Ok(Valuation::Finite(Exp::zero())),
    }
}

/// Serialized form: `{ram, terms: [[k, re, im], ...], trunc}`.
#[derive(Serialize, Deserialize)]
pub struct SeriesRepr {
    pub ram: i64,
    pub terms: Vec<(i64, f64, f64)>,
    pub trunc: Option<(i64, i64)>,
}

impl From<&PuiseuxSeries> for SeriesRepr {
    fn from(s: &PuiseuxSeries) -> Self {
        SeriesRepr {
            ram: s.ram,
            terms: s.terms.iter().map(|(k, c)| (*k, c.re, c.im)).collect(),
            trunc: s.trunc.bound().map(|t| (*t.numer(), *t.denom())),
        }
    }
}

impl From<&SeriesRepr> for PuiseuxSeries {
    fn from(r: &SeriesRepr) -> Self {
        let trunc = match r.trunc {
            None => Trunc::Exact,
            Some((n, d)) => Trunc::At(exp(n, d)),
        };
        PuiseuxSeries {
            ram: r.ram,
            terms: r
                .terms
                .iter()
                .map(|(k, re, im)| (*k, Complex64::new(*re, *im)))
                .collect(),
            trunc,
        }
        .canonical()
    }
}

impl Serialize for PuiseuxSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PuiseuxSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        Ok(PuiseuxSeries::from(&r))
    }
}
