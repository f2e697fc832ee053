//! Exact evaluation of the counting quantities attached to a period `p`:
//! the quadratic-family center count `eta_prime`, the limb counts `nu2`,
//! `nu2_prime`, the correction sum `A(p)`, the bitransitive-center count
//! `eta_II` and the Euler characteristic derived from it.
//!
//! Everything here is pure integer/rational arithmetic with
//! arbitrary-precision backing; `2^p` exceeds 64 bits well inside the
//! tested range (p <= 64).
//!
//! The general-`q` limb count `nu_q(k)` is stated in the source material
//! with a residue clause that admits more than one reading, and the two
//! published routes to `eta_II` (closed inversion formula vs. the divisor
//! recursion) do not agree under any reading. Rather than baking one
//! reading in, every interpretation lives behind [`NuVariant`] and
//! [`eta_II`] returns the value of both routes together with an agreement
//! flag. Non-integrality of a reported value is a signal, not an error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// How the residue `r` in the piecewise formula for `nu_q(k)` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NuVariant {
    /// `r = k mod q`, `0 <= r < q`, piecewise branches as displayed.
    KMod,
    /// `r = p mod q`, `0 <= r < q`, the literal reading.
    PMod,
    /// `r` in `1..=q` with `k = r mod q`; single branch
    /// `(2^k - 2^r) / (2 (2^q - 1))`. This is the unique reading that
    /// reproduces the displayed closed form of `nu2` for both parities.
    Nu2ClosedForm,
    /// The interpretation frozen by calibrating against the enumeration
    /// oracle at small periods. Calibration is degenerate: `PMod` matches
    /// the hand enumeration at p = 3 and `Nu2ClosedForm` matches the
    /// numeric enumeration at p = 4; no reading matches both. We resolve
    /// to `PMod` (the p = 3 oracle is exact by hand) and keep the
    /// disagreement visible in every report.
    OracleCalibrated,
}

impl NuVariant {
    /// All raw interpretations, in canonical report order.
    pub const RAW: [NuVariant; 3] = [NuVariant::KMod, NuVariant::PMod, NuVariant::Nu2ClosedForm];

    /// Resolve `OracleCalibrated` to the frozen raw interpretation.
    pub fn resolve(self) -> NuVariant {
        match self {
            NuVariant::OracleCalibrated => NuVariant::PMod,
            v => v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NuVariant::KMod => "k-mod",
            NuVariant::PMod => "p-mod",
            NuVariant::Nu2ClosedForm => "nu2-closed-form",
            NuVariant::OracleCalibrated => "oracle-calibrated",
        }
    }
}

/// All counting quantities for one period.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountTable {
    pub p: u32,
    pub eta_prime: BigInt,
    /// Defined for p >= 3 only.
    pub nu2: Option<BigInt>,
    pub nu2_prime: Option<BigInt>,
    /// Degree of the projective closure; equals `nu2_prime` for p >= 3.
    pub degree: Option<BigInt>,
    pub a_p: Option<BigRational>,
    /// Both computation routes for `eta_II`, p >= 3 only.
    pub eta_ii: Option<EtaII>,
    /// `chi(S_p)`; from the inversion-route `eta_II` for p >= 3.
    pub chi: BigRational,
    pub variant: NuVariant,
}

/// The two routes to the bitransitive-center count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EtaII {
    /// Closed inversion formula
    /// `(p nu2'(p) + sum_{d|p, p/d>=3} d mu(d) A(p/d)) / 2`.
    pub by_inversion: BigRational,
    /// Divisor recursion
    /// `eta_II(p)/p = nu2(p)/2 - A(p)/(2p) - sum_{3<=d|p, d<p} eta_II(d)/d`,
    /// solved bottom-up with the same variant.
    pub by_recursion: BigRational,
    pub agree: bool,
}

impl EtaII {
    /// Integrality of the reported values; non-integrality flags a broken
    /// interpretation of `nu_q`.
    pub fn integral(&self) -> bool {
        self.by_inversion.is_integer() && self.by_recursion.is_integer()
    }
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Divisors of `n` in increasing order, by trial division.
pub fn divisors(n: u32) -> Vec<u32> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Mobius function.
pub fn mobius(n: u32) -> i64 {
    assert!(n >= 1);
    let mut m = n;
    let mut primes = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if m > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient.
pub fn totient(n: u32) -> u64 {
    assert!(n >= 1);
    let mut m = n as u64;
    let mut result = m;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Number of quadratic-family parameters whose critical point has exact
/// period `p`: `eta'(p) = (1/2) sum_{d|p} mu(d) 2^{p/d}`.
pub fn eta_prime(p: u32) -> BigInt {
    assert!(p >= 1);
    let mut s = BigInt::zero();
    for d in divisors(p) {
        s += big(mobius(d)) * pow2(p / d);
    }
    debug_assert!((&s % big(2)).is_zero());
    s / big(2)
}

/// Closed-form `nu2(p)`: `(2^p - 2)/6` for odd `p`, `(2^p - 4)/6` for even.
pub fn nu2(p: u32) -> BigInt {
    assert!(p >= 3, "nu2 is defined for p >= 3");
    let sub = if p % 2 == 1 { 2 } else { 4 };
    let num = pow2(p) - big(sub);
    debug_assert!((&num % big(6)).is_zero());
    num / big(6)
}

/// `nu2` extended by the same closed form to p = 1, 2 (both zero), used
/// by the divisor recursions.
fn nu2_ext(p: u32) -> BigInt {
    if p < 3 {
        BigInt::zero()
    } else {
        nu2(p)
    }
}

/// `nu2'(p)`, the exact-period part of `nu2`: inverts
/// `nu2(p) = sum_{3<=d|p} nu2'(d)` recursively. Equals `eta'(p)/3`.
pub fn nu2_prime(p: u32) -> BigInt {
    assert!(p >= 3);
    let mut s = nu2(p);
    for d in divisors(p) {
        if d >= 3 && d < p {
            s -= nu2_prime(d);
        }
    }
    s
}

/// General-`q` limb count `nu_q(k)` under the chosen residue reading.
/// May return non-integers; callers report rather than assert them away.
pub fn nu_q_k(q: u32, k: u32, p: u32, variant: NuVariant) -> BigRational {
    assert!(q >= 2 && k >= 1);
    let den = pow2(q) - BigInt::one();
    let half = BigRational::new(BigInt::one(), big(2));
    match variant.resolve() {
        NuVariant::KMod => {
            let r = k % q;
            if r != 0 {
                half * BigRational::new(pow2(k) - pow2(r), den)
            } else {
                half.clone() + half * BigRational::new(pow2(k) - BigInt::one(), den)
            }
        }
        NuVariant::PMod => {
            let r = p % q;
            if r != 0 {
                half * BigRational::new(pow2(k) - pow2(r), den)
            } else {
                half.clone() + half * BigRational::new(pow2(k) - BigInt::one(), den)
            }
        }
        NuVariant::Nu2ClosedForm => {
            // r in 1..=q with k = r mod q; single branch.
            let r = ((k - 1) % q) + 1;
            half * BigRational::new(pow2(k) - pow2(r), den)
        }
        NuVariant::OracleCalibrated => unreachable!("resolved above"),
    }
}

/// The correction sum
/// `A(p) = p sum_{q=2}^{p-1} phi(q) sum_{k=1}^{p-1} nu_q(k) (2^{p-k-1} - nu_q(p-k))`.
/// Empty for p <= 2 (A(1) = A(2) = 0).
pub fn a_of_p(p: u32, variant: NuVariant) -> BigRational {
    if p <= 2 {
        return BigRational::zero();
    }
    let mut total = BigRational::zero();
    for q in 2..p {
        let mut inner = BigRational::zero();
        for k in 1..p {
            let nk = nu_q_k(q, k, p, variant);
            let npk = nu_q_k(q, p - k, p, variant);
            inner += nk * (rat(pow2(p - k - 1)) - npk);
        }
        total += rat(big(totient(q) as i64)) * inner;
    }
    rat(big(p as i64)) * total
}

/// Both routes to `eta_II(p)` under one `nu_q` interpretation.
///
/// Inversion route: the closed formula as displayed. Recursion route:
/// peel proper divisors off the divisor identity
/// `sum_{3<=d|p} eta_II(d)/d = nu2(p)/2 - A(p)/(2p)`. Disagreement is
/// data; the flag makes it first-class.
pub fn eta_ii(p: u32, variant: NuVariant) -> EtaII {
    assert!(p >= 3);
    let by_inversion = eta_ii_inversion(p, variant);
    let by_recursion = eta_ii_recursion(p, variant);
    let agree = by_inversion == by_recursion;
    EtaII {
        by_inversion,
        by_recursion,
        agree,
    }
}

fn eta_ii_inversion(p: u32, variant: NuVariant) -> BigRational {
    let mut s = rat(big(p as i64) * nu2_prime(p));
    for d in divisors(p) {
        let pd = p / d;
        if pd >= 3 {
            s += rat(big(d as i64) * big(mobius(d))) * a_of_p(pd, variant);
        }
    }
    s / rat(big(2))
}

fn eta_ii_recursion(p: u32, variant: NuVariant) -> BigRational {
    // eta_II(p)/p = F(p) - sum over proper divisors, F(p) = nu2(p)/2 - A(p)/(2p)
    let mut f = rat(nu2_ext(p)) / rat(big(2))
        - a_of_p(p, variant) / rat(big(2 * p as i64));
    for d in divisors(p) {
        if d >= 3 && d < p {
            f -= eta_ii_recursion(d, variant) / rat(big(d as i64));
        }
    }
    f * rat(big(p as i64))
}

/// `chi(S_p)`: `2 eta'(p)/3 - eta_II` for p >= 3; the two small curves
/// are a plane and a punctured plane, so chi(S_1) = 1 and chi(S_2) = 0.
pub fn euler_char(p: u32, eta_ii_value: &BigRational) -> BigRational {
    match p {
        1 => rat(BigInt::one()),
        2 => BigRational::zero(),
        _ => rat(big(2) * eta_prime(p)) / rat(big(3)) - eta_ii_value.clone(),
    }
}

/// Genus under the connectivity assumption: `g = (2 - (chi + N_p)) / 2`.
/// Returns the value plus a consistency flag (integral and nonnegative).
pub fn genus_if_connected(chi: &BigRational, n_punctures: u32) -> (BigRational, bool) {
    let g = (rat(big(2)) - (chi + rat(big(n_punctures as i64)))) / rat(big(2));
    let ok = g.is_integer() && !g.is_negative();
    (g, ok)
}

/// Assemble the full table for one period under one interpretation.
pub fn count_table(p: u32, variant: NuVariant) -> CountTable {
    assert!(p >= 1);
    let eta = eta_prime(p);
    if p < 3 {
        let chi = euler_char(p, &BigRational::zero());
        return CountTable {
            p,
            eta_prime: eta,
            nu2: None,
            nu2_prime: None,
            degree: None,
            a_p: None,
            eta_ii: None,
            chi,
            variant,
        };
    }
    let e2 = eta_ii(p, variant);
    let chi = euler_char(p, &e2.by_inversion);
    let np = nu2_prime(p);
    CountTable {
        p,
        eta_prime: eta,
        nu2: Some(nu2(p)),
        nu2_prime: Some(np.clone()),
        degree: Some(np),
        a_p: Some(a_of_p(p, variant)),
        eta_ii: Some(e2),
        chi,
        variant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(big(n), big(d))
    }

    #[test]
    fn mobius_small() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(2), -1);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn totient_small() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(2), 1);
        assert_eq!(totient(3), 2);
        assert_eq!(totient(4), 2);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn eta_prime_values() {
        assert_eq!(eta_prime(1), big(1));
        assert_eq!(eta_prime(2), big(1));
        assert_eq!(eta_prime(3), big(3));
        assert_eq!(eta_prime(4), big(6));
        assert_eq!(eta_prime(5), big(15));
        assert_eq!(eta_prime(6), big(27));
    }

    #[test]
    fn eta_prime_divisor_sum_to_64() {
        for p in 1..=64u32 {
            let mut s = BigInt::zero();
            for d in divisors(p) {
                s += eta_prime(d);
            }
            assert_eq!(s, pow2(p - 1), "divisor sum fails at p={p}");
        }
    }

    #[test]
    fn nu2_values_and_recursion() {
        assert_eq!(nu2(3), big(1));
        assert_eq!(nu2(4), big(2));
        assert_eq!(nu2(5), big(5));
        assert_eq!(nu2(6), big(10));
        assert_eq!(nu2(8), big(42));
        assert_eq!(nu2_prime(3), big(1));
        assert_eq!(nu2_prime(6), big(9));
        assert_eq!(nu2_prime(8), big(40));
        for p in 3..=64u32 {
            assert_eq!(eta_prime(p), big(3) * nu2_prime(p), "p={p}");
            let mut s = BigInt::zero();
            for d in divisors(p) {
                if d >= 3 {
                    s += nu2_prime(d);
                }
            }
            assert_eq!(s, nu2(p), "nu2 divisor sum fails at p={p}");
            assert!(!eta_prime(p).is_negative());
            assert!(!nu2(p).is_negative());
        }
    }

    #[test]
    fn nu_q_k_examples() {
        assert_eq!(nu_q_k(2, 3, 3, NuVariant::KMod), r(1, 1));
        assert_eq!(nu_q_k(2, 2, 2, NuVariant::KMod), r(1, 1));
        assert_eq!(nu_q_k(2, 1, 7, NuVariant::KMod), r(0, 1));
        // The literal reading disagrees with the closed form at even k:
        // closed form (2^k-4)/6 vs general r=0 branch (2^k+2)/6.
        assert_eq!(nu_q_k(2, 2, 4, NuVariant::PMod), r(1, 1));
        assert_eq!(nu_q_k(2, 2, 4, NuVariant::Nu2ClosedForm), r(0, 1));
        // Closed-form reading reproduces nu2 at every parity.
        for k in 3..=12u32 {
            assert_eq!(
                nu_q_k(2, k, 2 * k + 1, NuVariant::Nu2ClosedForm),
                rat(nu2(k)),
                "k={k}"
            );
        }
    }

    #[test]
    fn a_of_p_hand_values() {
        // p=3: single q=2 block; worked by hand for each reading.
        assert_eq!(a_of_p(3, NuVariant::KMod), r(3, 1));
        assert_eq!(a_of_p(3, NuVariant::PMod), r(1, 1));
        assert_eq!(a_of_p(3, NuVariant::Nu2ClosedForm), r(0, 1));
        // p=4 hand values.
        assert_eq!(a_of_p(4, NuVariant::KMod), r(16, 1));
        assert_eq!(a_of_p(4, NuVariant::Nu2ClosedForm), r(4, 1));
        assert_eq!(a_of_p(4, NuVariant::PMod), r(7936, 441));
        assert_eq!(a_of_p(1, NuVariant::KMod), r(0, 1));
        assert_eq!(a_of_p(2, NuVariant::KMod), r(0, 1));
    }

    #[test]
    fn eta_ii_p3_routes() {
        // Oracle (hand enumeration): eta_II(3) = 2. Only the literal
        // p-mod reading reaches it, and only through the inversion route.
        let e = eta_ii(3, NuVariant::PMod);
        assert_eq!(e.by_inversion, r(2, 1));
        assert_eq!(e.by_recursion, r(1, 1));
        assert!(!e.agree);

        let e = eta_ii(3, NuVariant::KMod);
        assert_eq!(e.by_inversion, r(3, 1));
        assert_eq!(e.by_recursion, r(0, 1));

        // The closed-form reading is the only one whose two routes agree
        // at p=3, and both land on a non-integer: the typo detector.
        let e = eta_ii(3, NuVariant::Nu2ClosedForm);
        assert_eq!(e.by_inversion, r(3, 2));
        assert_eq!(e.by_recursion, r(3, 2));
        assert!(e.agree);
        assert!(!e.integral());
    }

    #[test]
    fn eta_ii_p4_routes() {
        // Numeric enumeration oracle: eta_II(4) = 6 (see the acceptance
        // suite). The closed-form reading reaches it via inversion.
        let e = eta_ii(4, NuVariant::Nu2ClosedForm);
        assert_eq!(e.by_inversion, r(6, 1));
        assert_eq!(e.by_recursion, r(2, 1));
        let e = eta_ii(4, NuVariant::KMod);
        assert_eq!(e.by_inversion, r(12, 1));
        assert_eq!(e.by_recursion, r(-4, 1));
        let e = eta_ii(4, NuVariant::PMod);
        assert_eq!(e.by_inversion, r(5732, 441));
        assert!(!e.integral());
    }

    /// Frozen agreement pattern of the two routes, 3 <= p <= 20. The two
    /// published routes differ by the sign of the A-terms, so generic
    /// agreement would force A = 0; the only systematic agreements are
    /// the closed-form reading at p with A(p) = 0 and no proper divisors
    /// >= 3 contributing.
    #[test]
    fn eta_ii_route_agreement_pattern() {
        for p in 3..=20u32 {
            for v in NuVariant::RAW {
                let e = eta_ii(p, v);
                assert_eq!(e.agree, e.by_inversion == e.by_recursion);
                let a_terms_cancel = {
                    let mut s = BigRational::zero();
                    for d in divisors(p) {
                        if p / d >= 3 {
                            s += rat(big(d as i64) * big(mobius(d))) * a_of_p(p / d, v);
                        }
                    }
                    s.is_zero()
                };
                assert_eq!(e.agree, a_terms_cancel, "p={p} variant={v:?}");
            }
        }
    }

    #[test]
    fn euler_char_small() {
        assert_eq!(euler_char(1, &BigRational::zero()), r(1, 1));
        assert_eq!(euler_char(2, &BigRational::zero()), r(0, 1));
        assert_eq!(euler_char(3, &r(2, 1)), r(0, 1));
        assert_eq!(euler_char(4, &r(6, 1)), r(-2, 1));
        // Direct substitution shape: chi(S_4) = 4 - e.
        let e = r(5, 1);
        assert_eq!(euler_char(4, &e), r(4, 1) - e);
    }

    #[test]
    fn genus_cases() {
        let (g, ok) = genus_if_connected(&r(0, 1), 2);
        assert_eq!(g, r(0, 1));
        assert!(ok);
        let (g, ok) = genus_if_connected(&r(-2, 1), 4);
        assert_eq!(g, r(0, 1));
        assert!(ok);
        let (_, ok) = genus_if_connected(&r(1, 2), 1);
        assert!(!ok);
    }

    #[test]
    fn count_table_assembly() {
        let t = count_table(6, NuVariant::OracleCalibrated);
        assert_eq!(t.eta_prime, big(27));
        assert_eq!(t.nu2_prime, Some(big(9)));
        assert_eq!(t.degree, Some(big(9)));
        let t1 = count_table(1, NuVariant::KMod);
        assert_eq!(t1.chi, r(1, 1));
        assert!(t1.eta_ii.is_none());
        let t2 = count_table(2, NuVariant::KMod);
        assert_eq!(t2.chi, r(0, 1));
    }
}
