//! Modular arithmetic on machine words, primitive roots, discrete logarithms,
//! and the projection of (Z/q)* onto its quotient of order p.
//!
//! Every modulus handled here is below 2^32, so products of two residues fit
//! in a `u64`. Individual discrete logarithms depend on the chosen primitive
//! root; only ratios of logarithms of two classes are canonical.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this modulus `dlog` scans powers of the generator; above it,
/// baby-step/giant-step is used.
pub const DLOG_SCAN_LIMIT: u64 = 10_000;

/// An element of Z/m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let value = value.rem_euclid(modulus as i64) as u64;
        Residue { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        assert_eq!(self.modulus, other.modulus);
        Residue {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inverse(&self) -> Result<Residue> {
        Ok(Residue {
            value: inv_mod(self.value, self.modulus)?,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// The image of an element of (Z/q)* in the order-p quotient, recorded as
/// its discrete logarithm reduced mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLogClass {
    pub exponent: u64,
    pub p: u64,
    pub q: u64,
    pub generator: Residue,
}

impl PLogClass {
    pub fn is_zero(&self) -> bool {
        self.exponent == 0
    }

    /// `self / other` in F_p, or `None` when `other` is the trivial class.
    pub fn ratio(&self, other: &PLogClass) -> Option<u64> {
        assert_eq!((self.p, self.q), (other.p, other.q));
        assert_eq!(self.generator, other.generator, "classes use different generators");
        if other.exponent == 0 {
            return None;
        }
        let inv = inv_mod(other.exponent, self.p).ok()?;
        Some(mul_mod(self.exponent, inv, self.p))
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

pub fn inv_mod(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(0);
    }
    let (g, s, _) = xgcd((a % m) as i64, m as i64);
    if g != 1 {
        return Err(Error::NonInvertible { value: a, modulus: m });
    }
    Ok(s.rem_euclid(m as i64) as u64)
}

/// `base^exp mod modulus`; negative exponents go through the modular inverse.
pub fn pow_mod(base: u64, exp: i64, modulus: u64) -> Result<Residue> {
    assert!(modulus >= 1);
    let b = if exp < 0 { inv_mod(base, modulus)? } else { base % modulus };
    Ok(Residue {
        value: pow_u(b, exp.unsigned_abs(), modulus),
        modulus,
    })
}

pub(crate) fn pow_u(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_u(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Kronecker symbol (a / n) for odd prime n.
pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_u(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (d / n) for a discriminant d and n > 0, including n = 2.
pub fn kronecker(d: i64, n: u64) -> i64 {
    let mut result = 1i64;
    let mut n = n;
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    for (p, e) in factor(n) {
        let l = legendre(d, p);
        if e % 2 == 1 {
            result *= l;
        } else if l == 0 {
            return 0;
        }
    }
    result
}

fn is_generator(g: u64, q: u64, prime_factors: &[u64]) -> bool {
    g % q != 0 && prime_factors.iter().all(|&f| pow_u(g, (q - 1) / f, q) != 1)
}

/// Primitive roots modulo the prime `q`, in increasing order.
pub fn primitive_roots(q: u64) -> impl Iterator<Item = u64> {
    let factors: Vec<u64> = factor(q - 1).into_iter().map(|(f, _)| f).collect();
    (1..q.max(2)).filter(move |&g| {
        if q == 2 {
            g == 1
        } else {
            is_generator(g, q, &factors)
        }
    })
}

/// Smallest positive primitive root modulo the prime `q`.
pub fn primitive_root(q: u64) -> Result<Residue> {
    if !is_prime(q) {
        return Err(Error::InvalidPrime(q));
    }
    let g = primitive_roots(q).next().expect("prime moduli have primitive roots");
    Ok(Residue::new(g as i64, q))
}

/// Discrete logarithm of `x` to the smallest primitive root mod `q`,
/// as an integer in `[0, q - 1)`.
pub fn dlog(q: u64, x: u64) -> Result<u64> {
    let g = primitive_root(q)?;
    dlog_base(q, g.value(), x)
}

/// Discrete logarithm of `x` to an arbitrary generator `g` of (Z/q)*.
pub fn dlog_base(q: u64, g: u64, x: u64) -> Result<u64> {
    let x = x % q;
    if x == 0 {
        return Err(Error::ZeroArgument { modulus: q });
    }
    let order = q - 1;
    if q < DLOG_SCAN_LIMIT {
        let mut acc = 1 % q;
        for e in 0..order {
            if acc == x {
                return Ok(e);
            }
            acc = mul_mod(acc, g, q);
        }
        unreachable!("{g} does not generate (Z/{q})*");
    }
    baby_step_giant_step(q, g, x)
}

fn baby_step_giant_step(q: u64, g: u64, x: u64) -> Result<u64> {
    let order = q - 1;
    let m = (order as f64).sqrt().ceil() as u64;
    let mut table = HashMap::with_capacity(m as usize);
    let mut acc = 1u64;
    for j in 0..m {
        table.entry(acc).or_insert(j);
        acc = mul_mod(acc, g, q);
    }
    // giant step: multiply by g^{-m}
    let factor = pow_mod(g, -(m as i64), q)?.value();
    let mut gamma = x;
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            return Ok((i * m + j) % order);
        }
        gamma = mul_mod(gamma, factor, q);
    }
    unreachable!("{g} does not generate (Z/{q})*");
}

/// Projection of `x` to F_p<1>, the order-p quotient of (Z/q)*.
pub fn plog(q: u64, p: u64, x: u64) -> Result<PLogClass> {
    let g = primitive_root(q)?;
    plog_with_generator(q, p, x, g)
}

/// As [`plog`], but relative to a caller-chosen primitive root.
pub fn plog_with_generator(q: u64, p: u64, x: u64, generator: Residue) -> Result<PLogClass> {
    if q < 3 || (q - 1) % p != 0 {
        return Err(Error::IncompatiblePrimes { p, q });
    }
    let e = dlog_base(q, generator.value(), x)?;
    Ok(PLogClass {
        exponent: e % p,
        p,
        q,
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(2, 10, 11).unwrap().value(), 1);
        assert_eq!(pow_mod(4, -1, 11).unwrap().value(), 3);
        assert_eq!(pow_mod(2, 16, 11).unwrap().value(), 9);
        assert!(matches!(pow_mod(4, -1, 12), Err(Error::NonInvertible { .. })));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(11).unwrap().value(), 2);
        assert_eq!(primitive_root(23).unwrap().value(), 5);
        assert_eq!(primitive_root(3).unwrap().value(), 2);
        assert!(primitive_root(12).is_err());
    }

    #[test]
    fn primitive_root_matches_brute_force_order() {
        for q in primes_up_to(300).into_iter().filter(|&q| q > 2) {
            let brute = (2..q)
                .find(|&g| {
                    let mut acc = g;
                    let mut ord = 1;
                    while acc != 1 {
                        acc = acc * g % q;
                        ord += 1;
                    }
                    ord == q - 1
                })
                .unwrap();
            assert_eq!(primitive_root(q).unwrap().value(), brute, "q = {q}");
        }
    }

    #[test]
    fn dlog_examples() {
        assert_eq!(dlog(11, 1).unwrap(), 0);
        assert_eq!(dlog(11, 3).unwrap(), 8);
        assert_eq!(dlog(11, 6).unwrap(), 9);
        assert!(matches!(dlog(11, 0), Err(Error::ZeroArgument { .. })));
        assert!(matches!(dlog(11, 22), Err(Error::ZeroArgument { .. })));
    }

    #[test]
    fn plog_examples() {
        assert_eq!(plog(11, 5, 1).unwrap().exponent, 0);
        assert_eq!(plog(11, 5, 6).unwrap().exponent, 4);
        assert_eq!(plog(11, 5, 3).unwrap().exponent, 3);
        assert!(matches!(plog(11, 7, 3), Err(Error::IncompatiblePrimes { .. })));
    }

    #[test]
    fn generator_power_inverts_dlog_exhaustively() {
        for q in primes_up_to(200).into_iter().filter(|&q| q > 2) {
            let g = primitive_root(q).unwrap().value();
            for x in 1..q {
                let e = dlog(q, x).unwrap();
                assert_eq!(pow_u(g, e, q), x);
            }
        }
    }

    #[test]
    fn baby_step_giant_step_agrees_with_scan() {
        // 1_000_003 is prime; check a few logs above the scan threshold
        let q = 1_000_003;
        let g = primitive_root(q).unwrap().value();
        for e in [0u64, 1, 17, 999_999, 123_456] {
            let x = pow_u(g, e, q);
            assert_eq!(dlog(q, x).unwrap(), e);
        }
    }

    #[test]
    fn kronecker_matches_legendre_for_odd_primes() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for d in [-23i64, -31, -4, 5] {
                assert_eq!(kronecker(d, p), legendre(d, p));
            }
        }
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(-31, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
    }

    proptest! {
        #[test]
        fn plog_is_multiplicative(x in 1u64..139, y in 1u64..139) {
            let (q, p) = (139, 23);
            let a = plog(q, p, x).unwrap().exponent;
            let b = plog(q, p, y).unwrap().exponent;
            let ab = plog(q, p, x * y % q).unwrap().exponent;
            prop_assert_eq!(ab, (a + b) % p);
        }

        #[test]
        fn plog_kills_pth_powers(x in 1u64..151) {
            let (q, p) = (151, 5);
            let xp = pow_u(x, p, q);
            prop_assert_eq!(plog(q, p, xp).unwrap().exponent, 0);
        }

        #[test]
        fn log_ratio_is_generator_independent(x in 2u64..149, y in 2u64..149) {
            let (q, p) = (149, 37);
            let mut roots = primitive_roots(q);
            let g1 = Residue::new(roots.next().unwrap() as i64, q);
            let g2 = Residue::new(roots.next().unwrap() as i64, q);
            let a1 = plog_with_generator(q, p, x, g1).unwrap();
            let b1 = plog_with_generator(q, p, y, g1).unwrap();
            let a2 = plog_with_generator(q, p, x, g2).unwrap();
            let b2 = plog_with_generator(q, p, y, g2).unwrap();
            prop_assert_eq!(a1.ratio(&b1), a2.ratio(&b2));
        }
    }
}
