//! Truncated q-expansions over Z or F_p, and the concrete forms the pipeline
//! needs: eta products, theta series of binary quadratic forms, the
//! weight-one forms of discriminant -23 and -31, and the weight-two
//! Eisenstein series of prime level reduced mod p.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::inv_mod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffRing {
    Integer,
    ModP(u64),
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integer => write!(f, "Z"),
            CoeffRing::ModP(p) => write!(f, "F_{p}"),
        }
    }
}

/// `a_0 + a_1 q + ... + a_{prec-1} q^{prec-1} + O(q^prec)`.
///
/// Mod-p coefficients are kept reduced into `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    ring: CoeffRing,
    coeffs: Vec<i64>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        TruncatedSeries { ring: CoeffRing::Integer, coeffs }
    }

    pub fn from_coeffs_mod(coeffs: Vec<i64>, p: u64) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c.rem_euclid(p as i64)).collect();
        TruncatedSeries { ring: CoeffRing::ModP(p), coeffs }
    }

    pub fn zero(ring: CoeffRing, prec: usize) -> Self {
        TruncatedSeries { ring, coeffs: vec![0; prec] }
    }

    pub fn one(ring: CoeffRing, prec: usize) -> Self {
        let mut s = Self::zero(ring, prec);
        if prec > 0 {
            s.coeffs[0] = 1;
        }
        s
    }

    /// The monomial `q^k` to precision `prec`.
    pub fn monomial(ring: CoeffRing, k: usize, prec: usize) -> Self {
        let mut s = Self::zero(ring, prec);
        if k < prec {
            s.coeffs[k] = 1;
        }
        s
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficient of `q^n`; panics past the precision.
    pub fn coeff(&self, n: usize) -> i64 {
        self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn normalize(&mut self) {
        if let CoeffRing::ModP(p) = self.ring {
            for c in &mut self.coeffs {
                *c = c.rem_euclid(p as i64);
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(prec);
        s
    }

    /// Reduction of an integral series mod p (idempotent on F_p series with the same p).
    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        match self.ring {
            CoeffRing::Integer => Ok(Self::from_coeffs_mod(self.coeffs.clone(), p)),
            CoeffRing::ModP(r) if r == p => Ok(self.clone()),
            other => Err(Error::RingMismatch(other.to_string(), CoeffRing::ModP(p).to_string())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.prec().min(other.prec());
        let mut s = TruncatedSeries {
            ring: self.ring,
            coeffs: (0..n).map(|i| self.coeffs[i] + other.coeffs[i]).collect(),
        };
        s.normalize();
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.prec().min(other.prec());
        let mut s = TruncatedSeries {
            ring: self.ring,
            coeffs: (0..n).map(|i| self.coeffs[i] - other.coeffs[i]).collect(),
        };
        s.normalize();
        Ok(s)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut s = TruncatedSeries {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|&c| c.checked_mul(k).expect("coefficient overflow")).collect(),
        };
        s.normalize();
        s
    }

    /// Cauchy product, truncated to the smaller precision.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.prec().min(other.prec());
        let mut out = vec![0i128; n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a as i128 * b as i128;
            }
            if let CoeffRing::ModP(p) = self.ring {
                // keep the accumulator bounded
                if i % 1024 == 1023 {
                    for c in out.iter_mut() {
                        *c %= p as i128;
                    }
                }
            }
        }
        let coeffs = match self.ring {
            CoeffRing::Integer => out
                .into_iter()
                .map(|c| i64::try_from(c).expect("coefficient overflow"))
                .collect(),
            CoeffRing::ModP(p) => out.into_iter().map(|c| c.rem_euclid(p as i128) as i64).collect(),
        };
        Ok(TruncatedSeries { ring: self.ring, coeffs })
    }

    /// Multiplication by `q^k` (precision unchanged).
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![0; self.prec()];
        for i in k..self.prec() {
            coeffs[i] = self.coeffs[i - k];
        }
        TruncatedSeries { ring: self.ring, coeffs }
    }

    /// Exact division by an integer that divides every coefficient.
    pub fn div_exact(&self, k: i64) -> std::result::Result<Self, usize> {
        match self.ring {
            CoeffRing::Integer => {
                let mut coeffs = Vec::with_capacity(self.prec());
                for (i, &c) in self.coeffs.iter().enumerate() {
                    if c % k != 0 {
                        return Err(i);
                    }
                    coeffs.push(c / k);
                }
                Ok(TruncatedSeries { ring: self.ring, coeffs })
            }
            CoeffRing::ModP(p) => {
                let inv = inv_mod(k.rem_euclid(p as i64) as u64, p).map_err(|_| 0usize)? as i64;
                Ok(self.scale(inv))
            }
        }
    }
}

/// `prod_{n >= 1} (1 - q^{dn})` via Euler's pentagonal number theorem.
pub fn eta_factor(d: usize, prec: usize) -> TruncatedSeries {
    assert!(d >= 1);
    let mut coeffs = vec![0i64; prec];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in [k, -k] {
            let pent = (kk * (3 * kk - 1) / 2) as usize * d;
            if pent < prec {
                any = true;
                if kk == k || k != 0 {
                    coeffs[pent] = if k % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// `sum_{(x, y) in Z^2} q^{a x^2 + b x y + c y^2}` for a positive definite form.
pub fn theta_bqf(a: i64, b: i64, c: i64, prec: usize) -> Result<TruncatedSeries> {
    let det = 4 * a * c - b * b;
    if a <= 0 || det <= 0 {
        return Err(Error::NotPositiveDefinite { a, b, c });
    }
    let n = prec as i64;
    // Q(x, y) >= det x^2 / (4c) and >= det y^2 / (4a)
    let xmax = ((4 * c * n) as f64 / det as f64).sqrt().ceil() as i64 + 1;
    let ymax = ((4 * a * n) as f64 / det as f64).sqrt().ceil() as i64 + 1;
    let mut coeffs = vec![0i64; prec];
    for x in -xmax..=xmax {
        for y in -ymax..=ymax {
            let v = a * x * x + b * x * y + c * y * y;
            if v < n {
                coeffs[v as usize] += 1;
            }
        }
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// `V_m`: `q -> q^m`, precision preserved.
pub fn v_operator(s: &TruncatedSeries, m: usize) -> TruncatedSeries {
    assert!(m >= 1);
    let mut out = TruncatedSeries::zero(s.ring(), s.prec());
    for (i, &c) in s.coeffs.iter().enumerate() {
        let j = i * m;
        if j >= s.prec() {
            break;
        }
        out.coeffs[j] = c;
    }
    out
}

/// `U_m`: `a_n -> a_{nm}`; the result has precision `floor(prec / m)`.
pub fn u_operator(s: &TruncatedSeries, m: usize) -> TruncatedSeries {
    assert!(m >= 1);
    let coeffs = (0..s.prec() / m).map(|i| s.coeffs[i * m]).collect();
    TruncatedSeries { ring: s.ring(), coeffs }
}

/// Reduced forms of the classes of discriminant `disc`, principal form first.
fn class_forms(disc: i64) -> Result<[(i64, i64, i64); 2]> {
    match disc {
        -23 => Ok([(1, 1, 6), (2, 1, 3)]),
        -31 => Ok([(1, 1, 8), (2, 1, 4)]),
        other => Err(Error::UnsupportedDiscriminant(other)),
    }
}

/// The dihedral weight-one newform of level `|disc|` attached to the cubic
/// field of discriminant `disc`: half the difference of the theta series of
/// the principal form and a non-principal form.
pub fn weight_one_form(disc: i64, prec: usize) -> Result<TruncatedSeries> {
    let [(a0, b0, c0), (a1, b1, c1)] = class_forms(disc)?;
    let diff = theta_bqf(a0, b0, c0, prec)?.sub(&theta_bqf(a1, b1, c1, prec)?)?;
    diff.div_exact(2).map_err(Error::NonIntegralTheta)
}

/// `(q-1)/24 + sum_{n >= 1} sigma^{(q)}(n) q^n` mod p, where `sigma^{(q)}`
/// sums the divisors prime to q. Cuspidal mod p because p | q - 1.
pub fn eisenstein_series_level_q(q: u64, p: u64, prec: usize) -> Result<TruncatedSeries> {
    if p < 5 || (q - 1) % p != 0 {
        return Err(Error::IncompatiblePrimes { p, q });
    }
    let mut coeffs = vec![0i64; prec];
    let pp = p as i64;
    if prec > 0 {
        let inv24 = inv_mod(24 % p, p)? as i64;
        coeffs[0] = ((q as i64 - 1) % pp) * inv24 % pp;
    }
    for d in 1..prec {
        if d as u64 % q == 0 {
            continue;
        }
        let dd = (d as i64) % pp;
        let mut n = d;
        while n < prec {
            coeffs[n] = (coeffs[n] + dd) % pp;
            n += d;
        }
    }
    Ok(TruncatedSeries::from_coeffs_mod(coeffs, p))
}
