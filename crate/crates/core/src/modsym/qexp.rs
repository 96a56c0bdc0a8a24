//! Integral q-expansion bases of S_2(Gamma_0(M)) reduced mod p, and the
//! transport of operators on modular symbols to those bases.
//!
//! For a cuspidal symbol `x` and a linear functional `phi` on the symbol
//! space, `sum_n phi(T_n x) q^n` is a cusp form. Taking `phi` to be coordinate
//! functionals gives integral q-expansions spanning S_2 once enough `x` are
//! used. An operator `t` commuting with the Hecke action then acts on these
//! forms through `phi -> phi o t`. The Atkin–Lehner involution `W_l` only
//! commutes with the Hecke action on the span of the forms when `x` is killed
//! by the degeneracy map `{a, b} -> {l a, l b}`, so `x` is chosen there.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{identity_mod, kernel_q, rat, rref_mod_with, IncrementalEchelon, MatFp};
use super::manin::{IntMatrix, ModularSymbolSpace};
use crate::error::{Error, Result};
use crate::ffarith::{factor, gcd, inv_mod, mul_mod, pow_u};
use crate::qseries::TruncatedSeries;

/// Modulus for choosing independent functionals; rank over Q is read off mod this prime.
const SELECTION_PRIME: u64 = (1 << 61) - 1;
/// Kernel vectors combined into one test symbol.
const CHUNK: usize = 6;

/// `[SL_2(Z) : Gamma_0(M)]`.
pub fn gamma0_index(m: u64) -> u64 {
    factor(m).into_iter().fold(m, |acc, (l, _)| acc / l * (l + 1))
}

/// Sturm bound for weight two: `ceil(index / 6)`.
pub fn sturm_bound(m: u64) -> usize {
    gamma0_index(m).div_ceil(6) as usize
}

/// Sturm bound plus five guard terms.
pub fn default_nterms(m: u64) -> usize {
    sturm_bound(m) + 5
}

/// The p-independent part of a q-expansion basis: test symbols, their Hecke
/// images, and the functionals whose q-expansions span S_2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelData {
    pub level: u64,
    pub nterms: usize,
    pub genus: usize,
    pub space: Arc<ModularSymbolSpace>,
    /// Test symbols as integer combinations of Manin symbols.
    pub xs: Vec<Vec<(usize, i64)>>,
    /// `images[s][n]` holds the basis numerators of `T_n x_s`; `n = 0` is zero.
    pub images: Vec<Vec<Vec<i64>>>,
    /// Functionals `(s, j)`: the j-th coordinate of `T_n x_s`.
    pub selected: Vec<(usize, usize)>,
}

impl LevelData {
    pub fn new(level: u64, nterms: usize) -> Result<Self> {
        let space = Arc::new(ModularSymbolSpace::new(level));
        Self::with_space(space, nterms)
    }

    pub fn with_space(space: Arc<ModularSymbolSpace>, nterms: usize) -> Result<Self> {
        let level = space.level();
        let genus = space.genus();
        let sturm = sturm_bound(level);
        if nterms < sturm {
            return Err(Error::InsufficientPrecision { have: nterms, need: sturm });
        }
        let mut data = LevelData {
            level,
            nterms,
            genus,
            space: Arc::clone(&space),
            xs: Vec::new(),
            images: Vec::new(),
            selected: Vec::new(),
        };
        if genus == 0 {
            return Ok(data);
        }
        let candidates = test_symbol_candidates(&space)?;
        let mut echelon = IncrementalEchelon::new(SELECTION_PRIME);
        for x in candidates {
            let s = data.xs.len();
            let imgs: Vec<Vec<i64>> = (0..nterms)
                .map(|n| if n == 0 { vec![0; space.dim()] } else { space.hecke_apply(&x, n as u64) })
                .collect();
            for j in 0..space.dim() {
                let row: Vec<u64> = imgs
                    .iter()
                    .map(|v| v[j].rem_euclid(SELECTION_PRIME as i64) as u64)
                    .collect();
                if echelon.insert(&row) {
                    data.selected.push((s, j));
                    if echelon.rank() == genus {
                        break;
                    }
                }
            }
            data.xs.push(x);
            data.images.push(imgs);
            if echelon.rank() == genus {
                return Ok(data);
            }
        }
        Err(Error::BasisRankDeficient { level, expected: genus, got: echelon.rank() })
    }

    /// Integral q-expansion of functional `(s, j)` to `nterms` coefficients.
    pub fn functional_series(&self, s: usize, j: usize) -> Vec<i64> {
        self.images[s].iter().map(|v| v[j]).collect()
    }
}

/// Cuspidal symbols killed by `{a, b} -> {l a, l b}` for each prime `l || M`
/// with `M / l > 1`, as a deterministic sequence of sparse combinations.
fn test_symbol_candidates(space: &ModularSymbolSpace) -> Result<Vec<Vec<(usize, i64)>>> {
    let m = space.level();
    let dim = space.dim();
    let mut constraints = space.boundary_matrix_q();
    for (l, e) in factor(m) {
        if e != 1 || m == l {
            continue;
        }
        let lower = ModularSymbolSpace::new(m / l);
        let b = space.degeneracy_matrix(l, &lower)?;
        for c in 0..lower.dim() {
            constraints.push((0..dim).map(|r| rat(b.num[r][c])).collect());
        }
    }
    let mut kernel = kernel_q(&constraints, dim);
    kernel.sort_by_key(|v| v.iter().filter(|x| !x.is_zero()).count());
    let basis = space.basis_symbols();
    let mut out = Vec::new();
    for chunk in kernel.chunks(CHUNK) {
        let mut x = vec![BigRational::zero(); dim];
        for (k, v) in chunk.iter().enumerate() {
            let w = rat(k as i64 + 1);
            for (xi, vi) in x.iter_mut().zip(v) {
                if !vi.is_zero() {
                    *xi += &w * vi;
                }
            }
        }
        let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let sparse: Vec<(usize, i64)> = x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(b, v)| {
                let n = v.numer() * (&den / v.denom());
                (basis[b], n.to_i64().expect("test symbol coefficient fits in i64"))
            })
            .collect();
        if !sparse.is_empty() {
            out.push(sparse);
        }
    }
    Ok(out)
}

/// Result of [`p_saturate`]: saturated rows and the rational transform
/// (p-power denominators only) taking the input rows to them.
#[derive(Debug, Clone, PartialEq)]
pub struct Saturation {
    pub rows: Vec<Vec<BigInt>>,
    pub transform: Vec<Vec<BigRational>>,
}

/// Enlarges the Z_(p)-span of `rows` until its reduction mod p has full rank.
pub fn p_saturate(rows: &[Vec<BigInt>], p: u64) -> Saturation {
    let g = rows.len();
    let pb = BigInt::from(p);
    let mut rows = rows.to_vec();
    let mut transform: Vec<Vec<BigRational>> = (0..g)
        .map(|i| (0..g).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    loop {
        let mut red: MatFp = rows
            .iter()
            .map(|r| r.iter().map(|x| mod_p(x, p)).collect())
            .collect();
        let mut track = identity_mod(g);
        let rank = rref_mod_with(&mut red, p, Some(&mut track)).len();
        if rank == g {
            break;
        }
        // track[rank] is a combination of the rows vanishing mod p
        let c = &track[rank];
        let i = (0..g).rev().find(|&i| c[i] != 0).expect("kernel vector is nonzero");
        let mut combo = vec![BigInt::zero(); rows[0].len()];
        let mut tcombo = vec![BigRational::zero(); g];
        for (j, &cj) in c.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            let cj = BigInt::from(cj);
            for (acc, x) in combo.iter_mut().zip(&rows[j]) {
                *acc += &cj * x;
            }
            let cjq = BigRational::from_integer(cj);
            for (acc, x) in tcombo.iter_mut().zip(&transform[j]) {
                *acc += &cjq * x;
            }
        }
        for x in combo.iter_mut() {
            debug_assert!((&*x % &pb).is_zero());
            *x /= &pb;
        }
        let pq = BigRational::from_integer(pb.clone());
        for x in tcombo.iter_mut() {
            *x = &*x / &pq;
        }
        rows[i] = combo;
        transform[i] = tcombo;
    }
    Saturation { rows, transform }
}

fn mod_p(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn p_valuation(x: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while !x.is_zero() && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    v
}

/// An echelon basis of S_2(Gamma_0(M)) mod p to `nterms` coefficients, with
/// the data needed to transport operators on modular symbols.
#[derive(Debug, Clone)]
pub struct QExpBasis {
    level: u64,
    p: u64,
    nterms: usize,
    rows: MatFp,
    pivots: Vec<usize>,
    data: Arc<LevelData>,
    /// `p^depth * transform`, reduced mod `p^(depth + 1)`.
    scaled_transform: Vec<Vec<u64>>,
    depth: u32,
    /// Row operations taking the saturated rows mod p to `rows`.
    echelon_ops: MatFp,
}

impl QExpBasis {
    pub fn new(data: Arc<LevelData>, p: u64) -> Result<Self> {
        if p < 5 || !crate::ffarith::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if data.level % p == 0 {
            return Err(Error::PrimeDividesLevel { p, level: data.level });
        }
        let int_rows: Vec<Vec<BigInt>> = data
            .selected
            .iter()
            .map(|&(s, j)| data.functional_series(s, j).into_iter().map(BigInt::from).collect())
            .collect();
        let sat = if int_rows.is_empty() {
            Saturation { rows: Vec::new(), transform: Vec::new() }
        } else {
            p_saturate(&int_rows, p)
        };
        let depth = sat
            .transform
            .iter()
            .flatten()
            .map(|x| p_valuation(x.denom(), p))
            .max()
            .unwrap_or(0);
        let modulus = checked_modulus(p, depth)?;
        let pe = BigInt::from(p).pow(depth);
        let scaled_transform = sat
            .transform
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let scaled = x * BigRational::from_integer(pe.clone());
                        let den = mod_p(scaled.denom(), modulus);
                        let num = mod_p(scaled.numer(), modulus);
                        let inv = inv_mod(den, modulus).expect("denominator prime to p");
                        mul_mod(num, inv, modulus)
                    })
                    .collect()
            })
            .collect();
        let mut rows: MatFp = sat
            .rows
            .iter()
            .map(|r| r.iter().map(|x| mod_p(x, p)).collect())
            .collect();
        let g = rows.len();
        let mut echelon_ops = identity_mod(g);
        let pivots = rref_mod_with(&mut rows, p, Some(&mut echelon_ops));
        assert_eq!(pivots.len(), g, "saturated rows have full rank mod p");
        Ok(QExpBasis {
            level: data.level,
            p,
            nterms: data.nterms,
            rows,
            pivots,
            data,
            scaled_transform,
            depth,
            echelon_ops,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nterms(&self) -> usize {
        self.nterms
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &MatFp {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn data(&self) -> &Arc<LevelData> {
        &self.data
    }

    pub fn space(&self) -> &ModularSymbolSpace {
        &self.data.space
    }

    pub fn row_series(&self, i: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs_mod(self.rows[i].iter().map(|&x| x as i64).collect(), self.p)
    }

    /// `sum_i v_i row_i` as a series.
    pub fn combination(&self, v: &[u64]) -> TruncatedSeries {
        let p = self.p;
        let mut out = vec![0u64; self.nterms];
        for (row, &c) in self.rows.iter().zip(v) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = (*o + mul_mod(c, x, p)) % p;
            }
        }
        TruncatedSeries::from_coeffs_mod(out.into_iter().map(|x| x as i64).collect(), p)
    }

    /// Coordinates of a series mod p in this basis, checked against every
    /// available coefficient. Only the first `min(prec, nterms)` coefficients
    /// are compared, and at least the Sturm bound must be available.
    pub fn coordinates(&self, coeffs: &[u64]) -> std::result::Result<Vec<u64>, String> {
        let p = self.p;
        let avail = coeffs.len().min(self.nterms);
        let sturm = sturm_bound(self.level);
        if avail < sturm {
            return Err(format!("only {avail} coefficients, Sturm bound is {sturm}"));
        }
        let v: Vec<u64> = self
            .pivots
            .iter()
            .map(|&c| if c < avail { coeffs[c] % p } else { 0 })
            .collect();
        if let Some(&c) = self.pivots.iter().find(|&&c| c >= avail) {
            return Err(format!("pivot column {c} lies beyond the {avail} available coefficients"));
        }
        let recon = self.combination(&v);
        for n in 0..avail {
            if recon.coeff(n) as u64 != coeffs[n] % p {
                return Err(format!("coefficient of q^{n} does not match"));
            }
        }
        Ok(v)
    }

    /// Matrix (acting on row vectors of coordinates) of the operator on S_2
    /// induced by `t`, which must commute with the Hecke action on the span
    /// of the test symbols.
    pub fn transport(&self, t: &IntMatrix) -> Result<MatFp> {
        let p = self.p;
        let g = self.dim();
        if g == 0 {
            return Ok(Vec::new());
        }
        let modulus = checked_modulus(p, self.depth)?;
        let den_inv = inv_mod(t.den.rem_euclid(p as i64) as u64, p)?;
        let data = &self.data;
        let nterms = self.nterms;
        let tm: Vec<Vec<u64>> = t
            .num
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(modulus as i64) as u64).collect())
            .collect();
        // series of phi o t for each selected functional phi
        let z: Vec<Vec<u64>> = data
            .selected
            .iter()
            .map(|&(s, k)| {
                let col: Vec<(usize, u64)> = (0..tm.len()).filter(|&j| tm[j][k] != 0).map(|j| (j, tm[j][k])).collect();
                (0..nterms)
                    .map(|n| {
                        let img = &data.images[s][n];
                        let mut acc = 0u128;
                        for &(j, w) in &col {
                            let x = img[j].rem_euclid(modulus as i64) as u128;
                            acc = (acc + w as u128 * x) % modulus as u128;
                        }
                        acc as u64
                    })
                    .collect()
            })
            .collect();
        let pe = pow_u(p, self.depth as u64, u64::MAX);
        let mut lattice_images: MatFp = Vec::with_capacity(g);
        for r in 0..g {
            let mut y = vec![0u128; nterms];
            for (m, zm) in z.iter().enumerate() {
                let c = self.scaled_transform[r][m] as u128;
                if c == 0 {
                    continue;
                }
                for (acc, &x) in y.iter_mut().zip(zm) {
                    *acc = (*acc + c * x as u128) % modulus as u128;
                }
            }
            let mut row = Vec::with_capacity(nterms);
            for (n, v) in y.into_iter().enumerate() {
                let v = v as u64;
                if v % pe != 0 {
                    return Err(Error::NotInSpan {
                        level: self.level,
                        p,
                        reason: format!("transported form is not p-integral at q^{n}"),
                    });
                }
                row.push(mul_mod((v / pe) % p, den_inv, p));
            }
            lattice_images.push(row);
        }
        let images = super::linalg::mat_mul_mod(&self.echelon_ops, &lattice_images, p);
        images
            .iter()
            .map(|img| {
                self.coordinates(img).map_err(|reason| Error::NotInSpan { level: self.level, p, reason })
            })
            .collect()
    }

    pub fn transport_hecke(&self, n: u64) -> Result<MatFp> {
        self.transport(&self.space().hecke_matrix(n)?)
    }

    pub fn transport_atkin_lehner(&self, n: u64) -> Result<MatFp> {
        self.transport(&self.space().atkin_lehner_matrix(n)?)
    }

    /// `T_n` computed from q-expansions on the first `nterms / n` coefficients,
    /// for `gcd(n, M) = 1`. Needs `nterms >= n * sturm`.
    pub fn hecke_coefficientwise(&self, n: u64) -> Result<MatFp> {
        if gcd(n, self.level) != 1 {
            return Err(Error::BadIndex { n, level: self.level });
        }
        (0..self.dim())
            .map(|i| {
                let image = hecke_on_series(&self.rows[i], n, self.level, self.p);
                self.coordinates(&image).map_err(|reason| Error::NotInSpan { level: self.level, p: self.p, reason })
            })
            .collect()
    }
}

fn checked_modulus(p: u64, depth: u32) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..=depth {
        m = m
            .checked_mul(p)
            .filter(|&m| m < (1 << 62))
            .ok_or(Error::PrecisionExhausted { p, depth })?;
    }
    Ok(m)
}

/// `a_m(T_n f) = sum_{d | gcd(m, n), gcd(d, M) = 1} d a_{mn/d^2}(f)` for the
/// `m` whose right-hand side is known.
pub fn hecke_on_series(coeffs: &[u64], n: u64, level: u64, p: u64) -> Vec<u64> {
    let prec = coeffs.len().div_ceil(n as usize);
    (0..prec as u64)
        .map(|m| {
            let mut acc = 0u64;
            for d in crate::ffarith::divisors(gcd(m, n)) {
                if gcd(d, level) != 1 {
                    continue;
                }
                let idx = (m * n / (d * d)) as usize;
                acc = (acc + mul_mod(d % p, coeffs[idx] % p, p)) % p;
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modsym::linalg::{mat_mul_mod, vec_mat_mod};
    use crate::qseries::{eta_factor, v_operator};

    fn basis(level: u64, p: u64, nterms: usize) -> QExpBasis {
        QExpBasis::new(Arc::new(LevelData::new(level, nterms).unwrap()), p).unwrap()
    }

    fn eta_11(prec: usize) -> TruncatedSeries {
        let e1 = eta_factor(1, prec);
        let e11 = eta_factor(11, prec);
        e1.mul(&e1).unwrap().mul(&e11).unwrap().mul(&e11).unwrap().shift(1)
    }

    fn as_u64(s: &TruncatedSeries) -> Vec<u64> {
        s.coeffs().iter().map(|&c| c as u64).collect()
    }

    #[test]
    fn level_11_is_the_eta_product() {
        for p in [5u64, 7, 13] {
            let b = basis(11, p, 50);
            assert_eq!(b.dim(), 1);
            assert_eq!(b.row_series(0), eta_11(50).reduce_mod(p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn level_23_pivots() {
        let b = basis(23, 5, default_nterms(23));
        assert_eq!(b.dim(), 2);
        assert_eq!(b.pivots(), &[1, 2]);
    }

    #[test]
    fn rejects_bad_primes() {
        let data = Arc::new(LevelData::new(11, 20).unwrap());
        assert!(matches!(QExpBasis::new(Arc::clone(&data), 11), Err(Error::PrimeDividesLevel { .. })));
        assert!(matches!(QExpBasis::new(data, 3), Err(Error::InvalidPrime(3))));
        assert!(matches!(LevelData::new(11, 1), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn first_coefficient_of_hecke_image() {
        // a_1(T_n f) = a_n(f), U_n included
        for (m, p) in [(23u64, 7u64), (37, 5), (66, 7), (253, 5)] {
            let b = basis(m, p, default_nterms(m).max(21));
            for n in (1..=20u64).filter(|&n| gcd(n, m) == 1 || crate::ffarith::is_prime(n)) {
                let t = b.transport_hecke(n).unwrap();
                for i in 0..b.dim() {
                    let img = b.combination(&t[i]);
                    assert_eq!(img.coeff(1) as u64, b.rows()[i][n as usize], "M = {m}, n = {n}, row {i}");
                }
            }
        }
    }

    #[test]
    fn transport_matches_coefficientwise_hecke() {
        for m in [11u64, 23, 31, 253] {
            let p = 7;
            let b = basis(m, p, 10 * sturm_bound(m) + 10);
            for n in (2..=10u64).filter(|&n| gcd(n, m) == 1) {
                assert_eq!(b.transport_hecke(n).unwrap(), b.hecke_coefficientwise(n).unwrap(), "M = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn transported_u_matches_coefficients() {
        let (m, l, p) = (253u64, 23u64, 5u64);
        let b = basis(m, p, 40 * 23);
        let u = b.transport_hecke(l).unwrap();
        for i in 0..b.dim() {
            let img = b.combination(&u[i]);
            for k in 0..b.nterms() / l as usize {
                assert_eq!(img.coeff(k) as u64, b.rows()[i][k * l as usize]);
            }
        }
    }

    #[test]
    fn atkin_lehner_transport() {
        let (m, n, p) = (253u64, 23u64, 5u64);
        let b = basis(m, p, 600);
        let w = b.transport_atkin_lehner(n).unwrap();
        let g = b.dim();
        assert_eq!(mat_mul_mod(&w, &w, p), identity_mod(g));
        for l in [2u64, 3, 7] {
            let t = b.transport_hecke(l).unwrap();
            assert_eq!(mat_mul_mod(&w, &t, p), mat_mul_mod(&t, &w, p), "l = {l}");
        }
        // W_23 (f(z)) = 23 f(23 z) for f of level 11
        let f = eta_11(600).reduce_mod(p).unwrap();
        let v = b.coordinates(&as_u64(&f)).unwrap();
        let image = b.combination(&vec_mat_mod(&v, &w, p));
        assert_eq!(image, v_operator(&f, 23).scale(23));
        let w11 = b.transport_atkin_lehner(11).unwrap();
        assert_eq!(mat_mul_mod(&w11, &w11, p), identity_mod(g));
        assert_eq!(mat_mul_mod(&w11, &w, p), mat_mul_mod(&w, &w11, p));
    }

    #[test]
    fn saturation_examples() {
        let p = 5u64;
        let int = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let s = p_saturate(&[int(&[1, 0]), int(&[0, 5])], p);
        assert_eq!(s.rows, vec![int(&[1, 0]), int(&[0, 1])]);
        let s = p_saturate(&[int(&[5, 5])], p);
        assert_eq!(s.rows, vec![int(&[1, 1])]);
        let already = vec![int(&[1, 2, 3]), int(&[0, 1, 4])];
        assert_eq!(p_saturate(&already, p).rows, already);
    }

    #[test]
    fn saturation_transform_reproduces_rows() {
        let p = 7u64;
        let int = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let rows = vec![int(&[7, 14, 21, 0]), int(&[1, 2, 3, 7]), int(&[0, 49, 0, 98])];
        let s = p_saturate(&rows, p);
        for (out, t) in s.rows.iter().zip(&s.transform) {
            for c in 0..4 {
                let mut acc = BigRational::zero();
                for (coef, r) in t.iter().zip(&rows) {
                    acc += coef * BigRational::from_integer(r[c].clone());
                }
                assert_eq!(acc, BigRational::from_integer(out[c].clone()));
            }
        }
        let red: MatFp = s.rows.iter().map(|r| r.iter().map(|x| mod_p(x, p)).collect()).collect();
        assert_eq!(super::super::linalg::rank_mod(&red, p), 3);
    }

    #[test]
    fn hecke_series_formula() {
        // on q - 2q^2 - q^3 + 2q^4 + q^5 + 2q^6 - 2q^7 ... T_2 acts by -2
        let f = as_u64(&eta_11(40).reduce_mod(13).unwrap());
        let t2 = hecke_on_series(&f, 2, 11, 13);
        assert_eq!(t2.len(), 20);
        for (k, &c) in t2.iter().enumerate() {
            assert_eq!(c, mul_mod(f[k], 11, 13));
        }
    }
}
