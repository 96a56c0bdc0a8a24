//! Weight-two modular symbols for Gamma_0(M) presented by Manin symbols.
//!
//! A Manin symbol `(c : d)` stands for `g{0, oo} = {b/d, a/c}` where
//! `g = [[a, b], [c, d]]` is any lift to SL_2(Z). Matrices act on the right:
//! `(c : d) h = (c h_a + d h_c, c h_b + d h_d)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::heilbronn::merel_set_cached;
use super::linalg::{kernel_q, rat, rref_q};
use super::p1::P1List;
use crate::error::{Error, Result};
use crate::ffarith::{euler_phi, factor, gcd, is_prime, xgcd};

/// Rational matrix stored as integer numerators over one common denominator,
/// acting on row vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub num: Vec<Vec<i64>>,
    pub den: i64,
}

impl IntMatrix {
    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.num
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::new(x.into(), self.den.into())).collect())
            .collect()
    }
}

pub fn mat_mul_q(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![BigRational::zero(); cols];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Cusp `u/v` with `v >= 0` and `gcd(u, v) = 1`; infinity is `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cusp {
    pub u: i64,
    pub v: i64,
}

impl Cusp {
    pub fn new(u: i64, v: i64) -> Self {
        let g = gcd(u.unsigned_abs(), v.unsigned_abs()) as i64;
        let (mut u, mut v) = (u / g, v / g);
        if v < 0 || (v == 0 && u < 0) {
            u = -u;
            v = -v;
        }
        Cusp { u, v }
    }
}

/// Whether two cusps are Gamma_0(M)-equivalent: with `u_j s_j = 1 mod v_j`,
/// the test is `s_1 v_2 = s_2 v_1 mod gcd(v_1 v_2, M)`.
pub fn cusps_equivalent(a: Cusp, b: Cusp, m: u64) -> bool {
    let s = |c: Cusp| -> i128 {
        if c.v == 0 {
            c.u as i128
        } else {
            xgcd(c.u, c.v).1 as i128
        }
    };
    let modulus = gcd((a.v as u128 * b.v as u128 % m as u128) as u64, m) as i128;
    let modulus = if modulus == 0 { m as i128 } else { modulus };
    (s(a) * b.v as i128 - s(b) * a.v as i128).rem_euclid(modulus) == 0
}

/// Number of cusps of X_0(M).
pub fn cusp_count(m: u64) -> u64 {
    crate::ffarith::divisors(m)
        .into_iter()
        .map(|d| euler_phi(gcd(d, m / d)))
        .sum()
}

/// Genus of X_0(M) from the Riemann–Hurwitz formula.
pub fn genus_x0(m: u64) -> u64 {
    let fac = factor(m);
    let mu: i64 = fac.iter().fold(m, |acc, &(l, _)| acc / l * (l + 1)) as i64;
    let local = |l: u64, e: u32, d: i64| -> i64 {
        // number of roots of x^2 + 1 (d = -4) or x^2 + x + 1 (d = -3) mod l^e
        if l == 2 && d == -4 {
            return if e == 1 { 1 } else { 0 };
        }
        if l == 3 && d == -3 {
            return if e == 1 { 1 } else { 0 };
        }
        1 + crate::ffarith::kronecker(d, l)
    };
    let nu2: i64 = fac.iter().map(|&(l, e)| local(l, e, -4)).product();
    let nu3: i64 = fac.iter().map(|&(l, e)| local(l, e, -3)).product();
    let c = cusp_count(m) as i64;
    // g = 1 + mu/12 - nu2/4 - nu3/3 - c/2, times 12
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * c;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    (twelve_g / 12) as u64
}

/// Lift of a normalised `(c : d)` to `[a, b, c, d]` in SL_2(Z) with the same bottom row mod M.
pub fn lift_to_sl2z(c: u64, d: u64, m: u64) -> [i64; 4] {
    if m == 1 || c % m == 0 {
        return [1, 0, 0, 1];
    }
    let c = c as i64;
    let mut d = d as i64;
    while gcd(c as u64, d.unsigned_abs()) != 1 {
        d += m as i64;
    }
    let (_, s, t) = xgcd(c, d);
    // s c + t d = 1, so a = t, b = -s
    [t, -s, c, d]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModularSymbolSpace {
    level: u64,
    p1: P1List,
    /// Coordinates of every Manin symbol in the basis, as numerators over `denom`.
    gen_coords: Vec<Vec<(u32, i64)>>,
    denom: i64,
    /// Manin symbol index of each basis element.
    basis: Vec<usize>,
    cusps: Vec<Cusp>,
    /// Boundary of each basis element as (cusp index, coefficient).
    boundary: Vec<Vec<(usize, i64)>>,
    cuspidal_dim: usize,
}

type SparseRow = BTreeMap<usize, BigRational>;

impl ModularSymbolSpace {
    pub fn new(level: u64) -> Self {
        assert!(level >= 1);
        let p1 = P1List::new(level);
        let n = p1.len();
        let sigma = |i: usize| -> usize {
            let e = p1.get(i);
            p1.index(e.d as i64, -(e.c as i64)).expect("sigma preserves P1")
        };
        let tau = |i: usize| -> usize {
            let e = p1.get(i);
            p1.index(e.d as i64, -(e.c as i64) - e.d as i64).expect("tau preserves P1")
        };

        // two-term relations x + x sigma = 0
        let mut rep: Vec<Option<(usize, i64)>> = vec![None; n];
        let mut free = Vec::new();
        for i in 0..n {
            let j = sigma(i);
            if j == i {
                continue;
            }
            if rep[i].is_none() && rep[j].is_none() {
                let r = i.min(j);
                free.push(r);
                rep[r] = Some((r, 1));
                rep[i.max(j)] = Some((r, -1));
            }
        }
        // sigma-fixed symbols vanish; rep stays None for them

        // three-term relations x + x tau + x tau^2 = 0
        let mut seen = vec![false; n];
        let mut relations: Vec<SparseRow> = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let orbit = [i, tau(i), tau(tau(i))];
            for &k in &orbit {
                seen[k] = true;
            }
            let mut row = SparseRow::new();
            let members: &[usize] = if orbit[1] == i { &orbit[..1] } else { &orbit };
            let weight = if orbit[1] == i { 3 } else { 1 };
            for &k in members {
                if let Some((r, s)) = rep[k] {
                    *row.entry(r).or_insert_with(BigRational::zero) += rat(s * weight);
                }
            }
            row.retain(|_, v| !v.is_zero());
            if !row.is_empty() {
                relations.push(row);
            }
        }

        // sparse elimination; pivot rows keep creation order
        let mut pivot_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut pivot_rows: Vec<(usize, SparseRow)> = Vec::new();
        for mut row in relations {
            loop {
                let next = row
                    .keys()
                    .filter_map(|c| pivot_of.get(c).map(|&k| (k, *c)))
                    .min();
                let Some((k, c)) = next else { break };
                let f = row[&c].clone();
                for (col, v) in &pivot_rows[k].1 {
                    let e = row.entry(*col).or_insert_with(BigRational::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        row.remove(col);
                    }
                }
            }
            if row.is_empty() {
                continue;
            }
            let (&pc, _) = row
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .max_by_key(|(c, _)| **c)
                .unwrap_or_else(|| row.iter().next_back().unwrap());
            let inv = row[&pc].recip();
            for v in row.values_mut() {
                *v = &*v * &inv;
            }
            pivot_of.insert(pc, pivot_rows.len());
            pivot_rows.push((pc, row));
        }

        // back substitution, newest pivot first
        let basis: Vec<usize> = free.iter().copied().filter(|c| !pivot_of.contains_key(c)).collect();
        let basis_pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let mut expr: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (pc, row) in pivot_rows.iter().rev() {
            let mut e = SparseRow::new();
            for (c, v) in row {
                if c == pc {
                    continue;
                }
                if let Some(sub) = expr.get(c) {
                    for (b, w) in sub {
                        *e.entry(*b).or_insert_with(BigRational::zero) -= v * w;
                    }
                } else {
                    *e.entry(basis_pos[c]).or_insert_with(BigRational::zero) -= v;
                }
            }
            e.retain(|_, v| !v.is_zero());
            expr.insert(*pc, e);
        }

        let mut rational_coords: Vec<SparseRow> = Vec::with_capacity(n);
        for r in &rep {
            let mut e = SparseRow::new();
            if let Some((r, s)) = *r {
                if let Some(&k) = basis_pos.get(&r) {
                    e.insert(k, rat(s));
                } else {
                    for (b, w) in &expr[&r] {
                        e.insert(*b, w * rat(s));
                    }
                }
            }
            rational_coords.push(e);
        }
        let mut den = BigInt::one();
        for e in &rational_coords {
            for v in e.values() {
                den = den.lcm(v.denom());
            }
        }
        let gen_coords: Vec<Vec<(u32, i64)>> = rational_coords
            .iter()
            .map(|e| {
                e.iter()
                    .map(|(b, v)| {
                        let x = v.numer() * (&den / v.denom());
                        (*b as u32, x.to_i64().expect("coordinate fits in i64"))
                    })
                    .collect()
            })
            .collect();
        let denom = den.to_i64().expect("denominator fits in i64");

        let mut space = ModularSymbolSpace {
            level,
            p1,
            gen_coords,
            denom,
            basis,
            cusps: Vec::new(),
            boundary: Vec::new(),
            cuspidal_dim: 0,
        };
        space.compute_boundary();
        space
    }

    fn cusp_index(&mut self, c: Cusp) -> usize {
        if let Some(i) = self.cusps.iter().position(|&d| cusps_equivalent(c, d, self.level)) {
            return i;
        }
        self.cusps.push(c);
        self.cusps.len() - 1
    }

    fn compute_boundary(&mut self) {
        let mut boundary = Vec::with_capacity(self.basis.len());
        for k in 0..self.basis.len() {
            let e = self.p1.get(self.basis[k]);
            let [a, b, c, d] = lift_to_sl2z(e.c, e.d, self.level);
            // delta{b/d, a/c} = [a/c] - [b/d]
            let hi = self.cusp_index(Cusp::new(a, c));
            let lo = self.cusp_index(Cusp::new(b, d));
            let mut row: BTreeMap<usize, i64> = BTreeMap::new();
            *row.entry(hi).or_default() += 1;
            *row.entry(lo).or_default() -= 1;
            boundary.push(row.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        self.boundary = boundary;
        let rank = {
            let mut m = self.boundary_matrix_q();
            rref_q(&mut m).len()
        };
        self.cuspidal_dim = self.basis.len() - rank;
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn p1(&self) -> &P1List {
        &self.p1
    }

    /// Dimension of the whole space of modular symbols.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal_dim
    }

    pub fn genus(&self) -> usize {
        self.cuspidal_dim / 2
    }

    pub fn cusps(&self) -> &[Cusp] {
        &self.cusps
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn basis_symbols(&self) -> &[usize] {
        &self.basis
    }

    /// Basis coordinates of Manin symbol `i`, numerators over [`Self::denom`].
    pub fn gen_coords(&self, i: usize) -> &[(u32, i64)] {
        &self.gen_coords[i]
    }

    /// Transpose of the boundary map: one column per basis element, one row per cusp.
    pub fn boundary_matrix_q(&self) -> Vec<Vec<BigRational>> {
        let mut m = vec![vec![BigRational::zero(); self.dim()]; self.cusps.len()];
        for (k, row) in self.boundary.iter().enumerate() {
            for &(c, v) in row {
                m[c][k] = rat(v);
            }
        }
        m
    }

    pub fn boundary_of(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.cusps.len()];
        for (k, row) in self.boundary.iter().enumerate() {
            if v[k].is_zero() {
                continue;
            }
            for &(c, w) in row {
                out[c] += &v[k] * rat(w);
            }
        }
        out
    }

    /// Basis of the cuspidal subspace, in basis coordinates.
    pub fn cuspidal_basis(&self) -> Vec<Vec<BigRational>> {
        kernel_q(&self.boundary_matrix_q(), self.dim())
    }

    fn add_symbol(&self, acc: &mut [i64], c: i64, d: i64, sign: i64) {
        let i = self.p1.index(c, d).expect("symbol lies in P1");
        for &(b, v) in &self.gen_coords[i] {
            acc[b as usize] += sign * v;
        }
    }

    /// Adds `sign * {0, a/b}` to `acc` via the continued-fraction convergents of `a/b`.
    fn add_zero_to(&self, acc: &mut [i64], a: i128, b: i128, sign: i64) {
        let (mut a, mut b) = if b < 0 { (-a, -b) } else { (a, b) };
        // {p_{k-1}/q_{k-1}, p_k/q_k} = ((-1)^{k-1} q_k : q_{k-1}); start at 0/1, 1/0
        let m = self.level as i128;
        let (mut q_prev, mut q_cur) = (1i128, 0i128);
        self.add_symbol(acc, 0, 1, sign);
        let mut k = 0u32;
        while b != 0 {
            let t = a.div_euclid(b);
            (a, b) = (b, a - t * b);
            let q_next = t * q_cur + q_prev;
            (q_prev, q_cur) = (q_cur, q_next);
            let s: i128 = if k % 2 == 0 { -1 } else { 1 };
            self.add_symbol(acc, ((s * q_cur).rem_euclid(m)) as i64, (q_prev.rem_euclid(m)) as i64, sign);
            k += 1;
        }
    }

    /// Coordinates of `{alpha, beta}` (cusps given as numerator/denominator),
    /// as numerators over [`Self::denom`].
    pub fn symbol_coords(&self, alpha: (i128, i128), beta: (i128, i128)) -> Vec<i64> {
        let mut acc = vec![0i64; self.dim()];
        self.add_zero_to(&mut acc, beta.0, beta.1, 1);
        self.add_zero_to(&mut acc, alpha.0, alpha.1, -1);
        acc
    }

    /// The pair of cusps `{b/d, a/c}` of basis element `k`.
    pub fn basis_endpoints(&self, k: usize) -> ((i128, i128), (i128, i128)) {
        let e = self.p1.get(self.basis[k]);
        let [a, b, c, d] = lift_to_sl2z(e.c, e.d, self.level);
        ((b as i128, d as i128), (a as i128, c as i128))
    }

    /// `T_n` applied to `sum_i x_i [Manin symbol i]`, as basis numerators over
    /// [`Self::denom`] (times any scaling already in `x`).
    pub fn hecke_apply(&self, x: &[(usize, i64)], n: u64) -> Vec<i64> {
        let m = self.level;
        let mut counts = vec![0i64; self.p1.len()];
        let set = merel_set_cached(n);
        for &(i, w) in x {
            let e = self.p1.get(i);
            let (c, d) = (e.c as i64, e.d as i64);
            for h in set.iter() {
                let cc = (c * h[0] + d * h[2]).rem_euclid(m as i64) as u64;
                let dd = (c * h[1] + d * h[3]).rem_euclid(m as i64) as u64;
                if let Some(j) = self.p1.index_u(cc, dd) {
                    counts[j] += w;
                }
            }
        }
        let mut acc = vec![0i64; self.dim()];
        for (j, &w) in counts.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for &(b, v) in &self.gen_coords[j] {
                acc[b as usize] += w * v;
            }
        }
        acc
    }

    /// Matrix of `T_n` (or `U_n` for a prime `n | M`) on the whole space.
    pub fn hecke_matrix(&self, n: u64) -> Result<IntMatrix> {
        if n == 0 || (gcd(n, self.level) != 1 && !is_prime(n)) {
            return Err(Error::BadIndex { n, level: self.level });
        }
        let num = (0..self.dim())
            .map(|k| self.hecke_apply(&[(self.basis[k], 1)], n))
            .collect();
        Ok(IntMatrix { num, den: self.denom })
    }

    /// `W_N = [[N, 1], [M y, N d]]` with `N d - (M/N) y = 1`, for `N || M`.
    pub fn atkin_lehner_word(&self, n: u64) -> Result<[i128; 4]> {
        let m = self.level;
        if n == 0 || m % n != 0 || gcd(n, m / n) != 1 {
            return Err(Error::NotExactDivisor { n, level: m });
        }
        let (_, s, t) = xgcd(n as i64, (m / n) as i64);
        // s N + t (M/N) = 1
        Ok([n as i128, 1, -(m as i128) * t as i128, n as i128 * s as i128])
    }

    pub fn atkin_lehner_matrix(&self, n: u64) -> Result<IntMatrix> {
        let w = self.atkin_lehner_word(n)?;
        let act = |(u, v): (i128, i128)| -> (i128, i128) {
            let (x, y) = (w[0] * u + w[1] * v, w[2] * u + w[3] * v);
            let g = gcd_i128(x, y);
            (x / g, y / g)
        };
        let num = (0..self.dim())
            .map(|k| {
                let (alpha, beta) = self.basis_endpoints(k);
                self.symbol_coords(act(alpha), act(beta))
            })
            .collect();
        Ok(IntMatrix { num, den: self.denom })
    }

    /// `{alpha, beta} -> {t alpha, t beta}` into a space of level `L` with
    /// `t L | M`, as a `dim x target.dim` matrix over `target.denom`.
    pub fn degeneracy_matrix(&self, l: u64, target: &ModularSymbolSpace) -> Result<IntMatrix> {
        if l == 0 || self.level % (l * target.level) != 0 {
            return Err(Error::NotExactDivisor { n: l, level: self.level });
        }
        let scale = |(u, v): (i128, i128)| -> (i128, i128) {
            let (x, y) = (u * l as i128, v);
            let g = gcd_i128(x, y);
            (x / g, y / g)
        };
        let num = (0..self.dim())
            .map(|k| {
                let (alpha, beta) = self.basis_endpoints(k);
                target.symbol_coords(scale(alpha), scale(beta))
            })
            .collect();
        Ok(IntMatrix { num, den: target.denom })
    }

    /// Restriction of an operator preserving the cuspidal subspace, in the
    /// basis returned by [`Self::cuspidal_basis`].
    pub fn restrict_to_cuspidal(&self, t: &IntMatrix) -> Vec<Vec<BigRational>> {
        let basis = self.cuspidal_basis();
        let tq = t.to_rational();
        let images = mat_mul_q(&basis, &tq);
        // cuspidal_basis has unit vectors in its free columns, so coordinates are read there
        let free: Vec<usize> = basis
            .iter()
            .map(|v| {
                (0..v.len())
                    .find(|&c| v[c].is_one() && basis.iter().filter(|w| !w[c].is_zero()).count() == 1)
                    .expect("kernel basis has a free column")
            })
            .collect();
        images
            .iter()
            .map(|img| {
                let coords: Vec<BigRational> = free.iter().map(|&c| img[c].clone()).collect();
                let mut check = vec![BigRational::zero(); img.len()];
                for (cf, b) in coords.iter().zip(&basis) {
                    for (x, y) in check.iter_mut().zip(b) {
                        *x += cf * y;
                    }
                }
                assert_eq!(&check, img, "operator does not preserve the cuspidal subspace");
                coords
            })
            .collect()
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    if a == 0 {
        1
    } else {
        a
    }
}

pub fn manin_space(level: u64) -> ModularSymbolSpace {
    ModularSymbolSpace::new(level)
}


#[cfg(test)]
mod large_level_tests {
    use super::*;

    #[test]
    fn pipeline_levels_have_genus_dimension() {
        for m in [3197u64, 4309, 3427] {
            let s = manin_space(m);
            assert_eq!(s.cuspidal_dim() as u64, 2 * genus_x0(m), "M = {m}");
        }
    }
}
