//! Dense linear algebra over F_p and Q, and polynomials over F_p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ffarith::{add_mod, inv_mod, mul_mod, sub_mod};

pub type MatFp = Vec<Vec<u64>>;

pub fn identity_mod(n: usize) -> MatFp {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul_mod(a: &MatFp, b: &MatFp, p: u64) -> MatFp {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![0u128; cols];
            for (k, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(&b[k]) {
                    *o = (*o + x as u128 * y as u128) % p as u128;
                }
            }
            out.into_iter().map(|v| v as u64).collect()
        })
        .collect()
}

pub fn vec_mat_mod(v: &[u64], b: &MatFp, p: u64) -> Vec<u64> {
    mat_mul_mod(&vec![v.to_vec()], b, p).pop().unwrap_or_default()
}

pub fn mat_add_mod(a: &MatFp, b: &MatFp, p: u64) -> MatFp {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| add_mod(x, y, p)).collect())
        .collect()
}

pub fn mat_sub_mod(a: &MatFp, b: &MatFp, p: u64) -> MatFp {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| sub_mod(x, y, p)).collect())
        .collect()
}

pub fn mat_scale_mod(a: &MatFp, k: u64, p: u64) -> MatFp {
    a.iter()
        .map(|r| r.iter().map(|&x| mul_mod(x, k, p)).collect())
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns. Zero rows end up last.
/// When `track` is given it receives the same row operations.
pub fn rref_mod_with(a: &mut MatFp, p: u64, mut track: Option<&mut MatFp>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        if let Some(t) = track.as_deref_mut() {
            t.swap(r, piv);
        }
        let inv = inv_mod(a[r][c], p).expect("pivot is a unit");
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        if let Some(t) = track.as_deref_mut() {
            for x in t[r].iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
        }
        for i in 0..rows {
            if i == r || a[i][c] == 0 {
                continue;
            }
            let f = a[i][c];
            let (src, dst) = if i < r {
                let (lo, hi) = a.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = a.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (d, &s) in dst.iter_mut().zip(src.iter()) {
                *d = sub_mod(*d, mul_mod(f, s, p), p);
            }
            if let Some(t) = track.as_deref_mut() {
                let src = t[r].clone();
                for (d, s) in t[i].iter_mut().zip(src) {
                    *d = sub_mod(*d, mul_mod(f, s, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref_mod(a: &mut MatFp, p: u64) -> Vec<usize> {
    rref_mod_with(a, p, None)
}

pub fn rank_mod(a: &MatFp, p: u64) -> usize {
    rref_mod(&mut a.clone(), p).len()
}

/// Upper-triangular echelon built one row at a time; used to pick
/// independent rows out of a long stream.
#[derive(Debug, Clone)]
pub struct IncrementalEchelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl IncrementalEchelon {
    pub fn new(p: u64) -> Self {
        IncrementalEchelon { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the rows so far; reports whether it was.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|&x| x % p).collect();
        for (c, row) in &self.rows {
            let f = v[*c];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row).skip(*c) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[c], p).expect("prime modulus");
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        self.rows.push((c, v));
        true
    }
}

/// Characteristic polynomial `det(x - A)` mod p, coefficients from the
/// constant term up, via reduction to Hessenberg form.
pub fn charpoly_mod(a: &MatFp, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = inv_mod(h[m][m - 1], p).expect("prime modulus");
        for i in m + 1..n {
            let u = mul_mod(h[i][m - 1], inv, p);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let s = mul_mod(u, h[m][j], p);
                h[i][j] = sub_mod(h[i][j], s, p);
            }
            for row in h.iter_mut() {
                let s = mul_mod(u, row[i], p);
                row[m] = add_mod(row[m], s, p);
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        // (x - h_mm) p_m
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = add_mod(next[k + 1], c, p);
            next[k] = sub_mod(next[k], mul_mod(h[m][m], c, p), p);
        }
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = mul_mod(prod, h[i + 1][i], p);
            let f = mul_mod(h[i][m], prod, p);
            if f == 0 {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = sub_mod(next[k], mul_mod(f, c, p), p);
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

pub fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    poly_trim(out)
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    poly_trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = poly_trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p).expect("prime modulus");
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = mul_mod(*r.last().unwrap(), lead_inv, p);
        q[shift] = f;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(f, c, p), p);
        }
        r = poly_trim(r);
    }
    (poly_trim(q), r)
}

/// Inverse of `a` modulo `m`, when they are coprime.
pub fn poly_inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (poly_trim(m.to_vec()), poly_divrem(a, m, p).1);
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1, p);
        let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
    }
    // r0 = s0 * a mod m; it must be a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let inv = inv_mod(r0[0], p).ok()?;
    let out: Vec<u64> = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    Some(poly_divrem(&out, m, p).1)
}

/// `(x - lambda)^k`.
pub fn linear_power(lambda: u64, k: usize, p: u64) -> Vec<u64> {
    let lin = vec![sub_mod(0, lambda % p, p), 1];
    (0..k).fold(vec![1], |acc, _| poly_mul(&acc, &lin, p))
}

/// `f(A)` by Horner's rule.
pub fn poly_eval_matrix(f: &[u64], a: &MatFp, p: u64) -> MatFp {
    let n = a.len();
    let mut acc = vec![vec![0u64; n]; n];
    for &c in f.iter().rev() {
        acc = mat_mul_mod(&acc, a, p);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = add_mod(row[i], c, p);
        }
    }
    acc
}

pub fn det_mod(a: &MatFp, p: u64) -> u64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| m[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            det = sub_mod(0, det, p);
        }
        det = mul_mod(det, m[c][c], p);
        let inv = inv_mod(m[c][c], p).expect("prime modulus");
        for i in c + 1..n {
            let f = mul_mod(m[i][c], inv, p);
            if f == 0 {
                continue;
            }
            for j in c..n {
                let s = mul_mod(f, m[c][j], p);
                m[i][j] = sub_mod(m[i][j], s, p);
            }
        }
    }
    det
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduced row echelon form over Q in place; returns pivot columns.
pub fn rref_q(a: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(pivots.len());
    pivots
}

/// Basis of the right kernel `{v : A v = 0}`, one vector per free column,
/// each with a 1 in its free column.
pub fn kernel_q(a: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut r = a.to_vec();
    let pivots = rref_q(&mut r);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[f].clone();
        }
        out.push(v);
    }
    out
}
