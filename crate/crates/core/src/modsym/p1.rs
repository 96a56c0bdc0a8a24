//! The projective line over Z/M, with a table-free normalization.

use serde::{Deserialize, Serialize};

use crate::ffarith::{divisors, gcd, xgcd};

/// A point `(c : d)` of P^1(Z/M) in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct P1Element {
    pub c: u64,
    pub d: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct P1List {
    m: u64,
    elems: Vec<P1Element>,
    /// `inverse[u]` is `u^{-1} mod M`, or 0 when u is not a unit.
    inverse: Vec<u64>,
    /// For each divisor g of M (indexed as in `divs`), canonical `(g : v)` -> index by v.
    divs: Vec<u64>,
    by_divisor: Vec<Vec<u32>>,
}

const ABSENT: u32 = u32::MAX;

impl P1List {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1);
        let inverse = (0..m)
            .map(|u| {
                if m == 1 {
                    return 0;
                }
                let (g, s, _) = xgcd(u as i64, m as i64);
                if g == 1 {
                    s.rem_euclid(m as i64) as u64
                } else {
                    0
                }
            })
            .collect();
        let divs = divisors(m);
        let mut list = P1List {
            m,
            elems: Vec::new(),
            inverse,
            by_divisor: vec![vec![ABSENT; m as usize]; divs.len()],
            divs,
        };
        let mut elems = Vec::new();
        if m == 1 {
            elems.push(P1Element { c: 0, d: 0 });
            list.by_divisor[0][0] = 0;
        } else {
            for (k, &g) in list.divs.clone().iter().enumerate() {
                let c = g % m;
                for v in 0..m {
                    if gcd(gcd(c, v), m) != 1 {
                        continue;
                    }
                    if list.normalize_raw(c, v) == Some((c, v)) {
                        list.by_divisor[k][v as usize] = elems.len() as u32;
                        elems.push(P1Element { c, d: v });
                    }
                }
            }
        }
        list.elems = elems;
        list
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> P1Element {
        self.elems[i]
    }

    pub fn elements(&self) -> &[P1Element] {
        &self.elems
    }

    /// Canonical representative of `(c : d)`, or None when `gcd(c, d, M) > 1`.
    ///
    /// The first coordinate becomes `gcd(c, M)` (0 when `c = 0`); the second is
    /// then minimised over the units fixing the first.
    fn normalize_raw(&self, c: u64, d: u64) -> Option<(u64, u64)> {
        let m = self.m;
        if m == 1 {
            return Some((0, 0));
        }
        let (c, d) = (c % m, d % m);
        if c == 0 {
            return if gcd(d, m) == 1 { Some((0, 1)) } else { None };
        }
        let inv = self.inverse[c as usize];
        if inv != 0 {
            return Some((1, (d as u128 * inv as u128 % m as u128) as u64));
        }
        let (g, s, _) = xgcd(c as i64, m as i64);
        let g = g as u64;
        if gcd(g, d) != 1 {
            return None;
        }
        // s * c = g mod M; adjust s to a unit along s + k M/g
        let step = m / g;
        let mut s = s.rem_euclid(m as i64) as u64;
        while gcd(s, m) != 1 {
            s = (s + step) % m;
        }
        let v = (d as u128 * s as u128 % m as u128) as u64;
        // units t = 1 mod M/g fix g; minimise v * t
        let mut best = v;
        let mut t = 1u64;
        for _ in 0..g {
            if gcd(t, m) == 1 {
                let w = (v as u128 * t as u128 % m as u128) as u64;
                best = best.min(w);
            }
            t = (t + step) % m;
        }
        Some((g % m, best))
    }

    /// Index of `(c : d)` in the list, or None when it is not a point of P^1(Z/M).
    pub fn index(&self, c: i64, d: i64) -> Option<usize> {
        let m = self.m as i64;
        let (c, d) = (c.rem_euclid(m) as u64, d.rem_euclid(m) as u64);
        self.index_u(c, d)
    }

    pub fn index_u(&self, c: u64, d: u64) -> Option<usize> {
        let m = self.m;
        if m == 1 {
            return Some(0);
        }
        let (c, d) = (c % m, d % m);
        if c != 0 {
            let inv = self.inverse[c as usize];
            if inv != 0 {
                let v = (d as u128 * inv as u128 % m as u128) as usize;
                return Some(self.by_divisor[0][v] as usize);
            }
        }
        let (nc, nd) = self.normalize_raw(c, d)?;
        let g = if nc == 0 { m } else { nc };
        let k = self.divs.binary_search(&g).ok()?;
        let idx = self.by_divisor[k][nd as usize];
        (idx != ABSENT).then_some(idx as usize)
    }

    /// Canonical form of `(c : d)`.
    pub fn normalize(&self, c: i64, d: i64) -> Option<P1Element> {
        self.index(c, d).map(|i| self.elems[i])
    }
}

/// `M * prod_{l | M} (1 + 1/l)`, the index of Gamma_0(M) in SL_2(Z).
pub fn p1_count(m: u64) -> u64 {
    crate::ffarith::factor(m)
        .into_iter()
        .fold(m, |acc, (l, _)| acc / l * (l + 1))
}

pub fn p1_list(m: u64) -> P1List {
    P1List::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(p1_list(11).len(), 12);
        assert_eq!(p1_list(1).len(), 1);
        assert_eq!(p1_count(3197), 3360);
        assert_eq!(p1_list(3197).len(), 3360);
        for m in 1..=200 {
            assert_eq!(p1_list(m).len() as u64, p1_count(m), "M = {m}");
        }
    }

    /// Orbit representative by brute force: smallest (c, d) in the unit orbit.
    fn orbit_min(c: u64, d: u64, m: u64) -> (u64, u64) {
        (1..m.max(2))
            .filter(|&u| gcd(u, m) == 1)
            .map(|u| (c * u % m, d * u % m))
            .min()
            .unwrap()
    }

    #[test]
    fn normalization_respects_unit_orbits() {
        for m in [2u64, 4, 6, 8, 9, 12, 18, 25, 36, 60] {
            let list = p1_list(m);
            let mut classes: std::collections::HashMap<(u64, u64), usize> = Default::default();
            for c in 0..m {
                for d in 0..m {
                    let idx = list.index_u(c, d);
                    assert_eq!(idx.is_some(), gcd(gcd(c, d), m) == 1);
                    if let Some(i) = idx {
                        let key = orbit_min(c, d, m);
                        let prev = *classes.entry(key).or_insert(i);
                        assert_eq!(prev, i, "M = {m}, ({c}, {d})");
                    }
                }
            }
            let distinct: HashSet<usize> = classes.values().copied().collect();
            assert_eq!(distinct.len(), list.len());
        }
    }

    proptest! {
        #[test]
        fn index_is_scaling_invariant(m in 2u64..500, c in 0u64..500, d in 0u64..500, u in 1u64..500) {
            prop_assume!(gcd(u, m) == 1);
            let list = p1_list(m);
            let a = list.index_u(c, d);
            let b = list.index_u(c * u % m, d * u % m);
            prop_assert_eq!(a, b);
            if let Some(i) = a {
                let e = list.get(i);
                prop_assert_eq!(list.index_u(e.c, e.d), Some(i));
            }
        }
    }
}
