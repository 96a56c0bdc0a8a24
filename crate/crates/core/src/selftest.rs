//! Algebraic property suites run by the `selftest` subcommand.

use std::time::Instant;

use num_traits::{One, Zero};

use crate::ffarith::{plog, plog_with_generator, primes_up_to, primitive_roots, Residue};
use crate::heckeops::{default_aux_primes, eisenstein_projector};
use crate::merel::merel_unit;
use crate::modsym::manin::{mat_mul_q, manin_space};
use crate::modsym::{default_nterms, qexp_basis};
use crate::modsym::linalg::mat_mul_mod;
use crate::stark::{cubic_poly, roots_mod_q};

pub type Check = std::result::Result<(), String>;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub outcome: Check,
    pub seconds: f64,
}

pub const SUITES: [(&str, fn() -> Check); 7] = [
    ("manin_relations", manin_relations),
    ("atkin_lehner_involution", atkin_lehner_involution),
    ("hecke_commutativity", hecke_commutativity),
    ("projector_idempotent", projector_idempotent),
    ("plog_multiplicativity", plog_multiplicativity),
    ("log_ratio_generator_independence", log_ratio_generator_independence),
    ("merel_unit_oracle", merel_unit_oracle),
];

pub fn run_all() -> Vec<SuiteResult> {
    SUITES
        .iter()
        .map(|&(name, f)| {
            let t = Instant::now();
            let outcome = f();
            SuiteResult { name, outcome, seconds: t.elapsed().as_secs_f64() }
        })
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn manin_relations() -> Check {
    for m in [11u64, 23, 30, 36, 60, 253] {
        let s = manin_space(m);
        let p1 = s.p1();
        let coords = |i: usize| {
            let mut v = vec![0i64; s.dim()];
            for &(b, x) in s.gen_coords(i) {
                v[b as usize] += x;
            }
            v
        };
        for i in 0..p1.len() {
            let e = p1.get(i);
            let (c, d) = (e.c as i64, e.d as i64);
            let x = coords(i);
            let sig = coords(p1.index(d, -c).unwrap());
            let t1 = coords(p1.index(d, -c - d).unwrap());
            let t2 = coords(p1.index(-c - d, c).unwrap());
            ensure(x.iter().zip(&sig).all(|(a, b)| a + b == 0), || format!("2-term relation at M = {m}, ({c}:{d})"))?;
            ensure(x.iter().zip(&t1).zip(&t2).all(|((a, b), c)| a + b + c == 0), || {
                format!("3-term relation at M = {m}, ({c}:{d})")
            })?;
        }
    }
    Ok(())
}

fn is_identity(a: &[Vec<num_rational::BigRational>]) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
}

pub fn atkin_lehner_involution() -> Check {
    for (m, n) in [(11u64, 11u64), (30, 5), (30, 6), (44, 4), (253, 11), (253, 23)] {
        let s = manin_space(m);
        let w = s.atkin_lehner_matrix(n).map_err(|e| e.to_string())?.to_rational();
        ensure(is_identity(&mat_mul_q(&w, &w)), || format!("W_{n}^2 != 1 at level {m}"))?;
    }
    Ok(())
}

pub fn hecke_commutativity() -> Check {
    for m in [11u64, 37, 60, 253] {
        let s = manin_space(m);
        let ops: Vec<_> = [2u64, 3, 5, 7]
            .iter()
            .filter_map(|&n| s.hecke_matrix(n).ok().map(|t| (n, t.to_rational())))
            .collect();
        for (i, (a, ta)) in ops.iter().enumerate() {
            for (b, tb) in &ops[i + 1..] {
                ensure(mat_mul_q(ta, tb) == mat_mul_q(tb, ta), || format!("T_{a} T_{b} != T_{b} T_{a} at level {m}"))?;
            }
        }
    }
    Ok(())
}

pub fn projector_idempotent() -> Check {
    for (q, p) in [(11u64, 5u64), (43, 7), (61, 5), (67, 11), (89, 11), (137, 17)] {
        let basis = qexp_basis(q, p, default_nterms(q)).map_err(|e| e.to_string())?;
        let e = eisenstein_projector(&basis, &default_aux_primes(q, p, &[])).map_err(|e| e.to_string())?;
        ensure(mat_mul_mod(&e.matrix, &e.matrix, p) == e.matrix, || format!("e^2 != e at (q, p) = ({q}, {p})"))?;
    }
    Ok(())
}

pub fn plog_multiplicativity() -> Check {
    for q in primes_up_to(200) {
        for p in primes_up_to(q).into_iter().filter(|&p| p >= 5 && (q - 1) % p == 0) {
            for x in (1..q).step_by(7) {
                for y in (1..q).step_by(11) {
                    let lx = plog(q, p, x).map_err(|e| e.to_string())?.exponent;
                    let ly = plog(q, p, y).map_err(|e| e.to_string())?.exponent;
                    let lxy = plog(q, p, x * y % q).map_err(|e| e.to_string())?.exponent;
                    ensure(lxy == (lx + ly) % p, || format!("plog({x} * {y}) mod {q}, p = {p}"))?;
                }
            }
        }
    }
    Ok(())
}

pub fn log_ratio_generator_independence() -> Check {
    for disc in [-23i64, -31] {
        let field = cubic_poly(disc).map_err(|e| e.to_string())?;
        for q in primes_up_to(150) {
            if q <= 3 || roots_mod_q(&field, q).map(|r| r.len() != 1).unwrap_or(true) {
                continue;
            }
            let u = roots_mod_q(&field, q).unwrap()[0].value();
            let w = merel_unit(q).map_err(|e| e.to_string())?.value.value();
            for p in primes_up_to(q).into_iter().filter(|&p| p >= 5 && (q - 1) % p == 0) {
                let mut seen = None;
                for g in primitive_roots(q) {
                    let gen = Residue::new(g as i64, q);
                    let a = plog_with_generator(q, p, u, gen).map_err(|e| e.to_string())?;
                    let b = plog_with_generator(q, p, w, gen).map_err(|e| e.to_string())?;
                    let r = a.ratio(&b);
                    if *seen.get_or_insert(r) != r {
                        return Err(format!("log ratio depends on the generator at (disc, p, q) = ({disc}, {p}, {q})"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Brute-force product with every exponent reduced into `[0, q - 1)`.
pub fn merel_unit_brute(q: u64) -> u64 {
    let pow = |b: u64, e: u64| (0..e).fold(1u64, |acc, _| acc * b % q);
    let zeta = if q % 3 == 2 { 1 } else { pow(2, (q - 1) / 3) };
    let mut v = zeta * zeta % q;
    for i in 1..=(q - 1) / 2 {
        let e = ((q - 1) as i64 - (8 * i as i64) % (q - 1) as i64) as u64 % (q - 1);
        v = v * pow(i, e) % q;
    }
    v
}

pub fn merel_unit_oracle() -> Check {
    for q in primes_up_to(200).into_iter().filter(|&q| q > 3) {
        let fast = merel_unit(q).map_err(|e| e.to_string())?.value.value();
        let slow = merel_unit_brute(q);
        ensure(fast == slow, || format!("merel unit mod {q}: {fast} vs brute force {slow}"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for r in run_all() {
            assert!(r.outcome.is_ok(), "{}: {:?}", r.name, r.outcome);
        }
    }
}
