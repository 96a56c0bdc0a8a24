//! The cubic-field side: defining polynomials, reduction of the unit at a
//! degree-one prime, and its class in F_p<1>.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::{add_mod, mul_mod, plog, PLogClass, Residue};

/// A cubic field given by a monic `x^3 + a x + b` with `b = -1`, so the root
/// is a unit of norm one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicField {
    pub disc: i64,
    /// `[a0, a1, a2]` for `x^3 + a2 x^2 + a1 x + a0`.
    pub coeffs: [i64; 3],
}

impl CubicField {
    /// `-4 a^3 - 27 b^2` for the depressed cubic `x^3 + a x + b`.
    pub fn poly_discriminant(&self) -> i64 {
        let [b, a, _] = self.coeffs;
        -4 * a * a * a - 27 * b * b
    }

    pub fn eval_mod(&self, x: u64, q: u64) -> u64 {
        let [a0, a1, a2] = self.coeffs.map(|c| c.rem_euclid(q as i64) as u64);
        let mut acc = 1;
        for c in [a2, a1, a0] {
            acc = add_mod(mul_mod(acc, x, q), c, q);
        }
        acc
    }

    /// Norm of the root: `-a0` for a monic cubic.
    pub fn root_norm(&self) -> i64 {
        -self.coeffs[0]
    }
}

pub fn cubic_poly(disc: i64) -> Result<CubicField> {
    let coeffs = match disc {
        -23 => [-1, -1, 0],
        -31 => [-1, 1, 0],
        other => return Err(Error::UnsupportedDiscriminant(other)),
    };
    let field = CubicField { disc, coeffs };
    assert_eq!(field.poly_discriminant(), disc);
    Ok(field)
}

pub fn roots_mod_q(field: &CubicField, q: u64) -> Result<Vec<Residue>> {
    if field.disc.unsigned_abs() % q == 0 {
        return Err(Error::RamifiedPrime { q, disc: field.disc });
    }
    Ok((0..q)
        .filter(|&x| field.eval_mod(x, q) == 0)
        .map(|x| Residue::new(x as i64, q))
        .collect())
}

/// Image of the root under `O_K -> O_K / q~ = Z/q`, where `q~` is the unique
/// degree-one prime above q.
pub fn unit_reduction(field: &CubicField, q: u64) -> Result<Residue> {
    let roots = roots_mod_q(field, q)?;
    match roots.as_slice() {
        [r] => Ok(*r),
        _ => Err(Error::NotTransposition { q, roots: roots.len() }),
    }
}

pub fn stark_class(field: &CubicField, q: u64, p: u64) -> Result<PLogClass> {
    let u = unit_reduction(field, q)?;
    plog(q, p, u.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffarith::{is_prime, legendre, primes_up_to};
    use crate::qseries::weight_one_form;

    #[test]
    fn cubic_poly_examples() {
        let f = cubic_poly(-23).unwrap();
        assert_eq!(f.coeffs, [-1, -1, 0]);
        assert_eq!(f.poly_discriminant(), -23);
        let g = cubic_poly(-31).unwrap();
        assert_eq!(g.coeffs, [-1, 1, 0]);
        assert_eq!(g.poly_discriminant(), -31);
        assert_eq!(f.root_norm(), 1);
        assert_eq!(g.root_norm(), 1);
        assert!(matches!(cubic_poly(-44), Err(Error::UnsupportedDiscriminant(-44))));
    }

    #[test]
    fn roots_examples() {
        let f = cubic_poly(-23).unwrap();
        assert_eq!(roots_mod_q(&f, 11).unwrap(), vec![Residue::new(6, 11)]);
        let n59 = roots_mod_q(&f, 59).unwrap().len();
        assert_eq!(legendre(-23, 59), 1);
        assert!(n59 == 0 || n59 == 3);
        assert_eq!(roots_mod_q(&cubic_poly(-31).unwrap(), 23).unwrap().len(), 1);
        assert!(matches!(roots_mod_q(&f, 23), Err(Error::RamifiedPrime { .. })));
    }

    #[test]
    fn unit_reduction_examples() {
        let f = cubic_poly(-23).unwrap();
        assert_eq!(unit_reduction(&f, 11).unwrap().value(), 6);
        let n13 = roots_mod_q(&f, 13).unwrap().len();
        match unit_reduction(&f, 13) {
            Ok(_) => assert_eq!(n13, 1),
            Err(Error::NotTransposition { roots, .. }) => assert_eq!(roots, n13),
            Err(e) => panic!("{e}"),
        }
        for q in primes_up_to(200).into_iter().filter(|&q| q != 23) {
            if let Ok(r) = unit_reduction(&f, q) {
                assert_ne!(r.value(), 0);
            }
        }
    }

    #[test]
    fn stark_class_examples() {
        let f = cubic_poly(-23).unwrap();
        assert_eq!(stark_class(&f, 11, 5).unwrap().exponent, 4);
        let s = stark_class(&f, 61, 5).unwrap();
        let m = crate::merel::merel_class(61, 5).unwrap();
        assert_eq!(s.ratio(&m), Some(1));
    }

    #[test]
    fn one_root_iff_legendre_minus_one() {
        for disc in [-23i64, -31] {
            let f = cubic_poly(disc).unwrap();
            for q in primes_up_to(200).into_iter().filter(|&q| q as i64 != -disc) {
                let n = roots_mod_q(&f, q).unwrap().len();
                assert_eq!(n == 1, legendre(disc, q) == -1, "disc {disc} q {q}");
            }
        }
    }

    #[test]
    fn admissible_cofactor_has_no_root() {
        // divide f by (x - r); the quadratic cofactor x^2 + r x + (r^2 + a1) must be irreducible
        for disc in [-23i64, -31] {
            let f = cubic_poly(disc).unwrap();
            for q in primes_up_to(200).into_iter().filter(|&q| q > 2 && q as i64 != -disc) {
                let Ok(r) = unit_reduction(&f, q) else { continue };
                let r = r.value();
                let a1 = f.coeffs[1].rem_euclid(q as i64) as u64;
                let c0 = add_mod(mul_mod(r, r, q), a1, q);
                assert!((0..q).all(|x| add_mod(add_mod(mul_mod(x, x, q), mul_mod(r, x, q), q), c0, q) != 0));
            }
        }
    }

    #[test]
    fn one_root_iff_weight_one_coefficient_vanishes() {
        for disc in [-23i64, -31] {
            let f = cubic_poly(disc).unwrap();
            let g = weight_one_form(disc, 151).unwrap();
            for q in primes_up_to(150).into_iter().filter(|&q| q as i64 != -disc && is_prime(q)) {
                let one_root = roots_mod_q(&f, q).unwrap().len() == 1;
                assert_eq!(one_root, g.coeff(q as usize) == 0, "disc {disc} q {q}");
            }
        }
    }
}
