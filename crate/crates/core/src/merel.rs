//! The Merel unit of (Z/q)* and Mazur's nonvanishing criterion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::{is_prime, mul_mod, plog, pow_mod, PLogClass, Residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MerelUnit {
    pub q: u64,
    pub value: Residue,
    pub zeta: Residue,
}

/// `zeta^2 * prod_{i=1}^{(q-1)/2} i^(-8i)` in (Z/q)*, with `zeta = 1` when
/// `q = 2 mod 3` and `zeta = 2^((q-1)/3)` otherwise.
pub fn merel_unit(q: u64) -> Result<MerelUnit> {
    if q == 2 || !is_prime(q) {
        return Err(Error::InvalidPrime(q));
    }
    let zeta = if q % 3 == 2 {
        Residue::new(1, q)
    } else {
        pow_mod(2, ((q - 1) / 3) as i64, q)?
    };
    let order = (q - 1) as i64;
    let mut value = mul_mod(zeta.value(), zeta.value(), q);
    for i in 1..=(q - 1) / 2 {
        // exponent -8i reduced mod q - 1 keeps the power small
        let e = (-8 * i as i64).rem_euclid(order);
        value = mul_mod(value, pow_mod(i, e, q)?.value(), q);
    }
    Ok(MerelUnit {
        q,
        value: Residue::new(value as i64, q),
        zeta,
    })
}

/// Image of the Merel unit in F_p<1>.
pub fn merel_class(q: u64, p: u64) -> Result<PLogClass> {
    let unit = merel_unit(q)?;
    plog(q, p, unit.value.value())
}

/// Mazur's criterion: the Eisenstein part of S_2(Gamma_0(q)) localised at p
/// has rank one exactly when the Merel unit is nontrivial mod p.
pub fn mazur_nonvanishing(q: u64, p: u64) -> Result<bool> {
    Ok(!merel_class(q, p)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffarith::primes_up_to;

    #[test]
    fn merel_unit_examples() {
        let u = merel_unit(11).unwrap();
        assert_eq!(u.zeta.value(), 1);
        assert_eq!(u.value.value(), 3);
        assert_eq!(merel_unit(7).unwrap().zeta.value(), 4);
        assert!(matches!(merel_unit(2), Err(Error::InvalidPrime(2))));
        assert!(matches!(merel_unit(15), Err(Error::InvalidPrime(15))));
    }

    #[test]
    fn merel_class_examples() {
        assert_eq!(merel_class(11, 5).unwrap().exponent, 3);
        assert_eq!(merel_class(103, 17).unwrap().exponent, 0);
        assert_eq!(merel_class(127, 7).unwrap().exponent, 0);
        assert!(merel_class(11, 7).is_err());
    }

    #[test]
    fn mazur_examples() {
        assert!(mazur_nonvanishing(11, 5).unwrap());
        assert!(!mazur_nonvanishing(103, 17).unwrap());
        assert!(mazur_nonvanishing(61, 5).unwrap());
    }

    #[test]
    fn zeta_is_a_cube_root_of_unity() {
        for q in primes_up_to(200).into_iter().filter(|&q| q % 3 == 1) {
            let z = merel_unit(q).unwrap().zeta.value();
            assert_eq!(z * z % q * z % q, 1, "q = {q}");
        }
    }

    #[test]
    fn agrees_with_naive_product() {
        // product over the raw exponents q-1-8i mod (q-1), one factor at a time
        for q in primes_up_to(200).into_iter().filter(|&q| q > 2) {
            let order = q - 1;
            let zeta = if q % 3 == 2 { 1 } else { pow_mod(2, (order / 3) as i64, q).unwrap().value() };
            let mut acc = zeta * zeta % q;
            for i in 1..=order / 2 {
                let e = ((order as i64 - ((8 * i) % order) as i64) % order as i64) as u64;
                for _ in 0..e {
                    acc = acc * i % q;
                }
            }
            assert_eq!(merel_unit(q).unwrap().value.value(), acc, "q = {q}");
        }
    }
}
