//! The triple quadratic residue symbol of primes `p1, p2, p3 = 1 mod 4`.
//!
//! From a primitive solution of `x^2 = p1 y^2 + p2 z^2` with `y` even and
//! `x - y = 1 mod 4`, the element `a = x + y sqrt(p1)` defines the dihedral
//! field `Q(sqrt p1, sqrt p2, sqrt a)`. The symbol is `(x + s y / p3)` with
//! `s^2 = p1 mod p3`; the oracle instead counts roots of the minimal
//! polynomial `T^4 - 2x T^2 + p2 z^2` of `sqrt a` modulo `p3`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, legendre_symbol, solve_legendre_ternary, sqrt_mod_p, ArithError, TernarySolution};
use crate::poly::{count_distinct_roots, is_squarefree, poly_from_ints, PrimeField};
use crate::symbol::SymbolValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RedeiError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("primes must be pairwise distinct")]
    DistinctnessViolated,
    #[error("degenerate: {0}")]
    Degenerate(String),
}

/// The defining data `a = x + y sqrt(p1)` of the dihedral field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedeiCertificate {
    pub sol: TernarySolution,
}

impl RedeiCertificate {
    pub fn p1(&self) -> &BigInt {
        &self.sol.p1
    }

    pub fn p2(&self) -> &BigInt {
        &self.sol.p2
    }

    /// `(x, y)` with `a = x + y sqrt(p1)`.
    pub fn alpha(&self) -> (&BigInt, &BigInt) {
        (&self.sol.x, &self.sol.y)
    }
}

fn one_mod_four(p: &BigInt) -> bool {
    p.mod_floor(&BigInt::from(4)) == BigInt::from(1)
}

/// All three are `1 mod 4` and pairwise quadratic residues.
pub fn redei_admissible(p1: &BigInt, p2: &BigInt, p3: &BigInt) -> Result<bool, RedeiError> {
    let ps = [p1, p2, p3];
    if p1 == p2 || p2 == p3 || p1 == p3 {
        return Err(RedeiError::DistinctnessViolated);
    }
    if let Some(p) = ps.iter().find(|p| !is_prime(p) || **p == &BigInt::from(2)) {
        return Err(ArithError::InvalidModulus(format!("{p} is not an odd prime")).into());
    }
    if !ps.iter().all(|p| one_mod_four(p)) {
        return Ok(false);
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j && legendre_symbol(ps[i], ps[j])? != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn construct_alpha(p1: &BigInt, p2: &BigInt, bound: u64) -> Result<RedeiCertificate, RedeiError> {
    if p1 == p2 {
        return Err(RedeiError::DistinctnessViolated);
    }
    match solve_legendre_ternary(p1, p2, bound) {
        Ok(sol) => Ok(RedeiCertificate { sol }),
        Err(ArithError::NotAdmissible(msg)) => Err(RedeiError::NotAdmissible(msg)),
        Err(e) => Err(e.into()),
    }
}

/// Symbol from a certificate and a chosen square root `s` of `p1` mod `p3`.
pub fn redei_symbol_with_root(cert: &RedeiCertificate, p3: &BigInt, s: &BigInt) -> Result<SymbolValue, RedeiError> {
    let (x, y) = cert.alpha();
    for v in [x + s * y, x - s * y] {
        match legendre_symbol(&v, p3)? {
            0 => continue,
            1 => return Ok(SymbolValue::new(2, 0)),
            _ => return Ok(SymbolValue::new(2, 1)),
        }
    }
    Err(RedeiError::Degenerate(format!("{p3} divides both x + sy and x - sy")))
}

/// Symbol from a certificate, using the smaller square root of `p1` mod `p3`.
pub fn redei_symbol_from_certificate(cert: &RedeiCertificate, p3: &BigInt) -> Result<SymbolValue, RedeiError> {
    let s = sqrt_mod_p(cert.p1(), p3)?;
    redei_symbol_with_root(cert, p3, &s)
}

pub fn redei_symbol(p1: &BigInt, p2: &BigInt, p3: &BigInt, bound: u64) -> Result<SymbolValue, RedeiError> {
    if !redei_admissible(p1, p2, p3)? {
        return Err(RedeiError::NotAdmissible(format!("({p1}, {p2}, {p3})")));
    }
    let cert = construct_alpha(p1, p2, bound)?;
    redei_symbol_from_certificate(&cert, p3)
}

/// `p3` splits completely in the dihedral field of `cert`: `p1`, `p2` are
/// squares mod `p3` and `T^4 - 2x T^2 + p2 z^2` has four roots mod `p3`.
pub fn redei_splitting_oracle(cert: &RedeiCertificate, p3: &BigInt) -> Result<bool, RedeiError> {
    if legendre_symbol(cert.p1(), p3)? != 1 || legendre_symbol(cert.p2(), p3)? != 1 {
        return Ok(false);
    }
    let field = PrimeField::new(p3).ok_or_else(|| ArithError::InvalidModulus(p3.to_string()))?;
    let sol = &cert.sol;
    let coeffs = [&sol.p2 * &sol.z * &sol.z, BigInt::zero(), -(&sol.x * 2u32), BigInt::zero(), BigInt::from(1)];
    let quartic = poly_from_ints(&field, &coeffs);
    if !is_squarefree(&field, &quartic) {
        return Err(RedeiError::Degenerate(format!("the quartic has a repeated root mod {p3}")));
    }
    Ok(count_distinct_roots(&field, &quartic) == 4)
}
