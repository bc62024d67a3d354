//! Rational-integer arithmetic: modular exponentiation, primality, the
//! Legendre symbol, square roots modulo a prime and a bounded solver for the
//! ternary form `x^2 - p1*y^2 - p2*z^2 = 0`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default search radius for [`solve_legendre_ternary`].
pub const DEFAULT_TERNARY_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("{a} is not a quadratic residue modulo {p}")]
    NonResidue { a: BigInt, p: BigInt },
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("no solution with |y|, |z| <= {bound}")]
    BoundExceeded { bound: u64 },
}

/// `a^e mod n`, reduced into `[0, n)`.
///
/// Panics if `n < 1`.
pub fn mod_pow(base: &BigInt, exp: &BigUint, modulus: &BigInt) -> BigInt {
    assert!(modulus.is_positive(), "modulus must be >= 1");
    let b = base.mod_floor(modulus);
    b.modpow(&BigInt::from_biguint(Sign::Plus, exp.clone()), modulus)
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

// Deterministic for every n < 2^64 (Sorenson & Webster).
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality test. Exact below 2^64; beyond that, trial division by the
/// primes below 1000 followed by a strong probable-prime test to 20 bases.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in (2u64..1000).filter(|&p| is_prime_u64(p)) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let bases = (2u64..).filter(|&p| is_prime_u64(p)).take(20);
    'witness: for a in bases {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x).mod_floor(n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn require_odd_prime(p: &BigInt) -> Result<(), ArithError> {
    if p <= &BigInt::from(2) || !is_prime(p) {
        return Err(ArithError::InvalidModulus(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre_symbol(a: &BigInt, p: &BigInt) -> Result<i8, ArithError> {
    require_odd_prime(p)?;
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Ok(0);
    }
    let e: BigInt = (p - 1u32) >> 1;
    let v = r.modpow(&e, p);
    Ok(if v.is_one() { 1 } else { -1 })
}

/// Square root of `a` modulo the odd prime `p` by Tonelli–Shanks. Returns the
/// root in `[1, (p-1)/2]`.
pub fn sqrt_mod_p(a: &BigInt, p: &BigInt) -> Result<BigInt, ArithError> {
    if legendre_symbol(a, p)? != 1 {
        return Err(ArithError::NonResidue { a: a.clone(), p: p.clone() });
    }
    let a = a.mod_floor(p);
    let one = BigInt::one();
    let p_minus_one = p - &one;
    let mut q = p_minus_one.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while legendre_symbol(&z, p)? != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2).mod_floor(p);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = (&b * &b).mod_floor(p);
        }
        m = i;
        c = (&b * &b).mod_floor(p);
        t = (&t * &c).mod_floor(p);
        r = (&r * &b).mod_floor(p);
    }
    let other = p - &r;
    Ok(if other < r { other } else { r })
}

/// A normalized solution of `x^2 - p1*y^2 - p2*z^2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernarySolution {
    #[serde(with = "crate::serde_bigint")]
    pub x: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub y: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub z: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub p1: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub p2: BigInt,
}

impl TernarySolution {
    /// Checks the form, primitivity and the 2-adic normalization.
    pub fn is_valid(&self) -> bool {
        let form = &self.x * &self.x - &self.p1 * &self.y * &self.y - &self.p2 * &self.z * &self.z;
        let g = self.x.gcd(&self.y).gcd(&self.z);
        form.is_zero()
            && g.is_one()
            && self.y.is_even()
            && (&self.x - &self.y).mod_floor(&BigInt::from(4)).is_one()
    }
}

fn check_quadratic_pair(p1: &BigInt, p2: &BigInt) -> Result<(), ArithError> {
    let four = BigInt::from(4);
    for p in [p1, p2] {
        if !is_prime(p) || !p.mod_floor(&four).is_one() {
            return Err(ArithError::NotAdmissible(format!("{p} is not a prime = 1 mod 4")));
        }
    }
    if p1 == p2 {
        return Err(ArithError::NotAdmissible("p1 and p2 must be distinct".into()));
    }
    if legendre_symbol(p1, p2)? != 1 || legendre_symbol(p2, p1)? != 1 {
        return Err(ArithError::NotAdmissible(format!("({p1}/{p2}) != 1")));
    }
    Ok(())
}

/// Bounded search for a normalized ternary solution.
///
/// Enumerates `z = 1..=bound`, then even `y` with `|y| <= bound`
/// (non-negative first); the sign of `x` is forced by `x - y = 1 mod 4`.
pub fn solve_legendre_ternary(p1: &BigInt, p2: &BigInt, bound: u64) -> Result<TernarySolution, ArithError> {
    check_quadratic_pair(p1, p2)?;
    for z in 1..=bound {
        let z_big = BigInt::from(z);
        let pz = p2 * &z_big * &z_big;
        for y_abs in (0..=bound).step_by(2) {
            for y in [y_abs as i128, -(y_abs as i128)] {
                if y_abs == 0 && y < 0 {
                    continue;
                }
                let y_big = BigInt::from(y);
                let rhs = p1 * &y_big * &y_big + &pz;
                let root = rhs.sqrt();
                if &root * &root != rhs {
                    continue;
                }
                for x in [root.clone(), -root.clone()] {
                    let sol = TernarySolution {
                        x,
                        y: y_big.clone(),
                        z: z_big.clone(),
                        p1: p1.clone(),
                        p2: p2.clone(),
                    };
                    if sol.is_valid() {
                        return Ok(sol);
                    }
                }
            }
        }
    }
    Err(ArithError::BoundExceeded { bound })
}

/// `C(n, k)` for an arbitrary integer `n` (generalized binomial).
pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn pow_by_repeated_multiplication(a: i64, e: u32, n: i64) -> i64 {
        let mut acc = 1i64.rem_euclid(n);
        for _ in 0..e {
            acc = (acc * a).rem_euclid(n);
        }
        acc
    }

    fn is_prime_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(pow_by_repeated_multiplication(2, 10, 1000), 24);
        assert_eq!(mod_pow(&b(2), &BigUint::from(10u32), &b(1000)), b(24));
        assert_eq!(mod_pow(&b(7), &BigUint::zero(), &b(13)), b(1));
        assert_eq!(mod_pow(&b(7), &BigUint::zero(), &b(1)), b(0));
        assert_eq!(mod_pow(&b(0), &BigUint::from(5u32), &b(7)), b(0));
        assert_eq!(mod_pow(&b(-3), &BigUint::from(3u32), &b(10)), b(3));
    }

    #[test]
    fn mod_pow_matches_repeated_multiplication() {
        for a in -20..20 {
            for e in 0..12 {
                for n in 1..30 {
                    let want = pow_by_repeated_multiplication(a, e, n);
                    assert_eq!(mod_pow(&b(a), &BigUint::from(e), &b(n)), b(want));
                }
            }
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&b(2)));
        assert!(!is_prime(&b(91)));
        assert!(!is_prime(&b(5041)));
        assert!(!is_prime(&b(1)));
        assert!(!is_prime(&b(0)));
        assert!(!is_prime(&b(-7)));
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), is_prime_trial(n), "n = {n}");
        }
    }

    #[test]
    fn primality_beyond_u64() {
        // 2^89 - 1 is a Mersenne prime, 2^67 - 1 = 193707721 * 761838257287.
        let m89 = (BigInt::one() << 89) - 1;
        let m67 = (BigInt::one() << 67) - 1;
        assert!(is_prime(&m89));
        assert!(!is_prime(&m67));
        // strong pseudoprime to the first few bases would still be caught
        assert!(!is_prime(&(BigInt::from(3825123056546413051u64) * 3)));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(&b(2), &b(7)), Ok(1));
        assert_eq!(legendre_symbol(&b(3), &b(7)), Ok(-1));
        assert_eq!(legendre_symbol(&b(14), &b(7)), Ok(0));
        assert!(matches!(legendre_symbol(&b(3), &b(9)), Err(ArithError::InvalidModulus(_))));
        assert!(matches!(legendre_symbol(&b(3), &b(2)), Err(ArithError::InvalidModulus(_))));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod_p(&b(13), &b(17)), Ok(b(8)));
        assert_eq!(sqrt_mod_p(&b(4), &b(101)), Ok(b(2)));
        assert_eq!(sqrt_mod_p(&b(4), &b(7)), Ok(b(2)));
        assert!(matches!(sqrt_mod_p(&b(3), &b(7)), Err(ArithError::NonResidue { .. })));
    }

    #[test]
    fn sqrt_is_small_root() {
        for p in (3u64..400).filter(|&p| is_prime_u64(p)) {
            for a in 1..p {
                if legendre_symbol(&b(a as i64), &b(p as i64)) == Ok(1) {
                    let s = sqrt_mod_p(&b(a as i64), &b(p as i64)).unwrap();
                    assert_eq!((&s * &s) % p, b(a as i64));
                    assert!(s > b(0) && s <= b(((p - 1) / 2) as i64));
                }
            }
        }
    }

    #[test]
    fn ternary_examples() {
        let sol = solve_legendre_ternary(&b(13), &b(17), 50).unwrap();
        assert_eq!((sol.x.clone(), sol.y.clone(), sol.z.clone()), (b(-15), b(4), b(1)));
        assert!(sol.is_valid());
        let sol = solve_legendre_ternary(&b(5), &b(29), 50).unwrap();
        assert_eq!((sol.x.clone(), sol.y.clone(), sol.z.clone()), (b(7), b(2), b(1)));
        assert!(matches!(
            solve_legendre_ternary(&b(5), &b(13), 50),
            Err(ArithError::NotAdmissible(_))
        ));
        assert!(matches!(
            solve_legendre_ternary(&b(7), &b(29), 50),
            Err(ArithError::NotAdmissible(_))
        ));
    }

    #[test]
    fn ternary_bound_too_small() {
        // (13, 17) needs y = 4, so a bound of 2 cannot reach it.
        assert_eq!(
            solve_legendre_ternary(&b(13), &b(17), 2),
            Err(ArithError::BoundExceeded { bound: 2 })
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(&b(5), 2), b(10));
        assert_eq!(binomial(&b(3), 5), b(0));
        assert_eq!(binomial(&b(-1), 3), b(-1));
        assert_eq!(binomial(&b(-2), 2), b(3));
    }
}
