//! Finite fields as a trait and dense univariate polynomials over them,
//! with distinct-root counting through `gcd(f, T^q - T)`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::is_prime;

pub trait FiniteField {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn order(&self) -> BigInt;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn int(&self, n: &BigInt) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;

    /// `x^e` for `e >= 0`.
    fn pow(&self, x: &Self::Elem, e: &BigInt) -> Self::Elem {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }
}

/// `Z/pZ` for a prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: BigInt,
}

impl PrimeField {
    /// `None` unless `p` is prime.
    pub fn new(p: &BigInt) -> Option<Self> {
        is_prime(p).then(|| PrimeField { p: p.clone() })
    }
}

impl FiniteField for PrimeField {
    type Elem = BigInt;

    fn order(&self) -> BigInt {
        self.p.clone()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn int(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.p)
    }
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &BigInt, y: &BigInt) -> BigInt {
        (x + y).mod_floor(&self.p)
    }
    fn sub(&self, x: &BigInt, y: &BigInt) -> BigInt {
        (x - y).mod_floor(&self.p)
    }
    fn neg(&self, x: &BigInt) -> BigInt {
        (-x).mod_floor(&self.p)
    }
    fn mul(&self, x: &BigInt, y: &BigInt) -> BigInt {
        (x * y).mod_floor(&self.p)
    }
    fn inv(&self, x: &BigInt) -> Option<BigInt> {
        x.modinv(&self.p)
    }
}

/// Coefficients from the constant term upward, without trailing zeros.
pub type Poly<E> = Vec<E>;

fn trim<F: FiniteField>(f: &F, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<E>(a: &Poly<E>) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn poly_from_ints<F: FiniteField>(f: &F, coeffs: &[BigInt]) -> Poly<F::Elem> {
    trim(f, coeffs.iter().map(|c| f.int(c)).collect())
}

pub fn poly_mul<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn poly_sub<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn poly_rem<F: FiniteField>(f: &F, a: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = f.inv(&m[dm]).expect("leading coefficient is nonzero");
    let mut r = trim(f, a.clone());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(&r[dr], &lead_inv);
        for i in 0..=dm {
            let t = f.mul(&c, &m[i]);
            r[dr - dm + i] = f.sub(&r[dr - dm + i], &t);
        }
        r = trim(f, r);
    }
    r
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn poly_gcd<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let mut x = trim(f, a.clone());
    let mut y = trim(f, b.clone());
    while !y.is_empty() {
        let r = poly_rem(f, &x, &y);
        x = y;
        y = r;
    }
    match x.last() {
        None => x,
        Some(lead) => {
            let inv = f.inv(lead).expect("nonzero leading coefficient");
            x.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn derivative<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    let out = a.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.int(&BigInt::from(i)))).collect();
    trim(f, out)
}

/// `T^e mod m`.
pub fn x_pow_mod<F: FiniteField>(f: &F, e: &BigInt, m: &Poly<F::Elem>) -> Poly<F::Elem> {
    let x = poly_rem(f, &vec![f.zero(), f.one()], m);
    let mut acc = poly_rem(f, &vec![f.one()], m);
    for i in (0..e.bits()).rev() {
        acc = poly_rem(f, &poly_mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = poly_rem(f, &poly_mul(f, &acc, &x), m);
        }
    }
    acc
}

/// Number of distinct roots of the nonzero polynomial `a` in the field.
pub fn count_distinct_roots<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> usize {
    let a = trim(f, a.clone());
    if degree(&a).unwrap_or(0) == 0 {
        return 0;
    }
    let xq = x_pow_mod(f, &f.order(), &a);
    let g = poly_gcd(f, &a, &poly_sub(f, &xq, &vec![f.zero(), f.one()]));
    degree(&g).unwrap_or(0)
}

/// No repeated factors over the algebraic closure.
pub fn is_squarefree<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> bool {
    let a = trim(f, a.clone());
    match degree(&a) {
        None => false,
        Some(0) => true,
        Some(_) => {
            let d = derivative(f, &a);
            !d.is_empty() && degree(&poly_gcd(f, &a, &d)) == Some(0)
        }
    }
}

/// Squarefree and a product of linear factors over the field.
pub fn splits_into_distinct_linear_factors<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> bool {
    let a = trim(f, a.clone());
    is_squarefree(f, &a) && Some(count_distinct_roots(f, &a)) == degree(&a)
}
