//! Arithmetic in the Eisenstein integers `Z[w]`, `w^2 + w + 1 = 0`.
//!
//! Elements are pairs `(a, b)` denoting `a + b*w`. Primes are stored through
//! a normalized generator: for norms `= 1 mod 9` this is the unique associate
//! `= 1 mod 3*sqrt(-3)`; for other norms prime to 3 the unique associate
//! `= 1 mod 3`. Residue fields of primes not above 3 are `F_p` (split) or
//! `F_p[T]/(T^2 + T + 1)` (inert).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, sqrt_mod_p};
use crate::poly::FiniteField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EisError {
    #[error("not prime: {0}")]
    NotPrime(String),
    #[error("norm {norm} is not 1 mod 9")]
    NotNineAdmissible { norm: BigInt },
    #[error("prime lies above 3")]
    Ramified,
    #[error("the prime divides the argument")]
    DividesArgument,
    #[error("element is not a cube in the residue field")]
    NotACube,
    #[error("cannot parse Eisenstein integer: {0}")]
    Parse(String),
}

/// `a + b*w` with `w` a primitive cube root of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct EisInt {
    #[serde(with = "crate::serde_bigint")]
    pub a: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub b: BigInt,
}

/// Number of residue classes modulo `3*sqrt(-3)`.
pub const CLASSES_MOD_3S: usize = 27;

impl EisInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn zeta() -> Self {
        Self::new(0, 1)
    }

    /// `sqrt(-3) = 1 + 2w`.
    pub fn sqrt_minus_three() -> Self {
        Self::new(1, 2)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Complex conjugate: `w -> w^2`.
    pub fn conj(&self) -> Self {
        EisInt { a: &self.a - &self.b, b: -&self.b }
    }

    /// `w^j` for `j` taken mod 3.
    pub fn zeta_pow(j: u32) -> Self {
        match j % 3 {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            _ => Self::new(-1, -1),
        }
    }

    /// The six units, ordered `1, w, w^2, -1, -w, -w^2`.
    pub fn units() -> [EisInt; 6] {
        let u = [Self::zeta_pow(0), Self::zeta_pow(1), Self::zeta_pow(2)];
        [u[0].clone(), u[1].clone(), u[2].clone(), -&u[0], -&u[1], -&u[2]]
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        EisInt { a: &self.a * k, b: &self.b * k }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self / d` when it lies in `Z[w]`.
    pub fn div_exact(&self, d: &EisInt) -> Option<EisInt> {
        let n = d.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &d.conj();
        if (&num.a % &n).is_zero() && (&num.b % &n).is_zero() {
            Some(EisInt { a: num.a / &n, b: num.b / &n })
        } else {
            None
        }
    }

    pub fn divides(&self, u: &EisInt) -> bool {
        if self.is_zero() {
            return u.is_zero();
        }
        u.div_exact(self).is_some()
    }

    /// Quotient rounded coordinate-wise; the remainder has norm `< N(d)`.
    fn div_round(&self, d: &EisInt) -> EisInt {
        let n = d.norm();
        let num = self * &d.conj();
        let two_n: BigInt = &n * 2u32;
        let round = |x: &BigInt| -> BigInt { (x * 2u32 + &n).div_floor(&two_n) };
        EisInt { a: round(&num.a), b: round(&num.b) }
    }

    /// A greatest common divisor, defined up to units.
    pub fn gcd(&self, other: &EisInt) -> EisInt {
        let mut x = self.clone();
        let mut y = other.clone();
        while !y.is_zero() {
            let q = x.div_round(&y);
            let r = &x - &(&q * &y);
            x = y;
            y = r;
        }
        x
    }

    /// The unique associate with `a > b >= 0` (zero maps to zero).
    pub fn canonical_associate(&self) -> EisInt {
        if self.is_zero() {
            return self.clone();
        }
        Self::units()
            .iter()
            .map(|u| u * self)
            .find(|v| !v.b.is_negative() && v.a > v.b)
            .expect("every nonzero element has one associate in the sector")
    }

    /// Index in `0..27` of the class modulo `3*sqrt(-3)`, reduced against the
    /// lattice basis `(3, 6), (0, 9)`.
    pub fn class_mod_3s(&self) -> usize {
        let three = BigInt::from(3);
        let (k, a0) = self.a.div_mod_floor(&three);
        let b: BigInt = &self.b - k * BigInt::from(6);
        let b0 = b.mod_floor(&BigInt::from(9));
        (a0.to_usize().unwrap()) * 9 + b0.to_usize().unwrap()
    }

    /// Canonical representative of class `idx` (inverse of [`class_mod_3s`]).
    pub fn from_class_mod_3s(idx: usize) -> EisInt {
        EisInt::new((idx / 9) as i64, (idx % 9) as i64)
    }

    pub fn is_one_mod_3s(&self) -> bool {
        self.class_mod_3s() == 9
    }

    pub fn is_one_mod_3(&self) -> bool {
        let three = BigInt::from(3);
        (&self.a - 1u32).mod_floor(&three).is_zero() && self.b.mod_floor(&three).is_zero()
    }

    pub fn reduce_mod_int(&self, n: &BigInt) -> EisInt {
        EisInt { a: self.a.mod_floor(n), b: self.b.mod_floor(n) }
    }

    /// Largest absolute coordinate.
    pub fn height(&self) -> BigInt {
        self.a.abs().max(self.b.abs())
    }
}

macro_rules! eis_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&EisInt> for &EisInt {
            type Output = EisInt;
            fn $m(self, o: &EisInt) -> EisInt {
                let f: fn(&EisInt, &EisInt) -> EisInt = $body;
                f(self, o)
            }
        }
        impl $tr<EisInt> for EisInt {
            type Output = EisInt;
            fn $m(self, o: EisInt) -> EisInt {
                (&self).$m(&o)
            }
        }
        impl $tr<&EisInt> for EisInt {
            type Output = EisInt;
            fn $m(self, o: &EisInt) -> EisInt {
                (&self).$m(o)
            }
        }
        impl $tr<EisInt> for &EisInt {
            type Output = EisInt;
            fn $m(self, o: EisInt) -> EisInt {
                self.$m(&o)
            }
        }
    };
}

eis_binop!(Add, add, |x, y| EisInt { a: &x.a + &y.a, b: &x.b + &y.b });
eis_binop!(Sub, sub, |x, y| EisInt { a: &x.a - &y.a, b: &x.b - &y.b });
// (a + bw)(c + dw) = ac - bd + (ad + bc - bd)w
eis_binop!(Mul, mul, |x, y| {
    let bd = &x.b * &y.b;
    EisInt { a: &x.a * &y.a - &bd, b: &x.a * &y.b + &x.b * &y.a - bd }
});

impl Neg for &EisInt {
    type Output = EisInt;
    fn neg(self) -> EisInt {
        EisInt { a: -&self.a, b: -&self.b }
    }
}

impl Neg for EisInt {
    type Output = EisInt;
    fn neg(self) -> EisInt {
        -&self
    }
}

impl From<i64> for EisInt {
    fn from(n: i64) -> Self {
        EisInt::from_int(n)
    }
}

impl fmt::Display for EisInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coef = |b: &BigInt| -> String {
            if b.is_one() {
                "w".to_string()
            } else if *b == BigInt::from(-1) {
                "-w".to_string()
            } else {
                format!("{b}*w")
            }
        };
        if self.a.is_zero() {
            return write!(f, "{}", coef(&self.b));
        }
        let bs = coef(&self.b);
        if bs.starts_with('-') {
            write!(f, "{}{}", self.a, bs)
        } else {
            write!(f, "{}+{}", self.a, bs)
        }
    }
}

impl FromStr for EisInt {
    type Err = EisError;

    /// Accepts sums of integer terms and `w`-terms, e.g. `5+2*w`, `-1-w`, `3w`.
    fn from_str(s: &str) -> Result<Self, EisError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(EisError::Parse(s.to_string()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in compact.char_indices() {
            if (c == '+' || c == '-') && i > start {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut out = EisInt::zero();
        for term in terms {
            let bad = || EisError::Parse(s.to_string());
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            if let Some(c) = body.strip_suffix('w') {
                let c = c.strip_suffix('*').unwrap_or(c);
                let k: BigInt = if c.is_empty() { BigInt::one() } else { c.parse().map_err(|_| bad())? };
                out.b += k * sign;
            } else {
                let k: BigInt = body.parse().map_err(|_| bad())?;
                out.a += k * sign;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    Split,
    Inert,
    Ramified,
}

/// A prime of `Z[w]` with its normalized generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisPrime {
    pub pi: EisInt,
    /// Absolute norm of `pi`.
    #[serde(with = "crate::serde_bigint")]
    pub q: BigInt,
    /// Rational prime below.
    #[serde(with = "crate::serde_bigint")]
    pub p: BigInt,
    pub kind: PrimeKind,
    /// `q = 1 mod 9`; exactly then `pi = 1 mod 3*sqrt(-3)`.
    pub nine_admissible: bool,
}

/// User-facing description of a prime: a rational prime or an explicit generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeInput {
    Rational(BigInt),
    Generator(EisInt),
}

impl FromStr for PrimeInput {
    type Err = EisError;
    fn from_str(s: &str) -> Result<Self, EisError> {
        if s.contains('w') {
            Ok(PrimeInput::Generator(s.parse()?))
        } else {
            s.trim().parse().map(PrimeInput::Rational).map_err(|_| EisError::Parse(s.to_string()))
        }
    }
}

fn unit_multiple(g: &EisInt, pred: impl Fn(&EisInt) -> bool) -> Option<EisInt> {
    EisInt::units().iter().map(|u| u * g).find(|v| pred(v))
}

impl EisPrime {
    /// Builds the prime generated by `g`, choosing the normalized associate.
    pub fn from_generator(g: &EisInt) -> Result<EisPrime, EisError> {
        let n = g.norm();
        if is_prime(&n) {
            if n == BigInt::from(3) {
                return Ok(EisPrime {
                    pi: g.canonical_associate(),
                    q: n.clone(),
                    p: n,
                    kind: PrimeKind::Ramified,
                    nine_admissible: false,
                });
            }
            return Ok(Self::normalized(g, n.clone(), n, PrimeKind::Split));
        }
        let r = n.sqrt();
        if &r * &r == n && is_prime(&r) && r.mod_floor(&BigInt::from(3)) == BigInt::from(2) {
            // An element of norm p^2 generates (p) exactly when p divides it.
            if (&g.a % &r).is_zero() && (&g.b % &r).is_zero() {
                return Ok(Self::normalized(g, n, r, PrimeKind::Inert));
            }
        }
        Err(EisError::NotPrime(g.to_string()))
    }

    fn normalized(g: &EisInt, q: BigInt, p: BigInt, kind: PrimeKind) -> EisPrime {
        let nine = q.mod_floor(&BigInt::from(9)).is_one();
        let pi = if nine {
            unit_multiple(g, EisInt::is_one_mod_3s)
        } else {
            unit_multiple(g, EisInt::is_one_mod_3)
        }
        .expect("units surject onto the unit classes mod 3 and mod 3*sqrt(-3)");
        EisPrime { pi, q, p, kind, nine_admissible: nine }
    }

    /// Builds a prime above the rational prime `p`. For `p = 1 mod 3` the
    /// generator is `gcd(p, r - w)` with `r = (-1 + s)/2`, `s` the smaller
    /// square root of `-3` mod `p`.
    pub fn from_rational(p: &BigInt) -> Result<EisPrime, EisError> {
        if !is_prime(p) {
            return Err(EisError::NotPrime(p.to_string()));
        }
        let three = BigInt::from(3);
        if *p == three {
            return Self::from_generator(&EisInt::new(2, 1));
        }
        if p.mod_floor(&three) == BigInt::from(2) {
            return Self::from_generator(&EisInt::from_int(p.clone()));
        }
        let s = sqrt_mod_p(&BigInt::from(-3), p).expect("-3 is a square mod p = 1 mod 3");
        let half = (p + 1u32) / 2u32;
        let r = ((s - 1u32) * half).mod_floor(p);
        let g = EisInt::from_int(p.clone()).gcd(&EisInt { a: r, b: BigInt::from(-1) });
        Self::from_generator(&g)
    }

    pub fn from_input(input: &PrimeInput) -> Result<EisPrime, EisError> {
        match input {
            PrimeInput::Rational(p) => Self::from_rational(p),
            PrimeInput::Generator(g) => Self::from_generator(g),
        }
    }

    /// The two primes generate the same ideal.
    pub fn same_ideal(&self, other: &EisPrime) -> bool {
        self.pi.divides(&other.pi) && other.pi.divides(&self.pi)
    }
}

/// The normalized prime for `input`: its generator is the unique unit
/// multiple `= 1 mod 3*sqrt(-3)`.
pub fn normalize_prime(input: &PrimeInput) -> Result<EisPrime, EisError> {
    let prime = EisPrime::from_input(input)?;
    if prime.kind == PrimeKind::Ramified {
        return Err(EisError::Ramified);
    }
    if !prime.nine_admissible {
        return Err(EisError::NotNineAdmissible { norm: prime.q });
    }
    Ok(prime)
}

/// Vanishing criterion for the obstruction group over `Q(w)` with `l = 3`:
/// some member has norm `4` or `7` mod 9.
pub fn b_s_vanishes(primes: &[EisPrime]) -> bool {
    let nine = BigInt::from(9);
    primes.iter().any(|p| {
        let r = p.q.mod_floor(&nine);
        r == BigInt::from(4) || r == BigInt::from(7)
    })
}

/// Smallest split prime whose norm is `4` or `7` mod 9; its generator is
/// normalized `= 1 mod 3` since no associate is `1 mod 3*sqrt(-3)`.
pub fn auxiliary_prime() -> EisPrime {
    let mut p = 7u64;
    loop {
        if p % 3 == 1 && matches!(p % 9, 4 | 7) && crate::arith::is_prime_u64(p) {
            return EisPrime::from_rational(&BigInt::from(p)).expect("p is a split prime");
        }
        p += 1;
    }
}

/// An element of a residue field: `c0 + c1*T`; `c1 = 0` for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RFElem {
    #[serde(with = "crate::serde_bigint")]
    pub c0: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub c1: BigInt,
}

impl RFElem {
    pub fn new(c0: impl Into<BigInt>, c1: impl Into<BigInt>) -> Self {
        RFElem { c0: c0.into(), c1: c1.into() }
    }
}

/// `O_k / P` for a prime `P` not above 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    prime: EisPrime,
    kind: PrimeKind,
    p: BigInt,
    q: BigInt,
    omega: RFElem,
}

pub fn residue_field_of(prime: &EisPrime) -> Result<ResidueField, EisError> {
    let p = prime.p.clone();
    let omega = match prime.kind {
        PrimeKind::Ramified => return Err(EisError::Ramified),
        PrimeKind::Inert => RFElem::new(0, 1),
        // a + b*omega = 0; b is a unit mod p because p does not divide pi.
        PrimeKind::Split => {
            let b_inv = prime.pi.b.modinv(&p).expect("split generator has b prime to p");
            RFElem::new((-&prime.pi.a * b_inv).mod_floor(&p), 0)
        }
    };
    Ok(ResidueField { prime: prime.clone(), kind: prime.kind, q: prime.q.clone(), p, omega })
}

impl ResidueField {
    pub fn prime(&self) -> &EisPrime {
        &self.prime
    }

    pub fn kind(&self) -> PrimeKind {
        self.kind
    }

    pub fn characteristic(&self) -> &BigInt {
        &self.p
    }

    pub fn omega(&self) -> &RFElem {
        &self.omega
    }

    /// Image of `u` under the homomorphism `w -> omega`.
    pub fn reduce(&self, u: &EisInt) -> RFElem {
        match self.kind {
            PrimeKind::Inert => self.elem(u.a.clone(), u.b.clone()),
            _ => self.int(&(&u.a + &u.b * &self.omega.c0)),
        }
    }

    pub fn elem(&self, c0: BigInt, c1: BigInt) -> RFElem {
        let c1 = if self.kind == PrimeKind::Inert { c1.mod_floor(&self.p) } else { BigInt::zero() };
        RFElem { c0: c0.mod_floor(&self.p), c1 }
    }

    /// Integer encoding `c0 + c1*p`, used to order field elements.
    pub fn encode(&self, x: &RFElem) -> BigInt {
        &x.c0 + &x.c1 * &self.p
    }

    pub fn decode(&self, n: &BigInt) -> RFElem {
        let (c1, c0) = n.div_mod_floor(&self.p);
        self.elem(c0, c1)
    }

    /// Exponent `t` in `{0, 1, 2}` with `x^((q-1)/3) = omega^t`.
    pub fn character_exponent(&self, x: &RFElem) -> Result<u8, EisError> {
        if self.is_zero(x) {
            return Err(EisError::DividesArgument);
        }
        let e: BigInt = (&self.q - 1u32) / 3u32;
        let v = self.pow(x, &e);
        let mut w = self.one();
        for t in 0..3u8 {
            if v == w {
                return Ok(t);
            }
            w = self.mul(&w, &self.omega);
        }
        unreachable!("x^((q-1)/3) is a cube root of unity")
    }

    fn smallest_non_cube(&self) -> RFElem {
        let mut n = BigInt::from(2);
        loop {
            let x = self.decode(&n);
            if !self.is_zero(&x) && self.character_exponent(&x) != Ok(0) {
                return x;
            }
            n += 1;
        }
    }

    /// Discrete cube root, returning the smallest encoding among the three roots.
    pub fn cube_root(&self, a: &RFElem) -> Result<RFElem, EisError> {
        if self.is_zero(a) {
            return Ok(self.zero());
        }
        if self.character_exponent(a)? != 0 {
            return Err(EisError::NotACube);
        }
        let three = BigInt::from(3);
        let mut t = &self.q - 1u32;
        let mut s = 0u32;
        while (&t % &three).is_zero() {
            t /= &three;
            s += 1;
        }
        // x0 = a^k with 3k = 1 mod t, so x0^3 / a lies in the 3-Sylow subgroup.
        let k = three.modinv(&t).unwrap_or_else(BigInt::zero);
        let x0 = self.pow(a, &k);
        let x0_cubed = self.pow(&x0, &three);
        let err = self.mul(&x0_cubed, &self.inv(a).expect("a is nonzero"));
        let h = self.pow(&self.smallest_non_cube(), &t);
        let e = self.log_3_sylow(&err, &h, s);
        debug_assert!((&e % &three).is_zero());
        let corr = self.pow(&self.inv(&h).expect("h is nonzero"), &(e / &three));
        let x = self.mul(&x0, &corr);
        let roots = [x.clone(), self.mul(&x, &self.omega), self.mul(&self.mul(&x, &self.omega), &self.omega)];
        Ok(roots.into_iter().min_by_key(|r| self.encode(r)).expect("three roots"))
    }

    /// `log_h(y)` for `h` generating the cyclic group of order `3^s`.
    fn log_3_sylow(&self, y: &RFElem, h: &RFElem, s: u32) -> BigInt {
        let three = BigInt::from(3);
        if s == 0 {
            return BigInt::zero();
        }
        let gamma = self.pow(h, &three.pow(s - 1));
        let h_inv = self.inv(h).expect("h is nonzero");
        let mut e = BigInt::zero();
        for i in 0..s {
            let reduced = self.mul(y, &self.pow(&h_inv, &e));
            let d = self.pow(&reduced, &three.pow(s - 1 - i));
            let digit = if d == self.one() {
                0u32
            } else if d == gamma {
                1
            } else {
                2
            };
            e += three.pow(i) * digit;
        }
        e
    }
}

impl FiniteField for ResidueField {
    type Elem = RFElem;

    fn order(&self) -> BigInt {
        self.q.clone()
    }

    fn zero(&self) -> RFElem {
        RFElem::new(0, 0)
    }

    fn one(&self) -> RFElem {
        RFElem::new(1, 0)
    }

    fn int(&self, n: &BigInt) -> RFElem {
        RFElem { c0: n.mod_floor(&self.p), c1: BigInt::zero() }
    }

    fn is_zero(&self, x: &RFElem) -> bool {
        x.c0.is_zero() && x.c1.is_zero()
    }

    fn add(&self, x: &RFElem, y: &RFElem) -> RFElem {
        self.elem(&x.c0 + &y.c0, &x.c1 + &y.c1)
    }

    fn sub(&self, x: &RFElem, y: &RFElem) -> RFElem {
        self.elem(&x.c0 - &y.c0, &x.c1 - &y.c1)
    }

    fn neg(&self, x: &RFElem) -> RFElem {
        self.elem(-&x.c0, -&x.c1)
    }

    fn mul(&self, x: &RFElem, y: &RFElem) -> RFElem {
        // T^2 = -1 - T
        let bd = &x.c1 * &y.c1;
        self.elem(&x.c0 * &y.c0 - &bd, &x.c0 * &y.c1 + &x.c1 * &y.c0 - bd)
    }

    fn inv(&self, x: &RFElem) -> Option<RFElem> {
        // x * conj(x) = c0^2 - c0 c1 + c1^2 lies in F_p.
        let n = (&x.c0 * &x.c0 - &x.c0 * &x.c1 + &x.c1 * &x.c1).mod_floor(&self.p);
        let n_inv = n.modinv(&self.p)?;
        let conj = self.elem(&x.c0 - &x.c1, -&x.c1);
        Some(self.elem(&conj.c0 * &n_inv, &conj.c1 * &n_inv))
    }
}

pub fn reduce(u: &EisInt, field: &ResidueField) -> RFElem {
    field.reduce(u)
}

/// Cubic residue character of `u` at `prime` as an exponent of `omega`.
pub fn cubic_character(u: &EisInt, prime: &EisPrime) -> Result<u8, EisError> {
    let field = residue_field_of(prime)?;
    field.character_exponent(&field.reduce(u))
}

pub fn cube_root_in_field(a: &RFElem, field: &ResidueField) -> Result<RFElem, EisError> {
    field.cube_root(a)
}
