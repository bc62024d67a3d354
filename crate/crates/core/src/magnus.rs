//! Free-group words, their truncated Magnus expansions over `Z/mZ`
//! (`x_i -> 1 + X_i`), Fox derivatives and shuffle products of multi-indices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::binomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagnusError {
    #[error("generator index {index} outside 1..={n_gens}")]
    IndexOutOfRange { index: usize, n_gens: usize },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("modulus {0} is not a prime power")]
    InvalidModulus(u64),
    #[error("multi-index must be nonempty")]
    EmptyIndex,
}

/// A multi-index `(i_1 ... i_n)` of 1-based generator indices.
pub type MultiIndex = Vec<usize>;

/// `x_gen^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: BigInt,
}

/// A freely reduced word in `x_1, ..., x_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupWord {
    n_gens: usize,
    letters: Vec<Letter>,
}

pub(crate) fn check_modulus(m: u64) -> Result<(), MagnusError> {
    if m < 2 {
        return Err(MagnusError::InvalidModulus(m));
    }
    let l = (2..=m).find(|d| m.is_multiple_of(*d)).expect("m >= 2 has a prime factor");
    let mut r = m;
    while r.is_multiple_of(l) {
        r /= l;
    }
    if r == 1 {
        Ok(())
    } else {
        Err(MagnusError::InvalidModulus(m))
    }
}

fn check_index(index: &[usize], n_gens: usize) -> Result<(), MagnusError> {
    if index.is_empty() {
        return Err(MagnusError::EmptyIndex);
    }
    match index.iter().find(|&&i| i == 0 || i > n_gens) {
        Some(&i) => Err(MagnusError::IndexOutOfRange { index: i, n_gens }),
        None => Ok(()),
    }
}

impl GroupWord {
    pub fn new(n_gens: usize, letters: Vec<Letter>) -> Result<Self, MagnusError> {
        if let Some(l) = letters.iter().find(|l| l.gen == 0 || l.gen > n_gens) {
            return Err(MagnusError::IndexOutOfRange { index: l.gen, n_gens });
        }
        let mut w = GroupWord { n_gens, letters: Vec::new() };
        for l in letters {
            w.push(l);
        }
        Ok(w)
    }

    pub fn identity(n_gens: usize) -> Self {
        GroupWord { n_gens, letters: Vec::new() }
    }

    /// `x_gen^exp`.
    pub fn generator_power(n_gens: usize, gen: usize, exp: impl Into<BigInt>) -> Result<Self, MagnusError> {
        Self::new(n_gens, vec![Letter { gen, exp: exp.into() }])
    }

    pub fn generator(n_gens: usize, gen: usize) -> Result<Self, MagnusError> {
        Self::generator_power(n_gens, gen, 1)
    }

    fn push(&mut self, l: Letter) {
        if l.exp.is_zero() {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == l.gen {
                last.exp += l.exp;
                if last.exp.is_zero() {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(l);
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The same word viewed in a free group with at least as many generators.
    pub fn with_n_gens(&self, n_gens: usize) -> Result<Self, MagnusError> {
        Self::new(n_gens, self.letters.clone())
    }

    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|l| Letter { gen: l.gen, exp: -&l.exp }).collect();
        GroupWord { n_gens: self.n_gens, letters }
    }

    /// Concatenation; the generator count is the larger of the two.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut w = GroupWord { n_gens: self.n_gens.max(other.n_gens), letters: self.letters.clone() };
        for l in &other.letters {
            w.push(l.clone());
        }
        w
    }

    pub fn pow(&self, e: i64) -> GroupWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::identity(self.n_gens);
        for _ in 0..e.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `[u, v] = u v u^-1 v^-1`.
    pub fn commutator(u: &GroupWord, v: &GroupWord) -> GroupWord {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    pub fn conjugate_by(&self, g: &GroupWord) -> GroupWord {
        g.mul(self).mul(&g.inverse())
    }

    /// Largest generator index used.
    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.gen).max().unwrap_or(0)
    }

    /// Parses `x1 x2^-1 [x1,x2] (x1 x3)^5` over `n_gens` generators.
    pub fn parse(s: &str, n_gens: usize) -> Result<Self, MagnusError> {
        let w: GroupWord = s.parse()?;
        w.with_n_gens(n_gens)
    }
}

struct WordParser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> WordParser<'a> {
    fn err(&self) -> MagnusError {
        MagnusError::Parse(self.src.to_string())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && (self.chars[self.pos].is_whitespace() || self.chars[self.pos] == '*') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self, allow_sign: bool) -> Result<BigInt, MagnusError> {
        self.skip_ws();
        let start = self.pos;
        if allow_sign && matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.err())
    }

    fn word(&mut self, max_gen: &mut usize) -> Result<GroupWord, MagnusError> {
        let mut w = GroupWord::identity(0);
        while let Some(c) = self.peek() {
            if c == ',' || c == ']' || c == ')' {
                break;
            }
            let atom = self.atom(max_gen)?;
            let atom = if self.peek() == Some('^') {
                self.pos += 1;
                let e = self.integer(true)?;
                let e = e.to_i64().ok_or_else(|| self.err())?;
                if atom.letters.len() == 1 {
                    let l = &atom.letters[0];
                    GroupWord { n_gens: 0, letters: vec![Letter { gen: l.gen, exp: &l.exp * e }] }
                } else {
                    atom.pow(e)
                }
            } else {
                atom
            };
            w = w.mul(&atom);
        }
        Ok(w)
    }

    fn expect(&mut self, c: char) -> Result<(), MagnusError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn atom(&mut self, max_gen: &mut usize) -> Result<GroupWord, MagnusError> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                let i = self.integer(false)?.to_usize().ok_or_else(|| self.err())?;
                if i == 0 {
                    return Err(MagnusError::IndexOutOfRange { index: 0, n_gens: 0 });
                }
                *max_gen = (*max_gen).max(i);
                Ok(GroupWord { n_gens: 0, letters: vec![Letter { gen: i, exp: BigInt::one() }] })
            }
            Some('1') => {
                self.pos += 1;
                Ok(GroupWord::identity(0))
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word(max_gen)?;
                self.expect(',')?;
                let v = self.word(max_gen)?;
                self.expect(']')?;
                Ok(GroupWord::commutator(&u, &v))
            }
            Some('(') => {
                self.pos += 1;
                let u = self.word(max_gen)?;
                self.expect(')')?;
                Ok(u)
            }
            _ => Err(self.err()),
        }
    }
}

impl FromStr for GroupWord {
    type Err = MagnusError;

    /// Generator count is the largest index that occurs.
    fn from_str(s: &str) -> Result<Self, MagnusError> {
        let mut p = WordParser { src: s, chars: s.chars().collect(), pos: 0 };
        let mut max_gen = 0;
        let w = p.word(&mut max_gen)?;
        if p.peek().is_some() {
            return Err(p.err());
        }
        Ok(GroupWord { n_gens: max_gen, letters: w.letters })
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.exp.is_one() { format!("x{}", l.gen) } else { format!("x{}^{}", l.gen, l.exp) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A non-commutative power series in `X_1..X_N` over `Z/mZ`, truncated
/// above total degree `degree`. Only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcSeries {
    n_gens: usize,
    m: u64,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, u64>,
}

impl NcSeries {
    pub fn one(n_gens: usize, m: u64, degree: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        if m > 1 {
            coeffs.insert(Vec::new(), 1);
        }
        NcSeries { n_gens, m, degree, coeffs }
    }

    /// `(1 + X_gen)^e = sum_k C(e, k) X_gen^k`.
    pub fn generator_power(n_gens: usize, m: u64, degree: usize, gen: usize, e: &BigInt) -> Self {
        let mut s = NcSeries { n_gens, m, degree, coeffs: BTreeMap::new() };
        for k in 0..=degree {
            let c = binomial_mod(e, k as u64, m);
            if c != 0 {
                s.coeffs.insert(vec![gen; k], c);
            }
        }
        s
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    /// Coefficient of `X_I` (the empty index gives the constant term).
    pub fn coefficient(&self, index: &[usize]) -> u64 {
        self.coeffs.get(index).copied().unwrap_or(0)
    }

    /// Nonzero terms in lexicographic index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, u64)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    /// Truncated product. Panics on mismatched modulus or degree.
    pub fn mul(&self, other: &NcSeries) -> NcSeries {
        assert_eq!(self.m, other.m, "series over different rings");
        let degree = self.degree.min(other.degree);
        let mut coeffs: BTreeMap<MultiIndex, u64> = BTreeMap::new();
        let m = self.m as u128;
        for (i, &a) in &self.coeffs {
            for (j, &b) in &other.coeffs {
                if i.len() + j.len() > degree {
                    continue;
                }
                let mut k = i.clone();
                k.extend_from_slice(j);
                let e = coeffs.entry(k).or_insert(0);
                *e = ((*e as u128 + a as u128 * b as u128) % m) as u64;
            }
        }
        coeffs.retain(|_, v| *v != 0);
        NcSeries { n_gens: self.n_gens.max(other.n_gens), m: self.m, degree, coeffs }
    }

    pub fn is_one(&self) -> bool {
        *self == NcSeries::one(self.n_gens, self.m, self.degree)
    }
}

/// `C(e, k) mod m` for an arbitrary integer `e`.
pub fn binomial_mod(e: &BigInt, k: u64, m: u64) -> u64 {
    binomial(e, k).mod_floor(&BigInt::from(m)).to_u64().expect("reduced mod m")
}

/// The Magnus expansion of `w` truncated above degree `degree`.
pub fn expand(w: &GroupWord, m: u64, degree: usize) -> Result<NcSeries, MagnusError> {
    check_modulus(m)?;
    let n = w.n_gens();
    let mut acc = NcSeries::one(n, m, degree);
    for l in w.letters() {
        acc = acc.mul(&NcSeries::generator_power(n, m, degree, l.gen, &l.exp));
    }
    Ok(acc)
}

/// `mu_m(I; w)`: the coefficient of `X_I` in the expansion of `w`.
///
/// Evaluated by a prefix recursion: after each letter, `v[j]` holds the
/// coefficient of `X_{i_1..i_j}` in the partial product.
pub fn magnus_coefficient(w: &GroupWord, index: &[usize], m: u64) -> Result<u64, MagnusError> {
    check_modulus(m)?;
    check_index(index, w.n_gens())?;
    let n = index.len();
    let mut v = vec![0u64; n + 1];
    v[0] = 1;
    let mm = m as u128;
    for l in w.letters() {
        let binoms: Vec<u64> = (0..=n as u64).map(|k| binomial_mod(&l.exp, k, m)).collect();
        for j in (1..=n).rev() {
            let mut acc = v[j] as u128;
            let mut k = 1;
            while k <= j && index[j - k] == l.gen {
                acc += v[j - k] as u128 * binoms[k] as u128;
                k += 1;
            }
            v[j] = (acc % mm) as u64;
        }
    }
    Ok(v[n])
}

/// Period in the exponent of every `C(e, k) mod m` with `k <= n`.
fn exponent_period(m: u64, n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::from(m), |acc, k| acc * k)
}

/// `epsilon(D_{i_1} ... D_{i_n} w)` through iterated Fox derivatives.
///
/// The word is spelled as letters `x^{+-1}`; every derivative of a prefix is a
/// combination of prefixes `P_0 = 1, ..., P_L = w`, so each `D_i` acts on a
/// coefficient vector indexed by prefix length. Exponents are first reduced
/// modulo `m * n!`, a period of every binomial coefficient that can appear.
pub fn fox_coefficient(w: &GroupWord, index: &[usize], m: u64) -> Result<u64, MagnusError> {
    check_modulus(m)?;
    check_index(index, w.n_gens())?;
    let period = exponent_period(m, index.len());
    let mut spelled: Vec<(usize, bool)> = Vec::new();
    for l in w.letters() {
        let e = if l.exp.abs() > period { l.exp.mod_floor(&period) } else { l.exp.clone() };
        let count = e.abs().to_usize().expect("exponent reduced below the period");
        spelled.extend(std::iter::repeat_n((l.gen, e.is_positive()), count));
    }
    let len = spelled.len();
    let mut c = vec![0u64; len + 1];
    c[len] = 1 % m;
    for &gen in index.iter().rev() {
        let mut d = vec![0u64; len + 1];
        let mut suffix = 0u64;
        for j in (1..=len).rev() {
            suffix = (suffix + c[j]) % m;
            let (g, positive) = spelled[j - 1];
            if g != gen {
                continue;
            }
            if positive {
                d[j - 1] = (d[j - 1] + suffix) % m;
            } else {
                d[j] = (d[j] + m - suffix) % m;
            }
        }
        c = d;
    }
    Ok(c.iter().fold(0, |acc, &x| (acc + x) % m))
}

fn add_to(out: &mut BTreeMap<MultiIndex, u64>, prefix: usize, rest: BTreeMap<MultiIndex, u64>) {
    for (mut k, v) in rest {
        k.insert(0, prefix);
        *out.entry(k).or_insert(0) += v;
    }
}

fn shuffle_rec(i: &[usize], j: &[usize], quasi: bool) -> BTreeMap<MultiIndex, u64> {
    let mut out = BTreeMap::new();
    if i.is_empty() || j.is_empty() {
        out.insert(if i.is_empty() { j.to_vec() } else { i.to_vec() }, 1);
        return out;
    }
    add_to(&mut out, i[0], shuffle_rec(&i[1..], j, quasi));
    add_to(&mut out, j[0], shuffle_rec(i, &j[1..], quasi));
    if quasi && i[0] == j[0] {
        add_to(&mut out, i[0], shuffle_rec(&i[1..], &j[1..], quasi));
    }
    out
}

/// Interleavings of `I` and `J` as complementary subsequences, with multiplicity.
pub fn proper_shuffles(i: &[usize], j: &[usize]) -> BTreeMap<MultiIndex, u64> {
    shuffle_rec(i, j, false)
}

/// Quasi-shuffles: interleavings in which any number of pairs of equal
/// entries, one from each side, may coalesce into a single entry.
pub fn shuffles(i: &[usize], j: &[usize]) -> BTreeMap<MultiIndex, u64> {
    shuffle_rec(i, j, true)
}

/// Least `|I| <= cap` with `mu_m(I; w) != 0`, or `None` above the cap.
pub fn zassenhaus_degree(w: &GroupWord, m: u64, cap: usize) -> Result<Option<usize>, MagnusError> {
    let s = expand(w, m, cap)?;
    Ok(s.terms().map(|(k, _)| k.len()).filter(|&d| d >= 1).min())
}
