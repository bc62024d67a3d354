//! Milnor numbers, their indeterminacy ideals and invariants for
//! presentations of link type: generators `x_1..x_r`, one Frobenius word `y_i`
//! and one norm `N_i` per generator, and relators `x_i^(N_i - 1) [x_i, y_i]`.
//!
//! Ideals of `Z/mZ` are stored by their divisor generator `d | m`; the zero
//! ideal is reported as `d = 0`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{binomial, is_prime_u64};
use crate::magnus::{check_modulus, magnus_coefficient, proper_shuffles, GroupWord, MagnusError, MultiIndex};
use crate::symbol::SymbolValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error("index {0} is not in the designated set S")]
    IndexNotInS(usize),
    #[error("|I| = {len} is outside 2..=m_I = {m_i}")]
    LengthOutOfRange { len: usize, m_i: BigInt },
    #[error("the indeterminacy ideal is the whole ring")]
    UnitIndeterminacy,
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

/// Wire format of a presentation.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct PresentationRepr {
    l: u64,
    m: u64,
    norms: Vec<NormRepr>,
    y: Vec<String>,
    #[serde(rename = "S")]
    s: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum NormRepr {
    Int(u64),
    Str(String),
}

/// A presentation of link type over `Z/mZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkPresentation {
    l: u64,
    m: u64,
    norms: Vec<BigInt>,
    y: Vec<GroupWord>,
    s: Vec<usize>,
}

impl LinkPresentation {
    pub fn new(l: u64, m: u64, norms: Vec<BigInt>, y: Vec<GroupWord>, s: Vec<usize>) -> Result<Self, MilnorError> {
        let bad = |msg: String| Err(MilnorError::InvalidPresentation(msg));
        if !is_prime_u64(l) {
            return bad(format!("l = {l} is not prime"));
        }
        check_modulus(m)?;
        if !m.is_multiple_of(l) {
            return bad(format!("m = {m} is not a power of l = {l}"));
        }
        let r = norms.len();
        if y.len() != r {
            return bad(format!("{r} norms but {} Frobenius words", y.len()));
        }
        for (i, n) in norms.iter().enumerate() {
            if *n <= BigInt::one() || !((n - 1u32) % m).is_zero() {
                return bad(format!("norm {n} of generator {} is not 1 mod {m}", i + 1));
            }
        }
        let y = y.iter().map(|w| w.with_n_gens(r)).collect::<Result<Vec<_>, _>>()?;
        let mut seen = BTreeSet::new();
        for &i in &s {
            if i == 0 || i > r || !seen.insert(i) {
                return bad(format!("S entry {i} is out of range or repeated"));
            }
        }
        Ok(LinkPresentation { l, m, norms, y, s })
    }

    pub fn from_json(text: &str) -> Result<Self, MilnorError> {
        let repr: PresentationRepr =
            serde_json::from_str(text).map_err(|e| MilnorError::InvalidPresentation(e.to_string()))?;
        let norms = repr
            .norms
            .iter()
            .map(|n| match n {
                NormRepr::Int(v) => Ok(BigInt::from(*v)),
                NormRepr::Str(s) => s.trim().parse().map_err(|_| MilnorError::InvalidPresentation(format!("bad norm {s}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let y = repr.y.iter().map(|w| w.parse()).collect::<Result<Vec<GroupWord>, _>>()?;
        Self::new(repr.l, repr.m, norms, y, repr.s)
    }

    pub fn to_json(&self) -> String {
        let repr = PresentationRepr {
            l: self.l,
            m: self.m,
            norms: self.norms.iter().map(|n| NormRepr::Str(n.to_string())).collect(),
            y: self.y.iter().map(|w| w.to_string()).collect(),
            s: self.s.clone(),
        };
        serde_json::to_string(&repr).expect("presentation serializes")
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.norms.len()
    }

    pub fn norms(&self) -> &[BigInt] {
        &self.norms
    }

    pub fn frobenius_words(&self) -> &[GroupWord] {
        &self.y
    }

    pub fn designated(&self) -> &[usize] {
        &self.s
    }

    /// Replaces the Frobenius word of generator `i` (1-based).
    pub fn with_frobenius_word(&self, i: usize, w: GroupWord) -> Result<Self, MilnorError> {
        let mut y = self.y.clone();
        *y.get_mut(i.wrapping_sub(1)).ok_or(MilnorError::IndexNotInS(i))? = w;
        Self::new(self.l, self.m, self.norms.clone(), y, self.s.clone())
    }

    /// `x_i^(N_i - 1) [x_i, y_i]`.
    pub fn relator(&self, i: usize) -> GroupWord {
        let r = self.rank();
        let x = GroupWord::generator(r, i).expect("generator in range");
        let power = GroupWord::generator_power(r, i, &self.norms[i - 1] - 1u32).expect("generator in range");
        power.mul(&GroupWord::commutator(&x, &self.y[i - 1]))
    }

    fn check_in_s(&self, index: &[usize]) -> Result<(), MilnorError> {
        if index.is_empty() {
            return Err(MagnusError::EmptyIndex.into());
        }
        match index.iter().find(|i| !self.s.contains(i)) {
            Some(&i) => Err(MilnorError::IndexNotInS(i)),
            None => Ok(()),
        }
    }
}

/// Multiplicity of `l` in `n`.
fn valuation(n: &BigInt, l: u64) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % l).is_zero() {
        n /= l;
        v += 1;
    }
    v
}

/// `m_I = l^e` for the largest `e` with `N_i = 1 mod l^e` for all `i` in `I`.
pub fn m_sub_i(pres: &LinkPresentation, index: &[usize]) -> Result<BigInt, MilnorError> {
    pres.check_in_s(index)?;
    let e = index.iter().map(|&i| valuation(&(&pres.norms[i - 1] - 1u32), pres.l)).min().expect("nonempty");
    Ok(BigInt::from(pres.l).pow(e))
}

/// `mu_m(I) = mu_m(i_1..i_{n-1}; y_{i_n})`, and `0` when `|I| = 1`.
pub fn milnor_number(pres: &LinkPresentation, index: &[usize]) -> Result<u64, MilnorError> {
    pres.check_in_s(index)?;
    let (last, head) = index.split_last().expect("nonempty");
    if head.is_empty() {
        return Ok(0);
    }
    Ok(magnus_coefficient(&pres.y[last - 1], head, pres.m)?)
}

/// Rotations of the proper nonempty subsequences of `I`, deduplicated.
pub fn cyclic_subsequences(index: &[usize]) -> BTreeSet<MultiIndex> {
    let n = index.len();
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << n) - 1 {
        let sub: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| index[b]).collect();
        for r in 0..sub.len() {
            let mut rot = sub.clone();
            rot.rotate_left(r);
            out.insert(rot);
        }
    }
    out
}

fn gcd_with_m(m: u64, values: impl Iterator<Item = u64>) -> u64 {
    values.fold(m, |g, v| g.gcd(&v))
}

/// Generator of `Delta_m(I)`, spanned by `C(m_I, a)` for `1 <= a < |I|` and
/// by `mu_m(J)` for `J` in the cyclic subsequences of `I`. Returns `0` for
/// the zero ideal.
pub fn indeterminacy(pres: &LinkPresentation, index: &[usize]) -> Result<u64, MilnorError> {
    let m = pres.m;
    let m_i = m_sub_i(pres, index)?;
    let big_m = BigInt::from(m);
    let binoms = (1..index.len() as u64)
        .map(|a| binomial(&m_i, a).mod_floor(&big_m).to_u64().expect("reduced mod m"))
        .collect::<Vec<_>>();
    let mut mus = Vec::new();
    for j in cyclic_subsequences(index) {
        mus.push(milnor_number(pres, &j)?);
    }
    let g = gcd_with_m(m, binoms.into_iter().chain(mus));
    Ok(if g == m { 0 } else { g })
}

/// `mu_m(I)` together with `Delta_m(I)` and the class of `mu_m(I)` modulo it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorResult {
    pub index: MultiIndex,
    pub m: u64,
    pub value: u64,
    /// Divisor generator of the indeterminacy; `0` is the zero ideal.
    pub delta: u64,
    pub reduced: u64,
}

fn reduce_mod_ideal(v: u64, d: u64) -> u64 {
    if d == 0 {
        v
    } else {
        v % d
    }
}

pub fn milnor_invariant(pres: &LinkPresentation, index: &[usize]) -> Result<MilnorResult, MilnorError> {
    let m_i = m_sub_i(pres, index)?;
    if index.len() < 2 || BigInt::from(index.len()) > m_i {
        return Err(MilnorError::LengthOutOfRange { len: index.len(), m_i });
    }
    let value = milnor_number(pres, index)?;
    let delta = indeterminacy(pres, index)?;
    Ok(MilnorResult { index: index.to_vec(), m: pres.m, value, delta, reduced: reduce_mod_ideal(value, delta) })
}

/// An upper unitriangular matrix over `(Z/mZ)/(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnipotentMatrix {
    /// Modulus of the entries: `d`, or `m` for the zero ideal.
    pub modulus: u64,
    pub entries: Vec<Vec<u64>>,
}

impl UnipotentMatrix {
    pub fn identity(n: usize, modulus: u64) -> Self {
        let entries = (0..n).map(|a| (0..n).map(|b| u64::from(a == b) % modulus).collect()).collect();
        UnipotentMatrix { modulus, entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn mul(&self, other: &UnipotentMatrix) -> UnipotentMatrix {
        let n = self.size();
        let md = self.modulus as u128;
        let entries = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let s: u128 = (0..n).map(|c| self.entries[a][c] as u128 * other.entries[c][b] as u128).sum();
                        (s % md) as u64
                    })
                    .collect()
            })
            .collect();
        UnipotentMatrix { modulus: self.modulus, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size(), self.modulus)
    }

    pub fn top_right(&self) -> u64 {
        self.entries[0][self.size() - 1]
    }
}

/// `rho_m(I)(w)`: the `n x n` matrix with entry `(a, b+1)` equal to
/// `mu_m(i_a..i_b; w)` modulo `Delta_m(I)`.
pub fn unipotent_rep(pres: &LinkPresentation, index: &[usize], w: &GroupWord) -> Result<UnipotentMatrix, MilnorError> {
    let delta = indeterminacy(pres, index)?;
    if delta == 1 {
        return Err(MilnorError::UnitIndeterminacy);
    }
    let modulus = if delta == 0 { pres.m } else { delta };
    let w = w.with_n_gens(pres.rank().max(w.n_gens()))?;
    let n = index.len();
    let mut mat = UnipotentMatrix::identity(n, modulus);
    for a in 0..n {
        for b in a..n.saturating_sub(1) {
            mat.entries[a][b + 1] = magnus_coefficient(&w, &index[a..=b], pres.m)? % modulus;
        }
    }
    Ok(mat)
}

/// Both parts of the standing assumption for `I`: `C(m_I, j) = 0 mod m` for
/// `1 <= j < |I|`, and `mu_m(J) = 0` on the cyclic subsequences of `I`.
pub fn check_condition_31(pres: &LinkPresentation, index: &[usize]) -> Result<bool, MilnorError> {
    Ok(binomial_part_31(pres, index)? && {
        let mut ok = true;
        for j in cyclic_subsequences(index) {
            if milnor_number(pres, &j)? != 0 {
                ok = false;
                break;
            }
        }
        ok
    })
}

/// The binomial half of [`check_condition_31`].
pub fn binomial_part_31(pres: &LinkPresentation, index: &[usize]) -> Result<bool, MilnorError> {
    let m_i = m_sub_i(pres, index)?;
    Ok((1..index.len() as u64).all(|j| (binomial(&m_i, j) % pres.m).is_zero()))
}

/// The `n`-tuple symbol `zeta_m^{mu_m(I)}` and the Massey exponent `(-1)^n mu_m(I)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSymbol {
    pub symbol: SymbolValue,
    pub massey_exponent: u64,
}

pub fn tuple_symbol(pres: &LinkPresentation, index: &[usize]) -> Result<TupleSymbol, MilnorError> {
    if !check_condition_31(pres, index)? {
        return Err(MilnorError::AssumptionViolated(format!("condition fails for {index:?}")));
    }
    let mu = milnor_number(pres, index)? as i128;
    let sign = if index.len().is_multiple_of(2) { 1 } else { -1 };
    let symbol = SymbolValue::new(pres.m, mu);
    Ok(TupleSymbol { symbol, massey_exponent: SymbolValue::new(pres.m, sign * mu).exponent })
}

/// Checks `sum_{H proper shuffle of I, J} mu(H i) = 0` modulo the gcd of the
/// `Delta_m(H i)`, under `|I| + |J| <= m_{IJi} - 1`.
pub fn verify_shuffle_relation(pres: &LinkPresentation, i: &[usize], j: &[usize], last: usize) -> Result<bool, MilnorError> {
    if i.is_empty() || j.is_empty() {
        return Err(MagnusError::EmptyIndex.into());
    }
    let mut full: Vec<usize> = i.iter().chain(j).copied().collect();
    full.push(last);
    let m_ijl = m_sub_i(pres, &full)?;
    if BigInt::from(i.len() + j.len()) > &m_ijl - 1u32 {
        return Err(MilnorError::HypothesisViolated(format!("|I| + |J| = {} exceeds m_IJi - 1 = {}", i.len() + j.len(), m_ijl - 1u32)));
    }
    let mut g = 0u64;
    let mut sum = 0u64;
    for (h, mult) in proper_shuffles(i, j) {
        let mut hi = h.clone();
        hi.push(last);
        g = g.gcd(&indeterminacy(pres, &hi)?);
        sum = (sum + mult % pres.m * milnor_number(pres, &hi)?) % pres.m;
    }
    let g = if g == 0 { pres.m } else { g };
    Ok(sum.is_multiple_of(g))
}
