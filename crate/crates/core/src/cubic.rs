//! The triple cubic residue symbol over `k = Q(w)`.
//!
//! Elements of `O_k[t]`, `t^3 = pi1`, are triples `x + y t + z t^2` over the
//! Eisenstein integers. For admissible `pi1, pi2` a generator `alpha` of a
//! power `P^a` of a prime `P | pi2` of `K1 = k(t)` is found by lattice
//! reduction; then `theta = w^e alpha^2 tau(alpha)` with `tau(t) = w t` is
//! chosen so that `theta` is a cube modulo `3 sqrt(-3)` in the maximal order
//! `O_k[lambda]`, `lambda = (t - 1)/sqrt(-3)`. The symbol at `pi3` is the
//! cubic character of `theta` at a prime of `K1` above `pi3`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eisenstein::{residue_field_of, EisError, EisInt, EisPrime, PrimeKind, RFElem, ResidueField, CLASSES_MOD_3S};
use crate::poly::{count_distinct_roots, is_squarefree, FiniteField, Poly};
use crate::symbol::SymbolValue;

/// Default cap on the coordinate height of `alpha`.
pub const DEFAULT_ALPHA_BOUND: u64 = 10_000;

/// Largest ideal norm `N(P)^a` for which the lattice search runs.
const MAX_LATTICE_INDEX_BITS: u64 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error(transparent)]
    Eis(#[from] EisError),
    #[error("elements belong to different rings")]
    ContextMismatch,
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("no alpha with coordinate height <= {bound} ({searched})")]
    BoundExceeded { bound: u64, searched: String },
    #[error("theta is not a cube modulo 3*sqrt(-3)")]
    NoWitness,
    #[error("theta is not coprime to 3")]
    NotCoprimeToThree,
    #[error("theta vanishes modulo the third prime")]
    ThetaVanishes,
    #[error("degenerate: {0}")]
    Degenerate(String),
}

/// `x + y t + z t^2` in `O_k[t]`, `t^3 = pi1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicRingElem {
    pub x: EisInt,
    pub y: EisInt,
    pub z: EisInt,
    pub pi1: EisInt,
}

impl CubicRingElem {
    pub fn new(x: EisInt, y: EisInt, z: EisInt, pi1: EisInt) -> Self {
        CubicRingElem { x, y, z, pi1 }
    }

    pub fn from_eis(x: EisInt, pi1: &EisInt) -> Self {
        Self::new(x, EisInt::zero(), EisInt::zero(), pi1.clone())
    }

    pub fn one(pi1: &EisInt) -> Self {
        Self::from_eis(EisInt::one(), pi1)
    }

    pub fn t(pi1: &EisInt) -> Self {
        Self::new(EisInt::zero(), EisInt::one(), EisInt::zero(), pi1.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn coords(&self) -> [&EisInt; 3] {
        [&self.x, &self.y, &self.z]
    }

    fn check(&self, other: &Self) -> Result<(), CubicError> {
        if self.pi1 == other.pi1 {
            Ok(())
        } else {
            Err(CubicError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CubicError> {
        self.check(other)?;
        Ok(Self::new(&self.x + &other.x, &self.y + &other.y, &self.z + &other.z, self.pi1.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CubicError> {
        self.check(other)?;
        Ok(Self::new(&self.x - &other.x, &self.y - &other.y, &self.z - &other.z, self.pi1.clone()))
    }

    pub fn scale(&self, u: &EisInt) -> Self {
        Self::new(u * &self.x, u * &self.y, u * &self.z, self.pi1.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CubicError> {
        self.check(other)?;
        let a = self.coords();
        let b = other.coords();
        let mut r = vec![EisInt::zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                r[i + j] = &r[i + j] + &(a[i] * b[j]);
            }
        }
        let p = &self.pi1;
        Ok(Self::new(&r[0] + &(p * &r[3]), &r[1] + &(p * &r[4]), r[2].clone(), p.clone()))
    }

    /// `t -> w t`.
    pub fn tau(&self) -> Self {
        Self::new(self.x.clone(), &EisInt::zeta() * &self.y, &EisInt::zeta_pow(2) * &self.z, self.pi1.clone())
    }

    /// `N(x + y t + z t^2) = x^3 + pi1 y^3 + pi1^2 z^3 - 3 pi1 x y z`.
    pub fn norm(&self) -> EisInt {
        let p = &self.pi1;
        let x3 = self.x.pow(3);
        let y3 = self.y.pow(3);
        let z3 = self.z.pow(3);
        let xyz = &(&self.x * &self.y) * &self.z;
        &(&x3 + &(p * &y3)) + &(&(&(p * p) * &z3) - &(&(p * &xyz) * &EisInt::from_int(3)))
    }

    pub fn height(&self) -> BigInt {
        self.coords().iter().map(|c| c.height()).max().expect("three coordinates")
    }

    /// Coordinates in the basis `1, lambda, lambda^2` of `O_k[lambda]`.
    pub fn to_lambda(&self) -> [EisInt; 3] {
        let s = EisInt::sqrt_minus_three();
        let two_z = self.z.scale(&BigInt::from(2));
        [&(&self.x + &self.y) + &self.z, &s * &(&self.y + &two_z), self.z.scale(&BigInt::from(-3))]
    }

    fn key(&self) -> [BigInt; 6] {
        [
            self.x.a.clone(),
            self.x.b.clone(),
            self.y.a.clone(),
            self.y.b.clone(),
            self.z.a.clone(),
            self.z.b.clone(),
        ]
    }

    /// The unit multiple whose first nonzero coordinate satisfies `a > b >= 0`.
    pub fn unit_normalized(&self) -> Self {
        let first = self.coords().into_iter().find(|c| !c.is_zero());
        match first {
            None => self.clone(),
            Some(c) => {
                let target = c.canonical_associate();
                let u = EisInt::units()
                    .into_iter()
                    .find(|u| u * c == target)
                    .expect("the canonical associate is a unit multiple");
                self.scale(&u)
            }
        }
    }
}

pub fn cubic_mul(u: &CubicRingElem, v: &CubicRingElem) -> Result<CubicRingElem, CubicError> {
    u.mul(v)
}

pub fn cubic_norm(u: &CubicRingElem) -> EisInt {
    u.norm()
}

pub fn tau_conjugate(u: &CubicRingElem) -> CubicRingElem {
    u.tau()
}

// ---------------------------------------------------------------------------
// Cube test in O_{K1} / (3 sqrt(-3))

/// Addition and multiplication tables of `O_k / (3 sqrt(-3))`.
struct ClassTables {
    add: Vec<[u8; CLASSES_MOD_3S]>,
    mul: Vec<[u8; CLASSES_MOD_3S]>,
}

fn class_tables() -> &'static ClassTables {
    static TABLES: OnceLock<ClassTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let reps: Vec<EisInt> = (0..CLASSES_MOD_3S).map(EisInt::from_class_mod_3s).collect();
        let mut add = vec![[0u8; CLASSES_MOD_3S]; CLASSES_MOD_3S];
        let mut mul = vec![[0u8; CLASSES_MOD_3S]; CLASSES_MOD_3S];
        for i in 0..CLASSES_MOD_3S {
            for j in 0..CLASSES_MOD_3S {
                add[i][j] = (&reps[i] + &reps[j]).class_mod_3s() as u8;
                mul[i][j] = (&reps[i] * &reps[j]).class_mod_3s() as u8;
            }
        }
        ClassTables { add, mul }
    })
}

const RING_SIZE: usize = CLASSES_MOD_3S * CLASSES_MOD_3S * CLASSES_MOD_3S;

/// For one class of `c = (1 - pi1) / (3 sqrt(-3))`: the smallest cube root
/// of every cube in `(O_k/(3 sqrt(-3)))[lambda] / (lambda^3 - s lambda^2 - lambda - c)`.
struct CubeTable {
    root_of: Vec<u32>,
}

const NO_ROOT: u32 = u32::MAX;

fn triple_mul(t: &ClassTables, c: u8, u: [u8; 3], v: [u8; 3]) -> [u8; 3] {
    let s = EisInt::sqrt_minus_three().class_mod_3s() as u8;
    let one = EisInt::one().class_mod_3s() as u8;
    let mut r = [0u8; 5];
    for i in 0..3 {
        for j in 0..3 {
            r[i + j] = t.add[r[i + j] as usize][t.mul[u[i] as usize][v[j] as usize] as usize];
        }
    }
    // lambda^3 = c + lambda + s lambda^2
    for k in (3..5).rev() {
        let ck = r[k] as usize;
        r[k - 3] = t.add[r[k - 3] as usize][t.mul[ck][c as usize] as usize];
        r[k - 2] = t.add[r[k - 2] as usize][t.mul[ck][one as usize] as usize];
        r[k - 1] = t.add[r[k - 1] as usize][t.mul[ck][s as usize] as usize];
    }
    [r[0], r[1], r[2]]
}

fn triple_index(u: [u8; 3]) -> usize {
    u[0] as usize + CLASSES_MOD_3S * (u[1] as usize + CLASSES_MOD_3S * u[2] as usize)
}

fn triple_of(idx: usize) -> [u8; 3] {
    [(idx % 27) as u8, ((idx / 27) % 27) as u8, (idx / 729) as u8]
}

fn cube_table(c: u8) -> Arc<CubeTable> {
    static CACHE: OnceLock<Mutex<HashMap<u8, Arc<CubeTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cube table cache").get(&c) {
        return Arc::clone(t);
    }
    let tables = class_tables();
    let mut root_of = vec![NO_ROOT; RING_SIZE];
    for idx in 0..RING_SIZE {
        let u = triple_of(idx);
        let cube = triple_mul(tables, c, triple_mul(tables, c, u, u), u);
        let slot = &mut root_of[triple_index(cube)];
        if *slot == NO_ROOT {
            *slot = idx as u32;
        }
    }
    let table = Arc::new(CubeTable { root_of });
    cache.lock().expect("cube table cache").insert(c, Arc::clone(&table));
    table
}

/// `c` with `lambda^3 = c + lambda + sqrt(-3) lambda^2`; needs `pi1 = 1 mod 3 sqrt(-3)`.
fn lambda_constant(pi1: &EisInt) -> Result<EisInt, CubicError> {
    let three_s = EisInt::new(3, 6);
    (&EisInt::one() - pi1)
        .div_exact(&three_s)
        .ok_or_else(|| CubicError::NotAdmissible(format!("pi1 = {pi1} is not 1 mod 3*sqrt(-3)")))
}

/// Rewrites `theta` over `-pi1` via `t -> -t` when `pi1 = -1 mod 3 sqrt(-3)`.
fn one_mod_3s_context(theta: &CubicRingElem) -> CubicRingElem {
    if (-&theta.pi1).is_one_mod_3s() {
        CubicRingElem::new(theta.x.clone(), -&theta.y, theta.z.clone(), -&theta.pi1)
    } else {
        theta.clone()
    }
}

fn lambda_class(pi1: &EisInt) -> Result<u8, CubicError> {
    let pi1 = if (-pi1).is_one_mod_3s() { -pi1 } else { pi1.clone() };
    Ok(lambda_constant(&pi1)?.class_mod_3s() as u8)
}

/// Cubes `eta` (in `lambda`-coordinates) modulo `3 sqrt(-3)`.
pub fn cube_mod_3s(eta: &[EisInt; 3], pi1: &EisInt) -> Result<[EisInt; 3], CubicError> {
    let c = lambda_class(pi1)?;
    let t = class_tables();
    let u = [eta[0].class_mod_3s() as u8, eta[1].class_mod_3s() as u8, eta[2].class_mod_3s() as u8];
    let cube = triple_mul(t, c, triple_mul(t, c, u, u), u);
    Ok(cube.map(|k| EisInt::from_class_mod_3s(k as usize)))
}

/// Congruence of `lambda`-coordinate triples modulo `3 sqrt(-3)`.
pub fn congruent_mod_3s(u: &[EisInt; 3], v: &[EisInt; 3]) -> bool {
    u.iter().zip(v).all(|(a, b)| a.class_mod_3s() == b.class_mod_3s())
}

/// `lambda`-coordinates of `u`, taken over `-pi1` when `pi1 = -1 mod 3 sqrt(-3)`.
pub fn lambda_coords(u: &CubicRingElem) -> [EisInt; 3] {
    one_mod_3s_context(u).to_lambda()
}

/// A witness `eta` (in `lambda`-coordinates) with `eta^3 = theta` modulo
/// `3 sqrt(-3)` in the maximal order, found among all 19683 residues.
pub fn cube_condition(theta: &CubicRingElem) -> Result<[EisInt; 3], CubicError> {
    let c = lambda_class(&theta.pi1)?;
    if (theta.norm().norm() % 3u32).is_zero() {
        return Err(CubicError::NotCoprimeToThree);
    }
    let lam = lambda_coords(theta);
    let target = [lam[0].class_mod_3s() as u8, lam[1].class_mod_3s() as u8, lam[2].class_mod_3s() as u8];
    match cube_table(c).root_of[triple_index(target)] {
        NO_ROOT => Err(CubicError::NoWitness),
        idx => Ok(triple_of(idx as usize).map(|k| EisInt::from_class_mod_3s(k as usize))),
    }
}

// ---------------------------------------------------------------------------
// O_k / pi2^a

/// `O_k / (pi^a)` for a prime `pi` not above 3. Inert primes keep both
/// coordinates modulo `p^a`; split primes map to `Z/p^a` via `w -> omega_a`.
struct LocalRing {
    pa: BigInt,
    omega: Option<BigInt>,
}

impl LocalRing {
    fn new(field: &ResidueField, a: u32) -> Self {
        let p = field.characteristic().clone();
        let pa = p.pow(a);
        let omega = match field.kind() {
            PrimeKind::Inert => None,
            _ => {
                // Newton lift of the root of T^2 + T + 1.
                let mut w = field.omega().c0.clone();
                for _ in 0..=a {
                    let f = &w * &w + &w + 1u32;
                    let df = (&w * 2u32 + 1u32).modinv(&pa).expect("simple root");
                    w = (&w - f * df).mod_floor(&pa);
                }
                Some(w)
            }
        };
        LocalRing { pa, omega }
    }

    fn reduce(&self, u: &EisInt) -> EisInt {
        match &self.omega {
            None => u.reduce_mod_int(&self.pa),
            Some(w) => EisInt::new((&u.a + &u.b * w).mod_floor(&self.pa), 0),
        }
    }

    fn reduce_rf(&self, r: &RFElem) -> EisInt {
        self.reduce(&EisInt::new(r.c0.clone(), r.c1.clone()))
    }

    /// Newton lift of a root of `T^3 - c` from the residue field.
    fn lift_cube_root(&self, r: &RFElem, c: &EisInt, level: u32) -> EisInt {
        let mut big_r = self.reduce_rf(r);
        let c = self.reduce(c);
        for _ in 0..=level {
            let r2 = self.mul(&big_r, &big_r);
            let f = self.reduce(&(&self.mul(&r2, &big_r) - &c));
            let df_inv = self.inv(&self.reduce(&r2.scale(&BigInt::from(3))));
            big_r = self.reduce(&(&big_r - &self.mul(&f, &df_inv)));
        }
        big_r
    }

    /// `p`-adic valuation of a reduced element, capped at `level`.
    fn valuation(&self, u: &EisInt, p: &BigInt, level: u32) -> u32 {
        let mut v = 0;
        let mut pk = p.clone();
        while v < level && (&u.a % &pk).is_zero() && (&u.b % &pk).is_zero() {
            v += 1;
            pk *= p;
        }
        v
    }

    fn mul(&self, u: &EisInt, v: &EisInt) -> EisInt {
        self.reduce(&(u * v))
    }

    fn inv(&self, u: &EisInt) -> EisInt {
        match &self.omega {
            None => {
                let n_inv = u.norm().modinv(&self.pa).expect("unit modulo pi^a");
                self.reduce(&u.conj().scale(&n_inv))
            }
            Some(_) => EisInt::new(u.a.modinv(&self.pa).expect("unit modulo pi^a"), 0),
        }
    }

    /// Coordinates of `u` in the `Z`-span of `1, w` used to clear the
    /// image of a lattice coordinate.
    fn split_coords(&self, u: &EisInt) -> (BigInt, BigInt) {
        (u.a.clone(), u.b.clone())
    }
}

// ---------------------------------------------------------------------------
// LLL in the T2 embedding

type Vec6 = [i128; 6];

/// Real-linear map `Z^6 -> R^12` through the six complex embeddings of `K1`.
struct Embedding {
    rows: [[f64; 12]; 6],
}

impl Embedding {
    fn new(pi1: &EisInt) -> Self {
        let mut rows = [[0f64; 12]; 6];
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let a = pi1.a.to_f64().unwrap_or(f64::MAX);
        let b = pi1.b.to_f64().unwrap_or(f64::MAX);
        let mut col = 0;
        for zeta in [w, w.conj()] {
            let c = (Complex64::new(a, 0.0) + zeta * b).powf(1.0 / 3.0);
            for j in 0..3 {
                let t = c * w.powu(j);
                let basis = [Complex64::new(1.0, 0.0), zeta, t, zeta * t, t * t, zeta * t * t];
                for (k, v) in basis.iter().enumerate() {
                    rows[k][col] = v.re;
                    rows[k][col + 1] = v.im;
                }
                col += 2;
            }
        }
        Embedding { rows }
    }

    fn apply(&self, v: &Vec6) -> [f64; 12] {
        let mut out = [0f64; 12];
        for (k, &c) in v.iter().enumerate() {
            let c = c as f64;
            for (o, r) in out.iter_mut().zip(self.rows[k].iter()) {
                *o += c * r;
            }
        }
        out
    }

    /// `|N_{K1/k}(v)|` under the first embedding of `k`.
    fn abs_norm(&self, v: &Vec6) -> f64 {
        let e = self.apply(v);
        (0..3).map(|j| (e[2 * j] * e[2 * j] + e[2 * j + 1] * e[2 * j + 1]).sqrt()).product()
    }
}

fn dot(a: &[f64; 12], b: &[f64; 12]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(basis: &[Vec6], emb: &Embedding) -> (Vec<[f64; 12]>, Vec<f64>, Vec<Vec<f64>>) {
    let n = basis.len();
    let mut star: Vec<[f64; 12]> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![0f64; n]; n];
    for i in 0..n {
        let v = emb.apply(&basis[i]);
        let mut w = v;
        for j in 0..i {
            mu[i][j] = if norms[j] > 0.0 { dot(&v, &star[j]) / norms[j] } else { 0.0 };
            for (wk, sk) in w.iter_mut().zip(star[j].iter()) {
                *wk -= mu[i][j] * sk;
            }
        }
        norms.push(dot(&w, &w));
        star.push(w);
    }
    (star, norms, mu)
}

fn lll(mut basis: Vec<Vec6>, emb: &Embedding) -> Vec<Vec6> {
    let n = basis.len();
    let delta = 0.99;
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 20_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (_, _, mu) = gram_schmidt(&basis, emb);
            let q = mu[k][j].round();
            if q != 0.0 && q.is_finite() {
                let q = q as i128;
                let bj = basis[j];
                for (x, y) in basis[k].iter_mut().zip(bj.iter()) {
                    *x -= q * y;
                }
            }
        }
        let (_, norms, mu) = gram_schmidt(&basis, emb);
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

// ---------------------------------------------------------------------------
// Alpha search

/// A generator of `P^a` (or of `P^{2a}` when `a = 2 mod 3`) with `P | pi2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaCandidate {
    pub alpha: CubicRingElem,
    /// Exponent `a` of the lattice level that produced `alpha`.
    pub level: u32,
    /// `alpha` is the square of the lattice vector.
    pub squared: bool,
    /// `N(alpha) = pi2 * beta^3`.
    pub beta: EisInt,
    /// Which cube root of `pi1` modulo `pi2` defines `P` (0, 1, 2).
    pub root_index: usize,
}

/// Checks that `pi1, pi2` are distinct normalized primes with
/// `(pi1/pi2)_3 = (pi2/pi1)_3 = 1`.
pub fn check_pair(pi1: &EisPrime, pi2: &EisPrime) -> Result<(), CubicError> {
    for p in [pi1, pi2] {
        if p.kind == PrimeKind::Ramified || !p.nine_admissible {
            return Err(CubicError::NotAdmissible(format!("{} has norm {} not 1 mod 9", p.pi, p.q)));
        }
    }
    if pi1.same_ideal(pi2) {
        return Err(CubicError::NotAdmissible("primes must be distinct".into()));
    }
    if crate::eisenstein::cubic_character(&pi2.pi, pi1)? != 0 || crate::eisenstein::cubic_character(&pi1.pi, pi2)? != 0 {
        return Err(CubicError::NotAdmissible(format!("({}/{})_3 or ({}/{})_3 is nontrivial", pi1.pi, pi2.pi, pi2.pi, pi1.pi)));
    }
    Ok(())
}

fn to_elem(v: &Vec6, pi1: &EisInt) -> CubicRingElem {
    CubicRingElem::new(EisInt::new(v[0], v[1]), EisInt::new(v[2], v[3]), EisInt::new(v[4], v[5]), pi1.clone())
}

/// `beta` with `n = pi2 * beta^3` for `n = +-pi2^k`, `k = 1 mod 3`.
fn beta_for(n: &EisInt, pi2: &EisInt) -> Option<EisInt> {
    let mut rest = n.div_exact(pi2)?;
    let mut power = 0u32;
    while let Some(q) = rest.div_exact(pi2) {
        rest = q;
        power += 1;
    }
    if !power.is_multiple_of(3) {
        return None;
    }
    let base = pi2.pow(power / 3);
    if rest == EisInt::one() {
        Some(base)
    } else if rest == -EisInt::one() {
        Some(-base)
    } else {
        None
    }
}

/// `beta` with `beta^3 = m`, if `m` is a cube in `O_k`.
fn eis_cube_root(m: &EisInt) -> Option<EisInt> {
    let sqrt3_half = 3f64.sqrt() / 2.0;
    let z = Complex64::new(m.a.to_f64()? - m.b.to_f64()? / 2.0, m.b.to_f64()? * sqrt3_half);
    let root = z.powf(1.0 / 3.0);
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    for j in 0..3 {
        let c = root * w.powu(j);
        let b = (c.im / sqrt3_half).round();
        let a = (c.re + b / 2.0).round();
        for (da, db) in [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0)] {
            let cand = EisInt::new(BigInt::from((a + da) as i64), BigInt::from((b + db) as i64));
            if &cand.pow(3) == m {
                return Some(cand);
            }
        }
    }
    None
}

/// Prime factors of `u` in `O_k` with multiplicity; `None` if `u` is
/// divisible by `sqrt(-3)`.
fn eis_factor(u: &EisInt) -> Option<Vec<(EisPrime, u32)>> {
    let mut n = u.norm();
    let mut rational = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            rational.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1u32;
    }
    if n > BigInt::from(1) {
        rational.push(n);
    }
    let mut out = Vec::new();
    for p in rational {
        if p == BigInt::from(3) {
            return None;
        }
        let prime = EisPrime::from_rational(&p).ok()?;
        let mut gens = vec![prime.pi.clone()];
        if prime.kind == PrimeKind::Split {
            gens.push(prime.pi.conj());
        }
        for g in gens {
            let mut rest = u.clone();
            let mut v = 0u32;
            while let Some(q) = rest.div_exact(&g) {
                rest = q;
                v += 1;
            }
            if v > 0 {
                out.push((EisPrime::from_generator(&g).ok()?, v));
            }
        }
    }
    Some(out)
}

/// For `(alpha) = P * B` with `N(B) = beta^3` coprime to `pi2`: every prime
/// `Q | B` has `v_Q(theta) = 0 mod 3`, `theta = alpha^2 tau(alpha)`. Only
/// primes of `O_k` splitting in `K1` need checking; there `tau` permutes the
/// three primes above, so their valuations of `alpha` must agree mod 3.
fn theta_valuations_are_cubes(alpha: &CubicRingElem, beta: &EisInt, pi1: &EisPrime) -> Result<bool, CubicError> {
    let Some(factors) = eis_factor(beta) else { return Ok(false) };
    for (ell, v) in factors {
        if ell.same_ideal(pi1) || crate::eisenstein::cubic_character(&pi1.pi, &ell)? != 0 {
            continue;
        }
        let field = residue_field_of(&ell)?;
        let level = 3 * v + 1;
        let ring = LocalRing::new(&field, level);
        let r0 = field.cube_root(&field.reduce(&pi1.pi))?;
        let roots = [r0.clone(), field.mul(&r0, field.omega()), field.mul(&field.mul(&r0, field.omega()), field.omega())];
        let mut vals = Vec::new();
        for r in &roots {
            let big_r = ring.lift_cube_root(r, &pi1.pi, level);
            let value = ring.reduce(&(&(&alpha.x + &ring.mul(&alpha.y, &big_r)) + &ring.mul(&alpha.z, &ring.mul(&big_r, &big_r))));
            vals.push(ring.valuation(&value, field.characteristic(), level));
        }
        if !(vals[0] % 3 == vals[1] % 3 && vals[1] % 3 == vals[2] % 3) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lattice basis of `{(x, y, z) : x + y R + z R^2 = 0 mod pi2^a}`.
fn ideal_lattice(ring: &LocalRing, root: &EisInt) -> Option<Vec<Vec6>> {
    let to_i = |b: &BigInt| b.to_i128();
    let pa = to_i(&ring.pa)?;
    let r2 = ring.mul(root, root);
    let images = [
        EisInt::one(),
        EisInt::zeta(),
        root.clone(),
        ring.mul(&EisInt::zeta(), root),
        r2.clone(),
        ring.mul(&EisInt::zeta(), &r2),
    ]
    .map(|u| ring.reduce(&u));
    let mut basis = Vec::new();
    match ring.omega {
        None => {
            basis.push([pa, 0, 0, 0, 0, 0]);
            basis.push([0, pa, 0, 0, 0, 0]);
            for (k, img) in images.iter().enumerate().skip(2) {
                let (c0, c1) = ring.split_coords(img);
                let mut v = [0i128; 6];
                v[k] = 1;
                v[0] = -to_i(&c0)?;
                v[1] = -to_i(&c1)?;
                basis.push(v);
            }
        }
        Some(_) => {
            basis.push([pa, 0, 0, 0, 0, 0]);
            for (k, img) in images.iter().enumerate().skip(1) {
                let mut v = [0i128; 6];
                v[k] = 1;
                v[0] = -to_i(&img.a)?;
                basis.push(v);
            }
        }
    }
    Some(basis)
}

fn order_key(c: &AlphaCandidate) -> (u32, BigInt, std::cmp::Reverse<[BigInt; 6]>) {
    (c.level, c.alpha.height(), std::cmp::Reverse(c.alpha.key()))
}

/// Generators of prime-power ideals above `pi2`, sorted by level, height and
/// then lexicographically largest coordinates. Stops after `levels` lattice
/// levels that produced candidates.
pub fn alpha_candidates(pi1: &EisPrime, pi2: &EisPrime, bound: u64, levels: usize) -> Result<Vec<AlphaCandidate>, CubicError> {
    check_pair(pi1, pi2)?;
    let field = residue_field_of(pi2)?;
    let r0 = field.cube_root(&field.reduce(&pi1.pi))?;
    let roots = [r0.clone(), field.mul(&r0, field.omega()), field.mul(&field.mul(&r0, field.omega()), field.omega())];
    let emb = Embedding::new(&pi1.pi);
    let target_abs = pi2.q.to_f64().unwrap_or(f64::MAX).sqrt();
    let bound_big = BigInt::from(bound);
    let mut found: Vec<AlphaCandidate> = Vec::new();
    let mut levels_hit = 0;
    let mut searched = Vec::new();
    for a in (1u32..).filter(|a| a % 3 != 0) {
        if pi2.q.bits() * a as u64 > MAX_LATTICE_INDEX_BITS {
            break;
        }
        searched.push(a);
        let ring = LocalRing::new(&field, a);
        let pi2_a = pi2.pi.pow(a);
        let mut seen = BTreeSet::new();
        let before = found.len();
        for (root_index, r) in roots.iter().enumerate() {
            let big_r = ring.lift_cube_root(r, &pi1.pi, a);
            let Some(basis) = ideal_lattice(&ring, &big_r) else { continue };
            let reduced = lll(basis, &emb);
            let target = target_abs.powi(a as i32);
            for combo in 0..5usize.pow(6) {
                let mut v = [0i128; 6];
                let mut rest = combo;
                let mut nonzero = false;
                for row in &reduced {
                    let c = (rest % 5) as i128 - 2;
                    rest /= 5;
                    if c != 0 {
                        nonzero = true;
                        for (x, y) in v.iter_mut().zip(row.iter()) {
                            *x += c * y;
                        }
                    }
                }
                if !nonzero {
                    continue;
                }
                let ratio = emb.abs_norm(&v) / target;
                let exact_power = (ratio - 1.0).abs() < 1e-6;
                // |N(alpha)| = |pi2| |beta|^3 with N(beta) an integer.
                let cube_like = a == 1 && {
                    let nb = ratio.powf(2.0 / 3.0);
                    nb > 1.5 && (nb - nb.round()).abs() < 1e-6 * nb
                };
                if !exact_power && !cube_like {
                    continue;
                }
                let base = to_elem(&v, &pi1.pi).unit_normalized();
                if !seen.insert(base.key()) {
                    continue;
                }
                let n = base.norm();
                let candidate = if exact_power {
                    // Norm +-pi2^a and membership in P^a force (base) = P^a.
                    if n.norm() != pi2_a.norm() || !pi2_a.divides(&n) {
                        continue;
                    }
                    let (alpha, squared) = if a % 3 == 1 { (base, false) } else { (base.mul(&base)?.unit_normalized(), true) };
                    let Some(beta) = beta_for(&alpha.norm(), &pi2.pi) else { continue };
                    AlphaCandidate { alpha, level: a, squared, beta, root_index }
                } else {
                    let Some(m) = n.div_exact(&pi2.pi) else { continue };
                    if pi2.pi.divides(&m) {
                        continue;
                    }
                    let Some(beta) = eis_cube_root(&m) else { continue };
                    if !theta_valuations_are_cubes(&base, &beta, pi1)? {
                        continue;
                    }
                    AlphaCandidate { alpha: base, level: a, squared: false, beta, root_index }
                };
                if candidate.alpha.height() > bound_big {
                    continue;
                }
                found.push(candidate);
            }
        }
        if found.len() > before {
            levels_hit += 1;
            if levels_hit >= levels {
                break;
            }
        }
    }
    if found.is_empty() {
        return Err(CubicError::BoundExceeded {
            bound,
            searched: format!("lattice levels {searched:?}"),
        });
    }
    found.sort_by_key(order_key);
    Ok(found)
}

/// The first generator in search order.
pub fn find_alpha(pi1: &EisPrime, pi2: &EisPrime, bound: u64) -> Result<CubicRingElem, CubicError> {
    Ok(alpha_candidates(pi1, pi2, bound, 1)?.remove(0).alpha)
}

// ---------------------------------------------------------------------------
// Certificates

/// Verified data `(alpha, e, theta, eta)` for a pair of primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaCertificate {
    pub pi1: EisInt,
    pub pi2: EisInt,
    pub alpha: CubicRingElem,
    pub e: u8,
    pub theta: CubicRingElem,
    /// Cube-condition witness in the basis `1, lambda, lambda^2`.
    pub eta: [EisInt; 3],
    /// `N(alpha) = pi2 * beta^3`.
    pub beta_norm_witness: EisInt,
    pub level: u32,
    pub squared: bool,
}

impl ThetaCertificate {
    /// Replays every invariant: the shape of `theta`, the norm equations and
    /// the cube condition.
    pub fn verify(&self) -> bool {
        let Ok(a2) = self.alpha.mul(&self.alpha) else { return false };
        let Ok(prod) = a2.mul(&self.alpha.tau()) else { return false };
        let theta_ok = prod.scale(&EisInt::zeta_pow(self.e as u32)) == self.theta;
        let norm_alpha = self.alpha.norm();
        let norm_ok = norm_alpha == &self.pi2 * &self.beta_norm_witness.pow(3);
        let theta_norm_ok = self.theta.norm() == norm_alpha.pow(3);
        let cube_ok = cube_mod_3s(&self.eta, &self.pi1).is_ok_and(|c| congruent_mod_3s(&c, &lambda_coords(&self.theta)));
        theta_ok && norm_ok && theta_norm_ok && cube_ok && self.alpha.pi1 == self.pi1
    }
}

fn certificate_for(candidate: &AlphaCandidate, pi2: &EisInt) -> Result<Option<ThetaCertificate>, CubicError> {
    let alpha = &candidate.alpha;
    let base = alpha.mul(alpha)?.mul(&alpha.tau())?;
    for e in 0..3u8 {
        let theta = base.scale(&EisInt::zeta_pow(e as u32));
        match cube_condition(&theta) {
            Ok(eta) => {
                return Ok(Some(ThetaCertificate {
                    pi1: alpha.pi1.clone(),
                    pi2: pi2.clone(),
                    alpha: alpha.clone(),
                    e,
                    theta,
                    eta,
                    beta_norm_witness: candidate.beta.clone(),
                    level: candidate.level,
                    squared: candidate.squared,
                }))
            }
            Err(CubicError::NoWitness) => continue,
            Err(err) => return Err(err),
        }
    }
    Ok(None)
}

/// Up to `limit` certificates from distinct generators, in search order.
pub fn theta_certificates(pi1: &EisPrime, pi2: &EisPrime, bound: u64, limit: usize) -> Result<Vec<ThetaCertificate>, CubicError> {
    let levels = if limit <= 1 { 1 } else { 2 };
    let mut out = Vec::new();
    for cand in alpha_candidates(pi1, pi2, bound, levels)? {
        if let Some(cert) = certificate_for(&cand, &pi2.pi)? {
            debug_assert!(cert.verify());
            out.push(cert);
            if out.len() >= limit {
                break;
            }
        }
    }
    Ok(out)
}

pub fn build_theta_certificate(pi1: &EisPrime, pi2: &EisPrime, bound: u64) -> Result<ThetaCertificate, CubicError> {
    let mut certs = theta_certificates(pi1, pi2, bound, 1)?;
    if certs.is_empty() {
        certs = theta_certificates(pi1, pi2, bound, usize::MAX)?;
    }
    certs.into_iter().next().ok_or(CubicError::NoWitness)
}

// ---------------------------------------------------------------------------
// Symbol and oracle

/// Checks the three primes pairwise.
pub fn check_triple(pi1: &EisPrime, pi2: &EisPrime, pi3: &EisPrime) -> Result<(), CubicError> {
    check_pair(pi1, pi2)?;
    check_pair(pi1, pi3)?;
    check_pair(pi2, pi3)?;
    Ok(())
}

/// The three cube roots of `pi1` modulo `pi3`, smallest encoding first.
fn cube_roots_of_pi1(cert: &ThetaCertificate, field: &ResidueField) -> Result<[RFElem; 3], CubicError> {
    let r = field.cube_root(&field.reduce(&cert.pi1))?;
    let w = field.omega();
    let rw = field.mul(&r, w);
    let rw2 = field.mul(&rw, w);
    Ok([r, rw, rw2])
}

/// Symbol exponent using the `root_index`-th cube root of `pi1` mod `pi3`.
pub fn symbol_with_root(cert: &ThetaCertificate, pi3: &EisPrime, root_index: usize) -> Result<SymbolValue, CubicError> {
    let field = residue_field_of(pi3)?;
    let r = cube_roots_of_pi1(cert, &field)?[root_index % 3].clone();
    let r2 = field.mul(&r, &r);
    let th = &cert.theta;
    let value = field.add(
        &field.add(&field.reduce(&th.x), &field.mul(&field.reduce(&th.y), &r)),
        &field.mul(&field.reduce(&th.z), &r2),
    );
    if field.is_zero(&value) {
        return Err(CubicError::ThetaVanishes);
    }
    let t = field.character_exponent(&value)?;
    Ok(SymbolValue::new(3, t as i128))
}

pub fn symbol_from_certificate(cert: &ThetaCertificate, pi3: &EisPrime) -> Result<SymbolValue, CubicError> {
    symbol_with_root(cert, pi3, 0)
}

pub fn triple_cubic_symbol(pi1: &EisPrime, pi2: &EisPrime, pi3: &EisPrime, bound: u64) -> Result<SymbolValue, CubicError> {
    check_triple(pi1, pi2, pi3)?;
    let cert = build_theta_certificate(pi1, pi2, bound)?;
    symbol_from_certificate(&cert, pi3)
}

fn kummer_splits(field: &ResidueField, c: &RFElem) -> Result<bool, CubicError> {
    let z = field.zero();
    let poly: Poly<RFElem> = vec![field.neg(c), z.clone(), z, field.one()];
    if !is_squarefree(field, &poly) {
        return Err(CubicError::Degenerate("cube root of zero modulo the third prime".into()));
    }
    Ok(count_distinct_roots(field, &poly) == 3)
}

/// Complete splitting of `pi3` in `k(cbrt pi1, cbrt pi2, cbrt theta)`:
/// `T^3 - pi1` and `T^3 - pi2` split over the residue field of `pi3`, and at
/// each of the three primes above `pi3` in `K1` (one per root `r` of
/// `T^3 - pi1`) the polynomial `T^3 - theta(r)` has three roots.
pub fn cubic_splitting_oracle(cert: &ThetaCertificate, pi3: &EisPrime) -> Result<bool, CubicError> {
    let pi1 = EisPrime::from_generator(&cert.pi1)?;
    let pi2 = EisPrime::from_generator(&cert.pi2)?;
    check_triple(&pi1, &pi2, pi3)?;
    let field = residue_field_of(pi3)?;
    if !kummer_splits(&field, &field.reduce(&cert.pi1))? || !kummer_splits(&field, &field.reduce(&cert.pi2))? {
        return Ok(false);
    }
    let th = &cert.theta;
    let (x, y, z) = (field.reduce(&th.x), field.reduce(&th.y), field.reduce(&th.z));
    for r in cube_roots_of_pi1(cert, &field)? {
        let value = field.add(&field.add(&x, &field.mul(&y, &r)), &field.mul(&z, &field.mul(&r, &r)));
        if !kummer_splits(&field, &value)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::{normalize_prime, PrimeInput};

    fn prime(p: i64) -> EisPrime {
        normalize_prime(&PrimeInput::Rational(BigInt::from(p))).unwrap()
    }

    fn e(a: i64, b: i64) -> EisInt {
        EisInt::new(a, b)
    }

    fn elem(x: (i64, i64), y: (i64, i64), z: (i64, i64), pi1: &EisInt) -> CubicRingElem {
        CubicRingElem::new(e(x.0, x.1), e(y.0, y.1), e(z.0, z.1), pi1.clone())
    }

    #[test]
    fn ring_laws() {
        let pi1 = e(-17, 0);
        let t = CubicRingElem::t(&pi1);
        let t2 = t.mul(&t).unwrap();
        assert_eq!(t.mul(&t2).unwrap(), CubicRingElem::from_eis(pi1.clone(), &pi1));
        let u = elem((3, 1), (-2, 5), (0, 7), &pi1);
        assert_eq!(u.mul(&CubicRingElem::one(&pi1)).unwrap(), u);
        assert_eq!(u.tau().tau().tau(), u);
        assert_eq!(u.tau().norm(), u.norm());
        assert_eq!(t.tau(), elem((0, 0), (0, 1), (0, 0), &pi1));
        let other = CubicRingElem::one(&e(-53, 0));
        assert_eq!(u.mul(&other), Err(CubicError::ContextMismatch));
    }

    #[test]
    fn norm_examples() {
        let pi1 = e(-17, 0);
        assert_eq!(CubicRingElem::one(&pi1).norm(), e(1, 0));
        assert_eq!(CubicRingElem::t(&pi1).norm(), pi1);
        assert_eq!(elem((8, 0), (3, 0), (0, 0), &pi1).norm(), e(53, 0));
    }

    #[test]
    fn norm_is_product_of_conjugates() {
        let pi1 = e(-17, 0);
        for (x, y, z) in [((1, 2), (3, -1), (0, 4)), ((5, 0), (0, 0), (1, 1)), ((-2, 7), (4, 4), (-3, 0))] {
            let u = elem(x, y, z, &pi1);
            let p = u.mul(&u.tau()).unwrap().mul(&u.tau().tau()).unwrap();
            assert_eq!(p, CubicRingElem::from_eis(u.norm(), &pi1));
        }
    }

    #[test]
    fn lambda_order() {
        let pi1 = e(-17, 0);
        assert_eq!(lambda_constant(&pi1).unwrap(), e(18, 0).div_exact(&e(3, 6)).unwrap());
        assert!(lambda_constant(&e(17, 0)).is_err());
        // lambda = (t - 1)/s satisfies lambda^3 = c + lambda + s lambda^2:
        // check via t = 1 + s lambda in lambda coordinates.
        let t = CubicRingElem::t(&pi1).to_lambda();
        assert_eq!(t, [e(1, 0), e(1, 2), e(0, 0)]);
    }

    #[test]
    fn example_alpha_and_certificate() {
        let (p17, p53) = (prime(17), prime(53));
        let alpha = find_alpha(&p17, &p53, 10).unwrap();
        assert_eq!(alpha, elem((8, 0), (3, 0), (0, 0), &p17.pi));
        let cert = build_theta_certificate(&p17, &p53, 10).unwrap();
        assert_eq!(cert.e, 0);
        assert!(cert.verify());
        assert_eq!(cert.beta_norm_witness, e(-1, 0));
        // alpha is congruent to tau(alpha), so alpha itself is a witness.
        let alpha_cubed = cube_mod_3s(&alpha.to_lambda(), &p17.pi).unwrap();
        assert!(congruent_mod_3s(&alpha_cubed, &cert.theta.to_lambda()));
        let eta_cubed = cube_mod_3s(&cert.eta, &p17.pi).unwrap();
        assert!(congruent_mod_3s(&eta_cubed, &cert.theta.to_lambda()));
    }

    #[test]
    fn cube_condition_trivial_cases() {
        let pi1 = prime(17).pi;
        let one = CubicRingElem::one(&pi1);
        let w = cube_condition(&one).unwrap();
        assert!(congruent_mod_3s(&cube_mod_3s(&w, &pi1).unwrap(), &one.to_lambda()));
        assert!(congruent_mod_3s(&cube_mod_3s(&one.to_lambda(), &pi1).unwrap(), &one.to_lambda()));
        let p = CubicRingElem::from_eis(pi1.clone(), &pi1);
        let w = cube_condition(&p).unwrap();
        assert!(congruent_mod_3s(&cube_mod_3s(&w, &pi1).unwrap(), &p.to_lambda()));
        let three = CubicRingElem::from_eis(e(3, 0), &pi1);
        assert_eq!(cube_condition(&three), Err(CubicError::NotCoprimeToThree));
    }

    #[test]
    fn example_symbols() {
        let (p17, p53) = (prime(17), prime(53));
        let cert = build_theta_certificate(&p17, &p53, 10).unwrap();
        for (p3, t) in [(71, 2), (89, 1), (107, 2), (179, 1), (197, 1)] {
            let pi3 = prime(p3);
            for j in 0..3 {
                assert_eq!(symbol_with_root(&cert, &pi3, j).unwrap(), SymbolValue::new(3, t), "p3 = {p3}, root {j}");
            }
            assert_eq!(cubic_splitting_oracle(&cert, &pi3), Ok(false));
        }
    }

    #[test]
    fn inadmissible_pairs() {
        // 17 and 19: 19 has norm 19, not 1 mod 9
        let p19 = EisPrime::from_rational(&BigInt::from(19)).unwrap();
        assert!(matches!(find_alpha(&prime(17), &p19, 10), Err(CubicError::NotAdmissible(_))));
        assert!(matches!(find_alpha(&prime(17), &prime(17), 10), Err(CubicError::NotAdmissible(_))));
    }

    #[test]
    fn norm_is_multiplicative() {
        let pi1 = e(-17, 0);
        let mut seed = 7i64;
        let mut next = || {
            seed = (seed * 1103515245 + 12345).rem_euclid(1 << 31);
            seed % 21 - 10
        };
        for _ in 0..50 {
            let u = elem((next(), next()), (next(), next()), (next(), next()), &pi1);
            let v = elem((next(), next()), (next(), next()), (next(), next()), &pi1);
            assert_eq!(u.mul(&v).unwrap().norm(), &u.norm() * &v.norm());
        }
    }

    #[test]
    fn sign_of_generators_is_irrelevant() {
        let (p17, p53, p71) = (prime(17), prime(53), prime(71));
        let flip = |p: &EisPrime| EisPrime { pi: -&p.pi, ..p.clone() };
        let base = triple_cubic_symbol(&p17, &p53, &p71, 10).unwrap();
        assert_eq!(triple_cubic_symbol(&p17, &p53, &flip(&p71), 10).unwrap(), base);
        assert_eq!(triple_cubic_symbol(&p17, &flip(&p53), &p71, 10).unwrap(), base);
        assert_eq!(triple_cubic_symbol(&flip(&p17), &p53, &p71, 10).unwrap(), base);
    }

    #[test]
    fn split_primes() {
        let p17 = prime(17);
        let p163 = EisPrime::from_rational(&BigInt::from(163)).unwrap();
        assert_eq!(p163.kind, PrimeKind::Split);
        let c1 = build_theta_certificate(&p17, &p163, DEFAULT_ALPHA_BOUND).unwrap();
        let c2 = build_theta_certificate(&p163, &p17, DEFAULT_ALPHA_BOUND).unwrap();
        assert!(c1.verify() && c2.verify());
        let mut checked = 0;
        for p3 in [53, 71, 89, 107, 179, 197, 233] {
            let pi3 = prime(p3);
            if check_triple(&p17, &p163, &pi3).is_err() {
                continue;
            }
            let s1 = symbol_from_certificate(&c1, &pi3).unwrap();
            let s2 = symbol_from_certificate(&c2, &pi3).unwrap();
            assert!(s1.mul(&s2).is_trivial(), "p3 = {p3}");
            assert_eq!(cubic_splitting_oracle(&c1, &pi3).unwrap(), s1.is_trivial());
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn eisenstein_cube_roots() {
        for (a, b) in [(2, 1), (-3, 5), (7, 0), (0, -4)] {
            let u = e(a, b);
            let r = eis_cube_root(&u.pow(3)).unwrap();
            assert_eq!(r.pow(3), u.pow(3));
        }
        assert_eq!(eis_cube_root(&e(2, 0)), None);
    }
}
