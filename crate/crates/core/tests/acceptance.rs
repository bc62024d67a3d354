//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Reference values come from independent computations in this
//! file wherever the library would otherwise be checked against itself.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use mpres::arith::{is_prime_u64, legendre_symbol, DEFAULT_TERNARY_BOUND};
use mpres::cubic::{
    build_theta_certificate, check_triple, cubic_splitting_oracle, symbol_from_certificate, symbol_with_root, theta_certificates,
    triple_cubic_symbol, ThetaCertificate, DEFAULT_ALPHA_BOUND,
};
use mpres::eisenstein::{normalize_prime, EisInt, EisPrime, PrimeInput, PrimeKind};
use mpres::magnus::{fox_coefficient, magnus_coefficient, shuffles, GroupWord, Letter};
use mpres::milnor::{check_condition_31, indeterminacy, milnor_invariant, unipotent_rep, LinkPresentation};
use mpres::redei::{construct_alpha, redei_admissible, redei_splitting_oracle, redei_symbol_with_root};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn prime(p: i64) -> EisPrime {
    normalize_prime(&PrimeInput::Rational(big(p))).expect("normalizable prime")
}

/// Rational primes = 8 mod 9 below `limit`.
fn inert_primes(limit: u64) -> Vec<i64> {
    (2..limit).filter(|&p| p % 9 == 8 && is_prime_u64(p)).map(|p| p as i64).collect()
}

/// Pairs `(a, b)` with certificates in both orders, drawn in a fixed order.
fn symmetric_pairs(primes: &[i64], want: usize) -> Vec<((i64, i64), ThetaCertificate, ThetaCertificate)> {
    let mut out = Vec::new();
    'outer: for (i, &a) in primes.iter().enumerate() {
        for &b in &primes[i + 1..] {
            let Ok(ab) = build_theta_certificate(&prime(a), &prime(b), DEFAULT_ALPHA_BOUND) else { continue };
            let Ok(ba) = build_theta_certificate(&prime(b), &prime(a), DEFAULT_ALPHA_BOUND) else { continue };
            out.push(((a, b), ab, ba));
            if out.len() >= want {
                break 'outer;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Independent Magnus expansion

fn binom_i128(n: i128, k: u32) -> i128 {
    let mut acc: i128 = 1;
    for j in 0..k as i128 {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

type Series = HashMap<Vec<usize>, i128>;

fn series_mul(a: &Series, b: &Series, m: i128, deg: usize) -> Series {
    let mut out = Series::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            if ka.len() + kb.len() > deg {
                continue;
            }
            let mut k = ka.clone();
            k.extend(kb);
            let e = out.entry(k).or_insert(0);
            *e = (*e + va * vb).rem_euclid(m);
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// `M(w)` truncated at degree `deg`, from `x_g^e = sum_k C(e, k) X_g^k`.
fn naive_expansion(w: &GroupWord, m: u64, deg: usize) -> Series {
    let m = m as i128;
    let mut acc: Series = [(vec![], 1)].into_iter().collect();
    for Letter { gen, exp } in w.letters() {
        let e: i128 = exp.try_into().expect("small exponent");
        let mut factor = Series::new();
        for k in 0..=deg {
            let c = binom_i128(e, k as u32).rem_euclid(m);
            if c != 0 {
                factor.insert(vec![*gen; k], c);
            }
        }
        acc = series_mul(&acc, &factor, m, deg);
    }
    acc
}

fn random_word(rng: &mut ChaCha8Rng, n_gens: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    let mut w = GroupWord::identity(n_gens);
    for _ in 0..len {
        let g = rng.gen_range(1..=n_gens);
        let mut e: i64 = rng.gen_range(-3..=3);
        if e == 0 {
            e = 1;
        }
        w = w.mul(&GroupWord::generator_power(n_gens, g, e).expect("generator in range"));
    }
    w
}

fn random_index(rng: &mut ChaCha8Rng, n_gens: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(1..=n_gens)).collect()
}

/// Quasi-shuffles built directly from the recursive definition.
fn quasi_shuffles(i: &[usize], j: &[usize]) -> BTreeMap<Vec<usize>, u64> {
    let mut out = BTreeMap::new();
    if i.is_empty() || j.is_empty() {
        out.insert([i, j].concat(), 1);
        return out;
    }
    let mut push = |head: usize, tails: BTreeMap<Vec<usize>, u64>| {
        for (t, c) in tails {
            let mut k = vec![head];
            k.extend(t);
            *out.entry(k).or_insert(0) += c;
        }
    };
    push(i[0], quasi_shuffles(&i[1..], j));
    push(j[0], quasi_shuffles(i, &j[1..]));
    if i[0] == j[0] {
        push(i[0], quasi_shuffles(&i[1..], &j[1..]));
    }
    out
}

// ---------------------------------------------------------------------------
// Criteria

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (p1, p2) = (prime(17), prime(53));
    for (p3, expected) in [(71, 2), (89, 1), (107, 2), (179, 1), (197, 1)] {
        let v = triple_cubic_symbol(&p1, &p2, &prime(p3), DEFAULT_ALPHA_BOUND).map_err(|e| format!("p3 = {p3}: {e}"))?;
        ensure(v.m == 3 && v.exponent == expected, || format!("p3 = {p3}: got {v}, expected exponent {expected}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("5 symbols in {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let a = magnus_coefficient(&"[x1,x2]".parse().unwrap(), &[1, 2], 3).map_err(|e| e.to_string())?;
    let b = magnus_coefficient(&"[x2,x1]".parse().unwrap(), &[1, 2], 3).map_err(|e| e.to_string())?;
    ensure((a, b) == (1, 2), || format!("got ({a}, {b})"))?;
    Ok("mu_3((12);[x1,x2]) = 1, mu_3((12);[x2,x1]) = 2".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let primes = inert_primes(1000);
    let pairs = symmetric_pairs(&primes, 4);
    let mut triples = 0;
    for ((a, b), ab, ba) in &pairs {
        for &c in primes.iter().filter(|&&c| c != *a && c != *b).take(4) {
            let pc = prime(c);
            check_triple(&prime(*a), &prime(*b), &pc).map_err(|e| e.to_string())?;
            let s1 = symbol_from_certificate(ab, &pc).map_err(|e| e.to_string())?;
            let s2 = symbol_from_certificate(ba, &pc).map_err(|e| e.to_string())?;
            ensure((s1.exponent + s2.exponent) % 3 == 0, || format!("({a},{b},{c}): {s1} and {s2}"))?;
            triples += 1;
        }
    }
    let t = start.elapsed();
    ensure(triples >= 10, || format!("only {triples} triples"))?;
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{triples} triples from {} prime pairs in {t:.2?}", pairs.len()))
}

/// Independent Redei check by enumeration: `p3` splits completely iff
/// `p1`, `p2` are squares mod `p3` and `x + s y` is a square for a root `s`.
fn redei_split_by_enumeration(p1: i64, p2: i64, p3: i64, x: i64, y: i64) -> bool {
    let squares: Vec<bool> = {
        let mut v = vec![false; p3 as usize];
        for t in 0..p3 {
            v[(t * t % p3) as usize] = true;
        }
        v
    };
    let is_sq = |a: i64| squares[a.rem_euclid(p3) as usize];
    if !is_sq(p1) || !is_sq(p2) {
        return false;
    }
    let s = (0..p3).find(|s| (s * s - p1).rem_euclid(p3) == 0).unwrap();
    // x + s y and x - s y have product p2 z^2, a nonzero square.
    is_sq(x + s * y) && is_sq(x - s * y)
}

fn redei_triples(count: usize) -> Vec<(i64, i64, i64)> {
    let ps: Vec<i64> = (5..400).filter(|&p| p % 4 == 1 && is_prime_u64(p as u64)).collect();
    let mut out = Vec::new();
    for &a in &ps {
        for &b in &ps {
            for &c in &ps {
                if a < b && redei_admissible(&big(a), &big(b), &big(c)).unwrap_or(false) {
                    out.push((a, b, c));
                    if out.len() >= count {
                        return out;
                    }
                }
            }
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let primes = inert_primes(1000);
    let pairs = symmetric_pairs(&primes, 3);
    let (mut cubic, mut cubic_trivial) = (0, 0);
    for ((a, b), ab, _) in &pairs {
        for &c in primes.iter().filter(|&&c| c != *a && c != *b).take(10) {
            let pc = prime(c);
            let s = symbol_from_certificate(ab, &pc).map_err(|e| e.to_string())?;
            let split = cubic_splitting_oracle(ab, &pc).map_err(|e| e.to_string())?;
            ensure(split == s.is_trivial(), || format!("cubic ({a},{b},{c}): symbol {s}, split {split}"))?;
            cubic += 1;
            cubic_trivial += s.is_trivial() as usize;
        }
    }
    let (mut redei, mut redei_trivial) = (0, 0);
    for (a, b, c) in redei_triples(30) {
        let cert = construct_alpha(&big(a), &big(b), DEFAULT_TERNARY_BOUND).map_err(|e| e.to_string())?;
        let s = redei_symbol_with_root(&cert, &big(c), &mpres::arith::sqrt_mod_p(&big(a), &big(c)).unwrap()).map_err(|e| e.to_string())?;
        let split = redei_splitting_oracle(&cert, &big(c)).map_err(|e| e.to_string())?;
        let (x, y) = cert.alpha();
        let brute = redei_split_by_enumeration(a, b, c, x.try_into().unwrap(), y.try_into().unwrap());
        ensure(split == s.is_trivial() && brute == split, || format!("redei ({a},{b},{c}): symbol {s}, oracle {split}, enumeration {brute}"))?;
        redei += 1;
        redei_trivial += s.is_trivial() as usize;
    }
    ensure(cubic >= 20 && redei >= 20, || format!("{cubic} cubic, {redei} Redei triples"))?;
    Ok(format!("{cubic} cubic triples ({cubic_trivial} trivial), {redei} Redei triples ({redei_trivial} trivial)"))
}

fn criterion_5() -> Outcome {
    let primes = inert_primes(1000);
    // cube-root choice
    let pairs = symmetric_pairs(&primes, 3);
    let mut root_triples = 0;
    for ((a, b), ab, ba) in &pairs {
        for &c in primes.iter().filter(|&&c| c != *a && c != *b).take(4) {
            for cert in [ab, ba] {
                let pc = prime(c);
                let vals: Vec<u64> = (0..3)
                    .map(|j| symbol_with_root(cert, &pc, j).map(|v| v.exponent))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                ensure(vals.iter().all(|v| *v == vals[0]), || format!("({a},{b},{c}): roots give {vals:?}"))?;
                root_triples += 1;
            }
        }
    }
    // certificate choice
    let mut cert_pairs = 0;
    'pairs: for (i, &a) in primes.iter().enumerate() {
        for &b in &primes[i + 1..] {
            let Ok(certs) = theta_certificates(&prime(a), &prime(b), DEFAULT_ALPHA_BOUND, 3) else { continue };
            if certs.len() < 2 {
                continue;
            }
            ensure(certs.iter().all(|c| c.verify()), || format!("({a},{b}): certificate fails replay"))?;
            ensure(certs[0].theta != certs[1].theta, || format!("({a},{b}): duplicate theta"))?;
            for &c in primes.iter().filter(|&&c| c != a && c != b).take(5) {
                let vals: Vec<u64> = certs
                    .iter()
                    .map(|cert| symbol_from_certificate(cert, &prime(c)).map(|v| v.exponent))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                ensure(vals.iter().all(|v| *v == vals[0]), || format!("({a},{b},{c}): certificates give {vals:?}"))?;
            }
            cert_pairs += 1;
            if cert_pairs >= 6 {
                break 'pairs;
            }
        }
    }
    // +-s in the Redei formula
    let mut redei = 0;
    for (a, b, c) in redei_triples(30) {
        let cert = construct_alpha(&big(a), &big(b), DEFAULT_TERNARY_BOUND).map_err(|e| e.to_string())?;
        let s = mpres::arith::sqrt_mod_p(&big(a), &big(c)).map_err(|e| e.to_string())?;
        let v1 = redei_symbol_with_root(&cert, &big(c), &s).map_err(|e| e.to_string())?;
        let v2 = redei_symbol_with_root(&cert, &big(c), &(big(c) - &s)).map_err(|e| e.to_string())?;
        ensure(v1 == v2, || format!("redei ({a},{b},{c}): {v1} vs {v2}"))?;
        redei += 1;
    }
    ensure(root_triples >= 20 && cert_pairs >= 5, || format!("{root_triples} root triples, {cert_pairs} certificate pairs"))?;
    Ok(format!("{root_triples} cube-root checks, {cert_pairs} certificate pairs, {redei} Redei sign checks"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0;
    for m in [2u64, 3, 4, 9] {
        for _ in 0..100 {
            let n_gens = rng.gen_range(1..=3);
            let w = random_word(&mut rng, n_gens, 8);
            let li = rng.gen_range(1..=3);
            let lj = rng.gen_range(1..=4 - li);
            let (i, j) = (random_index(&mut rng, n_gens, li), random_index(&mut rng, n_gens, lj));
            let sh = quasi_shuffles(&i, &j);
            ensure(sh == shuffles(&i, &j), || format!("shuffle sets differ for {i:?}, {j:?}"))?;
            let mu = |k: &[usize]| magnus_coefficient(&w, k, m).map_err(|e| e.to_string());
            let lhs = mu(&i)? * mu(&j)? % m;
            let mut rhs = 0;
            for (h, c) in &sh {
                rhs = (rhs + c % m * mu(h)?) % m;
            }
            ensure(lhs == rhs, || format!("w = {w}, I = {i:?}, J = {j:?}, m = {m}: {lhs} vs {rhs}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (word, I, J, m) cases"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let m = [2u64, 3, 4, 5, 7, 8, 9, 25, 27][rng.gen_range(0..9)];
        let n_gens = rng.gen_range(1..=3);
        let w = random_word(&mut rng, n_gens, 10);
        let len = rng.gen_range(1..=4);
        let i = random_index(&mut rng, n_gens, len);
        let fox = fox_coefficient(&w, &i, m).map_err(|e| e.to_string())?;
        let mag = magnus_coefficient(&w, &i, m).map_err(|e| e.to_string())?;
        let naive = naive_expansion(&w, m, len).get(&i).copied().unwrap_or(0) as u64;
        ensure(fox == mag && mag == naive, || format!("case {case}: w = {w}, I = {i:?}, m = {m}: fox {fox}, magnus {mag}, direct {naive}"))?;
    }
    Ok("100 random cases, Fox = Magnus = direct expansion".into())
}

/// Product of per-letter matrices, built from binomial coefficients.
fn rep_by_letters(w: &GroupWord, index: &[usize], modulus: u64) -> Vec<Vec<u64>> {
    let n = index.len();
    let m = modulus as i128;
    let mut acc: Vec<Vec<i128>> = (0..n).map(|a| (0..n).map(|b| (a == b) as i128).collect()).collect();
    for Letter { gen, exp } in w.letters() {
        let e: i128 = exp.try_into().expect("small exponent");
        let mut mat = vec![vec![0i128; n]; n];
        for a in 0..n {
            mat[a][a] = 1;
            for b in a..n - 1 {
                if index[a..=b].iter().all(|g| g == gen) {
                    mat[a][b + 1] = binom_i128(e, (b - a + 1) as u32).rem_euclid(m);
                }
            }
        }
        acc = (0..n)
            .map(|a| (0..n).map(|c| (0..n).map(|b| acc[a][b] * mat[b][c]).sum::<i128>().rem_euclid(m)).collect())
            .collect();
    }
    acc.into_iter().map(|r| r.into_iter().map(|v| v as u64).collect()).collect()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut suite = 0;
    let mut attempts = 0;
    while suite < 24 && attempts < 2000 {
        attempts += 1;
        let (m, norms): (u64, Vec<i64>) =
            if rng.gen_bool(0.5) { (3, vec![19, 37, 73]) } else { (9, vec![109, 163, 271]) };
        let y: Vec<GroupWord> = (0..3)
            .map(|_| {
                let mut w = GroupWord::identity(3);
                for _ in 0..rng.gen_range(0..=2) {
                    let u = random_word(&mut rng, 3, 3);
                    let v = random_word(&mut rng, 3, 3);
                    w = w.mul(&GroupWord::commutator(&u, &v));
                }
                w
            })
            .collect();
        let pres = LinkPresentation::new(3, m, norms.iter().map(|&n| big(n)).collect(), y, vec![1, 2, 3]).map_err(|e| e.to_string())?;
        let mut index = vec![1, 2, 3];
        let k = rng.gen_range(0..3);
        index.rotate_left(k);
        if rng.gen_bool(0.5) {
            index.swap(0, 1);
        }
        if !check_condition_31(&pres, &index).map_err(|e| e.to_string())? {
            continue;
        }
        let delta = indeterminacy(&pres, &index).map_err(|e| e.to_string())?;
        if delta == 1 {
            continue;
        }
        let modulus = if delta == 0 { m } else { delta };
        for g in 1..=3 {
            let r = unipotent_rep(&pres, &index, &pres.relator(g)).map_err(|e| e.to_string())?;
            ensure(r.is_identity(), || format!("{}: relator {g} not killed, I = {index:?}", pres.to_json()))?;
            for w in [pres.relator(g), pres.frobenius_words()[g - 1].clone()] {
                let direct = unipotent_rep(&pres, &index, &w).map_err(|e| e.to_string())?;
                ensure(direct.entries == rep_by_letters(&w, &index, modulus), || format!("{}: rep of {w} is not multiplicative", pres.to_json()))?;
            }
        }
        let last = *index.last().unwrap();
        let top = unipotent_rep(&pres, &index, &pres.frobenius_words()[last - 1]).map_err(|e| e.to_string())?.top_right();
        let inv = milnor_invariant(&pres, &index).map_err(|e| e.to_string())?;
        ensure(top == inv.reduced, || format!("{}: corner {top} vs invariant {}", pres.to_json(), inv.reduced))?;
        suite += 1;
    }
    ensure(suite >= 20, || format!("only {suite} presentations"))?;
    Ok(format!("{suite} synthetic presentations"))
}

/// `x = 1 mod 3 sqrt(-3)`, tested by dividing `x - 1` by `3 + 6w`
/// (norm 27): `(x - 1) conj(3 + 6w)` must have both coordinates divisible by 27.
fn one_mod_3s(x: &EisInt) -> bool {
    let d = x - &EisInt::one();
    let q = &d * &EisInt::new(-3, -6);
    (&q.a % 27u32 == BigInt::from(0)) && (&q.b % 27u32 == BigInt::from(0))
}

fn criterion_9() -> Outcome {
    let limit = 100_000u64;
    let mut primes = 0;
    for p in 2..limit {
        if !is_prime_u64(p) || p == 3 {
            continue;
        }
        let norm = if p % 3 == 1 { p } else { p * p };
        if norm >= limit || norm % 9 != 1 {
            continue;
        }
        let prime = EisPrime::from_rational(&big(p as i64)).map_err(|e| e.to_string())?;
        let gens = if prime.kind == PrimeKind::Split { vec![prime.pi.clone(), prime.pi.conj()] } else { vec![prime.pi.clone()] };
        for g in gens {
            let hits: Vec<EisInt> = EisInt::units().iter().map(|u| u * &g).filter(one_mod_3s).collect();
            ensure(hits.len() == 1, || format!("{g}: {} normalized associates", hits.len()))?;
            let lib = normalize_prime(&PrimeInput::Generator(g.clone())).map_err(|e| e.to_string())?;
            ensure(lib.pi == hits[0], || format!("{g}: library chose {}, expected {}", lib.pi, hits[0]))?;
            primes += 1;
        }
    }
    Ok(format!("{primes} primes of norm = 1 mod 9 below {limit}"))
}

fn criterion_10() -> Outcome {
    let mut count = 0;
    for p in (3..200).filter(|&p| is_prime_u64(p)) {
        let p = p as i64;
        let squares: Vec<bool> = {
            let mut v = vec![false; p as usize];
            for t in 1..p {
                v[(t * t % p) as usize] = true;
            }
            v
        };
        for a in 0..p {
            let expect = if a == 0 { 0 } else if squares[a as usize] { 1 } else { -1 };
            let got = legendre_symbol(&big(a), &big(p)).map_err(|e| e.to_string())?;
            ensure(got == expect, || format!("({a}/{p}): {got} vs {expect}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} symbols (a/p), odd p < 200"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("cubic triple symbols for (17, 53, p3)", criterion_1),
        ("Magnus coefficients of [x1,x2] and [x2,x1]", criterion_2),
        ("antisymmetry in the first two primes", criterion_3),
        ("symbol triviality iff complete splitting", criterion_4),
        ("independence of root and certificate choices", criterion_5),
        ("shuffle relation", criterion_6),
        ("Fox and Magnus coefficients agree", criterion_7),
        ("unipotent representation", criterion_8),
        ("unique normalized associate", criterion_9),
        ("Euler criterion against squares", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail} [{:.2?}]", n + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
