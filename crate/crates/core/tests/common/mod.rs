//! Independent brute-force oracles shared by the integration suites. None of
//! these call the library's product, minimalization, counting or saturation.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rees_core::{GradedFreeModule, Monomial, RingSpec, Term, TermModule};

pub type Exps = Vec<u32>;
/// `(basis exponents, monomial exponents)`.
pub type RawTerm = (Exps, Exps);

pub fn all_monomials(nvars: usize, degree: u32) -> Vec<Exps> {
    if nvars == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::new();
    for a in 0..=degree {
        for mut rest in all_monomials(nvars - 1, degree - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn add(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Quadratic divisibility filter.
pub fn naive_minimal(terms: &[RawTerm]) -> BTreeSet<RawTerm> {
    let set: BTreeSet<RawTerm> = terms.iter().cloned().collect();
    set.iter()
        .filter(|(b, m)| !set.iter().any(|(b2, m2)| b2 == b && m2 != m && divides(m2, m)))
        .cloned()
        .collect()
}

pub fn raw_generators(m: &TermModule) -> Vec<RawTerm> {
    m.generators().map(|t| (t.basis.exponents().to_vec(), t.monomial.exponents().to_vec())).collect()
}

pub fn generator_set(m: &TermModule) -> BTreeSet<RawTerm> {
    raw_generators(m).into_iter().collect()
}

/// All products of `n` generators (with repetition), unminimalized.
pub fn products_of(gens: &[RawTerm], n: u32, d: usize, e: usize) -> Vec<RawTerm> {
    fn rec(gens: &[RawTerm], start: usize, left: u32, acc: RawTerm, out: &mut Vec<RawTerm>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..gens.len() {
            let next = (add(&acc.0, &gens[i].0), add(&acc.1, &gens[i].1));
            rec(gens, i, left - 1, next, out);
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, n, (vec![0; e], vec![0; d]), &mut out);
    out
}

/// Minimal generators of `M^n` by enumerating every `n`-fold product.
pub fn power_oracle(m: &TermModule, n: u32) -> BTreeSet<RawTerm> {
    let d = m.dimension();
    let e = m.ambient().rank();
    naive_minimal(&products_of(&raw_generators(m), n, d, e))
}

pub fn contains_raw(gens: &[RawTerm], basis: &[u32], mono: &[u32]) -> bool {
    gens.iter().any(|(b, g)| b.as_slice() == basis && divides(g, mono))
}

/// Symmetric basis exponents of level `n` in rank `e`.
pub fn basis_vectors(e: usize, n: u32) -> Vec<Exps> {
    all_monomials(e, n)
}

/// `ℓ((M^n)_m)` by testing every term of degree `m` against all products.
pub fn brute_length(m: &TermModule, n: u32, degree: i64) -> u64 {
    let d = m.dimension();
    let e = m.ambient().rank();
    let shifts = m.ambient().shifts();
    let prods = products_of(&raw_generators(m), n, d, e);
    let mut count = 0;
    for a in basis_vectors(e, n) {
        let t = degree - a.iter().zip(shifts).map(|(&x, &s)| x as i64 * s).sum::<i64>();
        if t < 0 {
            continue;
        }
        for u in all_monomials(d, t as u32) {
            if contains_raw(&prods, &a, &u) {
                count += 1;
            }
        }
    }
    count
}

/// Membership in `(M : m^K)` for `K` large enough to equal the saturation:
/// `t` is in it iff `t u ∈ M` for every monomial `u` of degree `K`.
pub fn saturation_oracle_contains(gens: &[RawTerm], basis: &[u32], mono: &[u32], nvars: usize) -> bool {
    let k: u32 = gens.iter().flat_map(|(_, g)| g.iter().copied()).max().unwrap_or(0) * nvars as u32;
    all_monomials(nvars, k).iter().all(|u| contains_raw(gens, basis, &add(mono, u)))
}

pub fn free_module(d: usize, shifts: Vec<i64>) -> Arc<GradedFreeModule> {
    Arc::new(GradedFreeModule::new(RingSpec::standard(d).unwrap(), shifts).unwrap())
}

pub fn module_from(amb: &Arc<GradedFreeModule>, gens: &[(Exps, usize)]) -> TermModule {
    let e = amb.rank();
    let terms = gens.iter().map(|(m, b)| Term::new(m.clone(), Monomial::unit(e, *b))).collect();
    TermModule::minimalize(amb.clone(), 1, terms).unwrap()
}

/// Random full-rank, nonnegatively graded level 1 module with
/// `d ∈ {2, 3}`, `e ∈ {1, 2}` and generator degrees at most 4.
pub fn random_module(rng: &mut StdRng) -> TermModule {
    let d = rng.gen_range(2..=3);
    let e = rng.gen_range(1..=2);
    let shifts: Vec<i64> = (0..e).map(|_| rng.gen_range(-1..=1)).collect();
    let amb = free_module(d, shifts.clone());
    let mut gens = Vec::new();
    for (b, &s) in shifts.iter().enumerate() {
        let count = rng.gen_range(1..=3);
        for _ in 0..count {
            let lo = (-s).max(0) as u32;
            let hi = (4 - s) as u32;
            let total = rng.gen_range(lo..=hi.min(lo + 3));
            let mut exps = vec![0u32; d];
            for _ in 0..total {
                exps[rng.gen_range(0..d)] += 1;
            }
            gens.push((exps, b));
        }
    }
    module_from(&amb, &gens)
}

pub fn random_corpus(seed: u64, size: usize) -> Vec<TermModule> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..size).map(|_| random_module(&mut rng)).collect()
}

/// Census of `sat \ M` by testing every term up to the given degree.
pub fn quotient_oracle(m: &TermModule, max_degree: i64) -> BTreeMap<i64, u64> {
    let d = m.dimension();
    let e = m.ambient().rank();
    let shifts = m.ambient().shifts();
    let gens = raw_generators(m);
    let mut table = BTreeMap::new();
    for a in basis_vectors(e, m.level()) {
        let shift: i64 = a.iter().zip(shifts).map(|(&x, &s)| x as i64 * s).sum();
        for t in 0..=(max_degree - shift).max(-1) {
            for u in all_monomials(d, t as u32) {
                if !contains_raw(&gens, &a, &u) && saturation_oracle_contains(&gens, &a, &u, d) {
                    *table.entry(t + shift).or_insert(0) += 1;
                }
            }
        }
    }
    table
}
