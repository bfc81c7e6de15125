//! Lengths of graded pieces of term modules.
//!
//! Everything reduces to counting monomials of a fixed degree in a monomial
//! ideal. The count splits on the last variable: a monomial `u x_v^a` lies in
//! `I` iff `u` lies in the slice `I_a = (I : x_v^a)|_{x_v = 0}`. Slices stop
//! changing once `a` reaches the largest `x_v`-exponent `K` of a generator, and
//! the tail `Σ_{a >= K}` is a cumulative count of one slice in one fewer
//! variable. Cumulative counts obey the same recursion, so the memoized
//! function is the `r`-fold cumulative count `F_r(I, s)`.

use std::collections::BTreeMap;

use dashmap::DashMap;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::module::{ComponentIdeal, TermModule};
use crate::monomial::{canonical_order, minimal_generators, Monomial};

/// Degree-indexed lengths of a graded module (or quotient).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LengthTable {
    pub by_degree: BTreeMap<i64, BigUint>,
}

impl LengthTable {
    pub fn get(&self, m: i64) -> BigUint {
        self.by_degree.get(&m).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.by_degree.values().sum()
    }

    fn add(&mut self, m: i64, v: BigUint) {
        if !v.is_zero() {
            *self.by_degree.entry(m).or_default() += v;
        }
    }
}

/// `C(n, k)` with `C(n, -1) = [n == -1]` so that an ideal in zero variables
/// counts one monomial in degree 0.
fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 {
        return if n == -1 { BigUint::one() } else { BigUint::zero() };
    }
    if n < k {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from((n - i) as u64);
        acc /= BigUint::from((i + 1) as u64);
    }
    acc
}

type MemoKey = (u32, i64, Vec<Monomial>);

/// Ideals with more generators than this are recounted instead of stored;
/// they are the top-level powers, which rarely repeat a degree.
const MEMO_MAX_GENERATORS: usize = 256;

/// Memoizing monomial counter, safe to share between threads.
#[derive(Debug, Default)]
pub struct LengthCounter {
    memo: DashMap<MemoKey, BigUint>,
}

impl LengthCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Number of degree-`t` monomials in the ideal generated by `gens` (all in
    /// `nvars` variables). `0` for `t < 0`.
    pub fn count_degree(&self, gens: &[Monomial], nvars: usize, t: i64) -> BigUint {
        let gens = canonical_order(minimal_generators(gens.to_vec()));
        self.cumulative_count(&gens, nvars, 0, t)
    }

    pub fn count_ideal_degree(&self, ideal: &ComponentIdeal, nvars: usize, t: i64) -> BigUint {
        self.cumulative_count(&ideal.generators, nvars, 0, t)
    }

    /// `F_r(I, s)`: `F_0` counts degree-`s` monomials of `I`, `F_{r+1}(s) = Σ_{u <= s} F_r(u)`.
    /// `gens` must be minimal and canonically ordered.
    fn cumulative_count(&self, gens: &[Monomial], nvars: usize, r: u32, s: i64) -> BigUint {
        if s < 0 || gens.is_empty() {
            return BigUint::zero();
        }
        if gens[0].is_one() {
            let top = nvars as i64 + r as i64 - 1;
            return binomial(s + top, top);
        }
        if nvars == 1 {
            // (x^p): F_r(s) = C(s - p + r, r)
            let p = gens[0].exponents()[0] as i64;
            return binomial(s - p + r as i64, r as i64);
        }
        let memoize = gens.len() <= MEMO_MAX_GENERATORS;
        let key = (r, s, if memoize { gens.to_vec() } else { Vec::new() });
        if memoize {
            if let Some(v) = self.memo.get(&key) {
                return v.clone();
            }
        }
        let last = nvars - 1;
        let kmax = gens.iter().map(|g| g.exponents()[last]).max().unwrap_or(0);
        let mut by_last: Vec<&Monomial> = gens.iter().collect();
        by_last.sort_by_key(|g| g.exponents()[last]);

        let mut total = BigUint::zero();
        let mut idx = 0;
        let mut slice: Vec<Monomial> = Vec::new();
        for a in 0..=kmax {
            let mut grew = false;
            while idx < by_last.len() && by_last[idx].exponents()[last] <= a {
                slice.push(Monomial::new(by_last[idx].exponents()[..last].to_vec()));
                idx += 1;
                grew = true;
            }
            if grew {
                slice = canonical_order(minimal_generators(std::mem::take(&mut slice)));
            }
            let remaining = s - a as i64;
            if remaining < 0 {
                break;
            }
            if a < kmax {
                total += self.cumulative_count(&slice, last, r, remaining);
            } else {
                total += self.cumulative_count(&slice, last, r + 1, remaining);
            }
        }
        if memoize {
            self.memo.insert(key, total.clone());
        }
        total
    }

    /// `ℓ_k(M_m)`.
    pub fn length_component(&self, module: &TermModule, m: i64) -> BigUint {
        let d = module.dimension();
        module
            .components()
            .iter()
            .map(|c| self.cumulative_count(&c.generators, d, 0, m - module.basis_degree(&c.basis)))
            .sum()
    }

    /// `Σ_{j <= m} ℓ_k(M_j)`, the length of the degree-`m` piece of `M ⊗ A[y]`.
    pub fn cumulative_length(&self, module: &TermModule, m: i64) -> BigUint {
        let d = module.dimension();
        module
            .components()
            .iter()
            .map(|c| self.cumulative_count(&c.generators, d, 1, m - module.basis_degree(&c.basis)))
            .sum()
    }

    /// Degree census of `sat / M` for `sat ⊇ M` of finite colength.
    ///
    /// A monomial of `J \ I` has every exponent below the largest exponent of
    /// `I` in that variable (otherwise some `x_i^k u` would stay outside `I`),
    /// which bounds the degrees to scan.
    pub fn quotient_lengths(&self, module: &TermModule, sat: &TermModule) -> LengthTable {
        let d = module.dimension();
        let mut table = LengthTable::default();
        for c in sat.components() {
            let inner: &[Monomial] = module.component(&c.basis).map(|i| &i.generators[..]).unwrap_or(&[]);
            if inner == &c.generators[..] {
                continue;
            }
            let bound: i64 = (0..d)
                .map(|i| inner.iter().map(|g| g.exponents()[i] as i64).max().unwrap_or(0) - 1)
                .sum();
            let shift = module.basis_degree(&c.basis);
            for t in 0..=bound {
                let outer = self.cumulative_count(&c.generators, d, 0, t);
                let inn = self.cumulative_count(inner, d, 0, t);
                table.add(t + shift, outer - inn);
            }
        }
        table
    }

    /// `ℓ_k(M̃ / M)` together with its degree census.
    pub fn quotient_total_length(&self, module: &TermModule) -> (BigUint, LengthTable) {
        let sat = module.saturate();
        let table = self.quotient_lengths(module, &sat);
        (table.total(), table)
    }
}

/// Degree census of the breadth-first quotient enumeration.
pub fn quotient_census(module: &TermModule, sat: &TermModule) -> crate::error::Result<LengthTable> {
    let mut table = LengthTable::default();
    for t in module.quotient_monomials(sat)? {
        table.add(module.term_degree(&t), BigUint::one());
    }
    Ok(table)
}
