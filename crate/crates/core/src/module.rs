//! Term-generated submodules of symmetric powers of a graded free module.
//!
//! A [`TermModule`] at level `n` lives in `Sym^n F`, which is free over `A`
//! on the basis monomials `e^a` with `|a| = n`. Because every generator is a
//! term `x^α e^a`, the module splits as `⊕_a I_a e^a` with each `I_a` a
//! monomial ideal, and every operation below is carried out per component.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::monomial::{canonical_order, ideal_contains, minimal_generators, render, Monomial};
use crate::ring::GradedFreeModule;

/// `x^α e^a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub monomial: Monomial,
    pub basis: Monomial,
}

impl Term {
    pub fn new(monomial: impl Into<Monomial>, basis: impl Into<Monomial>) -> Self {
        Term { monomial: monomial.into(), basis: basis.into() }
    }

    pub fn level(&self) -> u32 {
        self.basis.degree() as u32
    }

    /// `|α| + Σ a_i f_i`.
    pub fn degree(&self, shifts: &[i64]) -> i64 {
        self.monomial.degree() as i64 + self.basis.weighted_degree(shifts)
    }
}

/// The coefficient ideal `I_a` of one symmetric basis monomial `e^a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentIdeal {
    pub basis: Monomial,
    /// Minimal generators in lexicographic order.
    pub generators: Vec<Monomial>,
}

impl ComponentIdeal {
    pub fn new(basis: Monomial, generators: Vec<Monomial>) -> Self {
        ComponentIdeal { basis, generators: canonical_order(minimal_generators(generators)) }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        ideal_contains(&self.generators, m)
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_one()
    }
}

/// Plain data view of a module, used for persistence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub level: u32,
    pub components: Vec<ComponentIdeal>,
}

/// Content hash identifying a module together with its ambient free module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleKey(pub String);

impl fmt::Display for ModuleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TermModule {
    ambient: Arc<GradedFreeModule>,
    level: u32,
    /// Sorted by basis exponent; no empty components.
    components: Vec<ComponentIdeal>,
}

impl fmt::Debug for TermModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TermModule(level {}, {})", self.level, self.render())
    }
}

impl TermModule {
    /// Build the module generated by `gens`, dropping redundant generators.
    pub fn minimalize(ambient: Arc<GradedFreeModule>, level: u32, gens: Vec<Term>) -> Result<Self> {
        let d = ambient.dimension();
        let e = ambient.rank();
        let mut grouped: BTreeMap<Monomial, Vec<Monomial>> = BTreeMap::new();
        for t in gens {
            if t.monomial.nvars() != d {
                return Err(Error::AmbientMismatch(format!(
                    "term has {} ring exponents, ring has {d} variables",
                    t.monomial.nvars()
                )));
            }
            if t.basis.nvars() != e {
                return Err(Error::AmbientMismatch(format!(
                    "term has {} basis exponents, free module has rank {e}",
                    t.basis.nvars()
                )));
            }
            if t.level() != level {
                return Err(Error::LevelMismatch { expected: level, found: t.level() });
            }
            grouped.entry(t.basis).or_default().push(t.monomial);
        }
        let components = grouped
            .into_iter()
            .map(|(basis, g)| ComponentIdeal::new(basis, g))
            .collect();
        Ok(TermModule { ambient, level, components })
    }

    fn from_components(ambient: Arc<GradedFreeModule>, level: u32, mut components: Vec<ComponentIdeal>) -> Self {
        components.retain(|c| !c.generators.is_empty());
        components.sort_by(|a, b| a.basis.cmp(&b.basis));
        TermModule { ambient, level, components }
    }

    pub fn zero(ambient: Arc<GradedFreeModule>, level: u32) -> Self {
        TermModule { ambient, level, components: Vec::new() }
    }

    /// Level 0 module generated by `1`; the identity for [`TermModule::product`].
    pub fn unit(ambient: Arc<GradedFreeModule>) -> Self {
        let d = ambient.dimension();
        let e = ambient.rank();
        let comp = ComponentIdeal::new(Monomial::one(e), vec![Monomial::one(d)]);
        TermModule { ambient, level: 0, components: vec![comp] }
    }

    /// `F` itself as a level 1 module.
    pub fn free(ambient: Arc<GradedFreeModule>) -> Self {
        let d = ambient.dimension();
        let e = ambient.rank();
        let components = (0..e)
            .map(|i| ComponentIdeal::new(Monomial::unit(e, i), vec![Monomial::one(d)]))
            .collect();
        TermModule::from_components(ambient, 1, components)
    }

    pub fn from_record(ambient: Arc<GradedFreeModule>, record: ModuleRecord) -> Result<Self> {
        let gens = record
            .components
            .into_iter()
            .flat_map(|c| {
                let basis = c.basis;
                c.generators.into_iter().map(move |m| Term { monomial: m, basis: basis.clone() })
            })
            .collect();
        TermModule::minimalize(ambient, record.level, gens)
    }

    pub fn to_record(&self) -> ModuleRecord {
        ModuleRecord { level: self.level, components: self.components.clone() }
    }

    pub fn ambient(&self) -> &Arc<GradedFreeModule> {
        &self.ambient
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dimension(&self) -> usize {
        self.ambient.dimension()
    }

    pub fn components(&self) -> &[ComponentIdeal] {
        &self.components
    }

    pub fn component(&self, basis: &Monomial) -> Option<&ComponentIdeal> {
        self.components
            .binary_search_by(|c| c.basis.cmp(basis))
            .ok()
            .map(|i| &self.components[i])
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = Term> + '_ {
        self.components.iter().flat_map(|c| {
            c.generators.iter().map(move |m| Term { monomial: m.clone(), basis: c.basis.clone() })
        })
    }

    pub fn num_generators(&self) -> usize {
        self.components.iter().map(|c| c.generators.len()).sum()
    }

    /// Number of symmetric basis monomials carrying a nonzero coefficient ideal.
    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn basis_degree(&self, basis: &Monomial) -> i64 {
        basis.weighted_degree(self.ambient.shifts())
    }

    pub fn term_degree(&self, t: &Term) -> i64 {
        t.degree(self.ambient.shifts())
    }

    /// Sorted distinct degrees of the minimal generators.
    pub fn generator_degrees(&self) -> Vec<i64> {
        let mut degs: Vec<i64> = self.generators().map(|t| self.term_degree(&t)).collect();
        degs.sort_unstable();
        degs.dedup();
        degs
    }

    /// Least generator degree `d_1`.
    pub fn min_generator_degree(&self) -> Option<i64> {
        self.generator_degrees().first().copied()
    }

    /// Largest generator degree `d_M`.
    pub fn max_generator_degree(&self) -> Option<i64> {
        self.generator_degrees().last().copied()
    }

    /// All generator degrees are nonnegative.
    pub fn is_nonnegatively_graded(&self) -> bool {
        self.generators().all(|t| self.term_degree(&t) >= 0)
    }

    fn check_compatible(&self, other: &TermModule) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch("modules live in different free modules".into()));
        }
        Ok(())
    }

    fn check_same_level(&self, other: &TermModule) -> Result<()> {
        self.check_compatible(other)?;
        if self.level != other.level {
            return Err(Error::LevelMismatch { expected: self.level, found: other.level });
        }
        Ok(())
    }

    /// Image of `P ⊗ Q` in `Sym^{p+q} F`.
    pub fn product(&self, other: &TermModule) -> Result<TermModule> {
        self.product_with(other, Strategy::default())
    }

    pub fn product_with(&self, other: &TermModule, strategy: Strategy) -> Result<TermModule> {
        self.check_compatible(other)?;
        let mut raw: HashMap<Monomial, Vec<Monomial>> = HashMap::new();
        for p in &self.components {
            for q in &other.components {
                let entry = raw.entry(p.basis.mul(&q.basis)).or_default();
                for a in &p.generators {
                    for b in &q.generators {
                        entry.push(a.mul(b));
                    }
                }
            }
        }
        let raw: Vec<(Monomial, Vec<Monomial>)> = raw.into_iter().collect();
        let components = strategy.map_owned(raw, |(basis, gens)| ComponentIdeal::new(basis, gens));
        Ok(TermModule::from_components(self.ambient.clone(), self.level + other.level, components))
    }

    /// `M^n` by repeated multiplication, without caching.
    pub fn power(&self, n: u32) -> Result<TermModule> {
        if self.level != 1 {
            return Err(Error::LevelMismatch { expected: 1, found: self.level });
        }
        let mut acc = TermModule::unit(self.ambient.clone());
        for _ in 0..n {
            acc = self.product(&acc)?;
        }
        Ok(acc)
    }

    pub fn contains(&self, t: &Term) -> Result<bool> {
        if t.level() != self.level {
            return Err(Error::LevelMismatch { expected: self.level, found: t.level() });
        }
        Ok(self.component(&t.basis).is_some_and(|c| c.contains(&t.monomial)))
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_submodule_of(&self, other: &TermModule) -> Result<bool> {
        self.check_same_level(other)?;
        for t in self.generators() {
            if !other.contains(&t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(M : x_i^∞)`: zero out the `i`-th exponent of every generator.
    pub fn colon_variable_saturation(&self, i: usize) -> Result<TermModule> {
        if i >= self.dimension() {
            return Err(Error::Input(format!("variable index {i} out of range")));
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let gens = c.generators.iter().map(|m| m.with_exponent(i, 0)).collect();
                ComponentIdeal::new(c.basis.clone(), gens)
            })
            .collect();
        Ok(TermModule::from_components(self.ambient.clone(), self.level, components))
    }

    /// Componentwise intersection through pairwise lcm's.
    pub fn intersect(&self, other: &TermModule) -> Result<TermModule> {
        self.check_same_level(other)?;
        let components = self
            .components
            .iter()
            .filter_map(|c| {
                other.component(&c.basis).map(|o| {
                    let gens = c
                        .generators
                        .iter()
                        .flat_map(|a| o.generators.iter().map(move |b| a.lcm(b)))
                        .collect();
                    ComponentIdeal::new(c.basis.clone(), gens)
                })
            })
            .collect();
        Ok(TermModule::from_components(self.ambient.clone(), self.level, components))
    }

    /// `(M :_F m^∞) = ∩_i (M : x_i^∞)`.
    pub fn saturate(&self) -> TermModule {
        let mut acc = self.colon_variable_saturation(0).expect("index 0 is valid");
        for i in 1..self.dimension() {
            let next = self.colon_variable_saturation(i).expect("index in range");
            acc = acc.intersect(&next).expect("same ambient and level");
        }
        acc
    }

    /// The terms of `sat` that are not in `self`, found breadth-first from the
    /// generators of `sat`. `sat` must contain `self` with finite-length quotient.
    pub fn quotient_monomials(&self, sat: &TermModule) -> Result<Vec<Term>> {
        self.quotient_monomials_capped(sat, 50_000_000)
    }

    pub fn quotient_monomials_capped(&self, sat: &TermModule, cap: usize) -> Result<Vec<Term>> {
        self.check_same_level(sat)?;
        let d = self.dimension();
        let mut seen: HashSet<Term> = HashSet::new();
        let mut queue: VecDeque<Term> = VecDeque::new();
        for t in sat.generators() {
            if !self.contains(&t)? && seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
        let mut out = Vec::new();
        while let Some(t) = queue.pop_front() {
            out.push(t.clone());
            if out.len() > cap {
                return Err(Error::Invariant(format!(
                    "saturation quotient exceeded {cap} terms; it should be finite"
                )));
            }
            for i in 0..d {
                let next = Term { monomial: t.monomial.times_var(i), basis: t.basis.clone() };
                if !self.contains(&next)? && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        out.sort_by(|a, b| {
            self.term_degree(a).cmp(&self.term_degree(b)).then_with(|| a.cmp(b))
        });
        Ok(out)
    }

    /// Stable content hash over the ambient data and the canonical generators.
    pub fn key(&self) -> ModuleKey {
        let mut h = Sha256::new();
        h.update(format!("d={};shifts={:?};level={};", self.dimension(), self.ambient.shifts(), self.level));
        for c in &self.components {
            h.update(format!("{:?}:{:?};", c.basis.exponents(), c.generators));
        }
        ModuleKey(hex::encode(h.finalize()))
    }

    pub fn render(&self) -> String {
        let names = self.ambient.ring().variables();
        let e = self.ambient.rank();
        let basis_names: Vec<String> = (1..=e).map(|i| format!("e{i}")).collect();
        let gens: Vec<String> = self
            .generators()
            .map(|t| {
                if e == 1 {
                    render(&t.monomial, names)
                } else {
                    format!("{}·{}", render(&t.monomial, names), render(&t.basis, &basis_names))
                }
            })
            .collect();
        format!("({})", gens.join(", "))
    }
}

/// Which family of modules a cached entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerKind {
    Power,
    SaturatedPower,
}

/// Optional persistent backing for a [`PowerCache`].
pub trait PowerStore: Send + Sync {
    fn load(&self, base: &ModuleKey, n: u32, kind: PowerKind) -> Option<ModuleRecord>;
    fn save(&self, base: &ModuleKey, n: u32, kind: PowerKind, module: &TermModule);
}

type Slot = Arc<OnceLock<Arc<TermModule>>>;

/// Content-addressed cache of `M^n` and their saturations.
///
/// Each entry is computed at most once; concurrent requests for the same
/// `(M, n)` block on the same slot.
#[derive(Default)]
pub struct PowerCache {
    slots: DashMap<(ModuleKey, u32, PowerKind), Slot>,
    store: Option<Arc<dyn PowerStore>>,
}

impl fmt::Debug for PowerCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerCache").field("entries", &self.slots.len()).finish()
    }
}

impl PowerCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_store(store: Arc<dyn PowerStore>) -> Self {
        PowerCache { slots: DashMap::new(), store: Some(store) }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    fn slot(&self, key: &ModuleKey, n: u32, kind: PowerKind) -> Slot {
        self.slots.entry((key.clone(), n, kind)).or_default().clone()
    }

    fn load_or(&self, key: &ModuleKey, n: u32, kind: PowerKind, m: &TermModule, compute: impl FnOnce() -> TermModule) -> TermModule {
        if let Some(store) = &self.store {
            if let Some(rec) = store.load(key, n, kind) {
                if let Ok(loaded) = TermModule::from_record(m.ambient.clone(), rec) {
                    return loaded;
                }
            }
            let fresh = compute();
            store.save(key, n, kind, &fresh);
            fresh
        } else {
            compute()
        }
    }

    /// `M^n` for a level 1 module.
    pub fn power(&self, m: &TermModule, n: u32) -> Result<Arc<TermModule>> {
        self.power_with(m, n, Strategy::default())
    }

    pub fn power_with(&self, m: &TermModule, n: u32, strategy: Strategy) -> Result<Arc<TermModule>> {
        if m.level != 1 {
            return Err(Error::LevelMismatch { expected: 1, found: m.level });
        }
        let key = m.key();
        // find the highest cached power at or below n, then extend upward
        let mut start = 0;
        for k in (0..=n).rev() {
            if let Some(s) = self.slots.get(&(key.clone(), k, PowerKind::Power)) {
                if s.get().is_some() {
                    start = k;
                    break;
                }
            }
        }
        let mut prev: Option<Arc<TermModule>> = None;
        for k in start..=n {
            let slot = self.slot(&key, k, PowerKind::Power);
            let prev_ref = prev.clone();
            let value = slot
                .get_or_init(|| {
                    Arc::new(self.load_or(&key, k, PowerKind::Power, m, || match (k, prev_ref) {
                        (0, _) => TermModule::unit(m.ambient.clone()),
                        (_, Some(p)) => m.product_with(&p, strategy).expect("same ambient"),
                        (_, None) => {
                            let p = self.power_with(m, k - 1, strategy).expect("level 1");
                            m.product_with(&p, strategy).expect("same ambient")
                        }
                    }))
                })
                .clone();
            prev = Some(value);
        }
        Ok(prev.expect("loop runs at least once"))
    }

    /// Saturation of `M^n`.
    pub fn saturated_power(&self, m: &TermModule, n: u32) -> Result<Arc<TermModule>> {
        let pw = self.power(m, n)?;
        let key = m.key();
        let slot = self.slot(&key, n, PowerKind::SaturatedPower);
        Ok(slot
            .get_or_init(|| Arc::new(self.load_or(&key, n, PowerKind::SaturatedPower, m, || pw.saturate())))
            .clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn amb(d: usize, shifts: Vec<i64>) -> Arc<GradedFreeModule> {
        Arc::new(GradedFreeModule::new(RingSpec::standard(d).unwrap(), shifts).unwrap())
    }

    fn ideal(a: &Arc<GradedFreeModule>, gens: &[&[u32]]) -> TermModule {
        let e = a.rank();
        let mut basis = vec![0; e];
        basis[0] = 1;
        let terms = gens.iter().map(|g| Term::new(g.to_vec(), basis.clone())).collect();
        TermModule::minimalize(a.clone(), 1, terms).unwrap()
    }

    fn gens_of(m: &TermModule) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = m.generators().map(|t| t.monomial.exponents().to_vec()).collect();
        v.sort();
        v
    }

    #[test]
    fn minimalize_examples() {
        let a = amb(2, vec![0]);
        assert_eq!(gens_of(&ideal(&a, &[&[2, 0], &[3, 0]])), vec![vec![2, 0]]);
        assert_eq!(gens_of(&ideal(&a, &[&[2, 0], &[1, 1]])), vec![vec![1, 1], vec![2, 0]]);
        // level 2 terms on e^2
        let t = |m: [u32; 2]| Term::new(m.to_vec(), vec![2]);
        let m = TermModule::minimalize(a.clone(), 2, vec![t([4, 0]), t([3, 1]), t([2, 2]), t([3, 1])]).unwrap();
        assert_eq!(gens_of(&m), vec![vec![2, 2], vec![3, 1], vec![4, 0]]);
    }

    #[test]
    fn minimalize_rejects_mixed_levels() {
        let a = amb(2, vec![0]);
        let err = TermModule::minimalize(a.clone(), 1, vec![Term::new(vec![1, 0], vec![2])]).unwrap_err();
        assert!(matches!(err, Error::LevelMismatch { .. }));
        let err = TermModule::minimalize(a, 1, vec![Term::new(vec![1, 0, 0], vec![1])]).unwrap_err();
        assert!(matches!(err, Error::AmbientMismatch(_)));
    }

    #[test]
    fn product_examples() {
        let a = amb(2, vec![0]);
        let i = ideal(&a, &[&[2, 0], &[1, 1]]);
        assert_eq!(gens_of(&i.product(&i).unwrap()), vec![vec![2, 2], vec![3, 1], vec![4, 0]]);
        assert_eq!(i.product(&TermModule::unit(a.clone())).unwrap(), i);

        let f2 = amb(2, vec![0, 0]);
        let m = TermModule::minimalize(
            f2.clone(),
            1,
            vec![Term::new(vec![1, 0], vec![1, 0]), Term::new(vec![0, 1], vec![0, 1])],
        )
        .unwrap();
        let sq = m.product(&m).unwrap();
        let mut terms: Vec<Term> = sq.generators().collect();
        terms.sort();
        let mut expected = vec![
            Term::new(vec![2, 0], vec![2, 0]),
            Term::new(vec![1, 1], vec![1, 1]),
            Term::new(vec![0, 2], vec![0, 2]),
        ];
        expected.sort();
        assert_eq!(terms, expected);
    }

    #[test]
    fn product_rejects_other_ambient() {
        let a = amb(2, vec![0]);
        let b = amb(2, vec![1]);
        assert!(ideal(&a, &[&[1, 0]]).product(&ideal(&b, &[&[1, 0]])).is_err());
    }

    #[test]
    fn power_examples() {
        let a = amb(2, vec![0]);
        let m = ideal(&a, &[&[1, 0], &[0, 1]]);
        assert_eq!(gens_of(&m.power(3).unwrap()), vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        assert_eq!(m.power(0).unwrap(), TermModule::unit(a.clone()));
        assert_eq!(m.power(1).unwrap(), m);
        let i = ideal(&a, &[&[2, 0], &[1, 1]]);
        assert_eq!(gens_of(&i.power(2).unwrap()), vec![vec![2, 2], vec![3, 1], vec![4, 0]]);
    }

    #[test]
    fn membership_examples() {
        let a = amb(2, vec![0]);
        let i2 = ideal(&a, &[&[2, 0], &[1, 1]]).power(2).unwrap();
        let t = |m: [u32; 2]| Term::new(m.to_vec(), vec![2]);
        assert!(i2.contains(&t([3, 1])).unwrap());
        assert!(!i2.contains(&t([1, 3])).unwrap());
        assert!(i2.contains(&t([2, 3])).unwrap());
        assert!(i2.contains(&Term::new(vec![3, 1], vec![1])).is_err());
    }

    #[test]
    fn colon_examples() {
        let a = amb(2, vec![0]);
        let i = ideal(&a, &[&[2, 0], &[1, 1]]);
        assert_eq!(gens_of(&i.colon_variable_saturation(1).unwrap()), vec![vec![1, 0]]);
        let x = ideal(&a, &[&[1, 0]]);
        assert_eq!(x.colon_variable_saturation(1).unwrap(), x);

        let f2 = amb(2, vec![0, 0]);
        let m = TermModule::minimalize(
            f2,
            1,
            vec![Term::new(vec![2, 0], vec![1, 0]), Term::new(vec![0, 3], vec![0, 1])],
        )
        .unwrap();
        let c = m.colon_variable_saturation(0).unwrap();
        let mut terms: Vec<Term> = c.generators().collect();
        terms.sort();
        assert_eq!(terms, vec![Term::new(vec![0, 0], vec![1, 0]), Term::new(vec![0, 3], vec![0, 1])]);
        assert!(m.colon_variable_saturation(2).is_err());
    }

    #[test]
    fn intersect_examples() {
        let a = amb(2, vec![0]);
        let x = ideal(&a, &[&[1, 0]]);
        let y = ideal(&a, &[&[0, 1]]);
        assert_eq!(gens_of(&x.intersect(&y).unwrap()), vec![vec![1, 1]]);
        let p = ideal(&a, &[&[2, 0], &[0, 1]]);
        assert_eq!(gens_of(&p.intersect(&x).unwrap()), vec![vec![1, 1], vec![2, 0]]);
        assert_eq!(p.intersect(&p).unwrap(), p);
    }

    #[test]
    fn saturate_examples() {
        let a = amb(2, vec![0]);
        let i = ideal(&a, &[&[2, 0], &[1, 1]]);
        assert_eq!(gens_of(&i.saturate()), vec![vec![1, 0]]);
        let m = ideal(&a, &[&[1, 0], &[0, 1]]);
        for n in 1..5 {
            let s = m.power(n).unwrap().saturate();
            assert_eq!(gens_of(&s), vec![vec![0, 0]]);
        }
        let x = ideal(&a, &[&[1, 0]]);
        assert_eq!(x.saturate(), x);
    }

    #[test]
    fn quotient_examples() {
        let a = amb(2, vec![0]);
        let i = ideal(&a, &[&[2, 0], &[1, 1]]);
        let q = i.quotient_monomials(&i.saturate()).unwrap();
        assert_eq!(q, vec![Term::new(vec![1, 0], vec![1])]);
        assert!(i.quotient_monomials(&i).unwrap().is_empty());
        let m2 = ideal(&a, &[&[1, 0], &[0, 1]]).power(2).unwrap();
        let q = m2.quotient_monomials(&m2.saturate()).unwrap();
        let mut mons: Vec<Vec<u32>> = q.iter().map(|t| t.monomial.exponents().to_vec()).collect();
        mons.sort();
        assert_eq!(mons, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn quotient_cap_reports_invariant() {
        let a = amb(2, vec![0]);
        let m = ideal(&a, &[&[1, 0], &[0, 1]]).power(6).unwrap();
        let err = m.quotient_monomials_capped(&m.saturate(), 5).unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
    }

    #[test]
    fn rank_examples() {
        let a = amb(2, vec![0]);
        assert_eq!(ideal(&a, &[&[2, 0], &[1, 1]]).rank(), 1);
        let f2 = amb(2, vec![0, 0]);
        let m = TermModule::minimalize(
            f2,
            1,
            vec![Term::new(vec![1, 0], vec![1, 0]), Term::new(vec![0, 1], vec![0, 1])],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        // binomial(n + e - 1, e - 1) components at level n
        assert_eq!(m.power(4).unwrap().rank(), 5);
        assert_eq!(TermModule::zero(a, 3).rank(), 0);
    }

    #[test]
    fn shifted_saturation_dips_below_zero() {
        let a = amb(2, vec![-2]);
        let i = ideal(&a, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.generator_degrees(), vec![0]);
        let s = i.saturate();
        let t = s.generators().next().unwrap();
        assert_eq!(s.term_degree(&t), -1);
    }

    #[test]
    fn cache_matches_direct_power() {
        let a = amb(2, vec![0]);
        let m = ideal(&a, &[&[2, 0], &[1, 1], &[0, 3]]);
        let cache = PowerCache::new();
        for n in [3u32, 1, 5, 0, 5] {
            assert_eq!(*cache.power(&m, n).unwrap(), m.power(n).unwrap());
        }
        assert_eq!(*cache.saturated_power(&m, 4).unwrap(), m.power(4).unwrap().saturate());
    }
}
