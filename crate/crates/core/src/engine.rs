//! Shared computation context: power cache, length counter and strategy.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::hilbert::LengthCounter;
use crate::module::{PowerCache, TermModule};

#[derive(Default)]
pub struct Engine {
    cache: PowerCache,
    counter: LengthCounter,
    strategy: Strategy,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine").field("cache", &self.cache).field("strategy", &self.strategy).finish()
    }
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: PowerCache) -> Self {
        Engine { cache, ..Self::default() }
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn get_strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn cache(&self) -> &PowerCache {
        &self.cache
    }

    pub fn counter(&self) -> &LengthCounter {
        &self.counter
    }

    pub fn power(&self, m: &TermModule, n: u32) -> Result<Arc<TermModule>> {
        self.cache.power_with(m, n, self.strategy)
    }

    pub fn saturated_power(&self, m: &TermModule, n: u32) -> Result<Arc<TermModule>> {
        self.power(m, n)?;
        self.cache.saturated_power(m, n)
    }

    /// Build `M^1..M^n` (and their saturations) up front so later parallel
    /// loops only read the cache.
    pub fn warm(&self, m: &TermModule, n: u32, saturated: bool) -> Result<()> {
        self.power(m, n)?;
        if saturated {
            let ns: Vec<u32> = (0..=n).collect();
            for r in self.strategy.map(&ns, |&k| self.cache.saturated_power(m, k).map(|_| ())) {
                r?;
            }
        }
        Ok(())
    }

    /// `ℓ((M^n)_m)`.
    pub fn length(&self, m: &TermModule, n: u32, degree: i64) -> Result<BigUint> {
        Ok(self.counter.length_component(&*self.power(m, n)?, degree))
    }

    /// `ℓ((M̃^n)_m)`.
    pub fn saturated_length(&self, m: &TermModule, n: u32, degree: i64) -> Result<BigUint> {
        Ok(self.counter.length_component(&*self.saturated_power(m, n)?, degree))
    }

    /// `Σ_{j <= m} ℓ((M^n)_j)`.
    pub fn cumulative_length(&self, m: &TermModule, n: u32, degree: i64) -> Result<BigUint> {
        Ok(self.counter.cumulative_length(&*self.power(m, n)?, degree))
    }

    /// `ℓ(M̃^n / M^n)`.
    pub fn quotient_total(&self, m: &TermModule, n: u32) -> Result<BigUint> {
        let p = self.power(m, n)?;
        let s = self.saturated_power(m, n)?;
        Ok(self.counter.quotient_lengths(&p, &s).total())
    }
}

/// Preconditions shared by the density and multiplicity computations:
/// level 1, nonzero, `ℕ`-graded and `rank M = rank F`.
pub fn require_full_rank(m: &TermModule) -> Result<()> {
    if m.level() != 1 {
        return Err(Error::LevelMismatch { expected: 1, found: m.level() });
    }
    if m.is_zero() {
        return Err(Error::Precondition("the zero module has no density".into()));
    }
    if m.rank() != m.ambient().rank() {
        return Err(Error::RankMismatch { module: m.rank(), free: m.ambient().rank() });
    }
    if !m.is_nonnegatively_graded() {
        return Err(Error::Precondition("generators must have nonnegative degree".into()));
    }
    Ok(())
}

pub(crate) fn to_int(v: BigUint) -> BigInt {
    BigInt::from(v)
}
