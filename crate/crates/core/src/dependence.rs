//! Integral dependence of module pairs `N ⊆ M`: a direct reduction
//! certificate plus numerical criteria compared only when exactly settled.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::engine::{to_int, Engine};
use crate::error::{Error, Result};
use crate::module::{Term, TermModule};
use crate::monomial::Monomial;
use crate::multiplicity::{
    diagonal_multiplicity, epsilon_multiplicity, mixed_multiplicities, DiagonalVersion, EpsilonReport, FitOptions,
};
use crate::rational::format_rational;

pub const DEFAULT_N_MAX: u32 = 12;

/// A validated pair `N ⊆ M` of full-rank level 1 modules.
#[derive(Debug, Clone)]
pub struct CheckedPair {
    pub sub: TermModule,
    pub sup: TermModule,
    /// `max(d_M, d_N)`.
    pub d_nm: i64,
}

pub fn validate_pair(sub: &TermModule, sup: &TermModule) -> Result<CheckedPair> {
    if sub.ambient() != sup.ambient() {
        return Err(Error::AmbientMismatch("the two modules live in different free modules".into()));
    }
    for m in [sub, sup] {
        if m.level() != 1 {
            return Err(Error::LevelMismatch { expected: 1, found: m.level() });
        }
        if m.is_zero() {
            return Err(Error::Precondition("modules must be nonzero".into()));
        }
    }
    if !sub.is_submodule_of(sup)? {
        let witness = sub.generators().find(|t| !sup.contains(t).unwrap_or(false)).expect("some generator is outside");
        return Err(Error::NotSubmodule(render_term(sub, &witness)));
    }
    if sub.rank() != sup.rank() {
        return Err(Error::PairRankMismatch { sub: sub.rank(), sup: sup.rank() });
    }
    if sup.rank() != sup.ambient().rank() {
        return Err(Error::RankMismatch { module: sup.rank(), free: sup.ambient().rank() });
    }
    let d_nm = sub.max_generator_degree().max(sup.max_generator_degree()).expect("nonzero");
    Ok(CheckedPair { sub: sub.clone(), sup: sup.clone(), d_nm })
}

fn render_term(m: &TermModule, t: &Term) -> String {
    let single = TermModule::minimalize(m.ambient().clone(), t.level(), vec![t.clone()]).expect("consistent term");
    single.render()
}

/// Least `n0 <= n_max` with `M^{n0+1} = N M^{n0}`.
pub fn direct_reduction_search(engine: &Engine, pair: &CheckedPair, n_max: u32) -> Result<Option<u32>> {
    for n0 in 0..=n_max {
        if is_reduction_at(engine, pair, n0)? {
            return Ok(Some(n0));
        }
    }
    Ok(None)
}

fn is_reduction_at(engine: &Engine, pair: &CheckedPair, n0: u32) -> Result<bool> {
    let next = engine.power(&pair.sup, n0 + 1)?;
    let base = engine.power(&pair.sup, n0)?;
    let prod = pair.sub.product_with(&base, engine.get_strategy())?;
    Ok(*next == prod)
}

/// Once `M^{n0+1} = N M^{n0}` holds it holds for every larger `n`; this
/// re-verifies that on `n0..=n_max`.
pub fn certificate_is_stable(engine: &Engine, pair: &CheckedPair, n0: u32, n_max: u32) -> Result<bool> {
    for n in n0..=n_max {
        if !is_reduction_at(engine, pair, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Reduction,
    NotReduction,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Reduction => "reduction",
            Verdict::NotReduction => "not-reduction",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionStatus {
    Match,
    Differ,
    /// At least one side did not settle within the ladder.
    Unusable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionRecord {
    pub name: &'static str,
    pub sub: Option<Vec<BigRational>>,
    pub sup: Option<Vec<BigRational>>,
    pub status: CriterionStatus,
    /// Informational criteria never decide the verdict.
    pub decisive: bool,
    pub note: Option<String>,
}

impl CriterionRecord {
    fn compare(
        name: &'static str,
        sub: Result<Option<Vec<BigRational>>>,
        sup: Result<Option<Vec<BigRational>>>,
        decisive: bool,
    ) -> Self {
        let mut notes = Vec::new();
        let sub = sub.unwrap_or_else(|e| {
            notes.push(format!("smaller module: {e}"));
            None
        });
        let sup = sup.unwrap_or_else(|e| {
            notes.push(format!("larger module: {e}"));
            None
        });
        let status = match (&sub, &sup) {
            (Some(a), Some(b)) if a == b => CriterionStatus::Match,
            (Some(_), Some(_)) => CriterionStatus::Differ,
            _ => CriterionStatus::Unusable,
        };
        let note = (!notes.is_empty()).then(|| notes.join("; "));
        CriterionRecord { name, sub, sup, status, decisive, note }
    }

    pub fn render_side(side: &Option<Vec<BigRational>>) -> String {
        match side {
            None => "-".to_string(),
            Some(v) => v.iter().map(format_rational).collect::<Vec<_>>().join(" "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceVerdict {
    pub verdict: Verdict,
    pub certificate: Option<u32>,
    pub c: i64,
    pub n_max: u32,
    pub d_nm: i64,
    pub criteria: Vec<CriterionRecord>,
    /// All decisive criteria that could be compared point the same way.
    pub consistent: bool,
    /// `(n, t_n(N), t_n(M))`.
    pub epsilon_totals: Vec<(u32, BigUint, BigUint)>,
    /// Heuristic: `t_n(M) - t_n(N)` stays positive and grows like
    /// `n^{d+e-1}` over the upper half of the ladder. Never decides anything.
    pub heuristic_epsilon_gap: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Diagonal degree; defaults to `d_{N,M} + 1`.
    pub c: Option<i64>,
    pub n_max: u32,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { c: None, n_max: DEFAULT_N_MAX }
    }
}

/// One side of a criterion: the invariants, or `None` when they did not settle.
type Side = Option<Vec<BigRational>>;

fn exact_epsilon(r: &Result<EpsilonReport>) -> Result<Option<Vec<BigRational>>> {
    match r {
        Ok(r) => Ok(r.exact.clone().map(|v| vec![v])),
        Err(e) => Err(e.clone()),
    }
}

fn diagonal(engine: &Engine, m: &TermModule, c: i64, version: DiagonalVersion, n_max: u32) -> Result<Option<Vec<BigRational>>> {
    let r = diagonal_multiplicity(engine, m, c, version, n_max)?;
    Ok(r.determined.map(|d| vec![BigRational::from_integer(d.multiplicity), BigRational::from_integer(d.dimension.into())]))
}

fn mixed(engine: &Engine, m: &TermModule, c: i64) -> Result<Option<Vec<BigRational>>> {
    match mixed_multiplicities(engine, m, c, true, FitOptions::default()) {
        Ok(r) => Ok(Some(r.values.into_iter().map(BigRational::from_integer).collect())),
        Err(Error::NotConverged(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The module generated by all terms of `M` of degree exactly `c`.
pub fn truncation(m: &TermModule, c: i64) -> Result<TermModule> {
    let d = m.dimension();
    let mut terms = Vec::new();
    for g in m.generators() {
        let deg = m.term_degree(&g);
        if deg > c {
            continue;
        }
        for u in monomials_of_degree(d, (c - deg) as u32) {
            terms.push(Term { monomial: g.monomial.mul(&u), basis: g.basis.clone() });
        }
    }
    TermModule::minimalize(m.ambient().clone(), m.level(), terms)
}

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: u32, nvars: usize, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            rec(prefix, left - a, nvars, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), degree, nvars, &mut out);
    out
}

/// Decide whether `N` is a reduction of `M`.
///
/// The verdict is `reduction` exactly when a certificate `M^{n0+1} = N M^{n0}`
/// is found, `not-reduction` when some decisive criterion settles to different
/// exact values, and `undetermined` otherwise.
pub fn check_dependence(engine: &Engine, pair: &CheckedPair, options: CheckOptions) -> Result<DependenceVerdict> {
    let c = options.c.unwrap_or(pair.d_nm + 1);
    if c <= pair.d_nm {
        return Err(Error::Precondition(format!("c = {c} must exceed d_(N,M) = {}", pair.d_nm)));
    }
    let n_max = options.n_max;
    let strategy = engine.get_strategy();
    let (n, m) = (&pair.sub, &pair.sup);

    let (certificate, (eps, (diag, (mix, trunc)))) = strategy.join(
        || direct_reduction_search(engine, pair, n_max),
        || {
            strategy.join(
                || strategy.join(|| epsilon_multiplicity(engine, n, n_max), || epsilon_multiplicity(engine, m, n_max)),
                || {
                    strategy.join(
                        || {
                            [DiagonalVersion::A, DiagonalVersion::S].map(|v| {
                                (diagonal(engine, n, c, v, n_max), diagonal(engine, m, c, v, n_max))
                            })
                        },
                        || {
                            strategy.join(
                                || (mixed(engine, n, c), mixed(engine, m, c)),
                                || -> Result<(Side, Side)> {
                                    let nt = truncation(n, c)?;
                                    let mt = truncation(m, c)?;
                                    let k = n_max.min(8);
                                    Ok((
                                        exact_epsilon(&epsilon_multiplicity(engine, &nt, k))?,
                                        exact_epsilon(&epsilon_multiplicity(engine, &mt, k))?,
                                    ))
                                },
                            )
                        },
                    )
                },
            )
        },
    );
    let certificate = certificate?;

    let mut criteria = Vec::new();
    criteria.push(CriterionRecord::compare("epsilon", exact_epsilon(&eps.0), exact_epsilon(&eps.1), true));
    let [a, s] = diag;
    criteria.push(CriterionRecord::compare("diagonal-a", a.0, a.1, true));
    criteria.push(CriterionRecord::compare("diagonal-s", s.0, s.1, true));
    criteria.push(CriterionRecord::compare("mixed-s", mix.0, mix.1, true));
    let (tn, tm) = match trunc {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    let mut stand_in = CriterionRecord::compare("epsilon-truncation", tn, tm, false);
    let label = format!("stand-in: epsilon of the degree-{c} truncations over A");
    stand_in.note = Some(match stand_in.note.take() {
        Some(n) => format!("{label}; {n}"),
        None => label,
    });
    criteria.push(stand_in);

    let decisive: Vec<CriterionStatus> =
        criteria.iter().filter(|r| r.decisive).map(|r| r.status).collect();
    let any_differ = decisive.contains(&CriterionStatus::Differ);
    let any_match = decisive.contains(&CriterionStatus::Match);
    if certificate.is_some() && any_differ {
        let names: Vec<&str> =
            criteria.iter().filter(|r| r.decisive && r.status == CriterionStatus::Differ).map(|r| r.name).collect();
        return Err(Error::Invariant(format!(
            "reduction certificate found but criteria differ: {}",
            names.join(", ")
        )));
    }
    let verdict = match (certificate, any_differ) {
        (Some(_), _) => Verdict::Reduction,
        (None, true) => Verdict::NotReduction,
        (None, false) => Verdict::Undetermined,
    };
    let consistent = !(any_differ && any_match);

    let (epsilon_totals, heuristic_epsilon_gap) = match (&eps.0, &eps.1) {
        (Ok(a), Ok(b)) => {
            let totals: Vec<(u32, BigUint, BigUint)> = a
                .totals
                .iter()
                .zip(&b.totals)
                .enumerate()
                .map(|(i, (x, y))| (i as u32 + 1, x.clone(), y.clone()))
                .collect();
            let degree = n.dimension() + n.rank() - 1;
            let ratio = |i: usize| {
                let (k, x, y) = &totals[i];
                BigRational::new(to_int(y.clone()) - to_int(x.clone()), num_traits::pow(BigInt::from(*k), degree))
            };
            let len = totals.len();
            let flag = len >= 2 && {
                let upper: Vec<BigRational> = (len / 2..len).map(ratio).collect();
                let last = upper.last().expect("nonempty").clone();
                upper.iter().all(|r| *r > BigRational::from_integer(0.into()))
                    && last * BigInt::from(2) >= upper[0]
            };
            (totals, flag)
        }
        _ => (Vec::new(), false),
    };

    Ok(DependenceVerdict {
        verdict,
        certificate,
        c,
        n_max,
        d_nm: pair.d_nm,
        criteria,
        consistent,
        epsilon_totals,
        heuristic_epsilon_gap,
    })
}
