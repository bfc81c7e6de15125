//! Adic, saturated, epsilon and cumulative density functions.
//!
//! `f_n(x) = (d+e-1)! ℓ((M^n)_{⌊xn⌋}) / n^{d+e-2}` and its saturated and
//! quotient analogues are sampled exactly on a grid of rational `x` for a
//! ladder of `n`. Limits are estimated along rays: for `x = p/q` the sequence
//! `k ↦ ℓ((M^{qk})_{pk})` is eventually quasi-polynomial, and once its top
//! finite difference settles the limit is read off exactly. Otherwise the
//! value at the largest `n` is reported, flagged as inexact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::engine::{require_full_rank, to_int, Engine};
use crate::error::{Error, Result};
use crate::finite_diff::quasi_leading_coefficient;
use crate::module::TermModule;
use crate::poly::UniPoly;
use crate::rational::{factorial, floor_times, format_rational, from_int, ratio, to_f64};

pub const DEFAULT_LADDER: [u32; 5] = [8, 16, 24, 32, 40];
/// Largest quasi-period tried when settling a ray.
pub const MAX_PERIOD: usize = 6;
/// Consecutive equal differences required before a ray counts as settled.
pub const STABLE_WINDOW: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Adic,
    Saturated,
    Epsilon,
    /// `(d+e)! Σ_{j <= ⌊xn⌋} ℓ((M^n)_j) / n^{d+e-1}`, the adic density of `M ⊗ A[y]`.
    Cumulative,
}

impl DensityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityKind::Adic => "adic",
            DensityKind::Saturated => "saturated",
            DensityKind::Epsilon => "epsilon",
            DensityKind::Cumulative => "cumulative",
        }
    }

    fn needs_saturation(self) -> bool {
        matches!(self, DensityKind::Saturated | DensityKind::Epsilon)
    }

    /// Polynomial degree of the underlying length function in `n`.
    fn growth_degree(self, d: usize, e: usize) -> usize {
        match self {
            DensityKind::Cumulative => d + e - 1,
            _ => d + e - 2,
        }
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "adic" => Ok(DensityKind::Adic),
            "saturated" => Ok(DensityKind::Saturated),
            "epsilon" => Ok(DensityKind::Epsilon),
            "cumulative" => Ok(DensityKind::Cumulative),
            other => Err(Error::Input(format!("unknown density kind {other:?}"))),
        }
    }
}

/// Strictly increasing list of positive Rees levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder(Vec<u32>);

impl Ladder {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("ladder is empty".into()));
        }
        if values[0] == 0 {
            return Err(Error::Input("ladder values must be positive".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("ladder must be strictly increasing".into()));
        }
        Ok(Ladder(values))
    }

    /// `step, 2 step, ..., n_max` (`n_max` is always included).
    pub fn evenly_spaced(n_max: u32, steps: u32) -> Result<Self> {
        let steps = steps.max(1);
        let mut v: Vec<u32> = (1..=steps).map(|i| (n_max * i / steps).max(1)).collect();
        v.dedup();
        Ladder::new(v)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn max(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder(DEFAULT_LADDER.to_vec())
    }
}

/// Arithmetic progression `start, start + step, ...` with `count` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XGrid {
    start: BigRational,
    step: BigRational,
    count: usize,
}

impl XGrid {
    pub fn new(start: BigRational, end: BigRational, step: BigRational) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::Input("grid step must be positive".into()));
        }
        if end < start {
            return Err(Error::Input("grid end lies below its start".into()));
        }
        let span = (&end - &start) / &step;
        let count = span.floor().numer().try_into().map_err(|_| Error::Input("grid too large".into()))?;
        let count: usize = count;
        Ok(XGrid { start, step, count: count + 1 })
    }

    /// `[-c0 - 1, d_M + 2]` with step `1/8`.
    pub fn default_for(m: &TermModule) -> Self {
        let c0 = m.ambient().support_offset();
        let top = m.max_generator_degree().unwrap_or(0);
        XGrid::new(from_int(-c0 - 1), from_int(top + 2), ratio(1, 8)).expect("valid default grid")
    }

    pub fn start(&self) -> &BigRational {
        &self.start
    }

    pub fn step(&self) -> &BigRational {
        &self.step
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn points(&self) -> Vec<BigRational> {
        (0..self.count).map(|i| &self.start + &self.step * BigInt::from(i)).collect()
    }
}

/// Limit estimate at one grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extrapolation {
    pub value: BigRational,
    /// True when the ray sequence settled and `value` is the exact limit.
    pub exact: bool,
    /// Quasi-period of the settled ray.
    pub period: Option<usize>,
    /// Smallest `n` on the ray from which the settled pattern was observed.
    pub settled_from: Option<u32>,
    /// `|f_{n_max}(x) - f_{⌊n_max/2⌋}(x)|`.
    pub diagnostic: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityGrid {
    pub kind: DensityKind,
    pub dimension: usize,
    pub rank: usize,
    pub xs: Vec<BigRational>,
    pub ladder: Vec<u32>,
    /// `samples[i][j]` is the value at `xs[i]` and `ladder[j]`.
    pub samples: Vec<Vec<BigRational>>,
    pub extrapolated: Vec<Extrapolation>,
}

impl DensityGrid {
    pub fn index_of(&self, x: &BigRational) -> Option<usize> {
        self.xs.iter().position(|v| v == x)
    }

    pub fn max_diagnostic(&self) -> f64 {
        self.extrapolated.iter().map(|e| to_f64(&e.diagnostic)).fold(0.0, f64::max)
    }

    /// Trapezoidal integral of the extrapolated values over the grid points
    /// in `[from, to]`. Both endpoints must be grid points.
    pub fn trapezoid(&self, from: &BigRational, to: &BigRational) -> Result<BigRational> {
        let a = self
            .index_of(from)
            .ok_or_else(|| Error::Input(format!("{} is not a grid point", format_rational(from))))?;
        let b = self
            .index_of(to)
            .ok_or_else(|| Error::Input(format!("{} is not a grid point", format_rational(to))))?;
        let mut total = BigRational::zero();
        for i in a..b {
            let h = &self.xs[i + 1] - &self.xs[i];
            total += h * (&self.extrapolated[i].value + &self.extrapolated[i + 1].value) / BigInt::from(2);
        }
        Ok(total)
    }

    /// Trapezoidal integral over the whole grid.
    pub fn trapezoid_all(&self) -> BigRational {
        match (self.xs.first(), self.xs.last()) {
            (Some(a), Some(b)) => self.trapezoid(a, b).expect("endpoints are grid points"),
            _ => BigRational::zero(),
        }
    }
}

/// Raw length behind a density value at `(n, m)`.
fn raw_length(engine: &Engine, module: &TermModule, kind: DensityKind, n: u32, degree: i64) -> Result<BigInt> {
    Ok(match kind {
        DensityKind::Adic => to_int(engine.length(module, n, degree)?),
        DensityKind::Saturated => to_int(engine.saturated_length(module, n, degree)?),
        DensityKind::Epsilon => {
            to_int(engine.saturated_length(module, n, degree)?) - to_int(engine.length(module, n, degree)?)
        }
        DensityKind::Cumulative => to_int(engine.cumulative_length(module, n, degree)?),
    })
}

struct Normalization {
    degree: usize,
    factor: BigInt,
}

impl Normalization {
    fn new(kind: DensityKind, d: usize, e: usize) -> Self {
        let degree = kind.growth_degree(d, e);
        Normalization { degree, factor: factorial(degree as u64 + 1) }
    }

    fn value(&self, length: BigInt, n: u32) -> BigRational {
        BigRational::new(length * &self.factor, num_traits::pow(BigInt::from(n), self.degree))
    }
}

/// Sample the density of the given kind exactly on `grid × ladder`.
pub fn sample(engine: &Engine, module: &TermModule, kind: DensityKind, grid: &XGrid, ladder: &Ladder) -> Result<DensityGrid> {
    require_full_rank(module)?;
    let d = module.dimension();
    let e = module.rank();
    let norm = Normalization::new(kind, d, e);
    let n_max = ladder.max();
    let half = (n_max / 2).max(1);
    engine.warm(module, n_max, kind.needs_saturation())?;

    let xs = grid.points();
    let rows = engine.get_strategy().map(&xs, |x| -> Result<(Vec<BigRational>, Extrapolation)> {
        let at = |n: u32| -> Result<BigRational> {
            Ok(norm.value(raw_length(engine, module, kind, n, floor_times(x, n as i64))?, n))
        };
        let row = ladder.values().iter().map(|&n| at(n)).collect::<Result<Vec<_>>>()?;
        let top = at(n_max)?;
        let diagnostic = (&top - at(half)?).abs();

        let p = x.numer().clone();
        let q: u32 = x.denom().try_into().map_err(|_| Error::Input("grid denominator too large".into()))?;
        let rays = n_max / q;
        let mut seq = Vec::with_capacity(rays as usize);
        for k in 1..=rays {
            let degree: i64 = (&p * BigInt::from(k)).try_into().map_err(|_| Error::Input("degree overflow".into()))?;
            seq.push(raw_length(engine, module, kind, q * k, degree)?);
        }
        let ext = match quasi_leading_coefficient(&seq, norm.degree, MAX_PERIOD, STABLE_WINDOW) {
            Some((lead, s)) => {
                let value = lead * &norm.factor / num_traits::pow(BigInt::from(q), norm.degree);
                let first_k = s.from_index.saturating_sub(s.order * s.step) as u32 + 1;
                Extrapolation { value, exact: true, period: Some(s.step), settled_from: Some(first_k * q), diagnostic }
            }
            None => Extrapolation { value: top, exact: false, period: None, settled_from: None, diagnostic },
        };
        Ok((row, ext))
    });
    let mut samples = Vec::with_capacity(xs.len());
    let mut extrapolated = Vec::with_capacity(xs.len());
    for r in rows {
        let (row, ext) = r?;
        samples.push(row);
        extrapolated.push(ext);
    }
    Ok(DensityGrid { kind, dimension: d, rank: e, xs, ladder: ladder.values().to_vec(), samples, extrapolated })
}

pub fn sample_adic(engine: &Engine, module: &TermModule, grid: &XGrid, ladder: &Ladder) -> Result<DensityGrid> {
    sample(engine, module, DensityKind::Adic, grid, ladder)
}

pub fn sample_saturated(engine: &Engine, module: &TermModule, grid: &XGrid, ladder: &Ladder) -> Result<DensityGrid> {
    sample(engine, module, DensityKind::Saturated, grid, ladder)
}

pub fn sample_epsilon(engine: &Engine, module: &TermModule, grid: &XGrid, ladder: &Ladder) -> Result<DensityGrid> {
    sample(engine, module, DensityKind::Epsilon, grid, ladder)
}

pub fn sample_cumulative(engine: &Engine, module: &TermModule, grid: &XGrid, ladder: &Ladder) -> Result<DensityGrid> {
    sample(engine, module, DensityKind::Cumulative, grid, ladder)
}

/// Distinct generator degrees `d_1 < ... < d_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chambers {
    pub breakpoints: Vec<i64>,
}

impl Chambers {
    /// Index of the chamber containing `x`: 0 below `d_1`, `j` on `(d_j, d_{j+1}]`
    /// (with `d_1` itself in chamber 1) and `l` on `[d_l, ∞)`.
    pub fn chamber_of(&self, x: &BigRational) -> usize {
        let b = &self.breakpoints;
        if *x < from_int(b[0]) {
            return 0;
        }
        if *x >= from_int(*b.last().expect("nonempty")) {
            return b.len();
        }
        // d_1 <= x < d_l
        (1..b.len()).find(|&j| *x <= from_int(b[j])).expect("x below d_l")
    }

    fn is_interior(&self, j: usize, x: &BigRational) -> bool {
        let b = &self.breakpoints;
        let above = *x > from_int(b[j - 1]);
        let below = j == b.len() || *x < from_int(b[j]);
        above && below
    }
}

pub fn detect_chambers(module: &TermModule) -> Result<Chambers> {
    if module.is_zero() {
        return Err(Error::Precondition("the zero module has no chambers".into()));
    }
    if !module.is_nonnegatively_graded() {
        return Err(Error::Precondition("generators must have nonnegative degree".into()));
    }
    let mut breakpoints = module.generator_degrees();
    breakpoints.sort_unstable();
    breakpoints.dedup();
    Ok(Chambers { breakpoints })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChamberFit {
    /// `None` for `-∞`.
    pub lower: Option<i64>,
    /// `None` for `+∞`.
    pub upper: Option<i64>,
    pub polynomial: UniPoly,
    /// True when every interpolation node was an exact limit.
    pub exact: bool,
    pub nodes: Vec<BigRational>,
    pub validated: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChamberDecomposition {
    pub breakpoints: Vec<i64>,
    /// Chamber 0 is `(-∞, d_1)`; chamber `j` starts at `d_j`.
    pub chambers: Vec<ChamberFit>,
}

impl ChamberDecomposition {
    pub fn top(&self) -> &ChamberFit {
        self.chambers.last().expect("at least the zero chamber")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let c = Chambers { breakpoints: self.breakpoints.clone() };
        self.chambers[c.chamber_of(x)].polynomial.eval(x)
    }
}

/// Fit the adic density by one polynomial of degree `<= d-1` per chamber.
///
/// Each chamber polynomial interpolates `d` extrapolated values at interior
/// grid points (exact limits with small denominators preferred) and must
/// reproduce every other interior point: exactly when both sides are exact,
/// otherwise within `tol` plus that point's convergence diagnostic.
pub fn fit_piecewise(grid: &DensityGrid, chambers: &Chambers, tol: f64) -> Result<ChamberDecomposition> {
    if grid.kind != DensityKind::Adic {
        return Err(Error::Precondition("piecewise fits apply to the adic density".into()));
    }
    let d = grid.dimension;
    let b = &chambers.breakpoints;
    let mut fits = Vec::with_capacity(b.len() + 1);

    for (i, x) in grid.xs.iter().enumerate() {
        if chambers.chamber_of(x) == 0 && !grid.extrapolated[i].value.is_zero() {
            return Err(Error::Invariant(format!(
                "adic density is nonzero at x = {} below d_1 = {}",
                format_rational(x),
                b[0]
            )));
        }
    }
    fits.push(ChamberFit {
        lower: None,
        upper: Some(b[0]),
        polynomial: UniPoly::zero(),
        exact: true,
        nodes: Vec::new(),
        validated: 0,
        max_residual: 0.0,
    });

    for j in 1..=b.len() {
        let lower = b[j - 1];
        let upper = b.get(j).copied();
        let label = match upper {
            Some(u) => format!("({lower}, {u}]"),
            None => format!("[{lower}, ∞)"),
        };
        let interior: Vec<usize> = (0..grid.xs.len()).filter(|&i| chambers.is_interior(j, &grid.xs[i])).collect();
        if interior.len() < d {
            return Err(Error::NotConverged(format!(
                "chamber {label} has {} interior grid points, {d} needed; refine the grid",
                interior.len()
            )));
        }
        let mut ranked = interior.clone();
        ranked.sort_by(|&a, &c| {
            let ea = &grid.extrapolated[a];
            let ec = &grid.extrapolated[c];
            ec.exact
                .cmp(&ea.exact)
                .then_with(|| grid.xs[a].denom().cmp(grid.xs[c].denom()))
                .then_with(|| ea.diagnostic.cmp(&ec.diagnostic))
                .then_with(|| grid.xs[a].cmp(&grid.xs[c]))
        });
        let chosen: Vec<usize> = ranked.into_iter().take(d).collect();
        let points: Vec<(BigRational, BigRational)> =
            chosen.iter().map(|&i| (grid.xs[i].clone(), grid.extrapolated[i].value.clone())).collect();
        let poly = UniPoly::interpolate(&points).expect("distinct grid points");
        let exact = chosen.iter().all(|&i| grid.extrapolated[i].exact);

        let mut max_residual = 0.0f64;
        let mut validated = 0;
        for &i in interior.iter().filter(|i| !chosen.contains(i)) {
            let ext = &grid.extrapolated[i];
            let fitted = poly.eval(&grid.xs[i]);
            let residual = (&fitted - &ext.value).abs();
            let r = to_f64(&residual);
            max_residual = max_residual.max(r);
            let ok = if exact && ext.exact {
                residual.is_zero()
            } else {
                r <= tol * to_f64(&fitted).abs().max(1.0) + to_f64(&ext.diagnostic)
            };
            if !ok {
                return Err(Error::NotConverged(format!(
                    "chamber {label}: fit {} misses x = {} by {r:.3e}; increase the n ladder",
                    poly,
                    format_rational(&grid.xs[i])
                )));
            }
            validated += 1;
        }
        fits.push(ChamberFit {
            lower: Some(lower),
            upper,
            polynomial: poly,
            exact,
            nodes: chosen.iter().map(|&i| grid.xs[i].clone()).collect(),
            validated,
            max_residual,
        });
    }

    // continuity at d_2, ..., d_l
    for j in 2..=b.len() {
        let x = from_int(b[j - 1]);
        let (left, right) = (&fits[j - 1], &fits[j]);
        let gap = (left.polynomial.eval(&x) - right.polynomial.eval(&x)).abs();
        let ok = if left.exact && right.exact {
            gap.is_zero()
        } else {
            to_f64(&gap) <= tol * to_f64(&right.polynomial.eval(&x)).abs().max(1.0)
        };
        if !ok {
            return Err(Error::NotConverged(format!(
                "chamber fits disagree at breakpoint {} by {}; increase the n ladder",
                b[j - 1],
                format_rational(&gap)
            )));
        }
    }

    let top = fits.last().expect("top chamber");
    if top.polynomial.degree() != Some(d - 1) {
        return Err(Error::NotConverged(format!(
            "top chamber fit {} does not have degree {}",
            top.polynomial,
            d - 1
        )));
    }
    Ok(ChamberDecomposition { breakpoints: b.clone(), chambers: fits })
}

/// Spacing of a grid (1 for single-point grids).
pub fn grid_step(grid: &DensityGrid) -> BigRational {
    if grid.xs.len() < 2 {
        return BigRational::one();
    }
    &grid.xs[1] - &grid.xs[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::Term;
    use crate::ring::{GradedFreeModule, RingSpec};
    use std::sync::Arc;

    fn ideal(shift: i64, gens: &[&[u32]]) -> TermModule {
        let a = Arc::new(GradedFreeModule::new(RingSpec::standard(2).unwrap(), vec![shift]).unwrap());
        let terms = gens.iter().map(|g| Term::new(g.to_vec(), vec![1])).collect();
        TermModule::minimalize(a, 1, terms).unwrap()
    }

    #[test]
    fn maximal_ideal_adic_density() {
        let m = ideal(0, &[&[1, 0], &[0, 1]]);
        let engine = Engine::new();
        let grid = sample_adic(&engine, &m, &XGrid::default_for(&m), &Ladder::default()).unwrap();
        for (x, e) in grid.xs.iter().zip(&grid.extrapolated) {
            let expected = if *x >= from_int(1) { x * BigInt::from(2) } else { BigRational::zero() };
            assert!(e.exact, "x = {x}");
            assert_eq!(e.value, expected, "x = {x}");
        }
        let fit = fit_piecewise(&grid, &detect_chambers(&m).unwrap(), 0.05).unwrap();
        assert_eq!(fit.top().polynomial.to_string(), "2*x");
    }

    #[test]
    fn maximal_ideal_epsilon_density() {
        let m = ideal(0, &[&[1, 0], &[0, 1]]);
        let engine = Engine::new();
        let grid = sample_epsilon(&engine, &m, &XGrid::default_for(&m), &Ladder::default()).unwrap();
        for (x, e) in grid.xs.iter().zip(&grid.extrapolated) {
            let expected =
                if *x >= BigRational::zero() && *x < from_int(1) { x * BigInt::from(2) } else { BigRational::zero() };
            assert_eq!(e.value, expected, "x = {x}");
        }
        // the jump from 2 to 0 at x = 1 costs half a step times the jump
        assert_eq!(grid.trapezoid_all(), ratio(7, 8));
    }

    #[test]
    fn two_chambers_continuous() {
        let m = ideal(0, &[&[2, 0], &[0, 3]]);
        let engine = Engine::new();
        let grid = sample_adic(&engine, &m, &XGrid::default_for(&m), &Ladder::default()).unwrap();
        let fit = fit_piecewise(&grid, &detect_chambers(&m).unwrap(), 0.05).unwrap();
        assert_eq!(fit.breakpoints, vec![2, 3]);
        assert_eq!(fit.chambers[1].polynomial.to_string(), "6*x - 12");
        assert_eq!(fit.chambers[2].polynomial.to_string(), "2*x");
        assert!(fit.chambers[1].exact && fit.chambers[2].exact);
    }

    #[test]
    fn chamber_lookup() {
        let c = Chambers { breakpoints: vec![2, 3] };
        assert_eq!(c.chamber_of(&ratio(3, 2)), 0);
        assert_eq!(c.chamber_of(&from_int(2)), 1);
        assert_eq!(c.chamber_of(&ratio(5, 2)), 1);
        assert_eq!(c.chamber_of(&from_int(3)), 2);
        assert_eq!(c.chamber_of(&from_int(9)), 2);
    }

    #[test]
    fn grid_and_ladder_validation() {
        assert!(Ladder::new(vec![8, 8]).is_err());
        assert!(Ladder::new(vec![]).is_err());
        assert_eq!(Ladder::evenly_spaced(40, 5).unwrap(), Ladder::default());
        assert!(XGrid::new(from_int(0), from_int(1), from_int(0)).is_err());
        assert_eq!(XGrid::new(from_int(-1), from_int(1), ratio(1, 2)).unwrap().len(), 5);
        assert_eq!("epsilon".parse::<DensityKind>().unwrap(), DensityKind::Epsilon);
    }
}
