//! Epsilon multiplicity, diagonal multiplicities, bigraded Hilbert polynomial
//! fits and mixed multiplicities, all from exact length data.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::density::{DensityGrid, DensityKind, MAX_PERIOD, STABLE_WINDOW};
use crate::engine::{require_full_rank, to_int, Engine};
use crate::error::{Error, Result};
use crate::finite_diff::{polynomial_degree, quasi_leading_coefficient};
use crate::module::TermModule;
use crate::poly::{solve_exact, BiPoly, UniPoly};
use crate::rational::{factorial, from_biguint, to_f64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonReport {
    /// `t_n = ℓ(M̃^n / M^n)` for `n = 1..=n_max`.
    pub totals: Vec<BigUint>,
    /// `(d+e-1)! t_{n_max} / n_max^{d+e-1}`.
    pub estimate: BigRational,
    /// `|estimate - (same at ⌊n_max/2⌋)|`.
    pub diagnostic: BigRational,
    /// Exact limit, when the top difference of `t_n` settles.
    pub exact: Option<BigRational>,
    pub period: Option<usize>,
    pub settled_from: Option<u32>,
}

impl EpsilonReport {
    pub fn n_max(&self) -> u32 {
        self.totals.len() as u32
    }

    /// The exact value when known, else the estimate.
    pub fn value(&self) -> &BigRational {
        self.exact.as_ref().unwrap_or(&self.estimate)
    }
}

/// `ε(M)` from the quotient totals `t_1, ..., t_{n_max}`.
pub fn epsilon_multiplicity(engine: &Engine, module: &TermModule, n_max: u32) -> Result<EpsilonReport> {
    require_full_rank(module)?;
    if n_max == 0 {
        return Err(Error::Input("n_max must be positive".into()));
    }
    let degree = module.dimension() + module.rank() - 1;
    let norm = factorial(degree as u64);
    engine.warm(module, n_max, true)?;
    let ns: Vec<u32> = (1..=n_max).collect();
    let totals = engine
        .get_strategy()
        .map(&ns, |&n| engine.quotient_total(module, n))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let at = |n: u32| BigRational::new(to_int(totals[n as usize - 1].clone()) * &norm, num_traits::pow(BigInt::from(n), degree));
    let estimate = at(n_max);
    let diagnostic = (&estimate - at((n_max / 2).max(1))).abs();
    let seq: Vec<BigInt> = totals.iter().cloned().map(to_int).collect();
    let (exact, period, settled_from) = match quasi_leading_coefficient(&seq, degree, MAX_PERIOD, STABLE_WINDOW) {
        Some((lead, s)) => {
            let first = s.from_index.saturating_sub(s.order * s.step) as u32 + 1;
            (Some(lead * &norm), Some(s.step), Some(first))
        }
        None => (None, None, None),
    };
    Ok(EpsilonReport { totals, estimate, diagnostic, exact, period, settled_from })
}

/// Comparison of `ε` with the trapezoidal integral of the epsilon density.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralCheck {
    pub integral: BigRational,
    pub epsilon: BigRational,
    pub allowed: f64,
    pub agrees: bool,
}

/// The allowance is `tol |ε|` plus one grid step times the largest sampled
/// value, which bounds the trapezoid error across the jumps of `f_ε`.
pub fn epsilon_integral_check(report: &EpsilonReport, grid: &DensityGrid, tol: f64) -> Result<IntegralCheck> {
    if grid.kind != DensityKind::Epsilon {
        return Err(Error::Precondition("integral check needs an epsilon density grid".into()));
    }
    let integral = grid.trapezoid_all();
    let epsilon = report.value().clone();
    let max_f = grid.extrapolated.iter().map(|e| to_f64(&e.value).abs()).fold(0.0, f64::max);
    let allowed = tol * to_f64(&epsilon).abs() + to_f64(&crate::density::grid_step(grid)) * max_f;
    let agrees = to_f64(&(&integral - &epsilon).abs()) <= allowed;
    Ok(IntegralCheck { integral, epsilon, allowed, agrees })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagonalVersion {
    /// `A[Mt]_{Δ(c,1)}`, from `ℓ((M^n)_{cn})`.
    A,
    /// `S[𝖬t]_{Δ(c,1)}` with `S = A[y]`, from cumulative lengths.
    S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalReport {
    pub version: DiagonalVersion,
    pub c: i64,
    /// `h(n)` for `n = 0..=n_max`.
    pub values: Vec<BigUint>,
    /// Krull dimensions suggested by theory: `[d+e-2, d+e-1]` for the A-version,
    /// one more for the S-version. The detected one is in `dimension`.
    pub expected_dimensions: [usize; 2],
    pub determined: Option<DiagonalMultiplicity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalMultiplicity {
    pub multiplicity: BigInt,
    pub dimension: usize,
    /// First `n` from which `h` agrees with its Hilbert polynomial.
    pub n0: u32,
    pub difference_order: usize,
}

/// Multiplicity of the diagonal subalgebra `⊕_n (M^n)_{cn}` (or its `A[y]`
/// analogue) read off the settled difference table of its Hilbert function.
pub fn diagonal_multiplicity(
    engine: &Engine,
    module: &TermModule,
    c: i64,
    version: DiagonalVersion,
    n_max: u32,
) -> Result<DiagonalReport> {
    require_full_rank(module)?;
    let d_m = module.max_generator_degree().expect("nonzero module");
    if c <= d_m {
        return Err(Error::Precondition(format!("diagonal degree c = {c} must exceed d_M = {d_m}")));
    }
    engine.warm(module, n_max, false)?;
    let ns: Vec<u32> = (0..=n_max).collect();
    let values = engine
        .get_strategy()
        .map(&ns, |&n| match version {
            DiagonalVersion::A => engine.length(module, n, c * n as i64),
            DiagonalVersion::S => engine.cumulative_length(module, n, c * n as i64),
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let d = module.dimension();
    let e = module.rank();
    let base = d + e - 2 + usize::from(version == DiagonalVersion::S);
    let seq: Vec<BigInt> = values.iter().cloned().map(to_int).collect();
    let determined = polynomial_degree(&seq, base + 2, STABLE_WINDOW)
        .filter(|s| !s.value.is_zero())
        .map(|s| DiagonalMultiplicity {
            multiplicity: s.value.clone(),
            dimension: s.order + 1,
            n0: s.from_index.saturating_sub(s.order) as u32,
            difference_order: s.order,
        });
    Ok(DiagonalReport { version, c, values, expected_dimensions: [base, base + 1], determined })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitOptions {
    pub max_period: usize,
    pub max_margin: i64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_period: 4, max_margin: 64 }
    }
}

/// Exact bivariate polynomial `P(X, Y)` with `ℓ((M^n)_m) = P(m, n)` (or the
/// cumulative length) for `m >= cn + margin`, one polynomial per residue
/// class of `n` modulo `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedFit {
    pub c: i64,
    pub margin: i64,
    pub period: usize,
    pub cumulative: bool,
    /// Total degree bound used for the fit.
    pub degree: usize,
    pub classes: Vec<BiPoly>,
    pub validated_points: usize,
}

impl BigradedFit {
    /// The polynomial itself when there is a single residue class.
    pub fn polynomial(&self) -> Option<&BiPoly> {
        (self.period == 1).then(|| &self.classes[0])
    }

    /// Homogeneous part of top degree, shared by all classes.
    pub fn leading_form(&self) -> BiPoly {
        self.classes[0].homogeneous_part(self.degree as u32)
    }
}

pub fn fit_bigraded_polynomial(
    engine: &Engine,
    module: &TermModule,
    c: i64,
    cumulative: bool,
    options: FitOptions,
) -> Result<BigradedFit> {
    require_full_rank(module)?;
    let d_m = module.max_generator_degree().expect("nonzero module");
    if c <= d_m {
        return Err(Error::Precondition(format!("fit needs c > d_M = {d_m}, got {c}")));
    }
    let degree = module.dimension() + module.rank() - 2 + usize::from(cumulative);
    let unknowns: Vec<(u32, u32)> =
        (0..=degree as u32).flat_map(|t| (0..=t).map(move |i| (i, t - i))).collect();
    let side = degree + 2;
    let value = |n: u32, m: i64| -> Result<BigRational> {
        let v = if cumulative { engine.cumulative_length(module, n, m)? } else { engine.length(module, n, m)? };
        Ok(from_biguint(&v))
    };

    let mut margins = vec![0i64, 1, 2];
    while *margins.last().expect("nonempty") < options.max_margin {
        let next = margins.last().expect("nonempty") * 2;
        margins.push(next.min(options.max_margin));
    }
    for &margin in &margins {
        'period: for h in 1..=options.max_period {
            let mut classes = Vec::with_capacity(h);
            let mut validated = 0;
            for r in 0..h {
                let ns: Vec<u32> = (0..=side).map(|k| (1 + r + h * k) as u32).collect();
                let mut rows = Vec::new();
                let mut rhs = Vec::new();
                let mut held_out = Vec::new();
                for (k, &n) in ns.iter().enumerate() {
                    for i in 0..=side {
                        let m = c * n as i64 + margin + i as i64;
                        if k == side || i == side {
                            held_out.push((n, m));
                            continue;
                        }
                        rows.push(
                            unknowns
                                .iter()
                                .map(|&(a, b)| {
                                    BigRational::from_integer(
                                        num_traits::pow(BigInt::from(m), a as usize)
                                            * num_traits::pow(BigInt::from(n), b as usize),
                                    )
                                })
                                .collect(),
                        );
                        rhs.push(value(n, m)?);
                    }
                }
                let Some(coeffs) = solve_exact(rows, rhs) else { continue 'period };
                let poly = BiPoly::new(unknowns.iter().copied().zip(coeffs));
                for (n, m) in held_out {
                    if poly.eval_int(m, n as i64) != value(n, m)? {
                        continue 'period;
                    }
                    validated += 1;
                }
                classes.push(poly);
            }
            let lead = classes[0].homogeneous_part(degree as u32);
            if classes.iter().any(|p| p.homogeneous_part(degree as u32) != lead) {
                continue;
            }
            return Ok(BigradedFit { c, margin, period: h, cumulative, degree, classes, validated_points: validated });
        }
    }
    Err(Error::NotConverged(format!(
        "quasi-period undetected for periods up to {} and margins up to {}",
        options.max_period, options.max_margin
    )))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedReport {
    pub fit: BigradedFit,
    /// `e_0, ..., e_{d-1}` (or `e_0, ..., e_d` for the cumulative version).
    pub values: Vec<BigInt>,
    /// False when some `e_i` is negative; the bigrading here is not standard,
    /// so negative values are reported rather than rejected.
    pub nonnegative: bool,
    /// `(d+e-1)! P(x, 1)` (one factorial order higher when cumulative): the
    /// top-chamber density polynomial implied by the fit.
    pub density_polynomial: UniPoly,
}

/// Solve the leading form `Σ_i e_i X^i Y^{D-i} / (i! (D-i)!)` for the `e_i`.
pub fn mixed_multiplicities(
    engine: &Engine,
    module: &TermModule,
    c: i64,
    cumulative: bool,
    options: FitOptions,
) -> Result<MixedReport> {
    let fit = fit_bigraded_polynomial(engine, module, c, cumulative, options)?;
    let top = fit.degree as u32;
    let lead = fit.leading_form();
    let count = module.dimension() + usize::from(cumulative);
    let mut values = Vec::with_capacity(count);
    for i in 0..=top {
        let coeff = lead.coeff(i, top - i);
        if i as usize >= count {
            if !coeff.is_zero() {
                return Err(Error::NotConverged(format!(
                    "leading form {lead} has a nonzero X^{i} term; fit region too shallow"
                )));
            }
            continue;
        }
        let e = coeff * factorial(i as u64) * factorial((top - i) as u64);
        if !e.is_integer() {
            return Err(Error::NotConverged(format!(
                "e_{i} = {e} is not an integer; fit region too shallow"
            )));
        }
        values.push(e.to_integer());
    }
    let nonnegative = values.iter().all(|v| !v.is_negative());
    let norm = factorial(top as u64 + 1);
    let density_polynomial = UniPoly::new(
        lead.dehomogenize().coeffs().iter().map(|c| c * BigRational::from_integer(norm.clone())).collect(),
    );
    Ok(MixedReport { fit, values, nonnegative, density_polynomial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::Term;
    use crate::rational::{from_int, ratio};
    use crate::ring::{GradedFreeModule, RingSpec};
    use std::sync::Arc;

    fn ideal(gens: &[&[u32]]) -> TermModule {
        let a = Arc::new(GradedFreeModule::new(RingSpec::standard(2).unwrap(), vec![0]).unwrap());
        let terms = gens.iter().map(|g| Term::new(g.to_vec(), vec![1])).collect();
        TermModule::minimalize(a, 1, terms).unwrap()
    }

    #[test]
    fn epsilon_of_small_ideals() {
        let engine = Engine::new();
        let r = epsilon_multiplicity(&engine, &ideal(&[&[2, 0], &[1, 1]]), 12).unwrap();
        for (i, t) in r.totals.iter().enumerate() {
            let n = i as u64 + 1;
            assert_eq!(*t, BigUint::from(n * (n + 1) / 2));
        }
        assert_eq!(r.exact, Some(from_int(1)));
        let r = epsilon_multiplicity(&engine, &ideal(&[&[2, 0], &[1, 1], &[0, 2]]), 12).unwrap();
        assert_eq!(r.exact, Some(from_int(4)));
        let r = epsilon_multiplicity(&engine, &ideal(&[&[1, 0]]), 6).unwrap();
        assert_eq!(r.exact, Some(from_int(0)));
    }

    #[test]
    fn diagonal_of_maximal_ideal() {
        let engine = Engine::new();
        let m = ideal(&[&[1, 0], &[0, 1]]);
        let a = diagonal_multiplicity(&engine, &m, 2, DiagonalVersion::A, 12).unwrap();
        let det = a.determined.unwrap();
        assert_eq!((det.multiplicity, det.dimension), (BigInt::from(2), 2));
        let s = diagonal_multiplicity(&engine, &m, 2, DiagonalVersion::S, 12).unwrap();
        for (n, v) in s.values.iter().enumerate() {
            let n = n as u64;
            assert_eq!(*v, BigUint::from((3 * n * n + 5 * n + 2) / 2));
        }
        assert_eq!(s.determined.unwrap().multiplicity, BigInt::from(3));
        assert!(diagonal_multiplicity(&engine, &m, 1, DiagonalVersion::A, 12).is_err());
    }

    #[test]
    fn bigraded_fits() {
        let engine = Engine::new();
        let fit = fit_bigraded_polynomial(&engine, &ideal(&[&[1, 0], &[0, 1]]), 2, false, FitOptions::default()).unwrap();
        assert_eq!(fit.polynomial().unwrap().to_string(), "X + 1");
        let fit =
            fit_bigraded_polynomial(&engine, &ideal(&[&[2, 0], &[1, 1]]), 3, false, FitOptions::default()).unwrap();
        assert_eq!(fit.polynomial().unwrap().to_string(), "X - Y + 1");
    }

    #[test]
    fn mixed_of_maximal_ideal() {
        let engine = Engine::new();
        let r = mixed_multiplicities(&engine, &ideal(&[&[1, 0], &[0, 1]]), 2, false, FitOptions::default()).unwrap();
        assert_eq!(r.values, vec![BigInt::from(0), BigInt::from(1)]);
        assert_eq!(r.density_polynomial.to_string(), "2*x");
        let s = mixed_multiplicities(&engine, &ideal(&[&[1, 0], &[0, 1]]), 2, true, FitOptions::default()).unwrap();
        // (m+1)(m+2)/2 - n(n+1)/2 has leading form X^2/2 - Y^2/2
        assert_eq!(s.values, vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
        assert_eq!(s.fit.leading_form().coeff(2, 0), ratio(1, 2));
    }
}
