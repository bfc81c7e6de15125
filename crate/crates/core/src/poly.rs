//! Polynomials with exact rational coefficients and an exact linear solver.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::format_rational;

/// Univariate polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Integral from `a` to `b`.
    pub fn integrate(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let anti: Vec<BigRational> = std::iter::once(BigRational::zero())
            .chain(self.coeffs.iter().enumerate().map(|(i, c)| c / BigInt::from(i + 1)))
            .collect();
        let anti = UniPoly::new(anti);
        anti.eval(b) - anti.eval(a)
    }

    /// Interpolating polynomial of degree `< points.len()` (Newton form, exact).
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Option<Self> {
        let n = points.len();
        for i in 0..n {
            for j in 0..i {
                if points[i].0 == points[j].0 {
                    return None;
                }
            }
        }
        let mut dd: Vec<BigRational> = points.iter().map(|p| p.1.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i].0 - &points[i - level].0);
            }
        }
        // expand Newton form into monomial coefficients
        let mut result = vec![BigRational::zero(); n.max(1)];
        for k in (0..n).rev() {
            // result = result * (x - x_k) + dd[k]
            let mut next = vec![BigRational::zero(); n.max(1)];
            for (i, c) in result.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if i + 1 < next.len() {
                    next[i + 1] += c;
                }
                next[i] -= c * &points[k].0;
            }
            next[0] += &dd[k];
            result = next;
        }
        Some(UniPoly::new(result))
    }

    pub fn render(&self, var: &str) -> String {
        render_terms(
            self.coeffs.iter().enumerate().rev().map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{i}"),
                };
                (c.clone(), mono)
            }),
        )
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// Bivariate polynomial in `X` (degree) and `Y` (Rees level).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BiPoly {
    pub fn new(terms: impl IntoIterator<Item = ((u32, u32), BigRational)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in terms {
            if !v.is_zero() {
                *map.entry(k).or_insert_with(BigRational::zero) += v;
            }
        }
        map.retain(|_, v: &mut BigRational| !v.is_zero());
        BiPoly { terms: map }
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Homogeneous component of top total degree.
    pub fn leading_form(&self) -> BiPoly {
        match self.total_degree() {
            None => BiPoly::default(),
            Some(top) => BiPoly::new(
                self.terms.iter().filter(|((i, j), _)| i + j == top).map(|(k, v)| (*k, v.clone())),
            ),
        }
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> BiPoly {
        BiPoly::new(self.terms.iter().filter(|((i, j), _)| i + j == degree).map(|(k, v)| (*k, v.clone())))
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, ((i, j), c)| {
            acc + c * num_traits::pow(x.clone(), *i as usize) * num_traits::pow(y.clone(), *j as usize)
        })
    }

    pub fn eval_int(&self, x: i64, y: i64) -> BigRational {
        self.eval(&BigRational::from_integer(x.into()), &BigRational::from_integer(y.into()))
    }

    /// `P(x, 1)` as a univariate polynomial.
    pub fn dehomogenize(&self) -> UniPoly {
        let deg = self.terms.keys().map(|(i, _)| *i as usize).max().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for ((i, _), c) in &self.terms {
            coeffs[*i as usize] += c;
        }
        UniPoly::new(coeffs)
    }

    pub fn render(&self) -> String {
        render_terms(self.terms.iter().rev().map(|((i, j), c)| {
            let mut parts = Vec::new();
            match i {
                0 => {}
                1 => parts.push("X".to_string()),
                _ => parts.push(format!("X^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("Y".to_string()),
                _ => parts.push(format!("Y^{j}")),
            }
            (c.clone(), parts.join("*"))
        }))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn render_terms(terms: impl Iterator<Item = (BigRational, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let abs = c.abs();
        let coeff = if abs.is_integer() { abs.numer().to_string() } else { format!("{}/{}", abs.numer(), abs.denom()) };
        let body = if mono.is_empty() {
            coeff
        } else if abs.is_one() {
            mono
        } else {
            format!("{coeff}*{mono}")
        };
        if out.is_empty() {
            out = if negative { format!("-{body}") } else { body };
        } else {
            out.push_str(if negative { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// Solve `A x = b` exactly. Overdetermined systems are accepted when
/// consistent; returns `None` for inconsistent or rank-deficient systems.
pub fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..cols {
        let pr = (pivot_row..rows).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot_row, pr);
        b.swap(pivot_row, pr);
        let inv = a[pivot_row][col].recip();
        for v in &mut a[pivot_row][col..] {
            *v = &*v * &inv;
        }
        b[pivot_row] = &b[pivot_row] * &inv;
        for r in 0..rows {
            if r != pivot_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[pivot_row][col..].to_vec();
                for (x, p) in a[r][col..].iter_mut().zip(&pivot) {
                    *x -= p * &f;
                }
                let v = &b[pivot_row] * &f;
                b[r] -= v;
            }
        }
        pivot_row += 1;
    }
    if b[pivot_row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(b.into_iter().take(cols).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_int, ratio};

    #[test]
    fn interpolation_recovers_line() {
        let pts = vec![(from_int(3), from_int(6)), (from_int(5), from_int(10))];
        let p = UniPoly::interpolate(&pts).unwrap();
        assert_eq!(p, UniPoly::new(vec![from_int(0), from_int(2)]));
        assert_eq!(p.to_string(), "2*x");
        assert!(UniPoly::interpolate(&[(from_int(1), from_int(1)), (from_int(1), from_int(2))]).is_none());
    }

    #[test]
    fn interpolation_quadratic_and_integral() {
        // x^2/2 - x + 3
        let f = |x: i64| ratio(x * x, 2) - from_int(x) + from_int(3);
        let pts: Vec<_> = [-1i64, 2, 7].iter().map(|&x| (from_int(x), f(x))).collect();
        let p = UniPoly::interpolate(&pts).unwrap();
        assert_eq!(p.coeffs(), &[from_int(3), from_int(-1), ratio(1, 2)]);
        assert_eq!(p.integrate(&from_int(0), &from_int(2)), ratio(4, 3) - from_int(2) + from_int(6));
    }

    #[test]
    fn bipoly_render_and_leading_form() {
        let p = BiPoly::new([((1, 0), from_int(1)), ((0, 1), from_int(-1)), ((0, 0), from_int(1))]);
        assert_eq!(p.render(), "X - Y + 1");
        assert_eq!(p.leading_form().render(), "X - Y");
        assert_eq!(p.eval_int(5, 2), from_int(4));
        assert_eq!(p.dehomogenize().render("x"), "x");
    }

    #[test]
    fn overdetermined_solve() {
        // fit y = 2x + 1 through three consistent points
        let a = vec![
            vec![from_int(1), from_int(0)],
            vec![from_int(1), from_int(1)],
            vec![from_int(1), from_int(2)],
        ];
        let b = vec![from_int(1), from_int(3), from_int(5)];
        assert_eq!(solve_exact(a.clone(), b).unwrap(), vec![from_int(1), from_int(2)]);
        assert!(solve_exact(a, vec![from_int(1), from_int(3), from_int(6)]).is_none());
    }
}
