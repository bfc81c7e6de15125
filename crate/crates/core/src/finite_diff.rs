//! Stabilized finite differences of integer sequences.
//!
//! A sequence that is eventually a quasi-polynomial of degree `<= k` with
//! period `h` has a constant `k`-th difference with step `h` on its tail:
//! `Δ_h^k v = k! h^k a_k`, where `a_k` is the common leading coefficient of
//! the residue-class polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::rational::factorial;

/// `Σ_j (-1)^j C(k, j) v[i - j h]` for every `i >= k h`.
pub fn differences(values: &[BigInt], order: usize, step: usize) -> Vec<Option<BigInt>> {
    let mut coeffs = vec![BigInt::from(1)];
    for _ in 0..order {
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j] += c;
            next[j + 1] -= c;
        }
        coeffs = next;
    }
    (0..values.len())
        .map(|i| {
            if i < order * step {
                return None;
            }
            Some(coeffs.iter().enumerate().map(|(j, c)| c * &values[i - j * step]).sum())
        })
        .collect()
}

/// A difference that is constant on the tail of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stable {
    pub order: usize,
    pub step: usize,
    pub value: BigInt,
    /// First index of the constant run (it extends to the end).
    pub from_index: usize,
}

/// The order-`order`, step-`step` difference if its last `window` values agree.
pub fn stable_difference(values: &[BigInt], order: usize, step: usize, window: usize) -> Option<Stable> {
    let diffs = differences(values, order, step);
    let last = diffs.last()?.clone()?;
    let mut start = diffs.len() - 1;
    while start > 0 && diffs[start - 1].as_ref() == Some(&last) {
        start -= 1;
    }
    if diffs.len() - start < window {
        return None;
    }
    Some(Stable { order, step, value: last, from_index: start })
}

/// Leading coefficient `a_k` of an eventual quasi-polynomial of degree `<= k`,
/// trying periods `1..=max_period`. The window covers every residue class.
pub fn quasi_leading_coefficient(
    values: &[BigInt],
    degree: usize,
    max_period: usize,
    window: usize,
) -> Option<(BigRational, Stable)> {
    for h in 1..=max_period {
        let w = window.max(h + 1);
        if let Some(s) = stable_difference(values, degree, h, w) {
            let denom = factorial(degree as u64) * num_traits::pow(BigInt::from(h), degree);
            return Some((BigRational::new(s.value.clone(), denom), s));
        }
    }
    None
}

/// Least order whose step-1 difference settles on a nonzero constant; this is
/// the degree of the eventual Hilbert polynomial.
pub fn polynomial_degree(values: &[BigInt], max_order: usize, window: usize) -> Option<Stable> {
    for k in 0..=max_order {
        if let Some(s) = stable_difference(values, k, 1, window) {
            if !s.value.is_zero() || k == 0 {
                return Some(s);
            }
            // a zero tail at order k means degree < k, which would have shown up already
            return None;
        }
    }
    None
}
