use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A standard graded polynomial ring `k[x_1, .., x_d]`, `d >= 2`.
///
/// The coefficient field never enters a computation: every length is a
/// count of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    variables: Vec<String>,
}

impl RingSpec {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        if variables.len() < 2 {
            return Err(Error::Input(format!(
                "the ring needs at least 2 variables, got {}",
                variables.len()
            )));
        }
        for (i, v) in variables.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::Input(format!("variable {i} has an empty name")));
            }
            if variables[..i].contains(v) {
                return Err(Error::Input(format!("variable name {v:?} is repeated")));
            }
        }
        Ok(RingSpec { variables })
    }

    /// Ring with variables `x, y, z, w` (first `d`) or `x1..xd` past four.
    pub fn standard(d: usize) -> Result<Self> {
        if d <= 4 {
            RingSpec::new(["x", "y", "z", "w"].iter().take(d).copied())
        } else {
            RingSpec::new((1..=d).map(|i| format!("x{i}")))
        }
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }
}

/// `F = A(-f_1) ⊕ .. ⊕ A(-f_e)`: basis vector `e_i` sits in degree `shifts[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedFreeModule {
    ring: RingSpec,
    shifts: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(ring: RingSpec, shifts: Vec<i64>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::Input("free module must have positive rank".into()));
        }
        Ok(GradedFreeModule { ring, shifts })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn dimension(&self) -> usize {
        self.ring.dimension()
    }

    /// `c0 = max(0, -min f_i)`; every nonzero piece of `F^n` lives in degree `>= -c0 * n`.
    pub fn support_offset(&self) -> i64 {
        let min = self.shifts.iter().copied().min().unwrap_or(0);
        (-min).max(0)
    }
}
