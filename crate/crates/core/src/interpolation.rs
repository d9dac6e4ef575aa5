//! Exact linear algebra over Z_p for interpolation: Gauss-Jordan inversion
//! and generalized-Vandermonde reconstruction weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Inverts a square matrix given as rows. Singular input is exact rank
/// deficiency, reported as [`Error::SingularMatrix`].
pub fn invert(field: &Field, m: &[Vec<FieldElement>]) -> Result<Vec<Vec<FieldElement>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("invert: matrix is not square".into()));
    }
    let mut a: Vec<Vec<FieldElement>> = m.to_vec();
    let mut inv: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut row = vec![FieldElement::ZERO; n];
            row[i] = FieldElement::ONE;
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p_inv = field.inv(a[col][col])?;
        for c in 0..n {
            a[col][c] = field.mul(a[col][c], p_inv);
            inv[col][c] = field.mul(inv[col][c], p_inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            for c in 0..n {
                let x = field.mul(factor, a[col][c]);
                a[r][c] = field.sub(a[r][c], x);
                let y = field.mul(factor, inv[col][c]);
                inv[r][c] = field.sub(inv[r][c], y);
            }
        }
    }
    Ok(inv)
}

/// Rank-based invertibility test (no inverse materialized).
pub fn is_invertible(field: &Field, m: &[Vec<FieldElement>]) -> bool {
    determinant(field, m).map(|d| !d.is_zero()).unwrap_or(false)
}

/// Determinant by elimination.
pub fn determinant(field: &Field, m: &[Vec<FieldElement>]) -> Result<FieldElement> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("determinant: matrix is not square".into()));
    }
    let mut a = m.to_vec();
    let mut det = FieldElement::ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(FieldElement::ZERO);
        };
        if pivot != col {
            a.swap(col, pivot);
            det = field.neg(det);
        }
        det = field.mul(det, a[col][col]);
        let p_inv = field.inv(a[col][col])?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = field.mul(a[r][col], p_inv);
            for c in col..n {
                let x = field.mul(factor, a[col][c]);
                a[r][c] = field.sub(a[r][c], x);
            }
        }
    }
    Ok(det)
}

/// The matrix `M[n][i] = alphas[n]^exponents[i]`.
pub fn generalized_vandermonde(
    field: &Field,
    alphas: &[FieldElement],
    exponents: &[u32],
) -> Vec<Vec<FieldElement>> {
    alphas
        .iter()
        .map(|&a| exponents.iter().map(|&e| field.pow(a, e as u64)).collect())
        .collect()
}

/// Weights recovering selected coefficients of a sparse polynomial from its
/// evaluations: `coeff(exponents[targets[j]]) = sum_n weights[j][n] * P(alpha_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionVectors {
    pub exponents: Vec<u32>,
    pub targets: Vec<usize>,
    pub weights: Vec<Vec<FieldElement>>,
}

impl ReconstructionVectors {
    /// Weight vector for the `j`-th requested target.
    pub fn weights_for(&self, j: usize) -> &[FieldElement] {
        &self.weights[j]
    }

    /// Number of evaluation points each vector spans.
    pub fn len(&self) -> usize {
        self.weights.first().map_or(0, |w| w.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pads every vector with zeros to `n` entries, so the weights can be
    /// indexed by worker id when only the first few workers are used.
    pub fn padded(mut self, n: usize) -> Self {
        for w in &mut self.weights {
            w.resize(n.max(w.len()), FieldElement::ZERO);
        }
        self
    }
}

/// Solves the generalized Vandermonde system for the requested target
/// coefficients. `alphas` and `exponents` must have equal length and the
/// alphas must be distinct; a singular system means the points are unusable
/// for this support and should be resampled.
pub fn solve_general_vandermonde(
    field: &Field,
    alphas: &[FieldElement],
    exponents: &[u32],
    targets: &[usize],
) -> Result<ReconstructionVectors> {
    if alphas.len() != exponents.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} evaluation points for {} unknown coefficients",
            alphas.len(),
            exponents.len()
        )));
    }
    if let Some(&bad) = targets.iter().find(|&&t| t >= exponents.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            limit: exponents.len(),
        });
    }
    let m = generalized_vandermonde(field, alphas, exponents);
    let inv = invert(field, &m)?;
    Ok(ReconstructionVectors {
        exponents: exponents.to_vec(),
        targets: targets.to_vec(),
        weights: targets.iter().map(|&t| inv[t].clone()).collect(),
    })
}

/// Recovers every coefficient of a sparse polynomial from scalar
/// evaluations, ordered like `exponents`.
pub fn interpolate_coefficients(
    field: &Field,
    alphas: &[FieldElement],
    exponents: &[u32],
    values: &[FieldElement],
) -> Result<Vec<FieldElement>> {
    if values.len() != alphas.len() {
        return Err(Error::DimensionMismatch("one value per point required".into()));
    }
    let all: Vec<usize> = (0..exponents.len()).collect();
    let rv = solve_general_vandermonde(field, alphas, exponents, &all)?;
    Ok(rv
        .weights
        .iter()
        .map(|w| {
            w.iter()
                .zip(values)
                .fold(FieldElement::ZERO, |acc, (&r, &v)| field.add(acc, field.mul(r, v)))
        })
        .collect())
}
