//! Stability of a fixed point from its drift matrix.
//!
//! The characteristic polynomial comes from the Faddeev–LeVerrier recursion;
//! the verdict comes from the Routh array. Both run in double-double
//! arithmetic: the drift matrices here have eigenvalues spread over four
//! decades, and in plain f64 the trailing coefficients and the late Routh
//! pivots lose every significant digit. The stability margin is read off the
//! eigenvalues of the real Schur form.

use nalgebra::{DMatrix, Matrix6};
use serde::Serialize;
use twofloat::TwoFloat;

use crate::tolerances::ROUTH_ZERO;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    /// All roots in the open left half-plane.
    pub stable: bool,
    /// `−max Re λ`, in the units of the matrix entries. Positive when stable.
    pub margin: f64,
    /// A Routh pivot vanished and had to be replaced by ε.
    pub marginal: bool,
}

fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

fn characteristic_polynomial_dd(a: &DMatrix<f64>) -> Vec<TwoFloat> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "characteristic polynomial needs a square matrix");
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(dd(1.0));
    // M_k = A·M_{k−1} + c_{k−1}·I, c_k = −tr(A·M_k)/k, with M_0 = 0.
    let mut m = vec![dd(0.0); n * n];
    for k in 1..=n {
        let mut next = vec![dd(0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = if i == j { coeffs[k - 1] } else { dd(0.0) };
                for l in 0..n {
                    acc += m[l * n + j] * a[(i, l)];
                }
                next[i * n + j] = acc;
            }
        }
        m = next;
        let mut trace = dd(0.0);
        for i in 0..n {
            for l in 0..n {
                trace += m[l * n + i] * a[(i, l)];
            }
        }
        coeffs.push(-trace / k as f64);
    }
    coeffs
}

/// Coefficients `[1, c₁, …, c_n]` of `det(sI − A) = sⁿ + c₁sⁿ⁻¹ + … + c_n`.
pub fn characteristic_polynomial(a: &DMatrix<f64>) -> Vec<f64> {
    characteristic_polynomial_dd(a).into_iter().map(f64::from).collect()
}

/// Result of building a Routh array.
#[derive(Debug, Clone, PartialEq)]
pub struct RouthTable {
    pub first_column: Vec<f64>,
    pub sign_changes: usize,
    pub marginal: bool,
}

/// Routh array of a polynomial given highest power first.
///
/// Each entry carries the magnitude of the terms it was computed from; a
/// pivot that has cancelled to below `ROUTH_ZERO` of that magnitude is
/// treated as zero and replaced by `+ε`, with `ε = ROUTH_ZERO·max|cᵢ|`.
pub fn routh_table(coeffs: &[f64]) -> RouthTable {
    let coeffs: Vec<TwoFloat> = coeffs.iter().copied().map(dd).collect();
    routh_table_dd(&coeffs)
}

fn routh_table_dd(coeffs: &[TwoFloat]) -> RouthTable {
    let degree = coeffs.len().saturating_sub(1);
    let width = degree / 2 + 1;
    let scale = coeffs
        .iter()
        .fold(0.0f64, |m, c| m.max(f64::from(c.abs())))
        .max(f64::MIN_POSITIVE);
    let eps = dd(ROUTH_ZERO * scale);
    let zero = (dd(0.0), 0.0);

    let row = |start: usize| -> Vec<(TwoFloat, f64)> {
        (0..width)
            .map(|j| {
                let c = coeffs.get(start + 2 * j).copied().unwrap_or(dd(0.0));
                (c, f64::from(c.abs()))
            })
            .collect()
    };
    let mut prev = row(0);
    let mut curr = row(1);
    let mut marginal = false;
    let mut first_column = vec![f64::from(prev[0].0)];

    for _ in 1..=degree {
        if f64::from(curr[0].0.abs()) <= ROUTH_ZERO * curr[0].1 {
            marginal = true;
            curr[0] = (eps, f64::from(eps));
        }
        first_column.push(f64::from(curr[0].0));
        let ratio = prev[0].0 / curr[0].0;
        let next: Vec<(TwoFloat, f64)> = (0..width)
            .map(|j| {
                let (upper, upper_mag) = prev.get(j + 1).copied().unwrap_or(zero);
                let (lower, lower_mag) = curr.get(j + 1).copied().unwrap_or(zero);
                (upper - ratio * lower, upper_mag + f64::from(ratio.abs()) * lower_mag)
            })
            .collect();
        prev = curr;
        curr = next;
    }

    let sign_changes = first_column
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    RouthTable {
        first_column,
        sign_changes,
        marginal,
    }
}

/// Stability of a general square matrix.
pub fn classify_matrix(a: &DMatrix<f64>) -> StabilityVerdict {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return StabilityVerdict {
            stable: false,
            margin: 0.0,
            marginal: true,
        };
    }
    // Verdict and root signs are invariant under A → A/scale.
    let scaled = a / scale;
    let table = routh_table_dd(&characteristic_polynomial_dd(&scaled));
    let max_re = scaled
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    StabilityVerdict {
        stable: table.sign_changes == 0 && !table.marginal,
        margin: -max_re * scale,
        marginal: table.marginal,
    }
}

pub fn classify_stability(a: &Matrix6<f64>) -> StabilityVerdict {
    classify_matrix(&DMatrix::from_column_slice(6, 6, a.as_slice()))
}
