//! Negativity and success probability.
//!
//! Negativity is `(‖ρ^{T_A}‖₁ - 1) / 2`, so a maximally entangled state
//! inside a two-level sector scores 0.5.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::protocol::BranchSet;
use crate::qutrit::{normalize, DensityMatrix, Level, QutritRegister};

/// Squared-magnitude floor for ratio measures.
pub const MIN_WEIGHT: f64 = 1e-24;

/// Eigenvalues of the partial transpose within this distance of zero are zero.
pub const EIGEN_ZERO: f64 = 1e-12;

/// Allowed deviation of `tr ρ` from one.
pub const TRACE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    PartialTranspose,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub negativity: f64,
    pub success_probability: f64,
    pub method: Method,
}

/// Negativity of `a|xy⟩ + b|yx⟩` with `x ≠ y`: `|a||b| / (|a|² + |b|²)`.
pub fn negativity_sector(a: C64, b: C64) -> Result<f64> {
    let w = a.norm_sqr() + b.norm_sqr();
    if !(w >= MIN_WEIGHT) {
        return Err(Error::ZeroNorm { norm: w.sqrt(), epsilon: MIN_WEIGHT.sqrt() });
    }
    Ok(a.norm() * b.norm() / w)
}

/// Partial transpose over the first qutrit of a two-qutrit matrix.
pub fn partial_transpose(rho: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(9, 9, |r, c| {
        let (i, j) = (r / 3, r % 3);
        let (k, l) = (c / 3, c % 3);
        rho[(3 * k + j, 3 * i + l)]
    })
}

/// Negativity from the spectrum of the partial transpose.
pub fn negativity_partial_transpose(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_atoms() != 2 {
        return Err(invalid("partial-transpose negativity needs a two-qutrit state"));
    }
    let trace = rho.trace();
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::NotNormalized { trace });
    }
    let pt = partial_transpose(rho.matrix());
    let eig = pt.symmetric_eigenvalues();
    let trace_norm: f64 = eig.iter().map(|&v| if v.abs() <= EIGEN_ZERO { 0.0 } else { v.abs() }).sum();
    Ok(((trace_norm - 1.0) / 2.0).max(0.0))
}

/// Negativity of a (possibly unnormalized) two-qutrit pure state.
pub fn pure_state_negativity(state: &QutritRegister) -> Result<f64> {
    let (unit, _) = normalize(state)?;
    negativity_partial_transpose(&DensityMatrix::projector(&unit))
}

/// `Σ_selected |c|² / Σ_all |c|²`.
pub fn weight_ratio(selected: &[C64], all: &[C64]) -> Result<f64> {
    let total: f64 = all.iter().map(|c| c.norm_sqr()).sum();
    if !(total >= MIN_WEIGHT) {
        return Err(Error::ZeroNorm { norm: total.sqrt(), epsilon: MIN_WEIGHT.sqrt() });
    }
    Ok(selected.iter().map(|c| c.norm_sqr()).sum::<f64>() / total)
}

/// Weight of the `selected` kets relative to the whole branch set.
pub fn success_probability(branches: &BranchSet, selected: &[Vec<Level>]) -> Result<f64> {
    let picked: Vec<C64> = selected
        .iter()
        .map(|ket| {
            branches
                .coefficient_of(ket)
                .ok_or_else(|| invalid(format!("ket {ket:?} is not part of the branch set")))
        })
        .collect::<Result<_>>()?;
    let all: Vec<C64> = branches.entries().iter().map(|b| b.amplitude).collect();
    weight_ratio(&picked, &all)
}
