//! Effective atom-atom dynamics after eliminating the two cavity modes.
//!
//! Two atoms sharing a two-mode cavity exchange excitations through virtual
//! photons. The `g`-`e` transition (mode a) yields the complex rate
//! `λ1 = g1² / (Δ - iΓ/2)`, the `f`-`e` transition (mode b) yields
//! `λ2 = g2² / (δ - iγ/2)`, and the pair Hamiltonian is
//!
//! ```text
//! H = (λ1+λ2)(|e⟩⟨e| ⊗ 1 + 1 ⊗ |e⟩⟨e|)
//!   + λ1 (|eg⟩⟨ge| + |ge⟩⟨eg|) + λ2 (|ef⟩⟨fe| + |fe⟩⟨ef|)
//! ```
//!
//! With nonzero dissipation the rates are complex and `H` is symmetric but
//! not Hermitian. Nothing here renormalizes: the conditional state norm can
//! shrink or grow depending on the sign of the effective dissipations.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::expm::matrix_exponential;
use crate::qutrit::{Level, QutritRegister};

pub type PairMatrix = SMatrix<C64, 9, 9>;

/// Rate denominators below this magnitude are rejected.
pub const MIN_DENOMINATOR: f64 = 1e-12;

/// Index of `|xy⟩` in the 9-dimensional pair basis.
pub fn pair_index(x: Level, y: Level) -> usize {
    3 * x.index() + y.index()
}

/// Dimensionless model parameters, all in units of a reference coupling g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Coupling of the g-e transition to mode a.
    #[serde(rename = "g1")]
    pub coupling_a: f64,
    /// Coupling of the f-e transition to mode b.
    #[serde(rename = "g2")]
    pub coupling_b: f64,
    #[serde(rename = "Delta")]
    pub detuning_a: f64,
    #[serde(rename = "delta")]
    pub detuning_b: f64,
    /// Effective dissipation of the g-e channel.
    #[serde(rename = "Gamma")]
    pub dissipation_a: f64,
    #[serde(rename = "gamma")]
    pub dissipation_b: f64,
}

impl ModelParams {
    pub fn new(
        coupling_a: f64,
        coupling_b: f64,
        detuning_a: f64,
        detuning_b: f64,
        dissipation_a: f64,
        dissipation_b: f64,
    ) -> Result<Self> {
        let p = Self { coupling_a, coupling_b, detuning_a, detuning_b, dissipation_a, dissipation_b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.coupling_a,
            self.coupling_b,
            self.detuning_a,
            self.detuning_b,
            self.dissipation_a,
            self.dissipation_b,
        ];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(invalid("model parameters must be finite"));
        }
        if self.coupling_a <= 0.0 || self.coupling_b <= 0.0 {
            return Err(invalid("couplings must be positive"));
        }
        check_denominator(self.detuning_a, self.dissipation_a)?;
        check_denominator(self.detuning_b, self.dissipation_b)?;
        Ok(())
    }

    pub fn rate_a(&self) -> Result<ComplexRate> {
        effective_rate(self.coupling_a, self.detuning_a, self.dissipation_a)
    }

    pub fn rate_b(&self) -> Result<ComplexRate> {
        effective_rate(self.coupling_b, self.detuning_b, self.dissipation_b)
    }

    /// `(λ1, λ2)`.
    pub fn rates(&self) -> Result<(ComplexRate, ComplexRate)> {
        Ok((self.rate_a()?, self.rate_b()?))
    }
}

fn check_denominator(detuning: f64, dissipation: f64) -> Result<()> {
    if C64::new(detuning, -0.5 * dissipation).norm() < MIN_DENOMINATOR {
        return Err(Error::DegenerateDenominator { detuning, dissipation });
    }
    Ok(())
}

/// A complex exchange rate (λ1 or λ2), in units of g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRate(pub C64);

impl ComplexRate {
    pub fn new(re: f64, im: f64) -> Self {
        Self(C64::new(re, im))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

/// `coupling² / (detuning - i·dissipation/2)`.
pub fn effective_rate(coupling: f64, detuning: f64, dissipation: f64) -> Result<ComplexRate> {
    check_denominator(detuning, dissipation)?;
    Ok(ComplexRate(C64::new(coupling * coupling, 0.0) / C64::new(detuning, -0.5 * dissipation)))
}

/// The 9x9 effective pair Hamiltonian in the `(g,e,f)⊗(g,e,f)` basis.
pub fn build_effective_hamiltonian(l1: ComplexRate, l2: ComplexRate) -> PairMatrix {
    use Level::*;
    let (a, b) = (l1.0, l2.0);
    let stark = a + b;
    let mut h = PairMatrix::zeros();
    for x in Level::ALL {
        for y in Level::ALL {
            let excited = (x == E) as u8 + (y == E) as u8;
            h[(pair_index(x, y), pair_index(x, y))] = stark * f64::from(excited);
        }
    }
    h[(pair_index(G, E), pair_index(E, G))] = a;
    h[(pair_index(E, G), pair_index(G, E))] = a;
    h[(pair_index(E, F), pair_index(F, E))] = b;
    h[(pair_index(F, E), pair_index(E, F))] = b;
    h
}

/// Closed-form `exp(-i H T)` for one atom pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPropagator {
    matrix: PairMatrix,
    duration: f64,
}

impl PairPropagator {
    pub fn identity() -> Self {
        Self { matrix: PairMatrix::identity(), duration: 0.0 }
    }

    pub fn matrix(&self) -> &PairMatrix {
        &self.matrix
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn from_matrix(matrix: PairMatrix, duration: f64) -> Self {
        Self { matrix, duration }
    }

    pub fn compose(&self, other: &PairPropagator) -> PairPropagator {
        Self { matrix: self.matrix * other.matrix, duration: self.duration + other.duration }
    }
}

/// Complex sine and cosine through exponentials of `±i z`.
fn sin_cos(z: C64) -> (C64, C64) {
    let i = C64::new(0.0, 1.0);
    let p = (i * z).exp();
    let m = (-i * z).exp();
    ((p - m) / (2.0 * i), (p + m) * 0.5)
}

/// Evolution operator over a signed `duration`.
///
/// Negative durations give the inverse propagator; the two-stage protocol
/// needs them when the second interaction is scheduled before the first
/// one ends (see `protocol`).
pub fn pair_propagator(l1: ComplexRate, l2: ComplexRate, duration: f64) -> Result<PairPropagator> {
    use Level::*;
    if !duration.is_finite() {
        return Err(invalid("duration must be finite"));
    }
    let i = C64::new(0.0, 1.0);
    let (a, b) = (l1.0, l2.0);
    let phase = (-i * (a + b) * duration).exp();
    let mut u = PairMatrix::zeros();
    for dark in [(G, G), (G, F), (F, G), (F, F)] {
        let k = pair_index(dark.0, dark.1);
        u[(k, k)] = C64::new(1.0, 0.0);
    }
    let mut mix = |rate: C64, x: usize, y: usize| {
        let (s, c) = sin_cos(rate * duration);
        u[(x, x)] = phase * c;
        u[(y, y)] = phase * c;
        u[(x, y)] = -i * phase * s;
        u[(y, x)] = -i * phase * s;
    };
    mix(a, pair_index(G, E), pair_index(E, G));
    mix(b, pair_index(E, F), pair_index(F, E));
    let ee = pair_index(E, E);
    u[(ee, ee)] = phase * phase;
    Ok(PairPropagator { matrix: u, duration })
}

/// The same propagator from the general matrix exponential of `-i H T`.
pub fn pair_propagator_by_expm(l1: ComplexRate, l2: ComplexRate, duration: f64) -> Result<PairPropagator> {
    let h = build_effective_hamiltonian(l1, l2);
    let dense = DMatrix::from_column_slice(9, 9, h.as_slice());
    let u = matrix_exponential(&dense, C64::new(0.0, -duration))?;
    Ok(PairPropagator { matrix: PairMatrix::from_column_slice(u.as_slice()), duration })
}

/// Apply `prop` to atoms `(i, j)` of `state`, identity elsewhere.
pub fn apply_pair_propagator(
    state: &QutritRegister,
    positions: (usize, usize),
    prop: &PairPropagator,
) -> Result<QutritRegister> {
    let (pi, pj) = positions;
    let n = state.num_atoms();
    if pi >= pj || pj >= n {
        return Err(invalid(format!("pair ({pi}, {pj}) invalid for {n} atoms")));
    }
    let stride_i = 3usize.pow((n - 1 - pi) as u32);
    let stride_j = 3usize.pow((n - 1 - pj) as u32);
    let amps = state.amplitudes();
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for (k, amp) in amps.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let xi = (k / stride_i) % 3;
        let xj = (k / stride_j) % 3;
        let base = k - xi * stride_i - xj * stride_j;
        let col = 3 * xi + xj;
        for yi in 0..3 {
            for yj in 0..3 {
                let u = prop.matrix[(3 * yi + yj, col)];
                if u.norm_sqr() != 0.0 {
                    out[base + yi * stride_i + yj * stride_j] += u * amp;
                }
            }
        }
    }
    QutritRegister::from_amplitudes(n, out)
}
