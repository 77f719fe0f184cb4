//! Two Λ atoms in a two-mode lossy cavity, without eliminating the modes.
//!
//! Basis order is atom 2 ⊗ atom 3 ⊗ mode a ⊗ mode b, each mode truncated at
//! `n_max` photons. Losses enter as imaginary energies, so the evolution is
//! the no-jump conditional dynamics. The effective pair model is compared
//! against this after post-selecting both modes in vacuum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::effective::{apply_pair_propagator, pair_propagator, ModelParams};
use crate::error::{invalid, Error, Result};
use crate::expm::matrix_exponential;
use crate::qutrit::{normalize, Level, QutritRegister, ZERO_NORM_EPSILON};

/// Acceptance bar on the max trace distance to the effective evolution.
pub const TRACE_DISTANCE_BAR: f64 = 0.05;
/// Acceptance bar on the n_max → n_max+1 change.
pub const TRUNCATION_BAR: f64 = 1e-6;

pub const OMEGA_G: f64 = 0.0;
pub const OMEGA_F: f64 = 1.0;
pub const OMEGA_E: f64 = 30.0;

fn default_n_max() -> usize {
    2
}

/// Spontaneous-emission and leakage rates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossRates {
    pub gamma_g: f64,
    pub gamma_e: f64,
    pub gamma_f: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
}

/// `a - b - c`, set to exactly zero when it is below the rounding noise of the inputs.
fn cancel(a: f64, b: f64, c: f64) -> f64 {
    let r = a - b - c;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if r.abs() <= 4.0 * f64::EPSILON * scale {
        0.0
    } else {
        r
    }
}

impl LossRates {
    pub fn validate(&self) -> Result<()> {
        let all = [self.gamma_g, self.gamma_e, self.gamma_f, self.kappa_a, self.kappa_b];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(invalid("loss rates must be finite and nonnegative"));
        }
        Ok(())
    }

    /// `(Γ, γ) = (γe - γg - κa, γe - γf - κb)`.
    pub fn effective_dissipations(&self) -> (f64, f64) {
        (
            cancel(self.gamma_e, self.gamma_g, self.kappa_a),
            cancel(self.gamma_e, self.gamma_f, self.kappa_b),
        )
    }

    /// Nonnegative rates realizing the given `(Γ, γ)` with lossless modes.
    pub fn realizing(dissipation_a: f64, dissipation_b: f64) -> Self {
        let gamma_e = dissipation_a.max(dissipation_b).max(0.0);
        Self {
            gamma_g: gamma_e - dissipation_a,
            gamma_e,
            gamma_f: gamma_e - dissipation_b,
            kappa_a: 0.0,
            kappa_b: 0.0,
        }
    }
}

/// Couplings, detunings and physical loss rates; the effective dissipations
/// follow from the losses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    pub g1: f64,
    pub g2: f64,
    #[serde(rename = "Delta")]
    pub detuning_a: f64,
    #[serde(rename = "delta")]
    pub detuning_b: f64,
    pub gamma_g: f64,
    pub gamma_e: f64,
    pub gamma_f: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
}

impl PhysicalParams {
    pub fn losses(&self) -> LossRates {
        LossRates {
            gamma_g: self.gamma_g,
            gamma_e: self.gamma_e,
            gamma_f: self.gamma_f,
            kappa_a: self.kappa_a,
            kappa_b: self.kappa_b,
        }
    }

    pub fn effective(&self) -> Result<ModelParams> {
        self.losses().validate()?;
        let (da, db) = self.losses().effective_dissipations();
        ModelParams::new(self.g1, self.g2, self.detuning_a, self.detuning_b, da, db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullParams {
    pub g1: f64,
    pub g2: f64,
    pub omega_a: f64,
    pub omega_b: f64,
    pub omega_g: f64,
    pub omega_e: f64,
    pub omega_f: f64,
    pub gamma_g: f64,
    pub gamma_e: f64,
    pub gamma_f: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

impl FullParams {
    /// Frequencies with `ω_g = 0`, `ω_f = 1`, `ω_e = 30` and mode frequencies
    /// solved from the detunings; losses from [`LossRates::realizing`].
    pub fn for_model(model: &ModelParams, n_max: usize) -> Result<Self> {
        model.validate()?;
        let p = Self {
            g1: model.coupling_a,
            g2: model.coupling_b,
            omega_a: OMEGA_E - OMEGA_G - model.detuning_a,
            omega_b: OMEGA_E - OMEGA_F - model.detuning_b,
            omega_g: OMEGA_G,
            omega_e: OMEGA_E,
            omega_f: OMEGA_F,
            gamma_g: 0.0,
            gamma_e: 0.0,
            gamma_f: 0.0,
            kappa_a: 0.0,
            kappa_b: 0.0,
            n_max,
        }
        .with_losses(LossRates::realizing(model.dissipation_a, model.dissipation_b));
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.g1, self.g2, self.omega_a, self.omega_b, self.omega_g, self.omega_e, self.omega_f];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(invalid("full-model parameters must be finite"));
        }
        if self.g1 < 0.0 || self.g2 < 0.0 {
            return Err(invalid("couplings must be nonnegative"));
        }
        if self.n_max == 0 {
            return Err(invalid("n_max must be at least 1"));
        }
        if self.dim() > crate::expm::MAX_DIM {
            return Err(invalid(format!("n_max {} gives dimension {} above {}", self.n_max, self.dim(), crate::expm::MAX_DIM)));
        }
        self.losses().validate()
    }

    pub fn losses(&self) -> LossRates {
        LossRates {
            gamma_g: self.gamma_g,
            gamma_e: self.gamma_e,
            gamma_f: self.gamma_f,
            kappa_a: self.kappa_a,
            kappa_b: self.kappa_b,
        }
    }

    pub fn with_losses(&self, l: LossRates) -> Self {
        Self {
            gamma_g: l.gamma_g,
            gamma_e: l.gamma_e,
            gamma_f: l.gamma_f,
            kappa_a: l.kappa_a,
            kappa_b: l.kappa_b,
            ..*self
        }
    }

    pub fn with_n_max(&self, n_max: usize) -> Self {
        Self { n_max, ..*self }
    }

    pub fn dim(&self) -> usize {
        9 * (self.n_max + 1) * (self.n_max + 1)
    }

    /// `(Δ, δ) = (ω_e - ω_g - ω_a, ω_e - ω_f - ω_b)`.
    pub fn detunings(&self) -> (f64, f64) {
        (self.omega_e - self.omega_g - self.omega_a, self.omega_e - self.omega_f - self.omega_b)
    }

    /// Effective parameters implied by this configuration.
    pub fn effective(&self) -> Result<ModelParams> {
        let (dt_a, dt_b) = self.detunings();
        let (ds_a, ds_b) = self.losses().effective_dissipations();
        ModelParams::new(self.g1, self.g2, dt_a, dt_b, ds_a, ds_b)
    }

    fn level_energy(&self, level: Level) -> C64 {
        match level {
            Level::G => C64::new(self.omega_g, -0.5 * self.gamma_g),
            Level::E => C64::new(self.omega_e, -0.5 * self.gamma_e),
            Level::F => C64::new(self.omega_f, -0.5 * self.gamma_f),
        }
    }

    fn index(&self, x2: Level, x3: Level, na: usize, nb: usize) -> usize {
        let m = self.n_max + 1;
        ((x2.index() * 3 + x3.index()) * m + na) * m + nb
    }
}

/// State over atom 2 ⊗ atom 3 ⊗ mode a ⊗ mode b.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRegister {
    n_max: usize,
    amplitudes: DVector<C64>,
}

impl FullRegister {
    /// `pair ⊗ |0_a 0_b⟩`.
    pub fn from_pair(pair: &QutritRegister, n_max: usize) -> Result<Self> {
        if pair.num_atoms() != 2 {
            return Err(invalid("the full model holds two atoms"));
        }
        let m = n_max + 1;
        let mut amps = DVector::zeros(9 * m * m);
        for (k, a) in pair.amplitudes().iter().enumerate() {
            amps[k * m * m] = *a;
        }
        Ok(Self { n_max, amplitudes: amps })
    }

    pub fn from_amplitudes(n_max: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let m = n_max + 1;
        if amplitudes.len() != 9 * m * m {
            return Err(invalid(format!("expected {} amplitudes, got {}", 9 * m * m, amplitudes.len())));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("amplitudes must be finite"));
        }
        Ok(Self { n_max, amplitudes: DVector::from_vec(amplitudes) })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    fn photons(&self, k: usize) -> (usize, usize) {
        let m = self.n_max + 1;
        ((k / m) % m, k % m)
    }

    /// Unnormalized two-atom state with both modes projected on vacuum.
    pub fn vacuum_projection(&self) -> QutritRegister {
        let m = self.n_max + 1;
        let amps = (0..9).map(|k| self.amplitudes[k * m * m]).collect();
        QutritRegister::from_amplitudes(2, amps).expect("finite amplitudes")
    }

    /// Weight with exactly `n` photons in mode a (`mode == 0`) or b.
    pub fn photon_weight(&self, mode: usize, n: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let (na, nb) = self.photons(*k);
                if mode == 0 { na == n } else { nb == n }
            })
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }
}

pub fn build_full_hamiltonian(p: &FullParams) -> DMatrix<C64> {
    let d = p.dim();
    let m = p.n_max + 1;
    let mut h = DMatrix::zeros(d, d);
    let wa = C64::new(p.omega_a, -0.5 * p.kappa_a);
    let wb = C64::new(p.omega_b, -0.5 * p.kappa_b);
    for x2 in Level::ALL {
        for x3 in Level::ALL {
            for na in 0..m {
                for nb in 0..m {
                    let k = p.index(x2, x3, na, nb);
                    h[(k, k)] = p.level_energy(x2) + p.level_energy(x3) + wa * na as f64 + wb * nb as f64;
                }
            }
        }
    }
    // g1 (a σ_eg + a† σ_ge) and g2 (b σ_ef + b† σ_fe) on each atom; the
    // loop visits each absorbing transition and adds its emitting partner
    let mut link = |from: usize, to: usize, amp: f64| {
        h[(to, from)] += C64::new(amp, 0.0);
        h[(from, to)] += C64::new(amp, 0.0);
    };
    for x2 in Level::ALL {
        for x3 in Level::ALL {
            for na in 0..m {
                for nb in 0..m {
                    let from = p.index(x2, x3, na, nb);
                    let sa = (na as f64).sqrt();
                    let sb = (nb as f64).sqrt();
                    if na > 0 {
                        if x2 == Level::G {
                            link(from, p.index(Level::E, x3, na - 1, nb), p.g1 * sa);
                        }
                        if x3 == Level::G {
                            link(from, p.index(x2, Level::E, na - 1, nb), p.g1 * sa);
                        }
                    }
                    if nb > 0 {
                        if x2 == Level::F {
                            link(from, p.index(Level::E, x3, na, nb - 1), p.g2 * sb);
                        }
                        if x3 == Level::F {
                            link(from, p.index(x2, Level::E, na, nb - 1), p.g2 * sb);
                        }
                    }
                }
            }
        }
    }
    h
}

/// `exp(-i H T) · initial`.
pub fn evolve_full(p: &FullParams, initial: &FullRegister, time: f64) -> Result<FullRegister> {
    p.validate()?;
    if !(time >= 0.0) || !time.is_finite() {
        return Err(invalid("evolution time must be finite and nonnegative"));
    }
    if initial.n_max != p.n_max {
        return Err(invalid("register truncation differs from parameters"));
    }
    let u = matrix_exponential(&build_full_hamiltonian(p), C64::new(0.0, -time))?;
    Ok(FullRegister { n_max: p.n_max, amplitudes: u * &initial.amplitudes })
}

/// Vacuum-conditioned pair state with the bare atomic energies divided out,
/// which puts it in the frame of the effective model.
fn conditioned_pair(p: &FullParams, pair: &QutritRegister, time: f64) -> Result<QutritRegister> {
    let full = evolve_full(p, &FullRegister::from_pair(pair, p.n_max)?, time)?;
    let vac = full.vacuum_projection();
    let i = C64::new(0.0, 1.0);
    let amps = vac
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let e = p.level_energy(Level::from_index(k / 3).unwrap()) + p.level_energy(Level::from_index(k % 3).unwrap());
            a * (i * e * time).exp()
        })
        .collect();
    QutritRegister::from_amplitudes(2, amps)
}

/// `sqrt(1 - |⟨a|b⟩|²)` of the normalized states. Blind to global phase.
pub fn pure_trace_distance(a: &QutritRegister, b: &QutritRegister) -> Result<f64> {
    let (a, _) = normalize(a)?;
    let (b, _) = normalize(b)?;
    Ok((1.0 - a.inner(&b).norm_sqr()).max(0.0).sqrt())
}

fn check_inputs(p: &FullParams, pair_initial: &QutritRegister, t_grid: &[f64]) -> Result<()> {
    p.validate()?;
    if pair_initial.num_atoms() != 2 {
        return Err(invalid("initial pair must have two atoms"));
    }
    if (pair_initial.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { trace: pair_initial.norm_sqr() });
    }
    if t_grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(invalid("grid times must be finite and nonnegative"));
    }
    Ok(())
}

/// Per grid time: distance to the effective evolution and, if `finer` is
/// given, distance to the run with that truncation.
fn grid_distances(
    p: &FullParams,
    pair_initial: &QutritRegister,
    t_grid: &[f64],
    finer: Option<&FullParams>,
) -> Result<Vec<(f64, f64)>> {
    let (l1, l2) = p.effective()?.rates()?;
    t_grid
        .par_iter()
        .map(|&t| {
            let full = conditioned_pair(p, pair_initial, t)?;
            if full.norm() < ZERO_NORM_EPSILON {
                return Err(Error::ZeroNorm { norm: full.norm(), epsilon: ZERO_NORM_EPSILON });
            }
            let eff = apply_pair_propagator(pair_initial, (0, 1), &pair_propagator(l1, l2, t)?)?;
            let trunc = match finer {
                Some(f) => pure_trace_distance(&full, &conditioned_pair(f, pair_initial, t)?)?,
                None => 0.0,
            };
            Ok((pure_trace_distance(&full, &eff)?, trunc))
        })
        .collect()
}

/// Max trace distance to the effective evolution over the grid, without the truncation rerun.
pub fn max_trace_distance(p: &FullParams, pair_initial: &QutritRegister, t_grid: &[f64]) -> Result<f64> {
    check_inputs(p, pair_initial, t_grid)?;
    Ok(grid_distances(p, pair_initial, t_grid, None)?.iter().map(|r| r.0).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub params: FullParams,
    pub effective: ModelParams,
    pub initial: String,
    pub t_grid: Vec<f64>,
    /// Trace distance to the effective evolution at each grid time.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// Max trace distance between the `n_max` and `n_max + 1` runs.
    pub truncation_sensitivity: f64,
    pub threshold: f64,
    pub truncation_threshold: f64,
    pub comparison: String,
    pub pass: bool,
}

pub fn compare_effective(p: &FullParams, pair_initial: &QutritRegister, t_grid: &[f64]) -> Result<ComparisonReport> {
    check_inputs(p, pair_initial, t_grid)?;
    let effective = p.effective()?;
    let finer = p.with_n_max(p.n_max + 1);
    finer.validate()?;

    let rows = grid_distances(p, pair_initial, t_grid, Some(&finer))?;

    let deviations: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    let truncation_sensitivity = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let initial = pair_initial
        .support()
        .iter()
        .map(|(k, a)| format!("({:+.6}{:+.6}i)|{}⟩", a.re, a.im, crate::qutrit::ket_label(k)))
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(ComparisonReport {
        params: *p,
        effective,
        initial,
        t_grid: t_grid.to_vec(),
        deviations,
        max_deviation,
        truncation_sensitivity,
        threshold: TRACE_DISTANCE_BAR,
        truncation_threshold: TRUNCATION_BAR,
        comparison: "vacuum post-selection of both modes, bare atomic energies removed, \
                     normalized, pure-state trace distance (global phase does not enter)"
            .into(),
        pass: max_deviation < TRACE_DISTANCE_BAR && truncation_sensitivity < TRUNCATION_BAR,
    })
}

/// Evenly spaced grid over `[0, stop]` with `points` entries.
pub fn uniform_grid(stop: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|k| stop * k as f64 / (n - 1) as f64).collect()
}
