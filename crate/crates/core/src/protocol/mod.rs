//! Two-stage entanglement swapping across eight Λ-type atoms.
//!
//! Atoms (1,2), (3,4), (5,6), (7,8) start in the qutrit Bell state. Stage
//! one lets atoms (2,3) and (6,7) interact for a time `t` and measures them,
//! leaving (1,4) and (5,8) entangled. Stage two lets atoms (4,5) interact
//! from `t` until the readout time `tau` and measures them, leaving (1,8)
//! entangled.
//!
//! `tau` is a point on the protocol clock, not a duration: the second
//! interaction lasts `tau - t`, which is negative (backward evolution) when
//! `tau < t`. The closed forms in [`closed_form`] share this convention.

pub mod closed_form;

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::effective::{apply_pair_propagator, pair_propagator, ComplexRate, ModelParams};
use crate::error::{invalid, Error, Result};
use crate::measures::{negativity_sector, pure_state_negativity, weight_ratio, Method};
use crate::qutrit::{
    ket_label, normalize, parse_ket, project_levels, tensor_product, Level, QutritRegister, ZERO_NORM_EPSILON,
};

pub use closed_form::{stage_one_coefficients, stage_two_coefficients, StageOneCoefficients};

/// `(e^{-iπ/4}|gg⟩ - i e^{-iπ/4}|ee⟩ - i|ff⟩) / √3`.
pub fn initial_bell_pair() -> QutritRegister {
    let s = 1.0 / 3f64.sqrt();
    let q = C64::from_polar(s, -FRAC_PI_4);
    let i = C64::new(0.0, 1.0);
    QutritRegister::from_terms(2, &[("gg", q), ("ee", -i * q), ("ff", -i * s)]).expect("static Bell state")
}

/// Per-cavity parameters. Usually one set is used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepeaterParams {
    /// Cavity shared by atoms (2,3), also used for the (4,5) interaction.
    pub inner: ModelParams,
    /// Cavity shared by atoms (6,7).
    pub outer: ModelParams,
}

impl RepeaterParams {
    pub fn uniform(params: ModelParams) -> Self {
        Self { inner: params, outer: params }
    }

    pub fn is_uniform(&self) -> bool {
        self.inner == self.outer
    }
}

/// Which stage-one measurement outcome produced a two-atom branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StageOneLabel {
    #[serde(rename = "psi", alias = "Psi")]
    Psi,
    #[serde(rename = "psi1", alias = "PsiP")]
    PsiP,
    #[serde(rename = "psi2", alias = "PsiPP")]
    PsiPP,
    #[serde(rename = "psi3", alias = "PsiPPP")]
    PsiPPP,
}

impl StageOneLabel {
    pub const ALL: [StageOneLabel; 4] = [Self::Psi, Self::PsiP, Self::PsiPP, Self::PsiPPP];

    /// Measured levels of the middle pair.
    pub fn outcome(self) -> (Level, Level) {
        use Level::*;
        match self {
            Self::Psi => (E, G),
            Self::PsiP => (G, E),
            Self::PsiPP => (E, F),
            Self::PsiPPP => (F, E),
        }
    }

    pub fn from_outcome(outcome: (Level, Level)) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.outcome() == outcome)
    }

    /// Two-level sector the residual lives in: `(g, e)` or `(e, f)`.
    pub fn sector(self) -> (Level, Level) {
        match self {
            Self::Psi | Self::PsiP => (Level::G, Level::E),
            Self::PsiPP | Self::PsiPPP => (Level::E, Level::F),
        }
    }
}

impl fmt::Display for StageOneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Psi => "Psi",
            Self::PsiP => "Psi'",
            Self::PsiPP => "Psi''",
            Self::PsiPPP => "Psi'''",
        };
        f.write_str(s)
    }
}

/// Unnormalized stage-one residual on an outer pair.
#[derive(Debug, Clone, PartialEq)]
pub struct StageOneOutcome {
    pub label: StageOneLabel,
    pub residual: QutritRegister,
    pub branch_weight: f64,
    pub t: f64,
}

/// Pairing of the (1,4) and (5,8) branches entering stage two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwapCase {
    pub left: StageOneLabel,
    pub right: StageOneLabel,
}

const NUMBERED_CASES: [(StageOneLabel, StageOneLabel); 8] = {
    use StageOneLabel::*;
    [
        (Psi, Psi),
        (Psi, PsiP),
        (PsiP, Psi),
        (PsiP, PsiP),
        (PsiPP, PsiPP),
        (PsiPP, PsiPPP),
        (PsiPPP, PsiPP),
        (PsiPPP, PsiPPP),
    ]
};

impl SwapCase {
    pub fn new(left: StageOneLabel, right: StageOneLabel) -> Self {
        Self { left, right }
    }

    /// One of the eight same-sector pairings, numbered 1..=8.
    pub fn numbered(index: u8) -> Result<Self> {
        let (left, right) = *NUMBERED_CASES
            .get((index as usize).wrapping_sub(1))
            .ok_or_else(|| invalid(format!("case index {index} is not in 1..=8")))?;
        Ok(Self { left, right })
    }

    /// `Some(1..=8)` for the same-sector pairings, `None` for the eight extended ones.
    pub fn index(&self) -> Option<u8> {
        NUMBERED_CASES.iter().position(|&(l, r)| l == self.left && r == self.right).map(|i| i as u8 + 1)
    }

    pub fn is_extended(&self) -> bool {
        self.index().is_none()
    }

    /// All sixteen pairings, the eight numbered ones first.
    pub fn all() -> Vec<SwapCase> {
        let mut out: Vec<SwapCase> = (1..=8).map(|k| SwapCase::numbered(k).unwrap()).collect();
        for l in StageOneLabel::ALL {
            for r in StageOneLabel::ALL {
                let c = SwapCase::new(l, r);
                if c.is_extended() {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Outcomes of atoms (4,5) reported for this case: the unprimed one first.
    pub fn outcomes(&self) -> [(Level, Level); 2] {
        use Level::*;
        match self.left.sector() {
            (G, E) => [(E, G), (G, E)],
            _ => [(E, F), (F, E)],
        }
    }
}

impl fmt::Display for SwapCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(k) => write!(f, "case {k} ({} x {})", self.left, self.right),
            None => write!(f, "extended ({} x {})", self.left, self.right),
        }
    }
}

/// One term of the stage-two state on atoms (1, 4, 5, 8).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub ket: [Level; 4],
    pub amplitude: C64,
}

/// Labeled stage-two amplitudes. For numbered cases the entries follow the
/// `B^k_1..B^k_6` order of [`closed_form::stage_two_kets`].
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    entries: Vec<Branch>,
    case: SwapCase,
    t: f64,
    tau: f64,
    stage_one_weights: (f64, f64),
}

impl BranchSet {
    pub fn entries(&self) -> &[Branch] {
        &self.entries
    }

    pub fn case(&self) -> SwapCase {
        self.case
    }

    pub fn times(&self) -> (f64, f64) {
        (self.t, self.tau)
    }

    /// Squared norms of the (1,4) and (5,8) stage-one branches.
    pub fn stage_one_weights(&self) -> (f64, f64) {
        self.stage_one_weights
    }

    /// `B_i`, 1-based.
    pub fn coefficient(&self, i: usize) -> Option<C64> {
        i.checked_sub(1).and_then(|k| self.entries.get(k)).map(|b| b.amplitude)
    }

    pub fn coefficient_of(&self, ket: &[Level]) -> Option<C64> {
        self.entries.iter().find(|b| b.ket[..] == *ket).map(|b| b.amplitude)
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|b| b.amplitude.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for b in &mut out.entries {
            b.amplitude *= factor;
        }
        out
    }

    pub fn to_register(&self) -> QutritRegister {
        let mut r = QutritRegister::zeros(4).expect("four atoms");
        let mut amps = r.clone().into_amplitudes();
        for b in &self.entries {
            amps[r.index_of(&b.ket)] += b.amplitude;
        }
        r = QutritRegister::from_amplitudes(4, amps).expect("finite amplitudes");
        r
    }
}

/// Normalized (1,8) pair after the stage-two measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalPair {
    pub case: SwapCase,
    /// Measured levels of atoms (4,5).
    pub outcome: (Level, Level),
    pub t: f64,
    pub tau: f64,
    pub state: QutritRegister,
    pub negativity: f64,
    pub method: Method,
    /// Selected weight over the weight of all stage-two branches.
    pub success_probability: f64,
    /// Selected weight of the stage-two state grown from unit-norm inputs,
    /// without dividing by the total.
    pub absolute_probability: f64,
    pub stage_one_weights: (f64, f64),
}

impl FinalPair {
    /// Amplitudes of the two-level sector `(|xy⟩, |yx⟩)` the pair lives in, if any.
    pub fn sector_amplitudes(&self) -> Option<(C64, C64)> {
        sector_of(&self.state)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("stage-one time must be finite and nonnegative"));
    }
    Ok(())
}

/// Bell ⊗ Bell evolved on atoms (2,3) for time `t`; atoms ordered (1,2,3,4).
pub fn stage_one_state(params: &ModelParams, t: f64) -> Result<QutritRegister> {
    check_t(t)?;
    let (l1, l2) = params.rates()?;
    stage_one_state_with_rates(l1, l2, t)
}

fn stage_one_state_with_rates(l1: ComplexRate, l2: ComplexRate, t: f64) -> Result<QutritRegister> {
    let bell = initial_bell_pair();
    let start = tensor_product(&bell, &bell)?;
    apply_pair_propagator(&start, (1, 2), &pair_propagator(l1, l2, t)?)
}

/// Measure atoms (2,3) of a stage-one state.
pub fn stage_one_measure(state: &QutritRegister, label: StageOneLabel, t: f64) -> Result<StageOneOutcome> {
    if state.num_atoms() != 4 {
        return Err(invalid("stage-one measurement needs a four-atom state"));
    }
    let (x, y) = label.outcome();
    let (residual, branch_weight) = project_levels(state, &[1, 2], &[x, y])?;
    if !(branch_weight.sqrt() >= ZERO_NORM_EPSILON) {
        return Err(Error::ZeroNorm { norm: branch_weight.sqrt(), epsilon: ZERO_NORM_EPSILON });
    }
    Ok(StageOneOutcome { label, residual, branch_weight, t })
}

/// Stage-two state through the propagator pipeline.
pub fn stage_two_state(case: SwapCase, params: &ModelParams, t: f64, tau: f64) -> Result<BranchSet> {
    stage_two_state_with(case, &RepeaterParams::uniform(*params), t, tau)
}

pub fn stage_two_state_with(case: SwapCase, params: &RepeaterParams, t: f64, tau: f64) -> Result<BranchSet> {
    let (l1, l2) = params.inner.rates()?;
    let outer = params.outer.rates()?;
    stage_two_with_rates(case, (l1, l2), outer, t, tau)
}

fn stage_two_with_rates(
    case: SwapCase,
    inner: (ComplexRate, ComplexRate),
    outer: (ComplexRate, ComplexRate),
    t: f64,
    tau: f64,
) -> Result<BranchSet> {
    check_t(t)?;
    if !tau.is_finite() {
        return Err(invalid("tau must be finite"));
    }
    let left_state = stage_one_state_with_rates(inner.0, inner.1, t)?;
    let right_state = if outer == inner { left_state.clone() } else { stage_one_state_with_rates(outer.0, outer.1, t)? };
    let left = stage_one_measure(&left_state, case.left, t)?;
    let right = stage_one_measure(&right_state, case.right, t)?;
    let (l, _) = normalize(&left.residual)?;
    let (r, _) = normalize(&right.residual)?;
    // atoms (1,4) ⊗ (5,8); atoms 4 and 5 sit at positions 1 and 2
    let joint = tensor_product(&l, &r)?;
    let evolved = apply_pair_propagator(&joint, (1, 2), &pair_propagator(inner.0, inner.1, tau - t)?)?;

    let entries = match case.index() {
        Some(k) => closed_form::stage_two_kets(k)?
            .iter()
            .map(|label| {
                let lv = parse_ket(label)?;
                Ok(Branch { ket: [lv[0], lv[1], lv[2], lv[3]], amplitude: evolved.amplitude(&lv) })
            })
            .collect::<Result<Vec<_>>>()?,
        None => evolved
            .support()
            .into_iter()
            .map(|(lv, amplitude)| Branch { ket: [lv[0], lv[1], lv[2], lv[3]], amplitude })
            .collect(),
    };
    Ok(BranchSet { entries, case, t, tau, stage_one_weights: (left.branch_weight, right.branch_weight) })
}

/// Stage-two state assembled from the closed-form coefficients.
pub fn stage_two_closed_form(case: SwapCase, params: &ModelParams, t: f64, tau: f64) -> Result<BranchSet> {
    let k = case.index().ok_or_else(|| invalid("closed forms exist only for cases 1..=8"))?;
    let b = stage_two_coefficients(k, params, t, tau)?;
    let entries = closed_form::stage_two_kets(k)?
        .iter()
        .zip(b)
        .map(|(label, amplitude)| {
            let lv = parse_ket(label)?;
            Ok(Branch { ket: [lv[0], lv[1], lv[2], lv[3]], amplitude })
        })
        .collect::<Result<Vec<_>>>()?;
    let a = stage_one_coefficients(params, t)?;
    let weight = |label: StageOneLabel| {
        let (i, j) = match label {
            StageOneLabel::Psi => (2, 5),
            StageOneLabel::PsiP => (3, 6),
            StageOneLabel::PsiPP => (8, 11),
            StageOneLabel::PsiPPP => (9, 12),
        };
        a.a(i).norm_sqr() + a.a(j).norm_sqr()
    };
    Ok(BranchSet { entries, case, t, tau, stage_one_weights: (weight(case.left), weight(case.right)) })
}

fn sector_of(state: &QutritRegister) -> Option<(C64, C64)> {
    let support = state.support();
    let kets: Vec<&Vec<Level>> = support.iter().map(|(k, _)| k).collect();
    match kets.as_slice() {
        [k] if k[0] != k[1] => Some((support[0].1, C64::new(0.0, 0.0))),
        [k1, k2] if k1[0] != k1[1] && k1[0] == k2[1] && k1[1] == k2[0] => Some((support[0].1, support[1].1)),
        _ => None,
    }
}

/// Measure atoms (4,5) and report the (1,8) pair.
pub fn stage_two_measure(branches: &BranchSet, outcome: (Level, Level)) -> Result<FinalPair> {
    let mut residual = vec![C64::new(0.0, 0.0); 9];
    let mut selected = Vec::new();
    for b in branches.entries() {
        if (b.ket[1], b.ket[2]) == outcome {
            residual[3 * b.ket[0].index() + b.ket[3].index()] += b.amplitude;
            selected.push(b.amplitude);
        }
    }
    let residual = QutritRegister::from_amplitudes(2, residual)?;
    let (state, _) = normalize(&residual)?;
    let all: Vec<C64> = branches.entries().iter().map(|b| b.amplitude).collect();
    let success_probability = weight_ratio(&selected, &all)?;
    let absolute_probability = residual.norm_sqr();
    let (negativity, method) = match sector_of(&residual) {
        Some((a, b)) => (negativity_sector(a, b)?, Method::ClosedForm),
        None => (pure_state_negativity(&residual)?, Method::PartialTranspose),
    };
    let (t, tau) = branches.times();
    Ok(FinalPair {
        case: branches.case(),
        outcome,
        t,
        tau,
        state,
        negativity,
        method,
        success_probability,
        absolute_probability,
        stage_one_weights: branches.stage_one_weights(),
    })
}

/// Which construction of the stage-two state to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    #[default]
    Propagator,
    ClosedForm,
}

pub fn run_protocol(
    params: &ModelParams,
    t: f64,
    tau: f64,
    case: SwapCase,
    outcome: (Level, Level),
) -> Result<FinalPair> {
    run_protocol_via(Route::Propagator, &RepeaterParams::uniform(*params), t, tau, case, outcome)
}

pub fn run_protocol_via(
    route: Route,
    params: &RepeaterParams,
    t: f64,
    tau: f64,
    case: SwapCase,
    outcome: (Level, Level),
) -> Result<FinalPair> {
    let branches = match route {
        Route::Propagator => stage_two_state_with(case, params, t, tau)?,
        Route::ClosedForm => {
            if !params.is_uniform() {
                return Err(invalid("closed forms assume one parameter set for both cavities"));
            }
            stage_two_closed_form(case, &params.inner, t, tau)?
        }
    };
    stage_two_measure(&branches, outcome)
}

/// Parse `"eg"`-style outcome labels.
pub fn parse_outcome(label: &str) -> Result<(Level, Level)> {
    match parse_ket(label)?.as_slice() {
        [x, y] => Ok((*x, *y)),
        _ => Err(invalid(format!("outcome `{label}` must name two levels"))),
    }
}

pub fn outcome_label(outcome: (Level, Level)) -> String {
    ket_label(&[outcome.0, outcome.1])
}

#[doc(hidden)]
pub mod testing {
    //! Hooks for mutation checks of the validation suite.
    use super::*;

    /// Stage-two state with explicit rates, bypassing [`ModelParams`].
    pub fn stage_two_with_rates(
        case: SwapCase,
        rates: (ComplexRate, ComplexRate),
        t: f64,
        tau: f64,
    ) -> Result<BranchSet> {
        super::stage_two_with_rates(case, rates, rates, t, tau)
    }

    pub fn stage_one_with_rates(rates: (ComplexRate, ComplexRate), t: f64) -> Result<QutritRegister> {
        check_t(t)?;
        super::stage_one_state_with_rates(rates.0, rates.1, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lossless(delta: f64) -> ModelParams {
        ModelParams::new(1.0, 2.0, delta, 3.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn bell_pair() {
        let b = initial_bell_pair();
        let s3 = 3f64.sqrt();
        assert!((b.amp("gg") - C64::from_polar(1.0, -FRAC_PI_4) / s3).norm() < 1e-15);
        assert_eq!(b.amp("ge"), c(0.0, 0.0));
        assert!((b.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_product_amplitude() {
        let b = initial_bell_pair();
        let bb = tensor_product(&b, &b).unwrap();
        let want = c(0.0, -1.0 / 3.0) * C64::from_polar(1.0, -PI / 2.0);
        assert!((bb.amp("ggee") - want).norm() < 1e-15);
    }

    #[test]
    fn stage_one_support_is_thirteen_kets() {
        let p = ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 1.0).unwrap();
        let s = stage_one_state(&p, 1.3).unwrap();
        let support: Vec<String> = s.support().iter().map(|(k, _)| ket_label(k)).collect();
        let mut want: Vec<String> = closed_form::stage_one_kets().iter().map(|s| s.to_string()).collect();
        want.sort_by_key(|k| crate::qutrit::levels_to_index(&parse_ket(k).unwrap()));
        assert_eq!(support, want);
        assert!((s.amp("gggg") - c(0.0, -1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn stage_one_is_norm_preserving_without_loss() {
        for t in [0.0, 0.4, 3.0, 17.0] {
            assert!((stage_one_state(&lossless(6.0), t).unwrap().norm_sqr() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn stage_one_residuals() {
        let p = ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 1.0).unwrap();
        let t = 0.9;
        let s = stage_one_state(&p, t).unwrap();
        let a = stage_one_coefficients(&p, t).unwrap();
        let psi = stage_one_measure(&s, StageOneLabel::Psi, t).unwrap();
        assert!((psi.residual.amp("ge") - a.a(2)).norm() < 1e-14);
        assert!((psi.residual.amp("eg") - a.a(5)).norm() < 1e-14);
        assert!((psi.branch_weight - a.a(2).norm_sqr() - a.a(5).norm_sqr()).abs() < 1e-14);
        let ppp = stage_one_measure(&s, StageOneLabel::PsiPPP, t).unwrap();
        assert!((ppp.residual.amp("ef") - a.a(9)).norm() < 1e-14);
        assert!((ppp.residual.amp("fe") - a.a(12)).norm() < 1e-14);
    }

    #[test]
    fn stage_one_at_time_zero_leaves_product_ket() {
        let p = lossless(6.0);
        let s = stage_one_state(&p, 0.0).unwrap();
        let psi = stage_one_measure(&s, StageOneLabel::Psi, 0.0).unwrap();
        assert!((psi.branch_weight - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(psi.residual.amp("ge"), c(0.0, 0.0));
        assert!(psi.residual.amp("eg").norm() > 0.3);
        let (unit, _) = normalize(&psi.residual).unwrap();
        assert!((unit.amp("eg").norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stage_one_measure_rejects_wrong_size() {
        let two = initial_bell_pair();
        assert!(stage_one_measure(&two, StageOneLabel::Psi, 0.0).is_err());
        let zero = QutritRegister::zeros(4).unwrap();
        assert!(matches!(stage_one_measure(&zero, StageOneLabel::Psi, 0.0), Err(Error::ZeroNorm { .. })));
    }

    #[test]
    fn case_numbering() {
        for k in 1..=8 {
            assert_eq!(SwapCase::numbered(k).unwrap().index(), Some(k));
        }
        assert!(SwapCase::numbered(0).is_err());
        assert!(SwapCase::numbered(9).is_err());
        let all = SwapCase::all();
        assert_eq!(all.len(), 16);
        assert_eq!(all.iter().filter(|c| c.is_extended()).count(), 8);
        assert!(SwapCase::new(StageOneLabel::Psi, StageOneLabel::PsiPP).is_extended());
    }

    #[test]
    fn zero_length_second_interaction_keeps_product() {
        let p = lossless(6.0);
        let t = 1.1;
        let set = stage_two_state(SwapCase::numbered(1).unwrap(), &p, t, t).unwrap();
        let a = stage_one_coefficients(&p, t).unwrap();
        let n = a.a(2).norm_sqr() + a.a(5).norm_sqr();
        let b5 = a.a(2) * a.a(5) / n;
        assert!((set.coefficient(5).unwrap() - b5).norm() < 1e-14);
        assert!((set.coefficient(6).unwrap() - b5).norm() < 1e-14);
        assert_eq!(set.coefficient(2).unwrap(), c(0.0, 0.0));
        assert_eq!(set.coefficient(7), None);
        assert_eq!(set.coefficient(0), None);
    }

    #[test]
    fn symmetric_point_values() {
        let p = lossless(6.0);
        let l1 = p.rate_a().unwrap().value().re;
        let t = FRAC_PI_4 / l1;
        let set = stage_two_state(SwapCase::numbered(1).unwrap(), &p, t, t).unwrap();
        for i in [1, 4, 5, 6] {
            assert!((set.coefficient(i).unwrap().norm() - 0.5).abs() < 1e-12, "B{i}");
        }
        assert!(set.coefficient(2).unwrap().norm() < 1e-12);
        assert!(set.coefficient(3).unwrap().norm() < 1e-12);
        let fp = stage_two_measure(&set, (Level::E, Level::G)).unwrap();
        assert!((fp.success_probability - 0.25).abs() < 1e-12);
        assert!(fp.negativity.abs() < 1e-12);
    }

    #[test]
    fn primed_outcome_is_a_product_at_zero_length() {
        let p = lossless(6.0);
        let set = stage_two_state(SwapCase::numbered(1).unwrap(), &p, 1.0, 1.0).unwrap();
        assert_eq!(set.coefficient(2).unwrap(), c(0.0, 0.0));
        let fp = stage_two_measure(&set, (Level::G, Level::E)).unwrap();
        assert!(fp.negativity.abs() < 1e-15);
        assert!((fp.state.amp("eg").norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extended_cases_run_through_generic_pipeline() {
        let p = ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 1.0).unwrap();
        let case = SwapCase::new(StageOneLabel::Psi, StageOneLabel::PsiPP);
        let set = stage_two_state(case, &p, 1.5, 3.0).unwrap();
        assert_eq!(set.entries().len(), 6);
        assert!(stage_two_closed_form(case, &p, 1.5, 3.0).is_err());
        // atoms (4,5) in (e,e): atom 1 in g, atom 8 in f
        let fp = stage_two_measure(&set, (Level::E, Level::E)).unwrap();
        assert!(fp.negativity.abs() < 1e-12);
        assert!((fp.state.amp("gf").norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn routes_agree() {
        let p = ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 1.0).unwrap();
        let rp = RepeaterParams::uniform(p);
        for k in 1..=8 {
            let case = SwapCase::numbered(k).unwrap();
            for outcome in case.outcomes() {
                let a = run_protocol_via(Route::Propagator, &rp, 2.0, 5.0, case, outcome).unwrap();
                let b = run_protocol_via(Route::ClosedForm, &rp, 2.0, 5.0, case, outcome).unwrap();
                assert!((a.negativity - b.negativity).abs() < 1e-10);
                assert!((a.success_probability - b.success_probability).abs() < 1e-10);
                assert!((a.state.inner(&b.state).norm() - 1.0).abs() < 1e-10);
                assert_eq!(a.method, Method::ClosedForm);
            }
        }
    }

    #[test]
    fn outer_cavity_parameters() {
        let inner = ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 1.0).unwrap();
        let outer = ModelParams::new(1.0, 2.0, 6.0, 2.0, 4.0, 1.0).unwrap();
        let rp = RepeaterParams { inner, outer };
        let case = SwapCase::numbered(1).unwrap();
        let fp = run_protocol_via(Route::Propagator, &rp, 2.0, 4.0, case, (Level::E, Level::G)).unwrap();
        let uni = run_protocol(&inner, 2.0, 4.0, case, (Level::E, Level::G)).unwrap();
        assert!((fp.negativity - uni.negativity).abs() > 1e-6);
        assert!(run_protocol_via(Route::ClosedForm, &rp, 2.0, 4.0, case, (Level::E, Level::G)).is_err());
    }

    #[test]
    fn outcome_labels() {
        assert_eq!(parse_outcome("eg").unwrap(), (Level::E, Level::G));
        assert!(parse_outcome("e").is_err());
        assert!(parse_outcome("ex").is_err());
        assert_eq!(outcome_label((Level::F, Level::E)), "fe");
    }
}
