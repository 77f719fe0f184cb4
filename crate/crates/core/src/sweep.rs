//! Parameter sweeps over the readout time and the canned figure panels.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::effective::ModelParams;
use crate::error::{Error, Result};
use crate::full_model::PhysicalParams;
use crate::protocol::{
    outcome_label, parse_outcome, stage_two_measure, stage_two_state_with, stage_two_closed_form, FinalPair,
    RepeaterParams, Route, StageOneLabel, SwapCase,
};
use crate::qutrit::{Level, CONVENTION};

/// Default readout grid: 600 points over gτ ∈ [0, 15].
pub const DEFAULT_RANGE: (f64, f64, usize) = (0.0, 15.0, 600);

/// Points sampled for the sector-independence spot check.
const SPOT_CHECK_POINTS: usize = 7;

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Negativity,
    /// Selected weight over all six stage-two weights.
    SuccessProbability,
    /// Selected weight without the normalization by the branch total.
    AbsoluteProbability,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Self::Negativity => "negativity",
            Self::SuccessProbability => "success_probability",
            Self::AbsoluteProbability => "absolute_probability",
        }
    }

    fn of(self, fp: &FinalPair) -> f64 {
        match self {
            Self::Negativity => fp.negativity,
            Self::SuccessProbability => fp.success_probability,
            Self::AbsoluteProbability => fp.absolute_probability,
        }
    }
}

/// Either effective parameters or couplings, detunings and physical losses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamSpec {
    Effective(ModelParams),
    Physical(PhysicalParams),
}

impl ParamSpec {
    pub fn effective(&self) -> Result<ModelParams> {
        match self {
            Self::Effective(p) => {
                p.validate()?;
                Ok(*p)
            }
            Self::Physical(p) => p.effective(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseId {
    Index(u8),
    Pair { left: StageOneLabel, right: StageOneLabel },
}

impl CaseId {
    pub fn resolve(&self) -> Result<SwapCase> {
        match *self {
            Self::Index(k) => SwapCase::numbered(k).map_err(|e| config_err(e.to_string())),
            Self::Pair { left, right } => Ok(SwapCase::new(left, right)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSelector {
    pub case: CaseId,
    /// Levels of atoms (4,5), e.g. `"eg"`. Empty means both outcomes listed for the case.
    #[serde(default)]
    pub outcomes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub params: ParamSpec,
    /// Parameters of the (6,7) cavity when it differs from the (2,3) one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_params: Option<ParamSpec>,
    pub gt: f64,
    pub g_tau_range: (f64, f64, usize),
    pub cases: Vec<CaseSelector>,
    pub quantities: Vec<Quantity>,
    pub output: PathBuf,
    #[serde(default)]
    pub route: Route,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn repeater_params(&self) -> Result<RepeaterParams> {
        let inner = self.params.effective().map_err(|e| config_err(e.to_string()))?;
        let outer = match &self.outer_params {
            Some(p) => p.effective().map_err(|e| config_err(e.to_string()))?,
            None => inner,
        };
        Ok(RepeaterParams { inner, outer })
    }

    pub fn validate(&self) -> Result<()> {
        let (start, stop, n) = self.g_tau_range;
        if !start.is_finite() || !stop.is_finite() || start < 0.0 || stop <= start {
            return Err(config_err("g_tau_range needs 0 <= start < stop"));
        }
        if n < 2 {
            return Err(config_err("g_tau_range needs at least two points"));
        }
        if !self.gt.is_finite() || self.gt < 0.0 {
            return Err(config_err("gt must be finite and nonnegative"));
        }
        if self.cases.is_empty() {
            return Err(config_err("cases must not be empty"));
        }
        if self.quantities.is_empty() {
            return Err(config_err("quantities must not be empty"));
        }
        self.repeater_params()?;
        self.selections()?;
        Ok(())
    }

    fn selections(&self) -> Result<Vec<(SwapCase, Vec<Outcome>)>> {
        self.cases
            .iter()
            .map(|sel| {
                let case = sel.case.resolve()?;
                let outcomes = if sel.outcomes.is_empty() {
                    case.outcomes().to_vec()
                } else {
                    sel.outcomes
                        .iter()
                        .map(|o| parse_outcome(o).map_err(|e| config_err(e.to_string())))
                        .collect::<Result<_>>()?
                };
                Ok((case, outcomes))
            })
            .collect()
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.g_tau_range)
    }
}

pub fn linspace((start, stop, n): (f64, f64, usize)) -> Vec<f64> {
    (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect()
}

/// One CSV series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesOutput {
    /// Short name, also the file stem.
    pub name: String,
    pub case: SwapCase,
    pub outcome: (Level, Level),
    pub quantity: Quantity,
    /// `#`-prefixed header lines, in order.
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<(f64, f64)>,
    /// Grid points dropped because the post-selected state vanished.
    pub skipped: Vec<f64>,
}

impl SeriesOutput {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s.push_str("g_tau,value\n");
        for (x, y) in &self.rows {
            let _ = writeln!(s, "{x},{y}");
        }
        s
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.1).collect()
    }

    pub fn max(&self) -> f64 {
        self.rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.name));
        fs::write(&path, self.to_csv())?;
        Ok(path)
    }
}

fn case_slug(case: SwapCase) -> String {
    match case.index() {
        Some(k) => format!("case{k}"),
        None => format!("ext-{}-{}", label_slug(case.left), label_slug(case.right)),
    }
}

fn label_slug(l: StageOneLabel) -> &'static str {
    match l {
        StageOneLabel::Psi => "psi",
        StageOneLabel::PsiP => "psi1",
        StageOneLabel::PsiPP => "psi2",
        StageOneLabel::PsiPPP => "psi3",
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// One point of every requested outcome for a case, or `None` on a vanishing branch.
fn evaluate(
    route: Route,
    params: &RepeaterParams,
    case: SwapCase,
    outcomes: &[(Level, Level)],
    t: f64,
    tau: f64,
) -> Result<Vec<Option<FinalPair>>> {
    let branches = match route {
        Route::Propagator => stage_two_state_with(case, params, t, tau),
        Route::ClosedForm if params.is_uniform() => stage_two_closed_form(case, &params.inner, t, tau),
        Route::ClosedForm => return Err(config_err("closed-form route needs one parameter set")),
    };
    let branches = match branches {
        Ok(b) => b,
        Err(Error::ZeroNorm { .. }) => return Ok(vec![None; outcomes.len()]),
        Err(e) => return Err(e),
    };
    outcomes
        .iter()
        .map(|&o| match stage_two_measure(&branches, o) {
            Ok(fp) => Ok(Some(fp)),
            Err(Error::ZeroNorm { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Move the rates of the sector a case does not use: cases 1–4 live in the
/// g-e sector and ignore `(g2, δ, γ)`, cases 5–8 ignore `(g1, Δ, Γ)`.
fn perturb_idle_sector(p: &ModelParams, case: SwapCase) -> ModelParams {
    let mut q = *p;
    if case.left.sector() == (Level::G, Level::E) && case.right.sector() == (Level::G, Level::E) {
        q.coupling_b = 1.5 * p.coupling_b + 0.5;
        q.detuning_b = p.detuning_b + 3.0;
        q.dissipation_b = p.dissipation_b + 1.0;
    } else {
        q.coupling_a = 1.5 * p.coupling_a + 0.5;
        q.detuning_a = p.detuning_a + 3.0;
        q.dissipation_a = p.dissipation_a + 1.0;
    }
    q
}

fn spot_check(route: Route, params: &RepeaterParams, case: SwapCase, outcome: (Level, Level), t: f64, grid: &[f64]) -> Result<f64> {
    let moved = RepeaterParams {
        inner: perturb_idle_sector(&params.inner, case),
        outer: perturb_idle_sector(&params.outer, case),
    };
    let step = (grid.len() / SPOT_CHECK_POINTS).max(1);
    let mut worst: f64 = 0.0;
    for &tau in grid.iter().step_by(step) {
        let a = evaluate(route, params, case, &[outcome], t, tau)?;
        let b = evaluate(route, &moved, case, &[outcome], t, tau)?;
        if let (Some(a), Some(b)) = (&a[0], &b[0]) {
            worst = worst.max((a.negativity - b.negativity).abs());
        }
    }
    Ok(worst)
}

/// Everything needed to compute a set of series on one grid.
struct Job<'a> {
    route: Route,
    params: RepeaterParams,
    t: f64,
    grid: Vec<f64>,
    selections: Vec<(SwapCase, Vec<(Level, Level)>)>,
    quantities: &'a [Quantity],
    prefix: String,
    extra_meta: Vec<(String, String)>,
}

fn run_job(job: &Job) -> Result<Vec<SeriesOutput>> {
    let mut out = Vec::new();
    for (case, outcomes) in &job.selections {
        let points: Vec<Vec<Option<FinalPair>>> = job
            .grid
            .par_iter()
            .map(|&tau| evaluate(job.route, &job.params, *case, outcomes, job.t, tau))
            .collect::<Result<_>>()?;
        for (oi, &outcome) in outcomes.iter().enumerate() {
            let invariance = if job.quantities.contains(&Quantity::Negativity) && !case.is_extended() {
                Some(spot_check(job.route, &job.params, *case, outcome, job.t, &job.grid)?)
            } else {
                None
            };
            for &q in job.quantities {
                let mut rows = Vec::with_capacity(job.grid.len());
                let mut skipped = Vec::new();
                for (tau, p) in job.grid.iter().zip(&points) {
                    match &p[oi] {
                        Some(fp) if q.of(fp).is_finite() => rows.push((*tau, q.of(fp))),
                        _ => skipped.push(*tau),
                    }
                }
                let name = format!("{}{}_{}_{}", job.prefix, case_slug(*case), outcome_label(outcome), q.name());
                let mut metadata = vec![
                    ("convention".to_string(), CONVENTION.to_string()),
                    ("series".to_string(), format!("{case}, outcome {}, {}", outcome_label(outcome), q.name())),
                ];
                metadata.extend(job.extra_meta.iter().cloned());
                metadata.push(("params".into(), json(&job.params.inner)));
                if !job.params.is_uniform() {
                    metadata.push(("outer_params".into(), json(&job.params.outer)));
                }
                metadata.push(("gt".into(), job.t.to_string()));
                metadata.push(("g_tau_points".into(), job.grid.len().to_string()));
                metadata.push(("route".into(), json(&job.route).trim_matches('"').to_string()));
                let skipped_text = if skipped.is_empty() {
                    "none".to_string()
                } else {
                    skipped.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                };
                metadata.push(("skipped".into(), skipped_text));
                if q == Quantity::Negativity {
                    if let Some(d) = invariance {
                        metadata.push(("idle_sector_max_change".into(), format!("{d:e}")));
                    }
                }
                out.push(SeriesOutput { name, case: *case, outcome, quantity: q, metadata, rows, skipped });
            }
        }
    }
    Ok(out)
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SeriesOutput>> {
    config.validate()?;
    let (start, stop, n) = config.g_tau_range;
    let job = Job {
        route: config.route,
        params: config.repeater_params()?,
        t: config.gt,
        grid: config.grid(),
        selections: config.selections()?,
        quantities: &config.quantities,
        prefix: String::new(),
        extra_meta: vec![("g_tau_range".into(), format!("[{start}, {stop}, {n}]"))],
    };
    run_job(&job)
}

/// Figure panels that can be reproduced.
pub const FIGURES: [&str; 16] =
    ["2a", "2b", "2c", "2d", "2e", "2f", "3a", "3b", "3c", "3d", "3e", "3f", "3g", "3h", "4a", "4b"];

const LINE_STYLES: [&str; 4] = ["solid", "dashed", "dotted", "dashdot"];

/// A line of a figure panel: its style, parameters and stage-one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureLine {
    pub style: &'static str,
    pub params: ModelParams,
    pub gt: f64,
}

fn params(g1: f64, g2: f64, da: f64, db: f64, ga: f64, gb: f64) -> ModelParams {
    ModelParams::new(g1, g2, da, db, ga, gb).expect("figure parameters are valid")
}

type Outcome = (Level, Level);

/// Numbered case, outcome and quantity of one series in a panel.
pub type SeriesSpec = (u8, Outcome, Quantity);

/// Lines of a panel and the (case, outcome, quantity) series drawn on each.
pub fn figure_layout(id: &str) -> Result<(Vec<FigureLine>, Vec<SeriesSpec>)> {
    use Level::*;
    use Quantity::*;
    let variants = [(2.0, 4.0, 2.0), (6.0, 4.0, 2.0), (2.0, 12.0, 2.0), (2.0, 4.0, 6.0)];
    let variants_b = [(2.0, 2.0, 2.0), (6.0, 2.0, 2.0), (2.0, 6.0, 2.0), (2.0, 2.0, 6.0)];
    let lines_a = |g2: f64, db: f64, gb: f64| {
        variants
            .iter()
            .zip(LINE_STYLES)
            .map(|(&(da, ga, gt), style)| FigureLine { style, params: params(1.0, g2, da, db, ga, gb), gt })
            .collect::<Vec<_>>()
    };
    let lines_b = || {
        variants_b
            .iter()
            .zip(LINE_STYLES)
            .map(|(&(db, gb, gt), style)| FigureLine { style, params: params(1.0, 2.0, 10.0, db, 2.0, gb), gt })
            .collect::<Vec<_>>()
    };
    let lossless = vec![FigureLine { style: "solid", params: params(1.0, 2.0, 6.0, 6.0, 0.0, 0.0), gt: 2.0 }];
    let (lines, series) = match id {
        "2a" => (lines_a(2.0, 2.0, 2.0), vec![(1, (E, G), Negativity)]),
        "2b" => (lines_a(2.0, 2.0, 2.0), vec![(1, (G, E), Negativity)]),
        "2c" => (lines_a(2.0, 2.0, 2.0), vec![(2, (E, G), Negativity)]),
        "2d" => (lines_b(), vec![(5, (E, F), Negativity)]),
        "2e" => (lines_b(), vec![(5, (F, E), Negativity)]),
        "2f" => (lines_b(), vec![(6, (E, F), Negativity)]),
        "3a" => (lines_a(2.0, 2.0, 0.0), vec![(1, (E, G), SuccessProbability)]),
        "3b" => (lines_a(2.0, 2.0, 0.0), vec![(1, (G, E), SuccessProbability)]),
        "3c" => (lines_a(2.0, 2.0, 0.0), vec![(2, (E, G), SuccessProbability)]),
        "3d" => (lines_a(2.0, 2.0, 0.0), vec![(3, (E, G), SuccessProbability)]),
        "3e" => (lines_b(), vec![(5, (E, F), SuccessProbability)]),
        "3f" => (lines_b(), vec![(5, (F, E), SuccessProbability)]),
        "3g" => (lines_b(), vec![(6, (E, F), SuccessProbability)]),
        "3h" => (lines_b(), vec![(7, (E, F), SuccessProbability)]),
        "4a" => (lossless, vec![(1, (E, G), Negativity), (2, (E, G), Negativity), (4, (E, G), Negativity)]),
        "4b" => (lossless, vec![(5, (E, F), Negativity), (6, (E, F), Negativity), (8, (E, F), Negativity)]),
        other => return Err(Error::UnknownFigure(other.to_string())),
    };
    Ok((lines, series))
}

/// All curves of a panel on the default grid.
pub fn reproduce_figure(id: &str) -> Result<Vec<SeriesOutput>> {
    reproduce_figure_on(id, DEFAULT_RANGE)
}

pub fn reproduce_figure_on(id: &str, range: (f64, f64, usize)) -> Result<Vec<SeriesOutput>> {
    let (lines, series) = figure_layout(id)?;
    let grid = linspace(range);
    let mut out = Vec::new();
    for line in &lines {
        // group the requested series by case so each case is evaluated once
        let mut by_case: BTreeMap<u8, (Vec<Outcome>, Vec<Quantity>)> = BTreeMap::new();
        for &(k, o, q) in &series {
            let e = by_case.entry(k).or_default();
            if !e.0.contains(&o) {
                e.0.push(o);
            }
            if !e.1.contains(&q) {
                e.1.push(q);
            }
        }
        for (k, (outcomes, quantities)) in by_case {
            let job = Job {
                route: Route::Propagator,
                params: RepeaterParams::uniform(line.params),
                t: line.gt,
                grid: grid.clone(),
                selections: vec![(SwapCase::numbered(k)?, outcomes)],
                quantities: &quantities,
                prefix: format!("fig{id}_{}_", line.style),
                extra_meta: vec![
                    ("figure".into(), id.to_string()),
                    ("line".into(), line.style.to_string()),
                    ("g_tau_range".into(), format!("[{}, {}, {}]", range.0, range.1, range.2)),
                ],
            };
            out.extend(run_job(&job)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(extra: &str) -> String {
        format!(
            r#"{{"params": {{"g1": 1, "g2": 2, "Delta": 2, "delta": 2, "Gamma": 4, "gamma": 2}},
                "gt": 2, "g_tau_range": [0, 15, 150],
                "cases": [{{"case": 1, "outcomes": ["eg"]}}],
                "quantities": ["negativity"], "output": "out"{extra}}}"#
        )
    }

    #[test]
    fn parses_and_runs() {
        let cfg = SweepConfig::from_json(&config("")).unwrap();
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].rows.len(), 150);
        assert_eq!(out[0].name, "case1_eg_negativity");
        let csv = out[0].to_csv();
        assert!(csv.contains("# convention: gef-msd\n"));
        assert!(csv.contains("\ng_tau,value\n"));
        assert!(out[0].rows.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(out[0].values().iter().all(|v| (0.0..=0.5).contains(v)));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(SweepConfig::from_json(&config(r#", "typo": 1"#)), Err(Error::Config(_))));
        let mut cfg = SweepConfig::from_json(&config("")).unwrap();
        cfg.cases.clear();
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
        let mut cfg = SweepConfig::from_json(&config("")).unwrap();
        cfg.g_tau_range = (1.0, 1.0, 10);
        assert!(run_sweep(&cfg).is_err());
        cfg.g_tau_range = (0.0, 1.0, 1);
        assert!(run_sweep(&cfg).is_err());
        cfg.g_tau_range = (-1.0, 1.0, 10);
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = SweepConfig::from_json(&config("")).unwrap();
        cfg.cases[0].case = CaseId::Index(9);
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
        let mut cfg = SweepConfig::from_json(&config("")).unwrap();
        cfg.cases[0].outcomes = vec!["ex".into()];
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn physical_params_and_defaults() {
        let text = r#"{"params": {"g1": 1, "g2": 2, "Delta": 6, "delta": 2,
            "gamma_g": 0.1, "gamma_e": 0.3, "gamma_f": 0.05, "kappa_a": 0.2, "kappa_b": 0.25},
            "gt": 2, "g_tau_range": [0, 5, 11], "cases": [{"case": 5}],
            "quantities": ["negativity", "success_probability"], "output": "o"}"#;
        let cfg = SweepConfig::from_json(text).unwrap();
        let p = cfg.repeater_params().unwrap().inner;
        assert_eq!((p.dissipation_a, p.dissipation_b), (0.0, 0.0));
        let out = run_sweep(&cfg).unwrap();
        let names: Vec<&str> = out.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(
            names,
            ["case5_ef_negativity", "case5_ef_success_probability", "case5_fe_negativity", "case5_fe_success_probability"]
        );
    }

    #[test]
    fn extended_case_selector() {
        let text = r#"{"params": {"g1": 1, "g2": 2, "Delta": 2, "delta": 2, "Gamma": 4, "gamma": 2},
            "gt": 2, "g_tau_range": [0, 5, 11],
            "cases": [{"case": {"left": "psi", "right": "psi2"}, "outcomes": ["ee", "gf"]}],
            "quantities": ["negativity"], "output": "o"}"#;
        let out = run_sweep(&SweepConfig::from_json(text).unwrap()).unwrap();
        assert_eq!(out[0].name, "ext-psi-psi2_ee_negativity");
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|s| s.values().iter().all(|v| *v < 1e-12)));
    }

    #[test]
    fn skipped_points_are_listed() {
        // atoms (4,5) never end up in (g,g) for this pairing
        let text = r#"{"params": {"g1": 1, "g2": 2, "Delta": 6, "delta": 2, "Gamma": 0, "gamma": 0},
            "gt": 2, "g_tau_range": [0, 4, 3], "cases": [{"case": {"left": "Psi", "right": "PsiPP"}, "outcomes": ["gg"]}],
            "quantities": ["negativity"], "output": "o"}"#;
        let out = run_sweep(&SweepConfig::from_json(text).unwrap()).unwrap();
        assert!(out[0].rows.is_empty());
        assert_eq!(out[0].skipped, vec![0.0, 2.0, 4.0]);
        assert!(out[0].to_csv().contains("# skipped: 0 2 4\n"));
    }

    #[test]
    fn deterministic_output() {
        let cfg = SweepConfig::from_json(&config("")).unwrap();
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a[0].to_csv(), b[0].to_csv());
    }

    #[test]
    fn lossless_period() {
        // λ1 = 1/6, period π/λ1 = 6π
        let period = 6.0 * std::f64::consts::PI;
        let text = r#"{"params": {"g1": 1, "g2": 2, "Delta": 6, "delta": 2, "Gamma": 0, "gamma": 0},
            "gt": 2, "g_tau_range": [0.5, 5, 10], "cases": [{"case": 1, "outcomes": ["eg"]}],
            "quantities": ["negativity"], "output": "o"}"#;
        let mut cfg = SweepConfig::from_json(text).unwrap();
        let a = run_sweep(&cfg).unwrap();
        cfg.g_tau_range = (0.5 + period, 5.0 + period, 10);
        let b = run_sweep(&cfg).unwrap();
        for (x, y) in a[0].values().iter().zip(b[0].values()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn figure_ids() {
        for id in FIGURES {
            assert!(figure_layout(id).is_ok(), "{id}");
        }
        assert!(matches!(reproduce_figure("5a"), Err(Error::UnknownFigure(_))));
        let fig = reproduce_figure_on("4a", (0.0, 15.0, 40)).unwrap();
        assert_eq!(fig.len(), 3);
        let fig = reproduce_figure_on("2a", (0.0, 15.0, 40)).unwrap();
        assert_eq!(fig.len(), 4);
        assert!(fig[0].name.starts_with("fig2a_solid_case1_eg"));
    }
}
