use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qrepeater::protocol::{outcome_label, parse_outcome, run_protocol_via, stage_one_state, RepeaterParams, Route};
use qrepeater::qutrit::StateDump;
use qrepeater::sweep::{reproduce_figure_on, run_sweep, CaseId, ParamSpec, SweepConfig, DEFAULT_RANGE};
use qrepeater::validate::{self, Options, ValidationLevel};
use qrepeater::{Error, ModelParams};

#[derive(Parser)]
#[command(name = "qrepeater", version, about = "Two-stage entanglement swapping with Λ-type atoms in lossy cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a JSON config; one CSV per series goes to its `output` directory.
    Sweep { config: PathBuf },
    /// Write the curves of one figure panel (2a..2f, 3a..3h, 4a, 4b) as CSV.
    Figure {
        id: String,
        #[arg(long)]
        out: PathBuf,
        /// Number of readout times over gτ in [0, 15].
        #[arg(long, default_value_t = DEFAULT_RANGE.2)]
        points: usize,
    },
    /// Run the self-checks and write a JSON report. Exit code 1 if any fails.
    Validate {
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: PathBuf,
        /// Flip the sign of λ2 in the propagator pipeline (debug builds only).
        #[arg(long, hide = true)]
        tamper_lambda2: bool,
    },
    /// Print an intermediate or final state as JSON.
    DumpState {
        /// JSON file with effective or physical parameters; defaults to Δ=2, Γ=4, g1=1, g2=2, δ=2, γ=2.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value = "1")]
        case: u8,
        #[arg(long, default_value = "eg")]
        outcome: String,
        #[arg(long, default_value_t = 2.0)]
        gt: f64,
        #[arg(long, default_value_t = 5.0)]
        g_tau: f64,
        #[arg(long, value_enum, default_value_t = Stage::Final)]
        stage: Stage,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    /// Atoms (1,2,3,4) after the first interaction.
    One,
    /// Normalized (1,8) pair.
    Final,
}

#[derive(Serialize)]
struct Dump {
    stage: &'static str,
    gt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    g_tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    negativity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    success_probability: Option<f64>,
    state: StateDump,
}

fn load_params(path: Option<&Path>) -> Result<ModelParams, Error> {
    match path {
        None => ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 2.0),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let spec: ParamSpec = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            spec.effective()
        }
    }
}

fn write_all(series: &[qrepeater::sweep::SeriesOutput], dir: &Path) -> Result<(), Error> {
    for s in series {
        println!("{}", s.write_to(dir)?.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Sweep { config } => {
            let config = SweepConfig::load(&config)?;
            let series = run_sweep(&config)?;
            write_all(&series, &config.output)?;
            Ok(true)
        }
        Command::Figure { id, out, points } => {
            if points < 2 {
                return Err(Error::Config("--points must be at least 2".into()));
            }
            let series = reproduce_figure_on(&id, (DEFAULT_RANGE.0, DEFAULT_RANGE.1, points))?;
            write_all(&series, &out)?;
            Ok(true)
        }
        Command::Validate { full, out, tamper_lambda2 } => {
            let level = if full { ValidationLevel::Full } else { ValidationLevel::Fast };
            let report = validate::run(level, Options { tamper_rate_b_sign: tamper_lambda2 });
            for c in &report.checks {
                eprintln!("{} {} observed {:e} tolerance {:e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.observed, c.tolerance);
            }
            let text = serde_json::to_string_pretty(&report).expect("serializable report");
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(&out, text + "\n")?;
            Ok(report.pass)
        }
        Command::DumpState { params, case, outcome, gt, g_tau, stage } => {
            let p = load_params(params.as_deref())?;
            let dump = match stage {
                Stage::One => Dump {
                    stage: "one",
                    gt,
                    g_tau: None,
                    case: None,
                    outcome: None,
                    negativity: None,
                    success_probability: None,
                    state: stage_one_state(&p, gt)?.to_dump(),
                },
                Stage::Final => {
                    let swap = CaseId::Index(case).resolve()?;
                    let o = parse_outcome(&outcome)?;
                    let fp = run_protocol_via(Route::Propagator, &RepeaterParams::uniform(p), gt, g_tau, swap, o)?;
                    Dump {
                        stage: "final",
                        gt,
                        g_tau: Some(g_tau),
                        case: Some(case),
                        outcome: Some(outcome_label(o)),
                        negativity: Some(fp.negativity),
                        success_probability: Some(fp.success_probability),
                        state: fp.state.to_dump(),
                    }
                }
            };
            println!("{}", serde_json::to_string_pretty(&dump).expect("serializable dump"));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
