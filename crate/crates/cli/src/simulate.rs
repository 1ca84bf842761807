use std::path::PathBuf;

use clap::ValueEnum;
use gaussent_fock::GaussianCircuit;
use gaussent_locc::{run_protocol, Basis, ChannelKind, RunOptions, ShotPlan, DEFAULT_SEED};
use serde::Serialize;

use crate::output::{emit, json, read, write_atomic, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Two-mode squeezed vacuum, parameter --r.
    Tmsv,
    /// Symmetric thermal squeezed state, parameters --n and --mc.
    ThermalSqueezed,
    /// Gate list read from --circuit.
    Circuit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Channel {
    InProcess,
    Socket,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BasisArg {
    Quadrature,
    PhotonCount,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Two-mode squeezing parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Thermal occupation of each mode.
    #[arg(long)]
    pub n: Option<f64>,
    /// Cross correlation.
    #[arg(long, allow_negative_numbers = true)]
    pub mc: Option<f64>,
    /// Circuit JSON file.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Shots for each stage unless overridden.
    #[arg(long, default_value_t = gaussent_locc::lab::DEFAULT_SHOTS)]
    pub shots: usize,
    #[arg(long)]
    pub local_shots: Option<usize>,
    #[arg(long)]
    pub parity_shots: Option<usize>,
    #[arg(long, value_enum, default_value = "in-process")]
    pub channel: Channel,
    #[arg(long, value_enum, default_value = "quadrature")]
    pub basis: BasisArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = gaussent_locc::lab::DEFAULT_BOOTSTRAP)]
    pub bootstrap: usize,
    /// Fock cutoff of the simulated source (default: automatic).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Output file for the estimation result (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// JSON Lines transcript of the classical messages.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Add wall-clock timestamps to the transcript.
    #[arg(long)]
    pub wall_clock: bool,
}

#[derive(Serialize)]
struct Output<'a> {
    family: Family,
    plan: &'a ShotPlan,
    channel: ChannelKind,
    result: &'a gaussent_locc::EstimationResult,
}

fn need(v: Option<f64>, flag: &str, family: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::usage(format!("--family {family} needs --{flag}")))
}

fn circuit(args: &Args) -> CliResult<GaussianCircuit> {
    let stray = |flags: &[(&str, bool)]| -> CliResult {
        match flags.iter().find(|f| f.1) {
            Some((f, _)) => Err(CliError::usage(format!(
                "--{f} does not apply to this family"
            ))),
            None => Ok(()),
        }
    };
    match args.family {
        Family::Tmsv => {
            stray(&[
                ("n", args.n.is_some()),
                ("mc", args.mc.is_some()),
                ("circuit", args.circuit.is_some()),
            ])?;
            let r = need(args.r, "r", "tmsv")?;
            GaussianCircuit::new([0.0, 0.0], vec![gaussent_fock::Gate::TwoModeSqueeze { r }])
                .map_err(|e| CliError::unphysical(e.to_string()))
        }
        Family::ThermalSqueezed => {
            stray(&[("r", args.r.is_some()), ("circuit", args.circuit.is_some())])?;
            let n = need(args.n, "n", "thermal-squeezed")?;
            let mc = need(args.mc, "mc", "thermal-squeezed")?;
            GaussianCircuit::thermal_squeezed(n, mc).ok_or_else(|| {
                CliError::unphysical(format!(
                    "no physical state has n = {n}, mc = {mc} (needs |mc| <= sqrt(n (n + 1)))"
                ))
            })
        }
        Family::Circuit => {
            stray(&[
                ("r", args.r.is_some()),
                ("n", args.n.is_some()),
                ("mc", args.mc.is_some()),
            ])?;
            let path = args
                .circuit
                .as_ref()
                .ok_or_else(|| CliError::usage("--family circuit needs --circuit"))?;
            GaussianCircuit::from_json_str(&read(path)?)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
        }
    }
}

pub fn run(args: Args) -> CliResult {
    let c = circuit(&args)?;
    let plan = ShotPlan {
        n_local: args.local_shots.unwrap_or(args.shots),
        n_parity: args.parity_shots.unwrap_or(args.shots),
        seed: args.seed,
        basis: match args.basis {
            BasisArg::Quadrature => Basis::Quadrature,
            BasisArg::PhotonCount => Basis::PhotonCount,
        },
        bootstrap: args.bootstrap,
        batch_size: gaussent_locc::lab::DEFAULT_BATCH,
        cutoff: args.cutoff,
    };
    let channel = match args.channel {
        Channel::InProcess => ChannelKind::InProcess,
        Channel::Socket => ChannelKind::Socket,
    };
    let opts = RunOptions {
        channel,
        wall_clock: args.wall_clock,
        ..RunOptions::default()
    };
    eprintln!("seed {}", plan.seed);
    let run = match run_protocol(&c, &plan, &opts) {
        Ok(run) => run,
        Err(f) => {
            if let Some(p) = &args.transcript {
                write_atomic(p, f.transcript.to_jsonl().as_bytes())?;
            }
            return Err(match f.error {
                gaussent_locc::LoccError::InvalidPlan(m) => CliError::usage(m),
                e => CliError::usage(format!("protocol failed: {e}")),
            });
        }
    };
    if let Some(p) = &args.transcript {
        write_atomic(p, run.transcript.to_jsonl().as_bytes())?;
    }
    let r = &run.result;
    emit(
        args.output.as_deref(),
        &json(&Output {
            family: args.family,
            plan: &plan,
            channel,
            result: r,
        }),
    )?;

    let ef = match (r.report.eof_bits, r.stderr.eof_bits) {
        (Some(e), Some(s)) => format!("E_f {e:.4} +- {s:.4} bits"),
        _ => "E_f n/a (asymmetric)".into(),
    };
    eprintln!(
        "verdict: {} (Simon gap {:.3e} +- {:.1e}); {ef}; E_N {:.4} +- {:.4} bits",
        r.verdict.as_str(),
        r.report.simon_gap,
        r.stderr.simon_gap,
        r.report.log_negativity_bits,
        r.stderr.log_negativity_bits
    );
    Ok(())
}
