use std::path::PathBuf;

use clap::ValueEnum;
use gaussent_core::entanglement::log_negativity;
use gaussent_core::gaussian::I3Sign;
use gaussent_core::reconstruction::schur_gamma1;
use gaussent_fock::verify::{
    identities_suite, negativity_suite, VerificationEntry, VerificationReport,
};
use gaussent_fock::GaussianCircuit;
use gaussent_locc::{run_protocol, RunOptions, ShotPlan, DEFAULT_SEED};

use crate::output::{emit, json, CliError, CliResult};

pub const MIN_CUTOFF: usize = 8;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    /// Gaussian identities against oracle moments.
    Identities,
    /// Logarithmic negativity against partial-transpose trace norms.
    Negativity,
    /// Finite-shot protocol estimates against exact values.
    Protocol,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 30)]
    pub cutoff: usize,
    /// Seed for the protocol suite.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Shots per stage for the protocol suite.
    #[arg(long, default_value_t = 100_000)]
    pub shots: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Protocol estimates must land within this many bootstrap standard errors.
const PROTOCOL_SIGMAS: f64 = 3.0;

fn protocol_suite(cutoff: usize, seed: u64, shots: usize) -> VerificationReport {
    let mut cases = vec![("tmsv r=0.5".to_string(), GaussianCircuit::tmsv(0.5))];
    for (n, mc) in [(0.5, 0.6), (1.0, 1.2)] {
        cases.push((
            format!("thermal_squeezed n={n} mc={mc}"),
            GaussianCircuit::thermal_squeezed(n, mc).expect("physical parameters"),
        ));
    }
    let plan = ShotPlan {
        n_local: shots,
        n_parity: shots,
        seed,
        cutoff: Some(cutoff),
        ..ShotPlan::default()
    };
    let mut entries = Vec::new();
    for (name, c) in cases {
        let entry = |identity: &str, lhs: f64, rhs: f64, se: f64| {
            let diff = (lhs - rhs).abs();
            VerificationEntry {
                case: name.clone(),
                identity: identity.into(),
                lhs: Some(lhs),
                rhs: Some(rhs),
                diff: Some(diff),
                tol: PROTOCOL_SIGMAS * se,
                cutoff,
                leakage: None,
                passed: diff <= PROTOCOL_SIGMAS * se,
                error: None,
            }
        };
        let run = match run_protocol(&c, &plan, &RunOptions::default()) {
            Ok(run) => run.result,
            Err(f) => {
                entries.push(VerificationEntry {
                    case: name.clone(),
                    identity: "protocol".into(),
                    lhs: None,
                    rhs: None,
                    diff: None,
                    tol: 0.0,
                    cutoff,
                    leakage: None,
                    passed: false,
                    error: Some(f.error.to_string()),
                });
                continue;
            }
        };
        let v = c.analytic_covariance();
        let g = schur_gamma1(&v).expect("physical state");
        let mut inv = v.invariants_direct();
        entries.push(entry(
            "gamma1_eta",
            run.gamma1_hat.n,
            g.n,
            run.stderr.gamma1_n,
        ));
        entries.push(entry("iv", run.report.invariants.iv, inv.iv, run.stderr.iv));
        entries.push(entry(
            "i3_abs",
            run.report.invariants.i3_abs,
            inv.i3_abs,
            run.stderr.i3_abs,
        ));
        if inv.i3_abs > 0.0 {
            inv.i3_sign = I3Sign::Negative;
        }
        if let Ok(en) = log_negativity(&inv) {
            entries.push(entry(
                "log_negativity_bits",
                run.report.log_negativity_bits,
                en,
                run.stderr.log_negativity_bits,
            ));
        }
    }
    VerificationReport::new("protocol", cutoff, entries)
}

pub fn run(args: Args) -> CliResult {
    if args.cutoff < MIN_CUTOFF {
        return Err(CliError::usage(format!(
            "--cutoff must be at least {MIN_CUTOFF}"
        )));
    }
    let report = match args.suite {
        Suite::Identities => identities_suite(args.cutoff),
        Suite::Negativity => negativity_suite(args.cutoff),
        Suite::Protocol => protocol_suite(args.cutoff, args.seed, args.shots),
    };
    emit(args.output.as_deref(), &json(&report))?;
    let failed: Vec<&VerificationEntry> = report.entries.iter().filter(|e| !e.passed).collect();
    eprintln!(
        "{} suite at cutoff {}: {}/{} checks passed",
        report.suite,
        report.cutoff,
        report.entries.len() - failed.len(),
        report.entries.len()
    );
    for e in &failed {
        match &e.error {
            Some(err) => eprintln!("  FAIL {} {}: {err}", e.case, e.identity),
            None => eprintln!(
                "  FAIL {} {}: |diff| {:.3e} > {:.1e}",
                e.case,
                e.identity,
                e.diff.unwrap_or(f64::NAN),
                e.tol
            ),
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::verification(format!(
            "{} of {} checks failed",
            failed.len(),
            report.entries.len()
        )))
    }
}
