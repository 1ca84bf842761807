use std::path::PathBuf;

use gaussent_core::entanglement::{
    analyze_with, invariants_from_local, p_representable, AnalysisConfig, LocalData,
};
use gaussent_core::gaussian::{InvariantSet, PhysicalFlags};
use gaussent_core::reconstruction::schur_gamma1;
use gaussent_core::{CovarianceMatrix, EntanglementReport, LocalBlock};
use serde::Serialize;
use serde_json::Value;

use crate::output::{emit, json, read, CliError, CliResult};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// State file: {"n1", "n2", "m1", "m2", "ms", "mc"} with complex entries as [re, im].
    pub state: PathBuf,
    /// Output file for the JSON report (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Absolute tolerance on the Simon gap for the boundary flag.
    #[arg(long)]
    pub boundary_tol: Option<f64>,
    /// Relative tolerance on |I1 - I2| for the symmetric formulas.
    #[arg(long)]
    pub symmetry_tol: Option<f64>,
    /// Tolerance on negative det(V1 - Gamma1).
    #[arg(long)]
    pub consistency_tol: Option<f64>,
}

#[derive(Serialize)]
struct LocalPipeline {
    gamma1: LocalBlock,
    invariants: InvariantSet,
    max_rel_diff: f64,
}

#[derive(Serialize)]
struct Output {
    state: Value,
    physical: PhysicalFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_representable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariants_direct: Option<InvariantSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    local_pipeline: Option<LocalPipeline>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<EntanglementReport>,
}

fn rel_diff(a: &InvariantSet, b: &InvariantSet) -> f64 {
    [
        (a.i1, b.i1),
        (a.i2, b.i2),
        (a.i3_abs, b.i3_abs),
        (a.i4, b.i4),
        (a.iv, b.iv),
    ]
    .iter()
    .map(|&(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-300))
    .fold(0.0, f64::max)
}

pub fn run(args: Args) -> CliResult {
    let text = read(&args.state)?;
    let v = CovarianceMatrix::from_json_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.state.display())))?;
    let physical = v.check_physical();
    let mut out = Output {
        state: v.to_json_value(),
        physical,
        error: None,
        p_representable: None,
        invariants_direct: None,
        local_pipeline: None,
        report: None,
    };
    if !physical.is_physical() {
        let why = if physical.uncertainty {
            "covariance matrix is not positive semidefinite"
        } else {
            "uncertainty principle violated"
        };
        out.error = Some(why.into());
        emit(args.output.as_deref(), &json(&out))?;
        return Err(CliError::unphysical(why));
    }

    let defaults = AnalysisConfig::default();
    let cfg = AnalysisConfig {
        boundary_tol: args.boundary_tol.unwrap_or(defaults.boundary_tol),
        symmetry_tol: args.symmetry_tol.unwrap_or(defaults.symmetry_tol),
        consistency_tol: args.consistency_tol.unwrap_or(defaults.consistency_tol),
        symmetric_override: None,
    };
    let direct = v.invariants_direct();
    let runtime = |e: gaussent_core::Error| CliError::usage(format!("analysis failed: {e}"));
    let gamma1 = schur_gamma1(&v).map_err(runtime)?;
    let local = LocalData::new(v.v1(), v.v2(), gamma1).map_err(runtime)?;
    let inv = invariants_from_local(&local, &cfg).map_err(runtime)?;
    let report = analyze_with(&local, &cfg).map_err(runtime)?;

    out.p_representable = Some(p_representable(&v, 1e-10));
    out.invariants_direct = Some(direct);
    out.local_pipeline = Some(LocalPipeline {
        gamma1,
        invariants: inv,
        max_rel_diff: rel_diff(&inv, &direct),
    });
    out.report = Some(report);
    emit(args.output.as_deref(), &json(&out))?;

    let verdict = if report.separable {
        "separable"
    } else {
        "entangled"
    };
    let ef = report
        .eof_bits
        .map_or("n/a (asymmetric)".to_string(), |e| format!("{e:.6} bits"));
    eprintln!(
        "{verdict}{}; purity {:.6}; E_f {ef}; E_N {:.6} bits",
        if report.boundary_flag {
            " (on the boundary)"
        } else {
            ""
        },
        report.purity,
        report.log_negativity_bits
    );
    Ok(())
}
