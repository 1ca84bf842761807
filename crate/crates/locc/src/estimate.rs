//! Alice's final estimate with bootstrap standard errors.

use gaussent_core::entanglement::{analyze_with, invariants_from_local, AnalysisConfig, LocalData};
use gaussent_core::reconstruction::{
    gamma1_from_conditioned, ConditionedMoments, ParityNormalization,
};
use gaussent_core::{EntanglementReport, LocalBlock};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LoccError, Result};
use crate::message::V2Report;
use crate::sampling::{LocalSamples, ParitySamples};

/// Sigma multiple for the boundary and symmetry decisions.
pub const CONFIDENCE_SIGMAS: f64 = 3.0;
/// Sigma multiple below which a negative `det(V1 - Gamma1)` counts as noise.
pub const CONSISTENCY_SIGMAS: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Entangled,
    Separable,
    /// Simon gap within `CONFIDENCE_SIGMAS` standard errors of zero.
    BoundaryUncertain,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Entangled => "entangled",
            Verdict::Separable => "separable",
            Verdict::BoundaryUncertain => "boundary-uncertain",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub v1_n: f64,
    pub v1_m_re: f64,
    pub v1_m_im: f64,
    pub v2_n: f64,
    pub v2_m_re: f64,
    pub v2_m_im: f64,
    pub gamma1_n: f64,
    pub gamma1_m_re: f64,
    pub gamma1_m_im: f64,
    pub p_even: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3_abs: f64,
    pub i4: f64,
    pub iv: f64,
    pub purity: f64,
    pub simon_gap: f64,
    pub eof_bits: Option<f64>,
    pub log_negativity_bits: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub replicates: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub verdict: Verdict,
    pub v1_hat: LocalBlock,
    pub v2_hat: LocalBlock,
    pub gamma1_hat: LocalBlock,
    pub conditioned: ConditionedMoments,
    pub report: EntanglementReport,
    pub stderr: StdErrors,
    pub bootstrap: BootstrapSummary,
    pub consistency_tol: f64,
    pub symmetric: bool,
}

pub fn resample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Sample standard deviation; 0 for fewer than two values.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

fn sd_of<T>(items: &[T], f: impl Fn(&T) -> f64) -> f64 {
    std_dev(&items.iter().map(f).collect::<Vec<_>>())
}

struct Replicate {
    v1: LocalBlock,
    v2: LocalBlock,
    gamma1: LocalBlock,
    p_even: f64,
    data: LocalData,
}

fn gamma1(m: &ConditionedMoments) -> Result<LocalBlock> {
    Ok(gamma1_from_conditioned(
        m,
        ParityNormalization::SigmaWeighted,
    )?)
}

/// Point estimate from Alice's records and Bob's report, with standard
/// errors from resampling her shots alongside Bob's replicates.
pub fn estimate<R: Rng + ?Sized>(
    local: &LocalSamples,
    parity: &ParitySamples,
    v2: &V2Report,
    rng: &mut R,
) -> Result<EstimationResult> {
    if v2.replicates.len() < 2 {
        return Err(LoccError::InsufficientData(
            "fewer than two bootstrap replicates".into(),
        ));
    }
    let conditioned = parity.moments()?;
    let v1 = local.block()?;
    let g1 = gamma1(&conditioned)?;
    let point = LocalData::new(v1, v2.block, g1)?;

    let mut reps = Vec::with_capacity(v2.replicates.len());
    let mut failed = 0;
    for v2_b in &v2.replicates {
        let li = resample(local.values.len(), rng);
        let pi = resample(parity.odd.len(), rng);
        let rep = (|| -> Result<Replicate> {
            let v1 = local.block_of(&li)?;
            let m = parity.moments_of(&pi)?;
            let gamma1 = gamma1(&m)?;
            let data = LocalData::new(v1, *v2_b, gamma1)?;
            Ok(Replicate {
                v1,
                v2: *v2_b,
                gamma1,
                p_even: m.p_even,
                data,
            })
        })();
        match rep {
            Ok(r) => reps.push(r),
            Err(_) => failed += 1,
        }
    }

    let consistency_tol =
        (CONSISTENCY_SIGMAS * sd_of(&reps, |r| r.data.correlation_det())).max(1e-10);
    let mut cfg = AnalysisConfig {
        consistency_tol,
        boundary_tol: 0.0,
        symmetry_tol: 0.0,
        symmetric_override: Some(false),
    };
    let inv = invariants_from_local(&point, &cfg)?;
    let diffs: Vec<f64> = reps
        .iter()
        .filter_map(|r| invariants_from_local(&r.data, &cfg).ok())
        .map(|i| i.i1 - i.i2)
        .collect();
    let scale = inv.i1.abs().max(inv.i2.abs());
    let symmetric = (inv.i1 - inv.i2).abs() <= CONFIDENCE_SIGMAS * std_dev(&diffs) + 1e-12 * scale;
    cfg.symmetric_override = Some(symmetric);

    let report = analyze_with(&point, &cfg)?;
    let mut ok = Vec::with_capacity(reps.len());
    for r in reps {
        match analyze_with(&r.data, &cfg) {
            Ok(rep) => ok.push((r, rep)),
            Err(_) => failed += 1,
        }
    }

    let sd = |f: &dyn Fn(&(Replicate, EntanglementReport)) -> f64| sd_of(&ok, f);
    let stderr = StdErrors {
        v1_n: sd(&|r| r.0.v1.n),
        v1_m_re: sd(&|r| r.0.v1.m.re),
        v1_m_im: sd(&|r| r.0.v1.m.im),
        v2_n: sd(&|r| r.0.v2.n),
        v2_m_re: sd(&|r| r.0.v2.m.re),
        v2_m_im: sd(&|r| r.0.v2.m.im),
        gamma1_n: sd(&|r| r.0.gamma1.n),
        gamma1_m_re: sd(&|r| r.0.gamma1.m.re),
        gamma1_m_im: sd(&|r| r.0.gamma1.m.im),
        p_even: sd(&|r| r.0.p_even),
        i1: sd(&|r| r.1.invariants.i1),
        i2: sd(&|r| r.1.invariants.i2),
        i3_abs: sd(&|r| r.1.invariants.i3_abs),
        i4: sd(&|r| r.1.invariants.i4),
        iv: sd(&|r| r.1.invariants.iv),
        purity: sd(&|r| r.1.purity),
        simon_gap: sd(&|r| r.1.simon_gap),
        eof_bits: report
            .eof_bits
            .map(|_| sd(&|r| r.1.eof_bits.unwrap_or(0.0))),
        log_negativity_bits: sd(&|r| r.1.log_negativity_bits),
    };

    let verdict = if report.simon_gap.abs() <= CONFIDENCE_SIGMAS * stderr.simon_gap {
        Verdict::BoundaryUncertain
    } else if report.separable {
        Verdict::Separable
    } else {
        Verdict::Entangled
    };

    Ok(EstimationResult {
        verdict,
        v1_hat: v1,
        v2_hat: v2.block,
        gamma1_hat: g1,
        conditioned,
        report,
        stderr,
        bootstrap: BootstrapSummary {
            replicates: v2.replicates.len(),
            failed,
        },
        consistency_tol,
        symmetric,
    })
}
