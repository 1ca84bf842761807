//! Recovery of a single correlation entry (`mc` or `ms`) for states with
//! `C C† = |m|^2 I`.

use crate::entanglement::LocalData;
use crate::error::{Error, Result};
use crate::gaussian::{Bogoliubov, CovarianceMatrix, LocalBlock, Mode};
use crate::linalg::{inv2, mul2, C64, ZERO};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const CLAMP_TOL: f64 = 1e-10;
const PHASE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialClassTag {
    /// `mc = 0`, `ms != 0`; always separable (`det C = |ms|^2`).
    DiagonalMs,
    /// `ms = 0`, `mc != 0`; `det C = -|mc|^2`.
    AntidiagonalMc,
}

impl SpecialClassTag {
    pub fn of(v: &CovarianceMatrix, tol: f64) -> Option<Self> {
        match (v.ms.norm() <= tol, v.mc.norm() <= tol) {
            (true, false) => Some(Self::AntidiagonalMc),
            (false, true) => Some(Self::DiagonalMs),
            _ => None,
        }
    }

    /// The tagged entry of a covariance matrix.
    pub fn entry(self, v: &CovarianceMatrix) -> C64 {
        match self {
            Self::DiagonalMs => v.ms,
            Self::AntidiagonalMc => v.mc,
        }
    }
}

/// A recovered `m = |m| e^{i phase}` with `phase` in `[0, pi)`; the true
/// phase is either `phase` or `phase + pi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveredCorrelation {
    pub magnitude: f64,
    pub phase: f64,
    pub mod_pi: bool,
}

impl RecoveredCorrelation {
    pub fn value(&self) -> C64 {
        C64::from_polar(self.magnitude, self.phase)
    }

    /// Whether `z` equals this value up to the sign ambiguity.
    pub fn matches(&self, z: C64, tol: f64) -> bool {
        let v = self.value();
        (v - z).norm() <= tol || (v + z).norm() <= tol
    }
}

fn wrap_mod_pi(phi: f64) -> f64 {
    let p = phi.rem_euclid(PI);
    if PI - p < 1e-15 {
        0.0
    } else {
        p
    }
}

/// Inverts the forward relations for a special-class state.
///
/// `|m|^2 = (n1 - eta1) ((n2+1/2)^2 - |m2|^2) / (n2+1/2)` and
/// `e^{2 i phi} = ((mu1 - m1) / (n1 - eta1)) (n2+1/2) / m2'`, where `m2' = m2*`
/// for the antidiagonal class and `m2` for the diagonal one. `mu1` is the
/// off-diagonal entry of the `Gamma1` block.
pub fn invert_special_class(
    v2: LocalBlock,
    eta1: f64,
    mu1: C64,
    n1: f64,
    m1: C64,
    tag: SpecialClassTag,
) -> Result<RecoveredCorrelation> {
    let mut dn = n1 - eta1;
    if dn < -CLAMP_TOL {
        return Err(Error::InconsistentInput(format!(
            "n1 - eta1 = {dn:e} is negative"
        )));
    }
    dn = dn.max(0.0);
    let a2 = v2.n + 0.5;
    let d = a2 * a2 - v2.m.norm_sqr();
    if a2 <= 0.0 || d <= 0.0 {
        return Err(Error::InvalidInput("V2 must be positive definite".into()));
    }
    let magnitude = (dn * d / a2).sqrt();
    if magnitude == 0.0 {
        return Ok(RecoveredCorrelation {
            magnitude,
            phase: 0.0,
            mod_pi: true,
        });
    }
    if v2.m.norm() <= PHASE_TOL {
        return Err(Error::PhaseUndetermined {
            magnitude,
            reason: "m2 = 0".into(),
        });
    }
    let diff = mu1 - m1;
    if diff.norm() <= PHASE_TOL * magnitude.max(1.0) {
        return Err(Error::InconsistentInput(
            "mu1 - m1 vanishes although m2 and the correlation do not".into(),
        ));
    }
    let m2i = match tag {
        SpecialClassTag::AntidiagonalMc => v2.m.conj(),
        SpecialClassTag::DiagonalMs => v2.m,
    };
    let e2 = diff / dn * a2 / m2i;
    Ok(RecoveredCorrelation {
        magnitude,
        phase: wrap_mod_pi(e2.arg() / 2.0),
        mod_pi: true,
    })
}

/// One-mode Gaussian unitary Bob applies before measuring: a squeezer
/// `(s, theta)` followed by a phase shift `phi`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BobTransform {
    pub s: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BobTransform {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn squeeze(s: f64, theta: f64) -> Self {
        Self { s, theta, phi: 0.0 }
    }

    pub fn bogoliubov(&self) -> Bogoliubov {
        Bogoliubov::squeeze(Mode::Two, self.s, self.theta)
            .then(&Bogoliubov::phase(Mode::Two, self.phi))
    }
}

/// Source of fresh local data after Bob applies a known transformation to
/// his mode before measuring.
pub trait RemeasurementProvider {
    fn remeasure(&mut self, bob_transform: &BobTransform) -> Result<LocalData>;
}

/// Provider backed by a known covariance matrix.
pub struct ExactGaussianProvider {
    state: CovarianceMatrix,
}

impl ExactGaussianProvider {
    pub fn new(state: CovarianceMatrix) -> Self {
        Self { state }
    }
}

impl RemeasurementProvider for ExactGaussianProvider {
    fn remeasure(&mut self, bob_transform: &BobTransform) -> Result<LocalData> {
        LocalData::from_state(&bob_transform.bogoliubov().apply(&self.state))
    }
}

/// Provider for data that has already been collected; it cannot measure
/// again.
pub struct StaticProvider;

impl RemeasurementProvider for StaticProvider {
    fn remeasure(&mut self, _: &BobTransform) -> Result<LocalData> {
        Err(Error::Unsupported(
            "static data cannot be re-measured".into(),
        ))
    }
}

/// Resolves the phase of a special-class correlation when `m2 = 0`.
///
/// Bob applies `bob_transform` to his mode, the transformed local data are
/// inverted for `m'`, and the correlation block is mapped back through the
/// inverse transform. `v1` is Alice's block, which the transform leaves
/// untouched.
pub fn phase_via_local_transform(
    v1: LocalBlock,
    v2_report: LocalBlock,
    tag: SpecialClassTag,
    bob_transform: &BobTransform,
    provider: &mut dyn RemeasurementProvider,
) -> Result<RecoveredCorrelation> {
    let data = provider.remeasure(bob_transform)?;
    let t = bob_transform.bogoliubov().local_covariance_block(Mode::Two);
    let expected_v2 = {
        let m = mul2(&mul2(&t, &v2_report.matrix()), &crate::linalg::adj2(&t));
        LocalBlock::from_matrix(&m)
    };
    if (expected_v2.n - data.v2.n).abs() > 1e-8 * (1.0 + data.v2.n.abs())
        || (expected_v2.m - data.v2.m).norm() > 1e-8 * (1.0 + data.v2.m.norm())
    {
        return Err(Error::InconsistentInput(
            "re-measured V2 does not match the transformed report".into(),
        ));
    }
    let g = data.gamma1;
    let primed = match invert_special_class(data.v2, g.n, g.m, data.v1.n, data.v1.m, tag) {
        Ok(r) => r,
        Err(Error::InconsistentInput(_)) | Err(Error::PhaseUndetermined { .. }) => {
            let magnitude = (v1.n - g.n).max(0.0) * (v2_report.det() / (v2_report.n + 0.5));
            return Err(Error::PhaseUndetermined {
                magnitude: magnitude.sqrt(),
                reason: "the transformed local data carry no phase information \
                         (mu1' - m1' = 0)"
                    .into(),
            });
        }
        Err(e) => return Err(e),
    };
    // C' = C T2†, so C = C' (T2†)^{-1}.
    let m = primed.value();
    let c_primed = match tag {
        SpecialClassTag::AntidiagonalMc => [[ZERO, m], [m.conj(), ZERO]],
        SpecialClassTag::DiagonalMs => [[m, ZERO], [ZERO, m.conj()]],
    };
    let t_adj = crate::linalg::adj2(&t);
    let back = inv2(&t_adj).ok_or_else(|| Error::SingularBlock("Bob transform".into()))?;
    let c = mul2(&c_primed, &back);
    let entry = match tag {
        SpecialClassTag::AntidiagonalMc => c[0][1],
        SpecialClassTag::DiagonalMs => c[0][0],
    };
    Ok(RecoveredCorrelation {
        magnitude: entry.norm(),
        phase: wrap_mod_pi(entry.arg()),
        mod_pi: true,
    })
}
