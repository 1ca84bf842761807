//! Schur complement `Gamma1 = V1 - C V2^{-1} C†` and its recovery from
//! parity-conditioned moments.

mod sgs;
mod special;

pub use sgs::{
    eta1_from_photocounts, m_c_from_eta1, phase_diagram, phase_diagram_csv, plot_script,
    sgs_bounds, Grid, GridParseError, PhaseCell, PhaseClass, BOUNDARY_TOL,
};
pub use special::{
    invert_special_class, phase_via_local_transform, BobTransform, ExactGaussianProvider,
    RecoveredCorrelation, RemeasurementProvider, SpecialClassTag, StaticProvider,
};

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, LocalBlock};
use crate::linalg::{adj2, inv2, mul2, C64};
use serde::{Deserialize, Serialize};

/// `|p_even - p_odd|` at or below which `Gamma1` is not recoverable.
pub const DEGENERACY_TOL: f64 = 1e-9;

pub fn schur_gamma1(v: &CovarianceMatrix) -> Result<LocalBlock> {
    let v2 = v.v2();
    if v2.det().abs() <= f64::EPSILON * (v2.n + 0.5).powi(2) {
        return Err(Error::SingularBlock(format!("det V2 = {:e}", v2.det())));
    }
    let inv = inv2(&v2.matrix()).ok_or_else(|| Error::SingularBlock("V2".into()))?;
    let c = v.c();
    let k = mul2(&mul2(&c, &inv), &adj2(&c));
    let g = v.v1().matrix();
    let d = [
        [g[0][0] - k[0][0], g[0][1] - k[0][1]],
        [g[1][0] - k[1][0], g[1][1] - k[1][1]],
    ];
    Ok(LocalBlock::from_matrix(&d))
}

/// Alice's mode-1 statistics split by Bob's parity outcome.
///
/// `n_*` are `<a1† a1>` and `sq_*` are `<a1^2>` under the normalised even
/// and odd conditional states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionedMoments {
    pub p_even: f64,
    pub p_odd: f64,
    pub n_even: f64,
    pub n_odd: f64,
    pub sq_even: C64,
    pub sq_odd: C64,
}

impl ConditionedMoments {
    pub fn validate(&self, tol: f64) -> Result<()> {
        let finite = [self.p_even, self.p_odd, self.n_even, self.n_odd]
            .iter()
            .chain(
                [
                    self.sq_even.re,
                    self.sq_even.im,
                    self.sq_odd.re,
                    self.sq_odd.im,
                ]
                .iter(),
            )
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidInput(
                "conditioned moments must be finite".into(),
            ));
        }
        if self.p_even < -tol || self.p_odd < -tol {
            return Err(Error::InvalidInput(
                "parity probabilities must be nonnegative".into(),
            ));
        }
        if (self.p_even + self.p_odd - 1.0).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "p_even + p_odd = {} differs from 1",
                self.p_even + self.p_odd
            )));
        }
        Ok(())
    }

    pub fn mean_parity(&self) -> f64 {
        self.p_even - self.p_odd
    }
}

/// How the even/odd moment difference is normalised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityNormalization {
    /// Moments of `sigma1 / Tr sigma1`: `(p_e E_e - p_o E_o) / (p_e - p_o)`.
    #[default]
    SigmaWeighted,
    /// `E_e - E_o` of the normalised conditional states.
    PlainDifference,
}

pub fn gamma1_from_conditioned(
    m: &ConditionedMoments,
    norm: ParityNormalization,
) -> Result<LocalBlock> {
    gamma1_from_conditioned_with(m, norm, DEGENERACY_TOL)
}

pub fn gamma1_from_conditioned_with(
    m: &ConditionedMoments,
    norm: ParityNormalization,
    degeneracy_tol: f64,
) -> Result<LocalBlock> {
    m.validate(1e-9)?;
    let mean_parity = m.mean_parity();
    if mean_parity.abs() <= degeneracy_tol {
        return Err(Error::DegenerateParity { mean_parity });
    }
    let (n, sq) = match norm {
        ParityNormalization::SigmaWeighted => (
            (m.p_even * m.n_even - m.p_odd * m.n_odd) / mean_parity,
            (m.sq_even * m.p_even - m.sq_odd * m.p_odd) / mean_parity,
        ),
        ParityNormalization::PlainDifference => (m.n_even - m.n_odd, m.sq_even - m.sq_odd),
    };
    // The block stores -<a^2>.
    Ok(LocalBlock::new(n, -sq))
}

/// `(n1 - eta1, m1 - mu1)` from the closed-form expressions in the entries
/// of `V`.
pub fn forward_relations(v: &CovarianceMatrix) -> Result<(f64, C64)> {
    let a2 = v.n2 + 0.5;
    let d = a2 * a2 - v.m2.norm_sqr();
    if d.abs() <= f64::EPSILON * a2 * a2 {
        return Err(Error::SingularBlock(format!("det V2 = {d:e}")));
    }
    let (m2, ms, mc) = (v.m2, v.ms, v.mc);
    let dn = ((mc.norm_sqr() + ms.norm_sqr()) * a2 - 2.0 * (m2 * ms * mc.conj()).re) / d;
    let dm = (ms * mc * (2.0 * a2) - m2.conj() * mc * mc - m2 * ms * ms) / d;
    Ok((dn, dm))
}
