//! Separability and entanglement from the locally obtainable blocks
//! `V1`, `V2` and `Gamma1`.
//!
//! The invariants are recovered without assuming any special form of `V`:
//! `|I3| = sqrt(I2 det(V1 - Gamma1))`, `IV = det V2 det Gamma1` and
//! `I4 = I1 I2 + I3^2 - I2 det Gamma1`. The sign of `I3` is not locally
//! accessible; it is set to negative exactly when the Simon test reports
//! entanglement.

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, I3Sign, InvariantSet, LocalBlock};
use crate::linalg::{self, det2, CMatrix, C64};
use serde::{Deserialize, Serialize};

/// The three blocks Alice holds at the end of the protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalData {
    pub v1: LocalBlock,
    pub v2: LocalBlock,
    pub gamma1: LocalBlock,
}

impl LocalData {
    pub fn new(v1: LocalBlock, v2: LocalBlock, gamma1: LocalBlock) -> Result<Self> {
        for (name, b) in [("V1", v1), ("V2", v2), ("Gamma1", gamma1)] {
            if !b.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{name} has non-finite entries"
                )));
            }
        }
        if v2.det() <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "det V2 = {:e} must be positive",
                v2.det()
            )));
        }
        Ok(Self { v1, v2, gamma1 })
    }

    /// Blocks of an exactly known state, with `Gamma1` its Schur complement.
    pub fn from_state(v: &CovarianceMatrix) -> Result<Self> {
        let g = crate::reconstruction::schur_gamma1(v)?;
        Self::new(v.v1(), v.v2(), g)
    }

    /// `det(V1 - Gamma1)`.
    pub fn correlation_det(&self) -> f64 {
        let a = self.v1.matrix();
        let b = self.gamma1.matrix();
        let d = [
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ];
        det2(&d).re
    }
}

/// Tolerances used when turning local data into a verdict.
///
/// Exact data uses the defaults; estimated data widens them according to
/// its statistical uncertainty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// `det(V1 - Gamma1)` below `-consistency_tol` is rejected; between
    /// `-consistency_tol` and 0 it is clamped to 0.
    pub consistency_tol: f64,
    /// Absolute tolerance on the Simon gap for the boundary flag.
    pub boundary_tol: f64,
    /// Relative tolerance `|I1 - I2| / max(I1, I2)` for treating the state as
    /// symmetric.
    pub symmetry_tol: f64,
    /// Forces the symmetric decision (used for bootstrap replicates).
    pub symmetric_override: Option<bool>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            consistency_tol: 1e-10,
            boundary_tol: 1e-12,
            symmetry_tol: 1e-9,
            symmetric_override: None,
        }
    }
}

pub fn invariants_from_local(d: &LocalData, cfg: &AnalysisConfig) -> Result<InvariantSet> {
    let i1 = d.v1.det();
    let i2 = d.v2.det();
    if i2 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "det V2 = {i2:e} must be positive"
        )));
    }
    let mut dc = d.correlation_det();
    if dc < -cfg.consistency_tol {
        return Err(Error::InconsistentLocalData {
            det: dc,
            tol: cfg.consistency_tol,
        });
    }
    if dc < 0.0 {
        dc = 0.0;
    }
    let det_g = d.gamma1.det();
    let i3_abs = (i2 * dc).sqrt();
    Ok(InvariantSet {
        i1,
        i2,
        i3_abs,
        i3_sign: I3Sign::Unknown,
        i4: i1 * i2 + i3_abs * i3_abs - i2 * det_g,
        iv: i2 * det_g,
    })
}

/// `|I3| = sqrt(I1 I2) - sqrt(IV)`.
///
/// Only valid for states obeying `I4 = 2 |I3| sqrt(I1 I2)`, e.g. standard
/// forms with equal-magnitude correlations such as the two-mode squeezed
/// vacuum and the symmetric thermal squeezed family.
pub fn i3_standard_form(i1: f64, i2: f64, iv: f64) -> Result<f64> {
    let p = i1 * i2;
    let slack = 8.0 * f64::EPSILON * p.abs();
    if iv < -slack || iv > p + slack {
        return Err(Error::OutOfDomain(format!(
            "need 0 <= IV <= I1 I2, got IV = {iv:e}, I1 I2 = {p:e}"
        )));
    }
    Ok((p.sqrt() - iv.max(0.0).sqrt()).max(0.0))
}

/// `I4 = 2 |I3| sqrt(I1 I2)`; holds only for the same restricted class as
/// [`i3_standard_form`].
pub fn i4_standard_form(i1: f64, i2: f64, i3_abs: f64) -> f64 {
    2.0 * i3_abs * (i1 * i2).sqrt()
}

/// `I1 I2 + (1/4 - |I3|)^2 - I4 - (I1 + I2)/4`; nonnegative iff separable.
pub fn simon_gap(i: &InvariantSet) -> f64 {
    i.i1 * i.i2 + (0.25 - i.i3_abs).powi(2) - i.i4 - (i.i1 + i.i2) / 4.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimonVerdict {
    pub separable: bool,
    pub boundary: bool,
    pub gap: f64,
}

pub fn simon_separable(i: &InvariantSet, boundary_tol: f64) -> SimonVerdict {
    let gap = simon_gap(i);
    let boundary = gap.abs() <= boundary_tol;
    SimonVerdict {
        separable: gap >= 0.0 || boundary,
        boundary,
        gap,
    }
}

/// `V - I/2 >= 0`.
pub fn p_representable(v: &CovarianceMatrix, tol: f64) -> bool {
    let mut m: CMatrix = v.cmatrix();
    for k in 0..4 {
        m[(k, k)] -= C64::new(0.5, 0.0);
    }
    linalg::eigvalsh_jacobi(&m)[0] >= -tol
}

fn entropy_term(c: f64) -> f64 {
    if c <= 0.0 {
        0.0
    } else {
        c * c.log2()
    }
}

/// `f(x) = c+ log2 c+ - c- log2 c-`, `c± = (x^{-1/2} ± x^{1/2})^2 / 4`.
pub fn eof_function(x: f64) -> f64 {
    if x >= 1.0 {
        return 0.0;
    }
    let (a, b) = (x.powf(-0.5), x.sqrt());
    let cp = (a + b).powi(2) / 4.0;
    let cm = (a - b).powi(2) / 4.0;
    entropy_term(cp) - entropy_term(cm)
}

/// Entanglement of formation (bits) of a symmetric state,
/// `f(2 sqrt(I1 + |I3| - sqrt(I4 + 2 I1 |I3|)))`.
///
/// Returns 0 when the invariants describe a separable state.
pub fn eof_symmetric(i: &InvariantSet, symmetry_tol: f64, tol: f64) -> Result<f64> {
    if !is_symmetric(i, symmetry_tol) {
        return Err(Error::InvalidInput(format!(
            "entanglement of formation needs I1 = I2 (got {} and {})",
            i.i1, i.i2
        )));
    }
    eof_symmetric_unchecked(i, tol)
}

fn eof_symmetric_unchecked(i: &InvariantSet, tol: f64) -> Result<f64> {
    if simon_gap(i) >= 0.0 {
        return Ok(0.0);
    }
    let inner = i.i4 + 2.0 * i.i1 * i.i3_abs;
    if inner < -tol {
        return Err(Error::NumericalInconsistency(format!(
            "I4 + 2 I1 |I3| = {inner:e} is negative"
        )));
    }
    let mut rad = i.i1 + i.i3_abs - inner.max(0.0).sqrt();
    if rad < -tol {
        return Err(Error::NumericalInconsistency(format!(
            "EoF radicand {rad:e} is negative"
        )));
    }
    rad = rad.max(0.0);
    if rad == 0.0 {
        return Err(Error::NumericalInconsistency(
            "EoF argument vanishes (unphysical invariants)".into(),
        ));
    }
    Ok(eof_function(2.0 * rad.sqrt()))
}

/// [`eof_symmetric`] evaluated as `f(2 nu)`, `nu` the smallest symplectic
/// eigenvalue of the partial transpose.
///
/// For symmetric invariants the radicand of the direct formula equals `nu^2`;
/// this form avoids its cancellation near pure states, where estimated
/// invariants would otherwise give a negative radicand.
pub fn eof_symmetric_pt(i: &InvariantSet) -> Result<f64> {
    if simon_gap(i) >= 0.0 {
        return Ok(0.0);
    }
    let i = InvariantSet {
        i3_sign: I3Sign::Negative,
        ..*i
    };
    let nu = pt_symplectic_min(&i, 1e-10)?;
    if nu == 0.0 {
        return Err(Error::NumericalInconsistency(
            "EoF argument vanishes (unphysical invariants)".into(),
        ));
    }
    Ok(eof_function(2.0 * nu))
}

pub fn is_symmetric(i: &InvariantSet, symmetry_tol: f64) -> bool {
    let scale = i.i1.abs().max(i.i2.abs());
    scale == 0.0 || (i.i1 - i.i2).abs() / scale <= symmetry_tol
}

/// Smallest symplectic eigenvalue of the partially transposed state,
/// `nu^2 = (D - sqrt(D^2 - 4 IV)) / 2` with `D = I1 + I2 - 2 I3`.
pub fn pt_symplectic_min(i: &InvariantSet, tol: f64) -> Result<f64> {
    let i3 = i.i3().ok_or(Error::SignUnresolved)?;
    let delta = i.i1 + i.i2 - 2.0 * i3;
    let disc = delta * delta - 4.0 * i.iv;
    if disc < -tol * delta.abs().max(1.0).powi(2) {
        return Err(Error::NumericalInconsistency(format!(
            "negative discriminant {disc:e} in the partial-transpose spectrum"
        )));
    }
    let nu2 = (delta - disc.max(0.0).sqrt()) / 2.0;
    // For pure states this difference cancels badly; IV / (largest root) is exact.
    let big = (delta + disc.max(0.0).sqrt()) / 2.0;
    let nu2 = if big > 0.0 {
        (i.iv / big).max(nu2.min(i.iv / big))
    } else {
        nu2
    };
    Ok(nu2.max(0.0).sqrt())
}

/// Logarithmic negativity in bits, `max(0, -log2(2 nu))`.
pub fn log_negativity(i: &InvariantSet) -> Result<f64> {
    if i.i3_sign == I3Sign::Unknown && i.i3_abs > 0.0 {
        return Err(Error::SignUnresolved);
    }
    let i = if i.i3_sign == I3Sign::Unknown {
        InvariantSet {
            i3_sign: I3Sign::Nonneg,
            ..*i
        }
    } else {
        *i
    };
    let nu = pt_symplectic_min(&i, 1e-10)?;
    if nu == 0.0 {
        return Err(Error::NumericalInconsistency(
            "vanishing partial-transpose symplectic eigenvalue".into(),
        ));
    }
    Ok((-(2.0 * nu).log2()).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementReport {
    pub separable: bool,
    pub boundary_flag: bool,
    pub simon_gap: f64,
    pub invariants: InvariantSet,
    pub purity: f64,
    pub eof_bits: Option<f64>,
    pub log_negativity_bits: f64,
    pub symmetric: bool,
}

/// Flat serialised form with fixed field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub separable: bool,
    pub purity: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3_abs: f64,
    pub i3_sign: I3Sign,
    pub i4: f64,
    pub iv: f64,
    pub eof_bits: Option<f64>,
    pub log_negativity_bits: f64,
    pub symmetric: bool,
    pub boundary_flag: bool,
    pub simon_gap: f64,
}

impl Serialize for EntanglementReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for EntanglementReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ReportJson::deserialize(d).map(Into::into)
    }
}

impl From<&EntanglementReport> for ReportJson {
    fn from(r: &EntanglementReport) -> Self {
        let i = &r.invariants;
        Self {
            separable: r.separable,
            purity: r.purity,
            i1: i.i1,
            i2: i.i2,
            i3_abs: i.i3_abs,
            i3_sign: i.i3_sign,
            i4: i.i4,
            iv: i.iv,
            eof_bits: r.eof_bits,
            log_negativity_bits: r.log_negativity_bits,
            symmetric: r.symmetric,
            boundary_flag: r.boundary_flag,
            simon_gap: r.simon_gap,
        }
    }
}

impl From<ReportJson> for EntanglementReport {
    fn from(j: ReportJson) -> Self {
        Self {
            separable: j.separable,
            boundary_flag: j.boundary_flag,
            simon_gap: j.simon_gap,
            invariants: InvariantSet {
                i1: j.i1,
                i2: j.i2,
                i3_abs: j.i3_abs,
                i3_sign: j.i3_sign,
                i4: j.i4,
                iv: j.iv,
            },
            purity: j.purity,
            eof_bits: j.eof_bits,
            log_negativity_bits: j.log_negativity_bits,
            symmetric: j.symmetric,
        }
    }
}

pub fn analyze(d: &LocalData) -> Result<EntanglementReport> {
    analyze_with(d, &AnalysisConfig::default())
}

pub fn analyze_with(d: &LocalData, cfg: &AnalysisConfig) -> Result<EntanglementReport> {
    let mut inv = invariants_from_local(d, cfg)?;
    if inv.iv <= 0.0 {
        return Err(Error::InvalidState(format!(
            "det V2 det Gamma1 = {:e} is not positive",
            inv.iv
        )));
    }
    let purity = 1.0 / (4.0 * inv.iv.sqrt());
    let verdict = simon_separable(&inv, cfg.boundary_tol);
    let symmetric = cfg
        .symmetric_override
        .unwrap_or_else(|| is_symmetric(&inv, cfg.symmetry_tol));
    let (eof, log_neg) = if verdict.separable {
        (symmetric.then_some(0.0), 0.0)
    } else {
        inv.i3_sign = I3Sign::Negative;
        let eof = if symmetric {
            Some(eof_symmetric_pt(&inv)?)
        } else {
            None
        };
        (eof, log_negativity(&inv)?)
    };
    Ok(EntanglementReport {
        separable: verdict.separable,
        boundary_flag: verdict.boundary,
        simon_gap: verdict.gap,
        invariants: inv,
        purity,
        eof_bits: eof,
        log_negativity_bits: log_neg,
        symmetric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use approx::assert_abs_diff_eq;

    /// Von Neumann entropy (bits) of a thermal state by direct summation of
    /// its photon-number distribution.
    fn thermal_entropy_series(nbar: f64) -> f64 {
        let q = nbar / (nbar + 1.0);
        let mut p = 1.0 / (nbar + 1.0);
        let mut s = 0.0;
        for _ in 0..20_000 {
            if p < 1e-300 {
                break;
            }
            s -= p * p.log2();
            p *= q;
        }
        s
    }

    fn counterexample() -> CovarianceMatrix {
        CovarianceMatrix::new(1.0, 1.0, ZERO, ZERO, C64::new(0.5, 0.0), C64::new(0.3, 0.0)).unwrap()
    }

    #[test]
    fn vacuum_local_pipeline() {
        let vac = LocalBlock::vacuum();
        let d = LocalData::new(vac, vac, vac).unwrap();
        let i = invariants_from_local(&d, &AnalysisConfig::default()).unwrap();
        assert_eq!(i.i3_abs, 0.0);
        assert_abs_diff_eq!(i.i4, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(i.iv, 1.0 / 16.0, epsilon = 1e-16);
        let r = analyze(&d).unwrap();
        assert!(r.separable);
        assert!(r.boundary_flag);
        assert_abs_diff_eq!(r.purity, 1.0, epsilon = 1e-15);
        assert_eq!(r.eof_bits, Some(0.0));
        assert_eq!(r.log_negativity_bits, 0.0);
    }

    #[test]
    fn tmsv_r1_local_pipeline() {
        let v = CovarianceMatrix::tmsv(1.0);
        let d = LocalData::from_state(&v).unwrap();
        let i = invariants_from_local(&d, &AnalysisConfig::default()).unwrap();
        let (sh, ch) = (1f64.sinh(), 1f64.cosh());
        // sinh^2(1) cosh^2(1) = 3.2886...
        assert_abs_diff_eq!(i.i3_abs, sh * sh * ch * ch, epsilon = 1e-12);
        assert_abs_diff_eq!(i.iv, 1.0 / 16.0, epsilon = 1e-12);
        let r = analyze(&d).unwrap();
        assert!(!r.separable);
        assert_eq!(r.invariants.i3_sign, I3Sign::Negative);
        assert_abs_diff_eq!(r.purity, 1.0, epsilon = 1e-10);
        let ef = r.eof_bits.unwrap();
        let expect = ch * ch * (ch * ch).log2() - sh * sh * (sh * sh).log2();
        assert_abs_diff_eq!(ef, expect, epsilon = 1e-10);
        assert_abs_diff_eq!(ef, 2.337, epsilon = 1e-3);
        assert_abs_diff_eq!(
            r.log_negativity_bits,
            2.0 / std::f64::consts::LN_2,
            epsilon = 1e-10
        );
    }

    #[test]
    fn counterexample_pipeline_matches_direct() {
        let v = counterexample();
        let d = LocalData::from_state(&v).unwrap();
        let local = invariants_from_local(&d, &AnalysisConfig::default()).unwrap();
        let direct = v.invariants_direct();
        assert_abs_diff_eq!(local.i4, 1.53, epsilon = 1e-12);
        assert_abs_diff_eq!(local.i4, direct.i4, epsilon = 1e-12);
        assert_abs_diff_eq!(local.i3_abs, 0.16, epsilon = 1e-12);
        let predicted = i4_standard_form(local.i1, local.i2, local.i3_abs);
        assert_abs_diff_eq!(predicted, 0.72, epsilon = 1e-12);
        assert!((predicted - direct.i4).abs() > 0.5);
    }

    #[test]
    fn i3_standard_form_scope() {
        let t = CovarianceMatrix::tmsv(1.0).invariants_direct();
        let i3 = i3_standard_form(t.i1, t.i2, t.iv).unwrap();
        assert_abs_diff_eq!(i3, t.i3_abs, epsilon = 1e-10);
        let vac = CovarianceMatrix::vacuum().invariants_direct();
        assert_abs_diff_eq!(
            i3_standard_form(vac.i1, vac.i2, vac.iv).unwrap(),
            0.0,
            epsilon = 1e-16
        );
        let ce = counterexample().invariants_direct();
        let bad = i3_standard_form(ce.i1, ce.i2, ce.iv).unwrap();
        assert!((bad - 0.16).abs() / 0.16 > 0.1);
        assert!(matches!(
            i3_standard_form(1.0, 1.0, 2.0),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn i4_standard_form_on_special_states() {
        let t = CovarianceMatrix::tmsv(1.0).invariants_direct();
        assert_abs_diff_eq!(
            i4_standard_form(t.i1, t.i2, t.i3_abs),
            t.i4,
            epsilon = 1e-10
        );
        let e = CovarianceMatrix::thermal_squeezed(1.0, 1.0).invariants_direct();
        assert_abs_diff_eq!(i4_standard_form(e.i1, e.i2, e.i3_abs), 4.5, epsilon = 1e-13);
        assert_abs_diff_eq!(e.i4, 4.5, epsilon = 1e-13);
    }

    #[test]
    fn simon_gap_for_tmsv_is_quarter_minus_u() {
        for r in [0.5, 1.0, 2.0] {
            let s = f64::sinh(r).powi(2);
            let u = (s + 0.5).powi(2);
            let i = CovarianceMatrix::tmsv(r).invariants_direct();
            let v = simon_separable(&i, 1e-12);
            assert!(!v.separable);
            assert_abs_diff_eq!(v.gap, 0.25 - u, epsilon = 1e-9 * u * u);
        }
    }

    #[test]
    fn simon_flips_at_mc_equals_n() {
        let n = 1.0;
        let below = CovarianceMatrix::thermal_squeezed(n, n - 1e-6).invariants_direct();
        let above = CovarianceMatrix::thermal_squeezed(n, n + 1e-6).invariants_direct();
        assert!(simon_gap(&below) > 0.0);
        assert!(simon_gap(&above) < 0.0);
        assert!(simon_separable(&below, 1e-12).separable);
        assert!(!simon_separable(&above, 1e-12).separable);
    }

    #[test]
    fn p_representability_on_thermal_squeezed_family() {
        assert!(p_representable(&CovarianceMatrix::vacuum(), 1e-10));
        let sep = CovarianceMatrix::thermal_squeezed(1.0, 0.5);
        assert!(p_representable(&sep, 1e-10));
        let ent = CovarianceMatrix::thermal_squeezed(1.0, 1.2);
        assert!(!p_representable(&ent, 1e-10));
        assert!(!simon_separable(&ent.invariants_direct(), 1e-12).separable);
    }

    #[test]
    fn eof_matches_reduced_entropy_on_tmsv() {
        for k in 1..=20 {
            let r = 0.1 * k as f64;
            let i = CovarianceMatrix::tmsv(r).invariants_direct();
            let ef = eof_symmetric(&i, 1e-9, 1e-10).unwrap();
            let oracle = thermal_entropy_series(r.sinh().powi(2));
            assert_abs_diff_eq!(ef, oracle, epsilon = 1e-9);
        }
    }

    #[test]
    fn eof_zero_for_separable_and_rejects_asymmetric() {
        let sep = CovarianceMatrix::thermal_squeezed(1.0, 0.5).invariants_direct();
        assert_eq!(eof_symmetric(&sep, 1e-9, 1e-10).unwrap(), 0.0);
        let asym = CovarianceMatrix::product(LocalBlock::thermal(1.0), LocalBlock::vacuum())
            .invariants_direct();
        assert!(eof_symmetric(&asym, 1e-9, 1e-10).is_err());
        // continuity at r -> 0
        let tiny = CovarianceMatrix::tmsv(1e-4).invariants_direct();
        assert!(eof_symmetric(&tiny, 1e-9, 1e-10).unwrap() < 1e-6);
    }

    #[test]
    fn partial_transpose_form_of_eof_agrees() {
        let mut states: Vec<CovarianceMatrix> = (1..=20)
            .map(|k| CovarianceMatrix::tmsv(0.1 * k as f64))
            .collect();
        for (n, mc) in [(0.5, 0.6), (1.0, 1.2), (1.5, 1.7), (2.0, 2.4)] {
            states.push(CovarianceMatrix::thermal_squeezed(n, mc));
        }
        for (ms, mc) in [(0.2, 0.9), (0.4, 0.7), (0.1, 1.1)] {
            states.push(
                CovarianceMatrix::new(1.0, 1.0, ZERO, ZERO, C64::new(ms, 0.0), C64::new(mc, 0.0))
                    .unwrap(),
            );
        }
        let mut entangled = 0;
        for v in states {
            let i = v.invariants_direct();
            let direct = eof_symmetric(&i, 1e-9, 1e-10).unwrap();
            entangled += (direct > 0.0) as usize;
            assert_abs_diff_eq!(
                eof_symmetric_pt(&i).unwrap(),
                direct,
                epsilon = 1e-9 * direct.max(1.0)
            );
        }
        assert!(entangled >= 25, "{entangled}");
        let sep = CovarianceMatrix::thermal_squeezed(1.0, 0.5).invariants_direct();
        assert_eq!(eof_symmetric_pt(&sep).unwrap(), 0.0);
    }

    #[test]
    fn log_negativity_of_tmsv() {
        for r in [0.25, 1.0, 1.5] {
            let i = CovarianceMatrix::tmsv(r).invariants_direct();
            let en = log_negativity(&i).unwrap();
            assert_abs_diff_eq!(en, 2.0 * r / std::f64::consts::LN_2, epsilon = 1e-9);
        }
        assert_eq!(
            log_negativity(&CovarianceMatrix::vacuum().invariants_direct()).unwrap(),
            0.0
        );
        let e = CovarianceMatrix::thermal_squeezed(1.0, 1.2).invariants_direct();
        assert!(log_negativity(&e).unwrap() > 0.0);
    }

    #[test]
    fn log_negativity_requires_sign() {
        let mut i = CovarianceMatrix::tmsv(0.5).invariants_direct();
        i.i3_sign = I3Sign::Unknown;
        assert_eq!(log_negativity(&i), Err(Error::SignUnresolved));
    }

    #[test]
    fn inconsistent_local_data_is_rejected() {
        let v1 = LocalBlock::vacuum();
        let g = LocalBlock::new(0.0, C64::new(0.3, 0.0));
        let d = LocalData::new(v1, LocalBlock::vacuum(), g).unwrap();
        assert!(matches!(
            invariants_from_local(&d, &AnalysisConfig::default()),
            Err(Error::InconsistentLocalData { .. })
        ));
    }

    #[test]
    fn boundary_thermal_squeezed_state() {
        // n = 1, mc = 1 sits on the separability boundary; eta1 = 1/3.
        let v = CovarianceMatrix::thermal_squeezed(1.0, 1.0);
        let d = LocalData::from_state(&v).unwrap();
        assert_abs_diff_eq!(d.gamma1.n, 1.0 / 3.0, epsilon = 1e-14);
        let r = analyze(&d).unwrap();
        assert!(r.separable && r.boundary_flag);
        assert_abs_diff_eq!(r.purity, 0.2, epsilon = 1e-13);
    }

    #[test]
    fn report_json_field_names() {
        let r = analyze(&LocalData::from_state(&CovarianceMatrix::tmsv(1.0)).unwrap()).unwrap();
        let v = serde_json::to_value(r).unwrap();
        for key in [
            "separable",
            "purity",
            "i1",
            "i2",
            "i3_abs",
            "i4",
            "iv",
            "eof_bits",
            "log_negativity_bits",
            "symmetric",
            "boundary_flag",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: EntanglementReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
