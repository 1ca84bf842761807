//! Two-mode Gaussian covariance matrices in the complex `(a1, a1†, a2, a2†)`
//! ordering.
//!
//! A [`CovarianceMatrix`] is stored through its six defining parameters:
//!
//! ```text
//!     | n1+1/2   m1       ms       mc     |
//! V = | m1*      n1+1/2   mc*      ms*    |
//!     | ms*      mc       n2+1/2   m2     |
//!     | mc*      ms       m2*      n2+1/2 |
//! ```
//!
//! with `V_ij = (-1)^(i+j) <v_i v_j† + v_j† v_i> / 2`, so that
//! `n_k = <a_k† a_k>`, `m_k = -<a_k^2>`, `mc = -<a1 a2>` and `ms = <a1 a2†>`.
//! Units are natural (vacuum variance 1/2).

mod json;
mod random;
mod symplectic;

pub use json::{StateJson, StateParseError};
pub use random::random_physical_state;
pub use symplectic::{Bogoliubov, Mode};

use crate::error::{Error, Result};
use crate::linalg::{self, det2, mul2, CMatrix, C64, ZERO};
use serde::{Deserialize, Serialize};

/// Absolute eigenvalue threshold for positive-semidefiniteness tests.
pub const PSD_TOL: f64 = 1e-10;

/// One-mode block `[[n + 1/2, m], [m*, n + 1/2]]`.
///
/// Used for the reduced blocks `V1`, `V2` and for the Schur complement
/// `Gamma1`, which is not required to describe a physical state (its `n`
/// may be negative).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalBlock {
    pub n: f64,
    pub m: C64,
}

impl LocalBlock {
    pub fn new(n: f64, m: C64) -> Self {
        Self { n, m }
    }

    pub fn vacuum() -> Self {
        Self::new(0.0, ZERO)
    }

    pub fn thermal(n: f64) -> Self {
        Self::new(n, ZERO)
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let d = C64::new(self.n + 0.5, 0.0);
        [[d, self.m], [self.m.conj(), d]]
    }

    /// Reads a block from a 2x2 matrix of the `[[x, y], [y*, x]]` shape,
    /// averaging away rounding noise in the redundant entries.
    pub fn from_matrix(m: &[[C64; 2]; 2]) -> Self {
        let diag = 0.5 * (m[0][0].re + m[1][1].re);
        let off = 0.5 * (m[0][1] + m[1][0].conj());
        Self::new(diag - 0.5, off)
    }

    pub fn det(&self) -> f64 {
        (self.n + 0.5).powi(2) - self.m.norm_sqr()
    }

    /// One-mode positivity and uncertainty: `n + 1/2 >= |m|` and `det >= 1/4`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.n + 0.5 + tol >= self.m.norm() && self.det() >= 0.25 - tol
    }

    pub fn is_finite(&self) -> bool {
        self.n.is_finite() && self.m.re.is_finite() && self.m.im.is_finite()
    }

    /// Real quadrature covariance `[[<x^2>, <{x,p}>/2], [.., <p^2>]]`.
    pub fn to_real(&self) -> [[f64; 2]; 2] {
        let d = self.n + 0.5;
        [[d - self.m.re, -self.m.im], [-self.m.im, d + self.m.re]]
    }

    pub fn from_real(r: &[[f64; 2]; 2]) -> Self {
        let d = 0.5 * (r[0][0] + r[1][1]);
        let re = 0.5 * (r[1][1] - r[0][0]);
        let im = -0.5 * (r[0][1] + r[1][0]);
        Self::new(d - 0.5, C64::new(re, im))
    }
}

/// Positivity flags returned by [`CovarianceMatrix::check_physical`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhysicalFlags {
    /// `V >= 0`.
    pub positive: bool,
    /// `V + E/2 >= 0`, `E = diag(Z, Z)`, `Z = diag(1, -1)`.
    pub uncertainty: bool,
}

impl PhysicalFlags {
    pub fn is_physical(&self) -> bool {
        self.positive && self.uncertainty
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceMatrix {
    pub n1: f64,
    pub n2: f64,
    pub m1: C64,
    pub m2: C64,
    pub ms: C64,
    pub mc: C64,
}

impl CovarianceMatrix {
    /// Assembles `V` from its six parameters. Physicality is not checked.
    pub fn new(n1: f64, n2: f64, m1: C64, m2: C64, ms: C64, mc: C64) -> Result<Self> {
        let v = Self {
            n1,
            n2,
            m1,
            m2,
            ms,
            mc,
        };
        if let Some(name) = v.first_non_finite() {
            return Err(Error::InvalidInput(format!(
                "parameter {name} is not finite"
            )));
        }
        Ok(v)
    }

    fn first_non_finite(&self) -> Option<&'static str> {
        let fin = |z: C64| z.re.is_finite() && z.im.is_finite();
        if !self.n1.is_finite() {
            Some("n1")
        } else if !self.n2.is_finite() {
            Some("n2")
        } else if !fin(self.m1) {
            Some("m1")
        } else if !fin(self.m2) {
            Some("m2")
        } else if !fin(self.ms) {
            Some("ms")
        } else if !fin(self.mc) {
            Some("mc")
        } else {
            None
        }
    }

    pub fn vacuum() -> Self {
        Self::product(LocalBlock::vacuum(), LocalBlock::vacuum())
    }

    pub fn product(v1: LocalBlock, v2: LocalBlock) -> Self {
        Self {
            n1: v1.n,
            n2: v2.n,
            m1: v1.m,
            m2: v2.m,
            ms: ZERO,
            mc: ZERO,
        }
    }

    /// Two-mode squeezed vacuum: `n = sinh^2 r`, `mc = sinh r cosh r`.
    pub fn tmsv(r: f64) -> Self {
        let s = r.sinh();
        Self::thermal_squeezed(s * s, s * r.cosh())
    }

    /// Symmetric thermal squeezed state: `n1 = n2 = n`, real `mc`, all other
    /// parameters zero.
    pub fn thermal_squeezed(n: f64, mc: f64) -> Self {
        Self {
            n1: n,
            n2: n,
            m1: ZERO,
            m2: ZERO,
            ms: ZERO,
            mc: C64::new(mc, 0.0),
        }
    }

    pub fn v1(&self) -> LocalBlock {
        LocalBlock::new(self.n1, self.m1)
    }

    pub fn v2(&self) -> LocalBlock {
        LocalBlock::new(self.n2, self.m2)
    }

    /// Correlation block `C = [[ms, mc], [mc*, ms*]]`.
    pub fn c(&self) -> [[C64; 2]; 2] {
        [[self.ms, self.mc], [self.mc.conj(), self.ms.conj()]]
    }

    pub fn matrix(&self) -> [[C64; 4]; 4] {
        let a1 = C64::new(self.n1 + 0.5, 0.0);
        let a2 = C64::new(self.n2 + 0.5, 0.0);
        let (m1, m2, ms, mc) = (self.m1, self.m2, self.ms, self.mc);
        [
            [a1, m1, ms, mc],
            [m1.conj(), a1, mc.conj(), ms.conj()],
            [ms.conj(), mc, a2, m2],
            [mc.conj(), ms, m2.conj(), a2],
        ]
    }

    /// Reads the six parameters back from a 4x4 matrix with the structure of
    /// [`matrix`](Self::matrix), averaging redundant entries. Returns an
    /// error when the matrix departs from that structure by more than `tol`.
    pub fn from_matrix(m: &[[C64; 4]; 4], tol: f64) -> Result<Self> {
        let avg = |a: C64, b: C64| 0.5 * (a + b);
        let v = Self {
            n1: 0.5 * (m[0][0].re + m[1][1].re) - 0.5,
            n2: 0.5 * (m[2][2].re + m[3][3].re) - 0.5,
            m1: avg(m[0][1], m[1][0].conj()),
            m2: avg(m[2][3], m[3][2].conj()),
            ms: avg(m[0][2], m[1][3].conj()),
            mc: avg(m[0][3], m[1][2].conj()),
        };
        let rebuilt = v.matrix();
        let scale = m.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        let defect = m
            .iter()
            .flatten()
            .zip(rebuilt.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if defect > tol * scale {
            return Err(Error::InvalidInput(format!(
                "matrix is not a two-mode covariance matrix (structure defect {defect:e})"
            )));
        }
        Self::new(v.n1, v.n2, v.m1, v.m2, v.ms, v.mc)
    }

    pub fn cmatrix(&self) -> CMatrix {
        CMatrix::from_rows(&self.matrix())
    }

    pub fn det(&self) -> f64 {
        linalg::det(&self.cmatrix()).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh_jacobi(&self.cmatrix())
    }

    /// Positivity and generalised uncertainty via smallest eigenvalues.
    pub fn check_physical(&self) -> PhysicalFlags {
        self.check_physical_with(PSD_TOL)
    }

    pub fn check_physical_with(&self, tol: f64) -> PhysicalFlags {
        let m = self.cmatrix();
        let positive = linalg::eigvalsh_jacobi(&m)[0] >= -tol;
        let mut shifted = m;
        for (i, z) in [0.5, -0.5, 0.5, -0.5].into_iter().enumerate() {
            shifted[(i, i)] += C64::new(z, 0.0);
        }
        let uncertainty = linalg::eigvalsh_jacobi(&shifted)[0] >= -tol;
        PhysicalFlags {
            positive,
            uncertainty,
        }
    }

    /// `1 / (4 sqrt(det V))`.
    pub fn purity(&self) -> Result<f64> {
        let d = self.det();
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::InvalidState(format!(
                "det V = {d:e} is not positive"
            )));
        }
        Ok(1.0 / (4.0 * d.sqrt()))
    }

    /// The local symplectic invariants computed from the full matrix.
    pub fn invariants_direct(&self) -> InvariantSet {
        let c = self.c();
        let i3 = det2(&c).re;
        let z = [[C64::new(1.0, 0.0), ZERO], [ZERO, C64::new(-1.0, 0.0)]];
        let zcz = mul2(&mul2(&z, &c), &z);
        let c_adj = linalg::adj2(&c);
        let zcaz = mul2(&mul2(&z, &c_adj), &z);
        let prod = mul2(
            &mul2(&mul2(&self.v1().matrix(), &zcz), &self.v2().matrix()),
            &zcaz,
        );
        let i4 = (prod[0][0] + prod[1][1]).re;
        InvariantSet {
            i1: self.v1().det(),
            i2: self.v2().det(),
            i3_abs: i3.abs(),
            i3_sign: if i3 < 0.0 {
                I3Sign::Negative
            } else {
                I3Sign::Nonneg
            },
            i4,
            iv: self.det(),
        }
    }

    pub fn to_real_form(&self) -> RealQuadratureForm {
        let omega = omega4();
        let r = omega.matmul(&self.cmatrix()).matmul(&omega.adjoint());
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = r[(i, j)].re;
            }
        }
        RealQuadratureForm(out)
    }

    pub fn from_real_form(r: &RealQuadratureForm) -> Result<Self> {
        let omega = omega4();
        let rm = CMatrix::from_fn(4, 4, |i, j| C64::new(r.0[i][j], 0.0));
        let v = omega.adjoint().matmul(&rm).matmul(&omega);
        Self::from_matrix(&v.to_array(), 1e-12)
    }

    pub fn is_finite(&self) -> bool {
        self.first_non_finite().is_none()
    }
}

/// Per-mode map from `(a, a†)` with the covariance sign convention to `(x, p)`,
/// `x = (a + a†)/sqrt 2`, `p = -i (a - a†)/sqrt 2`.
fn omega4() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let blk = [
        [C64::new(h, 0.0), C64::new(-h, 0.0)],
        [C64::new(0.0, -h), C64::new(0.0, -h)],
    ];
    CMatrix::from_fn(4, 4, |i, j| {
        if i / 2 == j / 2 {
            blk[i % 2][j % 2]
        } else {
            ZERO
        }
    })
}

/// Real symmetric covariance over `(x1, p1, x2, p2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealQuadratureForm(pub [[f64; 4]; 4]);

impl RealQuadratureForm {
    pub fn block(&self, mode: Mode) -> [[f64; 2]; 2] {
        let o = mode.offset();
        [
            [self.0[o][o], self.0[o][o + 1]],
            [self.0[o + 1][o], self.0[o + 1][o + 1]],
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum I3Sign {
    Negative,
    Nonneg,
    Unknown,
}

/// `I1 = det V1`, `I2 = det V2`, `I3 = det C`, `I4 = tr(V1 Z C Z V2 Z C† Z)`,
/// `IV = det V`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub i1: f64,
    pub i2: f64,
    pub i3_abs: f64,
    pub i3_sign: I3Sign,
    pub i4: f64,
    pub iv: f64,
}

impl InvariantSet {
    pub fn i3(&self) -> Option<f64> {
        match self.i3_sign {
            I3Sign::Negative => Some(-self.i3_abs),
            I3Sign::Nonneg => Some(self.i3_abs),
            I3Sign::Unknown => None,
        }
    }

    /// `IV - (I1 I2 - I4 + I3^2)`.
    pub fn iv_residual(&self) -> f64 {
        self.iv - (self.i1 * self.i2 - self.i4 + self.i3_abs * self.i3_abs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vacuum_is_half_identity() {
        let v = CovarianceMatrix::new(0.0, 0.0, ZERO, ZERO, ZERO, ZERO).unwrap();
        let m = v.matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert_eq!(*z, c(expect, 0.0));
            }
        }
        assert_eq!(
            v.check_physical(),
            PhysicalFlags {
                positive: true,
                uncertainty: true
            }
        );
        assert_abs_diff_eq!(v.purity().unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn non_finite_parameter_is_rejected() {
        let err = CovarianceMatrix::new(0.0, f64::NAN, ZERO, ZERO, ZERO, ZERO).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(ref s) if s.contains("n2")));
        let err =
            CovarianceMatrix::new(0.0, 0.0, ZERO, ZERO, c(f64::INFINITY, 0.0), ZERO).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(ref s) if s.contains("ms")));
    }

    #[test]
    fn assembled_matrix_is_hermitian() {
        let v = CovarianceMatrix::new(
            0.3,
            1.1,
            c(0.1, -0.2),
            c(-0.05, 0.3),
            c(0.2, 0.1),
            c(0.4, -0.3),
        )
        .unwrap();
        assert_eq!(v.cmatrix().hermiticity_defect(), 0.0);
    }

    #[test]
    fn tmsv_is_pure_and_physical() {
        for k in 0..=8 {
            let r = 0.25 * k as f64;
            let v = CovarianceMatrix::tmsv(r);
            assert!(v.check_physical().is_physical(), "r = {r}");
            assert_abs_diff_eq!(v.purity().unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn thermal_squeezed_purity() {
        let v = CovarianceMatrix::thermal_squeezed(1.0, 1.0);
        assert_abs_diff_eq!(v.det(), 1.5625, epsilon = 1e-14);
        assert_abs_diff_eq!(v.purity().unwrap(), 0.2, epsilon = 1e-14);
    }

    #[test]
    fn uncertainty_violation_below_pure_curve() {
        // n = 1 admits mc up to sqrt(2); 1.5 is beyond it.
        let v = CovarianceMatrix::thermal_squeezed(1.0, 1.5);
        assert!(!v.check_physical().uncertainty);
        let pure = CovarianceMatrix::thermal_squeezed(1.0, 2f64.sqrt());
        assert!(pure.check_physical().uncertainty);
    }

    #[test]
    fn purity_rejects_non_positive_determinant() {
        let v = CovarianceMatrix::new(-0.5, 0.0, ZERO, ZERO, ZERO, ZERO).unwrap();
        assert!(matches!(v.purity(), Err(Error::InvalidState(_))));
    }

    #[test]
    fn vacuum_invariants() {
        let i = CovarianceMatrix::vacuum().invariants_direct();
        assert_abs_diff_eq!(i.i1, 0.25);
        assert_abs_diff_eq!(i.i2, 0.25);
        assert_abs_diff_eq!(i.i3_abs, 0.0);
        assert_abs_diff_eq!(i.i4, 0.0);
        assert_abs_diff_eq!(i.iv, 1.0 / 16.0, epsilon = 1e-16);
    }

    #[test]
    fn tmsv_invariants_closed_form() {
        for r in [0.3, 1.0, 1.7] {
            let s = f64::sinh(r).powi(2);
            let i = CovarianceMatrix::tmsv(r).invariants_direct();
            let u = (s + 0.5) * (s + 0.5);
            assert_abs_diff_eq!(i.i1, u, epsilon = 1e-12 * u);
            assert_abs_diff_eq!(i.i2, u, epsilon = 1e-12 * u);
            assert_eq!(i.i3_sign, I3Sign::Negative);
            assert_abs_diff_eq!(i.i3_abs, s * (s + 1.0), epsilon = 1e-12 * u);
            assert_abs_diff_eq!(i.i4, 2.0 * s * (s + 1.0) * u, epsilon = 1e-11 * u * u);
            assert_abs_diff_eq!(i.iv, 1.0 / 16.0, epsilon = 1e-11 * u * u);
        }
    }

    #[test]
    fn counterexample_invariants() {
        let v = CovarianceMatrix::new(1.0, 1.0, ZERO, ZERO, c(0.5, 0.0), c(0.3, 0.0)).unwrap();
        assert!(v.check_physical().is_physical());
        let i = v.invariants_direct();
        assert_abs_diff_eq!(i.i1, 2.25, epsilon = 1e-14);
        assert_abs_diff_eq!(i.i3_abs, 0.16, epsilon = 1e-14);
        assert_eq!(i.i3_sign, I3Sign::Nonneg);
        assert_abs_diff_eq!(i.i4, 1.53, epsilon = 1e-13);
        assert_abs_diff_eq!(2.0 * i.i3_abs * (i.i1 * i.i2).sqrt(), 0.72, epsilon = 1e-13);
        assert_abs_diff_eq!(i.iv_residual(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn real_form_of_vacuum_and_tmsv() {
        let r = CovarianceMatrix::vacuum().to_real_form();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(r.0[i][j], if i == j { 0.5 } else { 0.0 }, epsilon = 1e-15);
            }
        }
        // Hand-expanded: <x1 x2> = -sinh(2r)/2, <p1 p2> = +sinh(2r)/2.
        let rr = 0.7f64;
        let r = CovarianceMatrix::tmsv(rr).to_real_form();
        let (ch, sh) = ((2.0 * rr).cosh() / 2.0, (2.0 * rr).sinh() / 2.0);
        let expected = [
            [ch, 0.0, -sh, 0.0],
            [0.0, ch, 0.0, sh],
            [-sh, 0.0, ch, 0.0],
            [0.0, sh, 0.0, ch],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(r.0[i][j], expected[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn local_block_real_form_matches_full_real_form() {
        let v = CovarianceMatrix::new(
            0.4,
            0.9,
            c(0.1, 0.25),
            c(-0.3, 0.05),
            c(0.1, 0.0),
            c(0.2, 0.2),
        )
        .unwrap();
        let r = v.to_real_form();
        let b1 = v.v1().to_real();
        let b2 = v.v2().to_real();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(r.block(Mode::One)[i][j], b1[i][j], epsilon = 1e-14);
                assert_abs_diff_eq!(r.block(Mode::Two)[i][j], b2[i][j], epsilon = 1e-14);
            }
        }
        let back = LocalBlock::from_real(&b1);
        assert_abs_diff_eq!(back.n, v.n1, epsilon = 1e-14);
        assert_abs_diff_eq!((back.m - v.m1).norm(), 0.0, epsilon = 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn param() -> impl Strategy<Value = f64> {
            -3.0..3.0f64
        }

        proptest! {
            #[test]
            fn real_form_round_trip(
                n1 in 0.0..4.0f64, n2 in 0.0..4.0f64,
                a in param(), b in param(), cc in param(), d in param(),
                e in param(), f in param(), g in param(), h in param(),
            ) {
                let v = CovarianceMatrix::new(n1, n2, c(a, b), c(cc, d), c(e, f), c(g, h)).unwrap();
                let r = v.to_real_form();
                for i in 0..4 {
                    for j in 0..4 {
                        prop_assert!((r.0[i][j] - r.0[j][i]).abs() < 1e-14);
                    }
                }
                let back = CovarianceMatrix::from_real_form(&r).unwrap();
                let scale = 1e-14 * 8.0;
                prop_assert!((back.n1 - v.n1).abs() < scale);
                prop_assert!((back.n2 - v.n2).abs() < scale);
                for (x, y) in [(back.m1, v.m1), (back.m2, v.m2), (back.ms, v.ms), (back.mc, v.mc)] {
                    prop_assert!((x - y).norm() < scale);
                }
            }
        }
    }
}
