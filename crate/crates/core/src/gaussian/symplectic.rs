use super::CovarianceMatrix;
use crate::linalg::{expm, CMatrix, C64, ZERO};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub fn offset(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 2,
        }
    }

    pub fn other(self) -> Mode {
        match self {
            Mode::One => Mode::Two,
            Mode::Two => Mode::One,
        }
    }
}

/// Linear Heisenberg action `U† v U = M v` of a Gaussian unitary on the
/// operator vector `v = (a1, a1†, a2, a2†)`.
///
/// Gates are defined by their anti-Hermitian generators `U = exp(G)`:
/// two-mode squeezer `G = r (a1 a2 - a1† a2†)`, one-mode squeezer
/// `G = (ζ* a² - ζ a†²)/2` with `ζ = s e^{iθ}`, phase shifter `G = iφ a†a`,
/// beam splitter `G = τ (a1† a2 - a1 a2†)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bogoliubov(pub [[C64; 4]; 4]);

impl Bogoliubov {
    pub fn identity() -> Self {
        Self(CMatrix::identity(4).to_array())
    }

    /// `exp(K)` where `[v_i, G] = K_ij v_j`.
    fn from_heisenberg_generator(k: [[C64; 4]; 4]) -> Self {
        Self(expm(&CMatrix::from_rows(&k)).to_array())
    }

    pub fn two_mode_squeeze(r: f64) -> Self {
        let mut k = [[ZERO; 4]; 4];
        let v = C64::new(-r, 0.0);
        k[0][3] = v;
        k[1][2] = v;
        k[2][1] = v;
        k[3][0] = v;
        Self::from_heisenberg_generator(k)
    }

    pub fn squeeze(mode: Mode, s: f64, theta: f64) -> Self {
        let o = mode.offset();
        let zeta = C64::from_polar(s, theta);
        let mut k = [[ZERO; 4]; 4];
        k[o][o + 1] = -zeta;
        k[o + 1][o] = -zeta.conj();
        Self::from_heisenberg_generator(k)
    }

    pub fn phase(mode: Mode, phi: f64) -> Self {
        let o = mode.offset();
        let mut m = Self::identity();
        m.0[o][o] = C64::from_polar(1.0, phi);
        m.0[o + 1][o + 1] = C64::from_polar(1.0, -phi);
        m
    }

    pub fn beam_splitter(tau: f64) -> Self {
        let mut k = [[ZERO; 4]; 4];
        k[0][2] = C64::new(tau, 0.0);
        k[1][3] = C64::new(tau, 0.0);
        k[2][0] = C64::new(-tau, 0.0);
        k[3][1] = C64::new(-tau, 0.0);
        Self::from_heisenberg_generator(k)
    }

    /// The transformation "apply `self`, then `next`".
    pub fn then(&self, next: &Bogoliubov) -> Bogoliubov {
        let a = CMatrix::from_rows(&next.0);
        let b = CMatrix::from_rows(&self.0);
        Bogoliubov(a.matmul(&b).to_array())
    }

    /// Covariance-convention matrix `T = S M S`, `S = diag(1, -1, 1, -1)`,
    /// so that `V -> T V T†`.
    pub fn covariance_map(&self) -> CMatrix {
        let s = [1.0, -1.0, 1.0, -1.0];
        CMatrix::from_fn(4, 4, |i, j| self.0[i][j] * (s[i] * s[j]))
    }

    pub fn apply(&self, v: &CovarianceMatrix) -> CovarianceMatrix {
        let t = self.covariance_map();
        let out = t.matmul(&v.cmatrix()).matmul(&t.adjoint());
        CovarianceMatrix::from_matrix(&out.to_array(), 1e-9)
            .expect("Gaussian unitaries preserve covariance structure")
    }

    /// Whether the transformation leaves the other mode untouched.
    pub fn acts_only_on(&self, mode: Mode, tol: f64) -> bool {
        let id = Self::identity();
        let o = mode.other().offset();
        (0..4).all(|i| {
            (0..4).all(|j| {
                let in_other = (o..o + 2).contains(&i) || (o..o + 2).contains(&j);
                !in_other || (self.0[i][j] - id.0[i][j]).norm() <= tol
            })
        })
    }

    /// 2x2 covariance-convention block acting on one mode.
    pub fn local_covariance_block(&self, mode: Mode) -> [[C64; 2]; 2] {
        let t = self.covariance_map();
        let o = mode.offset();
        [
            [t[(o, o)], t[(o, o + 1)]],
            [t[(o + 1, o)], t[(o + 1, o + 1)]],
        ]
    }
}
