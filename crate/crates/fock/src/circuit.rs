use gaussent_core::gaussian::{Bogoliubov, CovarianceMatrix, LocalBlock, Mode};
use gaussent_core::linalg::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sparse::{Monomial, SparseOp};

/// Largest squeezing parameter accepted in a circuit.
pub const MAX_SQUEEZE: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitParseError {
    #[error("circuit is not valid: {0}")]
    Syntax(String),
    #[error("gate {index}: {reason}")]
    BadGate { index: usize, reason: String },
    #[error("thermal occupations must be finite and nonnegative, got {0:?}")]
    BadThermal([f64; 2]),
}

mod mode_number {
    use super::Mode;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Mode, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(match m {
            Mode::One => 1,
            Mode::Two => 2,
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mode, D::Error> {
        match u8::deserialize(d)? {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            k => Err(D::Error::custom(format!("mode must be 1 or 2, got {k}"))),
        }
    }
}

/// Gaussian gates, each `U = exp(G)` with the generators of
/// [`Bogoliubov`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case", deny_unknown_fields)]
pub enum Gate {
    TwoModeSqueeze {
        r: f64,
    },
    Squeeze {
        #[serde(with = "mode_number")]
        mode: Mode,
        s: f64,
        #[serde(default)]
        theta: f64,
    },
    Phase {
        #[serde(with = "mode_number")]
        mode: Mode,
        phi: f64,
    },
    BeamSplitter {
        tau: f64,
    },
}

impl Gate {
    fn params(&self) -> Vec<f64> {
        match *self {
            Gate::TwoModeSqueeze { r } => vec![r],
            Gate::Squeeze { s, theta, .. } => vec![s, theta],
            Gate::Phase { phi, .. } => vec![phi],
            Gate::BeamSplitter { tau } => vec![tau],
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.params().iter().any(|x| !x.is_finite()) {
            return Err("parameters must be finite".into());
        }
        let sq = match *self {
            Gate::TwoModeSqueeze { r } => r.abs(),
            Gate::Squeeze { s, .. } => s.abs(),
            _ => 0.0,
        };
        if sq > MAX_SQUEEZE {
            return Err(format!("squeezing {sq} exceeds the limit {MAX_SQUEEZE}"));
        }
        Ok(())
    }

    pub fn bogoliubov(&self) -> Bogoliubov {
        match *self {
            Gate::TwoModeSqueeze { r } => Bogoliubov::two_mode_squeeze(r),
            Gate::Squeeze { mode, s, theta } => Bogoliubov::squeeze(mode, s, theta),
            Gate::Phase { mode, phi } => Bogoliubov::phase(mode, phi),
            Gate::BeamSplitter { tau } => Bogoliubov::beam_splitter(tau),
        }
    }

    pub(crate) fn generator(&self, d1: usize, d2: usize) -> SparseOp {
        let c = |re: f64| C64::new(re, 0.0);
        let on = |mode: Mode, coef: C64, cq: (usize, usize)| match mode {
            Mode::One => Monomial::new(coef, cq, (0, 0)),
            Mode::Two => Monomial::new(coef, (0, 0), cq),
        };
        let terms = match *self {
            Gate::TwoModeSqueeze { r } => vec![
                Monomial::new(c(r), (0, 1), (0, 1)),
                Monomial::new(c(-r), (1, 0), (1, 0)),
            ],
            Gate::Squeeze { mode, s, theta } => {
                let zeta = C64::from_polar(s, theta);
                vec![
                    on(mode, zeta.conj() * 0.5, (0, 2)),
                    on(mode, -zeta * 0.5, (2, 0)),
                ]
            }
            Gate::Phase { mode, phi } => vec![on(mode, C64::new(0.0, phi), (1, 1))],
            Gate::BeamSplitter { tau } => vec![
                Monomial::new(c(tau), (1, 0), (0, 1)),
                Monomial::new(c(-tau), (0, 1), (1, 0)),
            ],
        };
        SparseOp::from_monomials(d1, d2, &terms)
    }
}

/// Ordered gates applied to a product of thermal states.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianCircuit {
    #[serde(default)]
    pub thermal: [f64; 2],
    pub gates: Vec<Gate>,
}

impl GaussianCircuit {
    pub fn new(thermal: [f64; 2], gates: Vec<Gate>) -> Result<Self, CircuitParseError> {
        let c = Self { thermal, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn tmsv(r: f64) -> Self {
        Self {
            thermal: [0.0, 0.0],
            gates: vec![Gate::TwoModeSqueeze { r }],
        }
    }

    /// Two-mode squeezer on equal thermal states reproducing `n1 = n2 = n`
    /// and real `mc`: `nbar + 1/2 = sqrt((n+1/2)^2 - mc^2)` and
    /// `tanh 2r = mc / (n + 1/2)`.
    pub fn thermal_squeezed(n: f64, mc: f64) -> Option<Self> {
        let a = n + 0.5;
        let rad = a * a - mc * mc;
        if !(rad >= 0.25) || !(a > 0.0) {
            return None;
        }
        let nbar = (rad.sqrt() - 0.5).max(0.0);
        let r = 0.5 * (mc / a).atanh();
        Some(Self {
            thermal: [nbar, nbar],
            gates: vec![Gate::TwoModeSqueeze { r }],
        })
    }

    pub fn validate(&self) -> Result<(), CircuitParseError> {
        if self.thermal.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(CircuitParseError::BadThermal(self.thermal));
        }
        for (index, g) in self.gates.iter().enumerate() {
            g.validate()
                .map_err(|reason| CircuitParseError::BadGate { index, reason })?;
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self, CircuitParseError> {
        let c: Self =
            serde_json::from_str(s).map_err(|e| CircuitParseError::Syntax(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn with_gate(&self, g: Gate) -> Self {
        let mut c = self.clone();
        c.gates.push(g);
        c
    }

    /// Net Bogoliubov transformation of all gates.
    pub fn bogoliubov(&self) -> Bogoliubov {
        self.gates
            .iter()
            .fold(Bogoliubov::identity(), |acc, g| acc.then(&g.bogoliubov()))
    }

    /// Covariance matrix predicted by the symplectic formalism.
    pub fn analytic_covariance(&self) -> CovarianceMatrix {
        let v0 = CovarianceMatrix::product(
            LocalBlock::thermal(self.thermal[0]),
            LocalBlock::thermal(self.thermal[1]),
        );
        self.bogoliubov().apply(&v0)
    }

    /// Sum of all squeezing parameters, for the cutoff rule.
    pub fn total_squeezing(&self) -> f64 {
        self.gates
            .iter()
            .map(|g| match *g {
                Gate::TwoModeSqueeze { r } => r.abs(),
                Gate::Squeeze { s, .. } => s.abs(),
                _ => 0.0,
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let c = GaussianCircuit::new(
            [0.2, 0.1],
            vec![
                Gate::TwoModeSqueeze { r: 0.4 },
                Gate::Squeeze {
                    mode: Mode::Two,
                    s: 0.1,
                    theta: 0.3,
                },
                Gate::Phase {
                    mode: Mode::One,
                    phi: 1.0,
                },
                Gate::BeamSplitter { tau: 0.2 },
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains(r#""gate":"two_mode_squeeze""#));
        assert!(text.contains(r#""mode":2"#));
        assert_eq!(GaussianCircuit::from_json_str(&text).unwrap(), c);
    }

    #[test]
    fn rejects_bad_circuits() {
        for bad in [
            r#"{"gates":[{"gate":"warp","r":1}]}"#,
            r#"{"gates":[{"gate":"squeeze","mode":3,"s":0.1}]}"#,
            r#"{"gates":[{"gate":"two_mode_squeeze","r":9}]}"#,
            r#"{"thermal":[-1,0],"gates":[]}"#,
            r#"{"gates":[{"gate":"phase","mode":1,"phi":0,"extra":1}]}"#,
            "[",
        ] {
            assert!(GaussianCircuit::from_json_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn thermal_squeezed_reproduces_parameters() {
        let c = GaussianCircuit::thermal_squeezed(0.5, 0.6).unwrap();
        let v = c.analytic_covariance();
        assert!((v.n1 - 0.5).abs() < 1e-12 && (v.n2 - 0.5).abs() < 1e-12);
        assert!((v.mc.re - 0.6).abs() < 1e-12 && v.mc.im.abs() < 1e-12);
        assert!((c.thermal[0] - 0.3).abs() < 1e-12);
        assert!(GaussianCircuit::thermal_squeezed(1.0, 1.5).is_none());
    }
}
