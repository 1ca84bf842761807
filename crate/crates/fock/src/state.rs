use gaussent_core::linalg::{self, CMatrix, C64, ZERO};
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, GaussianCircuit};
use crate::error::{FockError, Result};

/// Default admissibility threshold on truncation leakage.
pub const DEFAULT_LEAKAGE: f64 = 1e-8;

/// Thermal ensemble members lighter than this are dropped.
const WEIGHT_FLOOR: f64 = 1e-16;

/// Photon-number cutoff rule `max(10, ceil(10 + 25 r))` for total
/// squeezing `r`.
pub fn recommended_cutoff(total_squeezing: f64) -> usize {
    (10.0 + 25.0 * total_squeezing.abs()).ceil().max(10.0) as usize
}

/// Largest photon number kept per mode; dimensions are `cutoff + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cutoffs {
    pub n1: usize,
    pub n2: usize,
}

impl Cutoffs {
    pub fn uniform(n: usize) -> Self {
        Self { n1: n, n2: n }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1 + 1, self.n2 + 1)
    }
}

/// Dense density operator on a truncated two-mode space, basis
/// `|n1, n2>` at index `n1 * d2 + n2`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    d1: usize,
    d2: usize,
    data: CMatrix,
}

impl FockOperator {
    pub fn from_matrix(d1: usize, d2: usize, data: CMatrix) -> Result<Self> {
        if data.rows() != d1 * d2 || data.cols() != d1 * d2 {
            return Err(FockError::InvalidDensity(format!(
                "expected {0}x{0}, got {1}x{2}",
                d1 * d2,
                data.rows(),
                data.cols()
            )));
        }
        Ok(Self { d1, d2, data })
    }

    /// `|n1, n2><n1, n2|`.
    pub fn number_state(cutoffs: Cutoffs, n1: usize, n2: usize) -> Self {
        let (d1, d2) = cutoffs.dims();
        let mut data = CMatrix::zeros(d1 * d2, d1 * d2);
        data[(n1 * d2 + n2, n1 * d2 + n2)] = C64::new(1.0, 0.0);
        Self { d1, d2, data }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn cutoffs(&self) -> Cutoffs {
        Cutoffs {
            n1: self.d1 - 1,
            n2: self.d2 - 1,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.d2 + n2
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// Populations `P(n1)` and `P(n2)` of the two modes.
    pub fn marginal_populations(&self) -> (Vec<f64>, Vec<f64>) {
        let mut p1 = vec![0.0; self.d1];
        let mut p2 = vec![0.0; self.d2];
        for n1 in 0..self.d1 {
            for n2 in 0..self.d2 {
                let i = self.index(n1, n2);
                let p = self.data[(i, i)].re;
                p1[n1] += p;
                p2[n2] += p;
            }
        }
        (p1, p2)
    }

    /// Population in the top two Fock levels, maximised over the modes.
    pub fn leakage(&self) -> f64 {
        let (p1, p2) = self.marginal_populations();
        let top = |p: &[f64]| p.iter().rev().take(2).sum::<f64>();
        top(&p1).max(top(&p2))
    }

    /// `Tr_2 rho`.
    pub fn reduced_mode1(&self) -> CMatrix {
        self.partial_trace_mode2(|_| 1.0)
    }

    /// `sum_n2 w(n2) <n2| rho |n2>`.
    pub fn partial_trace_mode2(&self, w: impl Fn(usize) -> f64) -> CMatrix {
        let mut out = CMatrix::zeros(self.d1, self.d1);
        for a in 0..self.d1 {
            for b in 0..self.d1 {
                let mut s = ZERO;
                for n2 in 0..self.d2 {
                    s += self.data[(self.index(a, n2), self.index(b, n2))] * w(n2);
                }
                out[(a, b)] = s;
            }
        }
        out
    }

    /// `Tr_1 rho`.
    pub fn reduced_mode2(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.d2, self.d2);
        for a in 0..self.d2 {
            for b in 0..self.d2 {
                let mut s = ZERO;
                for n1 in 0..self.d1 {
                    s += self.data[(self.index(n1, a), self.index(n1, b))];
                }
                out[(a, b)] = s;
            }
        }
        out
    }

    /// Partial transpose on mode 2.
    pub fn partial_transpose(&self) -> CMatrix {
        let n = self.d1 * self.d2;
        let mut out = CMatrix::zeros(n, n);
        for n1 in 0..self.d1 {
            for n2 in 0..self.d2 {
                for m1 in 0..self.d1 {
                    for m2 in 0..self.d2 {
                        out[(self.index(n1, n2), self.index(m1, m2))] =
                            self.data[(self.index(n1, m2), self.index(m1, n2))];
                    }
                }
            }
        }
        out
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh_blocked(&self.data)
    }
}

fn thermal_weights(nbar: f64, d: usize) -> Vec<f64> {
    if nbar == 0.0 {
        return vec![1.0];
    }
    let q = nbar / (nbar + 1.0);
    let mut w = Vec::with_capacity(d);
    let mut p = 1.0 / (nbar + 1.0);
    for _ in 0..d {
        w.push(p);
        p *= q;
    }
    w
}

fn apply_gate(
    g: &Gate,
    d1: usize,
    d2: usize,
    psi: &mut [C64],
    cache: &mut Option<crate::sparse::SparseOp>,
) {
    if let Gate::Phase { mode, phi } = *g {
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                let n = match mode {
                    gaussent_core::gaussian::Mode::One => n1,
                    gaussent_core::gaussian::Mode::Two => n2,
                };
                psi[n1 * d2 + n2] *= C64::from_polar(1.0, phi * n as f64);
            }
        }
        return;
    }
    let op = cache.get_or_insert_with(|| g.generator(d1, d2));
    op.expm_action(psi);
}

pub fn build_state(c: &GaussianCircuit, cutoffs: Cutoffs) -> Result<FockOperator> {
    build_state_with(c, cutoffs, DEFAULT_LEAKAGE)
}

/// `U (rho_th1 ⊗ rho_th2) U†` for the circuit unitary `U`, evolving each
/// member of the thermal number-state ensemble separately.
pub fn build_state_with(
    c: &GaussianCircuit,
    cutoffs: Cutoffs,
    leakage_threshold: f64,
) -> Result<FockOperator> {
    c.validate()
        .map_err(|e| FockError::Core(gaussent_core::Error::InvalidInput(e.to_string())))?;
    let (d1, d2) = cutoffs.dims();
    if d1 < 3 || d2 < 3 {
        return Err(FockError::InvalidCutoff("cutoff must be at least 2".into()));
    }
    let dim = d1 * d2;
    let w1 = thermal_weights(c.thermal[0], d1);
    let w2 = thermal_weights(c.thermal[1], d2);
    let mut members = Vec::new();
    for (k1, &p1) in w1.iter().enumerate() {
        for (k2, &p2) in w2.iter().enumerate() {
            if p1 * p2 >= WEIGHT_FLOOR {
                members.push((k1, k2, p1 * p2));
            }
        }
    }
    let total: f64 = members.iter().map(|m| m.2).sum();
    let mut generators: Vec<Option<crate::sparse::SparseOp>> = vec![None; c.gates.len()];
    let mut rho = CMatrix::zeros(dim, dim);
    let mut psi = vec![ZERO; dim];
    let mut support = Vec::with_capacity(dim);
    for (k1, k2, w) in members {
        psi.iter_mut().for_each(|z| *z = ZERO);
        psi[k1 * d2 + k2] = C64::new(1.0, 0.0);
        for (g, cache) in c.gates.iter().zip(generators.iter_mut()) {
            apply_gate(g, d1, d2, &mut psi, cache);
        }
        let w = w / total;
        support.clear();
        support.extend((0..dim).filter(|&i| psi[i] != ZERO));
        for &i in &support {
            let a = psi[i] * w;
            for &j in &support {
                rho[(i, j)] += a * psi[j].conj();
            }
        }
    }
    let state = FockOperator { d1, d2, data: rho };
    let leakage = state.leakage();
    if leakage > leakage_threshold {
        return Err(FockError::CutoffTooSmall {
            cutoff: cutoffs.n1.min(cutoffs.n2),
            leakage,
            threshold: leakage_threshold,
        });
    }
    Ok(state)
}

/// Hermiticity, trace and positivity diagnostics of a density operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Validity {
    pub hermiticity_defect: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub leakage: f64,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.hermiticity_defect <= 1e-12
            && (self.trace - 1.0).abs() <= 1e-10
            && self.min_eigenvalue >= -1e-8
    }
}

pub fn validate(rho: &FockOperator) -> Validity {
    Validity {
        hermiticity_defect: rho.data.hermiticity_defect(),
        trace: rho.trace(),
        min_eigenvalue: rho.eigenvalues().first().copied().unwrap_or(0.0),
        leakage: rho.leakage(),
    }
}
