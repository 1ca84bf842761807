//! Measurement records and the moment estimators built from them.
//!
//! Quadrature shots cycle through the phases 0, pi/4, pi/2 by shot index;
//! photon-count shots assume a phase-insensitive block (`m = 0`).

use std::f64::consts::FRAC_PI_4;

use gaussent_core::linalg::{CMatrix, C64, ZERO};
use gaussent_core::reconstruction::ConditionedMoments;
use gaussent_core::LocalBlock;
use gaussent_fock::sampling::{PhotonSampler, QuadratureSampler};
use gaussent_fock::{parity_decompose, FockOperator};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{LoccError, Result};

pub const PHASES: [f64; 3] = [0.0, FRAC_PI_4, 2.0 * FRAC_PI_4];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    #[default]
    Quadrature,
    PhotonCount,
}

impl Basis {
    pub fn min_shots(self) -> usize {
        match self {
            Basis::Quadrature => 3,
            Basis::PhotonCount => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Accumulator {
    sum: [f64; 3],
    count: [usize; 3],
}

impl Accumulator {
    fn push(&mut self, basis: Basis, shot: usize, x: f64) {
        let (slot, v) = match basis {
            Basis::Quadrature => (shot % 3, x * x),
            Basis::PhotonCount => (0, x),
        };
        self.sum[slot] += v;
        self.count[slot] += 1;
    }

    fn total(&self) -> usize {
        self.count.iter().sum()
    }

    /// `(<a† a>, <a^2>)`.
    fn moments(&self, basis: Basis) -> Result<(f64, C64)> {
        let mean = |k: usize| self.sum[k] / self.count[k] as f64;
        match basis {
            Basis::Quadrature => {
                if self.count.contains(&0) {
                    return Err(LoccError::InsufficientData(
                        "every quadrature phase needs at least one shot".into(),
                    ));
                }
                let (x0, x45, x90) = (mean(0), mean(1), mean(2));
                let avg = 0.5 * (x0 + x90);
                Ok((avg - 0.5, C64::new(0.5 * (x0 - x90), x45 - avg)))
            }
            Basis::PhotonCount => {
                if self.count[0] == 0 {
                    return Err(LoccError::InsufficientData("no photon-count shots".into()));
                }
                Ok((mean(0), ZERO))
            }
        }
    }
}

/// One party's local tomography record.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSamples {
    pub basis: Basis,
    pub values: Vec<f64>,
}

impl LocalSamples {
    pub fn block(&self) -> Result<LocalBlock> {
        self.block_of((0..self.values.len()).collect::<Vec<_>>().as_slice())
    }

    /// Estimate from the shots at `indices` (repeats allowed).
    pub fn block_of(&self, indices: &[usize]) -> Result<LocalBlock> {
        let mut acc = Accumulator::default();
        for &k in indices {
            acc.push(self.basis, k, self.values[k]);
        }
        let (n, sq) = acc.moments(self.basis)?;
        Ok(LocalBlock::new(n, -sq))
    }
}

/// Parity outcomes and the conditional measurement on the partner mode,
/// copy by copy.
#[derive(Clone, Debug, PartialEq)]
pub struct ParitySamples {
    pub basis: Basis,
    pub odd: Vec<bool>,
    pub values: Vec<f64>,
}

impl ParitySamples {
    pub fn moments(&self) -> Result<ConditionedMoments> {
        self.moments_of((0..self.odd.len()).collect::<Vec<_>>().as_slice())
    }

    pub fn moments_of(&self, indices: &[usize]) -> Result<ConditionedMoments> {
        let mut acc = [Accumulator::default(); 2];
        for &k in indices {
            acc[self.odd[k] as usize].push(self.basis, k, self.values[k]);
        }
        let total = indices.len() as f64;
        if total == 0.0 {
            return Err(LoccError::InsufficientData("no parity shots".into()));
        }
        let group = |a: &Accumulator| -> Result<(f64, C64)> {
            if a.total() == 0 {
                Ok((0.0, ZERO))
            } else {
                a.moments(self.basis)
            }
        };
        let (n_even, sq_even) = group(&acc[0])?;
        let (n_odd, sq_odd) = group(&acc[1])?;
        Ok(ConditionedMoments {
            p_even: acc[0].total() as f64 / total,
            p_odd: acc[1].total() as f64 / total,
            n_even,
            n_odd,
            sq_even,
            sq_odd,
        })
    }
}

/// `<x_theta^2>` of a one-mode block.
pub fn quadrature_variance(block: &LocalBlock, theta: f64) -> f64 {
    let r = block.to_real();
    let (s, c) = theta.sin_cos();
    c * c * r[0][0] + 2.0 * s * c * r[0][1] + s * s * r[1][1]
}

/// Quadrature shots from the exact Gaussian marginal of `block`.
pub fn sample_local_quadratures<R: Rng + ?Sized>(
    block: &LocalBlock,
    n: usize,
    rng: &mut R,
) -> LocalSamples {
    let dists: Vec<Normal<f64>> = PHASES
        .iter()
        .map(|&t| {
            Normal::new(0.0, quadrature_variance(block, t).max(0.0).sqrt())
                .expect("finite variance")
        })
        .collect();
    let values = (0..n).map(|k| dists[k % 3].sample(rng)).collect();
    LocalSamples {
        basis: Basis::Quadrature,
        values,
    }
}

/// Photon counts from the diagonal of a one-mode density matrix.
pub fn sample_local_photons<R: Rng + ?Sized>(
    reduced: &CMatrix,
    n: usize,
    rng: &mut R,
) -> Result<LocalSamples> {
    let s = PhotonSampler::new(reduced)
        .ok_or_else(|| LoccError::InsufficientData("photon-number distribution is empty".into()))?;
    let values = (0..n).map(|_| s.sample(rng) as f64).collect();
    Ok(LocalSamples {
        basis: Basis::PhotonCount,
        values,
    })
}

pub fn sample_local_moments<R: Rng + ?Sized>(
    block: &LocalBlock,
    n: usize,
    rng: &mut R,
) -> Result<LocalBlock> {
    if n < 3 {
        return Err(LoccError::InvalidPlan(format!(
            "{n} shots cannot cover three phases"
        )));
    }
    sample_local_quadratures(block, n, rng).block()
}

enum Conditional {
    Quadrature(Vec<QuadratureSampler>),
    Photon(PhotonSampler),
}

impl Conditional {
    fn new(rho: &CMatrix, basis: Basis) -> Result<Self> {
        Ok(match basis {
            Basis::Quadrature => Conditional::Quadrature(
                PHASES
                    .iter()
                    .map(|&t| QuadratureSampler::new(rho, t))
                    .collect(),
            ),
            Basis::PhotonCount => {
                Conditional::Photon(PhotonSampler::new(rho).ok_or_else(|| {
                    LoccError::InsufficientData("conditional photon distribution is empty".into())
                })?)
            }
        })
    }

    fn sample<R: Rng + ?Sized>(&self, shot: usize, rng: &mut R) -> f64 {
        match self {
            Conditional::Quadrature(s) => s[shot % 3].sample(rng),
            Conditional::Photon(s) => s.sample(rng) as f64,
        }
    }
}

/// Parity of mode 2 and a conditional mode-1 measurement on each of `n`
/// copies of `rho`, drawn from the exact conditional distributions.
pub fn sample_parity_and_conditional<R: Rng + ?Sized>(
    rho: &FockOperator,
    n: usize,
    basis: Basis,
    rng: &mut R,
) -> Result<ParitySamples> {
    let dec = parity_decompose(rho);
    let even = dec
        .rho_even
        .as_ref()
        .map(|r| Conditional::new(r, basis))
        .transpose()?;
    let odd = dec
        .rho_odd
        .as_ref()
        .map(|r| Conditional::new(r, basis))
        .transpose()?;
    let mut bits = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let is_odd = rng.random::<f64>() >= dec.p_even;
        let s = if is_odd { odd.as_ref() } else { even.as_ref() };
        let s =
            s.ok_or_else(|| LoccError::InsufficientData("outcome with zero probability".into()))?;
        values.push(s.sample(k, rng));
        bits.push(is_odd);
    }
    Ok(ParitySamples {
        basis,
        odd: bits,
        values,
    })
}
