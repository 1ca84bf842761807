//! Exact measurement distributions of one-mode operators: rotated
//! quadratures and photon number.

use gaussent_core::linalg::{CMatrix, C64};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

const GRID_POINTS: usize = 8192;

/// `psi_0(x) .. psi_{d-1}(x)`, the harmonic-oscillator eigenfunctions.
pub fn hermite_functions(x: f64, d: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(d);
    if d == 0 {
        return psi;
    }
    psi.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if d > 1 {
        psi.push(std::f64::consts::SQRT_2 * x * psi[0]);
    }
    for n in 1..d.saturating_sub(1) {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * psi[n] - (nf / (nf + 1.0)).sqrt() * psi[n - 1];
        psi.push(next);
    }
    psi
}

/// Density of `x_theta = (a e^{-i theta} + a† e^{i theta}) / sqrt 2` for the
/// one-mode operator `rho` at `x`.
pub fn quadrature_density(rho: &CMatrix, theta: f64, x: f64) -> f64 {
    let d = rho.rows();
    let psi = hermite_functions(x, d);
    let u: Vec<C64> = (0..d)
        .map(|j| C64::from_polar(psi[j], -theta * j as f64))
        .collect();
    let mut s = C64::new(0.0, 0.0);
    for j in 0..d {
        let row = rho.row(j);
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            acc += row[k] * u[k].conj();
        }
        s += u[j] * acc;
    }
    s.re
}

/// Inverse-CDF sampler for a rotated quadrature of a one-mode state.
#[derive(Clone, Debug)]
pub struct QuadratureSampler {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl QuadratureSampler {
    pub fn new(rho: &CMatrix, theta: f64) -> Self {
        let d = rho.rows();
        let l = (2.0 * d as f64 + 1.0).sqrt() + 5.0;
        let h = 2.0 * l / (GRID_POINTS - 1) as f64;
        let xs: Vec<f64> = (0..GRID_POINTS).map(|i| -l + h * i as f64).collect();
        let dens: Vec<f64> = xs
            .iter()
            .map(|&x| quadrature_density(rho, theta, x).max(0.0))
            .collect();
        let mut cdf = Vec::with_capacity(GRID_POINTS);
        cdf.push(0.0);
        for i in 1..GRID_POINTS {
            let prev = cdf[i - 1];
            cdf.push(prev + 0.5 * h * (dens[i - 1] + dens[i]));
        }
        let total = *cdf.last().unwrap();
        for c in &mut cdf {
            *c /= total;
        }
        Self { xs, cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let i = self
            .cdf
            .partition_point(|&c| c < u)
            .clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.xs[i - 1] + t * (self.xs[i] - self.xs[i - 1])
    }
}

/// Photon-number sampler from the diagonal of a one-mode state.
#[derive(Clone, Debug)]
pub struct PhotonSampler {
    dist: WeightedIndex<f64>,
}

impl PhotonSampler {
    pub fn new(rho: &CMatrix) -> Option<Self> {
        let w: Vec<f64> = (0..rho.rows()).map(|i| rho[(i, i)].re.max(0.0)).collect();
        WeightedIndex::new(w).ok().map(|dist| Self { dist })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }
}
