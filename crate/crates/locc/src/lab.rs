//! Preparation of the shared copies and each party's measurement record.
//!
//! Nature draws every outcome up front from the oracle state. Alice's lab
//! holds only her own outcomes; the parity bits live in Bob's lab and reach
//! Alice only through messages.

use gaussent_core::CovarianceMatrix;
use gaussent_fock::{
    build_state, recommended_cutoff, Cutoffs, FockError, FockOperator, GaussianCircuit,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LoccError, Result};
use crate::message::V2Report;
use crate::sampling::{
    sample_local_photons, sample_local_quadratures, sample_parity_and_conditional, Basis,
    LocalSamples,
};

pub const DEFAULT_SEED: u64 = 0x6761_7573_7365_6e74;
pub const DEFAULT_SHOTS: usize = 100_000;
pub const DEFAULT_BOOTSTRAP: usize = 200;
pub const DEFAULT_BATCH: usize = 10_000;
const MAX_AUTO_CUTOFF: usize = 120;

const NATURE: u64 = 1;
const ALICE_LOCAL: u64 = 2;
const BOB_LOCAL: u64 = 3;
pub(crate) const ALICE_BOOTSTRAP: u64 = 4;
const BOB_BOOTSTRAP: u64 = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotPlan {
    /// Local tomography shots per party.
    pub n_local: usize,
    /// Copies measured for parity.
    pub n_parity: usize,
    pub seed: u64,
    #[serde(default)]
    pub basis: Basis,
    pub bootstrap: usize,
    pub batch_size: usize,
    /// Fock cutoff for the oracle state; chosen automatically when absent.
    #[serde(default)]
    pub cutoff: Option<usize>,
}

impl Default for ShotPlan {
    fn default() -> Self {
        Self {
            n_local: DEFAULT_SHOTS,
            n_parity: DEFAULT_SHOTS,
            seed: DEFAULT_SEED,
            basis: Basis::Quadrature,
            bootstrap: DEFAULT_BOOTSTRAP,
            batch_size: DEFAULT_BATCH,
            cutoff: None,
        }
    }
}

impl ShotPlan {
    pub fn validate(&self) -> Result<()> {
        let min = self.basis.min_shots();
        if self.n_local < min || self.n_parity < min {
            return Err(LoccError::InvalidPlan(format!(
                "need at least {min} local and parity shots, got {} and {}",
                self.n_local, self.n_parity
            )));
        }
        if self.bootstrap < 2 {
            return Err(LoccError::InvalidPlan(
                "bootstrap needs at least 2 resamples".into(),
            ));
        }
        if self.batch_size == 0 {
            return Err(LoccError::InvalidPlan("batch size must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(k);
    r
}

/// Alice's measurement record.
#[derive(Clone, Debug, PartialEq)]
pub struct AliceLab {
    pub seed: u64,
    pub local: LocalSamples,
    /// Outcome on mode 1 of each parity copy.
    pub conditional: Vec<f64>,
}

/// Bob's measurement record.
#[derive(Clone, Debug, PartialEq)]
pub struct BobLab {
    pub seed: u64,
    pub local: LocalSamples,
    /// `true` for odd parity.
    pub parity: Vec<bool>,
}

impl BobLab {
    pub fn v2_report(&self, bootstrap: usize) -> Result<V2Report> {
        let block = self.local.block()?;
        let mut rng = stream(self.seed, BOB_BOOTSTRAP);
        let n = self.local.values.len();
        let replicates = (0..bootstrap)
            .map(|_| self.local.block_of(&crate::estimate::resample(n, &mut rng)))
            .collect::<Result<Vec<_>>>()?;
        Ok(V2Report {
            block,
            shots: n as u64,
            replicates,
        })
    }
}

/// Oracle density operator; without an explicit cutoff the recommended one
/// is raised until the leakage check passes.
pub fn oracle_state(circuit: &GaussianCircuit, cutoff: Option<usize>) -> Result<FockOperator> {
    if let Some(c) = cutoff {
        return Ok(build_state(circuit, Cutoffs::uniform(c))?);
    }
    let mut c = recommended_cutoff(circuit.total_squeezing());
    loop {
        match build_state(circuit, Cutoffs::uniform(c)) {
            Err(FockError::CutoffTooSmall { .. }) if c < MAX_AUTO_CUTOFF => c += 10,
            other => return Ok(other?),
        }
    }
}

pub fn prepare(circuit: &GaussianCircuit, plan: &ShotPlan) -> Result<(AliceLab, BobLab)> {
    plan.validate()?;
    let v: CovarianceMatrix = circuit.analytic_covariance();
    let rho = oracle_state(circuit, plan.cutoff)?;
    let parity = sample_parity_and_conditional(
        &rho,
        plan.n_parity,
        plan.basis,
        &mut stream(plan.seed, NATURE),
    )?;
    let (alice_local, bob_local) = match plan.basis {
        Basis::Quadrature => (
            sample_local_quadratures(&v.v1(), plan.n_local, &mut stream(plan.seed, ALICE_LOCAL)),
            sample_local_quadratures(&v.v2(), plan.n_local, &mut stream(plan.seed, BOB_LOCAL)),
        ),
        Basis::PhotonCount => (
            sample_local_photons(
                &rho.reduced_mode1(),
                plan.n_local,
                &mut stream(plan.seed, ALICE_LOCAL),
            )?,
            sample_local_photons(
                &rho.reduced_mode2(),
                plan.n_local,
                &mut stream(plan.seed, BOB_LOCAL),
            )?,
        ),
    };
    Ok((
        AliceLab {
            seed: plan.seed,
            local: alice_local,
            conditional: parity.values,
        },
        BobLab {
            seed: plan.seed,
            local: bob_local,
            parity: parity.odd,
        },
    ))
}
