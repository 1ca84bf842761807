use super::{Bogoliubov, CovarianceMatrix, Mode};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const MAX_ATTEMPTS: usize = 16;

fn random_local(rng: &mut ChaCha8Rng, mode: Mode, max_squeeze: f64) -> Bogoliubov {
    let s = rng.random_range(0.0..=max_squeeze);
    let theta = rng.random_range(0.0..2.0 * PI);
    let phi = rng.random_range(0.0..2.0 * PI);
    Bogoliubov::squeeze(mode, s, theta).then(&Bogoliubov::phase(mode, phi))
}

/// Deterministic physical state generator.
///
/// Starts from a two-mode squeezed vacuum with `r` uniform in `[0, scale]`,
/// applies independent random one-mode symplectics, adds per-mode vacuum
/// noise `eps_k I` with `eps_k` in `[0, scale]`, then a second layer of
/// local symplectics. Every step preserves physicality, so no rejection is
/// needed; the bounded retry only guards against a numerically borderline
/// draw.
pub fn random_physical_state(seed: u64, scale: f64) -> Result<CovarianceMatrix> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let r = rng.random_range(0.0..=scale);
        let mut v = Bogoliubov::two_mode_squeeze(r).apply(&CovarianceMatrix::vacuum());
        let sq = 0.5 * scale;
        let layer =
            random_local(&mut rng, Mode::One, sq).then(&random_local(&mut rng, Mode::Two, sq));
        v = layer.apply(&v);
        v.n1 += rng.random_range(0.0..=scale);
        v.n2 += rng.random_range(0.0..=scale);
        let layer =
            random_local(&mut rng, Mode::One, sq).then(&random_local(&mut rng, Mode::Two, sq));
        v = layer.apply(&v);
        if v.check_physical().is_physical() {
            return Ok(v);
        }
    }
    Err(Error::GenerationFailure {
        attempts: MAX_ATTEMPTS,
    })
}
