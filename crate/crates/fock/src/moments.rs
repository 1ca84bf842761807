//! Second moments, parity conditioning and spectral quantities of oracle
//! states.

use gaussent_core::gaussian::{CovarianceMatrix, LocalBlock};
use gaussent_core::linalg::{self, CMatrix, C64, ZERO};
use gaussent_core::reconstruction::ConditionedMoments;

use crate::error::{FockError, Result};
use crate::sparse::{Monomial, SparseOp};
use crate::state::FockOperator;

/// Tolerance on `|<a_k>|` for [`covariance_from_state`].
pub const DISPLACEMENT_TOL: f64 = 1e-8;
/// `|Tr sigma1|` at or below which `Gamma1` is not recoverable.
pub const PARITY_TOL: f64 = 1e-9;

/// `Tr(rho O)` for the normal-ordered monomial `a1†^c1 a1^q1 a2†^c2 a2^q2`.
pub fn expectation(rho: &FockOperator, (c1, q1): (usize, usize), (c2, q2): (usize, usize)) -> C64 {
    let (d1, d2) = rho.dims();
    let op = SparseOp::from_monomials(
        d1,
        d2,
        &[Monomial::new(C64::new(1.0, 0.0), (c1, q1), (c2, q2))],
    );
    let m = rho.matrix();
    op.rows()
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|&(j, v)| v * m[(j, i)]).sum::<C64>())
        .sum()
}

/// `Tr(rho a†^c a^q)` for a one-mode operator.
pub fn one_mode_expectation(rho: &CMatrix, c: usize, q: usize) -> C64 {
    let d = rho.rows();
    let op = SparseOp::from_monomials(d, 1, &[Monomial::new(C64::new(1.0, 0.0), (c, q), (0, 0))]);
    op.rows()
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|&(j, v)| v * rho[(j, i)]).sum::<C64>())
        .sum()
}

pub fn covariance_from_state(rho: &FockOperator) -> Result<CovarianceMatrix> {
    for (mode, (c1, q1), (c2, q2)) in [(1, (0, 1), (0, 0)), (2, (0, 0), (0, 1))] {
        let value = expectation(rho, (c1, q1), (c2, q2)).norm();
        if value > DISPLACEMENT_TOL {
            return Err(FockError::NonzeroDisplacement { mode, value });
        }
    }
    let n1 = expectation(rho, (1, 1), (0, 0)).re;
    let n2 = expectation(rho, (0, 0), (1, 1)).re;
    let m1 = -expectation(rho, (0, 2), (0, 0));
    let m2 = -expectation(rho, (0, 0), (0, 2));
    let mc = -expectation(rho, (0, 1), (0, 1));
    let ms = expectation(rho, (0, 1), (1, 0));
    Ok(CovarianceMatrix::new(n1, n2, m1, m2, ms, mc)?)
}

/// Mode-1 operators conditioned on the parity of mode 2.
#[derive(Clone, Debug)]
pub struct ParityDecomposition {
    pub p_even: f64,
    pub p_odd: f64,
    /// Normalised even-conditioned state, `None` when `p_even = 0`.
    pub rho_even: Option<CMatrix>,
    pub rho_odd: Option<CMatrix>,
    /// `Tr_2((-1)^{n2} rho) = p_even rho_even - p_odd rho_odd`.
    pub sigma: CMatrix,
}

pub fn parity_decompose(rho: &FockOperator) -> ParityDecomposition {
    let even = rho.partial_trace_mode2(|n| if n % 2 == 0 { 1.0 } else { 0.0 });
    let odd = rho.partial_trace_mode2(|n| if n % 2 == 1 { 1.0 } else { 0.0 });
    let sigma = even.sub(&odd);
    let (p_even, p_odd) = (even.trace().re, odd.trace().re);
    let normalise = |m: CMatrix, p: f64| (p > 0.0).then(|| m.scale(C64::new(1.0 / p, 0.0)));
    ParityDecomposition {
        p_even,
        p_odd,
        rho_even: normalise(even, p_even),
        rho_odd: normalise(odd, p_odd),
        sigma,
    }
}

pub fn conditioned_moments(rho: &FockOperator) -> ConditionedMoments {
    let p = parity_decompose(rho);
    let stats = |m: &Option<CMatrix>| match m {
        Some(m) => (
            one_mode_expectation(m, 1, 1).re,
            one_mode_expectation(m, 0, 2),
        ),
        None => (0.0, ZERO),
    };
    let (n_even, sq_even) = stats(&p.rho_even);
    let (n_odd, sq_odd) = stats(&p.rho_odd);
    ConditionedMoments {
        p_even: p.p_even,
        p_odd: p.p_odd,
        n_even,
        n_odd,
        sq_even,
        sq_odd,
    }
}

/// Second-moment block of `sigma1 / Tr sigma1`.
pub fn gamma1_oracle(rho: &FockOperator) -> Result<LocalBlock> {
    let sigma = parity_decompose(rho).sigma;
    let t = sigma.trace().re;
    if t.abs() <= PARITY_TOL {
        return Err(FockError::DegenerateParity { mean_parity: t });
    }
    let n = one_mode_expectation(&sigma, 1, 1).re / t;
    let m = -one_mode_expectation(&sigma, 0, 2) / t;
    Ok(LocalBlock::new(n, m))
}

/// `||rho^{T2}||_1`.
pub fn ppt_trace_norm(rho: &FockOperator) -> f64 {
    linalg::eigvalsh_blocked(&rho.partial_transpose())
        .iter()
        .map(|x| x.abs())
        .sum()
}

/// `log2 ||rho^{T2}||_1` in bits.
pub fn log_negativity_oracle(rho: &FockOperator) -> f64 {
    ppt_trace_norm(rho).log2()
}

/// `Tr rho^2`.
pub fn purity_oracle(rho: &FockOperator) -> f64 {
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Von Neumann entropy of `Tr_2 rho` in bits.
pub fn vn_entropy_reduced(rho: &FockOperator) -> f64 {
    linalg::eigvalsh_blocked(&rho.reduced_mode1())
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GaussianCircuit;
    use crate::state::{build_state, Cutoffs};

    #[test]
    fn vacuum_moments() {
        let rho = FockOperator::number_state(Cutoffs::uniform(4), 0, 0);
        assert_eq!(
            covariance_from_state(&rho).unwrap(),
            CovarianceMatrix::vacuum()
        );
        assert_eq!(purity_oracle(&rho), 1.0);
        assert_eq!(vn_entropy_reduced(&rho), 0.0);
        assert!((ppt_trace_norm(&rho) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_parity() {
        let rho = FockOperator::number_state(Cutoffs::uniform(4), 2, 0);
        let p = parity_decompose(&rho);
        assert_eq!((p.p_even, p.p_odd), (1.0, 0.0));
        assert!(p.rho_odd.is_none());
        let g = gamma1_oracle(&rho).unwrap();
        assert!((g.n - 2.0).abs() < 1e-15);
    }

    #[test]
    fn displacement_is_rejected() {
        let (d1, d2) = (4, 4);
        let mut m = CMatrix::zeros(d1 * d2, d1 * d2);
        // (|00> + |10>)/sqrt2 has <a1> = 1/2.
        for i in [0, 4] {
            for j in [0, 4] {
                m[(i, j)] = C64::new(0.5, 0.0);
            }
        }
        let rho = FockOperator::from_matrix(d1, d2, m).unwrap();
        assert!(matches!(
            covariance_from_state(&rho),
            Err(FockError::NonzeroDisplacement { mode: 1, .. })
        ));
    }

    #[test]
    fn tmsv_moments() {
        let r = 0.5f64;
        let rho = build_state(&GaussianCircuit::tmsv(r), Cutoffs::uniform(30)).unwrap();
        let v = covariance_from_state(&rho).unwrap();
        assert!((v.n1 - r.sinh().powi(2)).abs() < 1e-9);
        assert!((v.mc.re - r.sinh() * r.cosh()).abs() < 1e-9);
        assert!(v.ms.norm() + v.m1.norm() + v.m2.norm() < 1e-12);
    }
}
