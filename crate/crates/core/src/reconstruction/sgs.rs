//! Symmetric thermal squeezed family `n1 = n2 = n`, real `mc`: photocount
//! relation, the bounds on `eta1` and the `(n, eta1)` phase diagram.

use crate::entanglement::eof_symmetric;
use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, I3Sign};
use serde::{Deserialize, Serialize};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use thiserror::Error;

/// `|eta1 - bound| <= BOUNDARY_TOL` classifies a cell as `boundary`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// `eta1 = n - mc^2 / (n + 1/2)`.
pub fn eta1_from_photocounts(n: f64, m_c: f64) -> f64 {
    n - m_c * m_c / (n + 0.5)
}

/// `mc = sqrt((n - eta1)(n + 1/2))`, nonnegative.
pub fn m_c_from_eta1(n: f64, eta1: f64) -> Result<f64> {
    let rad = (n - eta1) * (n + 0.5);
    if !(rad >= 0.0) {
        return Err(Error::InconsistentInput(format!(
            "(n - eta1)(n + 1/2) = {rad:e} is negative"
        )));
    }
    Ok(rad.sqrt())
}

/// `(-(n/2)/(n+1/2), (n/2)/(n+1/2))`: below the lower bound no state is
/// physical, at it the state is pure; at and above the upper bound the
/// state is separable.
pub fn sgs_bounds(n: f64) -> Result<(f64, f64)> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "n must be nonnegative, got {n}"
        )));
    }
    let b = 0.5 * n / (n + 0.5);
    Ok((-b, b))
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid grid `{input}`: {reason}")]
pub struct GridParseError {
    pub input: String,
    pub reason: String,
}

/// Inclusive uniform grid written `start:end:steps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, steps: usize) -> Result<Self, GridParseError> {
        let err = |reason: &str| GridParseError {
            input: format!("{start}:{end}:{steps}"),
            reason: reason.into(),
        };
        if !start.is_finite() || !end.is_finite() {
            return Err(err("bounds must be finite"));
        }
        if steps == 0 {
            return Err(err("steps must be at least 1"));
        }
        if steps > 1 && end <= start {
            return Err(err("end must exceed start"));
        }
        Ok(Self { start, end, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.end - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.end
                } else {
                    self.start + h * k as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = GridParseError;

    fn from_str(s: &str) -> Result<Self, GridParseError> {
        let err = |reason: String| GridParseError {
            input: s.to_string(),
            reason,
        };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(err(format!(
                "expected start:end:steps, found {} fields",
                parts.len()
            )));
        }
        let num = |t: &str, what: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("{what} `{t}` is not a number")))
        };
        let start = num(parts[0], "start")?;
        let end = num(parts[1], "end")?;
        let steps = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| err(format!("steps `{}` is not a positive integer", parts[2])))?;
        Grid::new(start, end, steps).map_err(|e| err(e.reason))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.steps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseClass {
    Unphysical,
    Entangled,
    Boundary,
    Separable,
}

impl PhaseClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Unphysical => "unphysical",
            Self::Entangled => "entangled",
            Self::Boundary => "boundary",
            Self::Separable => "separable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub n: f64,
    pub eta1: f64,
    pub class: PhaseClass,
    pub ef_bits: Option<f64>,
}

fn classify(n: f64, eta1: f64) -> PhaseCell {
    let cell = |class, ef_bits| PhaseCell {
        n,
        eta1,
        class,
        ef_bits,
    };
    let Ok((lo, hi)) = sgs_bounds(n) else {
        return cell(PhaseClass::Unphysical, None);
    };
    let Ok(mc) = m_c_from_eta1(n, eta1) else {
        return cell(PhaseClass::Unphysical, None);
    };
    if (eta1 - hi).abs() <= BOUNDARY_TOL {
        return cell(PhaseClass::Boundary, None);
    }
    if eta1 > hi {
        return cell(PhaseClass::Separable, None);
    }
    if eta1 < lo - BOUNDARY_TOL {
        return cell(PhaseClass::Unphysical, None);
    }
    let v = CovarianceMatrix::thermal_squeezed(n, mc);
    if !v.check_physical().is_physical() {
        return cell(PhaseClass::Unphysical, None);
    }
    let mut inv = v.invariants_direct();
    inv.i3_sign = I3Sign::Negative;
    match eof_symmetric(&inv, 1e-9, 1e-10) {
        Ok(ef) => cell(PhaseClass::Entangled, Some(ef)),
        Err(_) => cell(PhaseClass::Unphysical, None),
    }
}

/// Classifies every `(n, eta1)` cell, `n` major.
pub fn phase_diagram(n_grid: &Grid, eta1_grid: &Grid) -> Vec<PhaseCell> {
    let etas = eta1_grid.points();
    n_grid
        .points()
        .into_iter()
        .flat_map(|n| etas.iter().map(move |&e| classify(n, e)))
        .collect()
}

pub fn phase_diagram_csv(cells: &[PhaseCell]) -> String {
    let mut out = String::from("n,eta1,class,ef_bits\n");
    for c in cells {
        let ef = c.ef_bits.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", c.n, c.eta1, c.class.as_str(), ef);
    }
    out
}

/// Matplotlib script that draws the two bound curves over the `E_f` field
/// read from `csv_name`.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r#"import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else {csv_name:?}
rows = list(csv.DictReader(open(path)))
n = np.array([float(r["n"]) for r in rows])
eta = np.array([float(r["eta1"]) for r in rows])
ef = np.array([float(r["ef_bits"]) if r["ef_bits"] else np.nan for r in rows])

ns = np.unique(n)
etas = np.unique(eta)
field = np.full((len(etas), len(ns)), np.nan)
ix = {{v: i for i, v in enumerate(ns)}}
iy = {{v: i for i, v in enumerate(etas)}}
for a, b, c in zip(n, eta, ef):
    field[iy[b], ix[a]] = c

fig, ax = plt.subplots(figsize=(6, 4.5))
mesh = ax.pcolormesh(ns, etas, field, shading="nearest", cmap="viridis")
fig.colorbar(mesh, ax=ax, label=r"$E_f$ (bits)")
curve = np.linspace(ns.min(), ns.max(), 400)
bound = 0.5 * curve / (curve + 0.5)
ax.plot(curve, bound, "k-", lw=1.5)
ax.plot(curve, -bound, "k-", lw=1.5)
ax.set_xlabel(r"$n$")
ax.set_ylabel(r"$\eta_1$")
ax.set_ylim(etas.min(), etas.max())
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"#
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{p_representable, simon_separable};
    use approx::assert_abs_diff_eq;

    #[test]
    fn photocount_relation() {
        assert_abs_diff_eq!(eta1_from_photocounts(1.0, 1.0), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eta1_from_photocounts(0.5, 0.6), 0.14, epsilon = 1e-15);
        assert_eq!(eta1_from_photocounts(2.0, 0.0), 2.0);
        let mc = m_c_from_eta1(1.0, -1.0 / 3.0).unwrap();
        assert_abs_diff_eq!(mc, 2f64.sqrt(), epsilon = 1e-15);
        let det = CovarianceMatrix::thermal_squeezed(1.0, mc).det();
        assert_abs_diff_eq!(det, 1.0 / 16.0, epsilon = 1e-14);
        assert!(m_c_from_eta1(1.0, 1.5).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(sgs_bounds(1.0).unwrap(), (-1.0 / 3.0, 1.0 / 3.0));
        assert_eq!(sgs_bounds(0.0).unwrap(), (-0.0, 0.0));
        let (lo, hi) = sgs_bounds(3.0).unwrap();
        assert_abs_diff_eq!(hi, 3.0 / 7.0, epsilon = 1e-15);
        let pure = CovarianceMatrix::thermal_squeezed(3.0, m_c_from_eta1(3.0, lo).unwrap());
        assert_abs_diff_eq!(pure.purity().unwrap(), 1.0, epsilon = 1e-12);
        let edge = CovarianceMatrix::thermal_squeezed(3.0, m_c_from_eta1(3.0, hi).unwrap());
        let gap = crate::entanglement::simon_gap(&edge.invariants_direct());
        assert!(gap.abs() < 1e-12);
        assert!(sgs_bounds(-0.1).is_err());
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:3:4".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!("-0.5:0.5:1".parse::<Grid>().unwrap().points(), vec![-0.5]);
        for bad in ["", "0:1", "0:1:x", "1:0:5", "0:1:0", "a:1:3", "0:inf:3"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn named_cells() {
        assert_eq!(classify(1.0, 0.5).class, PhaseClass::Separable);
        assert_eq!(classify(1.0, 1.0 / 3.0).class, PhaseClass::Boundary);
        assert_eq!(classify(1.0, -0.4).class, PhaseClass::Unphysical);
        assert_eq!(classify(1.0, -0.5).class, PhaseClass::Unphysical);
        let pure = classify(1.0, -1.0 / 3.0);
        assert_eq!(pure.class, PhaseClass::Entangled);
        // Pure state: E_f equals the entropy of the reduced thermal state,
        // whose occupation is n = 1.
        let oracle = 2.0 * 2f64.log2() - 0.0;
        assert_abs_diff_eq!(pure.ef_bits.unwrap(), oracle, epsilon = 1e-9);
    }

    #[test]
    fn three_tests_agree_on_family() {
        for i in 0..60 {
            for j in 0..60 {
                let n = 0.05 + 2.5 * i as f64 / 59.0;
                let mc = 2.5 * j as f64 / 59.0;
                let v = CovarianceMatrix::thermal_squeezed(n, mc);
                if !v.check_physical().is_physical() {
                    continue;
                }
                let simon = simon_separable(&v.invariants_direct(), 1e-9).separable;
                let p = p_representable(&v, 1e-9);
                let direct = n >= mc - 1e-9;
                assert_eq!(simon, direct, "n={n} mc={mc}");
                assert_eq!(p, direct, "n={n} mc={mc}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let cells = phase_diagram(&"1:1:1".parse().unwrap(), &"0.5:0.5:1".parse().unwrap());
        assert_eq!(
            phase_diagram_csv(&cells),
            "n,eta1,class,ef_bits\n1,0.5,separable,\n"
        );
        assert!(plot_script("out.csv").contains("out.csv"));
    }
}
