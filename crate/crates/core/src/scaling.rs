//! Finite-size sweeps and log-log power-law fits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dicke::{qubit_field_tangle, DickeParams};
use crate::entanglement::{one_tangle, rescaled_concurrence};
use crate::error::{Error, Result};
use crate::observables::spin_moments;
use crate::spin::{build_hamiltonian, ground_state_with, UniaxialParams, Wavefunction};
use crate::tridiag::SolverConfig;

/// Scalar ground-state quantities that can be swept over `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `ε₀/N`
    Energy,
    /// `⟨S_x⟩/N`
    Sx,
    /// `1 − ⟨S_x⟩/N`
    OneMinusSx,
    /// `⟨S_z²⟩/N²`
    Sz2,
    /// `⟨S_x²⟩/N²`
    Sx2,
    /// `⟨S_y²⟩/N²`
    Sy2,
    /// `τ₁`
    OneTangle,
    /// `C_r`
    Concurrence,
    /// `1 − C_r`
    OneMinusConcurrence,
    /// `τ_N` of the adiabatic Dicke model; needs `D`.
    FieldTangle,
}

impl Observable {
    pub const ALL: [Observable; 10] = [
        Observable::Energy,
        Observable::Sx,
        Observable::OneMinusSx,
        Observable::Sz2,
        Observable::Sx2,
        Observable::Sy2,
        Observable::OneTangle,
        Observable::Concurrence,
        Observable::OneMinusConcurrence,
        Observable::FieldTangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Energy => "energy",
            Observable::Sx => "sx",
            Observable::OneMinusSx => "one_minus_sx",
            Observable::Sz2 => "sz2",
            Observable::Sx2 => "sx2",
            Observable::Sy2 => "sy2",
            Observable::OneTangle => "tau1",
            Observable::Concurrence => "cr",
            Observable::OneMinusConcurrence => "one_minus_cr",
            Observable::FieldTangle => "tau_n",
        }
    }

    pub fn needs_d_ratio(self) -> bool {
        self == Observable::FieldTangle
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Observable::ALL.iter().map(|o| o.name()).collect();
                Error::invalid(format!("unknown observable '{s}', expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub alpha: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub d_ratio: Option<f64>,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl SweepParams {
    pub fn critical() -> Self {
        Self {
            alpha: 1.0,
            delta: 1.0,
            epsilon: 0.0,
            d_ratio: None,
            solver: SolverConfig::default(),
        }
    }
}

fn ground(p: &UniaxialParams, cfg: &SolverConfig) -> Result<(f64, Wavefunction)> {
    ground_state_with(&build_hamiltonian(p)?, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub observable: Observable,
    pub params: SweepParams,
    pub rows: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// `A` in `y ≈ A (2N)^p`.
    pub prefactor: f64,
    /// RMS deviation of `ln y` from the fitted line.
    pub residual: f64,
    pub window: (usize, usize),
}

impl PowerLawFit {
    /// `B` in `y ≈ B N^p`.
    pub fn prefactor_per_n(&self) -> f64 {
        self.prefactor * 2f64.powf(self.exponent)
    }

    pub fn predict(&self, n: usize) -> f64 {
        self.prefactor * (2.0 * n as f64).powf(self.exponent)
    }
}

/// Powers of two from `nmin` to `nmax` when `points` is `None`, otherwise
/// `points` log-spaced sizes (rounded, duplicates dropped).
pub fn geometric_grid(nmin: usize, nmax: usize, points: Option<usize>) -> Result<Vec<usize>> {
    if nmin == 0 || nmax < nmin {
        return Err(Error::invalid(format!("invalid N range [{nmin}, {nmax}]")));
    }
    let mut ns = match points {
        None => {
            let mut v = Vec::new();
            let mut n = nmin.next_power_of_two();
            if n != nmin {
                v.push(nmin);
            }
            while n <= nmax {
                v.push(n);
                n *= 2;
            }
            if v.last() != Some(&nmax) && nmax > nmin {
                v.push(nmax);
            }
            v
        }
        Some(0) => return Err(Error::invalid("N grid needs at least one point")),
        Some(1) => vec![nmin],
        Some(k) => {
            let (a, b) = ((nmin as f64).ln(), (nmax as f64).ln());
            (0..k)
                .map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp().round() as usize)
                .collect()
        }
    };
    ns.dedup();
    Ok(ns)
}

/// Evaluates one observable at one `N`.
pub fn evaluate(obs: Observable, n: usize, params: &SweepParams) -> Result<f64> {
    let p = UniaxialParams::new(n, params.delta, params.alpha, params.epsilon)?;
    if obs == Observable::FieldTangle {
        let d = params
            .d_ratio
            .ok_or_else(|| Error::invalid("field tangle needs a D ratio"))?;
        if params.epsilon != 0.0 {
            return Err(Error::invalid("the Dicke layer needs epsilon = 0"));
        }
        let dp = DickeParams::from_reduced(n, params.delta, params.alpha, d)?;
        let (_, wf) = ground(&dp.uniaxial(), &params.solver)?;
        return qubit_field_tangle(&wf, &dp);
    }
    let (e, wf) = ground(&p, &params.solver)?;
    let nf = n as f64;
    Ok(match obs {
        Observable::Energy => e / nf,
        Observable::Sx => spin_moments(&wf)?.sx_per_n(),
        Observable::OneMinusSx => 1.0 - spin_moments(&wf)?.sx_per_n(),
        Observable::Sz2 => spin_moments(&wf)?.sz2_per_n2(),
        Observable::Sx2 => spin_moments(&wf)?.sx2_per_n2(),
        Observable::Sy2 => spin_moments(&wf)?.sy2_per_n2(),
        Observable::OneTangle => one_tangle(&wf)?,
        Observable::Concurrence => rescaled_concurrence(&wf)?.1,
        Observable::OneMinusConcurrence => 1.0 - rescaled_concurrence(&wf)?.1,
        Observable::FieldTangle => unreachable!(),
    })
}

/// One ground-state solve per `N`, run in parallel; the first failing `N`
/// (in list order) is reported.
pub fn sweep(obs: Observable, ns: &[usize], params: &SweepParams) -> Result<SweepTable> {
    if ns.is_empty() {
        return Err(Error::invalid("empty N list"));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("N list must be strictly increasing"));
    }
    let values: Vec<Result<f64>> = ns.par_iter().map(|&n| evaluate(obs, n, params)).collect();
    let mut rows = Vec::with_capacity(ns.len());
    for (&n, v) in ns.iter().zip(values) {
        let v = v.map_err(|e| Error::Sweep {
            n,
            source: Box::new(e),
        })?;
        if !v.is_finite() {
            return Err(Error::Sweep {
                n,
                source: Box::new(Error::Fit(format!("non-finite value {v}"))),
            });
        }
        rows.push((n, v));
    }
    Ok(SweepTable {
        observable: obs,
        params: *params,
        rows,
    })
}

/// Ordinary least squares of `ln y` against `ln N` over rows with
/// `window.0 ≤ N ≤ window.1`.
pub fn fit_power_law(table: &SweepTable, window: (usize, usize)) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|(n, _)| *n >= window.0 && *n <= window.1)
        .map(|&(n, y)| {
            if y > 0.0 {
                Ok(((n as f64).ln(), y.ln()))
            } else {
                Err(Error::Fit(format!("non-positive value {y} at N = {n}")))
            }
        })
        .collect::<Result<_>>()?;
    if pts.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points in window, found {}",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    let first = table.rows.iter().find(|(n, _)| *n >= window.0).unwrap().0;
    let last = table.rows.iter().rev().find(|(n, _)| *n <= window.1).unwrap().0;
    Ok(PowerLawFit {
        exponent: slope,
        prefactor: (intercept - slope * 2f64.ln()).exp(),
        residual,
        window: (first, last),
    })
}
