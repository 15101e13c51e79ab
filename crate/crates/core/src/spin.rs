//! Uniaxial collective spin model in the maximum-spin sector.
//!
//! With the doubled operators `S_k = Σ σ_k` the Hamiltonian
//! `H = -(δ/2) S_x + (ε/2) S_z - (g/N) S_z²` is a Jacobi matrix in the basis
//! `|N, m⟩`, `m = -N, -N+2, …, N`. Index `k` of every amplitude vector in this
//! crate corresponds to `m = -N + 2k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::{self, SolverConfig};

/// Magnetic quantum number stored at ladder index `k`.
#[inline]
pub fn ladder_m(n_spins: usize, k: usize) -> i64 {
    2 * k as i64 - n_spins as i64
}

/// Ladder index of `m`, if `m` lies on the ladder of `N` spins.
#[inline]
pub fn ladder_index(n_spins: usize, m: i64) -> Option<usize> {
    let n = n_spins as i64;
    if m < -n || m > n || (m + n) % 2 != 0 {
        None
    } else {
        Some(((m + n) / 2) as usize)
    }
}

/// Raising coefficient `a⁺_m = ½√(N(N+2) − m(m+2))`, i.e. `⟨N,m+2|J₊|N,m⟩`.
#[inline]
pub fn raising_coeff(n_spins: usize, m: i64) -> f64 {
    let n = n_spins as f64;
    let m = m as f64;
    0.5 * (n * (n + 2.0) - m * (m + 2.0)).max(0.0).sqrt()
}

/// Lowering coefficient `a⁻_m = ½√(N(N+2) − m(m−2))`, i.e. `⟨N,m−2|J₋|N,m⟩`.
#[inline]
pub fn lowering_coeff(n_spins: usize, m: i64) -> f64 {
    raising_coeff(n_spins, m - 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniaxialParams {
    pub n_spins: usize,
    pub delta: f64,
    /// Reduced coupling `α = 4g/δ`.
    pub alpha: f64,
    pub epsilon: f64,
}

impl UniaxialParams {
    pub fn new(n_spins: usize, delta: f64, alpha: f64, epsilon: f64) -> Result<Self> {
        let p = Self {
            n_spins,
            delta,
            alpha,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    /// Symmetric-phase parameters (`ε = 0`).
    pub fn symmetric(n_spins: usize, delta: f64, alpha: f64) -> Result<Self> {
        Self::new(n_spins, delta, alpha, 0.0)
    }

    /// Build from the bare coupling `g` instead of `α`.
    pub fn from_coupling(n_spins: usize, delta: f64, g: f64, epsilon: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::invalid("from_coupling needs delta > 0"));
        }
        Self::new(n_spins, delta, 4.0 * g / delta, epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins == 0 {
            return Err(Error::invalid("n_spins must be at least 1"));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::invalid(format!("delta must be finite and >= 0, got {}", self.delta)));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::invalid(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !self.epsilon.is_finite() {
            return Err(Error::invalid("epsilon must be finite"));
        }
        Ok(())
    }

    /// Coupling `g = αδ/4`.
    pub fn coupling(&self) -> f64 {
        self.alpha * self.delta / 4.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::invalid(format!(
                "tridiagonal shape mismatch: diag {}, offdiag {}",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    /// Number of spins `N` (the matrix is `(N+1)×(N+1)`).
    pub fn n_spins(&self) -> usize {
        self.diag.len() - 1
    }

    pub fn inf_norm(&self) -> f64 {
        tridiag::inf_norm(&self.diag, &self.offdiag)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        tridiag::matvec(&self.diag, &self.offdiag, x, &mut out);
        out
    }

    /// Rayleigh quotient `⟨x|T|x⟩ / ⟨x|x⟩`.
    pub fn expectation(&self, x: &[f64]) -> f64 {
        let tx = self.apply(x);
        let num: f64 = tx.iter().zip(x).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().map(|v| v * v).sum();
        num / den
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.diag.len();
        nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.offdiag[i]
            } else if j + 1 == i {
                self.offdiag[j]
            } else {
                0.0
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wavefunction {
    pub n_spins: usize,
    /// `amps[k]` is `φ_m` with `m = -N + 2k`.
    pub amps: Vec<f64>,
}

impl Wavefunction {
    /// Wrap raw amplitudes; they are renormalized to unit norm.
    pub fn from_amplitudes(n_spins: usize, mut amps: Vec<f64>) -> Result<Self> {
        if amps.len() != n_spins + 1 {
            return Err(Error::invalid(format!(
                "expected {} amplitudes for N = {}, got {}",
                n_spins + 1,
                n_spins,
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("amplitudes have zero or non-finite norm"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_spins, amps })
    }

    /// Amplitude `φ_m`, zero off the ladder.
    pub fn amp(&self, m: i64) -> f64 {
        ladder_index(self.n_spins, m).map_or(0.0, |k| self.amps[k])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// `Ok` when `| ||φ|| - 1 | ≤ tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let deviation = (self.norm_sqr().sqrt() - 1.0).abs();
        if deviation > tol {
            Err(Error::NotNormalized { deviation })
        } else {
            Ok(())
        }
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &Wavefunction) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .abs()
    }

    /// Iterator over `(m, φ_m)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(k, &a)| (ladder_m(self.n_spins, k), a))
    }
}

/// Jacobi matrix of the uniaxial Hamiltonian:
/// `diag[k] = (ε/2) m − (αδ/4N) m²`, `offdiag[k] = −(δ/4)√(N(N+2) − m(m+2))`.
pub fn build_hamiltonian(p: &UniaxialParams) -> Result<TridiagonalMatrix> {
    p.validate()?;
    let n = p.n_spins;
    let nf = n as f64;
    let g = p.coupling();
    let diag = (0..=n)
        .map(|k| {
            let m = ladder_m(n, k) as f64;
            0.5 * p.epsilon * m - g / nf * m * m
        })
        .collect();
    let offdiag = (0..n)
        .map(|k| -0.5 * p.delta * raising_coeff(n, ladder_m(n, k)))
        .collect();
    TridiagonalMatrix::new(diag, offdiag)
}

/// Exact ground state of a Jacobi matrix with default tolerances.
pub fn ground_state(t: &TridiagonalMatrix) -> Result<(f64, Wavefunction)> {
    ground_state_with(t, &SolverConfig::default())
}

pub fn ground_state_with(t: &TridiagonalMatrix, cfg: &SolverConfig) -> Result<(f64, Wavefunction)> {
    let mut ep = tridiag::lowest_eigenpair(&t.diag, &t.offdiag, cfg)?;
    // Negative couplings make the ground state a Perron vector; any negative
    // entry is round-off in a tunnelling tail.
    if t.offdiag.iter().all(|&x| x < 0.0) {
        ep.vector.iter_mut().for_each(|a| *a = a.abs());
    }
    Ok((
        ep.value,
        Wavefunction {
            n_spins: t.n_spins(),
            amps: ep.vector,
        },
    ))
}

/// Convenience: build and solve in one step.
pub fn solve(p: &UniaxialParams) -> Result<(f64, Wavefunction)> {
    ground_state(&build_hamiltonian(p)?)
}

/// Largest `N` accepted by [`dense_oracle_ground`].
pub const DENSE_ORACLE_MAX_N: usize = 64;

/// Ground state from a full dense symmetric eigendecomposition, used to
/// validate [`ground_state`].
///
/// For `ε = 0` the returned vector is the inversion-even combination of the
/// two lowest eigenvectors, which stays well defined when the pair is
/// degenerate to working precision (deep in the broken phase).
pub fn dense_oracle_ground(p: &UniaxialParams) -> Result<(f64, Wavefunction)> {
    p.validate()?;
    if p.n_spins > DENSE_ORACLE_MAX_N {
        return Err(Error::OracleTooLarge {
            n: p.n_spins,
            max: DENSE_ORACLE_MAX_N,
        });
    }
    let t = build_hamiltonian(p)?;
    let dim = t.diag.len();
    let eig = t.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let mut v: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();

    if dim > 1 && p.epsilon == 0.0 {
        // Levels alternate in parity; diagonalize inversion P inside the
        // lowest pair, which may be degenerate to working precision.
        let u: Vec<f64> = eig.eigenvectors.column(order[1]).iter().copied().collect();
        let pdot = |a: &[f64], b: &[f64]| -> f64 { (0..dim).map(|k| a[k] * b[dim - 1 - k]).sum() };
        let p2 = nalgebra::Matrix2::new(pdot(&v, &v), pdot(&v, &u), pdot(&u, &v), pdot(&u, &u));
        let pe = p2.symmetric_eigen();
        let j = if pe.eigenvalues[0] > pe.eigenvalues[1] { 0 } else { 1 };
        let (cv, cu) = (pe.eigenvectors[(0, j)], pe.eigenvectors[(1, j)]);
        v = (0..dim).map(|k| cv * v[k] + cu * u[k]).collect();
    }
    tridiag::fix_sign(&mut v);
    Ok((e0, Wavefunction::from_amplitudes(p.n_spins, v)?))
}
