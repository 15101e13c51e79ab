//! Exact Dicke ground state in a truncated Fock ⊗ spin space.
//!
//! `H = ω a†a + (λ/√N)(a + a†) S_z − (δ/2) S_x`, doubled spin operators,
//! boson number cut at `n_c`. The ground state is found by restarted Lanczos
//! with full reorthogonalization; the cutoff is doubled until the energy
//! stops moving.

use serde::{Deserialize, Serialize};

use super::DickeParams;
use crate::error::{Error, Result};
use crate::observables::{raw_moments, SpinMoments};
use crate::spin::{ladder_m, raising_coeff, solve};
use crate::tridiag::{lowest_eigenpair, SolverConfig};

/// Largest Hilbert-space dimension the oracle will allocate.
pub const DIMENSION_CAP: usize = 200_000;

const KRYLOV_DIM: usize = 120;
const MAX_RESTARTS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DickeOracleResult {
    pub energy: f64,
    pub moments: SpinMoments,
    pub tangle: f64,
    pub cutoff: usize,
    pub dim: usize,
    pub residual: f64,
}

struct DickeOperator {
    n: usize,
    cutoff: usize,
    omega: f64,
    coupling: f64,
    /// `−(δ/2)·a⁺_m` for `m → m+2`.
    flip: Vec<f64>,
    mag: Vec<f64>,
    sqrt_n: Vec<f64>,
}

impl DickeOperator {
    fn new(p: &DickeParams, cutoff: usize) -> Self {
        let n = p.n_spins;
        Self {
            n,
            cutoff,
            omega: p.omega,
            coupling: p.lam / (n as f64).sqrt(),
            flip: (0..n)
                .map(|k| -0.5 * p.delta * raising_coeff(n, ladder_m(n, k)))
                .collect(),
            mag: (0..=n).map(|k| ladder_m(n, k) as f64).collect(),
            sqrt_n: (0..=cutoff + 1).map(|b| (b as f64).sqrt()).collect(),
        }
    }

    fn dim(&self) -> usize {
        (self.cutoff + 1) * (self.n + 1)
    }

    fn norm_bound(&self) -> f64 {
        let nc = self.cutoff as f64;
        let spin = self.flip.iter().fold(0.0_f64, |a, b| a.max(b.abs())) * 2.0;
        self.omega * nc + 2.0 * self.coupling * self.n as f64 * (nc + 1.0).sqrt() + spin
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let s = self.n + 1;
        for b in 0..=self.cutoff {
            let row = b * s;
            let xb = &x[row..row + s];
            let yb = &mut y[row..row + s];
            let diag = self.omega * b as f64;
            for k in 0..s {
                yb[k] = diag * xb[k];
            }
            for k in 0..self.n {
                yb[k] += self.flip[k] * xb[k + 1];
                yb[k + 1] += self.flip[k] * xb[k];
            }
            // (a + a†) couples b ↔ b±1 with √max(b, b±1)
            if b > 0 {
                let c = self.coupling * self.sqrt_n[b];
                let lower = &x[row - s..row];
                for k in 0..s {
                    yb[k] += c * self.mag[k] * lower[k];
                }
            }
            if b < self.cutoff {
                let c = self.coupling * self.sqrt_n[b + 1];
                let upper = &x[row + s..row + 2 * s];
                for k in 0..s {
                    yb[k] += c * self.mag[k] * upper[k];
                }
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let nrm = dot(v, v).sqrt();
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    nrm
}

/// Born–Oppenheimer guess `φ_m |β_m⟩`, truncated at the cutoff.
fn adiabatic_start(p: &DickeParams, cutoff: usize) -> Result<Vec<f64>> {
    let n = p.n_spins;
    let (_, wf) = solve(&p.uniaxial())?;
    let s = n + 1;
    let mut v = vec![0.0; (cutoff + 1) * s];
    for k in 0..s {
        let beta = -p.lam * wf_m(n, k) / (p.omega * (n as f64).sqrt());
        let mut c = (-0.5 * beta * beta).exp();
        for b in 0..=cutoff {
            if b > 0 {
                c *= beta / (b as f64).sqrt();
            }
            v[b * s + k] = wf.amps[k] * c;
        }
    }
    // Keep a small component everywhere so no symmetry sector is missed.
    for (i, x) in v.iter_mut().enumerate() {
        *x += 1e-6 * (1.0 + (i % 7) as f64) / (1.0 + i as f64);
    }
    normalize(&mut v);
    Ok(v)
}

fn wf_m(n: usize, k: usize) -> f64 {
    ladder_m(n, k) as f64
}

fn lanczos_ground(op: &DickeOperator, start: Vec<f64>, tol: f64) -> Result<(f64, Vec<f64>, f64)> {
    let dim = op.dim();
    let scale = op.norm_bound().max(1.0);
    let krylov = KRYLOV_DIM.min(dim);
    let mut v0 = start;
    let cfg = SolverConfig::default();
    let mut last = (f64::NAN, f64::INFINITY);
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![v0.clone()];
        let mut alphas = Vec::with_capacity(krylov);
        let mut betas = Vec::with_capacity(krylov);
        let mut w = vec![0.0; dim];
        let mut ritz = None;
        for j in 0..krylov {
            op.apply(&basis[j], &mut w);
            let a = dot(&basis[j], &w);
            alphas.push(a);
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
            let b = dot(&w, &w).sqrt();
            let pair = lowest_eigenpair(&alphas, &betas, &cfg)?;
            let estimate = b * pair.vector[j].abs();
            let exhausted = b <= 1e-14 * scale || j + 1 == krylov;
            if estimate <= tol * scale || exhausted {
                ritz = Some((pair, estimate <= tol * scale || b <= 1e-14 * scale));
                break;
            }
            betas.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let (pair, converged) = ritz.expect("Krylov loop always yields a Ritz pair");
        let mut x = vec![0.0; dim];
        for (y, v) in pair.vector.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(a, b)| *a += y * b);
        }
        normalize(&mut x);
        op.apply(&x, &mut w);
        let theta = dot(&x, &w);
        let residual = w
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - theta * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if converged && residual <= 10.0 * tol * scale {
            return Ok((theta, x, residual));
        }
        last = (theta, residual);
        v0 = x;
    }
    Err(Error::SolverFailure {
        residual: last.1,
        iterations: MAX_RESTARTS,
    })
}

fn solve_at(p: &DickeParams, cutoff: usize) -> Result<DickeOracleResult> {
    let op = DickeOperator::new(p, cutoff);
    let dim = op.dim();
    if dim > DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: DIMENSION_CAP,
        });
    }
    let start = adiabatic_start(p, cutoff)?;
    let (energy, psi, residual) = lanczos_ground(&op, start, 1e-12)?;
    let n = p.n_spins;
    let s = n + 1;
    let mut moments = SpinMoments {
        n_spins: n,
        sx: 0.0,
        sz: 0.0,
        sz2: 0.0,
        sx2: 0.0,
        sy2: 0.0,
    };
    let mut rho = vec![0.0; s * s];
    for b in 0..=cutoff {
        let block = &psi[b * s..(b + 1) * s];
        let m = raw_moments(n, block);
        moments.sx += m.sx;
        moments.sz += m.sz;
        moments.sz2 += m.sz2;
        moments.sx2 += m.sx2;
        moments.sy2 += m.sy2;
        for i in 0..s {
            for j in 0..s {
                rho[i * s + j] += block[i] * block[j];
            }
        }
    }
    let purity: f64 = rho.iter().map(|x| x * x).sum();
    Ok(DickeOracleResult {
        energy,
        moments,
        tangle: 1.0 - purity,
        cutoff,
        dim,
        residual,
    })
}

/// Default starting cutoff `⌈4λ²N/ω²⌉ + 20`.
pub fn default_cutoff(p: &DickeParams) -> usize {
    (4.0 * p.lam * p.lam * p.n_spins as f64 / (p.omega * p.omega)).ceil() as usize + 20
}

/// Exact ground state of the Dicke Hamiltonian, converged in the boson cutoff.
///
/// Starting from `cutoff` (or [`default_cutoff`]), the cutoff is doubled
/// until consecutive energies agree to `1e-10·δ`. Fails with
/// [`Error::DimensionCap`] or [`Error::CutoffNotConverged`] when the space
/// would exceed [`DIMENSION_CAP`].
pub fn exact_dicke_oracle(p: &DickeParams, cutoff: Option<usize>) -> Result<DickeOracleResult> {
    let mut c = cutoff.unwrap_or_else(|| default_cutoff(p)).max(1);
    let mut prev = solve_at(p, c)?;
    loop {
        let next_c = 2 * c;
        let next = match solve_at(p, next_c) {
            Ok(r) => r,
            Err(Error::DimensionCap { .. }) => {
                return Err(Error::CutoffNotConverged {
                    cutoff: c,
                    change: f64::NAN,
                })
            }
            Err(e) => return Err(e),
        };
        let change = (next.energy - prev.energy).abs();
        if change < 1e-10 * p.delta {
            return Ok(next);
        }
        if (2 * next_c + 1) * (p.n_spins + 1) > DIMENSION_CAP {
            return Err(Error::CutoffNotConverged {
                cutoff: next_c,
                change,
            });
        }
        prev = next;
        c = next_c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_matches_closed_form_at_zero_coupling() {
        let p = DickeParams::new(1, 1.0, 3.0, 0.0).unwrap();
        let r = exact_dicke_oracle(&p, Some(4)).unwrap();
        assert!((r.energy + 0.5).abs() < 1e-12);
        assert!(r.tangle.abs() < 1e-12);
    }

    #[test]
    fn operator_is_symmetric() {
        let p = DickeParams::from_reduced(3, 1.0, 1.5, 0.3).unwrap();
        let op = DickeOperator::new(&p, 5);
        let dim = op.dim();
        let mut col = vec![0.0; dim];
        let mut cols = Vec::new();
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            op.apply(&e, &mut col);
            cols.push(col.clone());
        }
        for i in 0..dim {
            for j in 0..dim {
                assert!((cols[i][j] - cols[j][i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let p = DickeParams::from_reduced(1000, 1.0, 1.0, 0.1).unwrap();
        assert!(matches!(
            exact_dicke_oracle(&p, Some(400)),
            Err(Error::DimensionCap { .. })
        ));
    }
}
