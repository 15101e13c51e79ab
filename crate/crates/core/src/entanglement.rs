//! Entanglement of the uniaxial ground state.
//!
//! A block of `L` spins is split off with the decomposition
//! `|N,m⟩ = Σ_l p_{lm}^{1/2} |N−L, m−l⟩ ⊗ |L,l⟩`, where `p_{lm}` is a
//! hypergeometric weight. Single- and two-qubit quantities are expressed
//! through collective moments.

use nalgebra::{DMatrix, Matrix3, Matrix4};
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::continuum::QuarticConstants;
use crate::error::{Error, Result};
use crate::observables::{ladder_expectations, spin_moments};
use crate::spin::{ladder_index, ladder_m, Wavefunction};

fn check_block(n_spins: usize, block: usize) -> Result<()> {
    if block < 1 || block + 1 > n_spins {
        return Err(Error::invalid(format!(
            "block size must lie in [1, N-1], got L = {block} for N = {n_spins}"
        )));
    }
    Ok(())
}

fn weight(n_spins: usize, block: usize, l: i64, m: i64) -> f64 {
    let (n, b) = (n_spins as i64, block as i64);
    let up_block = (b + l) / 2;
    let up_rest2 = n - b + m - l;
    if up_rest2 < 0 || up_rest2 % 2 != 0 || up_rest2 / 2 > n - b {
        return 0.0;
    }
    let ln = ln_binomial(block as u64, up_block as u64)
        + ln_binomial((n - b) as u64, (up_rest2 / 2) as u64)
        - ln_binomial(n_spins as u64, ((n + m) / 2) as u64);
    ln.exp()
}

/// Weights `p_{lm}` for `l = −L, −L+2, …, L` (entry `i` ↔ `l = −L + 2i`).
pub fn block_weights(n_spins: usize, block: usize, m: i64) -> Result<Vec<f64>> {
    check_block(n_spins, block)?;
    if ladder_index(n_spins, m).is_none() {
        return Err(Error::invalid(format!("m = {m} is not on the ladder of N = {n_spins}")));
    }
    Ok((0..=block)
        .map(|i| weight(n_spins, block, ladder_m(block, i), m))
        .collect())
}

/// Reduced density matrix of a block of `L` spins in the basis `|L,l⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRdm {
    pub block_size: usize,
    /// Row/column `i` ↔ `l = −L + 2i`.
    pub matrix: DMatrix<f64>,
}

impl BlockRdm {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|x| x * x).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigenvalues().min()
    }
}

pub fn block_rdm(wf: &Wavefunction, block: usize) -> Result<BlockRdm> {
    let n = wf.n_spins;
    check_block(n, block)?;
    // sqrt_p[i][k] = p_{l_i, m_k}^{1/2}
    let sqrt_p: Vec<Vec<f64>> = (0..=block)
        .map(|i| {
            let l = ladder_m(block, i);
            (0..=n).map(|k| weight(n, block, l, ladder_m(n, k)).sqrt()).collect()
        })
        .collect();
    let phi = &wf.amps;
    let mut rho = DMatrix::zeros(block + 1, block + 1);
    for i1 in 0..=block {
        for i2 in i1..=block {
            let mut acc = 0.0;
            for k in 0..=n {
                // m' = m − l₁ + l₂  ⇔  k' = k + i₂ − i₁
                let kp = k + i2 - i1;
                if kp > n {
                    break;
                }
                acc += sqrt_p[i1][k] * sqrt_p[i2][kp] * phi[k] * phi[kp];
            }
            rho[(i1, i2)] = acc;
            rho[(i2, i1)] = acc;
        }
    }
    Ok(BlockRdm {
        block_size: block,
        matrix: rho,
    })
}

/// `τ_L = η_L (1 − Tr ρ²)` with `η_L = 2^L / (2^L − 1)`.
pub fn linear_entropy(rho: &BlockRdm) -> f64 {
    let eta = 1.0 / (1.0 - 0.5_f64.powi(rho.block_size as i32));
    eta * (1.0 - rho.purity())
}

/// One-tangle `τ₁ = 1 − (⟨S_x⟩² + ⟨S_z⟩²)/N²`.
pub fn one_tangle(wf: &Wavefunction) -> Result<f64> {
    let s = spin_moments(wf)?;
    Ok(1.0 - s.sx_per_n().powi(2) - s.sz_per_n().powi(2))
}

/// `1/N` expansion of the one-tangle away from the transition.
pub fn one_tangle_analytic(alpha: f64, n_spins: usize) -> f64 {
    let n = n_spins as f64;
    if alpha < 1.0 {
        (2.0 + (alpha - 2.0) / (1.0 - alpha).sqrt()) / n
    } else {
        1.0 - 1.0 / (alpha * alpha) + 2.0 / (n * alpha * (alpha * alpha - 1.0).sqrt())
    }
}

/// Critical one-tangle `4β₁ / (2N)^{2/3}`.
pub fn one_tangle_critical(n_spins: usize, consts: &QuarticConstants) -> f64 {
    4.0 * consts.beta1 * (2.0 * n_spins as f64).powf(-2.0 / 3.0)
}

/// Two-qubit reduced state restricted to the triplet sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitRdm {
    pub v_plus: f64,
    pub v_minus: f64,
    pub w: f64,
    pub u: f64,
    pub x_plus: f64,
    pub x_minus: f64,
}

impl TwoQubitRdm {
    /// Matrix in the basis `|2,2⟩, |2,0⟩, |2,−2⟩`.
    pub fn matrix(&self) -> Matrix3<f64> {
        let r2 = std::f64::consts::SQRT_2;
        Matrix3::new(
            self.v_plus,
            r2 * self.x_plus,
            self.u,
            r2 * self.x_plus,
            2.0 * self.w,
            r2 * self.x_minus,
            self.u,
            r2 * self.x_minus,
            self.v_minus,
        )
    }

    /// Matrix in the product basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
    pub fn product_basis(&self) -> Matrix4<f64> {
        let (vp, vm, w, u, xp, xm) = (
            self.v_plus,
            self.v_minus,
            self.w,
            self.u,
            self.x_plus,
            self.x_minus,
        );
        Matrix4::new(
            vp, xp, xp, u, //
            xp, w, w, xm, //
            xp, w, w, xm, //
            u, xm, xm, vm,
        )
    }

    pub fn trace(&self) -> f64 {
        self.v_plus + self.v_minus + 2.0 * self.w
    }
}

pub fn two_qubit_rdm(wf: &Wavefunction) -> Result<TwoQubitRdm> {
    if wf.n_spins < 2 {
        return Err(Error::invalid("two-qubit state needs N >= 2"));
    }
    let s = spin_moments(wf)?;
    let l = ladder_expectations(wf);
    let n = wf.n_spins as f64;
    let pair = n * (n - 1.0);
    Ok(TwoQubitRdm {
        v_plus: (n * (n - 2.0) + s.sz2) / (4.0 * pair) + s.sz / (2.0 * n),
        v_minus: (n * (n - 2.0) + s.sz2) / (4.0 * pair) - s.sz / (2.0 * n),
        w: (n * n - s.sz2) / (4.0 * pair),
        u: l.splus2 / pair,
        x_plus: l.splus / (2.0 * n) + l.splus_sz / (4.0 * pair),
        x_minus: l.splus / (2.0 * n) - l.splus_sz / (4.0 * pair),
    })
}

/// `C_y` from `(N − 1) C_y = 1 − ⟨S_y²⟩/N`.
pub fn concurrence_from_sy2(n_spins: usize, sy2: f64) -> f64 {
    let n = n_spins as f64;
    (1.0 - sy2 / n) / (n - 1.0)
}

/// Pairwise concurrence `C = max(0, C_y)` and its rescaled form
/// `C_r = (N − 1) C`.
pub fn rescaled_concurrence(wf: &Wavefunction) -> Result<(f64, f64)> {
    if wf.n_spins < 2 {
        return Err(Error::invalid("concurrence needs N >= 2"));
    }
    let s = spin_moments(wf)?;
    let c = concurrence_from_sy2(wf.n_spins, s.sy2).max(0.0);
    Ok((c, (wf.n_spins as f64 - 1.0) * c))
}

/// Thermodynamic limit of `C_r`.
pub fn concurrence_thermodynamic(alpha: f64) -> f64 {
    if alpha <= 1.0 {
        1.0 - (1.0 - alpha).sqrt()
    } else {
        1.0 - (1.0 - 1.0 / (alpha * alpha)).sqrt()
    }
}

/// Critical `C_r ≈ 1 − 4β₀ / (3 (2N)^{1/3})`.
pub fn concurrence_critical(n_spins: usize, consts: &QuarticConstants) -> f64 {
    1.0 - 4.0 * consts.beta0 / (3.0 * (2.0 * n_spins as f64).cbrt())
}
