//! Brute-force qubit-space oracles.
//!
//! These embed a maximum-spin state into the full `2^N` product space and
//! evaluate moments and reduced states directly from Pauli operators and
//! partial traces. They share no code with the ladder-basis formulas in
//! [`crate::observables`] and [`crate::entanglement`] and exist to validate
//! them at small `N`.
//!
//! Qubit `i` is bit `i` of the basis index; a set bit is spin up (`σ_z = +1`).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::observables::SpinMoments;
use crate::spin::Wavefunction;

/// Largest `N` for which the product-space vector is built.
pub const MAX_QUBITS: usize = 16;

fn check_size(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::OracleTooLarge { n, max: MAX_QUBITS });
    }
    Ok(())
}

/// Product-space amplitudes of `Σ_m φ_m |N,m⟩`, with each `|N,m⟩` the
/// normalized uniform superposition of bitstrings with `(N+m)/2` set bits.
pub fn qubit_state(wf: &Wavefunction) -> Result<Vec<f64>> {
    let n = wf.n_spins;
    check_size(n)?;
    let dim = 1usize << n;
    let mut counts = vec![0usize; n + 1];
    for x in 0..dim {
        counts[x.count_ones() as usize] += 1;
    }
    Ok((0..dim)
        .map(|x| {
            let k = x.count_ones() as usize;
            wf.amps[k] / (counts[k] as f64).sqrt()
        })
        .collect())
}

/// Collective moments from explicit Pauli sums on a real product-space state.
pub fn collective_moments(state: &[f64], n: usize) -> SpinMoments {
    let dim = state.len();
    assert_eq!(dim, 1 << n);
    let mut sx = 0.0;
    let mut sz = 0.0;
    let mut sz2 = 0.0;
    let mut sx2 = 0.0;
    let mut sy2 = 0.0;
    for x in 0..dim {
        let up = x.count_ones() as f64;
        let mz = 2.0 * up - n as f64;
        let p = state[x] * state[x];
        sz += mz * p;
        sz2 += mz * mz * p;
        // (S_x ψ)(x) = Σ_i ψ(x ⊕ 2^i);  (S_y ψ)(x) = i Σ_i s_i(x) ψ(x ⊕ 2^i)
        // with s_i = +1 when qubit i of x is down, −1 when up.
        let mut ax = 0.0;
        let mut ay = 0.0;
        for i in 0..n {
            let y = x ^ (1 << i);
            ax += state[y];
            ay += if x & (1 << i) == 0 { state[y] } else { -state[y] };
        }
        sx += state[x] * ax;
        sx2 += ax * ax;
        sy2 += ay * ay;
    }
    SpinMoments {
        n_spins: n,
        sx,
        sz,
        sz2,
        sx2,
        sy2,
    }
}

/// Reduced density matrix of qubits `0..keep` (traced over the rest).
pub fn partial_trace(state: &[f64], n: usize, keep: usize) -> DMatrix<f64> {
    assert!(keep <= n && state.len() == 1 << n);
    let rows = 1usize << keep;
    let cols = 1usize << (n - keep);
    // ψ(a + 2^keep · b) as a rows × cols matrix
    let psi = DMatrix::from_fn(rows, cols, |a, b| state[a + rows * b]);
    &psi * psi.transpose()
}

/// Restriction of a `keep`-qubit density matrix to the symmetric states
/// `|L,l⟩`, ordered `l = −L, −L+2, …, L`.
pub fn symmetric_projection(rho: &DMatrix<f64>, keep: usize) -> DMatrix<f64> {
    let dim = 1usize << keep;
    // Columns of `basis` are the normalized Dicke states.
    let mut basis = DMatrix::zeros(dim, keep + 1);
    let mut counts = vec![0usize; keep + 1];
    for x in 0..dim {
        counts[x.count_ones() as usize] += 1;
    }
    for x in 0..dim {
        let k = x.count_ones() as usize;
        basis[(x, k)] = 1.0 / (counts[k] as f64).sqrt();
    }
    basis.transpose() * rho * basis
}

/// `Tr ρ²`.
pub fn purity(rho: &DMatrix<f64>) -> f64 {
    rho.iter().map(|x| x * x).sum()
}
