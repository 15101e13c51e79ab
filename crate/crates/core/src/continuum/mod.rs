//! Continuum treatment of the uniaxial ground state for large `N`.
//!
//! Away from `α = 1` the ground-state amplitudes are Gaussians centred on the
//! minima of the mean-field energy. At `α = 1` the scaled variable
//! `n = m (2N)^{-2/3}` turns the recurrence into the quartic oscillator
//! problem solved in [`quartic`].

pub mod quartic;

pub use quartic::{
    beta_coefficients, k_constant, quartic_ground, GridSpec, QuarticConstants, QuarticSolution,
};

use crate::error::{Error, Result};
use crate::spin::{ladder_m, UniaxialParams, Wavefunction};

fn require_symmetric_phase(p: &UniaxialParams) -> Result<()> {
    p.validate()?;
    if p.epsilon != 0.0 {
        return Err(Error::invalid(
            "continuum expressions are only available for epsilon = 0",
        ));
    }
    Ok(())
}

/// Minima `z₀` of the mean-field energy density in `z = m/N`.
pub fn z0_minima(alpha: f64) -> Vec<f64> {
    if alpha <= 1.0 {
        vec![0.0]
    } else {
        let z = (1.0 - 1.0 / (alpha * alpha)).sqrt();
        vec![-z, z]
    }
}

/// `lim ε₀(N)/N` for `N → ∞`.
pub fn energy_thermodynamic(alpha: f64, delta: f64) -> f64 {
    if alpha <= 1.0 {
        -0.5 * delta
    } else {
        -0.25 * delta * (alpha + 1.0 / alpha)
    }
}

/// Ground-state energy per spin including the `1/N` correction.
pub fn energy_analytic(p: &UniaxialParams) -> Result<f64> {
    require_symmetric_phase(p)?;
    let (a, d, n) = (p.alpha, p.delta, p.n_spins as f64);
    Ok(if a <= 1.0 {
        -0.5 * d * (1.0 + (1.0 - (1.0 - a).sqrt()) / n)
    } else {
        -0.5 * d * (0.5 * (a + 1.0 / a) + (a - (a * a - 1.0).sqrt()) / n)
    })
}

/// Energy per spin at `α = 1`: `-(δ/2)(1 + 1/N) + δ β₀ / (2N)^{4/3}`.
pub fn critical_energy(n_spins: usize, delta: f64, consts: &QuarticConstants) -> f64 {
    let n = n_spins as f64;
    -0.5 * delta * (1.0 + 1.0 / n) + delta * consts.beta0 / (2.0 * n).powf(4.0 / 3.0)
}

/// Width parameter of the continuum Gaussian: `√(1−α)` below the transition,
/// `α√(α²−1)` above it.
pub fn gaussian_width(alpha: f64) -> f64 {
    if alpha < 1.0 {
        (1.0 - alpha).sqrt()
    } else {
        alpha * (alpha * alpha - 1.0).sqrt()
    }
}

/// Continuum ground state sampled on the ladder and renormalized.
///
/// For `α < 1` a single Gaussian `exp(−k m²/4N)` centred at `m = 0`; for
/// `α > 1` the even superposition of two Gaussians centred at
/// `±N√(1 − 1/α²)`.
pub fn gaussian_wavefunction(p: &UniaxialParams) -> Result<Wavefunction> {
    require_symmetric_phase(p)?;
    if p.alpha == 1.0 {
        return Err(Error::invalid(
            "the Gaussian width vanishes at alpha = 1; use the quartic profile",
        ));
    }
    let n = p.n_spins;
    let nf = n as f64;
    let k = gaussian_width(p.alpha);
    let m0 = nf * z0_minima(p.alpha).last().copied().unwrap_or(0.0);
    let amps = (0..=n)
        .map(|i| {
            let m = ladder_m(n, i) as f64;
            if p.alpha < 1.0 {
                (-k * m * m / (4.0 * nf)).exp()
            } else {
                (-k * (m - m0).powi(2) / (4.0 * nf)).exp() + (-k * (m + m0).powi(2) / (4.0 * nf)).exp()
            }
        })
        .collect();
    Wavefunction::from_amplitudes(n, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::solve;

    #[test]
    fn minima() {
        assert_eq!(z0_minima(0.5), vec![0.0]);
        assert_eq!(z0_minima(1.0), vec![0.0]);
        let z = z0_minima(2.0);
        assert!((z[1] - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((z[0] + z[1]).abs() < 1e-15);
    }

    #[test]
    fn thermodynamic_energy_branches() {
        assert_eq!(energy_thermodynamic(0.5, 1.0), -0.5);
        assert!((energy_thermodynamic(1.0 + 1e-12, 1.0) + 0.5).abs() < 1e-12);
        assert!((energy_thermodynamic(2.0, 1.0) + 0.625).abs() < 1e-15);
        // Once differentiable at α = 1: slope of the upper branch is zero there.
        let h = 1e-6;
        let slope = (energy_thermodynamic(1.0 + h, 1.0) - energy_thermodynamic(1.0, 1.0)) / h;
        assert!(slope.abs() < 1e-5);
    }

    #[test]
    fn analytic_energy_values() {
        let e = |n, a| energy_analytic(&UniaxialParams::symmetric(n, 1.0, a).unwrap()).unwrap();
        assert_eq!(e(17, 0.0), -0.5);
        assert!((e(1000, 0.5) + 0.5 * (1.0 + (1.0 - 0.5_f64.sqrt()) / 1000.0)).abs() < 1e-15);
        assert!((e(1000, 0.5) + 0.500_146_45).abs() < 1e-8);
        assert!((e(1000, 2.0) + 0.625_133_97).abs() < 1e-8);
        // Both 1/N coefficients tend to 1 at the transition.
        let below = e(100, 1.0 - 1e-10);
        let above = e(100, 1.0 + 1e-10);
        assert!((below + 0.5 * 1.01).abs() < 1e-6 && (above + 0.5 * 1.01).abs() < 1e-6);
    }

    #[test]
    fn analytic_energy_rejects_asymmetry() {
        let p = UniaxialParams::new(10, 1.0, 0.5, 0.1).unwrap();
        assert!(energy_analytic(&p).is_err());
        assert!(gaussian_wavefunction(&p).is_err());
        let crit = UniaxialParams::symmetric(10, 1.0, 1.0).unwrap();
        assert!(gaussian_wavefunction(&crit).is_err());
    }

    #[test]
    fn gaussian_peaks() {
        let wf = gaussian_wavefunction(&UniaxialParams::symmetric(200, 1.0, 0.3).unwrap()).unwrap();
        let (m_peak, _) = wf.iter().fold((0, 0.0), |b, (m, a)| if a > b.1 { (m, a) } else { b });
        assert_eq!(m_peak, 0);

        let wf = gaussian_wavefunction(&UniaxialParams::symmetric(200, 1.0, 1.3).unwrap()).unwrap();
        let m0 = 200.0 * (1.0 - 1.0 / 1.69_f64).sqrt();
        assert!((m0 - 127.9).abs() < 0.15);
        let (m_peak, _) = wf.iter().fold((0, 0.0), |b, (m, a)| if a > b.1 { (m, a) } else { b });
        assert!((m_peak.abs() as f64 - m0).abs() <= 2.0);
        assert!((wf.amp(m_peak) - wf.amp(-m_peak)).abs() < 1e-15);
    }

    #[test]
    fn gaussian_overlaps_exact_state() {
        let p = UniaxialParams::symmetric(50, 1.0, 0.75).unwrap();
        let (_, exact) = solve(&p).unwrap();
        let g = gaussian_wavefunction(&p).unwrap();
        assert!(g.overlap(&exact) >= 0.99);
    }
}
