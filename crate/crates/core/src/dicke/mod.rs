//! Adiabatic Dicke model on top of the uniaxial ground state.
//!
//! For a fast oscillator (`D = δ/ω` small) the ground state is
//! `Σ_m φ_m |β_m⟩ ⊗ |N,m⟩`, where `φ_m` is the uniaxial ground state with
//! `g = λ²/ω` and `|β_m⟩` is the vacuum displaced by `β_m = −λm/(ω√N)`.
//! Qubit observables pick up coherent-state overlaps
//! `⟨β_m|β_m'⟩ = exp(−αD (m−m')²/8N)`.

pub mod oracle;

pub use oracle::{exact_dicke_oracle, DickeOracleResult, DIMENSION_CAP};

use serde::{Deserialize, Serialize};

use crate::continuum::QuarticConstants;
use crate::entanglement::concurrence_from_sy2;
use crate::error::{Error, Result};
use crate::observables::{spin_moments, SpinMoments};
use crate::spin::{solve, UniaxialParams, Wavefunction};

/// Largest `D` for which the Born–Oppenheimer reduction is considered sound.
pub const ADIABATIC_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeParams {
    pub n_spins: usize,
    pub delta: f64,
    pub omega: f64,
    pub lam: f64,
}

impl DickeParams {
    pub fn new(n_spins: usize, delta: f64, omega: f64, lam: f64) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::invalid("n_spins must be at least 1"));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::invalid(format!("omega must be positive, got {omega}")));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::invalid(format!("delta must be positive, got {delta}")));
        }
        if !(lam >= 0.0) || !lam.is_finite() {
            return Err(Error::invalid(format!("lambda must be >= 0, got {lam}")));
        }
        Ok(Self {
            n_spins,
            delta,
            omega,
            lam,
        })
    }

    /// Parameters from the reduced pair `(α, D)`: `ω = δ/D`, `λ² = αωδ/4`.
    pub fn from_reduced(n_spins: usize, delta: f64, alpha: f64, d_ratio: f64) -> Result<Self> {
        if !(d_ratio > 0.0) {
            return Err(Error::invalid(format!("D must be positive, got {d_ratio}")));
        }
        if !(alpha >= 0.0) {
            return Err(Error::invalid(format!("alpha must be >= 0, got {alpha}")));
        }
        let omega = delta / d_ratio;
        Self::new(n_spins, delta, omega, (alpha * omega * delta / 4.0).sqrt())
    }

    /// `D = δ/ω`.
    pub fn d_ratio(&self) -> f64 {
        self.delta / self.omega
    }

    /// `α = 4λ²/(ωδ)`.
    pub fn alpha(&self) -> f64 {
        4.0 * self.lam * self.lam / (self.omega * self.delta)
    }

    /// Effective uniaxial coupling `g = λ²/ω`.
    pub fn coupling(&self) -> f64 {
        self.lam * self.lam / self.omega
    }

    pub fn is_adiabatic(&self) -> bool {
        self.d_ratio() <= ADIABATIC_LIMIT
    }

    /// The uniaxial model whose ground state carries the qubit amplitudes.
    pub fn uniaxial(&self) -> UniaxialParams {
        UniaxialParams {
            n_spins: self.n_spins,
            delta: self.delta,
            alpha: self.alpha(),
            epsilon: 0.0,
        }
    }

    /// Coherent-state overlap for a jump `Δm` in magnetization.
    pub fn overlap_kernel(&self, dm: i64) -> f64 {
        let dm = dm as f64;
        (-self.alpha() * self.d_ratio() * dm * dm / (8.0 * self.n_spins as f64)).exp()
    }
}

fn check_match(wf: &Wavefunction, p: &DickeParams) -> Result<()> {
    if wf.n_spins != p.n_spins {
        return Err(Error::invalid(format!(
            "wavefunction has N = {} but parameters have N = {}",
            wf.n_spins, p.n_spins
        )));
    }
    Ok(())
}

/// Qubit moments in the adiabatic Dicke ground state.
///
/// `⟨S_x⟩` is damped by the `Δm = 2` overlap and `⟨S_x² − S_y²⟩` by the
/// `Δm = 4` overlap; `⟨S_z⟩`, `⟨S_z²⟩` and `⟨S_x² + S_y²⟩` are diagonal in
/// `m` and unchanged.
pub fn dicke_moments(wf: &Wavefunction, p: &DickeParams) -> Result<SpinMoments> {
    check_match(wf, p)?;
    let base = spin_moments(wf)?;
    let sum = base.sx2 + base.sy2;
    let diff = p.overlap_kernel(4) * (base.sx2 - base.sy2);
    Ok(SpinMoments {
        sx: p.overlap_kernel(2) * base.sx,
        sx2: 0.5 * (sum + diff),
        sy2: 0.5 * (sum - diff),
        ..base
    })
}

/// Energy per spin of the adiabatic Dicke model at `α = 1`:
/// `−(δ/2)(1 + (2−D)/2N − 2β₀/(2N)^{4/3})`.
pub fn dicke_critical_energy(n_spins: usize, delta: f64, d_ratio: f64, consts: &QuarticConstants) -> f64 {
    let n = n_spins as f64;
    -0.5 * delta * (1.0 + (2.0 - d_ratio) / (2.0 * n) - 2.0 * consts.beta0 / (2.0 * n).powf(4.0 / 3.0))
}

/// Upper end `α₀ = (1 + D²)/2D` of the thermodynamic concurrence formula.
pub fn alpha_validity_bound(d_ratio: f64) -> f64 {
    (1.0 + d_ratio * d_ratio) / (2.0 * d_ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemSize {
    Finite(usize),
    Thermodynamic,
}

/// Thermodynamic rescaled concurrence of the Dicke qubits, clamped at zero.
pub fn dicke_concurrence_limit(alpha: f64, d_ratio: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !(d_ratio >= 0.0) {
        return Err(Error::invalid("alpha and D must be non-negative"));
    }
    let bound = alpha_validity_bound(d_ratio);
    if alpha >= bound {
        return Err(Error::invalid(format!(
            "alpha = {alpha} outside the validity range alpha < {bound}"
        )));
    }
    let c = if alpha <= 1.0 {
        1.0 - d_ratio * alpha - (1.0 - alpha).sqrt()
    } else {
        1.0 - d_ratio / alpha - (1.0 - 1.0 / (alpha * alpha)).sqrt()
    };
    Ok(c.max(0.0))
}

/// Critical finite-size `C_r ≈ 1 − D − 4β₀/(3(2N)^{1/3})`, clamped at zero.
pub fn dicke_concurrence_critical(n_spins: usize, d_ratio: f64, consts: &QuarticConstants) -> f64 {
    let c = 1.0 - d_ratio - 4.0 * consts.beta0 / (3.0 * (2.0 * n_spins as f64).cbrt());
    c.max(0.0)
}

/// Rescaled concurrence `(N−1) max(0, C_y)` built from [`dicke_moments`].
pub fn dicke_rescaled_concurrence(wf: &Wavefunction, p: &DickeParams) -> Result<f64> {
    if p.n_spins < 2 {
        return Err(Error::invalid("concurrence needs N >= 2"));
    }
    let s = dicke_moments(wf, p)?;
    Ok((p.n_spins as f64 - 1.0) * concurrence_from_sy2(p.n_spins, s.sy2).max(0.0))
}

/// `C_r(α, D)` either in the thermodynamic limit or at finite `N` (from the
/// exact uniaxial ground state).
pub fn dicke_concurrence(alpha: f64, d_ratio: f64, size: SystemSize) -> Result<f64> {
    match size {
        SystemSize::Thermodynamic => dicke_concurrence_limit(alpha, d_ratio),
        SystemSize::Finite(n) => {
            let p = DickeParams::from_reduced(n, 1.0, alpha, d_ratio)?;
            let (_, wf) = solve(&p.uniaxial())?;
            dicke_rescaled_concurrence(&wf, &p)
        }
    }
}

/// Kernel exponent below which terms of the tangle sum are dropped
/// (`e^{-37} < 1e-16`).
const KERNEL_CUTOFF_EXPONENT: f64 = 37.0;

/// Linear entropy between the qubits and the oscillator,
/// `τ_N = 1 − Σ_{m,m'} e^{−αD(m−m')²/4N} φ_m² φ_m'²`.
///
/// No `2^N/(2^N − 1)` prefactor is applied: it would lift the small-`N`
/// curves above larger `N` for weak coupling.
pub fn qubit_field_tangle(wf: &Wavefunction, p: &DickeParams) -> Result<f64> {
    check_match(wf, p)?;
    let n = wf.n_spins;
    let rate = p.alpha() * p.d_ratio() / (4.0 * n as f64);
    let w: Vec<f64> = wf.amps.iter().map(|a| a * a).collect();
    // Δm = 2j; keep j with rate·(2j)² ≤ cutoff.
    let band = if rate > 0.0 {
        ((KERNEL_CUTOFF_EXPONENT / rate).sqrt() / 2.0).floor() as usize
    } else {
        n
    }
    .min(n);
    let kernel: Vec<f64> = (0..=band)
        .map(|j| (-rate * (2.0 * j as f64).powi(2)).exp())
        .collect();
    let mut sum = 0.0;
    for k in 0..=n {
        if w[k] == 0.0 {
            continue;
        }
        let mut inner = w[k];
        for j in 1..=band.min(n - k) {
            inner += 2.0 * kernel[j] * w[k + j];
        }
        sum += w[k] * inner;
    }
    Ok(1.0 - sum)
}

/// Thermodynamic qubit–oscillator tangle; equals 1 at `α = 1`.
pub fn tangle_thermodynamic(alpha: f64, d_ratio: f64) -> f64 {
    if alpha < 1.0 {
        1.0 - (1.0 + d_ratio * alpha / (1.0 - alpha).sqrt()).powf(-0.5)
    } else if alpha == 1.0 {
        1.0
    } else {
        1.0 - 0.5 * (1.0 + d_ratio / (alpha * alpha - 1.0).sqrt()).powf(-0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalTangle {
    pub value: f64,
    /// `N > 4/D³`; below it higher orders are not negligible.
    pub in_validity_range: bool,
}

/// Large-`N` critical tangle `1 − K (π/D)^{1/2} (4/N)^{1/6}`.
pub fn tangle_critical_scaling(n_spins: usize, d_ratio: f64, consts: &QuarticConstants) -> CriticalTangle {
    let n = n_spins as f64;
    CriticalTangle {
        value: 1.0 - consts.k * (std::f64::consts::PI / d_ratio).sqrt() * (4.0 / n).powf(1.0 / 6.0),
        in_validity_range: n > 4.0 / d_ratio.powi(3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> QuarticConstants {
        QuarticConstants {
            beta0: 1.06036,
            beta1: 0.36203,
            k: 0.46,
        }
    }

    #[test]
    fn parameter_map_is_consistent() {
        let p = DickeParams::from_reduced(10, 0.8, 0.7, 0.1).unwrap();
        assert!((p.alpha() - 0.7).abs() < 1e-14);
        assert!((p.d_ratio() - 0.1).abs() < 1e-15);
        assert!((p.coupling() - p.alpha() * p.delta / 4.0).abs() < 1e-15);
        assert!(p.is_adiabatic());
        assert!(!DickeParams::from_reduced(10, 1.0, 0.7, 0.6).unwrap().is_adiabatic());
        assert!(DickeParams::new(3, 1.0, 0.0, 1.0).is_err());
        assert!(DickeParams::new(3, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn sx_kernel_arithmetic() {
        let p = DickeParams::from_reduced(100, 1.0, 1.0, 0.1).unwrap();
        let (_, wf) = solve(&p.uniaxial()).unwrap();
        let base = spin_moments(&wf).unwrap();
        let d = dicke_moments(&wf, &p).unwrap();
        assert!((d.sx - base.sx * (-0.0005_f64).exp()).abs() < 1e-12);
        assert_eq!(d.sz2, base.sz2);
        assert!(d.casimir_defect().abs() < 1e-9 * 1e4);
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let p = DickeParams::from_reduced(10, 1.0, 1.0, 0.1).unwrap();
        let (_, wf) = solve(&UniaxialParams::symmetric(11, 1.0, 1.0).unwrap()).unwrap();
        assert!(dicke_moments(&wf, &p).is_err());
        assert!(qubit_field_tangle(&wf, &p).is_err());
    }

    #[test]
    fn critical_energy_reduces_to_uniaxial_form_at_zero_d() {
        let c = consts();
        for n in [10usize, 1000, 123_456] {
            let a = dicke_critical_energy(n, 1.0, 0.0, &c);
            let b = crate::continuum::critical_energy(n, 1.0, &c);
            assert!((a - b).abs() < 1e-15);
        }
        let e = dicke_critical_energy(1000, 1.0, 0.1, &c);
        let expected = -0.5 * (1.0 + 1.9 / 2000.0 - 2.0 * 1.06036 / 2000_f64.powf(4.0 / 3.0));
        assert!((e - expected).abs() < 1e-15);
        assert!((e + 0.500_432_92).abs() < 1e-8);
    }

    #[test]
    fn thermodynamic_concurrence() {
        assert!((dicke_concurrence_limit(1.0, 0.1).unwrap() - 0.9).abs() < 1e-12);
        assert_eq!(dicke_concurrence_limit(0.0, 0.1).unwrap(), 0.0);
        assert!(dicke_concurrence_limit(alpha_validity_bound(0.1), 0.1).is_err());
        assert!(dicke_concurrence_limit(6.0, 0.1).is_err());
        let c = dicke_concurrence(2.0, 0.1, SystemSize::Thermodynamic).unwrap();
        assert!((c - (1.0 - 0.05 - 0.75_f64.sqrt())).abs() < 1e-14);
        assert!(dicke_concurrence_critical(10, 0.99, &consts()) == 0.0);
    }

    #[test]
    fn tangle_limits() {
        assert_eq!(tangle_thermodynamic(0.0, 0.1), 0.0);
        assert!((1.0 - tangle_thermodynamic(1.0 - 1e-12, 0.1)) < 1e-2);
        assert!((1.0 - tangle_thermodynamic(1.0 + 1e-12, 0.1)) < 1e-2);
        let expected = 1.0 - 0.5 * (1.0 + 0.1 / 3.0_f64.sqrt()).powf(-0.5);
        assert!((tangle_thermodynamic(2.0, 0.1) - expected).abs() < 1e-15);
        assert!((expected - 0.51384).abs() < 1e-5);
        assert!((tangle_thermodynamic(0.5, 0.1) - 0.033_584_397).abs() < 1e-9);
    }

    #[test]
    fn tangle_vanishes_without_coupling() {
        let p = DickeParams::from_reduced(20, 1.0, 0.0, 0.1).unwrap();
        let (_, wf) = solve(&p.uniaxial()).unwrap();
        assert!(qubit_field_tangle(&wf, &p).unwrap().abs() < 1e-14);
    }

    #[test]
    fn critical_tangle_validity_flag() {
        let t = tangle_critical_scaling(100, 0.1, &consts());
        assert!(!t.in_validity_range);
        let t = tangle_critical_scaling(4_000_000, 1.0, &consts());
        assert!(t.in_validity_range);
        let expected = 1.0 - 0.46 * std::f64::consts::PI.sqrt() * 1e-6_f64.powf(1.0 / 6.0);
        assert!((t.value - expected).abs() < 1e-15);
    }
}
