//! Collective spin moments of the ground state, exact and asymptotic.
//!
//! All moments use the doubled operators `S_k = Σ_i σ_i^(k)`, so the
//! maximum-spin Casimir is `S² = N(N+2)`. [`SpinMoments`] always holds the raw
//! moments; the `*_per_*` accessors apply the usual normalizations.

use serde::{Deserialize, Serialize};

use crate::continuum::QuarticConstants;
use crate::error::{Error, Result};
use crate::spin::{ladder_m, lowering_coeff, raising_coeff, UniaxialParams, Wavefunction};

/// Normalization tolerance accepted by the exact moment sums.
pub const NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinMoments {
    pub n_spins: usize,
    pub sx: f64,
    pub sz: f64,
    pub sz2: f64,
    pub sx2: f64,
    pub sy2: f64,
}

impl SpinMoments {
    fn n(&self) -> f64 {
        self.n_spins as f64
    }

    pub fn sx_per_n(&self) -> f64 {
        self.sx / self.n()
    }

    pub fn sz_per_n(&self) -> f64 {
        self.sz / self.n()
    }

    pub fn sz2_per_n2(&self) -> f64 {
        self.sz2 / (self.n() * self.n())
    }

    pub fn sx2_per_n2(&self) -> f64 {
        self.sx2 / (self.n() * self.n())
    }

    pub fn sy2_per_n(&self) -> f64 {
        self.sy2 / self.n()
    }

    pub fn sy2_per_n2(&self) -> f64 {
        self.sy2 / (self.n() * self.n())
    }

    /// `⟨S²⟩ − N(N+2)`; zero in the maximum-spin sector.
    pub fn casimir_defect(&self) -> f64 {
        self.sx2 + self.sy2 + self.sz2 - self.n() * (self.n() + 2.0)
    }
}

/// Expectation values of the off-diagonal collective operators needed by the
/// two-qubit reduced state, in the doubled convention with `S₊ = Σ σ₊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LadderExpectations {
    /// `⟨S₊⟩`
    pub splus: f64,
    /// `⟨S₊²⟩`
    pub splus2: f64,
    /// `⟨S₊ S_z + S_z S₊⟩`
    pub splus_sz: f64,
}

pub(crate) fn ladder_expectations(wf: &Wavefunction) -> LadderExpectations {
    let n = wf.n_spins;
    let a = &wf.amps;
    let mut splus = 0.0;
    let mut splus2 = 0.0;
    let mut splus_sz = 0.0;
    for k in 0..n {
        let m = ladder_m(n, k);
        let c = raising_coeff(n, m) * a[k] * a[k + 1];
        splus += c;
        splus_sz += 2.0 * (m as f64 + 1.0) * c;
        if k + 2 <= n {
            splus2 += raising_coeff(n, m + 2) * raising_coeff(n, m) * a[k] * a[k + 2];
        }
    }
    LadderExpectations {
        splus,
        splus2,
        splus_sz,
    }
}

/// Exact moments of a normalized maximum-spin state.
///
/// `⟨S_x²⟩` and `⟨S_y²⟩` are evaluated as the squared norms of `S_x|φ⟩` and
/// `S_y|φ⟩`, which avoids the cancellation in `½[N(N+2) − ⟨S_z²⟩] ± …` when
/// `⟨S_y²⟩ ≪ N²`.
pub fn spin_moments(wf: &Wavefunction) -> Result<SpinMoments> {
    wf.check_normalized(NORM_TOL)?;
    Ok(raw_moments(wf.n_spins, &wf.amps))
}

/// Moment sums without the normalization check; bilinear in `a`, so they
/// may be accumulated over unnormalized components.
pub(crate) fn raw_moments(n: usize, a: &[f64]) -> SpinMoments {
    let mut sx = 0.0;
    let mut sz = 0.0;
    let mut sz2 = 0.0;
    let mut sx2 = 0.0;
    let mut sy2 = 0.0;
    for k in 0..=n {
        let m = ladder_m(n, k);
        let mf = m as f64;
        let p = a[k] * a[k];
        sz += mf * p;
        sz2 += mf * mf * p;
        if k < n {
            sx += 2.0 * raising_coeff(n, m) * a[k] * a[k + 1];
        }
        // (J₊φ)_m = a⁺_{m−2} φ_{m−2},  (J₋φ)_m = a⁻_{m+2} φ_{m+2}
        let up = if k > 0 { raising_coeff(n, m - 2) * a[k - 1] } else { 0.0 };
        let down = if k < n { lowering_coeff(n, m + 2) * a[k + 1] } else { 0.0 };
        sx2 += (up + down) * (up + down);
        sy2 += (up - down) * (up - down);
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

fn require_regular(p: &UniaxialParams) -> Result<()> {
    p.validate()?;
    if p.epsilon != 0.0 {
        return Err(Error::invalid("analytic moments need epsilon = 0"));
    }
    if p.alpha == 1.0 {
        return Err(Error::invalid(
            "analytic moments diverge at alpha = 1; use critical_moments",
        ));
    }
    Ok(())
}

/// Continuum `1/N` expansions of the moments away from the transition.
///
/// `⟨S_y²⟩` carries only its leading `O(N)` term.
pub fn analytic_moments(p: &UniaxialParams) -> Result<SpinMoments> {
    require_regular(p)?;
    let a = p.alpha;
    let n = p.n_spins as f64;
    let (sx_n, sz2_n2, sx2_n2, sy2_n) = if a < 1.0 {
        let r = (1.0 - a).sqrt();
        (
            1.0 + (1.0 + (a - 2.0) / (2.0 * r)) / n,
            1.0 / (n * r),
            1.0 + 2.0 / n * (1.0 - 1.0 / r),
            r,
        )
    } else {
        let r = (a * a - 1.0).sqrt();
        (
            1.0 / a + 1.0 / (n * r),
            1.0 - 1.0 / (a * a) + 2.0 / n * (1.0 - a / r),
            1.0 / (a * a) + (a * a + 1.0) / (n * a * r),
            (1.0 - 1.0 / (a * a)).sqrt(),
        )
    };
    Ok(SpinMoments {
        n_spins: p.n_spins,
        sx: n * sx_n,
        sz: 0.0,
        sz2: n * n * sz2_n2,
        sx2: n * n * sx2_n2,
        sy2: n * sy2_n,
    })
}

/// Leading finite-size corrections at `α = 1`.
pub fn critical_moments(n_spins: usize, consts: &QuarticConstants) -> SpinMoments {
    let n = n_spins as f64;
    let t = (2.0 * n).powf(-2.0 / 3.0);
    SpinMoments {
        n_spins,
        sx: n * (1.0 - 2.0 * consts.beta1 * t),
        sz: 0.0,
        sz2: n * n * 4.0 * consts.beta1 * t,
        sx2: n * n * (1.0 - 4.0 * consts.beta1 * t),
        sy2: n * n * 8.0 * consts.beta0 / 3.0 * t * t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::solve;

    fn binomial_state(n: usize) -> Wavefunction {
        // x-polarized coherent state: φ_m ∝ √C(N, (N+m)/2).
        let amps = (0..=n)
            .map(|k| {
                let lc = statrs::function::factorial::ln_binomial(n as u64, k as u64);
                (0.5 * lc).exp()
            })
            .collect();
        Wavefunction::from_amplitudes(n, amps).unwrap()
    }

    #[test]
    fn polarized_state_moments() {
        for n in [1usize, 2, 7, 40] {
            let s = spin_moments(&binomial_state(n)).unwrap();
            let nf = n as f64;
            assert!((s.sx - nf).abs() < 1e-10 * nf);
            assert!((s.sz2 - nf).abs() < 1e-10 * nf);
            assert!((s.sy2 - nf).abs() < 1e-10 * nf);
            assert!((s.sx2 - nf * nf).abs() < 1e-10 * nf * nf);
            assert!(s.sz.abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_zero_exact_state_is_polarized() {
        let (_, wf) = solve(&UniaxialParams::symmetric(30, 1.0, 0.0).unwrap()).unwrap();
        let s = spin_moments(&wf).unwrap();
        assert!((s.sx - 30.0).abs() < 1e-9);
        assert!((s.sz2 - 30.0).abs() < 1e-9);
        assert!((s.sy2 - 30.0).abs() < 1e-9);
    }

    #[test]
    fn casimir_and_bounds() {
        for (n, a, eps) in [(9, 0.4, 0.0), (16, 1.0, 0.0), (33, 2.5, 0.0), (12, 1.3, 0.1)] {
            let (_, wf) = solve(&UniaxialParams::new(n, 1.0, a, eps).unwrap()).unwrap();
            let s = spin_moments(&wf).unwrap();
            let nf = n as f64;
            assert!(s.casimir_defect().abs() < 1e-9 * nf * nf);
            assert!(s.sz2 >= 0.0 && s.sz2 <= nf * nf + 1e-9);
            assert!(s.sx.abs() <= nf + 1e-9 && s.sy2 >= 0.0);
            if eps == 0.0 {
                assert!(s.sz.abs() < 1e-10 * nf);
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let wf = Wavefunction {
            n_spins: 1,
            amps: vec![1.0, 1.0],
        };
        assert!(matches!(spin_moments(&wf), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn fig1_parameters_match_expansion() {
        let p = UniaxialParams::symmetric(200, 1.0, 0.3).unwrap();
        let (_, wf) = solve(&p).unwrap();
        let exact = spin_moments(&wf).unwrap().sx_per_n();
        let expected = 1.0 + (1.0 + (0.3 - 2.0) / (2.0 * 0.7_f64.sqrt())) / 200.0;
        assert!((exact - expected).abs() < 1e-4, "{exact} vs {expected}");
        let a = analytic_moments(&p).unwrap().sx_per_n();
        assert!((a - expected).abs() < 1e-15);
    }

    #[test]
    fn analytic_examples() {
        let m = analytic_moments(&UniaxialParams::symmetric(1000, 1.0, 0.5).unwrap()).unwrap();
        assert!((m.sz2_per_n2() - 1.41421e-3).abs() < 1e-8);
        let m = analytic_moments(&UniaxialParams::symmetric(1000, 1.0, 2.0).unwrap()).unwrap();
        assert!((m.sx_per_n() - 0.500_577_35).abs() < 1e-8);
        assert!((m.sy2_per_n() - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(analytic_moments(&UniaxialParams::symmetric(10, 1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn critical_examples() {
        let c = QuarticConstants {
            beta0: 1.06036,
            beta1: 0.36203,
            k: 0.46,
        };
        let m = critical_moments(1000, &c);
        assert!((m.sz2_per_n2() - 4.0 * 0.36203 * 2000_f64.powf(-2.0 / 3.0)).abs() < 1e-15);
        assert!((m.sz2_per_n2() - 9.1235e-3).abs() < 1e-6);
        let big = critical_moments(16000, &c);
        let slope = (big.sz2_per_n2() / m.sz2_per_n2()).ln() / 16_f64.ln();
        assert!((slope + 2.0 / 3.0).abs() < 1e-12);
    }
}
