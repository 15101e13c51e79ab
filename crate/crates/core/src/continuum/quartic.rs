//! Ground state of `−φ″ + (ζ n² + n⁴) φ = e₀(ζ) φ` on the real line.
//!
//! The operator is discretized with second-order central differences on
//! `[−L, L]` with Dirichlet ends. The eigenvalue and the derived integrals are
//! computed on three grids (`h`, `h/2`, `h/4`) and Richardson-extrapolated;
//! the two extrapolants must agree, otherwise the grid is reported as too
//! coarse.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::{self, SolverConfig};

/// Relative agreement required between successive Richardson extrapolants.
const CONVERGENCE_TOL: f64 = 1e-6;
/// Largest tolerated amplitude next to the Dirichlet boundary.
const BOUNDARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    /// Coarsest step; the solver also uses `step/2` and `step/4`.
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_width: 10.0,
            step: 5e-3,
        }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<usize> {
        if !(self.half_width > 0.0) || !(self.step > 0.0) {
            return Err(Error::invalid("grid half-width and step must be positive"));
        }
        let intervals = (2.0 * self.half_width / self.step).round();
        if intervals < 8.0 || intervals > 1e8 {
            return Err(Error::invalid(format!(
                "grid with {intervals} intervals is out of range"
            )));
        }
        Ok(intervals as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticSolution {
    pub zeta: f64,
    /// Richardson-extrapolated lowest eigenvalue.
    pub e0: f64,
    /// `(n, φ_n)` on the finest grid, endpoints included, `∫φ² dn = 1`.
    pub grid: Vec<(f64, f64)>,
    pub grid_half_width: f64,
    pub grid_step: f64,
    /// Extrapolated `∫ n² φ² dn`, equal to `de₀/dζ`.
    pub n2_mean: f64,
    /// Extrapolated `∫ φ⁴ dn`.
    pub phi4_integral: f64,
}

impl QuarticSolution {
    /// Trapezoidal `∫ f(n, φ_n) dn` over the stored grid.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let h = self.grid_step;
        let g = &self.grid;
        let inner: f64 = g[1..g.len() - 1].iter().map(|&(n, p)| f(n, p)).sum();
        let (n0, p0) = g[0];
        let (n1, p1) = g[g.len() - 1];
        h * (inner + 0.5 * (f(n0, p0) + f(n1, p1)))
    }

    /// Profile interpolated linearly between grid samples (zero outside).
    pub fn profile(&self, n: f64) -> f64 {
        let l = self.grid_half_width;
        if n <= -l || n >= l {
            return 0.0;
        }
        let x = (n + l) / self.grid_step;
        let i = (x.floor() as usize).min(self.grid.len() - 2);
        let t = x - i as f64;
        (1.0 - t) * self.grid[i].1 + t * self.grid[i + 1].1
    }
}

struct Level {
    e: f64,
    n2: f64,
    phi4: f64,
    nodes: Vec<f64>,
    phi: Vec<f64>,
    h: f64,
}

fn solve_level(zeta: f64, half_width: f64, intervals: usize) -> Result<Level> {
    let h = 2.0 * half_width / intervals as f64;
    let inv_h2 = 1.0 / (h * h);
    let nodes: Vec<f64> = (1..intervals).map(|i| -half_width + i as f64 * h).collect();
    let diag: Vec<f64> = nodes
        .iter()
        .map(|&n| 2.0 * inv_h2 + zeta * n * n + n.powi(4))
        .collect();
    let off = vec![-inv_h2; nodes.len() - 1];
    let ep = tridiag::lowest_eigenpair(&diag, &off, &SolverConfig::default())?;
    // Unit eigenvector -> unit L² norm with trapezoid weights (ends are zero).
    let scale = 1.0 / h.sqrt();
    let phi: Vec<f64> = ep.vector.iter().map(|v| v * scale).collect();
    let n2 = h * nodes.iter().zip(&phi).map(|(n, p)| n * n * p * p).sum::<f64>();
    let phi4 = h * phi.iter().map(|p| p.powi(4)).sum::<f64>();
    Ok(Level {
        e: ep.value,
        n2,
        phi4,
        nodes,
        phi,
        h,
    })
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Lowest eigenpair of the scaled critical equation at parameter `zeta`.
pub fn quartic_ground(zeta: f64, grid: &GridSpec) -> Result<QuarticSolution> {
    if !zeta.is_finite() {
        return Err(Error::invalid("zeta must be finite"));
    }
    let intervals = grid.validate()?;
    let l1 = solve_level(zeta, grid.half_width, intervals)?;
    let l2 = solve_level(zeta, grid.half_width, 2 * intervals)?;
    let l3 = solve_level(zeta, grid.half_width, 4 * intervals)?;

    let r_coarse = richardson(l1.e, l2.e);
    let r_fine = richardson(l2.e, l3.e);
    let tol = CONVERGENCE_TOL * r_fine.abs().max(1.0);
    if (r_coarse - r_fine).abs() > tol {
        return Err(Error::GridTooSmall(format!(
            "e0 not converged under refinement: {r_coarse} vs {r_fine} (step {})",
            grid.step
        )));
    }
    let edge = l3.phi[0].abs().max(l3.phi[l3.phi.len() - 1].abs());
    if edge > BOUNDARY_TOL {
        return Err(Error::GridTooSmall(format!(
            "amplitude {edge:.3e} at the boundary of [-{0}, {0}]",
            grid.half_width
        )));
    }

    let mut samples = Vec::with_capacity(l3.nodes.len() + 2);
    samples.push((-grid.half_width, 0.0));
    samples.extend(l3.nodes.iter().copied().zip(l3.phi.iter().copied()));
    samples.push((grid.half_width, 0.0));

    Ok(QuarticSolution {
        zeta,
        e0: r_fine,
        grid: samples,
        grid_half_width: grid.half_width,
        grid_step: l3.h,
        n2_mean: richardson(l2.n2, l3.n2),
        phi4_integral: richardson(l2.phi4, l3.phi4),
    })
}

/// `(β₀, β₁)`: the quartic ground energy `e₀(0)` and the slope `e₀′(0)`,
/// the latter from `∫ n² φ₀² dn` (Hellmann–Feynman).
pub fn beta_coefficients(grid: &GridSpec) -> Result<(f64, f64)> {
    let s = quartic_ground(0.0, grid)?;
    Ok((s.e0, s.n2_mean))
}

/// `K = ¼ ∫ φ⁴ dn` with the critical profile normalized on the step-2 ladder
/// (`½ ∫ φ² dn = 1`), i.e. `∫ ψ⁴ dn` for the unit-normalized profile `ψ`.
pub fn k_constant(grid: &GridSpec) -> Result<f64> {
    Ok(quartic_ground(0.0, grid)?.phi4_integral)
}

/// The three critical constants, computed together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticConstants {
    pub beta0: f64,
    pub beta1: f64,
    pub k: f64,
}

impl QuarticConstants {
    pub fn compute(grid: &GridSpec) -> Result<Self> {
        let s = quartic_ground(0.0, grid)?;
        Ok(Self {
            beta0: s.e0,
            beta1: s.n2_mean,
            k: s.phi4_integral,
        })
    }

    /// Constants on the default grid, computed once per process.
    pub fn get() -> &'static QuarticConstants {
        static CONSTS: OnceLock<QuarticConstants> = OnceLock::new();
        CONSTS.get_or_init(|| {
            QuarticConstants::compute(&GridSpec::default()).expect("default quartic grid converges")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_quartic_constants() {
        let c = QuarticConstants::get();
        assert!((c.beta0 - 1.06036).abs() < 5e-4, "beta0 = {}", c.beta0);
        assert!((c.beta1 - 0.36203).abs() < 5e-4, "beta1 = {}", c.beta1);
        assert!((c.k - 0.46).abs() < 0.01, "K = {}", c.k);
    }

    #[test]
    fn stored_profile_is_normalized_even_and_vanishing() {
        let s = quartic_ground(0.0, &GridSpec::default()).unwrap();
        assert!((s.integrate(|_, p| p * p) - 1.0).abs() < 1e-8);
        let g = &s.grid;
        for i in 0..g.len() / 2 {
            assert!((g[i].1 - g[g.len() - 1 - i].1).abs() < 1e-10);
        }
        assert!(g[0].1.abs() <= 1e-8 && g[g.len() - 1].1.abs() <= 1e-8);
        assert!((s.profile(0.0) - g[g.len() / 2].1).abs() < 1e-12);
    }

    #[test]
    fn beta1_matches_finite_difference_slope() {
        let grid = GridSpec::default();
        let (_, beta1) = beta_coefficients(&grid).unwrap();
        let h = 1e-3;
        let plus = quartic_ground(h, &grid).unwrap().e0;
        let minus = quartic_ground(-h, &grid).unwrap().e0;
        assert!(((plus - minus) / (2.0 * h) - beta1).abs() < 1e-4);
    }

    #[test]
    fn zeta_one_regression() {
        // frozen from a Richardson-refined run at L = 10, h = 1e-3
        let e = quartic_ground(1.0, &GridSpec::default()).unwrap().e0;
        assert!((e - 1.392_351_643_6).abs() < 1e-6, "e0(1) = {e}");
    }

    #[test]
    fn eigenvalue_increases_with_zeta() {
        let grid = GridSpec::default();
        let mut prev = f64::NEG_INFINITY;
        for z in [-4.0, -2.0, -1.0, 0.0, 0.5, 1.0, 3.0] {
            let e = quartic_ground(z, &grid).unwrap().e0;
            assert!(e > prev, "e0({z}) = {e} not above {prev}");
            prev = e;
        }
    }

    #[test]
    fn harmonic_limit() {
        let grid = GridSpec {
            half_width: 2.0,
            step: 1e-3,
        };
        let s = quartic_ground(1e4, &grid).unwrap();
        assert!((s.e0 / 100.0 - 1.0).abs() < 0.01, "e0 = {}", s.e0);
    }

    #[test]
    fn k_is_stable_under_refinement() {
        let coarse = k_constant(&GridSpec::default()).unwrap();
        let fine = k_constant(&GridSpec {
            half_width: 10.0,
            step: 2.5e-3,
        })
        .unwrap();
        assert!((coarse - fine).abs() < 1e-4);
    }

    #[test]
    fn gaussian_profile_gives_a_different_k() {
        // Harmonic ground state exp(-n²/2)/π^{1/4}: ∫ψ⁴ = 1/√(2π).
        let gaussian = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((gaussian - QuarticConstants::get().k).abs() > 0.05);
    }

    #[test]
    fn tiny_box_is_rejected() {
        let grid = GridSpec {
            half_width: 1.0,
            step: 1e-2,
        };
        assert!(matches!(quartic_ground(0.0, &grid), Err(Error::GridTooSmall(_))));
        let bad = GridSpec {
            half_width: -1.0,
            step: 1e-2,
        };
        assert!(matches!(quartic_ground(0.0, &bad), Err(Error::InvalidParameter(_))));
    }
}
