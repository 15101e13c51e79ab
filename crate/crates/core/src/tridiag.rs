//! Lowest eigenpair of a real symmetric tridiagonal matrix.
//!
//! The eigenvalue is bracketed by bisection on Sturm sequence counts and the
//! eigenvector is obtained by inverse iteration with a pivoted LU
//! factorization of the shifted matrix. Matrices that are symmetric under
//! index reversal (persymmetric) are folded into their even and odd parity
//! blocks first, so that an exponentially small splitting between the two
//! lowest levels never mixes the parity sectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for [`lowest_eigenpair`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative residual bound: `||T x - e x||_inf <= tolerance * ||T||_inf`.
    pub tolerance: f64,
    /// Iteration cap for one inverse-iteration sweep.
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Infinity norm of `T x - value x`.
    pub residual: f64,
}

/// Infinity norm of the symmetric tridiagonal matrix.
pub fn inf_norm(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { off[i].abs() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0, f64::max)
}

/// `out = T x`.
pub fn matvec(diag: &[f64], off: &[f64], x: &[f64], out: &mut [f64]) {
    let n = diag.len();
    for i in 0..n {
        let mut acc = diag[i] * x[i];
        if i > 0 {
            acc += off[i - 1] * x[i - 1];
        }
        if i + 1 < n {
            acc += off[i] * x[i + 1];
        }
        out[i] = acc;
    }
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

fn pivot_floor(off: &[f64]) -> f64 {
    let emax = off.iter().fold(0.0_f64, |m, e| m.max(e * e));
    f64::MIN_POSITIVE * emax.max(1.0)
}

/// Number of eigenvalues strictly below `x` (negative pivots of the LDLᵀ
/// factorization of `T - x I`).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let pivmin = pivot_floor(off);
    let mut count = 0;
    let mut q = 0.0;
    for i in 0..diag.len() {
        q = if i == 0 {
            diag[0] - x
        } else {
            diag[i] - x - off[i - 1] * off[i - 1] / q
        };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue, bisected to working precision.
pub fn lowest_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    assert!(!diag.is_empty(), "empty matrix");
    assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
    let (mut lo, mut hi) = gershgorin(diag, off);
    let pivmin = pivot_floor(off);
    loop {
        let width = hi - lo;
        let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + pivmin;
        if width <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// LU factorization with partial pivoting of a general tridiagonal matrix,
/// in the layout of LAPACK `dgttrf`.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    /// Factor `T - shift I`; exactly singular pivots are replaced by `floor`.
    fn shifted(diag: &[f64], off: &[f64], shift: f64, floor: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = floor;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = floor;
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.dl[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                acc -= self.du2[i] * b[i + 2];
            }
            b[i] = acc / self.d[i];
        }
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn residual(diag: &[f64], off: &[f64], value: f64, x: &[f64]) -> f64 {
    let mut tx = vec![0.0; x.len()];
    matvec(diag, off, x, &mut tx);
    tx.iter()
        .zip(x)
        .map(|(t, v)| (t - value * v).abs())
        .fold(0.0, f64::max)
}

/// Flip the global sign so that the entry of largest magnitude is positive.
pub fn fix_sign(v: &mut [f64]) {
    let mut best = 0.0_f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Inverse iteration for the eigenvector belonging to `value`, with no
/// parity folding.
fn inverse_iteration(diag: &[f64], off: &[f64], value: f64, cfg: &SolverConfig) -> Result<Eigenpair> {
    let n = diag.len();
    let norm = inf_norm(diag, off);
    let bound = cfg.tolerance * norm;
    let floor = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let lu = TridiagLu::shifted(diag, off, value, floor);

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut res = residual(diag, off, value, &x);
    for it in 0..cfg.max_iterations {
        if res <= bound {
            fix_sign(&mut x);
            return Ok(Eigenpair {
                value,
                vector: x,
                residual: res,
            });
        }
        lu.solve(&mut x);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SolverFailure {
                residual: f64::INFINITY,
                iterations: it + 1,
            });
        }
        normalize(&mut x);
        res = residual(diag, off, value, &x);
    }
    if res <= bound {
        fix_sign(&mut x);
        return Ok(Eigenpair {
            value,
            vector: x,
            residual: res,
        });
    }
    Err(Error::SolverFailure {
        residual: res,
        iterations: cfg.max_iterations,
    })
}

/// Whether `T` equals its own index reversal up to a few ulps of `||T||`.
pub fn is_persymmetric(diag: &[f64], off: &[f64]) -> bool {
    let n = diag.len();
    let tol = 8.0 * f64::EPSILON * inf_norm(diag, off);
    (0..n / 2).all(|k| (diag[k] - diag[n - 1 - k]).abs() <= tol)
        && (0..off.len() / 2).all(|k| (off[k] - off[off.len() - 1 - k]).abs() <= tol)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Parity {
    Even,
    Odd,
}

/// Restriction of a persymmetric matrix to one parity sector, in the basis
/// `(e_k ± e_{n-1-k}) / √2` (plus the central `e_c` for even parity and odd
/// `n`).
fn fold(diag: &[f64], off: &[f64], parity: Parity) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let sign = if parity == Parity::Even { 1.0 } else { -1.0 };
    if n % 2 == 0 {
        let h = n / 2;
        let mut fd = diag[..h].to_vec();
        fd[h - 1] += sign * off[h - 1];
        (fd, off[..h - 1].to_vec())
    } else {
        let c = (n - 1) / 2;
        match parity {
            Parity::Even => {
                let fd = diag[..=c].to_vec();
                let mut fo = off[..c].to_vec();
                fo[c - 1] *= std::f64::consts::SQRT_2;
                (fd, fo)
            }
            Parity::Odd => (diag[..c].to_vec(), off[..c - 1].to_vec()),
        }
    }
}

fn unfold(folded: &[f64], n: usize, parity: Parity) -> Vec<f64> {
    let sign = if parity == Parity::Even { 1.0 } else { -1.0 };
    let mut v = vec![0.0; n];
    let pairs = n / 2;
    for k in 0..pairs {
        let a = folded[k] * std::f64::consts::FRAC_1_SQRT_2;
        v[k] = a;
        v[n - 1 - k] = sign * a;
    }
    if n % 2 == 1 && parity == Parity::Even {
        v[pairs] = folded[pairs];
    }
    v
}

/// Lowest eigenpair of the symmetric tridiagonal matrix with main diagonal
/// `diag` and off-diagonal `off`.
///
/// The eigenvector is unit-normalized with its largest-magnitude entry
/// positive. For persymmetric input the returned vector is an exact parity
/// eigenvector; when both sectors share the lowest eigenvalue to working
/// precision the even one is returned.
pub fn lowest_eigenpair(diag: &[f64], off: &[f64], cfg: &SolverConfig) -> Result<Eigenpair> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::invalid(format!(
            "tridiagonal shape mismatch: diag {}, off {}",
            n,
            off.len()
        )));
    }
    if n == 1 {
        return Ok(Eigenpair {
            value: diag[0],
            vector: vec![1.0],
            residual: 0.0,
        });
    }
    if n >= 3 && is_persymmetric(diag, off) {
        let norm = inf_norm(diag, off);
        let (ed, eo) = fold(diag, off, Parity::Even);
        let (od, oo) = fold(diag, off, Parity::Odd);
        let even = lowest_eigenvalue(&ed, &eo);
        let odd = lowest_eigenvalue(&od, &oo);
        let (parity, fd, fo, value) = if even <= odd + 4.0 * f64::EPSILON * norm {
            (Parity::Even, ed, eo, even)
        } else {
            (Parity::Odd, od, oo, odd)
        };
        let folded = inverse_iteration(&fd, &fo, value, cfg)?;
        let mut vector = unfold(&folded.vector, n, parity);
        fix_sign(&mut vector);
        let res = residual(diag, off, value, &vector);
        if res > cfg.tolerance * norm {
            return Err(Error::SolverFailure {
                residual: res,
                iterations: cfg.max_iterations,
            });
        }
        return Ok(Eigenpair {
            value,
            vector,
            residual: res,
        });
    }
    let value = lowest_eigenvalue(diag, off);
    inverse_iteration(diag, off, value, cfg)
}
