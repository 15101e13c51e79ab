use approx::assert_relative_eq;
use nalgebra::{Matrix4, SymmetricEigen};

use uniaxial_core::acceptance::entanglement_vs_dense;
use uniaxial_core::continuum::{gaussian_wavefunction, QuarticConstants};
use uniaxial_core::dense::{partial_trace, purity, qubit_state};
use uniaxial_core::dicke::{
    dicke_critical_energy, dicke_moments, exact_dicke_oracle, qubit_field_tangle, DickeParams,
};
use uniaxial_core::entanglement::{
    block_rdm, linear_entropy, one_tangle, rescaled_concurrence, two_qubit_rdm,
};
use uniaxial_core::observables::spin_moments;
use uniaxial_core::spin::{build_hamiltonian, dense_oracle_ground, solve, UniaxialParams};
use uniaxial_core::Error;

fn ground(n: usize, alpha: f64) -> uniaxial_core::Wavefunction {
    solve(&UniaxialParams::symmetric(n, 1.0, alpha).unwrap()).unwrap().1
}

#[test]
fn tridiagonal_matches_dense_on_grid() {
    for n in (1..=64).step_by(3).chain([64]) {
        for alpha in [0.0, 0.3, 0.5, 1.0, 1.3, 2.0] {
            for eps in [0.0, 0.1] {
                let p = UniaxialParams::new(n, 1.0, alpha, eps).unwrap();
                let (e1, w1) = solve(&p).unwrap();
                let (e2, w2) = dense_oracle_ground(&p).unwrap();
                assert!((e1 - e2).abs() <= 1e-9, "N={n} alpha={alpha} eps={eps}");
                for (a, b) in w1.amps.iter().zip(&w2.amps) {
                    assert!((a - b).abs() <= 1e-8, "N={n} alpha={alpha} eps={eps}");
                }
            }
        }
    }
}

#[test]
fn dense_oracle_regression_value() {
    let (e, wf) = dense_oracle_ground(&UniaxialParams::symmetric(8, 1.0, 1.0).unwrap()).unwrap();
    assert_relative_eq!(e, -4.339_421_392_448, epsilon = 1e-9);
    assert!(wf.amps.iter().all(|a| *a > 0.0));
    assert!(dense_oracle_ground(&UniaxialParams::symmetric(65, 1.0, 1.0).unwrap()).is_err());
}

#[test]
fn two_spin_closed_form() {
    let (e, _) = solve(&UniaxialParams::symmetric(2, 1.0, 1.0).unwrap()).unwrap();
    assert_relative_eq!(e, -0.25 - (1.0f64 / 16.0 + 1.0).sqrt(), epsilon = 1e-12);
    let t = build_hamiltonian(&UniaxialParams::symmetric(2, 1.0, 1.0).unwrap()).unwrap();
    assert_eq!(t.diag, vec![-0.5, 0.0, -0.5]);
}

#[test]
fn entanglement_matches_partial_traces() {
    for n in 2..=12 {
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let dev = entanglement_vs_dense(n, alpha).unwrap();
            assert!(dev <= 1e-9, "N={n} alpha={alpha}: {dev:e}");
        }
    }
}

#[test]
fn block_of_four_linear_entropy() {
    let wf = ground(8, 1.0);
    let state = qubit_state(&wf).unwrap();
    let rho = block_rdm(&wf, 4).unwrap();
    let dense = partial_trace(&state, 8, 4);
    let expected = 16.0 / 15.0 * (1.0 - purity(&dense));
    assert_relative_eq!(linear_entropy(&rho), expected, epsilon = 1e-9);
}

#[test]
fn one_tangle_matches_single_qubit_block() {
    for (n, alpha) in [(5, 0.4), (12, 1.0), (40, 2.0), (7, 0.0)] {
        let wf = ground(n, alpha);
        let rho = block_rdm(&wf, 1).unwrap();
        assert_relative_eq!(one_tangle(&wf).unwrap(), linear_entropy(&rho), epsilon = 1e-10);
    }
}

/// Wootters concurrence from the spin-flip spectrum of a real two-qubit state.
fn wootters(rho: &Matrix4<f64>) -> f64 {
    let flip = Matrix4::new(
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0,
    );
    let tilde = flip * rho * flip;
    let eig = SymmetricEigen::new(*rho);
    let root = eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let m = root * tilde * root;
    let mut l: Vec<f64> = SymmetricEigen::new((m + m.transpose()) * 0.5)
        .eigenvalues
        .iter()
        .map(|&x| if x > 1e-13 { x.sqrt() } else { 0.0 })
        .collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

#[test]
fn closed_form_concurrence_matches_wootters() {
    for n in [2usize, 3, 4, 6, 9, 16, 30] {
        for alpha in [0.0, 0.3, 0.75, 1.0, 1.5, 3.0] {
            let wf = ground(n, alpha);
            let (c, _) = rescaled_concurrence(&wf).unwrap();
            let rho = two_qubit_rdm(&wf).unwrap().product_basis();
            assert!((c - wootters(&rho)).abs() < 1e-9, "N={n} alpha={alpha}");
        }
    }
}

#[test]
fn variational_bound_with_gaussian() {
    for (n, alpha) in [(50, 0.3), (200, 0.9), (200, 1.3), (1000, 2.5)] {
        let p = UniaxialParams::symmetric(n, 1.0, alpha).unwrap();
        let t = build_hamiltonian(&p).unwrap();
        let (e, _) = solve(&p).unwrap();
        let trial = gaussian_wavefunction(&p).unwrap();
        assert!(e <= t.expectation(&trial.amps) + 1e-12);
    }
}

#[test]
fn dicke_oracle_decoupled_limit() {
    for n in [1usize, 2, 5] {
        let p = DickeParams::new(n, 1.0, 10.0, 0.0).unwrap();
        let r = exact_dicke_oracle(&p, None).unwrap();
        assert_relative_eq!(r.energy, -(n as f64) / 2.0, epsilon = 1e-10);
        assert!(r.tangle.abs() < 1e-10);
        assert_relative_eq!(r.moments.sx, n as f64, epsilon = 1e-9);
    }
}

#[test]
fn dicke_oracle_tangle_vanishes_without_coupling() {
    for d in [0.05, 0.3] {
        let p = DickeParams::from_reduced(2, 1.0, 0.0, d).unwrap();
        assert!(exact_dicke_oracle(&p, None).unwrap().tangle.abs() < 1e-10);
    }
}

#[test]
fn adiabatic_moments_near_oracle() {
    let p = DickeParams::from_reduced(2, 1.0, 0.5, 0.05).unwrap();
    let (_, wf) = solve(&p.uniaxial()).unwrap();
    let adiabatic = dicke_moments(&wf, &p).unwrap();
    let exact = exact_dicke_oracle(&p, None).unwrap().moments;
    let d = p.d_ratio();
    for (a, b, scale) in [
        (adiabatic.sx, exact.sx, 2.0),
        (adiabatic.sz2, exact.sz2, 4.0),
        (adiabatic.sx2, exact.sx2, 4.0),
        (adiabatic.sy2, exact.sy2, 4.0),
    ] {
        assert!((a - b).abs() <= d * scale, "{a} vs {b}");
    }
}

#[test]
fn adiabatic_energy_error_shrinks_with_d() {
    let mut last = f64::INFINITY;
    for d in [0.2, 0.1, 0.05, 0.025] {
        let p = DickeParams::from_reduced(2, 1.0, 0.5, d).unwrap();
        let (e, _) = solve(&p.uniaxial()).unwrap();
        let err = (e - exact_dicke_oracle(&p, None).unwrap().energy).abs();
        assert!(err < last, "D={d}");
        last = err;
    }
}

#[test]
fn critical_energy_error_shrinks_with_d() {
    let c = QuarticConstants::get();
    let mut last = f64::INFINITY;
    for d in [0.1, 0.05, 0.025] {
        let p = DickeParams::from_reduced(2, 1.0, 1.0, d).unwrap();
        let exact = exact_dicke_oracle(&p, None).unwrap().energy / 2.0;
        let err = ((dicke_critical_energy(2, 1.0, d, c) - exact) / exact).abs();
        assert!(err < last, "D={d}: {err}");
        last = err;
    }
}

#[test]
fn adiabatic_tangle_tracks_oracle() {
    for alpha in [0.5, 1.0, 2.0] {
        let mut last = f64::INFINITY;
        for d in [0.1, 0.05, 0.025] {
            let p = DickeParams::from_reduced(4, 1.0, alpha, d).unwrap();
            let (_, wf) = solve(&p.uniaxial()).unwrap();
            let tau = qubit_field_tangle(&wf, &p).unwrap();
            let exact = exact_dicke_oracle(&p, None).unwrap().tangle;
            let rel = (tau - exact).abs() / exact;
            assert!(rel < last, "alpha={alpha} D={d}: {rel}");
            last = rel;
        }
    }
}

#[test]
fn vanishing_d_reduces_to_uniaxial() {
    let d = 1e-8;
    for (n, alpha) in [(10, 0.5), (50, 1.0), (30, 2.0)] {
        let p = DickeParams::from_reduced(n, 1.0, alpha, d).unwrap();
        let (_, wf) = solve(&p.uniaxial()).unwrap();
        let a = dicke_moments(&wf, &p).unwrap();
        let b = spin_moments(&wf).unwrap();
        for (x, y) in [(a.sx, b.sx), (a.sx2, b.sx2), (a.sy2, b.sy2), (a.sz2, b.sz2)] {
            assert_relative_eq!(x, y, max_relative = 1e-6);
        }
        assert!(qubit_field_tangle(&wf, &p).unwrap() < 1e-6);
    }
    let c = QuarticConstants::get();
    assert_relative_eq!(
        dicke_critical_energy(500, 1.0, d, c),
        uniaxial_core::continuum::critical_energy(500, 1.0, c),
        max_relative = 1e-6
    );
}

#[test]
fn oracle_rejects_oversized_space() {
    let p = DickeParams::from_reduced(500, 1.0, 1.0, 0.1).unwrap();
    match exact_dicke_oracle(&p, Some(500)) {
        Err(Error::DimensionCap { dim, cap }) => assert!(dim > cap),
        other => panic!("unexpected {other:?}"),
    }
}
