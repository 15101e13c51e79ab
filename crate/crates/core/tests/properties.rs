use proptest::prelude::*;

use uniaxial_core::dicke::{qubit_field_tangle, tangle_thermodynamic, DickeParams};
use uniaxial_core::entanglement::{
    block_rdm, block_weights, linear_entropy, one_tangle, rescaled_concurrence, two_qubit_rdm,
};
use uniaxial_core::observables::spin_moments;
use uniaxial_core::spin::{build_hamiltonian, ladder_m, solve, UniaxialParams, Wavefunction};

fn params() -> impl Strategy<Value = UniaxialParams> {
    (1usize..160, 0.0f64..3.0, prop_oneof![Just(0.0), -0.3f64..0.3])
        .prop_map(|(n, a, e)| UniaxialParams::new(n, 1.0, a, e).unwrap())
}

fn random_state() -> impl Strategy<Value = Wavefunction> {
    (2usize..40).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n + 1).prop_filter_map("zero vector", move |v| {
            if v.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
                Wavefunction::from_amplitudes(n, v).ok()
            } else {
                None
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ground_state_invariants(p in params()) {
        let t = build_hamiltonian(&p).unwrap();
        let (e, wf) = solve(&p).unwrap();
        let n = p.n_spins as f64;
        prop_assert!((wf.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(wf.amps.iter().all(|a| *a >= 0.0));
        let resid = t.apply(&wf.amps).iter().zip(&wf.amps).map(|(x, y)| (x - e * y).abs()).fold(0.0, f64::max);
        prop_assert!(resid <= 1e-10 * t.inf_norm().max(1.0));
        let s = spin_moments(&wf).unwrap();
        prop_assert!(s.casimir_defect().abs() < 1e-9 * n * n);
        if p.epsilon == 0.0 {
            for k in 0..=p.n_spins {
                prop_assert!((wf.amps[k] - wf.amps[p.n_spins - k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn energy_decreases_with_coupling(n in 1usize..120, a in 0.0f64..2.5, da in 0.001f64..0.5) {
        let (e1, _) = solve(&UniaxialParams::symmetric(n, 1.0, a).unwrap()).unwrap();
        let (e2, _) = solve(&UniaxialParams::symmetric(n, 1.0, a + da).unwrap()).unwrap();
        prop_assert!(e2 <= e1 + 1e-12);
    }

    #[test]
    fn variational_bound(p in params(), trial in prop::collection::vec(0.01f64..1.0, 160)) {
        let t = build_hamiltonian(&p).unwrap();
        let (e, _) = solve(&p).unwrap();
        let wf = Wavefunction::from_amplitudes(p.n_spins, trial[..=p.n_spins].to_vec()).unwrap();
        prop_assert!(e <= t.expectation(&wf.amps) + 1e-10);
    }

    #[test]
    fn block_weights_are_hypergeometric(n in 2usize..400, frac in 0.0f64..1.0, kf in 0.0f64..1.0) {
        let l = 1 + ((n - 2) as f64 * frac) as usize;
        let k = (n as f64 * kf) as usize;
        let w = block_weights(n, l, ladder_m(n, k)).unwrap();
        prop_assert_eq!(w.len(), l + 1);
        prop_assert!(w.iter().all(|x| *x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_states_are_density_matrices(wf in random_state(), frac in 0.0f64..1.0) {
        let n = wf.n_spins;
        let l = 1 + ((n - 2) as f64 * frac) as usize;
        let rho = block_rdm(&wf, l).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
        let tau = linear_entropy(&rho);
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&tau));
        let two = two_qubit_rdm(&wf).unwrap();
        prop_assert!((two.trace() - 1.0).abs() < 1e-10);
        prop_assert!(two.matrix().symmetric_eigenvalues().min() > -1e-10);
        let t1 = one_tangle(&wf).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&t1));
        prop_assert!((t1 - linear_entropy(&block_rdm(&wf, 1).unwrap())).abs() < 1e-10);
    }

    #[test]
    fn concurrence_is_clamped(p in params()) {
        prop_assume!(p.n_spins >= 2);
        let (_, wf) = solve(&p).unwrap();
        let (c, cr) = rescaled_concurrence(&wf).unwrap();
        prop_assert!(c >= 0.0 && cr <= 1.0 + 1e-12);
        prop_assert!((cr - (p.n_spins as f64 - 1.0) * c).abs() < 1e-14);
    }

    #[test]
    fn field_tangle_bounds(n in 2usize..300, a in 0.0f64..2.0, d in 0.01f64..0.5) {
        let p = DickeParams::from_reduced(n, 1.0, a, d).unwrap();
        prop_assert!((p.alpha() - a).abs() < 1e-12 && (p.d_ratio() - d).abs() < 1e-14);
        for dm in [0i64, 2, 4, 40] {
            let k = p.overlap_kernel(dm);
            prop_assert!(k > 0.0 && k <= 1.0);
        }
        let (_, wf) = solve(&p.uniaxial()).unwrap();
        let tau = qubit_field_tangle(&wf, &p).unwrap();
        prop_assert!((-1e-14..=1.0).contains(&tau));
        let limit = tangle_thermodynamic(a, d);
        prop_assert!((0.0..=1.0).contains(&limit));
    }
}

#[test]
fn field_tangle_nondecreasing_below_transition() {
    for n in [6usize, 20, 100] {
        let mut last = -1.0;
        for i in 0..=20 {
            let a = i as f64 / 20.0;
            let p = DickeParams::from_reduced(n, 1.0, a, 0.1).unwrap();
            let (_, wf) = solve(&p.uniaxial()).unwrap();
            let tau = qubit_field_tangle(&wf, &p).unwrap();
            assert!(tau >= last, "N={n} alpha={a}");
            last = tau;
        }
    }
}

#[test]
fn one_tangle_nondecreasing_below_transition() {
    for n in [10usize, 100, 1000] {
        let mut last = -1.0;
        for i in 0..=20 {
            let (_, wf) = solve(&UniaxialParams::symmetric(n, 1.0, i as f64 / 20.0).unwrap()).unwrap();
            let tau = one_tangle(&wf).unwrap();
            assert!(tau >= last - 1e-14, "N={n} alpha={}", i as f64 / 20.0);
            last = tau;
        }
    }
}
