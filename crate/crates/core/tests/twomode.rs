mod common;

use gravcat::qubitpair::{QubitPairModel, TwoQubitState, EE, EG, GE, GG};
use gravcat::twomode::{
    build_interaction, build_single_well, build_total, coherent_state, entanglement_entropy, from_qubit_pair,
    from_qubit_state, normalization_audit, normalization_audit_with, spin_operators, AuditSetup, BipartiteEvolver,
    BipartiteSpinState, TwoModeParams, QUBIT_ORDER,
};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

fn complexify(a: &Array2<f64>) -> Array2<Complex64> {
    a.mapv(|v| Complex64::new(v, 0.0))
}

fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

#[test]
fn spin_operators_close_su2() {
    let i2 = Complex64::new(0.0, 2.0);
    for n in [1usize, 2, 3, 7, 16, 33, 64] {
        let o = spin_operators::<f64>(n).unwrap();
        let (sx, sz) = (complexify(&o.sx), complexify(&o.sz));
        let sy = &o.sy;
        let scale = (n * n) as f64;
        let comm = |a: &Array2<Complex64>, b: &Array2<Complex64>| a.dot(b) - b.dot(a);
        assert!(max_abs(&(comm(&sx, sy) - &sz * i2)) < 1e-12 * scale, "N = {n}");
        assert!(max_abs(&(comm(sy, &sz) - &sx * i2)) < 1e-12 * scale, "N = {n}");
        assert!(max_abs(&(comm(&sz, &sx) - sy * i2)) < 1e-12 * scale, "N = {n}");
        // Casimir of spin N/2 with S = 2J: 4 j(j+1) = N(N+2).
        let casimir = sx.dot(&sx) + sy.dot(sy) + sz.dot(&sz);
        let want = Array2::<Complex64>::eye(n + 1) * Complex64::new((n * (n + 2)) as f64, 0.0);
        assert!(max_abs(&(casimir - want)) < 1e-12 * scale, "N = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonians_are_hermitian(n in 1usize..12, wb in -2.0f64..2.0, k in -1.0f64..1.0, u in -1.0f64..1.0) {
        let p = TwoModeParams::simple(n, wb, k, u).unwrap();
        for h in [build_single_well(&p).unwrap(), build_interaction(&p).unwrap(), build_total(&p).unwrap()] {
            let t = h.t().to_owned();
            prop_assert!((&h - &t).iter().all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn evolution_conserves_norm_and_energy(xi1 in -1.0f64..1.0, xi2 in -1.0f64..1.0, phi in 0.0f64..std::f64::consts::TAU, t in 0.0f64..200.0) {
        let p = TwoModeParams::simple(8, 1.0, 0.05, 0.02).unwrap();
        let ev = BipartiteEvolver::new(&p).unwrap();
        let s0 = BipartiteSpinState::product(
            &coherent_state(8, xi1, phi).unwrap(),
            &coherent_state(8, xi2, 0.0).unwrap(),
        ).unwrap();
        let s1 = ev.evolve(&s0, t).unwrap();
        prop_assert!((s1.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((ev.energy(&s1) - ev.energy(&s0)).abs() < 1e-9 * 8.0);
    }
}

#[test]
fn evolution_matches_matrix_exponential() {
    let p = TwoModeParams::simple(3, 0.7, 0.3, 0.2).unwrap();
    let h = build_total(&p).unwrap();
    let ev = BipartiteEvolver::new(&p).unwrap();
    let s0 = BipartiteSpinState::product(&coherent_state(3, 0.4, 1.0).unwrap(), &coherent_state(3, -0.2, 0.3).unwrap())
        .unwrap();
    for t in [0.0, 2.5, 40.0, 300.0] {
        let want = common::apply(&common::expm(&h, t), &s0.amps);
        let got = ev.evolve(&s0, t).unwrap();
        for (a, b) in got.amps.iter().zip(&want) {
            assert!((a - b).norm() < 1e-9, "t = {t}");
        }
    }
}

#[test]
fn single_particle_reproduces_qubit_pair() {
    let q = QubitPairModel::new(1.3f64, 0.25).unwrap();
    let p = from_qubit_pair(&q).unwrap();
    let h2 = build_total(&p).unwrap();
    let hq = q.hamiltonian_matrix();
    for a in 0..4 {
        for b in 0..4 {
            assert!((h2[[a, b]] - hq[[QUBIT_ORDER[a], QUBIT_ORDER[b]]]).abs() < 1e-14);
        }
    }
    let ev = BipartiteEvolver::new(&p).unwrap();
    for start in [EE, GG, EG, GE] {
        let psi = TwoQubitState::basis(start);
        let s0 = from_qubit_state(&psi).unwrap();
        for k in 0..200 {
            let t = 0.37 * k as f64;
            let a = from_qubit_state(&q.evolve(&psi, t).unwrap()).unwrap();
            let b = ev.evolve(&s0, t).unwrap();
            for (x, y) in a.amps.iter().zip(&b.amps) {
                assert!((x - y).norm() < 1e-9, "start {start}, t = {t}");
            }
        }
    }
}

#[test]
fn single_particle_entropy_matches_qubit_purity() {
    let q = QubitPairModel::new(1.0, 0.4).unwrap();
    let p = from_qubit_pair(&q).unwrap();
    let ev = BipartiteEvolver::new(&p).unwrap();
    let s0 = from_qubit_state(&TwoQubitState::basis(EE)).unwrap();
    for t in [0.3, 1.1, 4.0, 9.5] {
        let s = ev.evolve(&s0, t).unwrap();
        let amps: Vec<Complex64> = (0..4).map(|q| s.amps[QUBIT_ORDER.iter().position(|&x| x == q).unwrap()]).collect();
        let purity = 1.0 - common::purity_deficit(&amps);
        let r = (2.0 * purity - 1.0).max(0.0).sqrt();
        let want: f64 = [(1.0 + r) / 2.0, (1.0 - r) / 2.0].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
        assert!((entanglement_entropy(&s).unwrap() - want).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn product_states_carry_no_entropy() {
    let s =
        BipartiteSpinState::product(&coherent_state(10, 0.3f64, 0.5).unwrap(), &coherent_state(10, -0.8, 2.0).unwrap())
            .unwrap();
    assert!(entanglement_entropy(&s).unwrap().abs() < 1e-10);
}

#[test]
fn decoupled_condensates_stay_unentangled() {
    let p = TwoModeParams::simple(6, 1.0f64, 0.2, 0.0).unwrap();
    let ev = BipartiteEvolver::new(&p).unwrap();
    let s0 = BipartiteSpinState::product(&coherent_state(6, 0.5, 0.0).unwrap(), &coherent_state(6, 0.2, 1.0).unwrap())
        .unwrap();
    for t in [1.0, 10.0, 100.0] {
        assert!(entanglement_entropy(&ev.evolve(&s0, t).unwrap()).unwrap().abs() < 1e-9);
    }
}

#[test]
fn audit_convention_factors() {
    let r = normalization_audit().unwrap();
    assert!(r.fit_residual < 1e-10, "fit residual {}", r.fit_residual);
    for n in [1, 2] {
        let ratio = |term: &str| r.entry(n, term).unwrap().ratio();
        assert!((ratio("Sz splitting") - 0.5).abs() < 1e-12);
        assert!((ratio("N_R-N_L per Sx") - 0.5).abs() < 1e-12);
        assert!((ratio("I interaction") - 4.0).abs() < 1e-6);
        // Normal ordering leaves (N − 1) where the model keeps (N + 1).
        let lamb = (n as f64 - 1.0) / (n as f64 + 1.0);
        assert!((ratio("Sz self-gravity") - lamb).abs() < 1e-6, "N = {n}: {}", ratio("Sz self-gravity"));
        assert!((ratio("Sx(x)Sx") - 1.0).abs() < 1e-6);
        assert!((ratio("Sz(x)Sz") - 1.0).abs() < 1e-6);
    }
    assert!((r.entry(1, "Sz^2 at N=1").unwrap().ratio() - 4.0).abs() < 1e-12);
    assert!((r.entry(1, "Sx^2 at N=1").unwrap().ratio() - 4.0).abs() < 1e-12);
}

#[test]
fn audit_single_well_remainder_vanishes_for_separated_wells() {
    let r = normalization_audit_with(AuditSetup { l: 10.0, ..Default::default() }).unwrap();
    for &(n, dev) in &r.single_well_deviation {
        assert!(dev < 1e-10, "N = {n}: {dev}");
    }
}

#[test]
fn single_precision_tracks_double() {
    let p64 = TwoModeParams::simple(4, 1.0f64, 0.1, 0.05).unwrap();
    let p32 = TwoModeParams::simple(4, 1.0f32, 0.1, 0.05).unwrap();
    let s64 = BipartiteSpinState::basis(4, 1, 3).unwrap();
    let s32 = BipartiteSpinState::<f32>::basis(4, 1, 3).unwrap();
    let o64 = spin_operators::<f64>(4).unwrap();
    let o32 = spin_operators::<f32>(4).unwrap();
    for t in [0.5, 5.0, 20.0] {
        let a = BipartiteEvolver::new(&p64).unwrap().evolve(&s64, t).unwrap();
        let b = BipartiteEvolver::new(&p32).unwrap().evolve(&s32, t as f32).unwrap();
        let da = a.local_expectation(&o64.sx, 0);
        let db = b.local_expectation(&o32.sx, 0) as f64;
        assert!((da - db).abs() < 1e-3, "t = {t}: {da} vs {db}");
    }
}

#[test]
fn qubit_order_is_a_permutation() {
    let mut seen = [false; 4];
    for &q in &QUBIT_ORDER {
        seen[q] = true;
    }
    assert!(seen.iter().all(|&s| s));
    assert_eq!((QUBIT_ORDER[0], QUBIT_ORDER[3]), (EE, GG));
    assert_eq!((QUBIT_ORDER[1], QUBIT_ORDER[2]), (EG, GE));
}
