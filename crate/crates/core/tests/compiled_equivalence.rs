use std::f64::consts::{FRAC_PI_2, PI};

use qwalk_core::circuit::{
    build_shift_abstract, build_step_circuit, decompose_ckx, decomposition_census, GateKind,
    NativeGateSet, WalkSpec,
};
use qwalk_core::{run_ideal, run_ideal_dense_oracle, run_noisy, NoiseParams, ProbabilityTable};

// Basis-state permutation of a list of multi-controlled NOTs, computed on raw integers.
fn permute(gates: &[Vec<usize>], nq: usize, mut idx: usize) -> usize {
    let bit = |q: usize| 1usize << (nq - 1 - q);
    for g in gates {
        let (controls, target) = g.split_at(g.len() - 1);
        if controls.iter().all(|&c| idx & bit(c) != 0) {
            idx ^= bit(target[0]);
        }
    }
    idx
}

fn expected_shift(n: usize, nc: usize, nq: usize, idx: usize) -> usize {
    let data = nq - (n + nc);
    let anc = idx & ((1 << data) - 1);
    let c = (idx >> data) & ((1 << nc) - 1);
    let x = (idx >> (data + nc)) as i64;
    let step = match (nc, c) {
        (1, 0) => -1,
        (1, _) => 1,
        (_, 0b01) => -1,
        (_, 0b11) => 1,
        _ => 0,
    };
    let y = (x + step).rem_euclid(1 << n) as usize;
    (((y << nc) | c) << data) | anc
}

fn max_diff(a: &ProbabilityTable, b: &ProbabilityTable) -> f64 {
    a.probabilities()
        .iter()
        .zip(b.probabilities())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn compiled_shift_moves_the_walker_and_restores_ancillas() {
    for n in 2..=4 {
        for nc in 1..=2 {
            for rho in 3..=4 {
                let spec = WalkSpec::new(n, nc, 1).unwrap();
                let c = build_step_circuit(&spec, &NativeGateSet::new(rho).unwrap(), 0).unwrap();
                let gates: Vec<Vec<usize>> = c
                    .gates()
                    .filter(|g| !matches!(g.kind, GateKind::Ry(_)))
                    .map(|g| match g.kind {
                        GateKind::X => vec![g.qubits[0]],
                        _ => g.qubits.clone(),
                    })
                    .collect();
                let nq = c.qubit_count();
                for idx in 0..1usize << nq {
                    assert_eq!(
                        permute(&gates, nq, idx),
                        expected_shift(n, nc, nq, idx),
                        "n={n} nc={nc} rho={rho} input={idx:b}"
                    );
                }
            }
        }
    }
}

#[test]
fn abstract_shift_matches_definition() {
    for n in 1..=5 {
        for nc in 1..=2 {
            let spec = WalkSpec::new(n, nc, 1).unwrap();
            let gates: Vec<Vec<usize>> = build_shift_abstract(&spec).into_iter().map(|g| g.qubits).collect();
            let nq = n + nc;
            for idx in 0..1usize << nq {
                assert_eq!(permute(&gates, nq, idx), expected_shift(n, nc, nq, idx));
            }
        }
    }
}

#[test]
fn decompositions_realise_the_controlled_not() {
    for k in 1..=7 {
        for rho in 3..=5 {
            let (ops, m) = decompose_ckx(k, rho).unwrap();
            assert!(ops.iter().all(|g| g.rank() <= rho));
            let gates: Vec<Vec<usize>> = ops.into_iter().map(|g| g.qubits).collect();
            let nq = k + 1 + m;
            let controls_mask = ((1usize << k) - 1) << (m + 1);
            let target_bit = 1usize << m;
            for idx in 0..1usize << nq {
                let expect = if idx & controls_mask == controls_mask { idx ^ target_bit } else { idx };
                assert_eq!(permute(&gates, nq, idx), expect, "k={k} rho={rho}");
            }
        }
    }
}

#[test]
fn rank_three_chain_counts() {
    for k in 3..=10 {
        let (ops, m) = decompose_ckx(k, 3).unwrap();
        assert_eq!((ops.len(), m), (4 * (k - 2), k - 2));
    }
    assert_eq!(decomposition_census(4, 4).unwrap(), [(3, 2), (4, 2)].into());
    assert_eq!(decomposition_census(5, 4).unwrap(), [(4, 4)].into());
    assert_eq!(decompose_ckx(4, 4).unwrap().1, 1);
    assert_eq!(decompose_ckx(5, 4).unwrap().1, 1);
}

#[test]
fn errorless_compiled_walks_match_the_dense_oracle() {
    for n in 2..=4 {
        for nc in 1..=2 {
            let spec = WalkSpec::new(n, nc, 21).unwrap();
            let oracle = run_ideal_dense_oracle(&spec).unwrap();
            let abstract_run = run_ideal(&spec).unwrap();
            for rho in 3..=4 {
                let r = run_noisy(&spec, &NativeGateSet::new(rho).unwrap(), &NoiseParams::noiseless()).unwrap();
                for (t, st) in r.steps.iter().enumerate() {
                    assert!(max_diff(&st.effective, &oracle[t]) <= 1e-10, "n={n} nc={nc} rho={rho} t={t}");
                    assert!(max_diff(&abstract_run[t], &oracle[t]) <= 1e-10);
                }
            }
        }
    }
}

fn position(table: &ProbabilityTable) -> usize {
    let (i, p) = table
        .probabilities()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    assert!((p - 1.0).abs() < 1e-12, "walker is not localised");
    i
}

#[test]
fn frozen_clockwise_coin_circles_the_ring() {
    for n in 2..=4 {
        let steps = 1 << n;
        let mut theta = vec![0.0; steps];
        theta[0] = PI;
        let spec = WalkSpec::with_schedules(n, 1, theta, None).unwrap();
        let tables = run_ideal(&spec).unwrap();
        for (t, table) in tables.iter().enumerate() {
            assert_eq!(position(table), (t + 1) % steps);
        }
    }
}

#[test]
fn flipping_the_coin_undoes_the_step() {
    let spec = WalkSpec::with_schedules(3, 1, vec![PI, PI], None).unwrap();
    let tables = run_ideal(&spec).unwrap();
    assert_eq!(position(&tables[0]), 1);
    assert_eq!(position(&tables[1]), 0);
}

#[test]
fn lazy_walker_rests_without_a_c2_rotation() {
    let spec = WalkSpec::with_schedules(3, 2, vec![FRAC_PI_2; 6], Some(vec![0.0; 6])).unwrap();
    for table in run_ideal(&spec).unwrap() {
        assert_eq!(position(&table), 0);
    }
}

#[test]
fn trivial_coin_on_a_prepared_walker_moves_it_forward() {
    // One step of θ = π prepares c = 1 and moves; a second with θ = 0 moves again.
    let spec = WalkSpec::with_schedules(2, 1, vec![PI, 0.0], None).unwrap();
    let tables = run_ideal(&spec).unwrap();
    assert_eq!(position(&tables[1]), 2);
    let lazy = WalkSpec::with_schedules(2, 2, vec![PI, 0.0], Some(vec![PI, 0.0])).unwrap();
    let tables = run_ideal(&lazy).unwrap();
    assert_eq!(position(&tables[1]), 2);
}
