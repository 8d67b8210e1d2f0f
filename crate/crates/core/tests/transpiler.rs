mod common;

use std::collections::{HashMap, VecDeque};

use common::{layout_permutation, phase_distance, random_circuit};
use qkrt_core::seed::rng_from_seed;
use qkrt_core::transpiler::BasisGateSet;
use qkrt_core::{
    kernel_circuit, route, transpile, transpiled_depth, Circuit, CouplingMap, EntanglementStrategy, Gate, KernelFamily,
    Simulator,
};

fn maps_for(n: usize) -> Vec<CouplingMap> {
    vec![
        CouplingMap::line(n),
        CouplingMap::ring(n),
        CouplingMap::heavy_hex_like(n.max(7)),
        CouplingMap::heavy_hex_7(),
    ]
    .into_iter()
    .filter(|m| m.num_qubits() >= n)
    .collect()
}

#[test]
fn routed_circuits_only_use_map_edges() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 6);
        for map in maps_for(n) {
            let t = transpile(&random_circuit(n, 30, seed), &map).unwrap();
            assert!(BasisGateSet.accepts(&t.circuit));
            for g in t.circuit.gates().iter().filter(|g| g.is_two_qubit()) {
                let q = g.qubits();
                assert!(map.is_adjacent(q[0], q[1]), "seed {seed}: {g} not on an edge");
            }
            checked += 1;
        }
    }
    assert!(checked >= 200);
}

#[test]
fn transpiled_unitary_matches_after_layout_correction() {
    let sim = Simulator::default();
    for seed in 0..40u64 {
        let n = 2 + (seed as usize % 3);
        let c = random_circuit(n, 12, 1000 + seed);
        for map in [CouplingMap::line(n), CouplingMap::ring(n)] {
            let t = transpile(&c, &map).unwrap();
            let want = layout_permutation(&t.final_layout) * sim.unitary(&c).unwrap();
            let got = sim.unitary(&t.circuit).unwrap();
            let err = phase_distance(&got, &want);
            assert!(err < 1e-8, "seed {seed}, n {n}: {err}");
        }
    }
}

/// Fewest SWAPs that let a fixed gate sequence run on `map`, by exhaustive
/// search over layouts.
fn optimal_swaps(c: &Circuit, map: &CouplingMap) -> usize {
    let n = map.num_qubits();
    let two: Vec<(usize, usize)> = c
        .gates()
        .iter()
        .filter(|g| g.is_two_qubit())
        .map(|g| (g.qubits()[0], g.qubits()[1]))
        .collect();
    // 0-1 BFS over (next gate, layout); executing a gate is free, a SWAP costs 1.
    let start: Vec<usize> = (0..n).collect();
    let mut best: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut dq = VecDeque::from([(0usize, start.clone(), 0usize)]);
    best.insert((0, start), 0);
    while let Some((k, l2p, cost)) = dq.pop_front() {
        if best.get(&(k, l2p.clone())).is_some_and(|&b| b < cost) {
            continue;
        }
        if k == two.len() {
            return cost;
        }
        let (a, b) = two[k];
        if map.is_adjacent(l2p[a], l2p[b]) {
            let key = (k + 1, l2p.clone());
            if best.get(&key).is_none_or(|&b| b > cost) {
                best.insert(key, cost);
                dq.push_front((k + 1, l2p, cost));
            }
            continue;
        }
        for (u, v) in map.edges() {
            let mut next = l2p.clone();
            for p in next.iter_mut() {
                if *p == u {
                    *p = v;
                } else if *p == v {
                    *p = u;
                }
            }
            let key = (k, next.clone());
            if best.get(&key).is_none_or(|&b| b > cost + 1) {
                best.insert(key, cost + 1);
                dq.push_back((k, next, cost + 1));
            }
        }
    }
    unreachable!("a connected map always admits a routing")
}

#[test]
fn greedy_routing_against_exhaustive_optimum() {
    // Single gates: greedy walks a shortest path, which is optimal.
    for map in [CouplingMap::line(5), CouplingMap::ring(5), CouplingMap::heavy_hex_7()] {
        let n = map.num_qubits();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let c = Circuit::from_gates(n, [Gate::cx(a, b)]).unwrap();
                assert_eq!(route(&c, &map).unwrap().swaps, optimal_swaps(&c, &map), "{a}->{b}");
            }
        }
    }
    // Sequences: greedy is a valid routing, so never beats the optimum.
    for seed in 0..30 {
        let map = CouplingMap::line(4);
        let c = random_circuit(4, 6, 500 + seed);
        assert!(route(&c, &map).unwrap().swaps >= optimal_swaps(&c, &map));
    }
}

fn mean_kernel_depth(fam: &KernelFamily, map: &CouplingMap, samples: u64) -> f64 {
    let total: usize = (0..samples)
        .map(|i| {
            let mut rng = rng_from_seed(i);
            let x = fam.random_features(&mut rng);
            let y = fam.random_features(&mut rng);
            transpiled_depth(&kernel_circuit(fam, &x, &y).unwrap(), map).unwrap()
        })
        .sum();
    total as f64 / samples as f64
}

#[test]
fn full_entanglement_is_deeper_and_depth_grows_with_reps() {
    let map = CouplingMap::line(5);
    let mut prev = [0.0f64; 2];
    for d in 1..=3 {
        let lin = mean_kernel_depth(
            &KernelFamily::new(5, d, EntanglementStrategy::Linear).unwrap(),
            &map,
            25,
        );
        let full = mean_kernel_depth(&KernelFamily::new(5, d, EntanglementStrategy::Full).unwrap(), &map, 25);
        assert!(full > lin, "d={d}: full {full} vs linear {lin}");
        assert!(lin >= prev[0] && full >= prev[1], "d={d}: depth decreased");
        prev = [lin, full];
    }
}
