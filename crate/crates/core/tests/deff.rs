use qkrt_core::deff::{effective_layers_from_circuits, sample_kernel_circuits, sample_qv_circuits};
use qkrt_core::{
    effective_layers, equivalent_qv_width, transpile, Circuit, CouplingMap, DepthRatio, EffectiveLayers,
    EntanglementStrategy::{Full, Linear},
    KernelFamily, SampleCounts,
};

#[test]
fn qv_width_is_the_exact_ceiling() {
    for n in 2..=8usize {
        for d in 1..=6usize {
            let v = equivalent_qv_width(n, d);
            let area = 2 * d * n;
            // oracle: smallest integer whose square covers the area
            let oracle = (1..).find(|k: &usize| k * k >= area).unwrap();
            assert_eq!(v, oracle, "n={n} d={d}");
            assert!(v * v >= area && (v - 1) * (v - 1) < area);
        }
    }
}

fn doubled(c: &Circuit) -> Circuit {
    Circuit::from_gates(c.width(), c.gates().iter().flat_map(|g| [g.clone(), g.clone()])).unwrap()
}

#[test]
fn doubling_kernel_depth_doubles_d_eff() {
    let map = CouplingMap::line(6);
    let fam = KernelFamily::new(5, 2, Full).unwrap();
    let v = equivalent_qv_width(5, 2);
    // Already-routed basis circuits pass through the transpiler unchanged.
    let kernel: Vec<Circuit> = sample_kernel_circuits(&fam, 10, 3)
        .unwrap()
        .iter()
        .map(|c| transpile(c, &map).unwrap().circuit)
        .collect();
    let twice: Vec<Circuit> = kernel.iter().map(doubled).collect();
    let qv = sample_qv_circuits(v, 5, 3).unwrap();
    let (_, _, base) = effective_layers_from_circuits(&kernel, &qv, v, &map).unwrap();
    let (_, _, dbl) = effective_layers_from_circuits(&twice, &qv, v, &map).unwrap();
    assert!((dbl / base - 2.0).abs() < 0.01, "{base} -> {dbl}");
}

#[test]
fn d_eff_grows_with_reps_and_entanglement() {
    let map = CouplingMap::line(8);
    let est = DepthRatio {
        samples: SampleCounts { kernel: 25, qv: 20 },
    };
    let mut prev = 0.0;
    for d in 1..=3 {
        let lin = est
            .estimate(&KernelFamily::new(4, d, Linear).unwrap(), &map, 1)
            .unwrap();
        let full = est.estimate(&KernelFamily::new(4, d, Full).unwrap(), &map, 1).unwrap();
        assert!(full.d_eff >= lin.d_eff, "d={d}");
        // The QV reference widens with d, so compare the kernel depths.
        let k = lin.mean_kernel_depth.unwrap();
        assert!(k >= prev);
        prev = k;
    }
}

#[test]
fn regression_pin() {
    // Recorded from this implementation; guards against silent drift.
    let fam = KernelFamily::new(4, 1, Linear).unwrap();
    let e = effective_layers(&fam, &CouplingMap::line(4), SampleCounts::default(), 7).unwrap();
    assert_eq!(e.v, 3);
    assert_eq!(e.mean_kernel_depth, Some(26.0));
    assert_eq!(e.mean_qv_depth, Some(64.95));
    assert!((e.d_eff - 26.0 / 64.95 * 3.0).abs() < 1e-12);
}
