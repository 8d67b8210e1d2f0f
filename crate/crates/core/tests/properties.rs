mod common;

use common::random_circuit;
use proptest::prelude::*;
use qkrt_core::{equivalent_qv_width, kernel_job_size, loss, predict_runtime_at, required_shots, Circuit, JobSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn depth_bounds(n in 2usize..7, len in 0usize..40, seed in any::<u64>()) {
        let c = random_circuit(n, len, seed);
        let busiest = (0..n)
            .map(|q| c.gates().iter().filter(|g| g.qubits().contains(&q)).count())
            .max()
            .unwrap_or(0);
        prop_assert!(c.depth() <= c.len());
        prop_assert!(c.depth() >= busiest);
    }

    #[test]
    fn inverse_is_an_involution(n in 2usize..6, len in 0usize..30, seed in any::<u64>()) {
        let c = random_circuit(n, len, seed);
        prop_assert_eq!(c.inverse().inverse(), c.clone());
        prop_assert_eq!(c.inverse().depth(), c.depth());
    }

    #[test]
    fn text_round_trip(n in 2usize..6, len in 0usize..30, seed in any::<u64>(), layers in proptest::option::of(1usize..5)) {
        let mut c = random_circuit(n, len, seed);
        if let Some(d) = layers {
            c = c.with_base_layers(d);
        }
        let back = Circuit::from_text(&c.to_text()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn prediction_is_linear(m in 1u64..1000, s in 1u64..10_000, k in 1u64..20, d in 0.1f64..20.0, c in 10.0f64..1e5, f in 2u64..5) {
        let base = predict_runtime_at(&JobSpec::with_updates(m, s, k, d).unwrap(), c).unwrap();
        let tol = 1e-9 * base * f as f64;
        let ff = f as f64;
        prop_assert!((predict_runtime_at(&JobSpec::with_updates(m * f, s, k, d).unwrap(), c).unwrap() - ff * base).abs() < tol);
        prop_assert!((predict_runtime_at(&JobSpec::with_updates(m, s * f, k, d).unwrap(), c).unwrap() - ff * base).abs() < tol);
        prop_assert!((predict_runtime_at(&JobSpec::with_updates(m, s, k * f, d).unwrap(), c).unwrap() - ff * base).abs() < tol);
        prop_assert!((predict_runtime_at(&JobSpec::with_updates(m, s, k, d * ff).unwrap(), c).unwrap() - ff * base).abs() < tol);
        prop_assert!((predict_runtime_at(&JobSpec::with_updates(m, s, k, d).unwrap(), c * ff).unwrap() - base / ff).abs() < tol);
    }

    #[test]
    fn loss_is_monotone_on_each_side(a in 0.001f64..0.999, b in 0.001f64..0.999, x in 1.0f64..100.0, y in 1.0f64..100.0) {
        prop_assert!(loss(a) > 0.0 && loss(x) >= 0.0);
        if a < b {
            prop_assert!(loss(a) > loss(b));
        }
        if x < y {
            prop_assert!(loss(x) < loss(y));
        }
    }

    #[test]
    fn pair_count_increments(n in 2u64..5_000_000) {
        prop_assert_eq!(kernel_job_size(n + 1).unwrap() - kernel_job_size(n).unwrap(), n);
    }

    #[test]
    fn qv_width_ceiling(n in 2usize..500, d in 1usize..50) {
        let v = equivalent_qv_width(n, d);
        prop_assert!(v * v >= 2 * d * n);
        prop_assert!((v - 1) * (v - 1) < 2 * d * n);
    }

    #[test]
    fn shot_requirement_scaling(n in 2u64..200, eps in 0.05f64..1.0) {
        let c = 1e-3;
        let s = required_shots(n, eps, c).unwrap() as f64;
        let s2 = required_shots(2 * n, eps, c).unwrap() as f64;
        let s_half = required_shots(n, eps / 2.0, c).unwrap() as f64;
        let ratio = 2f64.powf(8.0 / 3.0);
        // ceilings perturb each count by < 1
        prop_assert!((s2 - ratio * s).abs() <= ratio + 1.0);
        prop_assert!((s_half - 4.0 * s).abs() <= 5.0);
    }
}
