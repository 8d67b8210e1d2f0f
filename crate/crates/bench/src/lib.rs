//! Benchmark fixtures shared by the criterion benches.

use qkrt_core::seed::derived_rng;
use qkrt_core::{EntanglementStrategy, FeatureVector, KernelFamily};

/// Domain for fixture data so it never collides with library streams.
const FIXTURE: u64 = 0xbe9c;

pub fn family(n: usize, reps: usize) -> KernelFamily {
    KernelFamily::new(n, reps, EntanglementStrategy::Full).expect("valid fixture family")
}

/// `count` reproducible feature vectors for `fam`.
pub fn dataset(fam: &KernelFamily, count: usize) -> Vec<FeatureVector> {
    (0..count)
        .map(|i| fam.random_features(&mut derived_rng(7, FIXTURE, i as u64)))
        .collect()
}
