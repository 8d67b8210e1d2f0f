//! Effective number of quantum volume layers of a kernel-circuit family.
//!
//! A kernel circuit on `n` qubits with `2d` template layers has the same
//! volumetric area as a square QV circuit of width `v = ⌈√(2dn)⌉`. Its depth,
//! relative to that QV circuit after both are transpiled onto the same
//! coupling map, scales `v` into `d_eff`:
//!
//! ```text
//! d_eff = mean(depth(kernel)) / mean(depth(QV_v)) · v
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{invalid, Error, Result};
use crate::generators::{kernel_circuit, qv_circuit, KernelFamily};
use crate::seed::{derive_seed, derived_rng, domain};
use crate::transpiler::{transpiled_depth, CouplingMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeffMethod {
    /// Depth ratio against a volumetric-area-matched QV circuit.
    DepthRatio,
    /// The circuits are QV circuits; `d_eff` is their layer count.
    QvLayers,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeffEstimate {
    pub method: DeffMethod,
    pub v: usize,
    pub mean_kernel_depth: Option<f64>,
    pub mean_qv_depth: Option<f64>,
    pub d_eff: f64,
    pub kernel_samples: usize,
    pub qv_samples: usize,
    pub seed: u64,
}

/// How many random realisations feed each mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleCounts {
    pub kernel: usize,
    pub qv: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        SampleCounts { kernel: 25, qv: 20 }
    }
}

/// `⌈√(2·d·n)⌉`, computed in integers.
pub fn equivalent_qv_width(n: usize, d: usize) -> usize {
    let area = 2 * n * d;
    let r = area.isqrt();
    if r * r < area {
        r + 1
    } else {
        r
    }
}

/// Circuits whose runtime is being modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitFamily {
    Kernel(KernelFamily),
    QuantumVolume { layers: usize },
}

/// Anything that can produce a `d_eff` for a kernel family on a device.
pub trait EffectiveLayers {
    fn estimate(&self, fam: &KernelFamily, map: &CouplingMap, seed: u64) -> Result<DeffEstimate>;
}

/// The depth-ratio definition with configurable sample counts.
#[derive(Debug, Clone, Copy, Default)]
pub struct DepthRatio {
    pub samples: SampleCounts,
}

impl EffectiveLayers for DepthRatio {
    fn estimate(&self, fam: &KernelFamily, map: &CouplingMap, seed: u64) -> Result<DeffEstimate> {
        effective_layers(fam, map, self.samples, seed)
    }
}

fn mean_transpiled_depth(circuits: &[Circuit], map: &CouplingMap) -> Result<f64> {
    if circuits.is_empty() {
        return Err(invalid("cannot average the depth of zero circuits"));
    }
    let depths = circuits
        .par_iter()
        .map(|c| transpiled_depth(c, map))
        .collect::<Result<Vec<_>>>()?;
    Ok(depths.iter().sum::<usize>() as f64 / depths.len() as f64)
}

/// `mean_kernel / mean_qv · v`.
pub fn depth_ratio(mean_kernel_depth: f64, mean_qv_depth: f64, v: usize) -> Result<f64> {
    if !(mean_qv_depth > 0.0) {
        return Err(invalid("reference QV depth must be positive"));
    }
    Ok(mean_kernel_depth / mean_qv_depth * v as f64)
}

/// `d_eff` from explicit circuit sets, both transpiled onto `map`.
pub fn effective_layers_from_circuits(
    kernel: &[Circuit],
    qv: &[Circuit],
    v: usize,
    map: &CouplingMap,
) -> Result<(f64, f64, f64)> {
    let mk = mean_transpiled_depth(kernel, map)?;
    let mq = mean_transpiled_depth(qv, map)?;
    Ok((mk, mq, depth_ratio(mk, mq, v)?))
}

/// Random kernel circuits for `fam`; sample `i` uses a stream derived from
/// `(seed, i)` and draws `x` then `y` uniformly from `[0, 2π)^n`.
pub fn sample_kernel_circuits(fam: &KernelFamily, count: usize, seed: u64) -> Result<Vec<Circuit>> {
    (0..count)
        .map(|i| {
            let mut rng = derived_rng(seed, domain::KERNEL_SAMPLE, i as u64);
            let x = fam.random_features(&mut rng);
            let y = fam.random_features(&mut rng);
            kernel_circuit(fam, &x, &y)
        })
        .collect()
}

/// Square QV reference circuits of width and depth `v`.
pub fn sample_qv_circuits(v: usize, count: usize, seed: u64) -> Result<Vec<Circuit>> {
    (0..count)
        .map(|i| qv_circuit(v, v, derive_seed(seed, domain::QV_SAMPLE, i as u64)))
        .collect()
}

/// Estimate `d_eff` for a kernel family on `map`.
pub fn effective_layers(
    fam: &KernelFamily,
    map: &CouplingMap,
    samples: SampleCounts,
    seed: u64,
) -> Result<DeffEstimate> {
    if samples.kernel == 0 || samples.qv == 0 {
        return Err(invalid("need at least one kernel and one QV sample"));
    }
    let v = equivalent_qv_width(fam.n(), fam.reps());
    let needed = fam.n().max(v);
    if needed > map.num_qubits() {
        return Err(Error::MapTooSmall {
            needed,
            available: map.num_qubits(),
        });
    }
    let kernel = sample_kernel_circuits(fam, samples.kernel, seed)?;
    let qv = sample_qv_circuits(v, samples.qv, seed)?;
    let (mk, mq, d_eff) = effective_layers_from_circuits(&kernel, &qv, v, map)?;
    Ok(DeffEstimate {
        method: DeffMethod::DepthRatio,
        v,
        mean_kernel_depth: Some(mk),
        mean_qv_depth: Some(mq),
        d_eff,
        kernel_samples: samples.kernel,
        qv_samples: samples.qv,
        seed,
    })
}

/// Like [`effective_layers`], but QV families short-circuit to their layer
/// count.
pub fn effective_layers_for(
    family: &CircuitFamily,
    map: &CouplingMap,
    samples: SampleCounts,
    seed: u64,
) -> Result<DeffEstimate> {
    match family {
        CircuitFamily::Kernel(fam) => effective_layers(fam, map, samples, seed),
        CircuitFamily::QuantumVolume { layers } => {
            if *layers < 1 {
                return Err(invalid("QV family needs at least one layer"));
            }
            Ok(DeffEstimate {
                method: DeffMethod::QvLayers,
                v: *layers,
                mean_kernel_depth: None,
                mean_qv_depth: None,
                d_eff: *layers as f64,
                kernel_samples: 0,
                qv_samples: 0,
                seed,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::EntanglementStrategy::*;

    #[test]
    fn qv_width_examples() {
        assert_eq!(equivalent_qv_width(4, 2), 4);
        assert_eq!(equivalent_qv_width(2, 1), 2);
        assert_eq!(equivalent_qv_width(5, 3), 6);
    }

    #[test]
    fn identical_sets_give_v() {
        let map = CouplingMap::line(4);
        let qv = sample_qv_circuits(4, 3, 1).unwrap();
        let (_, _, d) = effective_layers_from_circuits(&qv, &qv, 4, &map).unwrap();
        assert_eq!(d, 4.0);
    }

    #[test]
    fn qv_bypass() {
        let est = effective_layers_for(
            &CircuitFamily::QuantumVolume { layers: 6 },
            &CouplingMap::line(6),
            SampleCounts::default(),
            0,
        )
        .unwrap();
        assert_eq!(est.d_eff, 6.0);
        assert_eq!(est.method, DeffMethod::QvLayers);
    }

    #[test]
    fn map_must_fit_reference() {
        // n = 3, d = 3 -> v = ceil(sqrt(18)) = 5 > 4
        let fam = KernelFamily::new(3, 3, Linear).unwrap();
        assert_eq!(
            effective_layers(&fam, &CouplingMap::line(4), SampleCounts::default(), 0),
            Err(Error::MapTooSmall {
                needed: 5,
                available: 4
            })
        );
    }

    #[test]
    fn deterministic_for_seed() {
        let fam = KernelFamily::new(3, 1, Full).unwrap();
        let map = CouplingMap::line(4);
        let counts = SampleCounts { kernel: 5, qv: 4 };
        let a = effective_layers(&fam, &map, counts, 11).unwrap();
        let b = effective_layers(&fam, &map, counts, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.d_eff > 0.0);
        let expect = a.mean_kernel_depth.unwrap() / a.mean_qv_depth.unwrap() * a.v as f64;
        assert!((a.d_eff - expect).abs() < 1e-12);
    }
}
