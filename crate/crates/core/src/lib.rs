//! Runtime prediction for quantum-kernel jobs from a device's CLOPS rating.
//!
//! The pieces, bottom up:
//!
//! - [`circuit`] — a small gate-list IR with a text form.
//! - [`generators`] — quantum-volume circuits and ZZ-feature-map kernel circuits.
//! - [`transpiler`] — basis lowering and greedy SWAP routing, for depth.
//! - [`deff`] — effective QV layers `d_eff` of a kernel family.
//! - [`model`] — `T̂ = M·K·S·d_eff / C`, scoring, extrapolation.
//! - [`sim`] — statevector kernels, exact and shot-sampled.
//! - [`execsim`] — a parametric stack to produce synthetic "actual" runtimes.
//!
//! ```
//! use qkrt_core::{predict_runtime, BackendRegistry, JobSpec};
//!
//! let reg = BackendRegistry::builtin();
//! let hanoi = reg.get("ibm_hanoi").unwrap();
//! let job = JobSpec::new(100, 100, hanoi.qv_layers() as f64).unwrap();
//! let t = predict_runtime(&job, hanoi);
//! assert!((t - 26.09).abs() < 0.01);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod deff;
pub mod error;
pub mod execsim;
pub mod generators;
pub mod linalg;
pub mod model;
pub mod seed;
pub mod sim;
pub mod transpiler;

pub use circuit::{Circuit, Gate, GateKind};
pub use deff::{
    effective_layers, effective_layers_for, equivalent_qv_width, CircuitFamily, DeffEstimate, DepthRatio,
    EffectiveLayers, SampleCounts,
};
pub use error::{Error, Result};
pub use execsim::{
    fit_params, fit_params_with, simulate_job_runtime, sweep, FitOptions, StackTimingParams, SweepJob, SweepRow,
};
pub use generators::{
    aspect_ratio, encoding_circuit, kernel_circuit, qv_circuit, random_circuit, AspectRatio, CircuitShape,
    EntanglementStrategy, FeatureVector, KernelFamily,
};
pub use model::{
    clops_from_measurement, extrapolate, humanize_seconds, kernel_job_size, loss, predict_runtime, predict_runtime_at,
    required_shots, score, shot_scaled_runtime, BackendRegistry, BackendSpec, JobSpec, RuntimeReport,
};
pub use sim::{estimate_kernel, exact_kernel, kernel_matrix, KernelEstimate, KernelMatrix, KernelMode, Simulator};
pub use transpiler::{decompose, route, transpile, transpiled_depth, CouplingMap, Topology};
