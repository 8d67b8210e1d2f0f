//! CLOPS arithmetic, runtime prediction, scoring and extrapolation.
//!
//! The model assumes a stack without fixed overheads: a job of `M` circuits,
//! `K` parameter updates and `S` shots, with `d_eff` QV-equivalent layers per
//! circuit, occupies a device rated at `C` CLOPS for `M·K·S·d_eff / C`
//! seconds.

mod backend;
pub mod reference;

use serde::{Deserialize, Serialize};

pub use backend::{BackendRegistry, BackendSpec};

use crate::error::{invalid, Result};

/// Shots and circuits per job in the CLOPS protocol.
pub const CLOPS_PROTOCOL_M: u64 = 100;
pub const CLOPS_PROTOCOL_S: u64 = 100;
/// Parameter updates in the CLOPS protocol.
pub const CLOPS_PROTOCOL_K: u64 = 10;

#[derive(Deserialize)]
struct RawJob {
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "S")]
    s: u64,
    #[serde(rename = "K", default = "one")]
    k: u64,
    d_eff: f64,
}

fn one() -> u64 {
    1
}

/// A batch of `M` circuits, each run for `S` shots, repeated over `K`
/// parameter updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJob")]
pub struct JobSpec {
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "S")]
    s: u64,
    #[serde(rename = "K")]
    k: u64,
    d_eff: f64,
}

impl TryFrom<RawJob> for JobSpec {
    type Error = crate::error::Error;

    fn try_from(r: RawJob) -> Result<Self> {
        JobSpec::with_updates(r.m, r.s, r.k, r.d_eff)
    }
}

impl JobSpec {
    /// A kernel-style job, `K = 1`.
    pub fn new(m: u64, s: u64, d_eff: f64) -> Result<Self> {
        Self::with_updates(m, s, 1, d_eff)
    }

    pub fn with_updates(m: u64, s: u64, k: u64, d_eff: f64) -> Result<Self> {
        if m == 0 || s == 0 || k == 0 {
            return Err(invalid(format!("M, S and K must be ≥ 1 (got M={m}, S={s}, K={k})")));
        }
        if !(d_eff > 0.0 && d_eff.is_finite()) {
            return Err(invalid(format!("d_eff must be positive, got {d_eff}")));
        }
        Ok(JobSpec { m, s, k, d_eff })
    }

    pub fn circuits(&self) -> u64 {
        self.m
    }

    pub fn shots(&self) -> u64 {
        self.s
    }

    pub fn updates(&self) -> u64 {
        self.k
    }

    pub fn d_eff(&self) -> f64 {
        self.d_eff
    }

    /// `M·K·S·d_eff`: layer-shots the job executes.
    pub fn layer_shots(&self) -> f64 {
        self.m as f64 * self.k as f64 * self.s as f64 * self.d_eff
    }
}

/// Predicted against actual runtime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuntimeReport {
    pub predicted: f64,
    pub actual: Option<f64>,
    pub ratio: f64,
    pub loss: f64,
    pub under_predicted: bool,
}

fn check_time(label: &str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "{label} must be a positive number of seconds, got {t}"
        )))
    }
}

/// `C = M·D·K·S / T`.
pub fn clops_from_measurement(m: u64, d: u64, k: u64, s: u64, t: f64) -> Result<f64> {
    if m == 0 || d == 0 || k == 0 || s == 0 {
        return Err(invalid("M, D, K and S must all be positive"));
    }
    check_time("T", t)?;
    Ok(m as f64 * d as f64 * k as f64 * s as f64 / t)
}

/// `T̂ = M·K·S·d_eff / C`.
pub fn predict_runtime_at(job: &JobSpec, clops: f64) -> Result<f64> {
    if !(clops > 0.0 && clops.is_finite()) {
        return Err(invalid(format!("CLOPS must be positive, got {clops}")));
    }
    Ok(job.layer_shots() * clops.recip())
}

// Multiplying by 1/C (rather than dividing) keeps the prediction bit-identical
// to an overhead-free stack whose per-layer-shot time is 1/C.
pub fn predict_runtime(job: &JobSpec, backend: &BackendSpec) -> f64 {
    job.layer_shots() * backend.clops().recip()
}

/// `L(r)`: `r − 1` above one, `1/r − 1` below.
pub fn loss(r: f64) -> f64 {
    if r >= 1.0 {
        r - 1.0
    } else {
        1.0 / r - 1.0
    }
}

pub fn score(predicted: f64, actual: f64) -> Result<RuntimeReport> {
    check_time("predicted runtime", predicted)?;
    check_time("actual runtime", actual)?;
    let ratio = predicted / actual;
    Ok(RuntimeReport {
        predicted,
        actual: Some(actual),
        ratio,
        loss: loss(ratio),
        under_predicted: ratio < 1.0,
    })
}

/// Closest `r′` within `r_tol` of `r` whose loss lies within `l_tol` of `l`,
/// if any. Used to check rounded `(r, L)` pairs for consistency.
pub fn loss_witness(r: f64, l: f64, r_tol: f64, l_tol: f64) -> Option<f64> {
    let lo = (l - l_tol).max(0.0);
    let hi = l + l_tol;
    if hi < 0.0 {
        return None;
    }
    // Preimages of [lo, hi] under each branch of L.
    let branches = [(1.0 / (1.0 + hi), 1.0 / (1.0 + lo)), (1.0 + lo, 1.0 + hi)];
    branches
        .iter()
        .map(|&(a, b)| r.clamp(a, b))
        .filter(|rp| (rp - r).abs() <= r_tol)
        .min_by(|a, b| (a - r).abs().total_cmp(&(b - r).abs()))
}

/// `M = N(N−1)/2`, the number of distinct pairs in a Gram matrix.
pub fn kernel_job_size(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(invalid(format!("dataset size must be ≥ 2, got {n}")));
    }
    n.checked_mul(n - 1)
        .map(|p| p / 2)
        .ok_or_else(|| invalid(format!("dataset size {n} overflows the circuit count")))
}

/// Runtime of the full kernel-matrix job for an `N`-point dataset.
pub fn extrapolate(n: u64, shots: u64, d_eff: f64, clops: f64) -> Result<f64> {
    let job = JobSpec::new(kernel_job_size(n)?, shots, d_eff)?;
    predict_runtime_at(&job, clops)
}

fn check_shot_args(n: u64, eps: f64, c: f64) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("dataset size must be ≥ 2, got {n}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("target error ε must lie in (0, 1], got {eps}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("scaling constant must be positive, got {c}")));
    }
    Ok(())
}

/// Shots per kernel entry for generalization error `eps`:
/// `⌈c·N^(8/3)/ε²⌉`.
pub fn required_shots(n: u64, eps: f64, c: f64) -> Result<u64> {
    check_shot_args(n, eps, c)?;
    let s = (c * (n as f64).powf(8.0 / 3.0) / (eps * eps)).ceil();
    if s >= u64::MAX as f64 {
        return Err(invalid("required shots overflow"));
    }
    Ok(s as u64)
}

/// Total runtime under shot scaling: `c·N^(14/3)·d_eff/(C·ε²)`.
pub fn shot_scaled_runtime(n: u64, eps: f64, c: f64, d_eff: f64, clops: f64) -> Result<f64> {
    check_shot_args(n, eps, c)?;
    if !(clops > 0.0) || !(d_eff > 0.0) {
        return Err(invalid("CLOPS and d_eff must be positive"));
    }
    Ok(c * (n as f64).powf(14.0 / 3.0) * d_eff / (clops * eps * eps))
}

const MINUTE: f64 = 60.0;
const HOUR: f64 = 3600.0;
const DAY: f64 = 86_400.0;
const YEAR: f64 = 365.25 * DAY;

/// Rough human scale, e.g. `"≈ 292 days"` or `"≈ 63 years"`.
pub fn humanize_seconds(s: f64) -> String {
    if !s.is_finite() {
        return "∞".into();
    }
    if s < MINUTE {
        format!("≈ {s:.1} s")
    } else if s < HOUR {
        format!("≈ {:.1} minutes", s / MINUTE)
    } else if s < DAY {
        format!("≈ {:.1} hours", s / HOUR)
    } else if s < 730.0 * DAY {
        format!("≈ {:.0} days", s / DAY)
    } else if s < 10.0 * YEAR {
        format!("≈ {:.1} years", s / YEAR)
    } else {
        format!("≈ {:.0} years", s / YEAR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clops_arithmetic() {
        // 100·4·10·100 / 1000
        assert_eq!(clops_from_measurement(100, 4, 10, 100, 1000.0).unwrap(), 400.0);
        assert!(clops_from_measurement(100, 4, 10, 100, 0.0).is_err());
        let c = clops_from_measurement(100, 6, 10, 100, 261.0).unwrap();
        let job = JobSpec::with_updates(100, 100, 10, 6.0).unwrap();
        assert!((predict_runtime_at(&job, c).unwrap() - 261.0).abs() < 1e-9);
    }

    #[test]
    fn unit_prediction() {
        let job = JobSpec::new(1, 1, 1.0).unwrap();
        assert_eq!(predict_runtime_at(&job, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn loss_branches() {
        assert_eq!(loss(1.0), 0.0);
        assert_eq!(loss(2.0), 1.0);
        assert_eq!(loss(0.5), 1.0);
        assert_eq!(loss(0.25), 3.0);
        assert_eq!(loss(4.0), 3.0);
        assert!((loss(0.1) - 9.0).abs() < 1e-12);
        assert!((loss(1.9) - 0.9).abs() < 1e-12);
        let rep = score(10.0, 20.0).unwrap();
        assert!(rep.under_predicted);
        assert!(score(0.0, 1.0).is_err());
        assert!(score(1.0, -1.0).is_err());
    }

    #[test]
    fn witness() {
        let w = loss_witness(0.04, 24.36, 0.005, 0.05).unwrap();
        assert!((loss(w) - 24.36).abs() <= 0.05 + 1e-12);
        assert!((w - 0.04).abs() <= 0.005);
        assert_eq!(loss_witness(0.5, 1.98, 0.005, 0.05), None);
        assert_eq!(loss_witness(2.0, 1.0, 0.0, 0.0), Some(2.0));
    }

    #[test]
    fn pair_counts() {
        assert_eq!(kernel_job_size(2).unwrap(), 1);
        assert_eq!(kernel_job_size(2513).unwrap(), 3_156_328);
        assert_eq!(kernel_job_size(70_571).unwrap(), 2_490_097_735);
        assert!(kernel_job_size(1).is_err());
    }

    #[test]
    fn shot_scaling() {
        assert_eq!(required_shots(2, 1.0, 1.0).unwrap(), 7);
        assert!(required_shots(2, 0.0, 1.0).is_err());
        assert!(required_shots(2, 1.5, 1.0).is_err());
        let a = shot_scaled_runtime(10, 0.5, 1.0, 2.0, 1000.0).unwrap();
        let b = shot_scaled_runtime(20, 0.5, 1.0, 2.0, 1000.0).unwrap();
        assert!((b / a - 2f64.powf(14.0 / 3.0)).abs() < 1e-9);
    }

    #[test]
    fn humanized() {
        assert_eq!(humanize_seconds(2.525e7), "≈ 292 days");
        assert_eq!(humanize_seconds(1.99e9), "≈ 63 years");
        assert_eq!(humanize_seconds(26.1), "≈ 26.1 s");
    }

    #[test]
    fn job_json() {
        let j: JobSpec = serde_json::from_str(r#"{"M": 10, "S": 100, "d_eff": 2.5}"#).unwrap();
        assert_eq!(j.updates(), 1);
        assert!(serde_json::from_str::<JobSpec>(r#"{"M": 0, "S": 100, "d_eff": 2.5}"#).is_err());
    }
}
