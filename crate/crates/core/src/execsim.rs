//! Synthetic execution stack: an affine runtime with per-job and per-circuit
//! overheads plus multiplicative jitter. Produces the "actual" runtimes the
//! model is scored against.
//!
//! ```text
//! T = (t_job + M·(t_circ + K·S·d_eff·t_layer_shot)) · (1 + η),   η ~ N(0, σ) | η > −0.9
//! ```

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{loss, predict_runtime, BackendSpec, JobSpec};
use crate::seed::{derived_rng, domain};

const PARAM_NAMES: [&str; 3] = ["t_job", "t_circ", "t_layer_shot"];
const ETA_FLOOR: f64 = -0.9;
const CONDITION_LIMIT: f64 = 1e10;

#[derive(Deserialize)]
struct RawParams {
    t_job: f64,
    t_circ: f64,
    t_layer_shot: f64,
    #[serde(default)]
    jitter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct StackTimingParams {
    t_job: f64,
    t_circ: f64,
    t_layer_shot: f64,
    jitter: f64,
}

impl TryFrom<RawParams> for StackTimingParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        StackTimingParams::new(r.t_job, r.t_circ, r.t_layer_shot, r.jitter)
    }
}

impl StackTimingParams {
    pub fn new(t_job: f64, t_circ: f64, t_layer_shot: f64, jitter: f64) -> Result<Self> {
        for (name, v) in PARAM_NAMES.iter().zip([t_job, t_circ, t_layer_shot]) {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be a nonnegative number, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&jitter) {
            return Err(invalid(format!("jitter must lie in [0, 1), got {jitter}")));
        }
        Ok(StackTimingParams {
            t_job,
            t_circ,
            t_layer_shot,
            jitter,
        })
    }

    /// The model's own assumptions: no overheads, no noise, `1/C` per
    /// layer-shot.
    pub fn ideal(clops: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 1.0 / clops, 0.0)
    }

    pub fn t_job(&self) -> f64 {
        self.t_job
    }

    pub fn t_circ(&self) -> f64 {
        self.t_circ
    }

    pub fn t_layer_shot(&self) -> f64 {
        self.t_layer_shot
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn with_jitter(&self, jitter: f64) -> Result<Self> {
        Self::new(self.t_job, self.t_circ, self.t_layer_shot, jitter)
    }

    /// Noise-free runtime.
    pub fn expected_runtime(&self, job: &JobSpec) -> f64 {
        self.t_job + job.circuits() as f64 * self.t_circ + job.layer_shots() * self.t_layer_shot
    }
}

fn draw_eta<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    let normal = Normal::new(0.0, sigma).expect("σ is finite and positive");
    loop {
        let eta = normal.sample(rng);
        if eta > ETA_FLOOR {
            return eta;
        }
    }
}

/// One synthetic runtime. Deterministic in `seed`; exactly the expected
/// runtime when jitter is zero.
pub fn simulate_job_runtime(job: &JobSpec, params: &StackTimingParams, seed: u64) -> f64 {
    let mut rng = derived_rng(seed, domain::JITTER, 0);
    params.expected_runtime(job) * (1.0 + draw_eta(params.jitter, &mut rng))
}

/// Options for [`fit_params_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FitOptions {
    /// Pin the per-job overhead instead of fitting it. Needed when every
    /// observation has the same `M`, which confounds `t_job` with `t_circ`.
    pub fixed_t_job: Option<f64>,
}

fn design_row(job: &JobSpec) -> [f64; 3] {
    [1.0, job.circuits() as f64, job.layer_shots()]
}

/// Relative least squares over the `free` columns. Rows are weighted by
/// `1/T` so each observation counts by its relative error.
fn solve(rows: &[[f64; 3]], targets: &[f64], weights: &[f64], free: &[usize]) -> Result<Vec<f64>> {
    let n = rows.len();
    let p = free.len();
    let mut x = DMatrix::<f64>::zeros(n, p);
    let mut y = DVector::<f64>::zeros(n);
    for i in 0..n {
        for (j, &col) in free.iter().enumerate() {
            x[(i, j)] = rows[i][col] * weights[i];
        }
        y[i] = targets[i] * weights[i];
    }
    // Scale columns to unit max so the condition number reflects geometry,
    // not units.
    let scales: Vec<f64> = (0..p).map(|j| x.column(j).amax().max(f64::MIN_POSITIVE)).collect();
    for (j, s) in scales.iter().enumerate() {
        x.column_mut(j).unscale_mut(*s);
    }
    let svd = x.svd(true, true);
    let sv = &svd.singular_values;
    let (imax, smax) = sv.argmax();
    let (imin, smin) = sv.argmin();
    let _ = imax;
    if smin * CONDITION_LIMIT < smax {
        let v_t = svd.v_t.as_ref().expect("requested V");
        let null = v_t.row(imin);
        let peak = null.amax();
        let names: Vec<&str> = free
            .iter()
            .enumerate()
            .filter(|(j, _)| null[*j].abs() >= 0.1 * peak)
            .map(|(_, &col)| PARAM_NAMES[col])
            .collect();
        return Err(Error::Unidentifiable(names.join(" and ")));
    }
    let beta = svd
        .solve(&y, 0.0)
        .map_err(|e| invalid(format!("least squares failed: {e}")))?;
    Ok(beta.iter().zip(&scales).map(|(b, s)| b / s).collect())
}

/// Fit `(t_job, t_circ, t_layer_shot)` and the jitter to observed runtimes.
pub fn fit_params(observations: &[(JobSpec, f64)]) -> Result<StackTimingParams> {
    fit_params_with(observations, FitOptions::default())
}

/// Like [`fit_params`]. Parameters that come out negative are pinned to zero
/// and the rest refitted. Jitter is the RMS relative residual, capped below
/// one.
pub fn fit_params_with(observations: &[(JobSpec, f64)], opts: FitOptions) -> Result<StackTimingParams> {
    const NEEDED: usize = 3;
    if observations.len() < NEEDED {
        return Err(Error::Underdetermined {
            got: observations.len(),
            needed: NEEDED,
        });
    }
    for (i, (_, t)) in observations.iter().enumerate() {
        if !(*t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("observation {i}: runtime must be positive, got {t}")));
        }
    }
    if let Some(tj) = opts.fixed_t_job {
        if !(tj >= 0.0 && tj.is_finite()) {
            return Err(invalid(format!("fixed t_job must be nonnegative, got {tj}")));
        }
    }
    let rows: Vec<[f64; 3]> = observations.iter().map(|(j, _)| design_row(j)).collect();
    let offset = opts.fixed_t_job.unwrap_or(0.0);
    let targets: Vec<f64> = observations.iter().map(|(_, t)| t - offset).collect();
    let weights: Vec<f64> = observations.iter().map(|(_, t)| 1.0 / t).collect();

    let mut free: Vec<usize> = if opts.fixed_t_job.is_some() {
        vec![1, 2]
    } else {
        vec![0, 1, 2]
    };
    let mut theta = [offset, 0.0, 0.0];
    loop {
        let beta = solve(&rows, &targets, &weights, &free)?;
        let worst = beta
            .iter()
            .enumerate()
            .filter(|(_, b)| **b < 0.0)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(j, _)| j);
        match worst {
            Some(j) if free.len() > 1 => {
                log::info!("fit: {} came out negative; pinning it to 0", PARAM_NAMES[free[j]]);
                free.remove(j);
            }
            Some(j) => {
                return Err(invalid(format!(
                    "no nonnegative fit exists for {}",
                    PARAM_NAMES[free[j]]
                )))
            }
            None => {
                for (&col, b) in free.iter().zip(beta) {
                    theta[col] = b;
                }
                for (col, t) in theta.iter_mut().enumerate() {
                    if !free.contains(&col) && !(col == 0 && opts.fixed_t_job.is_some()) {
                        *t = 0.0;
                    }
                }
                break;
            }
        }
    }

    let dof = observations.len().saturating_sub(free.len());
    let jitter = if dof == 0 {
        0.0
    } else {
        let ss: f64 = observations
            .iter()
            .zip(&rows)
            .map(|((_, t), row)| {
                let fit: f64 = row.iter().zip(&theta).map(|(a, b)| a * b).sum();
                (t / fit - 1.0).powi(2)
            })
            .sum();
        (ss / dof as f64).sqrt()
    };
    let jitter = if jitter >= 1.0 {
        log::warn!("fit: relative residuals ({jitter:.3}) exceed the jitter model; capping at 0.99");
        0.99
    } else {
        jitter
    };
    StackTimingParams::new(theta[0], theta[1], theta[2], jitter)
}

/// A job to run through the sweep, optionally tagged with its circuit
/// aspect ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepJob {
    pub job: JobSpec,
    pub aspect_ratio: Option<f64>,
}

impl From<JobSpec> for SweepJob {
    fn from(job: JobSpec) -> Self {
        SweepJob {
            job,
            aspect_ratio: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub backend: String,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "S")]
    pub s: u64,
    pub a: Option<f64>,
    pub d_eff: f64,
    #[serde(rename = "T_pred")]
    pub t_pred: f64,
    #[serde(rename = "T_sim")]
    pub t_sim: f64,
    pub r: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

/// Predicted vs simulated runtime for each job. Job `i` draws its jitter from
/// a stream derived from `(seed, i)`.
pub fn sweep(jobs: &[SweepJob], params: &StackTimingParams, backend: &BackendSpec, seed: u64) -> Vec<SweepRow> {
    jobs.par_iter()
        .enumerate()
        .map(|(i, sj)| {
            let mut rng = derived_rng(seed, domain::JITTER, i as u64 + 1);
            let t_sim = params.expected_runtime(&sj.job) * (1.0 + draw_eta(params.jitter, &mut rng));
            let t_pred = predict_runtime(&sj.job, backend);
            let r = t_pred / t_sim;
            SweepRow {
                backend: backend.name().to_owned(),
                m: sj.job.circuits(),
                s: sj.job.shots(),
                a: sj.aspect_ratio,
                d_eff: sj.job.d_eff(),
                t_pred,
                t_sim,
                r,
                l: loss(r),
            }
        })
        .collect()
}
