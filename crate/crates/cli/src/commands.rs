use std::path::{Path, PathBuf};

use qkrt_core::deff::SampleCounts;
use qkrt_core::seed::{derive_seed, derived_rng, domain};
use qkrt_core::{
    effective_layers, effective_layers_for, extrapolate, fit_params_with, humanize_seconds, kernel_job_size,
    predict_runtime, predict_runtime_at, qv_circuit, required_shots, score, sweep, transpiled_depth, BackendRegistry,
    BackendSpec, CircuitFamily, CouplingMap, EntanglementStrategy, FeatureVector, FitOptions, JobSpec, KernelFamily,
    KernelMode, Simulator, StackTimingParams, SweepJob,
};
use serde::{Deserialize, Serialize};

use crate::config::{pick, pick_list, BackendRef, FamilyConfig, RunConfig};
use crate::error::{CliError, Result};
use crate::records::{load_runtime_records, parse_runtime_records};
use crate::{
    BackendsAction, CircuitKind, Cli, Command, DeffArgs, ExtrapolateArgs, FamilyArgs, FitArgs, GenArgs, Output,
    PredictArgs, SampleArgs, ScoreArgs, SimulateArgs, SweepArgs,
};

/// Resolved global settings.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    pub registry: BackendRegistry,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Context {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let config = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let registry = match pick(cli.registry.clone(), &config.registry) {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| CliError::io(&p, e))?;
                BackendRegistry::from_json(&text)?
            }
            None => BackendRegistry::builtin(),
        };
        Ok(Context {
            seed: pick(cli.seed, &config.seed).unwrap_or(0),
            out: pick(cli.out.clone(), &config.out),
            registry,
            config,
        })
    }

    fn backend(&self, flag: &Option<String>) -> Result<Option<BackendSpec>> {
        let name = match (flag, &self.config.backend) {
            (Some(name), _) | (None, Some(BackendRef::Name(name))) => name,
            (None, Some(BackendRef::Inline(spec))) => return Ok(Some(spec.clone())),
            (None, None) => return Ok(None),
        };
        Ok(Some(self.registry.get(name)?.clone()))
    }

    fn has_family(&self, args: &FamilyArgs) -> bool {
        args.n.is_some() || args.descriptor.is_some() || self.config.family.n.is_some()
    }

    fn require_backend(&self, flag: &Option<String>) -> Result<BackendSpec> {
        self.backend(flag)?
            .ok_or_else(|| CliError::invalid("a backend is required (--backend or config `backend`)"))
    }

    fn family(&self, args: &FamilyArgs) -> Result<KernelFamily> {
        let desc = args
            .descriptor
            .as_deref()
            .map(FamilyConfig::parse)
            .transpose()?
            .unwrap_or_default();
        let cfg = &self.config.family;
        let n = pick(args.n, &desc.n)
            .or(cfg.n)
            .ok_or_else(|| CliError::invalid("kernel family needs --n"))?;
        let reps = pick(args.reps, &desc.reps).or(cfg.reps).unwrap_or(1);
        let ent = args
            .entanglement
            .map(EntanglementStrategy::from)
            .or(desc.entanglement)
            .or(cfg.entanglement)
            .unwrap_or(EntanglementStrategy::Linear);
        Ok(KernelFamily::new(n, reps, ent)?)
    }

    fn samples(&self, args: &SampleArgs) -> SampleCounts {
        let d = SampleCounts::default();
        SampleCounts {
            kernel: pick(args.kernel_samples, &self.config.kernel_samples).unwrap_or(d.kernel),
            qv: pick(args.qv_samples, &self.config.qv_samples).unwrap_or(d.qv),
        }
    }
}

pub fn run(ctx: &Context, command: &Command) -> Result<Output> {
    match command {
        Command::Predict(a) => predict(ctx, a),
        Command::Score(a) => score_cmd(ctx, a),
        Command::Deff(a) => deff(ctx, a),
        Command::GenCircuits(a) => gen_circuits(ctx, a),
        Command::SimulateKernel(a) => simulate_kernel(ctx, a),
        Command::Extrapolate(a) => extrapolate_cmd(ctx, a),
        Command::Sweep(a) => sweep_cmd(ctx, a),
        Command::Fit(a) => fit(ctx, a),
        Command::Backends { action } => backends(ctx, action),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(!rows.is_empty())
        .from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(header).map_err(|e| CliError::io("<csv>", e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| CliError::io("<csv>", e))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io("<csv>", e))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `line:N`, `ring:N`, `all:N`, `heavy-hex:N`, or a path to a JSON map.
pub fn parse_map(spec: &str) -> Result<CouplingMap> {
    if let Some((kind, n)) = spec.split_once(':') {
        if let Ok(n) = n.parse::<usize>() {
            if n == 0 {
                return Err(CliError::invalid("coupling map needs at least one qubit"));
            }
            return match kind {
                "line" => Ok(CouplingMap::line(n)),
                "ring" => Ok(CouplingMap::ring(n)),
                "all" | "all-to-all" => Ok(CouplingMap::all_to_all(n)),
                "heavy-hex" => Ok(CouplingMap::heavy_hex_like(n)),
                other => Err(CliError::invalid(format!("unknown map kind `{other}`"))),
            };
        }
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("coupling map {spec}: {e}")))
}

#[derive(Serialize)]
struct Prediction {
    backend: Option<String>,
    clops: f64,
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "S")]
    s: u64,
    #[serde(rename = "K")]
    k: u64,
    d_eff: f64,
    d_eff_source: &'static str,
    predicted_seconds: f64,
    human: String,
}

fn predict(ctx: &Context, a: &PredictArgs) -> Result<Output> {
    let mut backend = ctx.backend(&a.backend)?;
    let clops = pick(a.clops, &ctx.config.clops);
    if let (Some(b), Some(c)) = (&backend, clops) {
        backend = Some(b.with_clops(c)?);
    }
    let clops = match (&backend, clops) {
        (Some(b), _) => b.clops(),
        (None, Some(c)) => c,
        (None, None) => return Err(CliError::invalid("need --backend or --clops")),
    };
    let m = a.m.ok_or_else(|| CliError::invalid("--M is required"))?;
    let s = pick(a.s, &ctx.config.shots).ok_or_else(|| CliError::invalid("--S is required"))?;

    let (d_eff, source) = if let Some(d) = pick(a.deff, &ctx.config.deff) {
        (d, "given")
    } else if ctx.has_family(&a.family) {
        let b = backend
            .as_ref()
            .ok_or_else(|| CliError::invalid("estimating d_eff needs --backend for its coupling map"))?;
        let est = effective_layers(
            &ctx.family(&a.family)?,
            b.coupling_map(),
            ctx.samples(&a.samples),
            ctx.seed,
        )?;
        (est.d_eff, "estimated")
    } else if let Some(b) = &backend {
        (b.qv_layers() as f64, "qv_layers")
    } else {
        return Err(CliError::invalid("need --deff, a kernel family, or a backend"));
    };

    let job = JobSpec::with_updates(m, s, a.k, d_eff)?;
    let t = predict_runtime_at(&job, clops)?;
    let name = backend.as_ref().map(|b| b.name().to_owned());
    let human = humanize_seconds(t);
    let summary = format!(
        "{}: T̂ = {t:.1} s ({human}) for M={m}, S={s}, K={}, d_eff={d_eff:.3}, C={clops}",
        name.as_deref().unwrap_or("inline"),
        a.k
    );
    Ok(Output {
        artifact: to_json(&Prediction {
            backend: name,
            clops,
            m,
            s,
            k: a.k,
            d_eff,
            d_eff_source: source,
            predicted_seconds: t,
            human,
        }),
        summary,
    })
}

#[derive(Deserialize)]
struct DirectRow {
    #[serde(default)]
    backend: Option<String>,
    #[serde(rename = "T_pred")]
    t_pred: f64,
    #[serde(rename = "T_seconds")]
    t_seconds: f64,
}

#[derive(Serialize)]
struct ScoreRow {
    backend: String,
    #[serde(rename = "T_pred")]
    t_pred: f64,
    #[serde(rename = "T")]
    t: f64,
    r: f64,
    #[serde(rename = "L")]
    l: f64,
    under_predicted: bool,
}

fn score_cmd(ctx: &Context, a: &ScoreArgs) -> Result<Output> {
    let path = &a.input;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let direct = text
        .lines()
        .next()
        .is_some_and(|h| h.split(',').any(|c| c.trim() == "T_pred"));
    let pairs: Vec<(String, f64, f64, u64)> = if direct {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        rdr.deserialize::<DirectRow>()
            .enumerate()
            .map(|(i, r)| {
                let line = i as u64 + 2;
                r.map(|r| (r.backend.unwrap_or_default(), r.t_pred, r.t_seconds, line))
                    .map_err(|e| CliError::MalformedCsv {
                        path: path.display().to_string(),
                        line,
                        message: e.to_string(),
                    })
            })
            .collect::<Result<_>>()?
    } else {
        parse_runtime_records(&text, path)?
            .into_iter()
            .enumerate()
            .map(|(i, rec)| {
                let b = ctx.registry.get(&rec.backend)?;
                Ok((rec.backend, predict_runtime(&rec.job, b), rec.t_seconds, i as u64 + 2))
            })
            .collect::<Result<_>>()?
    };
    let rows = pairs
        .into_iter()
        .map(|(backend, t_pred, t, line)| {
            let rep = score(t_pred, t).map_err(|e| CliError::MalformedCsv {
                path: path.display().to_string(),
                line,
                message: e.to_string(),
            })?;
            Ok(ScoreRow {
                backend,
                t_pred,
                t,
                r: rep.ratio,
                l: rep.loss,
                under_predicted: rep.under_predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let under = rows.iter().filter(|r| r.under_predicted).count();
    let summary = if rows.is_empty() {
        "scored 0 rows".to_owned()
    } else {
        let mean_l = rows.iter().map(|r| r.l).sum::<f64>() / rows.len() as f64;
        format!(
            "scored {} rows: mean L = {mean_l:.3}, {under} under-predicted",
            rows.len()
        )
    };
    Ok(Output {
        artifact: to_csv(&rows, &["backend", "T_pred", "T", "r", "L", "under_predicted"])?,
        summary,
    })
}

fn map_for(ctx: &Context, backend: &Option<String>, map: &Option<String>) -> Result<Option<CouplingMap>> {
    if let Some(spec) = map {
        return parse_map(spec).map(Some);
    }
    Ok(ctx.backend(backend)?.map(|b| b.coupling_map().clone()))
}

fn deff(ctx: &Context, a: &DeffArgs) -> Result<Output> {
    let map = map_for(ctx, &a.backend, &a.map)?.ok_or_else(|| CliError::invalid("need --backend or --map"))?;
    let family = match a.qv_layers {
        Some(layers) => CircuitFamily::QuantumVolume { layers },
        None => CircuitFamily::Kernel(ctx.family(&a.family)?),
    };
    let est = effective_layers_for(&family, &map, ctx.samples(&a.samples), ctx.seed)?;
    let what = match family {
        CircuitFamily::Kernel(f) => f.to_string(),
        CircuitFamily::QuantumVolume { layers } => format!("QV({layers} layers)"),
    };
    Ok(Output {
        artifact: to_json(&est),
        summary: format!(
            "d_eff = {:.4} (v = {}) for {what} on a {}-qubit map",
            est.d_eff,
            est.v,
            map.num_qubits()
        ),
    })
}

#[derive(Serialize)]
struct CircuitRow {
    index: usize,
    kind: &'static str,
    width: usize,
    gates: usize,
    two_qubit: usize,
    depth: usize,
    transpiled_depth: Option<usize>,
}

fn gen_circuits(ctx: &Context, a: &GenArgs) -> Result<Output> {
    if a.count == 0 {
        return Err(CliError::invalid("--count must be ≥ 1"));
    }
    let circuits = match a.kind {
        CircuitKind::Kernel => qkrt_core::deff::sample_kernel_circuits(&ctx.family(&a.family)?, a.count, ctx.seed)?,
        CircuitKind::Qv => {
            let q = ctx.family(&a.family)?.n();
            let layers = a.layers.unwrap_or(q);
            (0..a.count)
                .map(|i| qv_circuit(q, layers, derive_seed(ctx.seed, domain::QV_SAMPLE, i as u64)))
                .collect::<qkrt_core::Result<Vec<_>>>()?
        }
    };
    let map = map_for(ctx, &a.backend, &a.map)?;
    let kind = match a.kind {
        CircuitKind::Kernel => "kernel",
        CircuitKind::Qv => "qv",
    };
    if let Some(dir) = &a.circuits_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (i, c) in circuits.iter().enumerate() {
            let p = dir.join(format!("{kind}_{i:04}.txt"));
            std::fs::write(&p, c.to_text()).map_err(|e| CliError::io(&p, e))?;
        }
    }
    let rows = circuits
        .iter()
        .enumerate()
        .map(|(index, c)| {
            Ok(CircuitRow {
                index,
                kind,
                width: c.width(),
                gates: c.len(),
                two_qubit: c.two_qubit_count(),
                depth: c.depth(),
                transpiled_depth: map.as_ref().map(|m| transpiled_depth(c, m)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Output {
        artifact: to_csv(&rows, &[])?,
        summary: format!("generated {} {kind} circuits", rows.len()),
    })
}

fn load_features(path: &Path, n: usize) -> Result<Vec<FeatureVector>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let line = i as u64 + 2;
            let bad = |message: String| CliError::MalformedCsv {
                path: path.display().to_string(),
                line,
                message,
            };
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            if rec.len() != n {
                return Err(bad(format!("expected {n} features, got {}", rec.len())));
            }
            rec.iter()
                .map(|f| f.parse::<f64>().map_err(|e| bad(format!("`{f}`: {e}"))))
                .collect::<Result<Vec<_>>>()
                .map(FeatureVector)
        })
        .collect()
}

fn simulate_kernel(ctx: &Context, a: &SimulateArgs) -> Result<Output> {
    let fam = ctx.family(&a.family)?;
    let data = match &a.data {
        Some(p) => load_features(p, fam.n())?,
        None => {
            let points = a.points.unwrap_or(8);
            (0..points)
                .map(|i| fam.random_features(&mut derived_rng(ctx.seed, domain::DATASET, i as u64)))
                .collect()
        }
    };
    let mode = match pick(a.shots, &ctx.config.shots) {
        Some(0) => return Err(CliError::invalid("--shots must be ≥ 1")),
        Some(s) => KernelMode::Shots(s),
        None => KernelMode::Exact,
    };
    let k = Simulator::with_cap(a.qubit_cap).kernel_matrix(&fam, &data, mode, ctx.seed)?;
    let sum = k.summary();
    if let Some(path) = &a.summary_out {
        std::fs::write(path, to_json(&sum)).map_err(|e| CliError::io(path, e))?;
    }
    Ok(Output {
        artifact: k.to_csv(),
        summary: format!(
            "{}×{} kernel matrix for {fam} ({} evaluations), min eigenvalue {:.3e}{}",
            sum.size,
            sum.size,
            sum.evaluations,
            sum.min_eigenvalue,
            if sum.psd { "" } else { " (not PSD)" }
        ),
    })
}

#[derive(Serialize)]
struct ExtrapolationRow {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "C")]
    c: f64,
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "S")]
    s: u64,
    d_eff: f64,
    seconds: f64,
    human: String,
}

fn extrapolate_cmd(ctx: &Context, a: &ExtrapolateArgs) -> Result<Output> {
    if a.n.is_empty() {
        return Err(CliError::invalid("--N needs at least one dataset size"));
    }
    let mut clops = a.clops.clone();
    if clops.is_empty() {
        if let Some(c) = ctx.config.clops {
            clops.push(c);
        } else if let Some(b) = ctx.backend(&a.backend)? {
            clops.push(b.clops());
        } else {
            return Err(CliError::invalid("need --clops or --backend"));
        }
    }
    let d_eff = pick(a.deff, &ctx.config.deff).ok_or_else(|| CliError::invalid("--deff is required"))?;
    let fixed_s = pick(a.s, &ctx.config.shots);
    let mut rows = Vec::new();
    for &c in &clops {
        for &n in &a.n {
            let s = match (a.eps, fixed_s) {
                (Some(eps), _) => required_shots(n, eps, a.shot_constant)?,
                (None, Some(s)) => s,
                (None, None) => return Err(CliError::invalid("need --S or --eps")),
            };
            let seconds = extrapolate(n, s, d_eff, c)?;
            rows.push(ExtrapolationRow {
                n,
                c,
                m: kernel_job_size(n)?,
                s,
                d_eff,
                seconds,
                human: humanize_seconds(seconds),
            });
        }
    }
    let summary = match rows.as_slice() {
        [r] => format!("N={} at C={}: {:.4e} s ({})", r.n, r.c, r.seconds, r.human),
        rs => format!("{} extrapolations over {} CLOPS values", rs.len(), clops.len()),
    };
    Ok(Output {
        artifact: to_csv(&rows, &[])?,
        summary,
    })
}

fn load_params(path: &Path) -> Result<StackTimingParams> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("params {}: {e}", path.display())))
}

fn sweep_cmd(ctx: &Context, a: &SweepArgs) -> Result<Output> {
    let backend = ctx.require_backend(&a.backend)?;
    let params_path =
        pick(a.params.clone(), &ctx.config.params).ok_or_else(|| CliError::invalid("--params is required"))?;
    let params = load_params(&params_path)?;
    let grid = &ctx.config.grid;
    let ms = pick_list(a.m.clone(), &grid.m);
    let ss = pick_list(a.s.clone(), &grid.s);
    let aspects = pick_list(a.a.clone(), &grid.a);
    if ms.is_empty() || ss.is_empty() {
        return Err(CliError::invalid("sweep needs at least one --M and one --S"));
    }

    // (aspect ratio, d_eff) per grid plane
    let planes: Vec<(Option<f64>, f64)> = if aspects.is_empty() {
        let d = pick(a.deff, &ctx.config.deff).unwrap_or(backend.qv_layers() as f64);
        vec![(None, d)]
    } else {
        let base = ctx.family(&a.family)?;
        aspects
            .iter()
            .map(|&ar| {
                let reps = ar * base.n() as f64 / 2.0;
                if reps < 1.0 || (reps - reps.round()).abs() > 1e-9 {
                    return Err(CliError::invalid(format!(
                        "aspect ratio {ar} with n={} needs integer reps ≥ 1, got {reps}",
                        base.n()
                    )));
                }
                let fam = KernelFamily::new(base.n(), reps.round() as usize, base.entanglement())?;
                let est = effective_layers(&fam, backend.coupling_map(), ctx.samples(&a.samples), ctx.seed)?;
                Ok((Some(ar), est.d_eff))
            })
            .collect::<Result<_>>()?
    };
    let mut jobs = Vec::new();
    for &(ar, d_eff) in &planes {
        for &m in &ms {
            for &s in &ss {
                jobs.push(SweepJob {
                    job: JobSpec::new(m, s, d_eff)?,
                    aspect_ratio: ar,
                });
            }
        }
    }
    let rows = sweep(&jobs, &params, &backend, ctx.seed);
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        (lo.min(r.r), hi.max(r.r))
    });
    Ok(Output {
        artifact: to_csv(&rows, &[])?,
        summary: format!("{} jobs on {}: r in [{lo:.3}, {hi:.3}]", rows.len(), backend.name()),
    })
}

fn fit(_ctx: &Context, a: &FitArgs) -> Result<Output> {
    let records = load_runtime_records(&a.input)?;
    let obs: Vec<(JobSpec, f64)> = records
        .iter()
        .filter(|r| a.backend.as_ref().is_none_or(|b| &r.backend == b))
        .map(|r| (r.job, r.t_seconds))
        .collect();
    let p = fit_params_with(
        &obs,
        FitOptions {
            fixed_t_job: a.fix_t_job,
        },
    )?;
    Ok(Output {
        artifact: to_json(&p),
        summary: format!(
            "fitted {} records: t_job={:.4} s, t_circ={:.4} s, t_layer_shot={:.4e} s, jitter={:.3}",
            obs.len(),
            p.t_job(),
            p.t_circ(),
            p.t_layer_shot(),
            p.jitter()
        ),
    })
}

#[derive(Serialize)]
struct BackendRow<'a> {
    name: &'a str,
    num_qubits: usize,
    quantum_volume: u64,
    qv_layers: usize,
    clops: f64,
    edges: usize,
}

fn backends(ctx: &Context, action: &BackendsAction) -> Result<Output> {
    let reg = &ctx.registry;
    match action {
        BackendsAction::List => {
            let rows: Vec<_> = reg
                .backends()
                .iter()
                .map(|b| BackendRow {
                    name: b.name(),
                    num_qubits: b.num_qubits(),
                    quantum_volume: b.quantum_volume(),
                    qv_layers: b.qv_layers(),
                    clops: b.clops(),
                    edges: b.coupling_map().edges().count(),
                })
                .collect();
            Ok(Output {
                artifact: to_csv(&rows, &[])?,
                summary: format!("{} backends", rows.len()),
            })
        }
        BackendsAction::Export => Ok(Output {
            artifact: reg.to_json(),
            summary: format!("exported {} backends", reg.backends().len()),
        }),
    }
}
