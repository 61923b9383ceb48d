use std::time::Instant;

use rayon::prelude::*;

use super::config::{worker_count, ExperimentConfig, MethodSpec, Normalization};
use super::record::{ResultRecord, VERSION};
use crate::dynamics::{
    measure, optimize_time_with, qz_optimize, time_sweep, KrylovOptions, Metrics, OptimizeOptions, QzCoupling, QzFamily,
    TimeGrid,
};
use crate::error::{Error, Result};
use crate::instances::{diagonal_spectrum, Graph, Instance};
use crate::locality::{LocalSystem, SubgraphSpec};
use crate::pauli::{build_h1_general, build_hf, normalization_factor};
use crate::qaoa::{qaoa_optimize, qaoa_state};
use crate::ringfermion::ring_optimize_with;
use crate::transfer::{lpa_metrics, LpaReport};

/// Method tag of the time-limited `H₁` rerun.
pub const CONSTRAINED_TAG: &str = "h1-constrained";

struct Outcome {
    t_star: f64,
    ratio: f64,
    pgs: Option<f64>,
    sigma: Option<f64>,
    order: String,
    params: String,
    grid: (f64, f64, usize),
    normalized: bool,
    lpa: Option<LpaReport>,
}

impl Outcome {
    fn new(t_star: f64, ratio: f64, grid: &TimeGrid, normalized: bool) -> Self {
        Self {
            t_star,
            ratio,
            pgs: None,
            sigma: None,
            order: String::new(),
            params: String::new(),
            grid: (grid.lo, grid.hi, grid.divisions),
            normalized,
            lpa: None,
        }
    }
}

fn optimize_options(cfg: &ExperimentConfig) -> OptimizeOptions {
    if cfg.refine {
        OptimizeOptions::default()
    } else {
        OptimizeOptions::grid_only()
    }
}

fn is_ring(g: &Graph) -> bool {
    g.n() >= 3
        && g.edges().len() == g.n()
        && (0..g.n()).all(|a| g.degree(a) == 2)
        && g.edges().iter().all(|e| e.w == 1.0)
        && g.biases().iter().all(|&h| h == 0.0)
        && g.is_connected()
}

fn evaluate(cfg: &ExperimentConfig, method: &MethodSpec, grid: &TimeGrid, inst: &Instance) -> Result<Outcome> {
    let g = &inst.graph;
    let eq8 = cfg.normalize.is_on();
    let opts = optimize_options(cfg);
    match method {
        MethodSpec::H1 { power } => {
            let spec = diagonal_spectrum(g)?;
            let mut h = build_h1_general(g, *power)?;
            if eq8 {
                h = h.scaled(normalization_factor(&h, g.n())?);
            }
            let r = optimize_time_with(&h, &spec, grid, cfg.objective, &opts)?;
            let mut out = Outcome::new(r.t_star, r.metrics.ratio, grid, eq8);
            out.pgs = Some(r.metrics.pgs);
            out.sigma = r.metrics.sigma;
            out.params = format!("power={power};constrained={}", r.constrained);
            Ok(out)
        }
        MethodSpec::Qz { order, coupling } => {
            let spec = diagonal_spectrum(g)?;
            let r = qz_optimize(g, &spec, *order, *coupling, grid, cfg.objective, &opts)?;
            let normalized = eq8 || *coupling == QzCoupling::Bare;
            let t = if normalized { r.normalized_time } else { r.optimum.t_star };
            let mut out = Outcome::new(t, r.optimum.metrics.ratio, grid, normalized);
            out.pgs = Some(r.optimum.metrics.pgs);
            out.sigma = r.optimum.metrics.sigma;
            out.order = order.to_string();
            let coupling = match coupling {
                QzCoupling::Corrected => "corrected",
                QzCoupling::Bare => "bare",
            };
            out.params = format!("T={};coupling={coupling}", r.optimum.t_star);
            Ok(out)
        }
        MethodSpec::Qaoa { p, divisions } => {
            let spec = diagonal_spectrum(g)?;
            let r = qaoa_optimize(g, &spec, *p, *divisions, cfg.refine)?;
            let t = if eq8 { r.normalized_time(normalization_factor(&build_hf(g), g.n())?) } else { r.time };
            let m = measure(&qaoa_state(g, &r.gammas, &r.betas)?, &spec)?;
            let qgrid = TimeGrid { lo: 0.0, hi: 2.0 * std::f64::consts::PI, divisions: *divisions };
            let mut out = Outcome::new(t, r.ratio, &qgrid, eq8);
            out.pgs = Some(m.pgs);
            out.sigma = m.sigma;
            out.order = p.to_string();
            let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            out.params = format!(
                "gammas={};betas={};cut_fraction={};degenerate={}",
                join(&r.gammas),
                join(&r.betas),
                r.cut_fraction,
                r.degenerate
            );
            Ok(out)
        }
        MethodSpec::RingAnalytic => {
            if !is_ring(g) {
                return Err(Error::InvalidInstance(format!("{} is not an unweighted ring", inst.id)));
            }
            let r = ring_optimize_with(g.n(), grid, cfg.objective, &opts)?;
            // Σc² of ring H₁ is 2n, so the normalized time is √2 longer.
            let t = if eq8 { r.t_star * std::f64::consts::SQRT_2 } else { r.t_star };
            let mut out = Outcome::new(t, r.metrics.ratio, grid, eq8);
            out.pgs = Some(r.metrics.pgs);
            out.params = format!("constrained={}", r.constrained);
            Ok(out)
        }
        MethodSpec::Lrb { degree, t, quad_step } => {
            let s = SubgraphSpec::from_instance(inst, *degree)?;
            let r = LocalSystem::new(&s)?.cut_bound(*t, *quad_step)?;
            let mut out = Outcome::new(*t, r.cut_value, grid, false);
            out.params =
                format!("local={};epsilon={};upper={};quad_step={quad_step}", r.local_estimate, r.epsilon, r.upper_estimate);
            Ok(out)
        }
        MethodSpec::Lpa { function } => {
            let spec = diagonal_spectrum(g)?;
            let r = lpa_metrics(&spec, *function)?;
            let mut out = Outcome::new(r.t_omega, r.ratio_at_omega, grid, false);
            out.pgs = Some(r.pgs_at_omega);
            out.params = format!("beta={};overlap={};t_omega_perp={}", r.beta, r.overlap, r.t_omega_perp);
            out.lpa = Some(r);
            Ok(out)
        }
    }
}

fn base_record(cfg: &ExperimentConfig, hash: &str, tag: &str, grid: &TimeGrid, inst: &Instance) -> ResultRecord {
    ResultRecord {
        instance_id: inst.id.clone(),
        n: inst.graph.n(),
        method: tag.to_string(),
        order: String::new(),
        normalized: cfg.normalize.is_on(),
        objective: cfg.objective.to_string(),
        t_star: None,
        ratio: None,
        pgs: None,
        sigma: None,
        grid_lo: grid.lo,
        grid_hi: grid.hi,
        divisions: grid.divisions,
        wall_time_ms: 0,
        params: String::new(),
        config_hash: hash.to_string(),
        version: VERSION.to_string(),
        error: String::new(),
        lpa: None,
    }
}

fn record_for(cfg: &ExperimentConfig, hash: &str, tag: &str, method: &MethodSpec, grid: &TimeGrid, inst: &Instance) -> ResultRecord {
    let start = Instant::now();
    let result = evaluate(cfg, method, grid, inst);
    let mut rec = base_record(cfg, hash, tag, grid, inst);
    rec.wall_time_ms = start.elapsed().as_millis() as u64;
    match result {
        Ok(o) => {
            rec.t_star = Some(o.t_star);
            rec.ratio = Some(o.ratio);
            rec.pgs = o.pgs;
            rec.sigma = o.sigma;
            rec.order = o.order;
            rec.params = o.params;
            rec.normalized = o.normalized;
            (rec.grid_lo, rec.grid_hi, rec.divisions) = o.grid;
            rec.lpa = o.lpa;
        }
        Err(e) => rec.error = e.to_string(),
    }
    rec
}

fn pool() -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))
}

/// Runs the configured method on every instance. Per-instance failures
/// become error records; only config problems abort.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let instances = cfg.instances()?;
    run_on(cfg, &instances)
}

pub fn run_on(cfg: &ExperimentConfig, instances: &[Instance]) -> Result<Vec<ResultRecord>> {
    let hash = cfg.hash();
    let tag = cfg.method.tag();
    Ok(pool()?.install(|| {
        instances.par_iter().map(|inst| record_for(cfg, &hash, &tag, &cfg.method, &cfg.grid, inst)).collect()
    }))
}

/// The paired `H₁` / QAOA p=1 configs derived from `cfg`; both share its
/// normalization flag.
pub fn paired_configs(cfg: &ExperimentConfig) -> (ExperimentConfig, ExperimentConfig) {
    let mut h1 = cfg.clone();
    h1.method = MethodSpec::H1 { power: 1 };
    let mut qaoa = cfg.clone();
    let divisions = match cfg.method {
        MethodSpec::Qaoa { divisions, .. } => divisions,
        _ => 60,
    };
    qaoa.method = MethodSpec::Qaoa { p: 1, divisions };
    (h1, qaoa)
}

/// `H₁` and QAOA p=1 records for every instance.
pub fn run_compare(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let instances = cfg.instances()?;
    let (h1, qaoa) = paired_configs(cfg);
    let mut out = run_on(&h1, &instances)?;
    out.extend(run_on(&qaoa, &instances)?);
    Ok(out)
}

/// Re-optimizes `H₁` on `[grid.lo, t_qaoa]` for every instance with a
/// successful QAOA p=1 record under the same normalization.
pub fn run_constrained(cfg: &ExperimentConfig, instances: &[Instance], records: &[ResultRecord]) -> Result<Vec<ResultRecord>> {
    let mut h1 = cfg.clone();
    h1.method = MethodSpec::H1 { power: 1 };
    let hash = h1.hash();
    let jobs: Vec<(&Instance, f64)> = instances
        .iter()
        .filter_map(|inst| {
            records
                .iter()
                .find(|r| {
                    r.instance_id == inst.id
                        && r.method == "qaoa-p1"
                        && r.normalized == cfg.normalize.is_on()
                        && !r.is_error()
                })
                .and_then(|r| r.t_star)
                .map(|t| (inst, t))
        })
        .collect();
    Ok(pool()?.install(|| {
        jobs.par_iter()
            .map(|(inst, t)| match TimeGrid::search(h1.grid.lo, *t, h1.grid.divisions) {
                Ok(grid) => record_for(&h1, &hash, CONSTRAINED_TAG, &h1.method, &grid, inst),
                Err(e) => {
                    let mut r = base_record(&h1, &hash, CONSTRAINED_TAG, &h1.grid, inst);
                    r.error = e.to_string();
                    r
                }
            })
            .collect()
    }))
}

/// Time series of one instance under `H₁` or a QZ family.
pub fn sweep_instance(cfg: &ExperimentConfig, inst: &Instance) -> Result<Vec<(f64, Metrics)>> {
    let g = &inst.graph;
    let spec = diagonal_spectrum(g)?;
    let grid = TimeGrid::new(cfg.grid.lo, cfg.grid.hi, cfg.grid.divisions)?;
    match &cfg.method {
        MethodSpec::H1 { power } => {
            let mut h = build_h1_general(g, *power)?;
            if cfg.normalize == Normalization::Eq8 {
                h = h.scaled(normalization_factor(&h, g.n())?);
            }
            time_sweep(&h, &spec, &grid, KrylovOptions::default().tol)
        }
        MethodSpec::Qz { order, coupling } => {
            let fam = QzFamily::new(g, *order, *coupling, KrylovOptions::default())?;
            grid.points().into_iter().map(|t| Ok((t, fam.metrics(t, &spec)?))).collect()
        }
        MethodSpec::RingAnalytic => grid
            .points()
            .into_iter()
            .map(|t| Ok((t, crate::ringfermion::ring_metrics(g.n(), t)?)))
            .collect(),
        other => Err(Error::Config(format!("sweep is not defined for {other}"))),
    }
}
