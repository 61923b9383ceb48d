use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::evolve::evolve_compiled;
use super::krylov::KrylovOptions;
use super::metrics::{measure, Metrics};
use super::operator::CompiledOperator;
use super::state::{plus_state, StateVector};
use crate::error::{Error, Result};
use crate::instances::DiagonalSpectrum;
use crate::pauli::PauliSum;

/// `divisions` evenly spaced points from `lo` to `hi`, both included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub lo: f64,
    pub hi: f64,
    pub divisions: usize,
}

impl TimeGrid {
    pub fn new(lo: f64, hi: f64, divisions: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi < lo {
            return Err(Error::Parameter(format!("bad interval [{lo}, {hi}]")));
        }
        if divisions < 2 {
            return Err(Error::Parameter(format!("need at least 2 divisions, got {divisions}")));
        }
        Ok(Self { lo, hi, divisions })
    }

    /// Validates an optimization interval: `lo >= 0` and `hi > lo`.
    pub fn search(lo: f64, hi: f64, divisions: usize) -> Result<Self> {
        if lo < 0.0 || hi <= lo {
            return Err(Error::Parameter(format!("search interval [{lo}, {hi}] needs 0 <= lo < hi")));
        }
        Self::new(lo, hi, divisions)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.divisions - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.divisions {
            self.hi
        } else {
            self.lo + k as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.divisions).map(|k| self.point(k)).collect()
    }
}

impl FromStr for TimeGrid {
    type Err = Error;
    /// `lo:hi:divisions`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parameter(format!("grid {s:?} is not lo:hi:divisions"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].parse().map_err(|_| bad())?;
        let hi = parts[1].parse().map_err(|_| bad())?;
        let d = parts[2].parse().map_err(|_| bad())?;
        Self::new(lo, hi, d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Ratio,
    Pgs,
}

impl Objective {
    pub fn score(self, m: &Metrics) -> f64 {
        match self {
            Objective::Ratio => m.ratio,
            Objective::Pgs => m.pgs,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Ratio => "ratio",
            Objective::Pgs => "pgs",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ratio" => Ok(Objective::Ratio),
            "pgs" => Ok(Objective::Pgs),
            _ => Err(Error::Parameter(format!("unknown objective {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    /// Golden-section refinement after the grid scan.
    pub refine: bool,
    /// Bracket width at which refinement stops.
    pub refine_tol: f64,
    pub krylov: KrylovOptions,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { refine: true, refine_tol: 1e-9, krylov: KrylovOptions::default() }
    }
}

impl OptimizeOptions {
    pub fn grid_only() -> Self {
        Self { refine: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub t_star: f64,
    pub metrics: Metrics,
    pub grid: TimeGrid,
    /// The best grid point was the upper end of the interval, so the
    /// optimum is pinned by the caller's limit.
    pub constrained: bool,
    pub refined: bool,
}

/// Maximizes `objective` given grid samples, then optionally refines by
/// golden-section search on the bracket around the best sample. Ties go to
/// the smaller time.
pub fn maximize_on_grid<F>(
    grid: &TimeGrid,
    samples: &[Metrics],
    objective: Objective,
    opts: &OptimizeOptions,
    mut eval: F,
) -> Result<OptimumReport>
where
    F: FnMut(f64) -> Result<Metrics>,
{
    if samples.len() != grid.divisions {
        return Err(Error::Dimension { expected: grid.divisions, found: samples.len() });
    }
    let mut k = 0;
    for (i, m) in samples.iter().enumerate() {
        if objective.score(m) > objective.score(&samples[k]) {
            k = i;
        }
    }
    let mut best = (grid.point(k), samples[k]);
    let constrained = k + 1 == grid.divisions && grid.hi > grid.lo;
    let mut refined = false;
    if opts.refine && grid.hi > grid.lo {
        let a0 = grid.point(k.saturating_sub(1));
        let b0 = grid.point((k + 1).min(grid.divisions - 1));
        let consider = |t: f64, m: Metrics, best: &mut (f64, Metrics)| {
            let (s, sb) = (objective.score(&m), objective.score(&best.1));
            if s > sb || (s == sb && t < best.0) {
                *best = (t, m);
            }
        };
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (a0, b0);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = eval(c)?;
        let mut fd = eval(d)?;
        consider(c, fc, &mut best);
        consider(d, fd, &mut best);
        while b - a > opts.refine_tol {
            if objective.score(&fc) >= objective.score(&fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval(c)?;
                consider(c, fc, &mut best);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval(d)?;
                consider(d, fd, &mut best);
            }
        }
        refined = true;
    }
    Ok(OptimumReport { t_star: best.0, metrics: best.1, grid: *grid, constrained, refined })
}

/// Metrics along a time grid, starting from the plus state and stepping
/// incrementally between grid points.
pub fn time_sweep(h: &PauliSum, spec: &DiagonalSpectrum, grid: &TimeGrid, tol: f64) -> Result<Vec<(f64, Metrics)>> {
    let op = CompiledOperator::new(h)?;
    let kopts = KrylovOptions::with_tol(tol);
    sweep_states(&op, spec, grid, &kopts)
}

fn sweep_states(
    op: &CompiledOperator,
    spec: &DiagonalSpectrum,
    grid: &TimeGrid,
    kopts: &KrylovOptions,
) -> Result<Vec<(f64, Metrics)>> {
    let mut psi = plus_state(op.n())?;
    let mut out = Vec::with_capacity(grid.divisions);
    let mut t_prev = 0.0;
    for t in grid.points() {
        psi = evolve_compiled(op, &psi, t - t_prev, kopts)?;
        t_prev = t;
        out.push((t, measure(&psi, spec)?));
    }
    Ok(out)
}

pub fn optimize_time(
    h: &PauliSum,
    spec: &DiagonalSpectrum,
    interval: (f64, f64),
    divisions: usize,
    objective: Objective,
) -> Result<OptimumReport> {
    let grid = TimeGrid::search(interval.0, interval.1, divisions)?;
    optimize_time_with(h, spec, &grid, objective, &OptimizeOptions::default())
}

pub fn optimize_time_with(
    h: &PauliSum,
    spec: &DiagonalSpectrum,
    grid: &TimeGrid,
    objective: Objective,
    opts: &OptimizeOptions,
) -> Result<OptimumReport> {
    let op = CompiledOperator::new(h)?;
    let sweep = sweep_states(&op, spec, grid, &opts.krylov)?;
    let samples: Vec<Metrics> = sweep.iter().map(|(_, m)| *m).collect();
    let mut k = 0;
    for (i, m) in samples.iter().enumerate() {
        if objective.score(m) > objective.score(&samples[k]) {
            k = i;
        }
    }
    let t_base = grid.point(k.saturating_sub(1));
    let base: StateVector = evolve_compiled(&op, &plus_state(op.n())?, t_base, &opts.krylov)?;
    maximize_on_grid(grid, &samples, objective, opts, |t| {
        measure(&evolve_compiled(&op, &base, t - t_base, &opts.krylov)?, spec)
    })
}
