//! Closed-form `H₁` dynamics for MAX-CUT on a ring.
//!
//! After a Jordan–Wigner transformation the ring decouples into two-level
//! pseudo-spins, one per mode `θ_k`. Even rings take anti-periodic modes
//! `θ_k = (2k+1)π/n`; odd rings take periodic modes `θ_k = 2πk/n`, where the
//! `k = 0` mode is frozen and contributes `F₀ = G₀ = 1`.

use crate::dynamics::{maximize_on_grid, Metrics, Objective, OptimizeOptions, OptimumReport, TimeGrid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingModes {
    pub n: usize,
    pub parity: Parity,
    pub thetas: Vec<f64>,
}

impl RingModes {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInstance(format!("ring needs n >= 3, got {n}")));
        }
        let pi = std::f64::consts::PI;
        let (parity, thetas) = if n % 2 == 0 {
            (Parity::Even, (0..n / 2).map(|k| (2 * k + 1) as f64 * pi / n as f64).collect())
        } else {
            (Parity::Odd, (0..=(n - 1) / 2).map(|k| 2.0 * pi * k as f64 / n as f64).collect())
        };
        Ok(Self { n, parity, thetas })
    }

    /// Ground energy `n - 2·maxcut`: the max cut is `n` for even rings and
    /// `n - 1` for odd ones.
    pub fn e_min(&self) -> f64 {
        match self.parity {
            Parity::Even => -(self.n as f64),
            Parity::Odd => -(self.n as f64 - 2.0),
        }
    }

    /// Number of optimal cuts: the two alternating states, or one frustrated
    /// bond at any of `n` places times a global flip.
    pub fn degeneracy(&self) -> usize {
        match self.parity {
            Parity::Even => 2,
            Parity::Odd => 2 * self.n,
        }
    }

    fn mode_terms(&self, k: usize, t: f64) -> (f64, f64) {
        if self.parity == Parity::Odd && k == 0 {
            return (1.0, 1.0);
        }
        let th = self.thetas[k];
        let (s, c) = th.sin_cos();
        let phase = 8.0 * s * t;
        let (sp, cp) = phase.sin_cos();
        let f = 2.0 * c * cp - 2.0 * s * sp;
        let g = (1.0 - c * cp + s * sp) / 2.0;
        (f, g)
    }

    /// `<H_f>` and ground-state probability at time `t`.
    pub fn energy_and_pgs(&self, t: f64) -> (f64, f64) {
        let mut energy = 0.0;
        let mut pgs = 1.0;
        for k in 0..self.thetas.len() {
            let (f, g) = self.mode_terms(k, t);
            energy += f;
            pgs *= g;
        }
        (energy, pgs)
    }
}

/// Analytic metrics of the ring under raw `H₁` at time `t`. `sigma` is absent.
pub fn ring_metrics(n: usize, t: f64) -> Result<Metrics> {
    let modes = RingModes::new(n)?;
    Ok(metrics_of(&modes, t))
}

fn metrics_of(modes: &RingModes, t: f64) -> Metrics {
    let (energy, pgs) = modes.energy_and_pgs(t);
    Metrics { energy_expectation: energy, ratio: energy / modes.e_min(), pgs, sigma: None }
}

/// Grid scan plus golden-section refinement of the analytic ratio or P_gs.
pub fn ring_optimize(n: usize, interval: (f64, f64), divisions: usize, objective: Objective) -> Result<OptimumReport> {
    let grid = TimeGrid::search(interval.0, interval.1, divisions)?;
    ring_optimize_with(n, &grid, objective, &OptimizeOptions::default())
}

pub fn ring_optimize_with(
    n: usize,
    grid: &TimeGrid,
    objective: Objective,
    opts: &OptimizeOptions,
) -> Result<OptimumReport> {
    let modes = RingModes::new(n)?;
    let samples: Vec<Metrics> = grid.points().into_iter().map(|t| metrics_of(&modes, t)).collect();
    maximize_on_grid(grid, &samples, objective, opts, |t| Ok(metrics_of(&modes, t)))
}
