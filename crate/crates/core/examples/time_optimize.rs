//! Optimal `H₁` run time on random 3-regular graphs, raw and after energy
//! normalization.

use xferopt::dynamics::{optimize_time, Objective};
use xferopt::instances::{diagonal_spectrum, GenParams, Instance, InstanceKind};
use xferopt::pauli::{build_h1, normalize_energy};

fn main() -> xferopt::Result<()> {
    for seed in 1..=3 {
        let inst = Instance::generate(InstanceKind::Regular3, 10, seed, GenParams::default())?;
        let spec = diagonal_spectrum(&inst.graph)?;
        let h1 = build_h1(&inst.graph)?;
        let raw = optimize_time(&h1, &spec, (0.0, 1.0), 200, Objective::Ratio)?;
        let norm = optimize_time(&normalize_energy(&h1, 10)?, &spec, (0.0, 2.0), 200, Objective::Ratio)?;
        let pgs = optimize_time(&h1, &spec, (0.0, 1.0), 200, Objective::Pgs)?;
        println!(
            "{}  ratio {:.4} at t {:.4} (normalized t {:.4})  best pgs {:.4} at t {:.4}",
            inst.id, raw.metrics.ratio, raw.t_star, norm.t_star, pgs.metrics.pgs, pgs.t_star
        );
    }
    Ok(())
}
