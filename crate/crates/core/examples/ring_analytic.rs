//! Closed-form `H₁` dynamics on rings, checked against state-vector
//! evolution at a small size.

use xferopt::dynamics::{optimize_time, Objective};
use xferopt::instances::{diagonal_spectrum, gen_ring};
use xferopt::pauli::build_h1;
use xferopt::ringfermion::{ring_metrics, ring_optimize};

fn main() -> xferopt::Result<()> {
    for n in [4, 10, 50, 100, 400, 401] {
        let r = ring_optimize(n, (0.0, 1.0), 1000, Objective::Ratio)?;
        println!("n = {n:<4} t* {:.4}  ratio {:.4}  pgs {:.3e}", r.t_star, r.metrics.ratio, r.metrics.pgs);
    }

    let g = gen_ring(10)?;
    let sim = optimize_time(&build_h1(&g)?, &diagonal_spectrum(&g)?, (0.0, 1.0), 200, Objective::Ratio)?;
    let exact = ring_metrics(10, sim.t_star)?;
    println!("n = 10 simulated {:.6}  closed form {:.6}", sim.metrics.ratio, exact.ratio);
    Ok(())
}
