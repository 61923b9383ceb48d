//! Series corrections to `H₁` on a ring, order by order.

use xferopt::dynamics::{qz_optimize, Objective, OptimizeOptions, QzCoupling, QzOrder, TimeGrid};
use xferopt::instances::{diagonal_spectrum, gen_ring};

fn main() -> xferopt::Result<()> {
    let g = gen_ring(10)?;
    let spec = diagonal_spectrum(&g)?;
    let grid = TimeGrid::search(0.0, 1.0, 200)?;
    for k in 0..=2 {
        let r = qz_optimize(&g, &spec, QzOrder::Series(k), QzCoupling::default(), &grid, Objective::Ratio, &OptimizeOptions::default())?;
        println!(
            "order {k}  ratio {:.4}  T {:.4}  normalized {:.4}",
            r.optimum.metrics.ratio, r.optimum.t_star, r.normalized_time
        );
    }
    Ok(())
}
