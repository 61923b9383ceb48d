//! QAOA through light-cone subgraphs: the ring next to its analytic `H₁`
//! optimum, and the triangle-free 3-regular edge.

use xferopt::dynamics::Objective;
use xferopt::locality::SubgraphSpec;
use xferopt::qaoa::{edge_qaoa, ring_subgraph_report};
use xferopt::ringfermion::ring_optimize;

fn main() -> xferopt::Result<()> {
    let h1 = ring_optimize(1000, (0.0, 1.0), 1000, Objective::Ratio)?;
    println!("H1    ratio {:.4}  time {:.4}", h1.metrics.ratio, h1.t_star);
    for p in 1..=3 {
        let r = ring_subgraph_report(p, 60)?;
        println!(
            "p = {p}  ratio {:.4}  time {:.4}  gammas {:?}  betas {:?}",
            r.ratio, r.time, r.gammas, r.betas
        );
    }
    let claw = SubgraphSpec::double_claw();
    let r = edge_qaoa(&claw.graph, claw.target_edge, 1, 60)?;
    println!("triangle-free 3-regular, p = 1  cut fraction {:.4}  time {:.4}", r.cut_fraction, r.time);
    Ok(())
}
