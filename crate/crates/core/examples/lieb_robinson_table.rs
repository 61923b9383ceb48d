//! Local estimates and bound-adjusted cut values for the three 3-regular
//! neighbourhoods, plus subgraph proxies for the optimal time.

use xferopt::dynamics::TimeGrid;
use xferopt::locality::{
    optimal_lrb_time, subgraph_time_estimate, worst_case_bound, CombinationRule, LocalSystem, SubgraphSpec,
    DEFAULT_QUAD_STEP, TABLE_TIME,
};

fn main() -> xferopt::Result<()> {
    let mut reports = Vec::new();
    println!("{:<10} {:>9} {:>9} {:>9} {:>9}", "subgraph", "local", "epsilon", "upper", "cut");
    for s in SubgraphSpec::table_catalog() {
        let r = LocalSystem::new(&s)?.cut_bound(TABLE_TIME, DEFAULT_QUAD_STEP)?;
        println!(
            "{:<10} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            s.name, r.local_estimate, r.epsilon, r.upper_estimate, r.cut_value
        );
        reports.push(r);
    }
    println!("worst case at t = {TABLE_TIME}: {:.4}", worst_case_bound(&reports, CombinationRule::default())?);

    let grid = TimeGrid::search(0.0, 0.3, 61)?;
    let (t, bound, _) = optimal_lrb_time(&SubgraphSpec::table_catalog(), &grid, DEFAULT_QUAD_STEP, CombinationRule::default())?;
    println!("best bound over t: {bound:.4} at t = {t:.3}");

    for s in [SubgraphSpec::path(4)?, SubgraphSpec::double_claw()] {
        println!("{} time proxy: {:.4}", s.name, subgraph_time_estimate(&s, (0.0, 1.0), 1000)?);
    }
    Ok(())
}
