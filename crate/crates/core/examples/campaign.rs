//! A small campaign through the harness: run, write the CSV, build a plot
//! table from it.

use xferopt::harness::{build_plotdata, run_experiment, write_outputs, ExperimentConfig, InstanceSource, MethodSpec, Recipe, SeedRange};
use xferopt::instances::InstanceKind;

fn main() -> xferopt::Result<()> {
    let source = InstanceSource::Generate {
        kind: InstanceKind::Regular3,
        sizes: vec![6, 8],
        seeds: SeedRange { start: 1, count: 2 },
        edge_prob: None,
    };
    let mut cfg = ExperimentConfig::new(source, MethodSpec::H1 { power: 1 });
    cfg.grid = xferopt::dynamics::TimeGrid::search(0.0, 1.0, 100)?;
    println!("config hash {}", cfg.hash());

    let records = run_experiment(&cfg)?;
    let dir = std::env::temp_dir().join("xferopt-campaign");
    for p in write_outputs(&dir, &records)? {
        println!("wrote {}", p.display());
    }
    for row in build_plotdata(&records, Recipe::ThreeRegularCuts)?.rows {
        println!("{}", row.join("  "));
    }
    Ok(())
}
