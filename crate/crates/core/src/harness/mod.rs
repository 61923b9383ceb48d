//! Experiment campaigns: configs, dispatch to the methods, CSV records and
//! plot tables.

mod config;
mod plot;
mod record;
mod run;

pub use config::{
    worker_count, ExperimentConfig, InstanceSource, MethodSpec, Normalization, SeedRange, WORKERS_ENV,
};
pub use plot::{build_plotdata, emit_plotdata, PlotTable, Recipe, RECIPES};
pub use record::{read_records, records_to_csv, write_outputs, write_records, ResultRecord, VERSION};
pub use run::{paired_configs, run_compare, run_constrained, run_experiment, run_on, sweep_instance, CONSTRAINED_TAG};
