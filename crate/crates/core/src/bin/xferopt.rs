use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use xferopt::dynamics::{Objective, QzOrder, TimeGrid};
use xferopt::harness::{
    emit_plotdata, read_records, run_compare, run_constrained, run_experiment, run_on, sweep_instance, write_outputs,
    ExperimentConfig, InstanceSource, MethodSpec, Normalization, Recipe, ResultRecord, RECIPES,
};
use xferopt::instances::write_ndjson;
use xferopt::locality::{worst_case_bound, CombinationRule, LrbReport, SubgraphSpec, DEFAULT_QUAD_STEP, TABLE_TIME};
use xferopt::{Error, Result};

#[derive(Parser)]
#[command(name = "xferopt", version, about = "Commutator Hamiltonian experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// First generator seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_parser = parse::<Normalization>)]
    normalize: Option<Normalization>,
    /// `lo:hi:divisions`.
    #[arg(long, global = true, value_parser = parse::<TimeGrid>)]
    grid: Option<TimeGrid>,
    /// Selects the QZ method at this order.
    #[arg(long, global = true, value_parser = parse::<QzOrder>)]
    order: Option<QzOrder>,
    #[arg(long, global = true, value_parser = parse::<Objective>)]
    objective: Option<Objective>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the configured instances as NDJSON.
    Gen,
    /// Run the configured campaign.
    Run,
    /// Time series of one instance.
    Sweep {
        /// Instance id; defaults to the first one.
        #[arg(long)]
        instance: Option<String>,
    },
    /// Locality bounds, on the built-in 3-regular catalogue unless a config
    /// names instances.
    Bound,
    /// Paired H1 and QAOA p=1 runs plus the time-limited H1 rerun.
    Compare,
    /// Plot tables from `<out>/results.csv`.
    Plotdata {
        /// Recipe name or `all`.
        recipe: String,
    },
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Config(String),
    Partial(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl Cli {
    fn out_dir(&self, cfg: Option<&ExperimentConfig>) -> PathBuf {
        self.out
            .clone()
            .or_else(|| cfg.and_then(|c| c.out.clone()))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    fn config(&self) -> Result<ExperimentConfig> {
        let path = self.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
        let mut cfg = ExperimentConfig::load(path)?;
        self.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let (Some(seed), InstanceSource::Generate { seeds, .. }) = (self.seed, &mut cfg.instances) {
            seeds.start = seed;
        }
        if let Some(n) = self.normalize {
            cfg.normalize = n;
        }
        if let Some(g) = self.grid {
            cfg.grid = g;
        }
        if let Some(o) = self.objective {
            cfg.objective = o;
        }
        if let Some(order) = self.order {
            cfg.method = match cfg.method {
                MethodSpec::Qz { coupling, .. } => MethodSpec::Qz { order, coupling },
                _ => MethodSpec::Qz { order, coupling: Default::default() },
            };
        }
    }
}

fn finish(records: &[ResultRecord], dir: &Path) -> std::result::Result<(), Failure> {
    for path in write_outputs(dir, records)? {
        println!("wrote {}", path.display());
    }
    let failed = records.iter().filter(|r| r.is_error()).count();
    for r in records.iter().filter(|r| r.is_error()) {
        eprintln!("{} {}: {}", r.instance_id, r.method, r.error);
    }
    if failed > 0 {
        return Err(Failure::Partial(failed));
    }
    Ok(())
}

fn bound(cli: &Cli) -> std::result::Result<(), Failure> {
    let (cfg, instances) = match &cli.config {
        Some(_) => {
            let cfg = cli.config()?;
            let inst = cfg.instances()?;
            (cfg, inst)
        }
        None => {
            let inst: Vec<_> = SubgraphSpec::table_catalog().iter().map(|s| s.to_instance()).collect();
            let method = MethodSpec::Lrb { degree: 3, t: TABLE_TIME, quad_step: DEFAULT_QUAD_STEP };
            let source = InstanceSource::File { path: PathBuf::from("builtin:table-catalog") };
            (ExperimentConfig::new(source, method), inst)
        }
    };
    if !matches!(cfg.method, MethodSpec::Lrb { .. }) {
        return Err(Failure::Config(format!("bound needs an lrb method, config has {}", cfg.method)));
    }
    let records = run_on(&cfg, &instances)?;
    let rows: Vec<(&str, LrbReport)> = records
        .iter()
        .filter(|r| !r.is_error())
        .filter_map(|r| Some((r.instance_id.as_str(), LrbReport::new(r.t_star?, r.param("local")?, r.param("epsilon")?))))
        .collect();
    println!("{:<14} {:>9} {:>9} {:>9} {:>9}", "subgraph", "local", "epsilon", "upper", "cut");
    for (id, rep) in &rows {
        println!(
            "{:<14} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            id, rep.local_estimate, rep.epsilon, rep.upper_estimate, rep.cut_value
        );
    }
    let reports: Vec<LrbReport> = rows.into_iter().map(|(_, r)| r).collect();
    if reports.len() == records.len() {
        let rule = if reports.len() == 3 { CombinationRule::TriangleDeflation } else { CombinationRule::Minimum };
        match worst_case_bound(&reports, rule) {
            Ok(w) => println!("worst-case cut fraction: {w:.4}"),
            Err(e) => eprintln!("{e}"),
        }
    }
    finish(&records, &cli.out_dir(Some(&cfg)))
}

fn plotdata(cli: &Cli, recipe: &str) -> std::result::Result<(), Failure> {
    let cfg = cli.config.as_ref().map(|_| cli.config()).transpose()?;
    let dir = cli.out_dir(cfg.as_ref());
    let records = read_records(&dir.join("results.csv"))?;
    if recipe == "all" {
        let mut made = 0;
        for r in RECIPES {
            match emit_plotdata(&records, r, &dir) {
                Ok(p) => {
                    made += 1;
                    println!("wrote {}", p.display());
                }
                Err(e) => eprintln!("skipped: {e}"),
            }
        }
        if made == 0 {
            return Err(Failure::Partial(RECIPES.len()));
        }
        return Ok(());
    }
    let r: Recipe = recipe.parse()?;
    println!("wrote {}", emit_plotdata(&records, r, &dir)?.display());
    Ok(())
}

fn dispatch(cli: &Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Command::Gen => {
            let cfg = cli.config()?;
            let instances = cfg.instances()?;
            let dir = cli.out_dir(Some(&cfg));
            std::fs::create_dir_all(&dir).map_err(Error::from)?;
            let path = dir.join("instances.ndjson");
            let file = std::fs::File::create(&path).map_err(Error::from)?;
            write_ndjson(std::io::BufWriter::new(file), &instances)?;
            println!("wrote {} instances to {}", instances.len(), path.display());
            Ok(())
        }
        Command::Run => {
            let cfg = cli.config()?;
            let records = run_experiment(&cfg)?;
            finish(&records, &cli.out_dir(Some(&cfg)))
        }
        Command::Sweep { instance } => {
            let cfg = cli.config()?;
            let instances = cfg.instances()?;
            let inst = match instance {
                Some(id) => instances.iter().find(|i| &i.id == id),
                None => instances.first(),
            }
            .ok_or_else(|| Failure::Config("no matching instance".into()))?;
            let series = sweep_instance(&cfg, inst).map_err(|e| Failure::Config(e.to_string()))?;
            let dir = cli.out_dir(Some(&cfg));
            std::fs::create_dir_all(&dir).map_err(Error::from)?;
            let path = dir.join(format!("sweep_{}.csv", inst.id));
            let mut w = csv::Writer::from_path(&path).map_err(Error::from)?;
            w.write_record(["t", "energy", "ratio", "pgs", "sigma"]).map_err(Error::from)?;
            for (t, m) in series {
                let sigma = m.sigma.map(|s| s.to_string()).unwrap_or_default();
                w.write_record([t.to_string(), m.energy_expectation.to_string(), m.ratio.to_string(), m.pgs.to_string(), sigma])
                    .map_err(Error::from)?;
            }
            w.flush().map_err(Error::from)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Bound => bound(cli),
        Command::Compare => {
            let cfg = cli.config()?;
            let instances = cfg.instances()?;
            let mut records = run_compare(&cfg)?;
            records.extend(run_constrained(&cfg, &instances, &records)?);
            let dir = cli.out_dir(Some(&cfg));
            let outcome = finish(&records, &dir);
            for r in [Recipe::CompareQaoa, Recipe::ConstrainedTime] {
                match emit_plotdata(&records, r, &dir) {
                    Ok(p) => println!("wrote {}", p.display()),
                    Err(e) => eprintln!("{e}"),
                }
            }
            outcome
        }
        Command::Plotdata { recipe } => plotdata(cli, recipe),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Partial(k)) => {
            eprintln!("{k} item(s) failed");
            ExitCode::from(2)
        }
    }
}
