use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{Objective, QzCoupling, QzOrder, TimeGrid};
use crate::error::{Error, Result};
use crate::instances::{read_ndjson, GenParams, Instance, InstanceKind};
use crate::locality::{DEFAULT_QUAD_STEP, TABLE_TIME};
use crate::transfer::SpectralFunction;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "XFEROPT_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Rescale so `(1/2ⁿ) Tr H² = n`.
    Eq8,
    #[default]
    None,
}

impl Normalization {
    pub fn is_on(self) -> bool {
        self == Normalization::Eq8
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq8" => Ok(Normalization::Eq8),
            "none" => Ok(Normalization::None),
            _ => Err(Error::Config(format!("normalization {s:?} is not eq8|none"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceSource {
    /// Newline-delimited instance JSON; relative paths resolve against the
    /// config file.
    File { path: PathBuf },
    Generate {
        kind: InstanceKind,
        sizes: Vec<usize>,
        seeds: SeedRange,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edge_prob: Option<f64>,
    },
}

fn one() -> u32 {
    1
}

fn sixty() -> usize {
    60
}

fn three() -> usize {
    3
}

fn table_time() -> f64 {
    TABLE_TIME
}

fn quad_step() -> f64 {
    DEFAULT_QUAD_STEP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MethodSpec {
    H1 {
        /// Power `m` in `[H_i, H_f^m]/2i`.
        #[serde(default = "one")]
        power: u32,
    },
    Qz {
        order: QzOrder,
        #[serde(default)]
        coupling: QzCoupling,
    },
    Qaoa {
        p: usize,
        #[serde(default = "sixty")]
        divisions: usize,
    },
    RingAnalytic,
    Lrb {
        #[serde(default = "three")]
        degree: usize,
        #[serde(default = "table_time")]
        t: f64,
        #[serde(default = "quad_step")]
        quad_step: f64,
    },
    Lpa {
        function: SpectralFunction,
    },
}

impl MethodSpec {
    /// Tag written to the `method` column.
    pub fn tag(&self) -> String {
        match self {
            MethodSpec::H1 { power: 1 } => "h1".into(),
            MethodSpec::H1 { power } => format!("h1-g{power}"),
            MethodSpec::Qz { order, .. } => format!("qz-{order}"),
            MethodSpec::Qaoa { p, .. } => format!("qaoa-p{p}"),
            MethodSpec::RingAnalytic => "ring-analytic".into(),
            MethodSpec::Lrb { .. } => "lrb".into(),
            MethodSpec::Lpa { function } => format!("lpa-{function}"),
        }
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

fn default_grid() -> TimeGrid {
    TimeGrid { lo: 0.0, hi: 2.0 * std::f64::consts::PI, divisions: 1000 }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub instances: InstanceSource,
    pub method: MethodSpec,
    #[serde(default)]
    pub normalize: Normalization,
    #[serde(default = "default_objective")]
    pub objective: Objective,
    #[serde(default = "default_grid")]
    pub grid: TimeGrid,
    /// Golden-section refinement after the grid scan.
    #[serde(default = "yes")]
    pub refine: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_objective() -> Objective {
    Objective::Ratio
}

impl ExperimentConfig {
    pub fn new(instances: InstanceSource, method: MethodSpec) -> Self {
        Self {
            name: String::new(),
            instances,
            method,
            normalize: Normalization::None,
            objective: Objective::Ratio,
            grid: default_grid(),
            refine: true,
            out: None,
        }
    }

    /// Reads and validates a JSON config; relative instance paths resolve
    /// against the config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: Self = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let InstanceSource::File { path: p } = &mut cfg.instances {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        TimeGrid::search(self.grid.lo, self.grid.hi, self.grid.divisions).map_err(|e| Error::Config(e.to_string()))?;
        match &self.method {
            MethodSpec::H1 { power } if *power == 0 => return Err(Error::Config("h1 power must be >= 1".into())),
            MethodSpec::Qaoa { p, divisions } if !(1..=3).contains(p) || *divisions < 2 => {
                return Err(Error::Config(format!("qaoa needs p in 1..=3 and >= 2 divisions (p = {p})")))
            }
            MethodSpec::Lrb { t, quad_step, .. } if !(*t >= 0.0) || !(*quad_step > 0.0) => {
                return Err(Error::Config("lrb needs t >= 0 and quad_step > 0".into()))
            }
            _ => {}
        }
        if let InstanceSource::Generate { sizes, seeds, edge_prob, kind } = &self.instances {
            if sizes.is_empty() || seeds.count == 0 {
                return Err(Error::Config("generator needs at least one size and one seed".into()));
            }
            if *kind == InstanceKind::Custom {
                return Err(Error::Config("custom instances must come from a file".into()));
            }
            if let Some(p) = edge_prob {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Config(format!("edge_prob {p} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON (keys sorted), so field order in
    /// the source file does not matter.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let text = serde_json::to_string(&value).expect("value serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Loads or generates the instances, rejecting duplicate ids.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        let list = match &self.instances {
            InstanceSource::File { path } => {
                let f = File::open(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                read_ndjson(BufReader::new(f)).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            InstanceSource::Generate { kind, sizes, seeds, edge_prob } => {
                let params = GenParams { edge_prob: edge_prob.unwrap_or(GenParams::default().edge_prob) };
                // Rings do not depend on the seed.
                let count = if *kind == InstanceKind::Ring { 1 } else { seeds.count };
                let mut out = Vec::new();
                for &n in sizes {
                    for s in seeds.start..seeds.start + count {
                        out.push(Instance::generate(*kind, n, s, params).map_err(|e| Error::Config(e.to_string()))?);
                    }
                }
                out
            }
        };
        let mut seen = BTreeSet::new();
        for inst in &list {
            if !seen.insert(inst.id.as_str()) {
                return Err(Error::Config(format!("duplicate instance id {:?}", inst.id)));
            }
        }
        Ok(list)
    }
}

/// Worker count from the environment, defaulting to 1.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(Error::Config(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
        },
    }
}
