use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::record::{write_atomic, ResultRecord};
use super::run::CONSTRAINED_TAG;
use crate::error::{Error, Result};
use crate::qaoa::ring_subgraph_qaoa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recipe {
    /// Ring ratio against size, with the QAOA depth constants.
    RingSaturation,
    /// 3-regular ratios against size.
    ThreeRegularCuts,
    /// QZ orders against size.
    QzOrders,
    /// Local estimate, upper estimate and cut value per subgraph.
    LrbTable,
    /// Paired `H₁` and QAOA p=1 ratios.
    CompareQaoa,
    /// Ratio gain of `H₁` limited to the QAOA p=1 time.
    ConstrainedTime,
}

pub const RECIPES: [Recipe; 6] = [
    Recipe::RingSaturation,
    Recipe::ThreeRegularCuts,
    Recipe::QzOrders,
    Recipe::LrbTable,
    Recipe::CompareQaoa,
    Recipe::ConstrainedTime,
];

impl Recipe {
    pub fn name(self) -> &'static str {
        match self {
            Recipe::RingSaturation => "fig3-ring-saturation",
            Recipe::ThreeRegularCuts => "fig6-3reg-cuts",
            Recipe::QzOrders => "fig9-qz-orders",
            Recipe::LrbTable => "table1-lrb",
            Recipe::CompareQaoa => "fig13-compare-qaoa",
            Recipe::ConstrainedTime => "constrained-time",
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Recipe {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RECIPES
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown recipe {s:?}")))
    }
}

/// A plot table: header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl PlotTable {
    fn tidy() -> Self {
        Self { header: vec!["x", "y", "group"], rows: Vec::new() }
    }

    fn push(&mut self, x: impl ToString, y: f64, group: impl ToString) {
        self.rows.push(vec![x.to_string(), y.to_string(), group.to_string()]);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }
}

fn recipe_error(recipe: Recipe, reason: impl Into<String>) -> Error {
    Error::Recipe { recipe: recipe.name().into(), reason: reason.into() }
}

fn ok_records<'a>(records: &'a [ResultRecord], pred: impl Fn(&ResultRecord) -> bool + 'a) -> impl Iterator<Item = (&'a ResultRecord, f64)> + 'a {
    records.iter().filter(move |r| !r.is_error() && pred(r)).filter_map(|r| r.ratio.map(|y| (r, y)))
}

/// Pairs `left` and `right` records by instance; a one-sided instance is a
/// missing cell.
fn paired(recipe: Recipe, records: &[ResultRecord], left: &str, right: &str) -> Result<Vec<(String, f64, f64)>> {
    let mut cells: BTreeMap<(&str, bool), (Option<f64>, Option<f64>)> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_error()) {
        let key = (r.instance_id.as_str(), r.normalized);
        if r.method == left {
            cells.entry(key).or_default().0 = r.ratio;
        } else if r.method == right {
            cells.entry(key).or_default().1 = r.ratio;
        }
    }
    let mut missing = Vec::new();
    let mut out = Vec::new();
    for ((id, norm), (a, b)) in cells {
        match (a, b) {
            (Some(a), Some(b)) => out.push((id.to_string(), a, b)),
            (None, _) => missing.push(format!("{id}/{left}/normalized={norm}")),
            (_, None) => missing.push(format!("{id}/{right}/normalized={norm}")),
        }
    }
    if !missing.is_empty() {
        return Err(recipe_error(recipe, format!("missing cells: {}", missing.join(", "))));
    }
    if out.is_empty() {
        return Err(recipe_error(recipe, format!("no {left}/{right} records")));
    }
    Ok(out)
}

pub fn build_plotdata(records: &[ResultRecord], recipe: Recipe) -> Result<PlotTable> {
    if records.is_empty() {
        return Err(recipe_error(recipe, "no records"));
    }
    let mut t = PlotTable::tidy();
    match recipe {
        Recipe::RingSaturation => {
            let mut sizes = Vec::new();
            for (r, y) in ok_records(records, |r| {
                (r.method == "ring-analytic" || r.method == "h1") && r.instance_id.starts_with("ring-")
            }) {
                t.push(r.n, y, &r.method);
                sizes.push(r.n);
            }
            if sizes.is_empty() {
                return Err(recipe_error(recipe, "no ring records from h1 or ring-analytic"));
            }
            sizes.sort_unstable();
            sizes.dedup();
            for p in 1..=3 {
                let (ratio, _) = ring_subgraph_qaoa(p)?;
                for &n in &sizes {
                    t.push(n, ratio, format!("qaoa-p{p}"));
                }
            }
        }
        Recipe::ThreeRegularCuts => {
            for (r, y) in ok_records(records, |r| r.instance_id.starts_with("regular3-")) {
                t.push(r.n, y, &r.method);
            }
        }
        Recipe::QzOrders => {
            for (r, y) in ok_records(records, |r| r.method.starts_with("qz-")) {
                t.push(r.n, y, &r.method);
            }
        }
        Recipe::LrbTable => {
            t = PlotTable { header: vec!["subgraph", "local_estimate", "upper_estimate", "cut_value"], rows: Vec::new() };
            for (r, cut) in ok_records(records, |r| r.method == "lrb") {
                let cell = |k: &str| r.param(k).map(|v| format!("{v:.4}")).unwrap_or_default();
                t.rows.push(vec![r.instance_id.clone(), cell("local"), cell("upper"), format!("{cut:.4}")]);
            }
        }
        Recipe::CompareQaoa => {
            for (id, h1, qaoa) in paired(recipe, records, "h1", "qaoa-p1")? {
                t.push(qaoa, h1, id);
            }
        }
        Recipe::ConstrainedTime => {
            for (id, h1, qaoa) in paired(recipe, records, CONSTRAINED_TAG, "qaoa-p1")? {
                t.push(qaoa, h1 - qaoa, id);
            }
        }
    }
    if t.rows.is_empty() {
        return Err(recipe_error(recipe, "no matching records"));
    }
    Ok(t)
}

/// Writes `plot_<recipe>.csv` into `dir`.
pub fn emit_plotdata(records: &[ResultRecord], recipe: Recipe, dir: &Path) -> Result<PathBuf> {
    let table = build_plotdata(records, recipe)?;
    let path = dir.join(format!("plot_{}.csv", recipe.name()));
    write_atomic(&path, &table.to_csv()?)?;
    Ok(path)
}
