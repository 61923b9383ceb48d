//! Local subgraph simulation of edge observables and Lieb–Robinson style
//! error bounds on the gap between local and global dynamics.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    evolve_operator, maximize_on_grid, plus_state, CompiledOperator, KrylovOptions, Metrics, Objective, OptimizeOptions,
    TimeGrid,
};
use crate::error::{Error, Result};
use crate::instances::{Graph, Instance};
use crate::pauli::{build_h1, build_hf, build_hi, Letter, PauliString, PauliSum};

/// Largest subgraph handled by the dense routines.
pub const LOCAL_CAP: usize = 12;

/// Default Simpson step for the bound integral.
pub const DEFAULT_QUAD_STEP: f64 = 1e-3;

/// The time at which the subgraph bounds are usually quoted.
pub const TABLE_TIME: f64 = 0.093;

#[derive(Debug, Clone, PartialEq)]
pub struct SubgraphSpec {
    pub name: String,
    pub graph: Graph,
    pub target_edge: (usize, usize),
    /// Exterior couplings leaving each node.
    pub crossing: Vec<usize>,
}

impl SubgraphSpec {
    pub fn new(name: impl Into<String>, graph: Graph, target_edge: (usize, usize), crossing: Vec<usize>) -> Result<Self> {
        let (i, j) = target_edge;
        if !graph.edges().iter().any(|e| (e.i, e.j) == (i.min(j), i.max(j))) {
            return Err(Error::InvalidInstance(format!("target edge ({i},{j}) is not an edge of the subgraph")));
        }
        if crossing.len() != graph.n() {
            return Err(Error::Dimension { expected: graph.n(), found: crossing.len() });
        }
        if graph.n() > LOCAL_CAP {
            return Err(Error::ResourceLimit { what: "subgraph qubits", requested: graph.n(), limit: LOCAL_CAP });
        }
        Ok(Self { name: name.into(), graph, target_edge, crossing })
    }

    /// Worst case inside a `degree`-regular graph: every missing internal
    /// edge leaves the subgraph.
    pub fn regular(name: impl Into<String>, graph: Graph, target_edge: (usize, usize), degree: usize) -> Result<Self> {
        let mut crossing = Vec::with_capacity(graph.n());
        for a in 0..graph.n() {
            let d = graph.degree(a);
            if d > degree {
                return Err(Error::InvalidInstance(format!("node {a} has degree {d} > {degree}")));
            }
            crossing.push(degree - d);
        }
        Self::new(name, graph, target_edge, crossing)
    }

    pub fn from_instance(inst: &Instance, degree: usize) -> Result<Self> {
        let edge = inst
            .target_edge
            .ok_or_else(|| Error::InvalidInstance(format!("{} has no target edge", inst.id)))?;
        Self::regular(inst.id.clone(), inst.graph.clone(), edge, degree)
    }

    /// Target edge inside two triangles (4 nodes).
    pub fn subgraph1() -> Self {
        let g = Graph::unweighted(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]).expect("fixed graph");
        Self::regular("subgraph1", g, (0, 1), 3).expect("fixed graph")
    }

    /// Target edge inside one triangle (5 nodes).
    pub fn subgraph2() -> Self {
        let g = Graph::unweighted(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)]).expect("fixed graph");
        Self::regular("subgraph2", g, (0, 1), 3).expect("fixed graph")
    }

    /// Triangle-free neighbourhood: two claws joined at the target edge.
    pub fn subgraph3() -> Self {
        let mut s = Self::double_claw();
        s.name = "subgraph3".into();
        s
    }

    pub fn double_claw() -> Self {
        let g = Graph::unweighted(6, &[(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)]).expect("fixed graph");
        Self::regular("double-claw", g, (2, 3), 3).expect("fixed graph")
    }

    /// Ring neighbourhood of the middle edge.
    pub fn path(nodes: usize) -> Result<Self> {
        if nodes < 2 || nodes % 2 != 0 {
            return Err(Error::Parameter(format!("path needs an even node count >= 2, got {nodes}")));
        }
        let edges: Vec<(usize, usize)> = (0..nodes - 1).map(|k| (k, k + 1)).collect();
        let mid = nodes / 2 - 1;
        Self::regular(format!("path{nodes}"), Graph::unweighted(nodes, &edges)?, (mid, mid + 1), 2)
    }

    /// The three 3-regular neighbourhoods in bound order.
    pub fn table_catalog() -> Vec<Self> {
        vec![Self::subgraph1(), Self::subgraph2(), Self::subgraph3()]
    }

    pub fn to_instance(&self) -> Instance {
        let mut inst = Instance::from_graph(self.name.clone(), crate::instances::InstanceKind::Custom, 0, self.graph.clone());
        inst.target_edge = Some(self.target_edge);
        inst
    }

    fn target_diag(&self) -> Vec<f64> {
        let (i, j) = self.target_edge;
        (0..1usize << self.graph.n())
            .map(|b| if ((b >> i) ^ (b >> j)) & 1 == 0 { 1.0 } else { -1.0 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LocalKind {
    /// Unnormalized `H₁` for time `t`.
    #[default]
    H1,
    /// Linear anneal `(1-s)H_i + sH_f` over total time `t`.
    QaLike,
}

impl fmt::Display for LocalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalKind::H1 => "h1",
            LocalKind::QaLike => "qa-like",
        })
    }
}

impl FromStr for LocalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h1" => Ok(LocalKind::H1),
            "qa-like" => Ok(LocalKind::QaLike),
            _ => Err(Error::Parameter(format!("unknown local dynamics {s:?}"))),
        }
    }
}

/// Piecewise-constant steps per unit anneal time, with a floor.
const ANNEAL_STEPS_PER_UNIT: f64 = 2000.0;
const ANNEAL_MIN_STEPS: usize = 200;

/// Subgraph `H₁` diagonalized once; the observable and initial state are
/// kept in its eigenbasis.
pub struct LocalSystem {
    spec: SubgraphSpec,
    energies: DVector<f64>,
    vectors: DMatrix<Complex64>,
    /// `V† O V` for the target `Z_i Z_j`.
    obs: DMatrix<Complex64>,
    /// `V† |+>`.
    coeffs: DVector<Complex64>,
    /// Interior Pauli factors of the crossing terms with their multiplicity.
    crossing_paulis: Vec<(DMatrix<Complex64>, f64)>,
}

impl LocalSystem {
    pub fn new(spec: &SubgraphSpec) -> Result<Self> {
        let n = spec.graph.n();
        if n > LOCAL_CAP {
            return Err(Error::ResourceLimit { what: "subgraph qubits", requested: n, limit: LOCAL_CAP });
        }
        let h = build_h1(&spec.graph)?.to_dense()?;
        let eig = SymmetricEigen::new(h);
        let vectors = eig.eigenvectors;
        let diag = spec.target_diag();
        let o = DMatrix::from_fn(diag.len(), diag.len(), |r, c| {
            if r == c {
                Complex64::new(diag[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let obs = vectors.adjoint() * o * &vectors;
        let plus = DVector::from_vec(plus_state(n)?.into_amplitudes());
        let coeffs = vectors.adjoint() * plus;
        let mut crossing_paulis = Vec::new();
        for (a, &k) in spec.crossing.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for letter in [Letter::Y, Letter::Z] {
                let p = PauliSum::from_terms(n, [(PauliString::single(n, a, letter), 1.0)])?;
                crossing_paulis.push((p.to_dense()?, k as f64));
            }
        }
        Ok(Self { spec: spec.clone(), energies: eig.eigenvalues, vectors, obs, coeffs, crossing_paulis })
    }

    pub fn spec(&self) -> &SubgraphSpec {
        &self.spec
    }

    /// `<+| e^{iHt} Z_i Z_j e^{-iHt} |+>`.
    pub fn edge_estimate(&self, t: f64) -> f64 {
        let d = self.energies.len();
        let phased: Vec<Complex64> =
            (0..d).map(|k| self.coeffs[k] * Complex64::from_polar(1.0, -self.energies[k] * t)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..d {
            let mut row = Complex64::new(0.0, 0.0);
            for l in 0..d {
                row += self.obs[(k, l)] * phased[l];
            }
            acc += phased[k].conj() * row;
        }
        acc.re
    }

    /// Heisenberg-picture target `e^{iHu} O e^{-iHu}` in the computational basis.
    fn evolved_observable(&self, u: f64) -> DMatrix<Complex64> {
        let d = self.energies.len();
        let rotated = DMatrix::from_fn(d, d, |k, l| {
            self.obs[(k, l)] * Complex64::from_polar(1.0, (self.energies[k] - self.energies[l]) * u)
        });
        &self.vectors * rotated * self.vectors.adjoint()
    }

    /// `Σ_a ext(a) (‖[Y_a, O(u)]‖ + ‖[Z_a, O(u)]‖)` with spectral norms.
    pub fn bound_integrand(&self, u: f64) -> f64 {
        let o = self.evolved_observable(u);
        let i = Complex64::new(0.0, 1.0);
        self.crossing_paulis
            .iter()
            .map(|(p, k)| {
                let herm = (p * &o - &o * p) * i;
                let ev = SymmetricEigen::new(herm).eigenvalues;
                k * ev.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            })
            .sum()
    }

    /// Composite Simpson integral of the bound integrand over `[0, t]`.
    pub fn epsilon(&self, t: f64, quad_step: f64) -> Result<f64> {
        check_quad(t, quad_step)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let m = simpson_intervals(t, quad_step);
        let h = t / m as f64;
        let mut s = self.bound_integrand(0.0) + self.bound_integrand(t);
        for k in 1..m {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * self.bound_integrand(k as f64 * h);
        }
        Ok(s * h / 3.0)
    }

    /// `ε` at every other Simpson node on `[0, t_max]`, cumulatively.
    pub fn epsilon_profile(&self, t_max: f64, quad_step: f64) -> Result<Vec<(f64, f64)>> {
        check_quad(t_max, quad_step)?;
        let m = simpson_intervals(t_max.max(quad_step), quad_step);
        let h = t_max / m as f64;
        let f: Vec<f64> = (0..=m).map(|k| self.bound_integrand(k as f64 * h)).collect();
        let mut out = vec![(0.0, 0.0)];
        let mut acc = 0.0;
        for k in (0..m).step_by(2) {
            acc += h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
            out.push(((k + 2) as f64 * h, acc));
        }
        Ok(out)
    }

    pub fn cut_bound(&self, t: f64, quad_step: f64) -> Result<LrbReport> {
        let local_estimate = self.edge_estimate(t);
        let epsilon = self.epsilon(t, quad_step)?;
        Ok(LrbReport::new(t, local_estimate, epsilon))
    }
}

fn check_quad(t: f64, quad_step: f64) -> Result<()> {
    if !(quad_step > 0.0) {
        return Err(Error::Parameter(format!("quadrature step must be positive, got {quad_step}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Parameter(format!("time must be non-negative, got {t}")));
    }
    Ok(())
}

fn simpson_intervals(t: f64, quad_step: f64) -> usize {
    let m = (t / quad_step).ceil() as usize;
    (m + m % 2).max(2)
}

/// `<Z_i Z_j>` on the target edge after the chosen local dynamics.
pub fn local_edge_estimate(s: &SubgraphSpec, kind: LocalKind, t: f64) -> Result<f64> {
    match kind {
        LocalKind::H1 => Ok(LocalSystem::new(s)?.edge_estimate(t)),
        LocalKind::QaLike => anneal_edge_estimate(s, t),
    }
}

fn anneal_edge_estimate(s: &SubgraphSpec, t: f64) -> Result<f64> {
    let n = s.graph.n();
    let hi = CompiledOperator::new(&build_hi(n))?;
    let hf = CompiledOperator::new(&build_hf(&s.graph))?;
    let mut psi = plus_state(n)?;
    if t > 0.0 {
        let steps = ((t * ANNEAL_STEPS_PER_UNIT).ceil() as usize).max(ANNEAL_MIN_STEPS);
        let dt = t / steps as f64;
        let kopts = KrylovOptions::with_tol(1e-12);
        for k in 0..steps {
            let sv = (k as f64 + 0.5) / steps as f64;
            let h = CompiledOperator::combine(&[(&hi, 1.0 - sv), (&hf, sv)])?;
            psi = evolve_operator(&h, &psi, dt, &kopts)?;
        }
    }
    let diag = s.target_diag();
    Ok(psi.probabilities().iter().zip(&diag).map(|(p, o)| p * o).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrbReport {
    pub t: f64,
    pub local_estimate: f64,
    pub epsilon: f64,
    pub upper_estimate: f64,
    /// `(1 - upper_estimate) / 2`.
    pub cut_value: f64,
}

impl LrbReport {
    pub fn new(t: f64, local_estimate: f64, epsilon: f64) -> Self {
        let upper_estimate = local_estimate + epsilon;
        Self { t, local_estimate, epsilon, upper_estimate, cut_value: (1.0 - upper_estimate) / 2.0 }
    }
}

pub fn lrb_epsilon(s: &SubgraphSpec, t: f64, quad_step: f64) -> Result<f64> {
    LocalSystem::new(s)?.epsilon(t, quad_step)
}

pub fn lrb_cut_bound(s: &SubgraphSpec, t: f64) -> Result<LrbReport> {
    LocalSystem::new(s)?.cut_bound(t, DEFAULT_QUAD_STEP)
}

/// How per-subgraph cut guarantees combine into one worst case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum CombinationRule {
    /// Reports ordered as two-triangle, one-triangle, triangle-free. A
    /// triangle lowers the best cut as well as the achieved cut, so mixes
    /// dominated by triangle neighbourhoods are bounded by
    /// `(f1 + 4 f2) / 4` and `3 f2 / 2`; the triangle-free `f3` binds
    /// otherwise.
    #[default]
    TriangleDeflation,
    /// The smallest cut value.
    Minimum,
}

pub fn worst_case_bound(reports: &[LrbReport], rule: CombinationRule) -> Result<f64> {
    match (reports.len(), rule) {
        (0, _) => Err(Error::Parameter("no subgraph reports".into())),
        (1, _) => Ok(reports[0].cut_value),
        (_, CombinationRule::Minimum) => Ok(reports.iter().map(|r| r.cut_value).fold(f64::INFINITY, f64::min)),
        (3, CombinationRule::TriangleDeflation) => {
            let (f1, f2, f3) = (reports[0].cut_value, reports[1].cut_value, reports[2].cut_value);
            Ok(f3.min((f1 + 4.0 * f2) / 4.0).min(1.5 * f2))
        }
        (k, CombinationRule::TriangleDeflation) => {
            Err(Error::Parameter(format!("triangle deflation needs the three catalogue subgraphs, got {k} reports")))
        }
    }
}

/// Time maximizing the combined bound over a grid, with the reports there.
pub fn optimal_lrb_time(
    catalog: &[SubgraphSpec],
    grid: &TimeGrid,
    quad_step: f64,
    rule: CombinationRule,
) -> Result<(f64, f64, Vec<LrbReport>)> {
    let systems = catalog.iter().map(LocalSystem::new).collect::<Result<Vec<_>>>()?;
    let step = grid.step();
    if grid.lo != 0.0 {
        return Err(Error::Parameter("bound grid must start at 0".into()));
    }
    // Align Simpson nodes with the grid so the cumulative profile samples it.
    let per_cell = ((step / quad_step).ceil() as usize).max(1);
    let q = step / (2 * per_cell) as f64;
    let profiles = systems.iter().map(|s| s.epsilon_profile(grid.hi, q)).collect::<Result<Vec<_>>>()?;
    let mut best: Option<(f64, f64, Vec<LrbReport>)> = None;
    for k in 0..grid.divisions {
        let t = grid.point(k);
        let reports: Vec<LrbReport> = systems
            .iter()
            .zip(&profiles)
            .map(|(s, p)| LrbReport::new(t, s.edge_estimate(t), p[k * per_cell].1))
            .collect();
        let value = worst_case_bound(&reports, rule)?;
        if best.as_ref().map_or(true, |b| value > b.1) {
            best = Some((t, value, reports));
        }
    }
    Ok(best.expect("grid has points"))
}

/// Time minimizing the target `<Z_i Z_j>` on the subgraph.
pub fn subgraph_time_estimate(s: &SubgraphSpec, interval: (f64, f64), divisions: usize) -> Result<f64> {
    subgraph_time_estimate_with(s, LocalKind::H1, interval, divisions)
}

pub fn subgraph_time_estimate_with(s: &SubgraphSpec, kind: LocalKind, interval: (f64, f64), divisions: usize) -> Result<f64> {
    let grid = TimeGrid::search(interval.0, interval.1, divisions)?;
    let wrap = |zz: f64| Metrics { energy_expectation: zz, ratio: -zz, pgs: 0.0, sigma: None };
    let report = match kind {
        LocalKind::H1 => {
            let sys = LocalSystem::new(s)?;
            let samples: Vec<Metrics> = grid.points().into_iter().map(|t| wrap(sys.edge_estimate(t))).collect();
            maximize_on_grid(&grid, &samples, Objective::Ratio, &OptimizeOptions::default(), |t| Ok(wrap(sys.edge_estimate(t))))?
        }
        LocalKind::QaLike => {
            let samples = grid
                .points()
                .into_iter()
                .map(|t| anneal_edge_estimate(s, t).map(wrap))
                .collect::<Result<Vec<_>>>()?;
            maximize_on_grid(&grid, &samples, Objective::Ratio, &OptimizeOptions::grid_only(), |t| {
                anneal_edge_estimate(s, t).map(wrap)
            })?
        }
    };
    Ok(report.t_star)
}
