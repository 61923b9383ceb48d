//! Ising problem instances and their diagonal spectra.
//!
//! Bit convention, used throughout the crate: qubit `k` is bit `k` of a basis
//! index (little-endian), and spin `s_k = +1` corresponds to bit value 0.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::InstanceRng;

/// Largest register for which brute-force spectra are computed by default.
pub const DEFAULT_SPECTRUM_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Weighted Ising problem `Σ w_ij s_i s_j + Σ h_i s_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    biases: Vec<f64>,
}

impl Graph {
    /// Builds a graph, orienting every edge as `i < j`.
    pub fn new(n: usize, edges: &[(usize, usize, f64)], biases: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("graph needs at least one node".into()));
        }
        if biases.len() != n {
            return Err(Error::InvalidInstance(format!(
                "expected {n} biases, found {}",
                biases.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b, w) in edges {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j {
                return Err(Error::InvalidInstance(format!("self-loop at node {i}")));
            }
            if j >= n {
                return Err(Error::InvalidInstance(format!("edge ({a},{b}) out of range for n={n}")));
            }
            if !w.is_finite() {
                return Err(Error::InvalidInstance(format!("edge ({a},{b}) has weight {w}")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({i},{j})")));
            }
            out.push(Edge { i, j, w });
        }
        if biases.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidInstance("non-finite bias".into()));
        }
        Ok(Self { n, edges: out, biases })
    }

    /// Unit-weight graph without biases.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let e: Vec<_> = edges.iter().map(|&(i, j)| (i, j, 1.0)).collect();
        Self::new(n, &e, vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn has_terms(&self) -> bool {
        self.edges.iter().any(|e| e.w != 0.0) || self.biases.iter().any(|&h| h != 0.0)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.i == node || e.j == node).count()
    }

    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.i), find(&mut parent, e.j));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..self.n).all(|v| find(&mut parent, v) == root)
    }

    /// Ising energy of basis state `b`.
    pub fn energy(&self, b: usize) -> f64 {
        let mut e = 0.0;
        for edge in &self.edges {
            let anti = ((b >> edge.i) ^ (b >> edge.j)) & 1;
            e += if anti == 0 { edge.w } else { -edge.w };
        }
        for (k, &h) in self.biases.iter().enumerate() {
            if h != 0.0 {
                e += if (b >> k) & 1 == 0 { h } else { -h };
            }
        }
        e
    }

    /// Fraction of total edge weight cut by basis state `b`.
    pub fn cut_weight(&self, b: usize) -> f64 {
        self.edges
            .iter()
            .filter(|e| ((b >> e.i) ^ (b >> e.j)) & 1 == 1)
            .map(|e| e.w)
            .sum()
    }
}

/// Cycle `0-1-…-(n-1)-0` with unit couplings.
pub fn gen_ring(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!("ring needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::unweighted(n, &edges)
}

/// Random `degree`-regular graph from the pairing model, rejecting
/// self-loops and multi-edges. Disconnected outputs are kept.
pub fn gen_random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if degree >= n {
        return Err(Error::InvalidInstance(format!("degree {degree} needs n > degree, got {n}")));
    }
    if (n * degree) % 2 == 1 {
        return Err(Error::InvalidInstance(format!("n*degree = {} is odd", n * degree)));
    }
    let mut rng = InstanceRng::new(&format!("regular{degree}"), n, seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    const MAX_ATTEMPTS: usize = 100_000;
    'attempt: for _ in 0..MAX_ATTEMPTS {
        rng.shuffle(&mut points);
        let mut pairs = Vec::with_capacity(points.len() / 2);
        for c in points.chunks_exact(2) {
            let (i, j) = if c[0] < c[1] { (c[0], c[1]) } else { (c[1], c[0]) };
            if i == j || pairs.contains(&(i, j)) {
                continue 'attempt;
            }
            pairs.push((i, j));
        }
        pairs.sort_unstable();
        return Graph::unweighted(n, &pairs);
    }
    Err(Error::InvalidInstance(format!(
        "pairing model failed after {MAX_ATTEMPTS} attempts (n={n}, degree={degree})"
    )))
}

/// G(n, p) with unit weights.
pub fn gen_erdos_renyi(n: usize, edge_prob: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidInstance(format!("edge probability {edge_prob} outside [0,1]")));
    }
    if n == 0 {
        return Err(Error::InvalidInstance("graph needs at least one node".into()));
    }
    let mut rng = InstanceRng::new("erdos", n, seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.uniform() < edge_prob {
                pairs.push((i, j));
            }
        }
    }
    Graph::unweighted(n, &pairs)
}

/// All-to-all standard-normal couplings plus standard-normal biases.
pub fn gen_sk(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!("SK model needs n >= 2, got {n}")));
    }
    let mut rng = InstanceRng::new("sk", n, seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, rng.normal()));
        }
    }
    let biases = (0..n).map(|_| rng.normal()).collect();
    Graph::new(n, &edges, biases)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpectrum {
    pub n: usize,
    pub energies: Vec<f64>,
    pub e_min: f64,
    pub degeneracy: usize,
    pub ground_indices: Vec<usize>,
}

impl DiagonalSpectrum {
    /// Builds a spectrum from explicit energies, detecting the ground space
    /// with a relative tolerance of 1e-9.
    pub fn from_energies(n: usize, energies: Vec<f64>) -> Result<Self> {
        if energies.len() != 1usize << n {
            return Err(Error::Dimension { expected: 1 << n, found: energies.len() });
        }
        let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let tol = 1e-9 * e_min.abs().max(1.0);
        let ground_indices: Vec<usize> = energies
            .iter()
            .enumerate()
            .filter(|(_, &e)| e - e_min <= tol)
            .map(|(b, _)| b)
            .collect();
        if e_min >= 0.0 {
            return Err(Error::Degenerate(format!("ground energy {e_min} is not negative")));
        }
        Ok(Self { n, degeneracy: ground_indices.len(), energies, e_min, ground_indices })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn is_ground(&self, b: usize) -> bool {
        self.ground_indices.binary_search(&b).is_ok()
    }
}

pub fn diagonal_spectrum(g: &Graph) -> Result<DiagonalSpectrum> {
    diagonal_spectrum_capped(g, DEFAULT_SPECTRUM_CAP)
}

pub fn diagonal_spectrum_capped(g: &Graph, cap: usize) -> Result<DiagonalSpectrum> {
    if g.n() > cap {
        return Err(Error::ResourceLimit { what: "spectrum qubits", requested: g.n(), limit: cap });
    }
    let energies = (0..1usize << g.n()).map(|b| g.energy(b)).collect();
    DiagonalSpectrum::from_energies(g.n(), energies)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Ring,
    Regular3,
    Erdos,
    Sk,
    /// Hand-written graphs such as the locality catalog.
    Custom,
}

impl InstanceKind {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Ring => "ring",
            Self::Regular3 => "regular3",
            Self::Erdos => "erdos",
            Self::Sk => "sk",
            Self::Custom => "custom",
        }
    }
}

impl std::str::FromStr for InstanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(Self::Ring),
            "regular3" => Ok(Self::Regular3),
            "erdos" => Ok(Self::Erdos),
            "sk" => Ok(Self::Sk),
            "custom" => Ok(Self::Custom),
            other => Err(Error::InvalidInstance(format!("unknown kind {other:?}"))),
        }
    }
}

/// A graph plus the metadata needed to regenerate and cite it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct Instance {
    pub id: String,
    pub kind: InstanceKind,
    pub seed: u64,
    pub graph: Graph,
    pub target_edge: Option<(usize, usize)>,
    pub connected: bool,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    id: String,
    kind: InstanceKind,
    n: usize,
    seed: u64,
    edges: Vec<(usize, usize, f64)>,
    biases: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_edge: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connected: Option<bool>,
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;
    fn try_from(f: InstanceFile) -> Result<Self> {
        let graph = Graph::new(f.n, &f.edges, f.biases)?;
        if let Some((i, j)) = f.target_edge {
            let (i, j) = (i.min(j), i.max(j));
            if !graph.edges().iter().any(|e| e.i == i && e.j == j) {
                return Err(Error::InvalidInstance(format!("target edge ({i},{j}) not in graph")));
            }
        }
        let connected = graph.is_connected();
        Ok(Self { id: f.id, kind: f.kind, seed: f.seed, graph, target_edge: f.target_edge, connected })
    }
}

impl From<Instance> for InstanceFile {
    fn from(inst: Instance) -> Self {
        Self {
            id: inst.id,
            kind: inst.kind,
            n: inst.graph.n(),
            seed: inst.seed,
            edges: inst.graph.edges().iter().map(|e| (e.i, e.j, e.w)).collect(),
            biases: inst.graph.biases().to_vec(),
            target_edge: inst.target_edge,
            connected: Some(inst.connected),
        }
    }
}

/// Parameters for the random generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub edge_prob: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self { edge_prob: 2.0 / 3.0 }
    }
}

impl Instance {
    pub fn from_graph(id: impl Into<String>, kind: InstanceKind, seed: u64, graph: Graph) -> Self {
        let connected = graph.is_connected();
        Self { id: id.into(), kind, seed, graph, target_edge: None, connected }
    }

    pub fn generate(kind: InstanceKind, n: usize, seed: u64, params: GenParams) -> Result<Self> {
        let graph = match kind {
            InstanceKind::Ring => gen_ring(n)?,
            InstanceKind::Regular3 => gen_random_regular(n, 3, seed)?,
            InstanceKind::Erdos => gen_erdos_renyi(n, params.edge_prob, seed)?,
            InstanceKind::Sk => gen_sk(n, seed)?,
            InstanceKind::Custom => {
                return Err(Error::InvalidInstance("custom instances are loaded, not generated".into()))
            }
        };
        let id = format!("{}-n{n}-s{seed}", kind.tag());
        Ok(Self::from_graph(id, kind, seed, graph))
    }
}

pub fn write_ndjson<W: Write>(mut w: W, instances: &[Instance]) -> Result<()> {
    for inst in instances {
        serde_json::to_writer(&mut w, inst)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads newline-delimited instances; blank lines are skipped.
pub fn read_ndjson<R: BufRead>(r: R) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_edges() {
        let g = gen_ring(4).unwrap();
        let e: Vec<_> = g.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(e, vec![(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(gen_ring(3).unwrap().edges().len(), 3);
        assert!(gen_ring(2).is_err());
    }

    #[test]
    fn regular_graphs() {
        let k4 = gen_random_regular(4, 3, 0).unwrap();
        assert_eq!(k4.edges().len(), 6);
        assert!(gen_random_regular(5, 3, 0).is_err());
        let a = gen_random_regular(8, 3, 7).unwrap();
        let b = gen_random_regular(8, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!((0..8).all(|v| a.degree(v) == 3));
    }

    #[test]
    fn erdos_extremes() {
        assert_eq!(gen_erdos_renyi(6, 1.0, 0).unwrap().edges().len(), 15);
        assert!(gen_erdos_renyi(6, 0.0, 0).unwrap().edges().is_empty());
        assert!(gen_erdos_renyi(6, 1.5, 0).is_err());
    }

    #[test]
    fn sk_shape() {
        let g = gen_sk(4, 3).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert_eq!(g.biases().len(), 4);
        assert_eq!(g, gen_sk(4, 3).unwrap());
        assert!(gen_sk(1, 0).is_err());
    }

    #[test]
    fn small_spectra() {
        let s = diagonal_spectrum(&gen_ring(4).unwrap()).unwrap();
        assert_eq!(s.e_min, -4.0);
        assert_eq!(s.ground_indices, vec![0b0101, 0b1010]);
        let s = diagonal_spectrum(&Graph::unweighted(2, &[(0, 1)]).unwrap()).unwrap();
        assert_eq!((s.e_min, s.degeneracy), (-1.0, 2));
    }

    #[test]
    fn spectrum_errors() {
        let empty = Graph::unweighted(3, &[]).unwrap();
        assert!(matches!(diagonal_spectrum(&empty), Err(Error::Degenerate(_))));
        let big = gen_ring(30).unwrap();
        assert!(matches!(diagonal_spectrum(&big), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let inst = Instance::generate(InstanceKind::Sk, 5, 11, GenParams::default()).unwrap();
        let mut buf = Vec::new();
        write_ndjson(&mut buf, std::slice::from_ref(&inst)).unwrap();
        let back = read_ndjson(&buf[..]).unwrap();
        assert_eq!(back, vec![inst]);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("{\"id\":\"sk-n5-s11\",\"kind\":\"sk\",\"n\":5,\"seed\":11,\"edges\":[[0,1,"));
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::unweighted(3, &[(0, 0)]).is_err());
        assert!(Graph::unweighted(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::unweighted(3, &[(0, 3)]).is_err());
        assert!(Graph::new(2, &[(0, 1, 1.0)], vec![0.0]).is_err());
    }
}
