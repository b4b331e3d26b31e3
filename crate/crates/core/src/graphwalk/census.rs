use std::collections::{BTreeMap, VecDeque};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genus2::{NodeId, Vertex};

/// Largest prime accepted by [`census`].
pub const CENSUS_MAX_P: u64 = 50;

/// The connected component of a vertex in the (2,2)-isogeny graph.
#[derive(Clone, Debug)]
pub struct CensusResult {
    pub p: u64,
    /// One witness per vertex.
    pub vertices: BTreeMap<NodeId, Vertex>,
    /// The 15 outcomes of each vertex, as node ids in canonical order.
    pub edges: BTreeMap<NodeId, Vec<NodeId>>,
    pub automorphisms: BTreeMap<NodeId, u64>,
    /// Sum of 1/#Aut over all vertices.
    pub mass: Ratio<i128>,
}

/// Breadth-first closure of `start` under all 15 neighbour maps.
pub fn census(start: &Vertex) -> Result<CensusResult> {
    let p = start.ctx().p();
    if p > CENSUS_MAX_P {
        return Err(Error::CensusBudget(format!("p = {p} exceeds {CENSUS_MAX_P}")));
    }
    let mut vertices = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let mut queue = VecDeque::new();
    vertices.insert(start.node_id()?, start.clone());
    queue.push_back(start.clone());
    while let Some(v) = queue.pop_front() {
        let id = v.node_id()?;
        let mut out = Vec::with_capacity(15);
        for o in v.neighbors()? {
            let w = o.into_vertex();
            let wid = w.node_id()?;
            if !vertices.contains_key(&wid) {
                vertices.insert(wid.clone(), w.clone());
                queue.push_back(w);
            }
            out.push(wid);
        }
        edges.insert(id, out);
    }
    let mut automorphisms = BTreeMap::new();
    let mut mass = Ratio::from_integer(0);
    for (id, v) in &vertices {
        let a = v.automorphism_count()?;
        automorphisms.insert(id.clone(), a);
        mass += Ratio::new(1, a as i128);
    }
    Ok(CensusResult {
        p,
        vertices,
        edges,
        automorphisms,
        mass,
    })
}

impl CensusResult {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn product_count(&self) -> usize {
        self.vertices.keys().filter(|id| id.is_product()).count()
    }

    pub fn jacobian_count(&self) -> usize {
        self.len() - self.product_count()
    }

    /// Every vertex has 15 outcomes, all inside the vertex set.
    pub fn is_closed_and_regular(&self) -> bool {
        self.edges.len() == self.vertices.len()
            && self
                .edges
                .values()
                .all(|out| out.len() == 15 && out.iter().all(|w| self.vertices.contains_key(w)))
    }

    /// Number of the 15 outcomes of `u` isomorphic to `v`.
    pub fn multiplicity(&self, u: &NodeId, v: &NodeId) -> usize {
        self.edges.get(u).map_or(0, |out| out.iter().filter(|w| *w == v).count())
    }

    /// Edge symmetry: v is a neighbour of u iff u is a neighbour of v, and
    /// multiplicities satisfy m(u, v) |Aut v| = m(v, u) |Aut u| (each side
    /// counts the isogenies between u and v, up to automorphisms of the
    /// target). Returns the offending pairs.
    pub fn symmetry_violations(&self) -> Vec<(NodeId, NodeId)> {
        let mut bad = Vec::new();
        for (u, out) in &self.edges {
            for v in out {
                let muv = self.multiplicity(u, v) as u64;
                let mvu = self.multiplicity(v, u) as u64;
                if mvu == 0 || muv * self.automorphisms[v] != mvu * self.automorphisms[u] {
                    bad.push((u.clone(), v.clone()));
                }
            }
        }
        bad.sort();
        bad.dedup();
        bad
    }

    /// Pairs where the plain multiplicities differ (expected only at
    /// vertices with extra automorphisms).
    pub fn unweighted_asymmetries(&self) -> usize {
        let mut n = 0;
        for (u, out) in &self.edges {
            for v in out {
                if self.multiplicity(u, v) != self.multiplicity(v, u) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Stationary distribution of the simple random walk: proportional to
    /// 1/#Aut.
    pub fn stationary(&self) -> BTreeMap<NodeId, f64> {
        let total: f64 = self.automorphisms.values().map(|&a| 1.0 / a as f64).sum();
        self.automorphisms
            .iter()
            .map(|(id, &a)| (id.clone(), 1.0 / a as f64 / total))
            .collect()
    }
}

/// Endpoint statistics of random walks compared with the expansion bound.
#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub p: u64,
    pub vertices: usize,
    pub walk_len: usize,
    pub trials: usize,
    /// Total variation distance to the uniform distribution.
    pub tv_uniform: f64,
    /// Largest per-vertex |Pr[end = v] - 1/#S|.
    pub max_dev_uniform: f64,
    /// Total variation distance to the 1/#Aut-weighted distribution.
    pub tv_stationary: f64,
    pub max_dev_stationary: f64,
    /// (2 sqrt(14) / 15)^n.
    pub bound: f64,
    /// Standard deviation of a per-vertex frequency estimate at the most
    /// likely vertex; deviations below a few of these are sampling noise.
    pub noise: f64,
    pub warnings: Vec<String>,
}

/// Per-vertex bound (2 sqrt(N - 1) / N)^n with N = 15.
pub fn mixing_bound(n: usize) -> f64 {
    (2.0 * 14f64.sqrt() / 15.0).powi(n as i32)
}

/// Simulate `trials` uniform random walks of length `n` on the census
/// graph from `start` (each step picks one of the 15 outcomes uniformly).
pub fn mixing_stats(census: &CensusResult, start: &NodeId, n: usize, trials: usize, seed: u64) -> Result<MixingReport> {
    if !census.vertices.contains_key(start) {
        return Err(Error::InvalidInput(format!("{start} is not a census vertex")));
    }
    let ids: Vec<&NodeId> = census.vertices.keys().collect();
    let index: BTreeMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let adj: Vec<Vec<usize>> = ids
        .iter()
        .map(|id| census.edges[*id].iter().map(|w| index[w]).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; ids.len()];
    for _ in 0..trials {
        let mut v = index[start];
        for _ in 0..n {
            v = adj[v][rng.gen_range(0..15)];
        }
        counts[v] += 1;
    }
    let size = ids.len() as f64;
    let stationary = census.stationary();
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let dev_u: Vec<f64> = freq.iter().map(|f| (f - 1.0 / size).abs()).collect();
    let dev_s: Vec<f64> = ids.iter().zip(&freq).map(|(id, f)| (f - stationary[*id]).abs()).collect();
    let max = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    let pmax = stationary.values().cloned().fold(0.0, f64::max);
    let bound = mixing_bound(n);
    let mut warnings = Vec::new();
    let max_dev_uniform = max(&dev_u);
    if max_dev_uniform > bound {
        warnings.push(format!(
            "max per-vertex deviation from uniform {max_dev_uniform:.3e} exceeds the expansion bound {bound:.3e}"
        ));
    }
    let noise = (pmax * (1.0 - pmax) / trials as f64).sqrt();
    if bound < noise {
        warnings.push(format!(
            "the bound {bound:.3e} is below the sampling noise {noise:.3e} of {trials} trials"
        ));
    }
    let min_aut = census.automorphisms.values().min().copied().unwrap_or(2);
    if census.automorphisms.values().any(|&a| a != min_aut) {
        warnings.push("automorphism groups vary, so the walk's limit is the 1/#Aut-weighted distribution, not the uniform one".into());
    }
    Ok(MixingReport {
        p: census.p,
        vertices: ids.len(),
        walk_len: n,
        trials,
        tv_uniform: dev_u.iter().sum::<f64>() / 2.0,
        max_dev_uniform,
        tv_stationary: dev_s.iter().sum::<f64>() / 2.0,
        max_dev_stationary: max(&dev_s),
        bound,
        noise,
        warnings,
    })
}
