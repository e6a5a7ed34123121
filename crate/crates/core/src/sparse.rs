//! Candidate-edge graphs: k-nearest-neighbor construction, degree and
//! connectivity repair, big-M completion, and the edge-list text format.

use crate::error::{Error, Result};
use crate::instance::{EuclideanInstance, Vertex};

/// Undirected weighted graph over instance vertices with sorted
/// per-vertex neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseGraph {
    adjacency: Vec<Vec<Vertex>>,
    weights: Vec<Vec<i64>>,
    edge_count: usize,
}

impl SparseGraph {
    /// Builds from undirected edges. Self-loops and duplicate edges are rejected.
    pub fn from_weighted_edges(n: usize, edges: &[(Vertex, Vertex, i64)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut weights = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u == v {
                return Err(Error::InvalidEdgeList(format!("self-loop at vertex {}", u + 1)));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidEdgeList(format!(
                    "edge ({}, {}) out of range for n = {n}",
                    u + 1,
                    v + 1
                )));
            }
            let key = edge_id(u, v);
            if !seen.insert(key) {
                return Err(Error::InvalidEdgeList(format!(
                    "duplicate edge ({}, {})",
                    u + 1,
                    v + 1
                )));
            }
            adjacency[u as usize].push(v);
            weights[u as usize].push(w);
            adjacency[v as usize].push(u);
            weights[v as usize].push(w);
        }
        let mut g = Self {
            adjacency,
            weights,
            edge_count: edges.len(),
        };
        g.sort_adjacency();
        Ok(g)
    }

    /// Builds from vertex pairs, weights taken from the instance metric.
    pub fn from_metric_edges(
        instance: &EuclideanInstance,
        edges: &[(Vertex, Vertex)],
    ) -> Result<Self> {
        let weighted: Vec<_> = edges
            .iter()
            .map(|&(u, v)| (u, v, instance.distance(u, v)))
            .collect();
        Self::from_weighted_edges(instance.dimension(), &weighted)
    }

    /// Builds from vertex pairs with unit weights (for weight-agnostic uses).
    pub fn from_unit_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::from_weighted_edges(n, &weighted)
    }

    fn sort_adjacency(&mut self) {
        for v in 0..self.adjacency.len() {
            let mut pairs: Vec<_> = self.adjacency[v]
                .iter()
                .copied()
                .zip(self.weights[v].iter().copied())
                .collect();
            pairs.sort_unstable_by_key(|&(u, _)| u);
            for (i, (u, w)) in pairs.into_iter().enumerate() {
                self.adjacency[v][i] = u;
                self.weights[v][i] = w;
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.dimension())
            .map(|v| self.adjacency[v].len())
            .min()
            .unwrap_or(0)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn neighbor_weights(&self, v: Vertex) -> impl Iterator<Item = (Vertex, i64)> + '_ {
        self.adjacency[v as usize]
            .iter()
            .copied()
            .zip(self.weights[v as usize].iter().copied())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<i64> {
        self.adjacency[u as usize]
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[u as usize][i])
    }

    /// All undirected edges as (u, v, w) with u < v, ordered lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, i64)> + '_ {
        (0..self.dimension() as Vertex).flat_map(move |u| {
            self.neighbor_weights(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn max_weight(&self) -> i64 {
        self.edges().map(|(_, _, w)| w).max().unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.dimension();
        self.edge_count == n * (n - 1) / 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.dimension();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0 as Vertex];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in self.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Total weight of the cyclic order; errors if any consecutive pair
    /// (closing edge included) is not a graph edge.
    pub fn cycle_length(&self, order: &[Vertex]) -> Result<i64> {
        let n = order.len();
        let mut total = 0i64;
        for i in 0..n {
            let (u, v) = (order[i], order[(i + 1) % n]);
            match self.weight(u, v) {
                Some(w) => total += w,
                None => {
                    return Err(Error::Contract(format!(
                        "tour edge ({}, {}) not in graph",
                        u + 1,
                        v + 1
                    )))
                }
            }
        }
        Ok(total)
    }

    /// Graph with the union of both edge sets; weights from `self` win on overlap.
    pub fn union_edges(&self, extra: &[(Vertex, Vertex, i64)]) -> Result<SparseGraph> {
        let mut all: Vec<(Vertex, Vertex, i64)> = self.edges().collect();
        for &(u, v, w) in extra {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !self.has_edge(a, b) {
                all.push((a, b, w));
            }
        }
        Self::from_weighted_edges(self.dimension(), &all)
    }
}

#[inline]
pub(crate) fn edge_id(u: Vertex, v: Vertex) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

#[inline]
pub(crate) fn id_endpoints(id: u64) -> (Vertex, Vertex) {
    ((id >> 32) as Vertex, (id & 0xffff_ffff) as Vertex)
}

/// Candidate graph: edge (i, j) present iff j is among i's k nearest
/// neighbors or i among j's. Nearness is ranked by exact squared distance
/// with ties broken by lower vertex index; weights come from the metric.
pub fn build_knn_candidates(instance: &EuclideanInstance, k: usize) -> Result<SparseGraph> {
    let n = instance.dimension();
    if k < 1 || k > n - 1 {
        return Err(Error::KOutOfRange { k, n });
    }
    let coords = instance.coords();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(n * k);
    let mut scratch: Vec<(f64, Vertex)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        scratch.clear();
        let (xi, yi) = coords[i];
        for (j, &(xj, yj)) in coords.iter().enumerate() {
            if j == i {
                continue;
            }
            let dx = xi - xj;
            let dy = yi - yj;
            scratch.push((dx * dx + dy * dy, j as Vertex));
        }
        let cmp = |a: &(f64, Vertex), b: &(f64, Vertex)| {
            a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1))
        };
        if k < scratch.len() {
            scratch.select_nth_unstable_by(k - 1, cmp);
        }
        for &(_, j) in &scratch[..k] {
            let (a, b) = if (i as Vertex) < j {
                (i as Vertex, j)
            } else {
                (j, i as Vertex)
            };
            edges.push((a, b));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    SparseGraph::from_metric_edges(instance, &edges)
}

/// Makes the graph connected with minimum degree >= 2 by adding metric
/// edges: first the cheapest missing edge at each deficient vertex, then
/// the cheapest edge joining distinct components. Output is a superset of
/// the input edge set.
pub fn repair_min_degree(graph: &SparseGraph, instance: &EuclideanInstance) -> SparseGraph {
    let n = graph.dimension();
    debug_assert_eq!(n, instance.dimension());
    let mut adjacency: Vec<Vec<Vertex>> = (0..n)
        .map(|v| graph.neighbors(v as Vertex).to_vec())
        .collect();
    let mut added: Vec<(Vertex, Vertex)> = Vec::new();

    let mut add_edge = |adjacency: &mut Vec<Vec<Vertex>>,
                        added: &mut Vec<(Vertex, Vertex)>,
                        u: Vertex,
                        v: Vertex| {
        let pos = adjacency[u as usize].binary_search(&v).unwrap_err();
        adjacency[u as usize].insert(pos, v);
        let pos = adjacency[v as usize].binary_search(&u).unwrap_err();
        adjacency[v as usize].insert(pos, u);
        added.push((u.min(v), u.max(v)));
    };

    // Degree repair: lowest-index deficient vertex first, cheapest missing
    // edge at it, ties by neighbor index.
    loop {
        let Some(v) = (0..n as Vertex).find(|&v| adjacency[v as usize].len() < 2) else {
            break;
        };
        let mut best: Option<(i64, Vertex)> = None;
        for u in 0..n as Vertex {
            if u == v || adjacency[v as usize].binary_search(&u).is_ok() {
                continue;
            }
            let d = instance.distance(v, u);
            if best.is_none_or(|(bd, bu)| (d, u) < (bd, bu)) {
                best = Some((d, u));
            }
        }
        let (_, u) = best.expect("a vertex with degree < 2 always has a missing edge");
        add_edge(&mut adjacency, &mut added, v, u);
    }

    // Connectivity repair: cheapest edge between distinct components,
    // ties by lexicographic endpoints.
    loop {
        let comp = components(&adjacency);
        if comp.iter().all(|&c| c == comp[0]) {
            break;
        }
        let mut best: Option<(i64, Vertex, Vertex)> = None;
        for u in 0..n as Vertex {
            for v in (u + 1)..n as Vertex {
                if comp[u as usize] == comp[v as usize] {
                    continue;
                }
                let d = instance.distance(u, v);
                if best.is_none_or(|(bd, bu, bv)| (d, u, v) < (bd, bu, bv)) {
                    best = Some((d, u, v));
                }
            }
        }
        let (_, u, v) = best.expect("distinct components always admit a joining edge");
        add_edge(&mut adjacency, &mut added, u, v);
    }

    if added.is_empty() {
        return graph.clone();
    }
    let extra: Vec<_> = added
        .into_iter()
        .map(|(u, v)| (u, v, instance.distance(u, v)))
        .collect();
    graph
        .union_edges(&extra)
        .expect("repair edges are valid by construction")
}

fn components(adjacency: &[Vec<Vertex>]) -> Vec<u32> {
    let n = adjacency.len();
    let mut comp = vec![u32::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != u32::MAX {
            continue;
        }
        comp[start] = next;
        let mut stack = vec![start as Vertex];
        while let Some(v) = stack.pop() {
            for &u in &adjacency[v as usize] {
                if comp[u as usize] == u32::MAX {
                    comp[u as usize] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    comp
}

/// The sparse graph completed with a prohibitive penalty weight on every
/// missing edge, so heuristics built for complete inputs still run.
#[derive(Clone, Debug)]
pub struct PenaltyCompletion {
    base: SparseGraph,
    penalty: i64,
}

/// penalty = n * max_real_weight + 1, so any tour using a penalty edge is
/// strictly longer than every penalty-free tour.
pub fn complete_with_penalty(graph: &SparseGraph) -> PenaltyCompletion {
    let penalty = graph.dimension() as i64 * graph.max_weight() + 1;
    PenaltyCompletion {
        base: graph.clone(),
        penalty,
    }
}

impl PenaltyCompletion {
    pub fn base(&self) -> &SparseGraph {
        &self.base
    }

    pub fn penalty(&self) -> i64 {
        self.penalty
    }

    pub fn dimension(&self) -> usize {
        self.base.dimension()
    }

    /// Real weight if the edge exists, the penalty otherwise.
    pub fn weight(&self, u: Vertex, v: Vertex) -> i64 {
        self.base.weight(u, v).unwrap_or(self.penalty)
    }

    pub fn is_penalty_edge(&self, u: Vertex, v: Vertex) -> bool {
        !self.base.has_edge(u, v)
    }

    pub fn cycle_length(&self, order: &[Vertex]) -> i64 {
        let n = order.len();
        (0..n)
            .map(|i| self.weight(order[i], order[(i + 1) % n]))
            .sum()
    }

    pub fn cycle_uses_penalty_edge(&self, order: &[Vertex]) -> bool {
        let n = order.len();
        (0..n).any(|i| self.is_penalty_edge(order[i], order[(i + 1) % n]))
    }

    /// Materializes the completion as a complete graph so solvers written
    /// against `SparseGraph` can run on it.
    pub fn to_complete_graph(&self) -> SparseGraph {
        let n = self.base.dimension();
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n as Vertex {
            for v in (u + 1)..n as Vertex {
                edges.push((u, v, self.weight(u, v)));
            }
        }
        SparseGraph::from_weighted_edges(n, &edges).expect("complete edge set is valid")
    }
}

/// Edge, degree, and density summary of a sparse graph.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SparsifyStats {
    pub edge_count: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
    pub retained_fraction: f64,
}

pub fn sparsification_stats(graph: &SparseGraph) -> SparsifyStats {
    let n = graph.dimension();
    let degrees: Vec<usize> = (0..n as Vertex).map(|v| graph.degree(v)).collect();
    SparsifyStats {
        edge_count: graph.edge_count(),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        avg_degree: 2.0 * graph.edge_count() as f64 / n as f64,
        retained_fraction: graph.edge_count() as f64 / (n * (n - 1) / 2) as f64,
    }
}

/// Text edge list: header `n m`, then one `i j w` line per edge with
/// i < j, 1-based vertex ids.
pub fn write_edge_list(graph: &SparseGraph) -> String {
    let mut out = format!("{} {}\n", graph.dimension(), graph.edge_count());
    for (u, v, w) in graph.edges() {
        out.push_str(&format!("{} {} {}\n", u + 1, v + 1, w));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<SparseGraph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidEdgeList("empty input".into()))?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_field(parts.next(), "vertex count")?;
    let m: usize = parse_field(parts.next(), "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut f = line.split_whitespace();
        let i: usize = parse_field(f.next(), "edge endpoint")?;
        let j: usize = parse_field(f.next(), "edge endpoint")?;
        let w: i64 = parse_field(f.next(), "edge weight")?;
        if i < 1 || j < 1 || i > n || j > n {
            return Err(Error::InvalidEdgeList(format!(
                "edge ({i}, {j}) out of range for n = {n}"
            )));
        }
        if i >= j {
            return Err(Error::InvalidEdgeList(format!(
                "edge ({i}, {j}) violates i < j"
            )));
        }
        edges.push(((i - 1) as Vertex, (j - 1) as Vertex, w));
    }
    if edges.len() != m {
        return Err(Error::InvalidEdgeList(format!(
            "header declares {m} edges but {} were listed",
            edges.len()
        )));
    }
    SparseGraph::from_weighted_edges(n, &edges)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::InvalidEdgeList(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::InvalidEdgeList(format!("unparseable {what}")))
}
