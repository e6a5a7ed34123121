//! Hamiltonian-cycle search in sparse graphs: forced-edge preprocessing
//! with machine-checkable infeasibility certificates, and a
//! rotation-extension heuristic with restarts. Weights are ignored
//! throughout; the contract is a tour or nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::Vertex;
use crate::sparse::{edge_id, SparseGraph};

/// Why no Hamiltonian cycle can exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateClaim {
    /// After forced-edge propagation the vertex has fewer than two usable
    /// edges left.
    DegreeDeficient { vertex: Vertex },
    /// Forced edges close a cycle over fewer than n vertices, listed in
    /// cycle order.
    ForcedSubcycle { cycle: Vec<Vertex> },
}

/// One propagation step in a certificate derivation. Each step's side
/// condition is validated during replay, so an accepted certificate
/// implies non-Hamiltonicity regardless of how it was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationStep {
    /// The vertex has exactly two usable edges left; both become forced.
    ForceAt { vertex: Vertex },
    /// The vertex already has two forced edges; the non-forced edge to
    /// `other` is dropped.
    Remove { vertex: Vertex, other: Vertex },
}

/// A claim of infeasibility plus the derivation that grounds it;
/// re-checked against the raw graph by [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub claim: CertificateClaim,
    pub steps: Vec<DerivationStep>,
}

#[derive(Clone, Debug)]
pub enum HcpOutcome {
    Found { tour: Vec<Vertex>, effort: u64 },
    NotFound { effort: u64 },
    Infeasible {
        certificate: InfeasibilityCertificate,
        effort: u64,
    },
}

impl HcpOutcome {
    pub fn effort(&self) -> u64 {
        match self {
            HcpOutcome::Found { effort, .. }
            | HcpOutcome::NotFound { effort }
            | HcpOutcome::Infeasible { effort, .. } => *effort,
        }
    }

    pub fn tour(&self) -> Option<&[Vertex]> {
        match self {
            HcpOutcome::Found { tour, .. } => Some(tour),
            _ => None,
        }
    }
}

/// Result of forced-edge propagation.
#[derive(Clone, Debug)]
pub struct PruneResult {
    /// Forced edges as (u, v) with u < v, sorted.
    pub forced: Vec<(Vertex, Vertex)>,
    pub certificate: Option<InfeasibilityCertificate>,
    /// Set when the forced edges alone already form a Hamiltonian cycle.
    pub hamiltonian: Option<Vec<Vertex>>,
    /// Edges logically removed by propagation, as (u, v) with u < v.
    pub removed: Vec<(Vertex, Vertex)>,
}

/// Marks both edges at every degree-2 vertex as forced, then iterates to
/// fixpoint: a vertex with two forced edges has its other edges logically
/// removed, which lowers neighbor degrees and may force more edges.
pub fn prune_forced_edges(graph: &SparseGraph) -> PruneResult {
    Pruner::new(graph).run()
}

struct Pruner<'a> {
    graph: &'a SparseGraph,
    alive: Vec<Vec<bool>>,
    eff_deg: Vec<usize>,
    forced_deg: Vec<u8>,
    forced: std::collections::HashSet<u64>,
    forced_adj: Vec<Vec<Vertex>>,
    // union-find over forced-path components, tracking vertex count
    uf_parent: Vec<u32>,
    uf_size: Vec<u32>,
    queue: Vec<Vertex>,
    removed: Vec<(Vertex, Vertex)>,
    steps: Vec<DerivationStep>,
}

impl<'a> Pruner<'a> {
    fn new(graph: &'a SparseGraph) -> Self {
        let n = graph.dimension();
        Pruner {
            graph,
            alive: (0..n).map(|v| vec![true; graph.degree(v as Vertex)]).collect(),
            eff_deg: (0..n).map(|v| graph.degree(v as Vertex)).collect(),
            forced_deg: vec![0; n],
            forced: std::collections::HashSet::new(),
            forced_adj: vec![Vec::new(); n],
            uf_parent: (0..n as u32).collect(),
            uf_size: vec![1; n],
            queue: Vec::new(),
            removed: Vec::new(),
            steps: Vec::new(),
        }
    }

    fn find(&mut self, v: u32) -> u32 {
        let mut root = v;
        while self.uf_parent[root as usize] != root {
            root = self.uf_parent[root as usize];
        }
        let mut cur = v;
        while self.uf_parent[cur as usize] != root {
            let next = self.uf_parent[cur as usize];
            self.uf_parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn run(mut self) -> PruneResult {
        let n = self.graph.dimension();
        for v in 0..n as Vertex {
            if self.eff_deg[v as usize] < 2 {
                return self.certify(CertificateClaim::DegreeDeficient { vertex: v });
            }
            if self.eff_deg[v as usize] == 2 {
                self.queue.push(v);
            }
        }
        while let Some(v) = self.queue.pop() {
            if self.forced_deg[v as usize] == 2 {
                continue;
            }
            debug_assert_eq!(self.eff_deg[v as usize], 2);
            let neighbors: Vec<Vertex> = self
                .graph
                .neighbors(v)
                .iter()
                .zip(&self.alive[v as usize])
                .filter(|&(_, &a)| a)
                .map(|(&u, _)| u)
                .collect();
            self.steps.push(DerivationStep::ForceAt { vertex: v });
            for u in neighbors {
                if self.forced.contains(&edge_id(v, u)) {
                    continue;
                }
                match self.force_edge(v, u) {
                    ForceStep::Ok => {}
                    ForceStep::Certificate(c) => return self.certify(c),
                    ForceStep::Hamiltonian(cycle) => return self.finish(None, Some(cycle)),
                }
            }
        }
        self.finish(None, None)
    }

    fn certify(self, claim: CertificateClaim) -> PruneResult {
        let steps = self.steps.clone();
        self.finish(Some(InfeasibilityCertificate { claim, steps }), None)
    }

    fn force_edge(&mut self, u: Vertex, v: Vertex) -> ForceStep {
        let ru = self.find(u);
        let rv = self.find(v);
        if ru == rv {
            // Closing a forced path: the component is exactly the cycle.
            let cycle = self.forced_path_between(u, v);
            self.forced.insert(edge_id(u, v));
            return if cycle.len() == self.graph.dimension() {
                ForceStep::Hamiltonian(cycle)
            } else {
                ForceStep::Certificate(CertificateClaim::ForcedSubcycle { cycle })
            };
        }
        let (big, small) = if self.uf_size[ru as usize] >= self.uf_size[rv as usize] {
            (ru, rv)
        } else {
            (rv, ru)
        };
        self.uf_parent[small as usize] = big;
        self.uf_size[big as usize] += self.uf_size[small as usize];
        self.forced.insert(edge_id(u, v));
        self.forced_adj[u as usize].push(v);
        self.forced_adj[v as usize].push(u);
        self.forced_deg[u as usize] += 1;
        self.forced_deg[v as usize] += 1;
        for w in [u, v] {
            if self.forced_deg[w as usize] == 2 {
                if let Some(c) = self.drop_unforced_at(w) {
                    return ForceStep::Certificate(c);
                }
            }
        }
        ForceStep::Ok
    }

    /// Logically removes the non-forced edges at `w`, propagating degree drops.
    fn drop_unforced_at(&mut self, w: Vertex) -> Option<CertificateClaim> {
        let neighbors: Vec<(usize, Vertex)> = self
            .graph
            .neighbors(w)
            .iter()
            .enumerate()
            .filter(|&(i, &z)| self.alive[w as usize][i] && !self.forced.contains(&edge_id(w, z)))
            .map(|(i, &z)| (i, z))
            .collect();
        for (i, z) in neighbors {
            self.alive[w as usize][i] = false;
            let back = self.graph.neighbors(z).binary_search(&w).unwrap();
            self.alive[z as usize][back] = false;
            self.eff_deg[w as usize] -= 1;
            self.eff_deg[z as usize] -= 1;
            self.removed.push((w.min(z), w.max(z)));
            self.steps.push(DerivationStep::Remove { vertex: w, other: z });
            if self.eff_deg[z as usize] < 2 {
                return Some(CertificateClaim::DegreeDeficient { vertex: z });
            }
            if self.eff_deg[z as usize] == 2 {
                self.queue.push(z);
            }
        }
        None
    }

    /// Walks the forced path from `u` to `v` (they are the two ends of one
    /// forced-path component).
    fn forced_path_between(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![u];
        let mut prev = u;
        let mut cur = *self.forced_adj[u as usize]
            .first()
            .expect("path end has one forced edge");
        while cur != v {
            path.push(cur);
            let next = self.forced_adj[cur as usize]
                .iter()
                .copied()
                .find(|&z| z != prev)
                .expect("interior path vertex has two forced edges");
            prev = cur;
            cur = next;
        }
        path.push(v);
        path
    }

    fn finish(
        mut self,
        certificate: Option<InfeasibilityCertificate>,
        hamiltonian: Option<Vec<Vertex>>,
    ) -> PruneResult {
        let mut forced: Vec<(Vertex, Vertex)> =
            self.forced.iter().map(|&id| crate::sparse::id_endpoints(id)).collect();
        forced.sort_unstable();
        self.removed.sort_unstable();
        self.removed.dedup();
        PruneResult {
            forced,
            certificate,
            hamiltonian,
            removed: self.removed,
        }
    }
}

enum ForceStep {
    Ok,
    Certificate(CertificateClaim),
    Hamiltonian(Vec<Vertex>),
}

/// Replays a certificate derivation against the raw graph, validating
/// every step's side condition, then checks the headline claim. Each rule
/// is individually sound for Hamiltonicity, so an accepted certificate
/// proves the graph has no tour no matter who produced it.
pub fn verify_certificate(graph: &SparseGraph, cert: &InfeasibilityCertificate) -> bool {
    let n = graph.dimension();
    let mut removed: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let mut forced: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let alive_at = |v: Vertex, removed: &std::collections::HashSet<u64>| -> Vec<Vertex> {
        graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !removed.contains(&edge_id(v, u)))
            .collect()
    };
    for step in &cert.steps {
        match *step {
            DerivationStep::ForceAt { vertex } => {
                // Sound because a cycle visits this vertex on exactly two
                // edges, and only two usable ones remain.
                let alive = alive_at(vertex, &removed);
                if alive.len() != 2 {
                    return false;
                }
                for u in alive {
                    forced.insert(edge_id(vertex, u));
                }
            }
            DerivationStep::Remove { vertex, other } => {
                // Sound because two edges at this vertex are already known
                // to be in every tour, so no third edge can be.
                let forced_here = graph
                    .neighbors(vertex)
                    .iter()
                    .filter(|&&u| forced.contains(&edge_id(vertex, u)))
                    .count();
                let id = edge_id(vertex, other);
                if forced_here < 2
                    || !graph.has_edge(vertex, other)
                    || forced.contains(&id)
                    || removed.contains(&id)
                {
                    return false;
                }
                removed.insert(id);
            }
        }
    }
    match &cert.claim {
        CertificateClaim::DegreeDeficient { vertex } => alive_at(*vertex, &removed).len() < 2,
        CertificateClaim::ForcedSubcycle { cycle } => {
            let m = cycle.len();
            if m < 3 || m >= n {
                return false;
            }
            let mut seen = std::collections::HashSet::new();
            if !cycle.iter().all(|&v| seen.insert(v)) {
                return false;
            }
            (0..m).all(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % m]);
                graph.has_edge(a, b) && forced.contains(&edge_id(a, b))
            })
        }
    }
}

/// Permutation-plus-membership check with no access to search internals.
pub fn validate_hcp_tour(graph: &SparseGraph, order: &[Vertex]) -> bool {
    crate::tour::check_permutation(order, graph.dimension()).is_ok()
        && (0..order.len()).all(|i| graph.has_edge(order[i], order[(i + 1) % order.len()]))
}

/// Rotation-extension search for any Hamiltonian cycle.
///
/// Grows a path from a random start, extending greedily; when stuck it
/// rotates an endpoint (path p1..pk plus edge (pk, pi) exposes p(i+1)),
/// working both ends on alternating turns. The cycle closes once the path
/// spans all vertices and the ends are adjacent. Stagnation triggers a
/// restart from a fresh random vertex. Deterministic in (graph, budget,
/// seed); the budget counts extension and rotation moves.
pub fn find_hamiltonian_cycle(graph: &SparseGraph, budget: u64, seed: u64) -> Result<HcpOutcome> {
    if budget == 0 {
        return Err(Error::Contract("hcp budget must be positive".into()));
    }
    if graph.min_degree() < 2 {
        return Err(Error::Contract(
            "hcp needs minimum degree 2; run repair first".into(),
        ));
    }
    if !graph.is_connected() {
        return Err(Error::Contract(
            "hcp needs a connected graph; run repair first".into(),
        ));
    }

    let pruned = prune_forced_edges(graph);
    if let Some(certificate) = pruned.certificate {
        debug_assert!(verify_certificate(graph, &certificate));
        return Ok(HcpOutcome::Infeasible {
            certificate,
            effort: 0,
        });
    }
    if let Some(tour) = pruned.hamiltonian {
        debug_assert!(validate_hcp_tour(graph, &tour));
        return Ok(HcpOutcome::Found { tour, effort: 0 });
    }

    // Search the propagation-reduced graph when it stays connected;
    // removed edges cannot lie on any Hamiltonian cycle.
    let search_graph;
    let graph_ref = if pruned.removed.is_empty() {
        graph
    } else {
        let keep: Vec<(Vertex, Vertex, i64)> = graph
            .edges()
            .filter(|&(u, v, _)| pruned.removed.binary_search(&(u, v)).is_err())
            .collect();
        let reduced = SparseGraph::from_weighted_edges(graph.dimension(), &keep)
            .expect("reduction keeps a subset of valid edges");
        if reduced.is_connected() {
            search_graph = reduced;
            &search_graph
        } else {
            graph
        }
    };

    let outcome = RotationSearch::new(graph_ref, budget, seed).run();
    if let HcpOutcome::Found { tour, .. } = &outcome {
        debug_assert!(validate_hcp_tour(graph, tour));
    }
    Ok(outcome)
}

/// Restart when the path has not grown for this many consecutive moves.
fn stagnation_limit(n: usize) -> u64 {
    50 * n as u64
}

struct RotationSearch<'a> {
    graph: &'a SparseGraph,
    n: usize,
    budget: u64,
    rng: ChaCha8Rng,
    // circular path buffer
    buf: Vec<Vertex>,
    pos: Vec<usize>, // physical buffer index, usize::MAX when off-path
    head: usize,
    len: usize,
    unvisited_deg: Vec<u32>,
    effort: u64,
    stagnation: u64,
    work_tail: bool,
    pivot_scratch: Vec<usize>,
}

const OFF_PATH: usize = usize::MAX;

impl<'a> RotationSearch<'a> {
    fn new(graph: &'a SparseGraph, budget: u64, seed: u64) -> Self {
        let n = graph.dimension();
        RotationSearch {
            graph,
            n,
            budget,
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf: vec![0; n],
            pos: vec![OFF_PATH; n],
            head: 0,
            len: 0,
            unvisited_deg: vec![0; n],
            effort: 0,
            stagnation: 0,
            work_tail: true,
            pivot_scratch: Vec::new(),
        }
    }

    fn run(mut self) -> HcpOutcome {
        loop {
            self.restart();
            loop {
                if self.len == self.n {
                    let (h, t) = (self.head_vertex(), self.tail_vertex());
                    if self.graph.has_edge(h, t) {
                        return HcpOutcome::Found {
                            tour: self.extract_tour(),
                            effort: self.effort,
                        };
                    }
                }
                if self.effort >= self.budget {
                    return HcpOutcome::NotFound {
                        effort: self.budget,
                    };
                }
                if !self.step() || self.stagnation > stagnation_limit(self.n) {
                    break; // restart
                }
            }
        }
    }

    fn restart(&mut self) {
        self.pos.fill(OFF_PATH);
        for v in 0..self.n {
            self.unvisited_deg[v] = self.graph.degree(v as Vertex) as u32;
        }
        self.head = 0;
        self.len = 0;
        self.stagnation = 0;
        self.work_tail = true;
        let start = self.rng.random_range(0..self.n) as Vertex;
        self.buf[0] = start;
        self.pos[start as usize] = 0;
        self.len = 1;
        self.mark_visited(start);
    }

    fn mark_visited(&mut self, v: Vertex) {
        for &u in self.graph.neighbors(v) {
            self.unvisited_deg[u as usize] -= 1;
        }
    }

    fn head_vertex(&self) -> Vertex {
        self.buf[self.head]
    }

    fn tail_vertex(&self) -> Vertex {
        self.buf[(self.head + self.len - 1) % self.n]
    }

    fn logical(&self, physical: usize) -> usize {
        (physical + self.n - self.head) % self.n
    }

    fn vertex_at(&self, logical: usize) -> Vertex {
        self.buf[(self.head + logical) % self.n]
    }

    fn on_path(&self, v: Vertex) -> bool {
        self.pos[v as usize] != OFF_PATH
    }

    /// One extension or rotation move. Returns false when no move exists
    /// at either end (forces a restart).
    fn step(&mut self) -> bool {
        let at_tail = self.work_tail;
        self.work_tail = !self.work_tail;
        if self.try_extend(at_tail) || self.try_extend(!at_tail) {
            self.effort += 1;
            self.stagnation = 0;
            return true;
        }
        // Cycle re-root: if the ends are adjacent the path plus the closing
        // edge is a cycle over the visited set; when the path is not yet
        // full, re-root it to end at a vertex that still has unvisited
        // neighbors.
        if self.len < self.n
            && self.len >= 3
            && self.graph.has_edge(self.head_vertex(), self.tail_vertex())
        {
            if let Some(target) = self.pick_reroot_target() {
                self.reroot_to(target);
                self.effort += 1;
                self.stagnation += 1;
                return true;
            }
        }
        if self.rotate(at_tail) || self.rotate(!at_tail) {
            self.effort += 1;
            self.stagnation += 1;
            return true;
        }
        false
    }

    fn try_extend(&mut self, at_tail: bool) -> bool {
        if self.len == self.n {
            return false;
        }
        let end = if at_tail {
            self.tail_vertex()
        } else {
            self.head_vertex()
        };
        let count = self
            .graph
            .neighbors(end)
            .iter()
            .filter(|&&u| !self.on_path(u))
            .count();
        if count == 0 {
            return false;
        }
        let pick = self.rng.random_range(0..count);
        let next = self
            .graph
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&u| !self.on_path(u))
            .nth(pick)
            .unwrap();
        if at_tail {
            let p = (self.head + self.len) % self.n;
            self.buf[p] = next;
            self.pos[next as usize] = p;
        } else {
            self.head = (self.head + self.n - 1) % self.n;
            self.buf[self.head] = next;
            self.pos[next as usize] = self.head;
        }
        self.len += 1;
        self.mark_visited(next);
        true
    }

    /// Rotation at the tail: path p0..p(l-1) plus edge (p(l-1), p(i))
    /// yields the path p0..p(i), p(l-1)..p(i+1) with new tail p(i+1);
    /// mirrored at the head. Prefers pivots whose exposed endpoint can
    /// make progress (extend, or close when the path is full).
    fn rotate(&mut self, at_tail: bool) -> bool {
        let (end, skip_logical) = if at_tail {
            (self.tail_vertex(), self.len - 2)
        } else {
            (self.head_vertex(), 1)
        };
        if self.len < 3 {
            return false;
        }
        let other_end = if at_tail {
            self.head_vertex()
        } else {
            self.tail_vertex()
        };

        self.pivot_scratch.clear();
        let mut preferred = 0usize;
        for &u in self.graph.neighbors(end) {
            if !self.on_path(u) {
                continue;
            }
            let lp = self.logical(self.pos[u as usize]);
            if lp == skip_logical {
                continue; // path-adjacent: rotation would be a no-op
            }
            if at_tail && lp == self.len - 1 {
                continue;
            }
            if !at_tail && lp == 0 {
                continue;
            }
            let exposed = if at_tail {
                self.vertex_at(lp + 1)
            } else {
                self.vertex_at(lp - 1)
            };
            let good = if self.len == self.n {
                self.graph.has_edge(exposed, other_end)
            } else {
                self.unvisited_deg[exposed as usize] > 0
            };
            if good {
                preferred += 1;
                self.pivot_scratch.push(lp | (1 << 63));
            } else {
                self.pivot_scratch.push(lp);
            }
        }
        if self.pivot_scratch.is_empty() {
            return false;
        }
        let lp = if preferred > 0 {
            let pick = self.rng.random_range(0..preferred);
            self.pivot_scratch
                .iter()
                .filter(|&&x| x >> 63 == 1)
                .nth(pick)
                .map(|&x| x & !(1 << 63))
                .unwrap()
        } else {
            let pick = self.rng.random_range(0..self.pivot_scratch.len());
            self.pivot_scratch[pick]
        };
        if at_tail {
            self.reverse_logical(lp + 1, self.len - 1);
        } else {
            self.reverse_logical(0, lp - 1);
        }
        true
    }

    fn reverse_logical(&mut self, from: usize, to: usize) {
        let mut steps = (to - from + 1) / 2;
        let mut a = (self.head + from) % self.n;
        let mut b = (self.head + to) % self.n;
        while steps > 0 {
            self.buf.swap(a, b);
            self.pos[self.buf[a] as usize] = a;
            self.pos[self.buf[b] as usize] = b;
            a = (a + 1) % self.n;
            b = (b + self.n - 1) % self.n;
            steps -= 1;
        }
    }

    /// A path vertex with unvisited neighbors, sampled uniformly-ish.
    fn pick_reroot_target(&mut self) -> Option<usize> {
        for _ in 0..16 {
            let lp = self.rng.random_range(0..self.len);
            if self.unvisited_deg[self.vertex_at(lp) as usize] > 0 {
                return Some(lp);
            }
        }
        let offset = self.rng.random_range(0..self.len);
        (0..self.len)
            .map(|i| (offset + i) % self.len)
            .find(|&lp| self.unvisited_deg[self.vertex_at(lp) as usize] > 0)
    }

    /// Rotates the cyclic path so it ends at the vertex now at logical
    /// position `target`; requires the ends to be adjacent.
    fn reroot_to(&mut self, target: usize) {
        let k = target + 1;
        if k == self.len {
            return;
        }
        self.reverse_logical(0, k - 1);
        self.reverse_logical(k, self.len - 1);
        self.reverse_logical(0, self.len - 1);
    }

    fn extract_tour(&self) -> Vec<Vertex> {
        (0..self.len).map(|i| self.vertex_at(i)).collect()
    }
}

/// Test-support generator: a random permutation cycle on n vertices plus
/// `extra_edges` random non-duplicate chords; Hamiltonian by construction.
/// Unit weights, since HCP ignores them.
pub fn plant_hamiltonian_graph(n: usize, extra_edges: usize, seed: u64) -> Result<SparseGraph> {
    if n < 3 {
        return Err(Error::TooFewCities(n));
    }
    let max_extra = n * (n - 3) / 2;
    if extra_edges > max_extra {
        return Err(Error::TooManyChords {
            requested: extra_edges,
            max: max_extra,
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    use rand::seq::SliceRandom;
    perm.shuffle(&mut rng);
    let mut present = std::collections::HashSet::with_capacity(n + extra_edges);
    let mut edges = Vec::with_capacity(n + extra_edges);
    for i in 0..n {
        let (u, v) = (perm[i], perm[(i + 1) % n]);
        present.insert(edge_id(u, v));
        edges.push((u.min(v), u.max(v)));
    }
    let mut remaining = extra_edges;
    while remaining > 0 {
        let u = rng.random_range(0..n) as Vertex;
        let v = rng.random_range(0..n) as Vertex;
        if u == v || !present.insert(edge_id(u, v)) {
            continue;
        }
        edges.push((u.min(v), u.max(v)));
        remaining -= 1;
    }
    SparseGraph::from_unit_edges(n, &edges)
}
