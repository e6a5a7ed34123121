//! Optimality proving: best-first branch-and-bound on 1-tree Lagrangian
//! bounds, warm-startable with an incumbent tour. Branching fixes a
//! 1-tree edge at a maximum-degree vertex in or out; integrality of the
//! metric lets a node be pruned as soon as ceil(lb) reaches the upper
//! bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::instance::Vertex;
use crate::onetree::{one_tree_bound, AscentSchedule, EdgeConstraints, OneTree};
use crate::sparse::SparseGraph;
use crate::tour::Tour;

/// Best proven lower bound, incumbent upper bound, and the incumbent
/// itself. `upper` is `None` while no tour is known; when present it
/// always equals the incumbent's length.
#[derive(Clone, Debug)]
pub struct BoundState {
    pub lower: f64,
    pub upper: Option<i64>,
    pub incumbent: Option<Tour>,
}

impl BoundState {
    fn upper_f(&self) -> f64 {
        self.upper.map_or(f64::INFINITY, |u| u as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ExactStatus {
    Optimal,
    Infeasible,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct OptimalResult {
    pub status: ExactStatus,
    pub value: Option<i64>,
    pub tour: Option<Tour>,
    pub nodes_expanded: u64,
    pub root_lb: f64,
    pub bounds: BoundState,
}

#[derive(Clone, Copy, Debug)]
pub struct BnbConfig {
    pub node_budget: u64,
    pub deadline: Option<Instant>,
    pub root_ascent_rounds: u32,
    pub child_ascent_rounds: u32,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig {
            node_budget: u64::MAX,
            deadline: None,
            root_ascent_rounds: 60,
            child_ascent_rounds: 15,
        }
    }
}

/// Snapshot of a node as it is expanded, for bound instrumentation.
pub struct NodeObservation<'a> {
    pub included: &'a [(Vertex, Vertex)],
    pub excluded: &'a [(Vertex, Vertex)],
    /// This node's lower bound.
    pub lower_bound: f64,
    /// Certified global lower bound at this instant.
    pub global_lower: f64,
    pub upper: Option<i64>,
}

/// Called when the incumbent improves; may hand back a strictly better
/// tour to adopt (it is revalidated before use).
pub type IncumbentHook<'a> = dyn FnMut(&Tour) -> Option<Tour> + 'a;
pub type NodeObserver<'a> = dyn FnMut(&NodeObservation<'_>) + 'a;

pub fn branch_and_bound(
    graph: &SparseGraph,
    warm: Option<&Tour>,
    node_budget: u64,
) -> Result<OptimalResult> {
    let config = BnbConfig {
        node_budget,
        ..BnbConfig::default()
    };
    branch_and_bound_with(graph, warm, &config, None, None)
}

pub fn branch_and_bound_with(
    graph: &SparseGraph,
    warm: Option<&Tour>,
    config: &BnbConfig,
    on_incumbent: Option<&mut IncumbentHook<'_>>,
    observer: Option<&mut NodeObserver<'_>>,
) -> Result<OptimalResult> {
    let n = graph.dimension();
    if n < 3 {
        return Err(Error::TooFewCities(n));
    }
    if graph.min_degree() < 2 || !graph.is_connected() {
        return Err(Error::Contract(
            "branch-and-bound needs a connected graph with minimum degree 2".into(),
        ));
    }
    if let Some(t) = warm {
        if !t.is_valid_on(graph) {
            return Err(Error::Contract("warm tour is not valid on the graph".into()));
        }
    }
    Search {
        graph,
        config,
        on_incumbent,
        observer,
        bounds: BoundState {
            lower: f64::NEG_INFINITY,
            upper: warm.map(Tour::length),
            incumbent: warm.cloned(),
        },
        queue: BinaryHeap::new(),
        seq: 0,
        nodes_expanded: 0,
    }
    .run()
}

struct HeapEntry {
    lb: f64,
    seq: u64,
    constraints: EdgeConstraints,
    penalties: Vec<f64>,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.lb == other.lb && self.seq == other.seq
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for lowest-lb-first, ties by
        // insertion order.
        other
            .lb
            .partial_cmp(&self.lb)
            .unwrap()
            .then(other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Search<'a, 'i1, 'i2, 'o1, 'o2> {
    graph: &'a SparseGraph,
    config: &'a BnbConfig,
    on_incumbent: Option<&'i1 mut (dyn FnMut(&Tour) -> Option<Tour> + 'i2)>,
    observer: Option<&'o1 mut (dyn FnMut(&NodeObservation<'_>) + 'o2)>,
    bounds: BoundState,
    queue: BinaryHeap<HeapEntry>,
    seq: u64,
    nodes_expanded: u64,
}

impl Search<'_, '_, '_, '_, '_> {
    fn run(mut self) -> Result<OptimalResult> {
        let n = self.graph.dimension();
        let root_constraints = EdgeConstraints::default();
        let zero_pi = vec![0.0; n];

        // Plain 1-tree fixes the ascent step scale for the whole search;
        // it must not track the incumbent or identical searches with
        // different warm starts would expand different trees.
        let plain = one_tree_bound(
            self.graph,
            &root_constraints,
            &zero_pi,
            &AscentSchedule::new(1, 1.0),
        );
        let Some(plain) = plain else {
            // Connected with min degree 2, yet no 1-tree: vertices 2..n
            // split apart without vertex 1, so no tour exists either.
            return Ok(self.finish(ExactStatus::Infeasible, f64::INFINITY));
        };
        let estimate = 1.2 * plain.lower_bound.max(1.0);
        let schedule_root = AscentSchedule::new(self.config.root_ascent_rounds, estimate);
        let schedule_child = AscentSchedule::new(self.config.child_ascent_rounds, estimate);

        let root = one_tree_bound(self.graph, &root_constraints, &zero_pi, &schedule_root)
            .expect("root was feasible for the plain bound");
        let root_lb = root.lower_bound;
        self.push(root_lb, root_constraints, root.penalties.clone());

        while let Some(entry) = self.queue.peek() {
            let budget_hit = self.nodes_expanded >= self.config.node_budget;
            let deadline_hit = self
                .config
                .deadline
                .is_some_and(|d| Instant::now() >= d);
            if budget_hit || deadline_hit {
                let lower = entry.lb.min(self.bounds.upper_f());
                let mut result = self.finish(ExactStatus::BudgetExceeded, lower);
                result.root_lb = root_lb;
                return Ok(result);
            }
            let entry = self.queue.pop().unwrap();
            self.nodes_expanded += 1;

            if let Some(observer) = self.observer.as_deref_mut() {
                let included = entry.constraints.included_pairs();
                let excluded = entry.constraints.excluded_pairs();
                observer(&NodeObservation {
                    included: &included,
                    excluded: &excluded,
                    lower_bound: entry.lb,
                    global_lower: entry.lb.min(self.bounds.upper_f()),
                    upper: self.bounds.upper,
                });
            }
            if self.prunable(entry.lb) {
                continue;
            }
            // Rebuild the node's best tree from its stored penalties (one
            // construction round reproduces it deterministically).
            let rebuilt = one_tree_bound(
                self.graph,
                &entry.constraints,
                &entry.penalties,
                &AscentSchedule::new(1, estimate),
            );
            let Some(tree) = rebuilt else { continue };

            if tree.is_tour {
                self.try_adopt_tree_tour(&tree);
                continue;
            }
            self.branch(&entry, &tree, &schedule_child);
        }

        let (status, lower) = if self.bounds.incumbent.is_some() {
            (ExactStatus::Optimal, self.bounds.upper_f())
        } else {
            (ExactStatus::Infeasible, f64::INFINITY)
        };
        let mut result = self.finish(status, lower);
        result.root_lb = root_lb;
        Ok(result)
    }

    /// Integrality pruning: all tour lengths are integers, so a node with
    /// ceil(lb) >= upper cannot contain a strictly better tour.
    fn prunable(&self, lb: f64) -> bool {
        match self.bounds.upper {
            Some(upper) => lb > upper as f64 - 1.0 + 1e-6,
            None => false,
        }
    }

    fn push(&mut self, lb: f64, constraints: EdgeConstraints, penalties: Vec<f64>) {
        if self.prunable(lb) {
            return;
        }
        self.queue.push(HeapEntry {
            lb,
            seq: self.seq,
            constraints,
            penalties,
        });
        self.seq += 1;
    }

    fn branch(&mut self, entry: &HeapEntry, tree: &OneTree, schedule: &AscentSchedule) {
        // Vertex with the largest 1-tree degree, ties to the smaller index.
        let v_star = tree
            .degrees
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(v, _)| v as Vertex)
            .expect("non-empty degree vector");
        debug_assert!(tree.degrees[v_star as usize] >= 3);

        // Among non-included tree edges at v_star, the largest penalized
        // weight; ties lexicographic by endpoints.
        let pi = &tree.penalties;
        let branch_edge = tree
            .edges
            .iter()
            .filter(|&&(u, v)| u == v_star || v == v_star)
            .filter(|&&(u, v)| !entry.constraints.includes(u, v))
            .map(|&(u, v)| {
                let w = self.graph.weight(u, v).expect("tree edges are graph edges");
                (w as f64 + pi[u as usize] + pi[v as usize], u, v)
            })
            .max_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .unwrap()
                    .then(b.1.cmp(&a.1))
                    .then(b.2.cmp(&a.2))
            });
        let Some((_, bu, bv)) = branch_edge else {
            // All tree edges at v_star are included, which contradicts the
            // included-degree invariant for a degree >= 3 vertex.
            unreachable!("degree-3 vertex with every tree edge included");
        };

        // Child A: exclude the edge.
        let child_a = entry.constraints.with_excluded(bu, bv);
        if let Some(t) = one_tree_bound(self.graph, &child_a, &entry.penalties, schedule) {
            // A child bound below the parent's is only ascent noise; the
            // parent's bound remains valid for the subproblem.
            self.push(t.lower_bound.max(entry.lb), child_a, t.penalties);
        }

        // Child B: include the edge, if that respects degree and
        // subcycle limits.
        if self.include_is_feasible(&entry.constraints, bu, bv) {
            let child_b = entry.constraints.with_included(bu, bv);
            if let Some(t) = one_tree_bound(self.graph, &child_b, &entry.penalties, schedule) {
                self.push(t.lower_bound.max(entry.lb), child_b, t.penalties);
            }
        }
    }

    fn include_is_feasible(&mut self, constraints: &EdgeConstraints, u: Vertex, v: Vertex) -> bool {
        let pairs = constraints.included_pairs();
        let mut deg = |x: Vertex| pairs.iter().filter(|&&(a, b)| a == x || b == x).count();
        if deg(u) >= 2 || deg(v) >= 2 {
            return false;
        }
        // Cycle check over included edges.
        let n = self.graph.dimension();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for &(a, b) in &pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            debug_assert_ne!(ra, rb, "included edges already hold a cycle");
            parent[ra as usize] = rb;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            return true;
        }
        // Including (u, v) closes a cycle. With n included edges it would
        // be a Hamiltonian cycle: adopt it as an incumbent instead of
        // branching into it; any shorter cycle is infeasible.
        if pairs.len() + 1 == n {
            if let Ok(tour) = self.included_cycle_tour(&pairs, u, v) {
                self.offer_incumbent(tour);
            }
        }
        false
    }

    fn included_cycle_tour(
        &self,
        pairs: &[(Vertex, Vertex)],
        u: Vertex,
        v: Vertex,
    ) -> Result<Tour> {
        let n = self.graph.dimension();
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &(a, b) in pairs {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj[u as usize].push(v);
        adj[v as usize].push(u);
        let mut order = Vec::with_capacity(n);
        let mut prev = Vertex::MAX;
        let mut cur = 0 as Vertex;
        for _ in 0..n {
            order.push(cur);
            let next = adj[cur as usize]
                .iter()
                .copied()
                .find(|&z| z != prev)
                .ok_or_else(|| Error::Contract("broken included cycle".into()))?;
            prev = cur;
            cur = next;
        }
        Tour::from_order_on_graph(order, self.graph)
    }

    /// Walks the 1-tree (all degrees 2) into a tour and adopts it if it
    /// beats the incumbent.
    fn try_adopt_tree_tour(&mut self, tree: &OneTree) {
        let n = self.graph.dimension();
        let mut adj: Vec<[Vertex; 2]> = vec![[Vertex::MAX; 2]; n];
        for &(u, v) in &tree.edges {
            let au = &mut adj[u as usize];
            if au[0] == Vertex::MAX {
                au[0] = v;
            } else {
                au[1] = v;
            }
            let av = &mut adj[v as usize];
            if av[0] == Vertex::MAX {
                av[0] = u;
            } else {
                av[1] = u;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut prev = Vertex::MAX;
        let mut cur = 0 as Vertex;
        for _ in 0..n {
            order.push(cur);
            let [a, b] = adj[cur as usize];
            let next = if a != prev { a } else { b };
            prev = cur;
            cur = next;
        }
        debug_assert_eq!(cur, 0, "1-tree with all degrees 2 is a single cycle");
        let tour = Tour::from_order_on_graph(order, self.graph)
            .expect("tour walks 1-tree edges, all in the graph");
        debug_assert_eq!(tour.length(), tree.true_weight);
        self.offer_incumbent(tour);
    }

    fn offer_incumbent(&mut self, tour: Tour) {
        if self.bounds.upper.is_some_and(|u| tour.length() >= u) {
            return;
        }
        self.bounds.upper = Some(tour.length());
        self.bounds.incumbent = Some(tour);
        // Let the caller polish the new incumbent; adopt only a strictly
        // better valid replacement.
        if let Some(hook) = self.on_incumbent.as_deref_mut() {
            let current = self.bounds.incumbent.as_ref().unwrap();
            if let Some(better) = hook(current) {
                if better.length() < current.length() && better.is_valid_on(self.graph) {
                    self.bounds.upper = Some(better.length());
                    self.bounds.incumbent = Some(better);
                }
            }
        }
    }

    fn finish(mut self, status: ExactStatus, lower: f64) -> OptimalResult {
        self.bounds.lower = lower;
        let (value, tour) = match status {
            ExactStatus::Optimal => (
                self.bounds.upper,
                self.bounds.incumbent.clone(),
            ),
            ExactStatus::Infeasible => (None, None),
            ExactStatus::BudgetExceeded => (self.bounds.upper, self.bounds.incumbent.clone()),
        };
        OptimalResult {
            status,
            value,
            tour,
            nodes_expanded: self.nodes_expanded,
            root_lb: 0.0,
            bounds: self.bounds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::EuclideanInstance;
    use crate::oracle::{dp_oracle_graph, dp_oracle_instance};
    use crate::sparse::build_knn_candidates;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(n: usize, seed: u64) -> EuclideanInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<_> = (0..n)
            .map(|_| {
                (
                    rng.random_range(0..10_000) as f64,
                    rng.random_range(0..10_000) as f64,
                )
            })
            .collect();
        EuclideanInstance::new(format!("r{n}s{seed}"), coords).unwrap()
    }

    #[test]
    fn cycle_graph_solves_at_the_root() {
        let inst = EuclideanInstance::new(
            "c5",
            vec![(0.0, 0.0), (10.0, 0.0), (13.0, 9.0), (5.0, 15.0), (-3.0, 9.0)],
        )
        .unwrap();
        let cycle = SparseGraph::from_metric_edges(
            &inst,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
        )
        .unwrap();
        let expected = cycle.cycle_length(&[0, 1, 2, 3, 4]).unwrap();
        let r = branch_and_bound(&cycle, None, u64::MAX).unwrap();
        assert_eq!(r.status, ExactStatus::Optimal);
        assert_eq!(r.value, Some(expected));
        assert_eq!(r.nodes_expanded, 1);
        assert!((r.bounds.lower - expected as f64).abs() < 1e-9);
    }

    #[test]
    fn bridged_triangles_are_infeasible() {
        let g = SparseGraph::from_weighted_edges(
            6,
            &[
                (0, 1, 5),
                (1, 2, 6),
                (0, 2, 7),
                (3, 4, 5),
                (4, 5, 6),
                (3, 5, 7),
                (2, 3, 9),
            ],
        )
        .unwrap();
        assert_eq!(dp_oracle_graph(&g).unwrap(), None);
        let r = branch_and_bound(&g, None, u64::MAX).unwrap();
        assert_eq!(r.status, ExactStatus::Infeasible);
        assert_eq!(r.value, None);
    }

    #[test]
    fn matches_oracle_on_random_complete_instances() {
        for seed in 0..30u64 {
            let n = 6 + (seed as usize % 8);
            let inst = random_instance(n, seed);
            let g = build_knn_candidates(&inst, n - 1).unwrap();
            let opt = dp_oracle_instance(&inst).unwrap().value;
            let r = branch_and_bound(&g, None, u64::MAX).unwrap();
            assert_eq!(r.status, ExactStatus::Optimal, "seed {seed}");
            assert_eq!(r.value, Some(opt), "seed {seed}");
            let tour = r.tour.unwrap();
            assert!(tour.is_valid_on(&g));
            assert_eq!(tour.length(), opt);
        }
    }

    #[test]
    fn matches_oracle_on_sparse_graphs() {
        for seed in 30..45u64 {
            let n = 8 + (seed as usize % 5);
            let inst = random_instance(n, seed);
            let g = crate::sparse::repair_min_degree(
                &build_knn_candidates(&inst, 4).unwrap(),
                &inst,
            );
            let oracle = dp_oracle_graph(&g).unwrap();
            let r = branch_and_bound(&g, None, u64::MAX).unwrap();
            match oracle {
                Some(sol) => {
                    assert_eq!(r.status, ExactStatus::Optimal, "seed {seed}");
                    assert_eq!(r.value, Some(sol.value), "seed {seed}");
                }
                None => assert_eq!(r.status, ExactStatus::Infeasible, "seed {seed}"),
            }
        }
    }

    #[test]
    fn warm_start_with_optimum_never_expands_more() {
        for seed in 100..120u64 {
            let n = 7 + (seed as usize % 6);
            let inst = random_instance(n, seed);
            let g = build_knn_candidates(&inst, n - 1).unwrap();
            let opt = dp_oracle_instance(&inst).unwrap();
            let warm = Tour::from_order_on_graph(opt.order.clone(), &g).unwrap();
            let cold = branch_and_bound(&g, None, u64::MAX).unwrap();
            let warmed = branch_and_bound(&g, Some(&warm), u64::MAX).unwrap();
            assert_eq!(cold.value, warmed.value);
            assert!(
                warmed.nodes_expanded <= cold.nodes_expanded,
                "seed {seed}: warm {} > cold {}",
                warmed.nodes_expanded,
                cold.nodes_expanded
            );
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let inst = random_instance(12, 7);
        let g = build_knn_candidates(&inst, 11).unwrap();
        let a = branch_and_bound(&g, None, u64::MAX).unwrap();
        let b = branch_and_bound(&g, None, u64::MAX).unwrap();
        assert_eq!(a.nodes_expanded, b.nodes_expanded);
        assert_eq!(a.value, b.value);
        assert_eq!(
            a.tour.map(|t| t.order().to_vec()),
            b.tour.map(|t| t.order().to_vec())
        );
    }

    #[test]
    fn budget_exceeded_reports_bounds() {
        let inst = random_instance(30, 3);
        let g = build_knn_candidates(&inst, 29).unwrap();
        let r = branch_and_bound(&g, None, 2).unwrap();
        if r.status == ExactStatus::BudgetExceeded {
            assert!(r.nodes_expanded <= 2);
            assert!(r.bounds.lower <= r.bounds.upper.map_or(f64::INFINITY, |u| u as f64));
        }
    }

    #[test]
    fn invalid_warm_tour_is_a_contract_error() {
        let inst = random_instance(8, 1);
        let complete = build_knn_candidates(&inst, 7).unwrap();
        let sparse = crate::sparse::repair_min_degree(
            &build_knn_candidates(&inst, 2).unwrap(),
            &inst,
        );
        let opt = dp_oracle_instance(&inst).unwrap();
        let warm = Tour::from_order_on_graph(opt.order, &complete).unwrap();
        if !warm.is_valid_on(&sparse) {
            assert!(branch_and_bound(&sparse, Some(&warm), u64::MAX).is_err());
        }
    }

    #[test]
    fn incumbent_hook_can_tighten_the_upper_bound() {
        let inst = random_instance(12, 9);
        let g = build_knn_candidates(&inst, 11).unwrap();
        let opt = dp_oracle_instance(&inst).unwrap();
        let mut calls = 0u32;
        let mut hook = |t: &Tour| -> Option<Tour> {
            calls += 1;
            crate::improve::improve_until_stable(t, &g, u64::MAX)
                .ok()
                .map(|r| r.tour)
        };
        let config = BnbConfig::default();
        let r = branch_and_bound_with(&g, None, &config, Some(&mut hook), None).unwrap();
        assert_eq!(r.value, Some(opt.value));
        assert!(calls >= 1);
    }
}
