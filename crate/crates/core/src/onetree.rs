//! Held–Karp 1-tree lower bounds: a minimum spanning tree over vertices
//! 2..n under penalized weights w(i,j) + pi(i) + pi(j), plus the two
//! cheapest feasible edges at vertex 1, tightened by subgradient ascent
//! on the penalties. The bound is valid for every tour honoring the
//! node's included/excluded edge constraints.

use crate::instance::Vertex;
use crate::sparse::{edge_id, SparseGraph};

/// The best 1-tree found during ascent.
#[derive(Clone, Debug)]
pub struct OneTree {
    /// Lower bound on any tour respecting the constraints.
    pub lower_bound: f64,
    /// The n edges of the 1-tree achieving the bound.
    pub edges: Vec<(Vertex, Vertex)>,
    /// 1-tree degree per vertex.
    pub degrees: Vec<u32>,
    /// Penalties at which the bound was achieved; children inherit these.
    pub penalties: Vec<f64>,
    /// Unpenalized weight of the 1-tree; equals the tour length when
    /// `is_tour`.
    pub true_weight: i64,
    /// All degrees equal 2: the 1-tree is a tour and the bound is exact.
    pub is_tour: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct AscentSchedule {
    /// Construction rounds; penalties update between rounds.
    pub rounds: u32,
    /// Fixed scale for the step rule lambda * (estimate - lb) / ||g||^2.
    /// Must not depend on the live incumbent, so identical searches expand
    /// identical trees regardless of warm start.
    pub upper_estimate: f64,
    pub initial_lambda: f64,
    /// Halve lambda after this many non-improving rounds.
    pub halve_after: u32,
}

impl AscentSchedule {
    pub fn new(rounds: u32, upper_estimate: f64) -> Self {
        AscentSchedule {
            rounds,
            upper_estimate,
            initial_lambda: 2.0,
            halve_after: 20,
        }
    }
}

/// Edge constraints for a branch-and-bound node: ids sorted, disjoint.
#[derive(Clone, Debug, Default)]
pub struct EdgeConstraints {
    pub included: Vec<u64>,
    pub excluded: Vec<u64>,
}

impl EdgeConstraints {
    pub fn includes(&self, u: Vertex, v: Vertex) -> bool {
        self.included.binary_search(&edge_id(u, v)).is_ok()
    }

    pub fn excludes(&self, u: Vertex, v: Vertex) -> bool {
        self.excluded.binary_search(&edge_id(u, v)).is_ok()
    }

    pub fn included_pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.included.iter().map(|&id| crate::sparse::id_endpoints(id)).collect()
    }

    pub fn excluded_pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.excluded.iter().map(|&id| crate::sparse::id_endpoints(id)).collect()
    }

    pub fn with_excluded(&self, u: Vertex, v: Vertex) -> EdgeConstraints {
        let mut next = self.clone();
        let id = edge_id(u, v);
        let idx = next.excluded.binary_search(&id).unwrap_err();
        next.excluded.insert(idx, id);
        next
    }

    pub fn with_included(&self, u: Vertex, v: Vertex) -> EdgeConstraints {
        let mut next = self.clone();
        let id = edge_id(u, v);
        let idx = next.included.binary_search(&id).unwrap_err();
        next.included.insert(idx, id);
        next
    }
}

/// Computes the ascent-tightened 1-tree bound for a node. Returns `None`
/// when the constraints are structurally infeasible: exclusions
/// disconnect vertices 2..n or leave vertex 1 with fewer than two edges.
pub fn one_tree_bound(
    graph: &SparseGraph,
    constraints: &EdgeConstraints,
    start_penalties: &[f64],
    schedule: &AscentSchedule,
) -> Option<OneTree> {
    let n = graph.dimension();
    debug_assert_eq!(start_penalties.len(), n);

    // Partition the edge set once per call.
    let mut hub_required: Vec<(Vertex, i64)> = Vec::new(); // included at vertex 0
    let mut hub_optional: Vec<(Vertex, i64)> = Vec::new();
    let mut core_required: Vec<(Vertex, Vertex, i64)> = Vec::new(); // included, no endpoint 0
    let mut core_optional: Vec<(Vertex, Vertex, i64)> = Vec::new();
    for (u, v, w) in graph.edges() {
        if constraints.excludes(u, v) {
            continue;
        }
        let required = constraints.includes(u, v);
        if u == 0 {
            if required {
                hub_required.push((v, w));
            } else {
                hub_optional.push((v, w));
            }
        } else if required {
            core_required.push((u, v, w));
        } else {
            core_optional.push((u, v, w));
        }
    }
    if hub_required.len() > 2 {
        return None;
    }

    let mut pi = start_penalties.to_vec();
    let mut lambda = schedule.initial_lambda;
    let mut non_improving = 0u32;
    let mut best: Option<OneTree> = None;
    let mut keyed: Vec<(f64, Vertex, Vertex, i64)> = Vec::with_capacity(core_optional.len());
    let mut uf = UnionFind::new(n);
    let rounds = schedule.rounds.max(1);

    for round in 0..rounds {
        uf.reset();
        let mut tree_edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(n);
        let mut degrees = vec![0u32; n];
        let mut true_weight = 0i64;
        let mut merged = 0usize;

        for &(u, v, w) in &core_required {
            if !uf.union(u, v) {
                return None; // included edges close a cycle off the hub
            }
            tree_edges.push((u, v));
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
            true_weight += w;
            merged += 1;
        }
        keyed.clear();
        keyed.extend(core_optional.iter().map(|&(u, v, w)| {
            (w as f64 + pi[u as usize] + pi[v as usize], u, v, w)
        }));
        keyed.sort_unstable_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        for &(_, u, v, w) in keyed.iter() {
            if merged == n - 2 {
                break;
            }
            if uf.union(u, v) {
                tree_edges.push((u, v));
                degrees[u as usize] += 1;
                degrees[v as usize] += 1;
                true_weight += w;
                merged += 1;
            }
        }
        if merged != n - 2 {
            return None; // exclusions disconnected vertices 2..n
        }

        let mut hub: Vec<(Vertex, i64)> = hub_required.clone();
        if hub.len() < 2 {
            let mut ranked: Vec<(f64, Vertex, i64)> = hub_optional
                .iter()
                .map(|&(v, w)| (w as f64 + pi[v as usize], v, w))
                .collect();
            ranked.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            for &(_, v, w) in ranked.iter().take(2 - hub.len()) {
                hub.push((v, w));
            }
        }
        if hub.len() < 2 {
            return None; // vertex 1 cannot reach degree 2
        }
        for &(v, w) in &hub {
            tree_edges.push((0, v));
            degrees[0] += 1;
            degrees[v as usize] += 1;
            true_weight += w;
        }

        let lb = true_weight as f64
            + degrees
                .iter()
                .enumerate()
                .map(|(v, &d)| pi[v] * (d as f64 - 2.0))
                .sum::<f64>();
        let is_tour = degrees.iter().all(|&d| d == 2);
        let improved = best.as_ref().is_none_or(|b| lb > b.lower_bound + 1e-9);
        if improved {
            best = Some(OneTree {
                lower_bound: lb,
                edges: tree_edges,
                degrees: degrees.clone(),
                penalties: pi.clone(),
                true_weight,
                is_tour,
            });
            non_improving = 0;
        } else {
            non_improving += 1;
            if non_improving >= schedule.halve_after {
                lambda /= 2.0;
                non_improving = 0;
            }
        }
        if is_tour || round + 1 == rounds {
            break;
        }

        let norm_sq: f64 = degrees.iter().map(|&d| (d as f64 - 2.0).powi(2)).sum();
        if norm_sq == 0.0 {
            break;
        }
        let gap = (schedule.upper_estimate - lb).max(1.0);
        let step = lambda * gap / norm_sq;
        for (v, &d) in degrees.iter().enumerate() {
            pi[v] += step * (d as f64 - 2.0);
        }
    }
    best
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.rank.fill(0);
    }

    fn find(&mut self, v: u32) -> u32 {
        let mut root = v;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = v;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, u: u32, v: u32) -> bool {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        let (a, b) = if self.rank[ru as usize] >= self.rank[rv as usize] {
            (ru, rv)
        } else {
            (rv, ru)
        };
        self.parent[b as usize] = a;
        if self.rank[a as usize] == self.rank[b as usize] {
            self.rank[a as usize] += 1;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::EuclideanInstance;
    use crate::oracle::dp_oracle_instance;
    use crate::sparse::build_knn_candidates;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bound(graph: &SparseGraph, rounds: u32, estimate: f64) -> Option<OneTree> {
        let constraints = EdgeConstraints::default();
        let pi = vec![0.0; graph.dimension()];
        one_tree_bound(graph, &constraints, &pi, &AscentSchedule::new(rounds, estimate))
    }

    #[test]
    fn cycle_graph_bound_is_the_cycle() {
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
        let t = bound(&cycle, 1, 100.0).unwrap();
        assert!(t.is_tour);
        assert_eq!(t.true_weight, expected);
        assert!((t.lower_bound - expected as f64).abs() < 1e-9);
    }

    #[test]
    fn triangle_bound_is_twelve() {
        let inst =
            EuclideanInstance::new("tri", vec![(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]).unwrap();
        let g = build_knn_candidates(&inst, 2).unwrap();
        let t = bound(&g, 1, 20.0).unwrap();
        assert!(t.is_tour);
        assert!((t.lower_bound - 12.0).abs() < 1e-9);
    }

    #[test]
    fn ascent_bound_sandwich_and_quality() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut good = 0;
        for trial in 0..100 {
            let n = rng.random_range(6..=10);
            let coords: Vec<_> = (0..n)
                .map(|_| {
                    (
                        rng.random_range(0..1000) as f64,
                        rng.random_range(0..1000) as f64,
                    )
                })
                .collect();
            let inst = EuclideanInstance::new("r", coords).unwrap();
            let g = build_knn_candidates(&inst, n - 1).unwrap();
            let opt = dp_oracle_instance(&inst).unwrap().value as f64;
            let plain = bound(&g, 1, 1.0).unwrap();
            let estimate = 1.2 * plain.lower_bound.max(1.0);
            let t = bound(&g, 60, estimate).unwrap();
            assert!(
                t.lower_bound <= opt + 1e-6,
                "trial {trial}: lb {} above optimum {opt}",
                t.lower_bound
            );
            assert!(t.lower_bound >= plain.lower_bound - 1e-9);
            if t.lower_bound >= 0.85 * opt {
                good += 1;
            }
        }
        assert!(good >= 90, "ascent reached 85% of optimum on only {good}/100");
    }

    #[test]
    fn respects_included_and_excluded_edges() {
        let inst = EuclideanInstance::new(
            "square",
            vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)],
        )
        .unwrap();
        let g = build_knn_candidates(&inst, 3).unwrap();
        let pi = vec![0.0; 4];
        let sched = AscentSchedule::new(1, 100.0);

        // Force a diagonal: it must appear in the tree.
        let with_diag = EdgeConstraints::default().with_included(0, 2);
        let t = one_tree_bound(&g, &with_diag, &pi, &sched).unwrap();
        assert!(t.edges.contains(&(0, 2)));

        // Exclude enough hub edges and vertex 1 starves.
        let starved = EdgeConstraints::default()
            .with_excluded(0, 1)
            .with_excluded(0, 2)
            .with_excluded(0, 3);
        assert!(one_tree_bound(&g, &starved, &pi, &sched).is_none());

        // Disconnect the core.
        let cut = EdgeConstraints::default()
            .with_excluded(1, 2)
            .with_excluded(2, 3);
        assert!(one_tree_bound(&g, &cut, &pi, &sched).is_none());
    }

    #[test]
    fn included_cycle_off_hub_is_infeasible() {
        let inst = EuclideanInstance::new(
            "p5",
            vec![(0.0, 0.0), (10.0, 0.0), (20.0, 0.0), (20.0, 10.0), (10.0, 10.0)],
        )
        .unwrap();
        let g = build_knn_candidates(&inst, 4).unwrap();
        let pi = vec![0.0; 5];
        let cons = EdgeConstraints::default()
            .with_included(1, 2)
            .with_included(2, 3)
            .with_included(1, 3);
        assert!(one_tree_bound(&g, &cons, &pi, &AscentSchedule::new(1, 100.0)).is_none());
    }
}
