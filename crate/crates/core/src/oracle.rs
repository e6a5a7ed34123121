//! Independent test oracles: exact TSP by bitmask dynamic programming and
//! exhaustive Hamiltonicity by backtracking. Deliberately simple code with
//! no shared machinery with the solvers they check.

use crate::error::{Error, Result};
use crate::instance::{EuclideanInstance, Vertex};
use crate::sparse::SparseGraph;

pub const MAX_ORACLE_N: usize = 18;
pub const MAX_HAMILTONICITY_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSolution {
    pub value: i64,
    pub order: Vec<Vertex>,
}

/// Exact optimum of the complete instance.
pub fn dp_oracle_instance(instance: &EuclideanInstance) -> Result<OracleSolution> {
    let sol = dp_oracle(instance.dimension(), |u, v| Some(instance.distance(u, v)))?;
    Ok(sol.expect("a complete instance always has a tour"))
}

/// Exact optimum over graph edges only; `None` when the graph has no
/// Hamiltonian cycle.
pub fn dp_oracle_graph(graph: &SparseGraph) -> Result<Option<OracleSolution>> {
    dp_oracle(graph.dimension(), |u, v| graph.weight(u, v))
}

fn dp_oracle(
    n: usize,
    cost: impl Fn(Vertex, Vertex) -> Option<i64>,
) -> Result<Option<OracleSolution>> {
    if n > MAX_ORACLE_N {
        return Err(Error::OracleTooLarge {
            n,
            max: MAX_ORACLE_N,
        });
    }
    if n < 3 {
        return Err(Error::TooFewCities(n));
    }
    // Tours start and end at vertex 0; masks range over vertices 1..n.
    let m = n - 1;
    let full = (1usize << m) - 1;
    const UNREACHED: i64 = i64::MAX;
    let mut dp = vec![UNREACHED; (full + 1) * m];
    let mut parent = vec![u8::MAX; (full + 1) * m];

    for j in 0..m {
        if let Some(c) = cost(0, (j + 1) as Vertex) {
            dp[(1 << j) * m + j] = c;
        }
    }
    for mask in 1..=full {
        for last in 0..m {
            if mask & (1 << last) == 0 {
                continue;
            }
            let cur = dp[mask * m + last];
            if cur == UNREACHED {
                continue;
            }
            for next in 0..m {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let Some(c) = cost((last + 1) as Vertex, (next + 1) as Vertex) else {
                    continue;
                };
                let cand = cur + c;
                let slot = (mask | (1 << next)) * m + next;
                if cand < dp[slot] {
                    dp[slot] = cand;
                    parent[slot] = last as u8;
                }
            }
        }
    }

    let mut best: Option<(i64, usize)> = None;
    for last in 0..m {
        let cur = dp[full * m + last];
        if cur == UNREACHED {
            continue;
        }
        let Some(back) = cost((last + 1) as Vertex, 0) else {
            continue;
        };
        let total = cur + back;
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, last));
        }
    }
    let Some((value, mut last)) = best else {
        return Ok(None);
    };

    let mut order = vec![0 as Vertex; n];
    let mut mask = full;
    for slot in (1..n).rev() {
        order[slot] = (last + 1) as Vertex;
        let prev = parent[mask * m + last];
        mask &= !(1 << last);
        if mask == 0 {
            break;
        }
        last = prev as usize;
    }
    Ok(Some(OracleSolution { value, order }))
}

/// Exhaustive Hamiltonicity check by backtracking from vertex 0.
/// Returns one Hamiltonian cycle if any exists.
pub fn is_hamiltonian_exhaustive(graph: &SparseGraph) -> Result<Option<Vec<Vertex>>> {
    let n = graph.dimension();
    if n > MAX_HAMILTONICITY_N {
        return Err(Error::OracleTooLarge {
            n,
            max: MAX_HAMILTONICITY_N,
        });
    }
    if n < 3 {
        return Err(Error::TooFewCities(n));
    }
    if graph.min_degree() < 2 || !graph.is_connected() {
        return Ok(None);
    }
    let mut path = vec![0 as Vertex];
    let mut visited = vec![false; n];
    visited[0] = true;
    if backtrack(graph, &mut path, &mut visited, n) {
        Ok(Some(path))
    } else {
        Ok(None)
    }
}

/// Edge set of the Petersen graph, the canonical small non-Hamiltonian
/// instance with minimum degree 3.
pub fn petersen_edges() -> Vec<(Vertex, Vertex)> {
    let mut e = Vec::new();
    for i in 0..5u32 {
        e.push((i, (i + 1) % 5)); // outer pentagon
        e.push((i, i + 5)); // spokes
        e.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
    }
    e.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect()
}

fn backtrack(graph: &SparseGraph, path: &mut Vec<Vertex>, visited: &mut [bool], n: usize) -> bool {
    if path.len() == n {
        return graph.has_edge(*path.last().unwrap(), path[0]);
    }
    let cur = *path.last().unwrap();
    for &next in graph.neighbors(cur) {
        if visited[next as usize] {
            continue;
        }
        visited[next as usize] = true;
        path.push(next);
        if backtrack(graph, path, visited, n) {
            return true;
        }
        path.pop();
        visited[next as usize] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::build_knn_candidates;

    #[test]
    fn triangle_is_twelve() {
        let inst = EuclideanInstance::new("t", vec![(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]).unwrap();
        let sol = dp_oracle_instance(&inst).unwrap();
        assert_eq!(sol.value, 12);
    }

    #[test]
    fn unit_square_is_four() {
        let inst = EuclideanInstance::new(
            "square",
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        )
        .unwrap();
        assert_eq!(dp_oracle_instance(&inst).unwrap().value, 4);
    }

    #[test]
    fn cycle_graph_has_unique_tour() {
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
        let sol = dp_oracle_graph(&cycle).unwrap().unwrap();
        assert_eq!(sol.value, expected);
        assert!(cycle.cycle_length(&sol.order).is_ok());
    }

    #[test]
    fn sparse_graph_without_tour_is_none() {
        // Two triangles joined by a single bridge: no Hamiltonian cycle.
        let edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)];
        let g = SparseGraph::from_unit_edges(6, &edges).unwrap();
        assert_eq!(dp_oracle_graph(&g).unwrap(), None);
        assert_eq!(is_hamiltonian_exhaustive(&g).unwrap(), None);
    }

    #[test]
    fn oracle_tour_revalidates() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.random_range(4..11);
            let coords: Vec<_> = (0..n)
                .map(|_| {
                    (
                        rng.random_range(0..500) as f64,
                        rng.random_range(0..500) as f64,
                    )
                })
                .collect();
            let inst = EuclideanInstance::new("r", coords).unwrap();
            let sol = dp_oracle_instance(&inst).unwrap();
            assert_eq!(inst.cycle_length(&sol.order), sol.value);
        }
    }

    #[test]
    fn dp_matches_permutation_bruteforce() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let n = rng.random_range(4..8);
            let coords: Vec<_> = (0..n)
                .map(|_| {
                    (
                        rng.random_range(0..100) as f64,
                        rng.random_range(0..100) as f64,
                    )
                })
                .collect();
            let inst = EuclideanInstance::new("r", coords).unwrap();
            let best = permutations_min(&inst);
            assert_eq!(dp_oracle_instance(&inst).unwrap().value, best);
        }
    }

    fn permutations_min(inst: &EuclideanInstance) -> i64 {
        fn go(inst: &EuclideanInstance, order: &mut Vec<Vertex>, used: &mut Vec<bool>, best: &mut i64) {
            let n = inst.dimension();
            if order.len() == n {
                *best = (*best).min(inst.cycle_length(order));
                return;
            }
            for v in 0..n as Vertex {
                if !used[v as usize] {
                    used[v as usize] = true;
                    order.push(v);
                    go(inst, order, used, best);
                    order.pop();
                    used[v as usize] = false;
                }
            }
        }
        let mut best = i64::MAX;
        let mut used = vec![false; inst.dimension()];
        used[0] = true;
        go(inst, &mut vec![0], &mut used, &mut best);
        best
    }

    #[test]
    fn petersen_is_not_hamiltonian() {
        let g = SparseGraph::from_unit_edges(10, &petersen_edges()).unwrap();
        assert_eq!(is_hamiltonian_exhaustive(&g).unwrap(), None);
    }

    #[test]
    fn knn_graph_on_cycle_points_is_hamiltonian() {
        let coords: Vec<_> = (0..8)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 8.0;
                (100.0 * a.cos(), 100.0 * a.sin())
            })
            .collect();
        let inst = EuclideanInstance::new("ring", coords).unwrap();
        let g = build_knn_candidates(&inst, 2).unwrap();
        let cycle = is_hamiltonian_exhaustive(&g).unwrap().unwrap();
        assert!(g.cycle_length(&cycle).is_ok());
    }

    #[test]
    fn size_guards() {
        let g = SparseGraph::from_unit_edges(13, &[(0, 1)]).unwrap();
        assert!(matches!(
            is_hamiltonian_exhaustive(&g),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
