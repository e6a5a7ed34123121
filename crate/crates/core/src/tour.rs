use crate::error::{Error, Result};
use crate::instance::{EuclideanInstance, Vertex};
use crate::sparse::SparseGraph;

/// A cyclic permutation of all vertices together with its total length.
/// The length is always the recomputed sum of edge costs, closing edge
/// included, under whichever cost source the tour was built against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    order: Vec<Vertex>,
    length: i64,
}

impl Tour {
    /// Validates the order as a permutation of 0..n and prices it with the
    /// instance metric.
    pub fn from_order(order: Vec<Vertex>, instance: &EuclideanInstance) -> Result<Tour> {
        check_permutation(&order, instance.dimension())?;
        let length = instance.cycle_length(&order);
        Ok(Tour { order, length })
    }

    /// As `from_order` but priced with graph weights; every consecutive
    /// pair must be a graph edge.
    pub fn from_order_on_graph(order: Vec<Vertex>, graph: &SparseGraph) -> Result<Tour> {
        check_permutation(&order, graph.dimension())?;
        let length = graph.cycle_length(&order)?;
        Ok(Tour { order, length })
    }

    pub(crate) fn from_parts_unchecked(order: Vec<Vertex>, length: i64) -> Tour {
        Tour { order, length }
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn length(&self) -> i64 {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.order.len()
    }

    /// True iff every tour edge, closing edge included, is a graph edge.
    pub fn is_valid_on(&self, graph: &SparseGraph) -> bool {
        graph.cycle_length(&self.order).is_ok()
    }
}

pub(crate) fn check_permutation(order: &[Vertex], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidTour(format!(
            "order has {} vertices, instance has {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v as usize >= n {
            return Err(Error::InvalidTour(format!(
                "vertex {} out of range 1..={n}",
                v as u64 + 1
            )));
        }
        if seen[v as usize] {
            return Err(Error::InvalidTour(format!("vertex {} repeated", v + 1)));
        }
        seen[v as usize] = true;
    }
    Ok(())
}

/// Greedy nearest-neighbor construction over graph edges starting at
/// `start`, ties broken by lower vertex index. Errors if the walk gets
/// stuck or the closing edge is missing, which cannot happen on a
/// complete graph.
pub fn nearest_neighbor_tour(graph: &SparseGraph, start: Vertex) -> Result<Tour> {
    let n = graph.dimension();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[start as usize] = true;
    order.push(start);
    for _ in 1..n {
        let next = graph
            .neighbor_weights(current)
            .filter(|&(u, _)| !visited[u as usize])
            .min_by_key(|&(u, w)| (w, u));
        match next {
            Some((u, _)) => {
                visited[u as usize] = true;
                order.push(u);
                current = u;
            }
            None => {
                return Err(Error::Contract(format!(
                    "nearest-neighbor walk stuck at vertex {} with unvisited cities left",
                    current + 1
                )))
            }
        }
    }
    Tour::from_order_on_graph(order, graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::build_knn_candidates;

    fn square() -> EuclideanInstance {
        EuclideanInstance::new(
            "square",
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn length_includes_closing_edge() {
        let inst = square();
        let t = Tour::from_order(vec![0, 1, 2, 3], &inst).unwrap();
        assert_eq!(t.length(), 4);
        let crossing = Tour::from_order(vec![0, 2, 1, 3], &inst).unwrap();
        assert_eq!(crossing.length(), 4); // two diagonals round to 1 each
    }

    #[test]
    fn rejects_non_permutations() {
        let inst = square();
        assert!(Tour::from_order(vec![0, 1, 2], &inst).is_err());
        assert!(Tour::from_order(vec![0, 1, 2, 2], &inst).is_err());
        assert!(Tour::from_order(vec![0, 1, 2, 4], &inst).is_err());
    }

    #[test]
    fn graph_pricing_requires_edges() {
        let inst = square();
        let cycle =
            SparseGraph::from_metric_edges(&inst, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(Tour::from_order_on_graph(vec![0, 1, 2, 3], &cycle).is_ok());
        assert!(Tour::from_order_on_graph(vec![0, 2, 1, 3], &cycle).is_err());
    }

    #[test]
    fn nearest_neighbor_on_complete_graph() {
        let inst = square();
        let g = build_knn_candidates(&inst, 3).unwrap();
        let t = nearest_neighbor_tour(&g, 0).unwrap();
        assert_eq!(t.dimension(), 4);
        assert_eq!(t.order()[0], 0);
        assert!(t.is_valid_on(&g));
    }

    #[test]
    fn nearest_neighbor_stuck_on_sparse_graph() {
        // Path graph: walking from an end visits everything, but from the
        // middle it strands one side.
        let inst = EuclideanInstance::new(
            "line",
            vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)],
        )
        .unwrap();
        let path = SparseGraph::from_metric_edges(&inst, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(nearest_neighbor_tour(&path, 1).is_err());
    }
}
