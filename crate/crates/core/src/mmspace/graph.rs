//! Shortest-path metric completion of weighted graphs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use ordered_float::OrderedFloat;
use rayon::prelude::*;

use crate::error::{Error, Result};
use super::DiscreteMMSpace;

/// An undirected weighted graph given as labelled edges, plus any isolated
/// nodes that appear on no edge. Node order is first appearance.
#[derive(Debug, Clone, Default)]
pub struct EdgeList {
    pub edges: Vec<(String, String, f64)>,
    pub isolated: Vec<String>,
}

impl EdgeList {
    pub fn from_edges<I, S>(edges: I) -> Self
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: Into<String>,
    {
        EdgeList {
            edges: edges
                .into_iter()
                .map(|(u, v, l)| (u.into(), v.into(), l))
                .collect(),
            isolated: Vec::new(),
        }
    }
}

/// Node weights for graph-based construction.
#[derive(Debug, Clone)]
pub enum GraphWeights {
    Uniform,
    /// Keyed by node label; every node must be covered.
    ByLabel(Vec<(String, f64)>),
}

impl DiscreteMMSpace {
    /// All-pairs shortest-path metric of a connected graph with positive
    /// edge lengths. Per-source Dijkstra with a binary heap; sources run in
    /// parallel with deterministic output.
    pub fn from_graph(graph: &EdgeList, weights: &GraphWeights) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut lookup: HashMap<String, usize> = HashMap::new();
        let mut intern = |label: &String| {
            if !lookup.contains_key(label) {
                lookup.insert(label.clone(), labels.len());
                labels.push(label.clone());
            }
        };
        for (u, v, _) in &graph.edges {
            intern(u);
            intern(v);
        }
        for node in &graph.isolated {
            intern(node);
        }
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (u, v, length) in &graph.edges {
            if !(length.is_finite() && *length > 0.0) {
                return Err(Error::NonpositiveEdgeLength {
                    u: u.clone(),
                    v: v.clone(),
                    length: *length,
                });
            }
            let (iu, iv) = (lookup[u], lookup[v]);
            if iu == iv {
                continue; // self-loops cannot shorten any path
            }
            adjacency[iu].push((iv, *length));
            adjacency[iv].push((iu, *length));
        }

        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|source| dijkstra(&adjacency, source))
            .collect();
        for (i, row) in rows.iter().enumerate() {
            if let Some(j) = row.iter().position(|d| !d.is_finite()) {
                return Err(Error::DisconnectedGraph {
                    from: labels[i].clone(),
                    to: labels[j].clone(),
                });
            }
        }

        let weight_vec = match weights {
            GraphWeights::Uniform => vec![1.0; n],
            GraphWeights::ByLabel(pairs) => {
                let map: HashMap<&str, f64> =
                    pairs.iter().map(|(l, w)| (l.as_str(), *w)).collect();
                let mut out = Vec::with_capacity(n);
                for label in &labels {
                    match map.get(label.as_str()) {
                        Some(&w) => out.push(w),
                        None => {
                            return Err(Error::MissingNodeWeight {
                                label: label.clone(),
                            })
                        }
                    }
                }
                out
            }
        };
        for (index, &value) in weight_vec.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonpositiveWeight { index, value });
            }
        }

        // one value per unordered pair: row i supplies d(i, j) for j <= i
        let mut tri = Vec::with_capacity(n * (n + 1) / 2);
        for (i, row) in rows.iter().enumerate() {
            tri.extend_from_slice(&row[..=i]);
        }
        Ok(Self::assemble(n, tri, weight_vec, labels))
    }
}

fn dijkstra(adjacency: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adjacency.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((OrderedFloat(0.0), source)));
    while let Some(Reverse((OrderedFloat(d), node))) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, length) in &adjacency[node] {
            let candidate = d + length;
            if candidate < dist[next] {
                dist[next] = candidate;
                heap.push(Reverse((OrderedFloat(candidate), next)));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmspace::Weights;

    #[test]
    fn path_graph_distances() {
        let g = EdgeList::from_edges([("a", "b", 1.0), ("b", "c", 1.0)]);
        let s = DiscreteMMSpace::from_graph(&g, &GraphWeights::Uniform).unwrap();
        assert_eq!(s.labels(), &["a", "b", "c"]);
        let expect = [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.distance(i, j), expect[i][j]);
            }
        }
        assert!(s.validate().all_ok());
    }

    #[test]
    fn single_isolated_node() {
        let g = EdgeList {
            edges: vec![],
            isolated: vec!["only".into()],
        };
        let s = DiscreteMMSpace::from_graph(&g, &GraphWeights::Uniform).unwrap();
        assert_eq!(s.n_points(), 1);
        assert_eq!(s.distance(0, 0), 0.0);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = EdgeList {
            edges: vec![],
            isolated: vec!["a".into(), "b".into()],
        };
        match DiscreteMMSpace::from_graph(&g, &GraphWeights::Uniform) {
            Err(Error::DisconnectedGraph { from, to }) => {
                assert_eq!((from.as_str(), to.as_str()), ("a", "b"));
            }
            other => panic!("expected disconnected error, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_edge_length_is_rejected() {
        let g = EdgeList::from_edges([("a", "b", 0.0)]);
        assert!(matches!(
            DiscreteMMSpace::from_graph(&g, &GraphWeights::Uniform),
            Err(Error::NonpositiveEdgeLength { .. })
        ));
    }

    #[test]
    fn label_weights_must_cover_all_nodes() {
        let g = EdgeList::from_edges([("a", "b", 1.0)]);
        let w = GraphWeights::ByLabel(vec![("a".into(), 2.0)]);
        assert!(matches!(
            DiscreteMMSpace::from_graph(&g, &w),
            Err(Error::MissingNodeWeight { .. })
        ));
        let w = GraphWeights::ByLabel(vec![("a".into(), 2.0), ("b".into(), 3.0)]);
        let s = DiscreteMMSpace::from_graph(&g, &w).unwrap();
        assert_eq!(s.weights(), &[2.0, 3.0]);
    }

    #[test]
    fn multi_edges_take_the_shorter_one() {
        let g = EdgeList::from_edges([("a", "b", 5.0), ("a", "b", 1.0)]);
        let s = DiscreteMMSpace::from_graph(&g, &GraphWeights::Uniform).unwrap();
        assert_eq!(s.distance(0, 1), 1.0);
    }

    #[test]
    fn shortcut_beats_long_edge() {
        let g = EdgeList::from_edges([("a", "b", 10.0), ("a", "c", 1.0), ("c", "b", 1.0)]);
        let s = DiscreteMMSpace::from_graph(&g, &GraphWeights::Uniform).unwrap();
        assert_eq!(s.distance(0, 1), 2.0);
        let m = DiscreteMMSpace::from_distance_matrix(
            &(0..3)
                .map(|i| (0..3).map(|j| s.distance(i, j)).collect())
                .collect::<Vec<_>>(),
            &Weights::Uniform,
        );
        assert!(m.is_ok());
    }
}
