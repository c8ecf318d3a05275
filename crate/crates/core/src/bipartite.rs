//! Country–entity bipartite graphs and their weighted one-mode projections.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::dataset::{Axis, Dataset};

/// Largest weight a projection link can carry: each country has two entries.
pub const MAX_WEIGHT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("a node cannot be paired with itself ({0})")]
    SameNode(String),
    #[error("weight matrix must be {n}x{n}")]
    NotSquare { n: usize },
    #[error("weight({i},{j}) differs from weight({j},{i})")]
    Asymmetric { i: usize, j: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("weight {0} outside 0..=2")]
    WeightOutOfRange(u8),
    #[error("left node {node} has {degree} edges, expected 2")]
    LeftDegree { node: String, degree: usize },
    #[error("edge ({0},{1}) does not join the two partitions")]
    BadEdge(usize, usize),
}

/// Countries on the left, destinations or HS chapters on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    axis: Axis,
    left: Vec<String>,
    right: Vec<String>,
    /// `(left index, right index)`.
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(
        axis: Axis,
        left: Vec<String>,
        right: Vec<String>,
        edges: BTreeSet<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut degree = vec![0usize; left.len()];
        for &(l, r) in &edges {
            if l >= left.len() || r >= right.len() {
                return Err(GraphError::BadEdge(l, r));
            }
            degree[l] += 1;
        }
        if let Some((i, &d)) = degree.iter().enumerate().find(|(_, &d)| d != 2) {
            return Err(GraphError::LeftDegree {
                node: left[i].clone(),
                degree: d,
            });
        }
        Ok(BipartiteGraph {
            axis,
            left,
            right,
            edges,
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }
}

/// Left: every country. Right: the union of first and second entries, in
/// order of first appearance.
pub fn build_bipartite(ds: &Dataset, axis: Axis) -> BipartiteGraph {
    let left = ds.codes();
    let mut right: Vec<String> = Vec::new();
    let mut right_index: HashMap<String, usize> = HashMap::new();
    let mut edges = BTreeSet::new();
    for (i, r) in ds.records().iter().enumerate() {
        for entry in r.entries(axis) {
            let j = *right_index.entry(entry.clone()).or_insert_with(|| {
                right.push(entry);
                right.len() - 1
            });
            edges.insert((i, j));
        }
    }
    BipartiteGraph::new(axis, left, right, edges).expect("dataset entries are distinct")
}

/// Symmetric country-by-country link weights `L_ij` in `0..=2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    axis: Option<Axis>,
    nodes: Vec<String>,
    weights: Vec<u8>,
}

impl WeightedGraph {
    /// Builds a graph from an `n x n` matrix.
    pub fn from_matrix(nodes: Vec<String>, matrix: &[Vec<u8>]) -> Result<Self, GraphError> {
        let n = nodes.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(GraphError::NotSquare { n });
        }
        check_unique(&nodes)?;
        for i in 0..n {
            if matrix[i][i] != 0 {
                return Err(GraphError::SelfLoop(i));
            }
            for j in 0..n {
                if matrix[i][j] > MAX_WEIGHT {
                    return Err(GraphError::WeightOutOfRange(matrix[i][j]));
                }
                if matrix[i][j] != matrix[j][i] {
                    return Err(GraphError::Asymmetric { i, j });
                }
            }
        }
        Ok(WeightedGraph {
            axis: None,
            nodes,
            weights: matrix.concat(),
        })
    }

    /// Builds a graph from `(i, j, weight)` triples; later triples overwrite.
    pub fn from_edges(nodes: Vec<String>, edges: &[(usize, usize, u8)]) -> Result<Self, GraphError> {
        let n = nodes.len();
        check_unique(&nodes)?;
        let mut weights = vec![0u8; n * n];
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(GraphError::IndexOutOfRange(i.max(j)));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if w > MAX_WEIGHT {
                return Err(GraphError::WeightOutOfRange(w));
            }
            weights[i * n + j] = w;
            weights[j * n + i] = w;
        }
        Ok(WeightedGraph {
            axis: None,
            nodes,
            weights,
        })
    }

    pub fn axis(&self) -> Option<Axis> {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn index_of(&self, code: &str) -> Result<usize, GraphError> {
        self.nodes
            .iter()
            .position(|c| c == code)
            .ok_or_else(|| GraphError::UnknownNode(code.to_string()))
    }

    pub fn check_index(&self, i: usize) -> Result<(), GraphError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange(i))
        }
    }

    /// Panics if either index is out of range.
    pub fn weight(&self, i: usize, j: usize) -> u8 {
        let n = self.len();
        assert!(i < n && j < n, "node index out of range");
        self.weights[i * n + j]
    }

    pub fn weight_between(&self, a: &str, b: &str) -> Result<u8, GraphError> {
        Ok(self.weight(self.index_of(a)?, self.index_of(b)?))
    }

    /// Neighbors on the unweighted skeleton (`L_ij >= 1`), ascending.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.len();
        self.weights[i * n..(i + 1) * n]
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(j, _)| j)
    }

    /// Adjacency lists of the unweighted skeleton.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| self.neighbors(i).collect()).collect()
    }

    /// Links with `i < j` and positive weight, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, u8)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = self.weights[i * n + j];
                if w > 0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Number of node pairs with `L_ij >= 1`.
    pub fn edge_count(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0).count() / 2
    }
}

fn check_unique(nodes: &[String]) -> Result<(), GraphError> {
    let mut seen = BTreeSet::new();
    for n in nodes {
        if !seen.insert(n.as_str()) {
            return Err(GraphError::DuplicateNode(n.clone()));
        }
    }
    Ok(())
}

/// One-mode projection onto the countries: `L_ij` is the number of entities
/// adjacent to both `i` and `j`.
pub fn project(bg: &BipartiteGraph) -> WeightedGraph {
    let n = bg.left.len();
    let mut by_entity: Vec<Vec<usize>> = vec![Vec::new(); bg.right.len()];
    for &(l, r) in &bg.edges {
        by_entity[r].push(l);
    }
    let mut weights = vec![0u8; n * n];
    for members in &by_entity {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                weights[i * n + j] += 1;
                weights[j * n + i] += 1;
            }
        }
    }
    WeightedGraph {
        axis: Some(bg.axis),
        nodes: bg.left.clone(),
        weights,
    }
}

/// `L_ij` straight from the two records, without building a graph.
pub fn link_weight(ds: &Dataset, i: &str, j: &str, axis: Axis) -> Result<u8, GraphError> {
    if i == j {
        return Err(GraphError::SameNode(i.to_string()));
    }
    let a = ds.get(i).ok_or_else(|| GraphError::UnknownNode(i.to_string()))?;
    let b = ds.get(j).ok_or_else(|| GraphError::UnknownNode(j.to_string()))?;
    let theirs = b.entries(axis);
    Ok(a.entries(axis).iter().filter(|e| theirs.contains(e)).count() as u8)
}
