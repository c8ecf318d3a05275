//! Node and network coefficients of a projection.
//!
//! Degree is weighted (sum of `L_ij`). Betweenness, clustering, density and
//! diameter are computed on the unweighted skeleton, where `i ~ j` iff
//! `L_ij >= 1`.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::bipartite::{GraphError, WeightedGraph};
use crate::dataset::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("density needs at least 2 nodes, graph has {0}")]
    TooFewNodes(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error("node {0} has no partition label")]
    Unlabeled(String),
}

/// Which betweenness scale a report column shows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BetweennessScale {
    /// Pair-dependency sum, each unordered pair counted once.
    #[default]
    Raw,
    /// Raw value as a percentage of the `(n-1)(n-2)/2` pairs.
    Pct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Betweenness {
    pub raw: f64,
    pub pct: f64,
}

impl Betweenness {
    pub fn scaled(&self, scale: BetweennessScale) -> f64 {
        match scale {
            BetweennessScale::Raw => self.raw,
            BetweennessScale::Pct => self.pct,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeMetrics {
    pub code: String,
    pub weighted_degree: u32,
    pub degree: usize,
    pub betweenness_raw: f64,
    pub betweenness_pct: f64,
    pub clustering: f64,
}

/// One row of a partition table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSummary {
    pub partition: String,
    pub size: usize,
    /// Mean weighted degree.
    pub mean_k: f64,
    pub mean_k_unweighted: f64,
    pub mean_b_raw: f64,
    pub mean_b_pct: f64,
    pub mean_c: f64,
}

impl PartitionSummary {
    pub fn mean_b(&self, scale: BetweennessScale) -> f64 {
        match scale {
            BetweennessScale::Raw => self.mean_b_raw,
            BetweennessScale::Pct => self.mean_b_pct,
        }
    }
}

/// Whole-graph row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkSummary {
    pub size: usize,
    pub mean_k: f64,
    pub mean_k_unweighted: f64,
    pub mean_b_raw: f64,
    pub mean_b_pct: f64,
    pub mean_c: f64,
    pub density: f64,
    pub diameter: u32,
}

impl NetworkSummary {
    pub fn mean_b(&self, scale: BetweennessScale) -> f64 {
        match scale {
            BetweennessScale::Raw => self.mean_b_raw,
            BetweennessScale::Pct => self.mean_b_pct,
        }
    }
}

pub fn weighted_degree(g: &WeightedGraph, i: usize) -> Result<u32, GraphError> {
    g.check_index(i)?;
    Ok((0..g.len()).map(|j| u32::from(g.weight(i, j))).sum())
}

/// Number of neighbors with `L_ij >= 1`.
pub fn degree(g: &WeightedGraph, i: usize) -> Result<usize, GraphError> {
    g.check_index(i)?;
    Ok(g.neighbors(i).count())
}

/// Brandes' algorithm on the unweighted skeleton.
///
/// Unreachable pairs contribute nothing. Sources are processed in index order
/// so the floating-point sums are reproducible.
pub fn betweenness(g: &WeightedGraph) -> Vec<Betweenness> {
    let n = g.len();
    let adj = g.adjacency();
    let mut total = vec![0.0f64; n];

    let mut sigma = vec![0u64; n];
    let mut dist = vec![u32::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        sigma.fill(0);
        dist.fill(u32::MAX);
        delta.fill(0.0);
        preds.iter_mut().for_each(Vec::clear);
        order.clear();

        sigma[s] = 1;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] as f64 / sigma[w] as f64 * (1.0 + delta[w]);
            }
            if w != s {
                total[w] += delta[w];
            }
        }
    }

    let pairs = if n >= 3 {
        ((n - 1) * (n - 2)) as f64 / 2.0
    } else {
        0.0
    };
    total
        .into_iter()
        .map(|t| {
            // Each unordered pair was seen from both endpoints.
            let raw = t / 2.0;
            let pct = if pairs > 0.0 { raw / pairs * 100.0 } else { 0.0 };
            Betweenness { raw, pct }
        })
        .collect()
}

/// `2T / (k(k-1))` where `T` counts links among the `k` neighbors of `i`;
/// zero when `k < 2`.
pub fn local_clustering(g: &WeightedGraph, i: usize) -> Result<f64, GraphError> {
    g.check_index(i)?;
    let nbrs: Vec<usize> = g.neighbors(i).collect();
    let k = nbrs.len();
    if k < 2 {
        return Ok(0.0);
    }
    let mut links = 0usize;
    for (a, &u) in nbrs.iter().enumerate() {
        for &v in &nbrs[a + 1..] {
            if g.weight(u, v) > 0 {
                links += 1;
            }
        }
    }
    Ok(2.0 * links as f64 / (k * (k - 1)) as f64)
}

/// `2L / (n(n-1))` with `L` the number of linked pairs.
pub fn density(g: &WeightedGraph) -> Result<f64, MetricsError> {
    let n = g.len();
    if n < 2 {
        return Err(MetricsError::TooFewNodes(n));
    }
    Ok(2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64)
}

/// Hop distances from `source`; `None` for unreachable nodes.
pub fn bfs_distances(g: &WeightedGraph, source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued nodes have a distance");
        for w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Connected components of the skeleton, each sorted, ordered by smallest
/// member.
pub fn connected_components(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        let mut comp: Vec<usize> = bfs_distances(g, s)
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|_| i))
            .collect();
        comp.sort_unstable();
        for &i in &comp {
            seen[i] = true;
        }
        out.push(comp);
    }
    out
}

/// Longest shortest path inside the largest component (the earliest one on a
/// size tie).
pub fn diameter(g: &WeightedGraph) -> Result<u32, MetricsError> {
    if g.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let comps = connected_components(g);
    let largest = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .expect("non-empty graph");
    Ok(largest
        .iter()
        .flat_map(|&s| bfs_distances(g, s).into_iter().flatten())
        .max()
        .unwrap_or(0))
}

pub fn node_metrics(g: &WeightedGraph) -> Vec<NodeMetrics> {
    let b = betweenness(g);
    (0..g.len())
        .map(|i| NodeMetrics {
            code: g.nodes()[i].clone(),
            weighted_degree: weighted_degree(g, i).expect("index in range"),
            degree: degree(g, i).expect("index in range"),
            betweenness_raw: b[i].raw,
            betweenness_pct: b[i].pct,
            clustering: local_clustering(g, i).expect("index in range"),
        })
        .collect()
}

#[derive(Default)]
struct Sums {
    size: usize,
    k: f64,
    k_unweighted: f64,
    b_raw: f64,
    b_pct: f64,
    c: f64,
}

impl Sums {
    fn add(&mut self, m: &NodeMetrics) {
        self.size += 1;
        self.k += f64::from(m.weighted_degree);
        self.k_unweighted += m.degree as f64;
        self.b_raw += m.betweenness_raw;
        self.b_pct += m.betweenness_pct;
        self.c += m.clustering;
    }

    fn mean(&self, x: f64) -> f64 {
        x / self.size as f64
    }
}

/// Arithmetic means per partition, in the partition's row order. Partitions
/// with no member node are omitted.
pub fn partition_summaries(
    g: &WeightedGraph,
    partition: &Partition,
) -> Result<Vec<PartitionSummary>, MetricsError> {
    let metrics = node_metrics(g);
    let mut sums: Vec<Sums> = partition.order().iter().map(|_| Sums::default()).collect();
    for m in &metrics {
        let rank = partition
            .label_of(&m.code)
            .and_then(|l| partition.rank(l))
            .ok_or_else(|| MetricsError::Unlabeled(m.code.clone()))?;
        sums[rank].add(m);
    }
    Ok(partition
        .order()
        .iter()
        .zip(&sums)
        .filter(|(_, s)| s.size > 0)
        .map(|(label, s)| PartitionSummary {
            partition: label.clone(),
            size: s.size,
            mean_k: s.mean(s.k),
            mean_k_unweighted: s.mean(s.k_unweighted),
            mean_b_raw: s.mean(s.b_raw),
            mean_b_pct: s.mean(s.b_pct),
            mean_c: s.mean(s.c),
        })
        .collect())
}

pub fn network_summary(g: &WeightedGraph) -> Result<NetworkSummary, MetricsError> {
    let density = density(g)?;
    let diameter = diameter(g)?;
    let mut s = Sums::default();
    node_metrics(g).iter().for_each(|m| s.add(m));
    Ok(NetworkSummary {
        size: g.len(),
        mean_k: s.mean(s.k),
        mean_k_unweighted: s.mean(s.k_unweighted),
        mean_b_raw: s.mean(s.b_raw),
        mean_b_pct: s.mean(s.b_pct),
        mean_c: s.mean(s.c),
        density,
        diameter,
    })
}
