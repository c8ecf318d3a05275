//! Distance matrices, single-linkage clustering and minimal spanning trees.
//!
//! The distance between two countries is `1 / L_ij`, infinite when they share
//! nothing. Nearest-neighbor (single-link) agglomeration over that matrix
//! merges two clusters per step; the pair of countries realizing each merge is
//! an edge of the minimal spanning tree.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::bipartite::WeightedGraph;
use crate::dataset::Partition;

/// How infinite distances are written in CSV output.
pub const INF_TOKEN: &str = "INF";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MstError {
    #[error("distance matrix must be {n}x{n}")]
    NotSquare { n: usize },
    #[error("d({i},{j}) differs from d({j},{i})")]
    Asymmetric { i: usize, j: usize },
    #[error("d({0},{0}) must be 0")]
    NonZeroDiagonal(usize),
    #[error("d({i},{j}) = {value} is not a distance")]
    BadValue { i: usize, j: usize, value: f64 },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
}

/// Symmetric, zero-diagonal distances; `f64::INFINITY` marks absent links.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<String>, rows: &[Vec<f64>]) -> Result<Self, MstError> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(MstError::NotSquare { n });
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(MstError::DuplicateLabel(w[0].clone()));
        }
        for i in 0..n {
            if rows[i][i] != 0.0 {
                return Err(MstError::NonZeroDiagonal(i));
            }
            for j in 0..n {
                let value = rows[i][j];
                if value.is_nan() || value < 0.0 {
                    return Err(MstError::BadValue { i, j, value });
                }
                if value != rows[j][i] {
                    return Err(MstError::Asymmetric { i, j });
                }
            }
        }
        Ok(DistanceMatrix {
            labels,
            d: rows.concat(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.len() + j]
    }

    /// Square matrix with a header row and column of labels.
    pub fn to_csv(&self) -> String {
        let n = self.len();
        let mut out = String::from("code");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&self.labels[i]);
            for j in 0..n {
                out.push(',');
                out.push_str(&format_distance(self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip decimal, or [`INF_TOKEN`].
pub fn format_distance(d: f64) -> String {
    if d.is_infinite() {
        INF_TOKEN.to_string()
    } else {
        d.to_string()
    }
}

/// `d_ij = 1 / L_ij`, infinite for `L_ij = 0`, zero on the diagonal.
pub fn distance_matrix(g: &WeightedGraph) -> DistanceMatrix {
    let n = g.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[i * n + j] = match g.weight(i, j) {
                    0 => f64::INFINITY,
                    w => 1.0 / f64::from(w),
                };
            }
        }
    }
    DistanceMatrix {
        labels: g.nodes().to_vec(),
        d,
    }
}

/// One agglomeration. Leaves are clusters `0..n`; step `s` creates `n + s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergeStep {
    pub cluster_a: usize,
    pub cluster_b: usize,
    pub distance: f64,
    pub new_cluster: usize,
    /// The two nodes whose distance realized the merge, label-ordered.
    pub edge: (usize, usize),
    /// Set when no finite distance was left and components were joined at
    /// the sentinel.
    pub infinite: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    labels: Vec<String>,
    steps: Vec<MergeStep>,
}

impl Dendrogram {
    pub fn steps(&self) -> &[MergeStep] {
        &self.steps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Steps taken at a finite distance.
    pub fn finite_steps(&self) -> impl Iterator<Item = &MergeStep> {
        self.steps.iter().filter(|s| !s.infinite)
    }

    /// `step,cluster_a,cluster_b,distance`, steps numbered from 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,cluster_a,cluster_b,distance\n");
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                s.cluster_a,
                s.cluster_b,
                format_distance(s.distance)
            ));
        }
        out
    }
}

/// Closest pair of nodes between two clusters.
#[derive(Debug, Clone, Copy)]
struct Link {
    distance: f64,
    /// Endpoints with `labels[lo] < labels[hi]`.
    lo: usize,
    hi: usize,
}

impl Link {
    fn new(m: &DistanceMatrix, p: usize, q: usize) -> Self {
        let (lo, hi) = if m.labels[p] <= m.labels[q] { (p, q) } else { (q, p) };
        Link {
            distance: m.get(p, q),
            lo,
            hi,
        }
    }

    /// Distance first, then the label of the smaller endpoint, then the other.
    fn cmp(&self, other: &Link, labels: &[String]) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then_with(|| labels[self.lo].cmp(&labels[other.lo]))
            .then_with(|| labels[self.hi].cmp(&labels[other.hi]))
    }
}

/// Nearest-neighbor agglomerative clustering.
///
/// Every step merges the two clusters whose closest members are nearest.
/// Ties go to the member pair whose smaller label sorts first, then the larger
/// label. Once only infinite distances remain, the remaining clusters are
/// still merged under the same rule and the steps are flagged `infinite`, so
/// a dendrogram over `n` labels always has `n - 1` steps.
pub fn single_linkage(m: &DistanceMatrix) -> Dendrogram {
    let n = m.len();
    let labels = &m.labels;
    // links[a][b]: closest pair between the clusters in slots a and b.
    let mut links: Vec<Vec<Link>> = (0..n)
        .map(|p| (0..n).map(|q| Link::new(m, p, q)).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut cluster_id: Vec<usize> = (0..n).collect();
    let mut steps = Vec::with_capacity(n.saturating_sub(1));

    while active.len() > 1 {
        let mut best: Option<(usize, usize)> = None;
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let better = match best {
                    None => true,
                    Some((ba, bb)) => links[a][b].cmp(&links[ba][bb], labels) == Ordering::Less,
                };
                if better {
                    best = Some((a, b));
                }
            }
        }
        let (a, b) = best.expect("at least two active clusters");
        let link = links[a][b];
        let new_cluster = n + steps.len();
        let (ca, cb) = (cluster_id[a].min(cluster_id[b]), cluster_id[a].max(cluster_id[b]));
        steps.push(MergeStep {
            cluster_a: ca,
            cluster_b: cb,
            distance: link.distance,
            new_cluster,
            edge: (link.lo, link.hi),
            infinite: link.distance.is_infinite(),
        });

        // The merged cluster lives on in slot a.
        active.retain(|&s| s != b);
        cluster_id[a] = new_cluster;
        for &c in &active {
            if c == a {
                continue;
            }
            let via_b = links[b][c];
            if via_b.cmp(&links[a][c], labels) == Ordering::Less {
                links[a][c] = via_b;
                links[c][a] = via_b;
            }
        }
    }

    Dendrogram {
        labels: labels.clone(),
        steps,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

/// Minimal spanning tree, or forest when the graph is disconnected.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    labels: Vec<String>,
    edges: Vec<TreeEdge>,
}

impl SpanningTree {
    /// The finite-distance merges of a dendrogram.
    pub fn from_dendrogram(d: &Dendrogram) -> Self {
        let edges = d
            .finite_steps()
            .map(|s| TreeEdge {
                a: s.edge.0,
                b: s.edge.1,
                distance: s.distance,
            })
            .collect();
        SpanningTree {
            labels: d.labels.clone(),
            edges,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn total_distance(&self) -> f64 {
        self.edges.iter().map(|e| e.distance).sum()
    }

    pub fn components(&self) -> usize {
        self.labels.len() - self.edges.len()
    }

    /// True when the input graph was connected.
    pub fn is_spanning(&self) -> bool {
        self.components() <= 1
    }

    /// Set when the result is a forest rather than a single tree.
    pub fn warning(&self) -> Option<String> {
        (!self.is_spanning()).then(|| {
            format!(
                "graph is disconnected: spanning forest with {} components and {} edges",
                self.components(),
                self.edges.len()
            )
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.labels.len()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }

    /// Hop eccentricity of every node within its own tree.
    pub fn eccentricities(&self) -> Vec<u32> {
        let adj = self.adjacency();
        (0..self.labels.len())
            .map(|s| {
                let mut dist = vec![u32::MAX; adj.len()];
                dist[s] = 0;
                let mut far = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(v) = queue.pop_front() {
                    far = far.max(dist[v]);
                    for &w in &adj[v] {
                        if dist[w] == u32::MAX {
                            dist[w] = dist[v] + 1;
                            queue.push_back(w);
                        }
                    }
                }
                far
            })
            .collect()
    }

    /// `src,dst,distance` using node labels.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("src,dst,distance\n");
        for e in &self.edges {
            out.push_str(&format!(
                "{},{},{}\n",
                self.labels[e.a],
                self.labels[e.b],
                format_distance(e.distance)
            ));
        }
        out
    }
}

/// Spanning tree built from the single-linkage merge history.
pub fn mst_edges(m: &DistanceMatrix) -> SpanningTree {
    SpanningTree::from_dendrogram(&single_linkage(m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeNodeStats {
    pub code: String,
    pub partition: Option<String>,
    pub degree: usize,
    pub eccentricity: u32,
    pub leaf: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionTreeCounts {
    pub partition: String,
    pub size: usize,
    pub leaves: usize,
    /// Members among the top-decile tree degrees.
    pub hubs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeReport {
    pub nodes: Vec<TreeNodeStats>,
    pub leaves: Vec<String>,
    /// Smallest degree that counts as top decile.
    pub hub_degree: usize,
    pub partitions: Vec<PartitionTreeCounts>,
    pub warning: Option<String>,
}

impl TreeReport {
    pub fn node(&self, code: &str) -> Option<&TreeNodeStats> {
        self.nodes.iter().find(|n| n.code == code)
    }

    /// Codes sorted by descending tree degree, ties by code.
    pub fn by_degree(&self) -> Vec<&str> {
        let mut v: Vec<&TreeNodeStats> = self.nodes.iter().collect();
        v.sort_by(|a, b| b.degree.cmp(&a.degree).then_with(|| a.code.cmp(&b.code)));
        v.into_iter().map(|n| n.code.as_str()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("code,partition,degree,eccentricity,leaf\n");
        for n in &self.nodes {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                n.code,
                n.partition.as_deref().unwrap_or(""),
                n.degree,
                n.eccentricity,
                n.leaf
            ));
        }
        out
    }
}

/// Per-node degree, eccentricity and leaf flag, with leaf and hub counts per
/// partition. Hubs are the nodes whose degree reaches that of the
/// `ceil(n/10)`-th highest degree.
pub fn tree_stats(t: &SpanningTree, partition: &Partition) -> TreeReport {
    let degrees = t.degrees();
    let ecc = t.eccentricities();
    let n = degrees.len();

    let mut sorted = degrees.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let hub_degree = if n == 0 { 0 } else { sorted[n.div_ceil(10) - 1] };

    let nodes: Vec<TreeNodeStats> = (0..n)
        .map(|i| TreeNodeStats {
            code: t.labels[i].clone(),
            partition: partition.label_of(&t.labels[i]).map(String::from),
            degree: degrees[i],
            eccentricity: ecc[i],
            leaf: degrees[i] == 1,
        })
        .collect();

    let partitions = partition
        .order()
        .iter()
        .map(|label| {
            let members = nodes.iter().filter(|s| s.partition.as_deref() == Some(label));
            let (mut size, mut leaves, mut hubs) = (0, 0, 0);
            for s in members {
                size += 1;
                leaves += usize::from(s.leaf);
                hubs += usize::from(s.degree >= hub_degree && s.degree > 0);
            }
            PartitionTreeCounts {
                partition: label.clone(),
                size,
                leaves,
                hubs,
            }
        })
        .collect();

    TreeReport {
        leaves: nodes.iter().filter(|s| s.leaf).map(|s| s.code.clone()).collect(),
        nodes,
        hub_degree,
        partitions,
        warning: t.warning(),
    }
}
