//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use tradenet::dataset::{HsCode, Organization};
use tradenet::{CountryRecord, Dataset, WeightedGraph};

pub const DEST_POOL: [&str; 8] = ["CHI", "USA", "FRA", "ZAF", "IND", "SWI", "BWA", "JAP"];

/// `AAA`, `AAB`, ... so codes sort in index order.
pub fn code(i: usize) -> String {
    let b = b'A';
    let chars = [b + (i / 676 % 26) as u8, b + (i / 26 % 26) as u8, b + (i % 26) as u8];
    String::from_utf8(chars.to_vec()).unwrap()
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(code).collect()
}

/// Random corpus with 1..=max_n countries over a small destination pool and
/// HS chapters 1..=30.
pub fn dataset_strategy(max_n: usize) -> impl Strategy<Value = Dataset> {
    let row = (1u8..=5, 0usize..8, 1usize..8, 1u8..=30, 1u8..30, proptest::option::of(0u32..1_000_000));
    proptest::collection::vec(row, 1..=max_n).prop_map(|rows| {
        let records = rows
            .into_iter()
            .enumerate()
            .map(|(i, (org, d1, step, p1, pstep, value))| {
                let d2 = (d1 + step) % DEST_POOL.len();
                let p2 = (p1 - 1 + pstep) % 30 + 1;
                CountryRecord {
                    code: code(i),
                    name: format!("Country {i}"),
                    org: Organization::from_id(org).unwrap(),
                    destinations: [DEST_POOL[d1].to_string(), DEST_POOL[d2].to_string()],
                    commodities: [HsCode::new(p1).unwrap(), HsCode::new(p2).unwrap()],
                    export_value: value.map(f64::from),
                }
            })
            .collect();
        Dataset::new(records, "generated").unwrap()
    })
}

/// Upper-triangle weights in 0..=2 for `n` nodes.
pub fn graph_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (min_n..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(0u8..=2, n * n.saturating_sub(1) / 2)))
        .prop_map(|(n, w)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if w[k] > 0 {
                        edges.push((i, j, w[k]));
                    }
                    k += 1;
                }
            }
            WeightedGraph::from_edges(names(n), &edges).unwrap()
        })
}

/// Connected graphs: a random tree plus random extra links.
pub fn connected_graph_strategy(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec((any::<prop::sample::Index>(), 1u8..=2), n - 1),
                proptest::collection::vec(0u8..=2, n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, tree, extra)| {
            let mut w = vec![vec![0u8; n]; n];
            for (i, (parent, weight)) in tree.into_iter().enumerate() {
                let child = i + 1;
                let p = parent.index(child);
                w[p][child] = weight;
                w[child][p] = weight;
            }
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if w[i][j] == 0 && extra[k] > 0 {
                        w[i][j] = extra[k];
                        w[j][i] = extra[k];
                    }
                    k += 1;
                }
            }
            WeightedGraph::from_matrix(names(n), &w).unwrap()
        })
}

/// Shared-entry count computed straight from the records.
pub fn brute_projection(ds: &Dataset, axis: tradenet::Axis) -> BTreeMap<(String, String), u8> {
    let mut out = BTreeMap::new();
    for a in ds.records() {
        for b in ds.records() {
            if a.code == b.code {
                continue;
            }
            let ea = a.entries(axis);
            let eb = b.entries(axis);
            let shared = ea.iter().filter(|x| eb.contains(x)).count() as u8;
            out.insert((a.code.clone(), b.code.clone()), shared);
        }
    }
    out
}

/// All-pairs hop distances, `None` when unreachable.
pub fn floyd_warshall(g: &WeightedGraph) -> Vec<Vec<Option<u32>>> {
    let n = g.len();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if i != j && g.weight(i, j) > 0 {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn enumerate_paths(
    g: &WeightedGraph,
    d: &[Vec<Option<u32>>],
    at: usize,
    t: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if at == t {
        out.push(path.clone());
        return;
    }
    for next in 0..g.len() {
        if g.weight(at, next) > 0 && d[next][t].is_some() && d[next][t].unwrap() + 1 == d[at][t].unwrap() {
            path.push(next);
            enumerate_paths(g, d, next, t, path, out);
            path.pop();
        }
    }
}

/// Unordered-pair betweenness by listing every shortest path.
pub fn brute_betweenness(g: &WeightedGraph) -> Vec<f64> {
    let n = g.len();
    let d = floyd_warshall(g);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if d[s][t].is_none() {
                continue;
            }
            let mut paths = Vec::new();
            enumerate_paths(g, &d, s, t, &mut vec![s], &mut paths);
            let total = paths.len() as f64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                b[v] += through / total;
            }
        }
    }
    b
}

/// Kruskal over the finite distances `1/L`; returns (total, edge count).
pub fn kruskal(g: &WeightedGraph) -> (f64, usize) {
    let n = g.len();
    let mut edges: Vec<(f64, usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(i, j, w)| (1.0 / f64::from(w), i, j))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let (mut total, mut count) = (0.0, 0);
    for (d, i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            total += d;
            count += 1;
        }
    }
    (total, count)
}

/// Prim from node 0; only meaningful on connected graphs.
pub fn prim(g: &WeightedGraph) -> f64 {
    let n = g.len();
    let mut best = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !done[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .unwrap();
        done[u] = true;
        total += best[u];
        for v in 0..n {
            let w = g.weight(u, v);
            if !done[v] && w > 0 {
                best[v] = best[v].min(1.0 / f64::from(w));
            }
        }
    }
    total
}
