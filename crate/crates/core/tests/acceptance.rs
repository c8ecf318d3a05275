//! Acceptance run over the bundled corpus. Prints one line per criterion and
//! exits non-zero when any criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use tradenet::bipartite::{build_bipartite, link_weight, project};
use tradenet::dataset::{
    frequency_histogram, partition_labels, Aggregation, CommodityTaxonomy, DestinationTaxonomy,
    PartitionScheme,
};
use tradenet::metrics::{
    betweenness, degree, density, network_summary, node_metrics, partition_summaries,
    PartitionSummary,
};
use tradenet::mst::{distance_matrix, single_linkage, tree_stats, SpanningTree};
use tradenet::{Axis, Dataset, WeightedGraph};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Check = fn(&Ctx) -> Outcome;

struct Ctx {
    ds: Dataset,
    dsn: WeightedGraph,
    csn: WeightedGraph,
    dt: DestinationTaxonomy,
    ct: CommodityTaxonomy,
}

impl Ctx {
    fn rows(&self, g: &WeightedGraph, scheme: PartitionScheme) -> Vec<PartitionSummary> {
        let p = partition_labels(&self.ds, scheme, &self.dt, &self.ct).unwrap();
        partition_summaries(g, &p).unwrap()
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol + 1e-12
}

fn c1(ctx: &Ctx) -> Outcome {
    let cases = [
        (Axis::Destination, "AGO", "ZAF", 2),
        (Axis::Destination, "CMR", "CAV", 1),
        (Axis::Destination, "AGO", "KEN", 0),
        (Axis::Destination, "AGO", "CAV", 0),
        (Axis::Commodity, "KEN", "UGA", 2),
        (Axis::Commodity, "ERI", "RWA", 1),
        (Axis::Commodity, "MOZ", "KEN", 0),
    ];
    let mut bad = Vec::new();
    for (axis, a, b, want) in cases {
        let got = link_weight(&ctx.ds, a, b, axis).unwrap();
        let g = if axis == Axis::Destination { &ctx.dsn } else { &ctx.csn };
        assert_eq!(got, g.weight_between(a, b).unwrap());
        if got != want {
            bad.push(format!("{}({a},{b})={got} want {want}", axis.network_name()));
        }
    }
    let detail = if bad.is_empty() { "7/7 weights".to_string() } else { format!("{}/7 weights; {}", 7 - bad.len(), bad.join(", ")) };
    outcome(bad.is_empty(), detail)
}

fn c2(ctx: &Ctx) -> Outcome {
    let sizes = |g, s| ctx.rows(g, s).iter().map(|r| r.size).collect::<Vec<_>>();
    let dest = sizes(&ctx.dsn, PartitionScheme::Destination);
    let org_d = sizes(&ctx.dsn, PartitionScheme::Organization);
    let org_c = sizes(&ctx.csn, PartitionScheme::Organization);
    let comm = sizes(&ctx.csn, PartitionScheme::Commodity);
    let pass = dest == [7, 4, 16, 16, 6]
        && org_d == [15, 5, 8, 7, 14]
        && org_c == [15, 5, 8, 7, 14]
        && comm == [15, 15, 7, 6, 6];
    outcome(pass, format!("destination {dest:?}, organization {org_d:?}, commodity {comm:?}"))
}

fn c3(ctx: &Ctx) -> Outcome {
    let d = network_summary(&ctx.dsn).unwrap();
    let c = network_summary(&ctx.csn).unwrap();
    let checks = [
        ("DSN density", within(d.density, 0.31, 0.01), format!("{:.4}", d.density)),
        ("DSN diameter", d.diameter == 3, d.diameter.to_string()),
        ("CSN density", within(c.density, 0.28, 0.01), format!("{:.4}", c.density)),
        ("CSN diameter", c.diameter == 5, c.diameter.to_string()),
        ("DSN <k>", within(d.mean_k, 15.6, 0.5), format!("{:.2}", d.mean_k)),
        ("CSN <k>", within(c.mean_k, 14.3, 0.5), format!("{:.2}", c.mean_k)),
    ];
    summarize(&checks)
}

fn summarize(checks: &[(&str, bool, String)]) -> Outcome {
    let pass = checks.iter().all(|c| c.1);
    let detail = checks
        .iter()
        .map(|(name, ok, v)| format!("{name}={v}{}", if *ok { "" } else { " (out)" }))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn extreme(rows: &[PartitionSummary], max: bool) -> &PartitionSummary {
    let cmp = |a: &&PartitionSummary, b: &&PartitionSummary| a.mean_c.total_cmp(&b.mean_c);
    if max { rows.iter().max_by(cmp).unwrap() } else { rows.iter().min_by(cmp).unwrap() }
}

fn c4(ctx: &Ctx) -> Outcome {
    let dest = ctx.rows(&ctx.dsn, PartitionScheme::Destination);
    let comm = ctx.rows(&ctx.csn, PartitionScheme::Commodity);
    let china = dest.iter().find(|r| r.partition == "China").unwrap();
    let other_rm = comm.iter().find(|r| r.partition == "OtherRM").unwrap();
    let top = extreme(&dest, true);
    let bottom = extreme(&comm, false);
    let d = network_summary(&ctx.dsn).unwrap().mean_c;
    let c = network_summary(&ctx.csn).unwrap().mean_c;
    let checks = [
        ("max <C> destination", top.partition == "China", top.partition.clone()),
        ("China <C>", within(china.mean_c, 0.96, 0.05), format!("{:.3}", china.mean_c)),
        ("min <C> commodity", bottom.partition == "OtherRM", format!("{} {:.3}", bottom.partition, bottom.mean_c)),
        ("OtherRM <C>", within(other_rm.mean_c, 0.48, 0.05), format!("{:.3}", other_rm.mean_c)),
        ("DSN <C>", within(d, 0.76, 0.05), format!("{d:.3}")),
        ("CSN <C>", within(c, 0.72, 0.05), format!("{c:.3}")),
        ("DSN>CSN", d > c, (d > c).to_string()),
    ];
    summarize(&checks)
}

fn c5(ctx: &Ctx) -> Outcome {
    let rows = ctx.rows(&ctx.dsn, PartitionScheme::Destination);
    let b = |name: &str| rows.iter().find(|r| r.partition == name).unwrap().mean_b_raw;
    let order = ["China", "Europe", "Africa", "Other", "USA"];
    let values: Vec<f64> = order.iter().map(|p| b(p)).collect();
    let pass = values.windows(2).all(|w| w[0] > w[1]);
    let detail = order
        .iter()
        .zip(&values)
        .map(|(p, v)| format!("{p} {v:.2}"))
        .collect::<Vec<_>>()
        .join(" > ");
    outcome(pass, format!("raw <B>: {detail}"))
}

fn c6(ctx: &Ctx) -> Outcome {
    let raw = frequency_histogram(&ctx.ds, Axis::Destination, Aggregation::Raw, &ctx.dt, &ctx.ct);
    let cluster = frequency_histogram(&ctx.ds, Axis::Destination, Aggregation::Cluster, &ctx.dt, &ctx.ct);
    let comm = frequency_histogram(&ctx.ds, Axis::Commodity, Aggregation::Raw, &ctx.dt, &ctx.ct);
    let mut top5: Vec<&str> = raw.top(5);
    top5.sort_unstable();
    let want = ["CHI", "FRA", "IND", "SWI", "ZAF"];
    let counts = raw.bins.iter().take(7).map(|(l, n)| format!("{l}:{n}")).collect::<Vec<_>>().join(" ");
    let checks = [
        ("raw max", raw.max_label() == Some("CHI"), raw.max_label().unwrap_or("").to_string()),
        ("top-5", top5 == want, format!("{top5:?} [{counts}]")),
        ("cluster max", cluster.max_label() == Some("Europe"), cluster.max_label().unwrap_or("").to_string()),
        ("HS max", comm.max_label() == Some("27"), comm.max_label().unwrap_or("").to_string()),
    ];
    summarize(&checks)
}

fn tree_ok(g: &WeightedGraph) -> Result<(), TestCaseError> {
    let d = single_linkage(&distance_matrix(g));
    let merges: Vec<f64> = d.steps().iter().map(|s| s.distance).collect();
    prop_assert!(merges.windows(2).all(|w| w[0] <= w[1]));
    let t = SpanningTree::from_dendrogram(&d);
    prop_assert!((t.total_distance() - kruskal(g).0).abs() < 1e-9);
    Ok(())
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map(|_| cases).map_err(|e| e.to_string())
}

fn c7(ctx: &Ctx) -> Outcome {
    let bundled = tree_ok(&ctx.dsn).and(tree_ok(&ctx.csn)).is_ok();
    let random = run(1000, connected_graph_strategy(12), |g| tree_ok(&g));
    let pass = bundled && random.is_ok();
    outcome(pass, format!("bundled networks {}, random connected graphs {:?}", if bundled { "ok" } else { "mismatch" }, random))
}

fn c8(ctx: &Ctx) -> Outcome {
    let stats = |g: &WeightedGraph, scheme| {
        let p = partition_labels(&ctx.ds, scheme, &ctx.dt, &ctx.ct).unwrap();
        let t = SpanningTree::from_dendrogram(&single_linkage(&distance_matrix(g)));
        tree_stats(&t, &p)
    };
    let dsn = stats(&ctx.dsn, PartitionScheme::Destination);
    let csn = stats(&ctx.csn, PartitionScheme::Commodity);
    let ago = dsn.node("AGO").unwrap().degree;
    let max = dsn.nodes.iter().map(|n| n.degree).max().unwrap();
    let top3: Vec<&str> = csn.by_degree().into_iter().take(3).collect();
    let leaves: Vec<&str> = ["KEN", "NAM", "SWA"].into_iter().filter(|c| dsn.node(c).unwrap().leaf).collect();
    let deg = |code: &str| csn.node(code).unwrap().degree;
    let checks = [
        ("DSN AGO max degree", ago == max, format!("{ago} of max {max}")),
        ("CSN top-3", top3.contains(&"ZAF") && top3.contains(&"AGO"), format!("{top3:?}, ZAF degree {}", deg("ZAF"))),
        ("DSN leaves", leaves.len() >= 3, format!("{leaves:?}")),
    ];
    summarize(&checks)
}

fn c9(_: &Ctx) -> Outcome {
    let suites = [
        ("projection", run(500, dataset_strategy(15), |ds| {
            for axis in [Axis::Destination, Axis::Commodity] {
                let g = project(&build_bipartite(&ds, axis));
                for ((a, b), w) in brute_projection(&ds, axis) {
                    prop_assert_eq!(g.weight_between(&a, &b).unwrap(), w);
                }
            }
            Ok(())
        })),
        ("permutation", run(500, graph_strategy(1, 12).prop_flat_map(|g| {
            let n = g.len();
            (Just(g), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        }), |(g, perm)| {
            let n = g.len();
            let mut nodes = vec![String::new(); n];
            let mut w = vec![vec![0u8; n]; n];
            for i in 0..n {
                nodes[perm[i]] = g.nodes()[i].clone();
                for j in 0..n {
                    w[perm[i]][perm[j]] = g.weight(i, j);
                }
            }
            let h = WeightedGraph::from_matrix(nodes, &w).unwrap();
            let (a, b) = (node_metrics(&g), node_metrics(&h));
            for i in 0..n {
                let (x, y) = (&a[i], &b[perm[i]]);
                prop_assert_eq!(x.weighted_degree, y.weighted_degree);
                prop_assert_eq!(x.degree, y.degree);
                prop_assert!((x.betweenness_raw - y.betweenness_raw).abs() < 1e-9);
                prop_assert!((x.clustering - y.clustering).abs() < 1e-12);
            }
            Ok(())
        })),
        ("degree-density", run(500, graph_strategy(2, 14), |g| {
            let n = g.len();
            let mean = (0..n).map(|i| degree(&g, i).unwrap() as f64).sum::<f64>() / n as f64;
            prop_assert!((mean - density(&g).unwrap() * (n - 1) as f64).abs() < 1e-9);
            Ok(())
        })),
        ("betweenness", run(500, graph_strategy(1, 10), |g| {
            let fast = betweenness(&g);
            for (f, s) in fast.iter().zip(brute_betweenness(&g)) {
                prop_assert!((f.raw - s).abs() < 1e-9);
            }
            Ok(())
        })),
    ];
    let pass = suites.iter().all(|(_, r)| r.is_ok());
    let detail = suites
        .iter()
        .map(|(name, r)| match r {
            Ok(n) => format!("{name} {n} ok"),
            Err(e) => format!("{name} failed: {e}"),
        })
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn c10(_: &Ctx) -> Outcome {
    let corpus = format!("{}/../../data/africa_2014.csv", env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let run_all = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_tradenet"))
            .args(["all", &corpus, "-o"])
            .arg(&out)
            .output()
            .unwrap()
            .status;
        (status.success(), out)
    };
    let (ok_a, a) = run_all("a");
    let (ok_b, b) = run_all("b");
    if !(ok_a && ok_b) {
        return outcome(false, "`all` did not exit 0");
    }
    let csvs = |dir: &Path| {
        let mut v: Vec<String> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.ends_with(".csv"))
            .collect();
        v.sort();
        v
    };
    let names = csvs(&a);
    let differing: Vec<&String> = names
        .iter()
        .filter(|n| fs::read(a.join(n)).unwrap() != fs::read(b.join(n)).unwrap())
        .collect();
    let pass = names == csvs(&b) && differing.is_empty() && !names.is_empty();
    outcome(pass, format!("{} CSVs compared, {} differ", names.len(), differing.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ds = Dataset::bundled();
    let ctx = Ctx {
        dsn: project(&build_bipartite(&ds, Axis::Destination)),
        csn: project(&build_bipartite(&ds, Axis::Commodity)),
        ds,
        dt: DestinationTaxonomy::default(),
        ct: CommodityTaxonomy::default(),
    };
    let criteria: [(&str, &str, Check); 10] = [
        ("C1", "link weights", c1),
        ("C2", "partition sizes", c2),
        ("C3", "network summary", c3),
        ("C4", "clustering ordinals", c4),
        ("C5", "betweenness ordering", c5),
        ("C6", "histogram facts", c6),
        ("C7", "tree oracle", c7),
        ("C8", "tree structure", c8),
        ("C9", "property suites", c9),
        ("C10", "determinism", c10),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let o = check(&ctx);
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {id} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of 10 criteria passed in {:.2?}", 10 - failed, start.elapsed());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
