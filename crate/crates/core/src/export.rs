//! CSV tables and DOT graph serializers.

use std::fmt::Write as _;

use crate::bipartite::WeightedGraph;
use crate::dataset::{Dataset, Partition};
use crate::metrics::{BetweennessScale, NetworkSummary, NodeMetrics, PartitionSummary};
use crate::mst::SpanningTree;

/// Largest node width in DOT output, in inches.
const MAX_WIDTH: f64 = 2.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Precision {
    /// Two decimals, as printed in the tables.
    #[default]
    Table,
    /// Shortest representation that round-trips.
    Full,
}

impl Precision {
    pub fn format(self, x: f64) -> String {
        match self {
            Precision::Table => format!("{x:.2}"),
            Precision::Full => x.to_string(),
        }
    }
}

/// `src,dst,weight` for every linked pair, in node order.
pub fn edge_list_csv(g: &WeightedGraph) -> String {
    let mut out = String::from("src,dst,weight\n");
    for (i, j, w) in g.edges() {
        let _ = writeln!(out, "{},{},{}", g.nodes()[i], g.nodes()[j], w);
    }
    out
}

/// `partition,size,mean_k,mean_B,mean_C`.
pub fn partition_table_csv(
    rows: &[PartitionSummary],
    scale: BetweennessScale,
    precision: Precision,
) -> String {
    let mut out = String::from("partition,size,mean_k,mean_B,mean_C\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.partition,
            r.size,
            precision.format(r.mean_k),
            precision.format(r.mean_b(scale)),
            precision.format(r.mean_c)
        );
    }
    out
}

/// `graph,size,mean_k,mean_B,mean_C,density,diameter`.
pub fn network_table_csv(
    rows: &[(String, NetworkSummary)],
    scale: BetweennessScale,
    precision: Precision,
) -> String {
    let mut out = String::from("graph,size,mean_k,mean_B,mean_C,density,diameter\n");
    for (name, s) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            name,
            s.size,
            precision.format(s.mean_k),
            precision.format(s.mean_b(scale)),
            precision.format(s.mean_c),
            precision.format(s.density),
            s.diameter
        );
    }
    out
}

pub fn node_metrics_csv(rows: &[NodeMetrics], partition: &Partition, precision: Precision) -> String {
    let mut out = String::from(
        "code,partition,weighted_degree,degree,betweenness_raw,betweenness_pct,clustering\n",
    );
    for m in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            m.code,
            partition.label_of(&m.code).unwrap_or(""),
            m.weighted_degree,
            m.degree,
            precision.format(m.betweenness_raw),
            precision.format(m.betweenness_pct),
            precision.format(m.clustering)
        );
    }
    out
}

/// Fill color for a partition label, following the figure legends.
pub fn color_for(label: &str) -> &'static str {
    match label {
        "China" | "COMESA" | "Manufactured" => "red",
        "Europe" | "CEEAC" | "Diamonds" => "yellow",
        "USA" | "UMA" | "RawMaterials" => "green",
        "Africa" | "SADC" | "Petroleum" => "blue",
        "Other" | "CEDEAO" | "OtherRM" => "purple",
        _ => "gray",
    }
}

/// Node widths proportional to export value; unit width when a value is
/// missing or no country has one.
fn node_widths(codes: &[String], ds: &Dataset) -> Vec<f64> {
    let values: Vec<Option<f64>> = codes
        .iter()
        .map(|c| ds.get(c).and_then(|r| r.export_value))
        .collect();
    let max = values.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    values
        .into_iter()
        .map(|v| match v {
            Some(v) if max > 0.0 => MAX_WIDTH * v / max,
            _ => 1.0,
        })
        .collect()
}

fn write_nodes(out: &mut String, codes: &[String], degrees: &[usize], ds: &Dataset, partition: &Partition) {
    out.push_str("  node [shape=circle, style=filled, fixedsize=true];\n");
    let widths = node_widths(codes, ds);
    for (i, code) in codes.iter().enumerate() {
        let group = partition.label_of(code).unwrap_or("");
        let _ = writeln!(
            out,
            "  \"{code}\" [width={:.4}, colorgroup=\"{group}\", fillcolor=\"{}\", degree={}];",
            widths[i],
            color_for(group),
            degrees[i]
        );
    }
}

/// Undirected DOT of a projection; `degree` is the weighted degree.
pub fn graph_to_dot(g: &WeightedGraph, name: &str, ds: &Dataset, partition: &Partition) -> String {
    let mut out = format!("graph {name} {{\n");
    let degrees: Vec<usize> = (0..g.len())
        .map(|i| (0..g.len()).map(|j| usize::from(g.weight(i, j))).sum())
        .collect();
    write_nodes(&mut out, g.nodes(), &degrees, ds, partition);
    for (i, j, w) in g.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [weight={w}, penwidth={w}];",
            g.nodes()[i],
            g.nodes()[j]
        );
    }
    out.push_str("}\n");
    out
}

/// Undirected DOT of a spanning tree; `degree` is the tree degree.
pub fn tree_to_dot(t: &SpanningTree, name: &str, ds: &Dataset, partition: &Partition) -> String {
    let mut out = format!("graph {name} {{\n");
    write_nodes(&mut out, t.labels(), &t.degrees(), ds, partition);
    for e in t.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [distance={}];",
            t.labels()[e.a],
            t.labels()[e.b],
            e.distance
        );
    }
    out.push_str("}\n");
    out
}
