use std::collections::BTreeMap;

use serde::Serialize;

use super::{Axis, CommodityCluster, CommodityTaxonomy, Dataset, DestinationCluster, DestinationTaxonomy};

/// Label used for entries a taxonomy does not cover.
pub const UNMAPPED: &str = "Unmapped";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    /// One bin per destination code or HS chapter.
    Raw,
    /// One bin per taxonomy cluster.
    Cluster,
}

/// `(label, count)` bins, descending by count, ties by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub bins: Vec<(String, usize)>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.bins.iter().map(|(_, n)| n).sum()
    }

    pub fn count(&self, label: &str) -> usize {
        self.bins
            .iter()
            .find(|(l, _)| l == label)
            .map_or(0, |(_, n)| *n)
    }

    /// The first bin; ties already resolved by label.
    pub fn max_label(&self) -> Option<&str> {
        self.bins.first().map(|(l, _)| l.as_str())
    }

    pub fn top(&self, k: usize) -> Vec<&str> {
        self.bins.iter().take(k).map(|(l, _)| l.as_str()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,count\n");
        for (label, n) in &self.bins {
            out.push_str(&format!("{label},{n}\n"));
        }
        out
    }
}

/// Counts first and second entries of every record.
///
/// With [`Aggregation::Cluster`] every cluster of the taxonomy gets a bin,
/// including empty ones; uncovered entries land in [`UNMAPPED`].
pub fn frequency_histogram(
    ds: &Dataset,
    axis: Axis,
    aggregation: Aggregation,
    dt: &DestinationTaxonomy,
    ct: &CommodityTaxonomy,
) -> Histogram {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    if aggregation == Aggregation::Cluster {
        let labels: Vec<&str> = match axis {
            Axis::Destination => DestinationCluster::ALL.iter().map(|c| c.label()).collect(),
            Axis::Commodity => CommodityCluster::ALL.iter().map(|c| c.label()).collect(),
        };
        for l in labels {
            counts.insert(l.to_string(), 0);
        }
    }
    for r in ds.records() {
        for i in 0..2 {
            let label = match (axis, aggregation) {
                (Axis::Destination, Aggregation::Raw) => r.destinations[i].clone(),
                (Axis::Commodity, Aggregation::Raw) => r.commodities[i].to_string(),
                (Axis::Destination, Aggregation::Cluster) => dt
                    .classify(&r.destinations[i])
                    .map_or(UNMAPPED, |c| c.label())
                    .to_string(),
                (Axis::Commodity, Aggregation::Cluster) => ct
                    .classify(r.commodities[i])
                    .map_or(UNMAPPED, |c| c.label())
                    .to_string(),
            };
            *counts.entry(label).or_default() += 1;
        }
    }
    let mut bins: Vec<(String, usize)> = counts.into_iter().collect();
    // BTreeMap order already sorts labels; a stable sort keeps it for ties.
    bins.sort_by_key(|b| std::cmp::Reverse(b.1));
    Histogram { bins }
}
