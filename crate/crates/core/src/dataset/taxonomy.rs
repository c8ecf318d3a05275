use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{Dataset, HsCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("unmapped destination {0}")]
    UnmappedDestination(String),
    #[error("unmapped commodity {0}")]
    UnmappedCommodity(HsCode),
    #[error("taxonomy line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Destination clusters, in table row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DestinationCluster {
    AfricanCountries,
    Usa,
    Europe,
    China,
    Other,
}

impl DestinationCluster {
    pub const ALL: [DestinationCluster; 5] = [
        DestinationCluster::AfricanCountries,
        DestinationCluster::Usa,
        DestinationCluster::Europe,
        DestinationCluster::China,
        DestinationCluster::Other,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DestinationCluster::AfricanCountries => "Africa",
            DestinationCluster::Usa => "USA",
            DestinationCluster::Europe => "Europe",
            DestinationCluster::China => "China",
            DestinationCluster::Other => "Other",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "Africa" | "AfricanCountries" => Some(Self::AfricanCountries),
            "USA" => Some(Self::Usa),
            "Europe" => Some(Self::Europe),
            "China" => Some(Self::China),
            "Other" => Some(Self::Other),
            _ => None,
        }
    }
}

impl fmt::Display for DestinationCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Commodity clusters, in table row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CommodityCluster {
    Petroleum,
    RawMaterials,
    Diamonds,
    Manufactured,
    OtherRawMaterials,
}

impl CommodityCluster {
    pub const ALL: [CommodityCluster; 5] = [
        CommodityCluster::Petroleum,
        CommodityCluster::RawMaterials,
        CommodityCluster::Diamonds,
        CommodityCluster::Manufactured,
        CommodityCluster::OtherRawMaterials,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CommodityCluster::Petroleum => "Petroleum",
            CommodityCluster::RawMaterials => "RawMaterials",
            CommodityCluster::Diamonds => "Diamonds",
            CommodityCluster::Manufactured => "Manufactured",
            CommodityCluster::OtherRawMaterials => "OtherRM",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .or(match s {
                "OtherRawMaterials" => Some(Self::OtherRawMaterials),
                _ => None,
            })
    }
}

impl fmt::Display for CommodityCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

const AFRICAN_DESTINATIONS: [&str; 6] = ["ZMB", "TZA", "BWA", "ZAF", "RWA", "BFA"];
const EUROPEAN_DESTINATIONS: [&str; 10] = [
    "FRA", "SWI", "NET", "ITA", "POL", "UK", "ESP", "POR", "BEL", "GER",
];
const OTHER_DESTINATIONS: [&str; 10] = [
    "MAS", "IND", "EMI", "TUR", "BRA", "KOR", "JAP", "IDN", "LEB", "PAK",
];

const RAW_MATERIALS: [u8; 12] = [3, 6, 8, 9, 10, 16, 17, 18, 24, 33, 44, 52];
const MANUFACTURED: [u8; 12] = [28, 29, 39, 61, 62, 72, 74, 75, 76, 85, 87, 89];

/// Destination label to cluster. The default covers the 28 destinations of
/// the 2014 corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestinationTaxonomy {
    map: BTreeMap<String, DestinationCluster>,
}

impl Default for DestinationTaxonomy {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for d in AFRICAN_DESTINATIONS {
            map.insert(d.to_string(), DestinationCluster::AfricanCountries);
        }
        map.insert("USA".to_string(), DestinationCluster::Usa);
        map.insert("CHI".to_string(), DestinationCluster::China);
        for d in EUROPEAN_DESTINATIONS {
            map.insert(d.to_string(), DestinationCluster::Europe);
        }
        for d in OTHER_DESTINATIONS {
            map.insert(d.to_string(), DestinationCluster::Other);
        }
        DestinationTaxonomy { map }
    }
}

impl DestinationTaxonomy {
    pub fn classify(&self, code: &str) -> Result<DestinationCluster, TaxonomyError> {
        self.map
            .get(code)
            .copied()
            .ok_or_else(|| TaxonomyError::UnmappedDestination(code.to_string()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, DestinationCluster)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Reads `label,cluster` lines (header optional, `#` comments allowed).
    pub fn from_csv(text: &str) -> Result<Self, TaxonomyError> {
        let map = read_pairs(text, |label, cluster| {
            DestinationCluster::parse(cluster)
                .map(|c| (label.to_string(), c))
                .ok_or_else(|| format!("unknown destination cluster `{cluster}`"))
        })?;
        Ok(DestinationTaxonomy { map })
    }
}

/// HS chapter to cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommodityTaxonomy {
    map: BTreeMap<HsCode, CommodityCluster>,
}

impl Default for CommodityTaxonomy {
    fn default() -> Self {
        let hs = |c: u8| HsCode::new(c).expect("static chapter");
        let mut map = BTreeMap::new();
        map.insert(hs(27), CommodityCluster::Petroleum);
        for c in RAW_MATERIALS {
            map.insert(hs(c), CommodityCluster::RawMaterials);
        }
        map.insert(hs(71), CommodityCluster::Diamonds);
        for c in MANUFACTURED {
            map.insert(hs(c), CommodityCluster::Manufactured);
        }
        map.insert(hs(26), CommodityCluster::OtherRawMaterials);
        CommodityTaxonomy { map }
    }
}

impl CommodityTaxonomy {
    pub fn classify(&self, code: HsCode) -> Result<CommodityCluster, TaxonomyError> {
        self.map
            .get(&code)
            .copied()
            .ok_or(TaxonomyError::UnmappedCommodity(code))
    }

    /// Classifies a label as rendered by [`HsCode`]'s `Display` ("03", "27").
    pub fn classify_label(&self, label: &str) -> Option<CommodityCluster> {
        self.classify(label.parse().ok()?).ok()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (HsCode, CommodityCluster)> + '_ {
        self.map.iter().map(|(k, v)| (*k, *v))
    }

    /// Reads `hs_code,cluster` lines (header optional, `#` comments allowed).
    pub fn from_csv(text: &str) -> Result<Self, TaxonomyError> {
        let map = read_pairs(text, |label, cluster| {
            let code = label.parse::<HsCode>()?;
            CommodityCluster::parse(cluster)
                .map(|c| (code, c))
                .ok_or_else(|| format!("unknown commodity cluster `{cluster}`"))
        })?;
        Ok(CommodityTaxonomy { map })
    }
}

fn read_pairs<K: Ord, V>(
    text: &str,
    mut entry: impl FnMut(&str, &str) -> Result<(K, V), String>,
) -> Result<BTreeMap<K, V>, TaxonomyError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && (line.starts_with("label") || line.starts_with("hs_code"))) {
            continue;
        }
        let malformed = |reason: String| TaxonomyError::Malformed {
            line: i + 1,
            reason,
        };
        let (label, cluster) = line
            .split_once(',')
            .ok_or_else(|| malformed("expected `label,cluster`".into()))?;
        let (k, v) = entry(label.trim(), cluster.trim()).map_err(malformed)?;
        if map.insert(k, v).is_some() {
            return Err(malformed(format!("`{}` mapped twice", label.trim())));
        }
    }
    Ok(map)
}

/// How countries are grouped for averaged coefficients and node coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PartitionScheme {
    /// Cluster of the country's first destination.
    Destination,
    /// Cluster of the country's first commodity.
    Commodity,
    /// Regional organization.
    Organization,
}

impl fmt::Display for PartitionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionScheme::Destination => "destination",
            PartitionScheme::Commodity => "commodity",
            PartitionScheme::Organization => "organization",
        })
    }
}

/// Node code to partition label, plus the row order of the labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    order: Vec<String>,
    labels: BTreeMap<String, String>,
}

impl Partition {
    /// Labels not listed in `order` are appended in sorted order.
    pub fn new(order: Vec<String>, labels: BTreeMap<String, String>) -> Self {
        let mut order = order;
        let mut extra: Vec<&String> = labels.values().filter(|l| !order.contains(l)).collect();
        extra.sort();
        extra.dedup();
        let extra: Vec<String> = extra.into_iter().cloned().collect();
        order.extend(extra);
        Partition { order, labels }
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn label_of(&self, code: &str) -> Option<&str> {
        self.labels.get(code).map(String::as_str)
    }

    /// Position of a label in the row order.
    pub fn rank(&self, label: &str) -> Option<usize> {
        self.order.iter().position(|l| l == label)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Assigns each country the partition of its first entry (or its
/// organization).
pub fn partition_labels(
    ds: &Dataset,
    scheme: PartitionScheme,
    dt: &DestinationTaxonomy,
    ct: &CommodityTaxonomy,
) -> Result<Partition, TaxonomyError> {
    let mut labels = BTreeMap::new();
    for r in ds.records() {
        let label = match scheme {
            PartitionScheme::Destination => dt.classify(&r.destinations[0])?.label(),
            PartitionScheme::Commodity => ct.classify(r.commodities[0])?.label(),
            PartitionScheme::Organization => r.org.abbreviation(),
        };
        labels.insert(r.code.clone(), label.to_string());
    }
    let order = match scheme {
        PartitionScheme::Destination => DestinationCluster::ALL.map(|c| c.label()).to_vec(),
        PartitionScheme::Commodity => CommodityCluster::ALL.map(|c| c.label()).to_vec(),
        PartitionScheme::Organization => super::Organization::ALL.map(|o| o.abbreviation()).to_vec(),
    };
    Ok(Partition::new(
        order.into_iter().map(String::from).collect(),
        labels,
    ))
}
