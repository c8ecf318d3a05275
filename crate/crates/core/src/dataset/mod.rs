//! Country export profiles: parsing, validation and classification.
//!
//! The corpus is a comma-separated file with the header
//! `name,code,org,dest1,dest2,prod1,prod2,export_value`. Each row holds a
//! country's two leading export destinations and two leading HS chapters.

mod histogram;
mod taxonomy;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use histogram::{frequency_histogram, Aggregation, Histogram};
pub use taxonomy::{
    partition_labels, CommodityCluster, CommodityTaxonomy, DestinationCluster,
    DestinationTaxonomy, Partition, PartitionScheme, TaxonomyError,
};

/// The bundled 2014 corpus (49 countries).
pub const BUNDLED_CORPUS: &str = include_str!("../../../../data/africa_2014.csv");

const HEADER: [&str; 8] = [
    "name",
    "code",
    "org",
    "dest1",
    "dest2",
    "prod1",
    "prod2",
    "export_value",
];

/// Which half of a country's profile a network is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Destination,
    Commodity,
}

impl Axis {
    /// Short network name: `dsn` or `csn`.
    pub fn network_name(self) -> &'static str {
        match self {
            Axis::Destination => "dsn",
            Axis::Commodity => "csn",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Destination => "destination",
            Axis::Commodity => "commodity",
        })
    }
}

/// Regional organization, numbered as in the corpus `org` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Organization {
    Sadc = 1,
    Uma = 2,
    Ceeac = 3,
    Comesa = 4,
    Cedeao = 5,
}

impl Organization {
    pub const ALL: [Organization; 5] = [
        Organization::Sadc,
        Organization::Uma,
        Organization::Ceeac,
        Organization::Comesa,
        Organization::Cedeao,
    ];

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get(usize::from(id).checked_sub(1)?).copied()
    }

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            Organization::Sadc => "SADC",
            Organization::Uma => "UMA",
            Organization::Ceeac => "CEEAC",
            Organization::Comesa => "COMESA",
            Organization::Cedeao => "CEDEAO",
        }
    }
}

/// A two-digit Harmonized System chapter, 1..=99.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HsCode(u8);

impl HsCode {
    pub fn new(chapter: u8) -> Option<Self> {
        (1..=99).contains(&chapter).then_some(HsCode(chapter))
    }

    pub fn chapter(self) -> u8 {
        self.0
    }
}

impl fmt::Display for HsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}", self.0)
    }
}

impl FromStr for HsCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .parse::<u8>()
            .ok()
            .and_then(HsCode::new)
            .ok_or_else(|| format!("`{s}` is not an HS chapter in 1..=99"))
    }
}

/// One country's export profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryRecord {
    pub code: String,
    pub name: String,
    pub org: Organization,
    pub destinations: [String; 2],
    pub commodities: [HsCode; 2],
    /// Export value in USD, used only to size nodes in graph exports.
    pub export_value: Option<f64>,
}

impl CountryRecord {
    /// The first and second entries on `axis`, as labels.
    pub fn entries(&self, axis: Axis) -> [String; 2] {
        match axis {
            Axis::Destination => self.destinations.clone(),
            Axis::Commodity => self.commodities.map(|c| c.to_string()),
        }
    }

    fn check(&self) -> Result<(), RowRule> {
        if !is_country_code(&self.code) {
            return Err(RowRule::Code(self.code.clone()));
        }
        for dest in &self.destinations {
            if dest.is_empty() || dest.chars().any(char::is_whitespace) {
                return Err(RowRule::Destination(dest.clone()));
            }
        }
        if self.destinations[0] == self.destinations[1] {
            return Err(RowRule::SameDestination(self.destinations[0].clone()));
        }
        if self.commodities[0] == self.commodities[1] {
            return Err(RowRule::SameCommodity(self.commodities[0]));
        }
        if let Some(v) = self.export_value {
            if !(v.is_finite() && v >= 0.0) {
                return Err(RowRule::ExportValue(v.to_string()));
            }
        }
        Ok(())
    }
}

fn is_country_code(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_uppercase())
}

/// The rule a corpus row broke.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RowRule {
    #[error("expected 8 columns, found {0}")]
    Arity(usize),
    #[error("country code `{0}` is not three uppercase letters")]
    Code(String),
    #[error("duplicate code {0}")]
    DuplicateCode(String),
    #[error("organization `{0}` is not an integer in 1..=5")]
    Organization(String),
    #[error("invalid HS code: {0}")]
    HsCode(String),
    #[error("invalid destination label `{0}`")]
    Destination(String),
    #[error("first and second destination are both {0}")]
    SameDestination(String),
    #[error("first and second commodity are both {0}")]
    SameCommodity(HsCode),
    #[error("export value `{0}` is not a nonnegative number")]
    ExportValue(String),
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("header must be `{}`", HEADER.join(","))]
    Header,
    #[error("row {row} (line {line}): {rule}")]
    Row { row: usize, line: u64, rule: RowRule },
    #[error("empty dataset")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// An ordered, non-empty set of country records with unique codes.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<CountryRecord>,
    source_label: String,
}

impl Dataset {
    /// Checks every record invariant and code uniqueness.
    pub fn new(
        records: Vec<CountryRecord>,
        source_label: impl Into<String>,
    ) -> Result<Self, DatasetError> {
        if records.is_empty() {
            return Err(DatasetError::Empty);
        }
        let mut seen = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            let fail = |rule| DatasetError::Row {
                row: i + 1,
                line: i as u64 + 2,
                rule,
            };
            r.check().map_err(fail)?;
            if !seen.insert(r.code.as_str()) {
                return Err(fail(RowRule::DuplicateCode(r.code.clone())));
            }
        }
        Ok(Dataset {
            records,
            source_label: source_label.into(),
        })
    }

    /// The compiled-in corpus.
    pub fn bundled() -> Self {
        parse_dataset(BUNDLED_CORPUS, "data/africa_2014.csv").expect("bundled corpus is valid")
    }

    pub fn records(&self) -> &[CountryRecord] {
        &self.records
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn codes(&self) -> Vec<String> {
        self.records.iter().map(|r| r.code.clone()).collect()
    }

    pub fn get(&self, code: &str) -> Option<&CountryRecord> {
        self.records.iter().find(|r| r.code == code)
    }

    /// Writes the dataset back in corpus format.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(HEADER).expect("in-memory write");
        for r in &self.records {
            let org = r.org.id().to_string();
            let value = r.export_value.map(|v| v.to_string()).unwrap_or_default();
            let [p1, p2] = r.commodities.map(|c| c.chapter().to_string());
            w.write_record([
                r.name.as_str(),
                &r.code,
                &org,
                &r.destinations[0],
                &r.destinations[1],
                &p1,
                &p2,
                &value,
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Parses corpus text. Rows keep file order.
pub fn parse_dataset(text: &str, source_label: &str) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers()?;
    if header.len() != HEADER.len() || header.iter().zip(HEADER).any(|(a, b)| a != b) {
        return Err(DatasetError::Header);
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(i as u64 + 2, |p| p.line());
        let fail = |rule| DatasetError::Row {
            row: i + 1,
            line,
            rule,
        };
        let record = parse_row(&row).map_err(fail)?;
        record.check().map_err(fail)?;
        if !seen.insert(record.code.clone()) {
            return Err(fail(RowRule::DuplicateCode(record.code)));
        }
        records.push(record);
    }
    Dataset::new(records, source_label)
}

fn parse_row(row: &csv::StringRecord) -> Result<CountryRecord, RowRule> {
    if row.len() != HEADER.len() {
        return Err(RowRule::Arity(row.len()));
    }
    let org = row[2]
        .parse::<u8>()
        .ok()
        .and_then(Organization::from_id)
        .ok_or_else(|| RowRule::Organization(row[2].to_string()))?;
    let hs = |s: &str| s.parse::<HsCode>().map_err(RowRule::HsCode);
    let export_value = match &row[7] {
        "" => None,
        s => Some(
            s.parse::<f64>()
                .map_err(|_| RowRule::ExportValue(s.to_string()))?,
        ),
    };
    Ok(CountryRecord {
        name: row[0].to_string(),
        code: row[1].to_string(),
        org,
        destinations: [row[3].to_string(), row[4].to_string()],
        commodities: [hs(&row[5])?, hs(&row[6])?],
        export_value,
    })
}

/// A taxonomy gap found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    UnmappedDestination(String),
    UnmappedCommodity(HsCode),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::UnmappedDestination(d) => {
                write!(f, "{}: unmapped destination {d}", self.code)
            }
            ViolationKind::UnmappedCommodity(c) => {
                write!(f, "{}: unmapped commodity {c}", self.code)
            }
        }
    }
}

/// Lists every destination or commodity the taxonomies do not cover.
///
/// Record-level invariants (unique codes, distinct entries, organization
/// range) are enforced when a [`Dataset`] is built, so only coverage can fail
/// here.
pub fn validate(
    ds: &Dataset,
    dt: &DestinationTaxonomy,
    ct: &CommodityTaxonomy,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in ds.records() {
        for d in &r.destinations {
            if dt.classify(d).is_err() {
                out.push(Violation {
                    code: r.code.clone(),
                    kind: ViolationKind::UnmappedDestination(d.clone()),
                });
            }
        }
        for &c in &r.commodities {
            if ct.classify(c).is_err() {
                out.push(Violation {
                    code: r.code.clone(),
                    kind: ViolationKind::UnmappedCommodity(c),
                });
            }
        }
    }
    out
}
