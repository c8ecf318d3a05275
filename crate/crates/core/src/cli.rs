//! The `tradenet` command line.
//!
//! Exit codes: 0 on success, 1 when the corpus fails validation, 2 on usage
//! or I/O errors.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::bipartite::{build_bipartite, project, WeightedGraph};
use crate::dataset::{
    frequency_histogram, parse_dataset, partition_labels, validate, Aggregation, Axis,
    CommodityTaxonomy, Dataset, DatasetError, DestinationTaxonomy, Partition, PartitionScheme,
    TaxonomyError, Violation,
};
use crate::export::{self, Precision};
use crate::metrics::{self, BetweennessScale, MetricsError, NetworkSummary, PartitionSummary};
use crate::mst;

#[derive(Debug, Parser)]
#[command(name = "tradenet", version, about = "Destination- and commodity-share trade networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the corpus against the taxonomies.
    Validate(RunArgs),
    /// Frequency histograms of destinations or commodities.
    Histogram(RunArgs),
    /// Partition-averaged and whole-network coefficient tables.
    Tables(RunArgs),
    /// Single-linkage dendrogram and minimal spanning tree.
    Mst(RunArgs),
    /// Projection edge lists, node coefficients, distances and DOT graphs.
    Export(RunArgs),
    /// Everything above.
    All(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Corpus file (`name,code,org,dest1,dest2,prod1,prod2,export_value`).
    pub input: PathBuf,
    /// Network to build; both when omitted.
    #[arg(long)]
    pub axis: Option<Axis>,
    /// Partition used for coloring and tree statistics; defaults to the
    /// network's own axis.
    #[arg(long)]
    pub taxonomy: Option<PartitionScheme>,
    /// Output formats, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "csv,dot")]
    pub format: Vec<Format>,
    /// Output directory, created if absent.
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
    /// Float formatting in tables.
    #[arg(long, value_enum, default_value_t = Precision::Table)]
    pub precision: Precision,
    /// Betweenness column scale in tables.
    #[arg(long, value_enum, default_value_t = BetweennessScale::Raw)]
    pub betweenness: BetweennessScale,
    /// `label,cluster` file replacing the built-in destination taxonomy.
    #[arg(long)]
    pub destination_taxonomy: Option<PathBuf>,
    /// `hs_code,cluster` file replacing the built-in commodity taxonomy.
    #[arg(long)]
    pub commodity_taxonomy: Option<PathBuf>,
}

/// Resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub axis: Option<Axis>,
    pub taxonomy: Option<PartitionScheme>,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub precision: Precision,
    pub betweenness: BetweennessScale,
    pub destinations: DestinationTaxonomy,
    pub commodities: CommodityTaxonomy,
}

impl RunConfig {
    /// Defaults for `input`: both axes, CSV and DOT, two-decimal tables.
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            axis: None,
            taxonomy: None,
            out: out.into(),
            formats: vec![Format::Csv, Format::Dot],
            precision: Precision::Table,
            betweenness: BetweennessScale::Raw,
            destinations: DestinationTaxonomy::default(),
            commodities: CommodityTaxonomy::default(),
        }
    }

    pub fn from_args(args: RunArgs) -> Result<Self, CliError> {
        let destinations = match &args.destination_taxonomy {
            Some(p) => DestinationTaxonomy::from_csv(&read(p)?)
                .map_err(|e| CliError::Taxonomy(p.clone(), e))?,
            None => DestinationTaxonomy::default(),
        };
        let commodities = match &args.commodity_taxonomy {
            Some(p) => CommodityTaxonomy::from_csv(&read(p)?)
                .map_err(|e| CliError::Taxonomy(p.clone(), e))?,
            None => CommodityTaxonomy::default(),
        };
        Ok(RunConfig {
            input: args.input,
            axis: args.axis,
            taxonomy: args.taxonomy,
            out: args.out,
            formats: args.format,
            precision: args.precision,
            betweenness: args.betweenness,
            destinations,
            commodities,
        })
    }

    fn axes(&self) -> Vec<Axis> {
        match self.axis {
            Some(a) => vec![a],
            None => vec![Axis::Destination, Axis::Commodity],
        }
    }

    fn scheme_for(&self, axis: Axis) -> PartitionScheme {
        self.taxonomy.unwrap_or(match axis {
            Axis::Destination => PartitionScheme::Destination,
            Axis::Commodity => PartitionScheme::Commodity,
        })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {0}", .1.display())]
    Dataset(DatasetError, PathBuf),
    #[error("{} validation violation(s)", .0.len())]
    Violations(Vec<Violation>),
    #[error("{}: {1}", .0.display())]
    Taxonomy(PathBuf, TaxonomyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Dataset(..) | CliError::Violations(_) | CliError::Metrics(_) => 1,
            CliError::Io { .. } | CliError::Taxonomy(..) => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Paths written by a command, in write order.
#[derive(Debug, Default)]
pub struct Written {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

struct Sink<'a> {
    dir: &'a Path,
    written: Written,
}

impl<'a> Sink<'a> {
    fn open(dir: &'a Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Sink {
            dir,
            written: Written::default(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.written.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
        text.push('\n');
        self.write(name, &text)
    }
}

/// Reads, parses and validates the corpus.
pub fn load(config: &RunConfig) -> Result<Dataset, CliError> {
    let text = read(&config.input)?;
    let label = config.input.display().to_string();
    let ds = parse_dataset(&text, &label).map_err(|e| CliError::Dataset(e, config.input.clone()))?;
    let violations = validate(&ds, &config.destinations, &config.commodities);
    if violations.is_empty() {
        Ok(ds)
    } else {
        Err(CliError::Violations(violations))
    }
}

fn network(ds: &Dataset, axis: Axis) -> WeightedGraph {
    project(&build_bipartite(ds, axis))
}

fn partition(ds: &Dataset, config: &RunConfig, scheme: PartitionScheme) -> Partition {
    partition_labels(ds, scheme, &config.destinations, &config.commodities)
        .expect("validated corpus is covered by its taxonomies")
}

/// Returns the report lines; a parse error or violation becomes one line each.
pub fn cmd_validate(config: &RunConfig) -> Result<Vec<String>, CliError> {
    load(config).map(|ds| vec![format!("{}: {} records, no violations", ds.source_label(), ds.len())])
}

pub fn cmd_histogram(config: &RunConfig) -> Result<Written, CliError> {
    let ds = load(config)?;
    let mut sink = Sink::open(&config.out)?;
    for axis in config.axes() {
        for (agg, tag) in [(Aggregation::Raw, "raw"), (Aggregation::Cluster, "cluster")] {
            let h = frequency_histogram(&ds, axis, agg, &config.destinations, &config.commodities);
            if config.wants(Format::Csv) {
                sink.write(&format!("histogram_{axis}_{tag}.csv"), &h.to_csv())?;
            }
            if config.wants(Format::Json) {
                sink.json(&format!("histogram_{axis}_{tag}.json"), &h)?;
            }
        }
    }
    Ok(sink.written)
}

#[derive(Serialize)]
struct TablesJson<'a> {
    partitions: Vec<(&'a str, &'a [PartitionSummary])>,
    networks: &'a [(String, NetworkSummary)],
}

/// The four partition tables and the network comparison table.
pub fn cmd_tables(config: &RunConfig) -> Result<Written, CliError> {
    let ds = load(config)?;
    let mut sink = Sink::open(&config.out)?;
    let dsn = network(&ds, Axis::Destination);
    let csn = network(&ds, Axis::Commodity);

    let suite = [
        ("table2_dsn_destination", &dsn, PartitionScheme::Destination),
        ("table3_dsn_organization", &dsn, PartitionScheme::Organization),
        ("table4_csn_commodity", &csn, PartitionScheme::Commodity),
        ("table5_csn_organization", &csn, PartitionScheme::Organization),
    ];
    let mut tables = Vec::new();
    for (name, g, scheme) in suite {
        let rows = metrics::partition_summaries(g, &partition(&ds, config, scheme))?;
        if config.wants(Format::Csv) {
            sink.write(
                &format!("{name}.csv"),
                &export::partition_table_csv(&rows, config.betweenness, config.precision),
            )?;
        }
        tables.push((name, rows));
    }

    let networks = vec![
        ("DSN".to_string(), metrics::network_summary(&dsn)?),
        ("CSN".to_string(), metrics::network_summary(&csn)?),
    ];
    if config.wants(Format::Csv) {
        sink.write(
            "table6_networks.csv",
            &export::network_table_csv(&networks, config.betweenness, config.precision),
        )?;
    }
    if config.wants(Format::Json) {
        let json = TablesJson {
            partitions: tables.iter().map(|(n, r)| (*n, r.as_slice())).collect(),
            networks: &networks,
        };
        sink.json("tables.json", &json)?;
    }
    Ok(sink.written)
}

/// Dendrogram, tree edges, tree statistics and DOT per selected axis.
pub fn cmd_mst(config: &RunConfig) -> Result<Written, CliError> {
    let ds = load(config)?;
    let mut sink = Sink::open(&config.out)?;
    for axis in config.axes() {
        let g = network(&ds, axis);
        let name = axis.network_name();
        let dendrogram = mst::single_linkage(&mst::distance_matrix(&g));
        let tree = mst::SpanningTree::from_dendrogram(&dendrogram);
        let labels = partition(&ds, config, config.scheme_for(axis));
        let report = mst::tree_stats(&tree, &labels);
        if let Some(w) = tree.warning() {
            sink.written.warnings.push(format!("{name}: {w}"));
        }
        if config.wants(Format::Csv) {
            sink.write(&format!("mst_{name}_dendrogram.csv"), &dendrogram.to_csv())?;
            sink.write(&format!("mst_{name}_edges.csv"), &tree.to_csv())?;
            sink.write(&format!("mst_{name}_nodes.csv"), &report.to_csv())?;
        }
        if config.wants(Format::Json) {
            sink.json(&format!("mst_{name}.json"), &report)?;
        }
        if config.wants(Format::Dot) {
            sink.write(
                &format!("mst_{name}.dot"),
                &export::tree_to_dot(&tree, &format!("mst_{name}"), &ds, &labels),
            )?;
        }
    }
    Ok(sink.written)
}

/// Projection edge lists, node coefficients, distance matrices and DOT.
pub fn cmd_export(config: &RunConfig) -> Result<Written, CliError> {
    let ds = load(config)?;
    let mut sink = Sink::open(&config.out)?;
    for axis in config.axes() {
        let g = network(&ds, axis);
        let name = axis.network_name();
        let labels = partition(&ds, config, config.scheme_for(axis));
        let nodes = metrics::node_metrics(&g);
        if config.wants(Format::Csv) {
            sink.write(&format!("{name}_edges.csv"), &export::edge_list_csv(&g))?;
            sink.write(
                &format!("{name}_nodes.csv"),
                &export::node_metrics_csv(&nodes, &labels, config.precision),
            )?;
            sink.write(
                &format!("{name}_distances.csv"),
                &mst::distance_matrix(&g).to_csv(),
            )?;
        }
        if config.wants(Format::Json) {
            sink.json(&format!("{name}_nodes.json"), &nodes)?;
        }
        if config.wants(Format::Dot) {
            sink.write(&format!("{name}.dot"), &export::graph_to_dot(&g, name, &ds, &labels))?;
        }
    }
    Ok(sink.written)
}

/// Histograms, tables, trees and exports in one directory.
pub fn cmd_all(config: &RunConfig) -> Result<Written, CliError> {
    let mut all = Written::default();
    for cmd in [cmd_histogram, cmd_tables, cmd_mst, cmd_export] {
        let w = cmd(config)?;
        all.files.extend(w.files);
        all.warnings.extend(w.warnings);
    }
    Ok(all)
}

fn report(result: Result<Written, CliError>) -> ExitCode {
    match result {
        Ok(w) => {
            for f in &w.files {
                println!("wrote {}", f.display());
            }
            for warning in &w.warnings {
                eprintln!("warning: {warning}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    match &e {
        CliError::Violations(vs) => {
            for v in vs {
                println!("{v}");
            }
        }
        CliError::Dataset(..) => println!("{e}"),
        _ => {}
    }
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}

pub fn run(cli: Cli) -> ExitCode {
    let args = match &cli.command {
        Command::Validate(a)
        | Command::Histogram(a)
        | Command::Tables(a)
        | Command::Mst(a)
        | Command::Export(a)
        | Command::All(a) => a.clone(),
    };
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match cli.command {
        Command::Validate(_) => match cmd_validate(&config) {
            Ok(lines) => {
                lines.iter().for_each(|l| println!("{l}"));
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Histogram(_) => report(cmd_histogram(&config)),
        Command::Tables(_) => report(cmd_tables(&config)),
        Command::Mst(_) => report(cmd_mst(&config)),
        Command::Export(_) => report(cmd_export(&config)),
        Command::All(_) => report(cmd_all(&config)),
    }
}
