//! Destination-share and commodity-share networks built from per-country
//! export profiles.
//!
//! Each country lists its two leading export destinations and its two leading
//! export commodities (HS chapters). Countries and destinations (or
//! commodities) form a bipartite graph; projecting it onto the countries gives
//! a weighted network where `L_ij` counts the shared entries, so `L_ij` is 0, 1
//! or 2. The crate computes node- and network-level coefficients on those
//! projections, averages them over partitions, and extracts minimal spanning
//! trees through single-linkage clustering of the distance `1 / L_ij`.
//!
//! ```
//! use tradenet::{bipartite, dataset::{Axis, Dataset}, metrics};
//!
//! let ds = Dataset::bundled();
//! let dsn = bipartite::project(&bipartite::build_bipartite(&ds, Axis::Destination));
//! assert_eq!(dsn.weight_between("AGO", "ZAF").unwrap(), 2);
//! assert_eq!(metrics::diameter(&dsn).unwrap(), 3);
//! ```
#![allow(clippy::needless_range_loop)]

pub mod bipartite;
pub mod cli;
pub mod dataset;
pub mod export;
pub mod metrics;
pub mod mst;

pub use bipartite::{BipartiteGraph, WeightedGraph};
pub use dataset::{Axis, CountryRecord, Dataset};
