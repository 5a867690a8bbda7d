//! Modularity lower bounds for sparse graphs via recursive Cheeger cuts.
//!
//! The pipeline repeatedly removes degree-weighted sweep cuts from every
//! component that still carries at least an `ε/2` share of the total degree,
//! then scores the resulting components as a partition. The score is a
//! certified lower bound on the graph's modularity; for minor-free graphs with
//! sublinear maximum degree it tends to 1.
//!
//! ```
//! use modsep::generators::grid;
//! use modsep::modularity::modularity_lower_bound;
//! use modsep::partitioner::SeparatorConfig;
//!
//! let g = grid(12);
//! let cfg = SeparatorConfig::new(0.2).unwrap();
//! let report = modularity_lower_bound(&g, &cfg).unwrap();
//! assert!(report.score > 0.5);
//! ```

pub mod cheeger;
pub mod corpus;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod io;
pub mod modularity;
pub mod partitioner;
pub mod spectral;
pub mod suites;

pub use error::{CutError, GraphError, SpectralError};
pub use graph::{vertex_weights, Graph, InducedSubgraph};
