//! Constructive machinery for rational Turán exponents.
//!
//! The crate builds balanced rooted trees `T_{a,b}`, enumerates their power
//! families `T^p`, samples the random algebraic bipartite graphs whose
//! pruned versions are `T^p`-free, and provides brute-force oracles for
//! checking all of this on small instances.

pub mod algebraic;
pub mod canon;
pub mod construction;
pub mod embed;
pub mod error;
pub mod experiment;
pub mod family;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod report;
pub mod tree;

pub use algebraic::{FieldElement, MultiPolynomial};
pub use canon::canonical_form;
pub use construction::{ConstructionParams, ConstructionReport, ThresholdPolicy};
pub use embed::{count_rooted_embeddings, list_rooted_embeddings, RootedEmbedding};
pub use error::{Error, Result};
pub use family::{contains_member, enumerate_power, FamilyMember};
pub use graph::{min_degree_subgraph, Graph};
pub use tree::{build_t_ab, DensityReport, RootedTree};
