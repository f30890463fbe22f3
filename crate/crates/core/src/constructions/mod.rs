//! A bipartite lower-bound construction for local list colouring, and the
//! semi-bipartite subgraph extractor driven by the hard-core model.

mod necessary;
mod search;
mod semibip;

use thiserror::Error;

use crate::graph::GraphError;
use crate::hardcore::HardcoreError;

pub use necessary::{
    necessary_construction, verify_not_colourable, ColourLabel, ConstructionOptions,
    NecessaryInstance, PropertyReport, VerifyReport,
};
pub use search::{find_list_colouring, is_proper_list_colouring};
pub use semibip::{
    auto_lambda, expected_cut, semi_bipartite_extract, semi_bipartite_lower_bound, ExpectedCut,
    LambdaMode, SampleMode, SemiBipartite, SemiBipartiteOptions,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("delta must be at least 3, got {0}")]
    DeltaTooSmall(usize),
    #[error("level {level} exceeds delta - 1 = {}", delta - 1)]
    LevelTooLarge { level: usize, delta: usize },
    #[error("construction would have {vertices} vertices, above the cap {cap}")]
    SizeCap { vertices: f64, cap: usize },
    #[error("search exceeded its budget of {0} nodes")]
    Budget(u64),
    #[error("construction property {property} fails: {detail}")]
    Property { property: u8, detail: String },
    #[error("lists given for {found} vertices, graph has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("every vertex has degree at most one, so the automatic fugacity is undefined")]
    Degenerate,
    #[error("trials must be positive")]
    NoTrials,
    #[error(transparent)]
    Hardcore(#[from] HardcoreError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
