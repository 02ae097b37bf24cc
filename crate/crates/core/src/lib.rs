//! Vertex centrality measures, synthetic network generators, and the rank
//! correlation / granularity analysis built on top of them.

pub mod centrality;
pub mod generators;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod linalg;
pub mod stats;

pub use centrality::{CentralityError, CentralityVector, Measure};
pub use generators::{GeneratorError, Model, ModelConfig, ModelParams};
pub use graph::{bfs_all_pairs, GeodesicData, Graph, GraphBuilder, GraphError};
pub use harness::{ExperimentPlan, Family, HarnessError, RunResult};
pub use linalg::DenseMatrix;
pub use stats::{GranularityReport, RankCorrelationMatrix};
