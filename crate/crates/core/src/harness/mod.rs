//! Experiment planning, seeded parallel execution, persistence and the
//! report tables built from stored results.
//!
//! A run is a pure function of its configuration file: cells expand in a
//! fixed order, every sample draws its seed from
//! `mix_seed(&[base_seed, model id, combination, sample])`, and results are
//! collected in cell/sample order regardless of how many workers ran them.

mod config;
mod heatmap;
mod run;
mod tables;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{GeneratorError, Model};

pub use config::{
    plan_experiments, plan_from_config, Cell, CellSource, CommunityCount, ExperimentConfig,
    ExperimentPlan, ModelGrid, DEFAULT_CONFIDENCE,
};
pub use heatmap::{emit_heatmap, render_heatmap};
pub use run::{
    load_results, run_experiment, write_results, MetricSummary, MetricTiming, PairTau, RunOptions,
    RunResult,
};
pub use tables::{
    correlation_matrix, emit_all_tables, emit_tables, granularity_networks, TableKind,
    CORRELATION_ORDER, FAMILY_ORDER, GRANULARITY_ORDER,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("no results to tabulate")]
    EmptyResults,
    #[error("correlation matrix has no value for {a} / {b}")]
    IncompleteMatrix { a: String, b: String },
    #[error("{path}: line {line}: {message}")]
    BadResults {
        path: String,
        line: usize,
        message: String,
    },
}

impl HarnessError {
    /// Process exit status: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Generator(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: &Path, e: impl fmt::Display) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

/// Network family a result belongs to: one of the six models or the
/// non-isomorphic corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ni,
    Cs,
    Sf,
    Sw,
    Gr,
    Er,
    Kg,
}

impl Family {
    pub fn key(self) -> &'static str {
        match self {
            Family::Ni => "ni",
            Family::Cs => "cs",
            Family::Sf => "sf",
            Family::Sw => "sw",
            Family::Gr => "gr",
            Family::Er => "er",
            Family::Kg => "kg",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Ni => "N_ni",
            Family::Cs => "M_cs",
            Family::Sf => "M_sf",
            Family::Sw => "M_sw",
            Family::Gr => "M_gr",
            Family::Er => "M_er",
            Family::Kg => "M_kg",
        }
    }

    pub fn from_key(key: &str) -> Option<Family> {
        FAMILY_ORDER.into_iter().find(|f| f.key() == key)
    }

    /// Seed-derivation id; models keep their generator id, the corpus uses 0.
    pub fn id(self) -> u64 {
        self.model().map_or(0, Model::id)
    }

    pub fn model(self) -> Option<Model> {
        match self {
            Family::Ni => None,
            Family::Cs => Some(Model::Cs),
            Family::Sf => Some(Model::Sf),
            Family::Sw => Some(Model::Sw),
            Family::Gr => Some(Model::Gr),
            Family::Er => Some(Model::Er),
            Family::Kg => Some(Model::Kg),
        }
    }

    pub fn from_model(model: Model) -> Family {
        match model {
            Model::Cs => Family::Cs,
            Model::Er => Family::Er,
            Model::Gr => Family::Gr,
            Model::Sf => Family::Sf,
            Model::Sw => Family::Sw,
            Model::Kg => Family::Kg,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
