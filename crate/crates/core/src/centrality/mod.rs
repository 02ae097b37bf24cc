//! The eight vertex centrality measures.
//!
//! Every measure returns raw scores exactly as its defining formula yields
//! them; no size normalization is applied. Measures built on shortest paths
//! or on the grounded Laplacian reject disconnected graphs.

mod flow;
mod paths;
mod spectral;

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bfs_all_pairs, GeodesicData, Graph};
use crate::linalg::LinalgError;

pub use flow::{information, walk_betweenness, FlowMatrix, InformationIntermediate};
pub use paths::{betweenness, closeness, degree, eccentricity};
pub use spectral::{
    eigenvector, subgraph, PowerIterationState, EIGENVECTOR_MAX_ITERATIONS, EIGENVECTOR_TOLERANCE,
};

/// Maximum spread of row sums of `B` tolerated by the information measure.
pub const ROW_SUM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Betweenness,
    Closeness,
    Degree,
    Eccentricity,
    Eigenvector,
    Information,
    Subgraph,
    WalkBetweenness,
}

impl Measure {
    /// Canonical order, also the column order of the centrality CSV.
    pub const ALL: [Measure; 8] = [
        Measure::Betweenness,
        Measure::Closeness,
        Measure::Degree,
        Measure::Eccentricity,
        Measure::Eigenvector,
        Measure::Information,
        Measure::Subgraph,
        Measure::WalkBetweenness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Degree => "degree",
            Measure::Eccentricity => "eccentricity",
            Measure::Eigenvector => "eigenvector",
            Measure::Information => "information",
            Measure::Subgraph => "subgraph",
            Measure::WalkBetweenness => "walk_betweenness",
        }
    }

    /// Short table label, e.g. `C_b`.
    pub fn label(self) -> &'static str {
        match self {
            Measure::Betweenness => "C_b",
            Measure::Closeness => "C_c",
            Measure::Degree => "C_d",
            Measure::Eccentricity => "C_x",
            Measure::Eigenvector => "C_e",
            Measure::Information => "C_i",
            Measure::Subgraph => "C_s",
            Measure::WalkBetweenness => "C_w",
        }
    }

    pub fn requires_connected(self) -> bool {
        matches!(
            self,
            Measure::Betweenness
                | Measure::Closeness
                | Measure::Eccentricity
                | Measure::Information
                | Measure::WalkBetweenness
        )
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = CentralityError;

    /// Accepts either the long name or the `C_*` label.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s || m.label() == s)
            .ok_or_else(|| CentralityError::UnknownMeasure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CentralityError {
    #[error("{measure} requires a connected graph")]
    Disconnected { measure: Measure },
    #[error("{measure} needs at least {min} vertices, got {n}")]
    TooSmall {
        measure: Measure,
        n: usize,
        min: usize,
    },
    #[error(
        "power iteration did not converge after {iterations} iterations (last change {delta:e})"
    )]
    NoConvergence { iterations: usize, delta: f64 },
    #[error("row sums of (D - A + U)^-1 differ by {deviation:e}")]
    InconsistentRowSums { deviation: f64 },
    #[error("{measure} produced a non-finite score at vertex {vertex}")]
    NonFinite { measure: Measure, vertex: usize },
    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Per-vertex scores for one measure, index-aligned with the graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub measure: Measure,
    pub values: Vec<f64>,
}

impl CentralityVector {
    fn checked(measure: Measure, values: Vec<f64>) -> Result<Self, CentralityError> {
        if let Some(vertex) = values.iter().position(|v| !v.is_finite()) {
            return Err(CentralityError::NonFinite { measure, vertex });
        }
        Ok(CentralityVector { measure, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Lazily shares all-pairs geodesics between the path-based measures of one
/// graph.
pub struct CentralityContext<'g> {
    graph: &'g Graph,
    connected: bool,
    geodesics: OnceCell<GeodesicData>,
}

impl<'g> CentralityContext<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        CentralityContext {
            graph,
            connected: graph.is_connected(),
            geodesics: OnceCell::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn geodesics(&self) -> &GeodesicData {
        self.geodesics.get_or_init(|| bfs_all_pairs(self.graph))
    }

    fn require_connected(&self, measure: Measure) -> Result<(), CentralityError> {
        if self.connected {
            Ok(())
        } else {
            Err(CentralityError::Disconnected { measure })
        }
    }

    pub fn compute(&self, measure: Measure) -> Result<CentralityVector, CentralityError> {
        if measure.requires_connected() {
            self.require_connected(measure)?;
        }
        let g = self.graph;
        match measure {
            Measure::Degree => Ok(degree(g)),
            Measure::Closeness => paths::closeness_from(self.geodesics()),
            Measure::Eccentricity => paths::eccentricity_from(self.geodesics()),
            Measure::Betweenness => Ok(paths::betweenness_from(g, self.geodesics())),
            Measure::Eigenvector => eigenvector(g),
            Measure::Information => information(g),
            Measure::Subgraph => subgraph(g),
            Measure::WalkBetweenness => walk_betweenness(g),
        }
    }
}

/// Computes every requested measure on `g`, in the order given.
pub fn compute_all(
    g: &Graph,
    measures: &[Measure],
) -> Result<Vec<CentralityVector>, CentralityError> {
    let ctx = CentralityContext::new(g);
    measures.iter().map(|&m| ctx.compute(m)).collect()
}

/// Centrality CSV: `vertex` column followed by one column per vector, six
/// fixed decimals.
pub fn to_csv(vectors: &[CentralityVector]) -> String {
    use std::fmt::Write as _;

    let n = vectors.first().map_or(0, CentralityVector::len);
    let mut out = String::from("vertex");
    for v in vectors {
        out.push(',');
        out.push_str(v.measure.name());
    }
    out.push('\n');
    for k in 0..n {
        let _ = write!(out, "{k}");
        for v in vectors {
            let _ = write!(out, ",{:.6}", v.values[k]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
            assert_eq!(m.label().parse::<Measure>().unwrap(), m);
        }
        assert!("pagerank".parse::<Measure>().is_err());
    }

    #[test]
    fn csv_header_and_precision() {
        let vs = compute_all(&Graph::path(3), &Measure::ALL).unwrap();
        let csv = to_csv(&vs);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "vertex,betweenness,closeness,degree,eccentricity,eigenvector,information,subgraph,walk_betweenness"
        );
        let row1: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
        assert_eq!(row1[0], "1");
        assert_eq!(row1[1], "1.000000");
        assert_eq!(row1[2], "0.500000");
        assert_eq!(row1[6], "1.500000");
        assert_eq!(row1[8], "3.000000");
    }

    #[test]
    fn disconnected_graph_rejected_by_path_measures() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let ctx = CentralityContext::new(&g);
        for m in Measure::ALL {
            let result = ctx.compute(m);
            if m.requires_connected() {
                assert_eq!(result, Err(CentralityError::Disconnected { measure: m }));
            } else {
                assert!(result.is_ok(), "{m} should accept disconnected input");
            }
        }
    }

    #[test]
    fn vertex_transitive_graphs_give_constant_vectors() {
        for g in [
            Graph::cycle(5),
            Graph::cycle(8),
            Graph::complete(4),
            Graph::complete(7),
        ] {
            for v in compute_all(&g, &Measure::ALL).unwrap() {
                let first = v.values[0];
                for &x in &v.values {
                    assert!(
                        (x - first).abs() < 1e-9,
                        "{} not constant on n={}",
                        v.measure,
                        g.n()
                    );
                }
            }
        }
    }

    #[test]
    fn all_scores_non_negative() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        for v in compute_all(&g, &Measure::ALL).unwrap() {
            assert_eq!(v.len(), 6);
            assert!(v.values.iter().all(|&x| x >= 0.0), "{} negative", v.measure);
        }
    }
}
