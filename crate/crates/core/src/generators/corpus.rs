//! graph6 corpus loading and edge-list corpus output.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{GeneratorError, ModelConfig};
use crate::graph::Graph;
use crate::graph6::{parse_graph6, HEADER};

/// Graphs read from a graph6 file, with connectivity flags.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCorpus {
    pub graphs: Vec<Graph>,
    pub connected: Vec<bool>,
}

impl GraphCorpus {
    pub fn from_graphs(graphs: Vec<Graph>) -> Self {
        let connected = graphs.iter().map(Graph::is_connected).collect();
        GraphCorpus { graphs, connected }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn disconnected_count(&self) -> usize {
        self.connected.iter().filter(|c| !**c).count()
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, GeneratorError> {
        let mut graphs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let mut line = raw.trim_end_matches('\r');
            if idx == 0 {
                line = line.strip_prefix(HEADER).unwrap_or(line);
            }
            if line.is_empty() {
                continue;
            }
            let g = parse_graph6(line).map_err(|e| GeneratorError::Corpus {
                path: origin.to_string(),
                line: idx + 1,
                message: e.to_string(),
            })?;
            graphs.push(g);
        }
        Ok(Self::from_graphs(graphs))
    }
}

/// Reads one graph6 record per line; an optional `>>graph6<<` header is
/// accepted on the first line.
pub fn load_graph6_corpus(path: &Path) -> Result<GraphCorpus, GeneratorError> {
    let text = fs::read_to_string(path).map_err(|e| GeneratorError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    GraphCorpus::parse(&text, &path.display().to_string())
}

/// One generated network destined for a corpus directory.
#[derive(Debug, Clone)]
pub struct CorpusSample {
    pub config: ModelConfig,
    pub graph: Graph,
    pub retries: usize,
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: String,
    #[serde(flatten)]
    config: &'a ModelConfig,
    n: usize,
    m: usize,
    retries: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    connectivity_policy: &'static str,
    samples: Vec<ManifestEntry<'a>>,
}

/// Writes `sample_XXXX.edges` files plus `manifest.json` into `dir`.
pub fn write_corpus_dir(dir: &Path, samples: &[CorpusSample]) -> Result<(), GeneratorError> {
    let io = |e: std::io::Error| GeneratorError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut entries = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        let file = format!("sample_{i:04}.edges");
        fs::write(dir.join(&file), s.graph.to_edge_list()).map_err(io)?;
        entries.push(ManifestEntry {
            file,
            config: &s.config,
            n: s.graph.n(),
            m: s.graph.m(),
            retries: s.retries,
        });
    }
    let manifest = Manifest {
        connectivity_policy: "retry-with-derived-seed",
        samples: entries,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), json + "\n").map_err(io)?;
    Ok(())
}
