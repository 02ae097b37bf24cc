use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{Family, HarnessError};
use crate::centrality::Measure;
use crate::generators::{
    enumerate_connected_nonisomorphic, load_graph6_corpus, load_initiators, mix_seed,
    KroneckerInitiator, ModelParams, DEFAULT_MAX_RETRIES, MAX_ENUMERATION_N,
};
use crate::graph::Graph;

pub const DEFAULT_CONFIDENCE: f64 = 0.99;

const TOP_KEYS: [&str; 8] = [
    "models",
    "samples_per_cell",
    "base_seed",
    "metrics",
    "output_dir",
    "kronecker_initiators_path",
    "max_retries",
    "confidence",
];

/// Community count for the `cs` grid: absolute, or `n / divisor`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommunityCount {
    Absolute(Vec<usize>),
    Divisor(Vec<usize>),
}

/// One `models[]` entry: lists of values whose cartesian product forms cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelGrid {
    Cs {
        n: Vec<usize>,
        p_c: Vec<f64>,
        p: Vec<f64>,
        c: CommunityCount,
        covering: bool,
    },
    Er {
        n: Vec<usize>,
        p: Vec<f64>,
    },
    Gr {
        n: Vec<usize>,
        kappa: Vec<f64>,
    },
    Sf {
        n: Vec<usize>,
        k: Vec<usize>,
    },
    Sw {
        n: Vec<usize>,
        k: Vec<usize>,
        p: Vec<f64>,
    },
    Kg {
        k: Vec<u32>,
        /// Initiator names; all initiators in the file when absent.
        initiators: Option<Vec<String>>,
    },
    /// Non-isomorphic connected graphs, enumerated or read from graph6.
    Ni {
        n: Vec<usize>,
        graph6_path: Option<PathBuf>,
    },
}

impl ModelGrid {
    pub fn family(&self) -> Family {
        match self {
            ModelGrid::Cs { .. } => Family::Cs,
            ModelGrid::Er { .. } => Family::Er,
            ModelGrid::Gr { .. } => Family::Gr,
            ModelGrid::Sf { .. } => Family::Sf,
            ModelGrid::Sw { .. } => Family::Sw,
            ModelGrid::Kg { .. } => Family::Kg,
            ModelGrid::Ni { .. } => Family::Ni,
        }
    }
}

/// Parsed experiment configuration. Relative input paths are resolved
/// against the configuration file's directory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub models: Vec<ModelGrid>,
    pub samples_per_cell: usize,
    pub base_seed: u64,
    pub metrics: Vec<Measure>,
    pub output_dir: PathBuf,
    pub kronecker_initiators_path: Option<PathBuf>,
    pub max_retries: usize,
    pub confidence: f64,
}

fn config_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], scope: &str) -> Result<(), HarnessError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(key) => Err(config_err(format!("unknown key `{key}` in {scope}"))),
        None => Ok(()),
    }
}

fn as_list<'a>(v: &'a Value) -> Vec<&'a Value> {
    match v {
        Value::Array(items) => items.iter().collect(),
        other => vec![other],
    }
}

fn values<T>(
    obj: &Map<String, Value>,
    key: &str,
    scope: &str,
    convert: impl Fn(&Value) -> Option<T>,
) -> Result<Option<Vec<T>>, HarnessError> {
    let Some(raw) = obj.get(key) else {
        return Ok(None);
    };
    let items = as_list(raw);
    if items.is_empty() {
        return Err(config_err(format!("`{key}` in {scope} is an empty list")));
    }
    items
        .into_iter()
        .map(|v| {
            convert(v).ok_or_else(|| config_err(format!("bad value {v} for `{key}` in {scope}")))
        })
        .collect::<Result<Vec<T>, _>>()
        .map(Some)
}

fn required<T>(found: Option<Vec<T>>, key: &str, scope: &str) -> Result<Vec<T>, HarnessError> {
    found.ok_or_else(|| config_err(format!("missing key `{key}` in {scope}")))
}

fn usizes(obj: &Map<String, Value>, key: &str, scope: &str) -> Result<Vec<usize>, HarnessError> {
    required(
        values(obj, key, scope, |v| v.as_u64().map(|x| x as usize))?,
        key,
        scope,
    )
}

fn floats(obj: &Map<String, Value>, key: &str, scope: &str) -> Result<Vec<f64>, HarnessError> {
    required(values(obj, key, scope, Value::as_f64)?, key, scope)
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let path = PathBuf::from(p);
    if path.is_absolute() {
        path
    } else {
        base.join(path)
    }
}

fn parse_grid(entry: &Value, index: usize, base: &Path) -> Result<ModelGrid, HarnessError> {
    let obj = entry
        .as_object()
        .ok_or_else(|| config_err(format!("models[{index}] is not an object")))?;
    let key = obj
        .get("model")
        .and_then(Value::as_str)
        .ok_or_else(|| config_err(format!("missing key `model` in models[{index}]")))?;
    let scope = format!("models[{index}] ({key})");
    let scope = scope.as_str();
    let grid = match key {
        "er" => {
            check_keys(obj, &["model", "n", "p"], scope)?;
            ModelGrid::Er {
                n: usizes(obj, "n", scope)?,
                p: floats(obj, "p", scope)?,
            }
        }
        "gr" => {
            check_keys(obj, &["model", "n", "kappa"], scope)?;
            ModelGrid::Gr {
                n: usizes(obj, "n", scope)?,
                kappa: floats(obj, "kappa", scope)?,
            }
        }
        "sf" => {
            check_keys(obj, &["model", "n", "k"], scope)?;
            ModelGrid::Sf {
                n: usizes(obj, "n", scope)?,
                k: usizes(obj, "k", scope)?,
            }
        }
        "sw" => {
            check_keys(obj, &["model", "n", "k", "p"], scope)?;
            ModelGrid::Sw {
                n: usizes(obj, "n", scope)?,
                k: usizes(obj, "k", scope)?,
                p: floats(obj, "p", scope)?,
            }
        }
        "cs" => {
            check_keys(
                obj,
                &["model", "n", "p_c", "p", "c", "c_divisor", "covering"],
                scope,
            )?;
            let absolute = values(obj, "c", scope, |v| v.as_u64().map(|x| x as usize))?;
            let divisor = values(obj, "c_divisor", scope, |v| {
                v.as_u64().filter(|&d| d > 0).map(|x| x as usize)
            })?;
            let c = match (absolute, divisor) {
                (Some(c), None) => CommunityCount::Absolute(c),
                (None, Some(d)) => CommunityCount::Divisor(d),
                _ => {
                    return Err(config_err(format!(
                        "{scope} needs exactly one of `c` or `c_divisor`"
                    )))
                }
            };
            let covering = match obj.get("covering") {
                None => false,
                Some(v) => v.as_bool().ok_or_else(|| {
                    config_err(format!("bad value {v} for `covering` in {scope}"))
                })?,
            };
            ModelGrid::Cs {
                n: usizes(obj, "n", scope)?,
                p_c: floats(obj, "p_c", scope)?,
                p: floats(obj, "p", scope)?,
                c,
                covering,
            }
        }
        "kg" => {
            check_keys(obj, &["model", "k", "initiators"], scope)?;
            ModelGrid::Kg {
                k: usizes(obj, "k", scope)?
                    .into_iter()
                    .map(|k| k as u32)
                    .collect(),
                initiators: values(obj, "initiators", scope, |v| v.as_str().map(str::to_string))?,
            }
        }
        "ni" => {
            check_keys(obj, &["model", "n", "graph6_path"], scope)?;
            let graph6_path = match obj.get("graph6_path") {
                None => None,
                Some(v) => Some(resolve(
                    base,
                    v.as_str().ok_or_else(|| {
                        config_err(format!("bad value {v} for `graph6_path` in {scope}"))
                    })?,
                )),
            };
            ModelGrid::Ni {
                n: usizes(obj, "n", scope)?,
                graph6_path,
            }
        }
        other => {
            return Err(config_err(format!(
                "unknown model `{other}` in models[{index}]"
            )))
        }
    };
    Ok(grid)
}

impl ExperimentConfig {
    /// Parses configuration JSON; `base_dir` anchors relative input paths.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, HarnessError> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| config_err(format!("invalid JSON: {e}")))?;
        let obj = root
            .as_object()
            .ok_or_else(|| config_err("top level must be an object"))?;
        check_keys(obj, &TOP_KEYS, "config")?;

        let models_raw = obj
            .get("models")
            .and_then(Value::as_array)
            .ok_or_else(|| config_err("missing key `models` (a list)"))?;
        if models_raw.is_empty() {
            return Err(config_err("`models` is empty"));
        }
        let models = models_raw
            .iter()
            .enumerate()
            .map(|(i, m)| parse_grid(m, i, base_dir))
            .collect::<Result<Vec<_>, _>>()?;

        let samples_per_cell = obj
            .get("samples_per_cell")
            .ok_or_else(|| config_err("missing key `samples_per_cell`"))?
            .as_u64()
            .filter(|&s| s >= 1)
            .ok_or_else(|| config_err("`samples_per_cell` must be an integer >= 1"))?
            as usize;
        let base_seed = match obj.get("base_seed") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| config_err(format!("bad value {v} for `base_seed`")))?,
        };
        let metrics = match obj.get("metrics") {
            None => Measure::ALL.to_vec(),
            Some(v) => {
                let names = v
                    .as_array()
                    .ok_or_else(|| config_err("`metrics` must be a list"))?;
                let mut set = BTreeSet::new();
                for name in names {
                    let m: Measure = name
                        .as_str()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| config_err(format!("unknown metric {name}")))?;
                    set.insert(m);
                }
                if set.is_empty() {
                    return Err(config_err("`metrics` is empty"));
                }
                // canonical order regardless of how the list was written
                Measure::ALL
                    .into_iter()
                    .filter(|m| set.contains(m))
                    .collect()
            }
        };
        let output_dir = match obj.get("output_dir") {
            None => PathBuf::from("results"),
            Some(v) => PathBuf::from(
                v.as_str()
                    .ok_or_else(|| config_err(format!("bad value {v} for `output_dir`")))?,
            ),
        };
        let kronecker_initiators_path = match obj.get("kronecker_initiators_path") {
            None | Some(Value::Null) => None,
            Some(v) => Some(resolve(
                base_dir,
                v.as_str().ok_or_else(|| {
                    config_err(format!("bad value {v} for `kronecker_initiators_path`"))
                })?,
            )),
        };
        let max_retries = match obj.get("max_retries") {
            None => DEFAULT_MAX_RETRIES,
            Some(v) => v
                .as_u64()
                .filter(|&r| r >= 1)
                .ok_or_else(|| config_err("`max_retries` must be an integer >= 1"))?
                as usize,
        };
        let confidence = match obj.get("confidence") {
            None => DEFAULT_CONFIDENCE,
            Some(v) => v
                .as_f64()
                .filter(|c| *c > 0.0 && *c < 1.0)
                .ok_or_else(|| config_err("`confidence` must lie in (0, 1)"))?,
        };
        Ok(ExperimentConfig {
            models,
            samples_per_cell,
            base_seed,
            metrics,
            output_dir,
            kronecker_initiators_path,
            max_retries,
            confidence,
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base)
    }
}

/// Where the graphs of a cell come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CellSource {
    Model(ModelParams),
    Corpus { n: usize, graphs: Arc<Vec<Graph>> },
}

/// One parameter combination and how many networks it contributes.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub family: Family,
    /// Index of this combination among the cells of its family.
    pub combination: usize,
    pub source: CellSource,
    pub samples: usize,
}

impl Cell {
    /// Seed of sample `sample` for a model cell; corpus cells have none.
    pub fn seed(&self, base_seed: u64, sample: usize) -> Option<u64> {
        match self.source {
            CellSource::Model(_) => Some(mix_seed(&[
                base_seed,
                self.family.id(),
                self.combination as u64,
                sample as u64,
            ])),
            CellSource::Corpus { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.source {
            CellSource::Model(params) => params.to_string(),
            CellSource::Corpus { n, .. } => format!("ni(n={n})"),
        }
    }
}

/// Fully expanded experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub cells: Vec<Cell>,
    pub base_seed: u64,
    pub metrics: Vec<Measure>,
    pub output_dir: PathBuf,
    pub max_retries: usize,
    pub confidence: f64,
    pub config: ExperimentConfig,
}

impl ExperimentPlan {
    pub fn total_networks(&self) -> usize {
        self.cells.iter().map(|c| c.samples).sum()
    }
}

fn push_model(
    cells: &mut Vec<Cell>,
    counters: &mut [usize; 7],
    params: ModelParams,
    samples: usize,
) -> Result<(), HarnessError> {
    params
        .validate()
        .map_err(|e| config_err(format!("{params}: {e}")))?;
    let family = Family::from_model(params.model());
    if cells
        .iter()
        .any(|c| matches!(&c.source, CellSource::Model(p) if *p == params))
    {
        return Err(config_err(format!("duplicate cell {params}")));
    }
    let slot = &mut counters[family as usize];
    cells.push(Cell {
        family,
        combination: *slot,
        source: CellSource::Model(params),
        samples,
    });
    *slot += 1;
    Ok(())
}

fn corpus_graphs(n: usize, path: Option<&Path>) -> Result<Vec<Graph>, HarnessError> {
    match path {
        None => {
            if n == 0 || n > MAX_ENUMERATION_N {
                return Err(config_err(format!(
                    "ni needs 1 <= n <= {MAX_ENUMERATION_N} without a graph6 file, got {n}"
                )));
            }
            Ok(enumerate_connected_nonisomorphic(n)?)
        }
        Some(path) => Ok(load_graph6_corpus(path)?
            .graphs
            .into_iter()
            .filter(|g| g.n() == n)
            .collect()),
    }
}

/// Expands every grid into cells in configuration order; within a grid the
/// first listed parameter varies slowest.
pub fn plan_from_config(config: &ExperimentConfig) -> Result<ExperimentPlan, HarnessError> {
    let samples = config.samples_per_cell;
    let mut cells = Vec::new();
    let mut counters = [0usize; 7];
    let mut initiators: Option<Vec<KroneckerInitiator>> = None;

    for grid in &config.models {
        match grid {
            ModelGrid::Er { n, p } => {
                for &n in n {
                    for &p in p {
                        push_model(&mut cells, &mut counters, ModelParams::Er { n, p }, samples)?;
                    }
                }
            }
            ModelGrid::Gr { n, kappa } => {
                for &n in n {
                    for &kappa in kappa {
                        let params = ModelParams::Gr { n, kappa };
                        push_model(&mut cells, &mut counters, params, samples)?;
                    }
                }
            }
            ModelGrid::Sf { n, k } => {
                for &n in n {
                    for &k in k {
                        push_model(&mut cells, &mut counters, ModelParams::Sf { n, k }, samples)?;
                    }
                }
            }
            ModelGrid::Sw { n, k, p } => {
                for &n in n {
                    for &k in k {
                        for &p in p {
                            let params = ModelParams::Sw { n, k, p };
                            push_model(&mut cells, &mut counters, params, samples)?;
                        }
                    }
                }
            }
            ModelGrid::Cs {
                n,
                p_c,
                p,
                c,
                covering,
            } => {
                let counts = match c {
                    CommunityCount::Absolute(v) | CommunityCount::Divisor(v) => v,
                };
                for &n in n {
                    for &p_c in p_c {
                        for &p in p {
                            for &count in counts {
                                let c = match c {
                                    CommunityCount::Absolute(_) => count,
                                    CommunityCount::Divisor(_) => n / count,
                                };
                                let params = ModelParams::Cs {
                                    n,
                                    p_c,
                                    p,
                                    c,
                                    covering: *covering,
                                };
                                push_model(&mut cells, &mut counters, params, samples)?;
                            }
                        }
                    }
                }
            }
            ModelGrid::Kg {
                k,
                initiators: names,
            } => {
                if initiators.is_none() {
                    let path = config
                        .kronecker_initiators_path
                        .as_ref()
                        .ok_or_else(|| config_err("kg model needs `kronecker_initiators_path`"))?;
                    initiators = Some(load_initiators(path)?);
                }
                let available = initiators.as_ref().expect("loaded above");
                let chosen: Vec<KroneckerInitiator> = match names {
                    None => available.clone(),
                    Some(names) => names
                        .iter()
                        .map(|name| {
                            available
                                .iter()
                                .find(|i| &i.name == name)
                                .cloned()
                                .ok_or_else(|| config_err(format!("unknown initiator `{name}`")))
                        })
                        .collect::<Result<_, _>>()?,
                };
                for &k in k {
                    for initiator in &chosen {
                        let params = ModelParams::Kg {
                            initiator: initiator.clone(),
                            k,
                        };
                        push_model(&mut cells, &mut counters, params, samples)?;
                    }
                }
            }
            ModelGrid::Ni { n, graph6_path } => {
                for &n in n {
                    if cells
                        .iter()
                        .any(|c| matches!(c.source, CellSource::Corpus { n: m, .. } if m == n))
                    {
                        return Err(config_err(format!("duplicate cell ni(n={n})")));
                    }
                    let graphs = corpus_graphs(n, graph6_path.as_deref())?;
                    if graphs.is_empty() {
                        return Err(config_err(format!("no graphs with n={n} in the corpus")));
                    }
                    let slot = &mut counters[Family::Ni as usize];
                    cells.push(Cell {
                        family: Family::Ni,
                        combination: *slot,
                        samples: graphs.len(),
                        source: CellSource::Corpus {
                            n,
                            graphs: Arc::new(graphs),
                        },
                    });
                    *slot += 1;
                }
            }
        }
    }

    Ok(ExperimentPlan {
        cells,
        base_seed: config.base_seed,
        metrics: config.metrics.clone(),
        output_dir: config.output_dir.clone(),
        max_retries: config.max_retries,
        confidence: config.confidence,
        config: config.clone(),
    })
}

/// Reads a configuration file and expands it.
pub fn plan_experiments(config_file: &Path) -> Result<ExperimentPlan, HarnessError> {
    plan_from_config(&ExperimentConfig::load(config_file)?)
}
