use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{Cell, CellSource, ExperimentPlan};
use super::{Family, HarnessError};
use crate::centrality::{CentralityContext, CentralityVector, Measure};
use crate::generators::{ensure_connected, ModelConfig, ModelParams};
use crate::graph::Graph;
use crate::graph6::to_graph6;
use crate::stats::{distinct_count, kendall_tau_b, round6_values};

pub const RESULTS_FILE: &str = "results.jsonl";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    pub keep_vectors: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub measure: Measure,
    pub distinct: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTau {
    pub a: Measure,
    pub b: Measure,
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTiming {
    pub measure: Measure,
    pub seconds: f64,
}

/// Outcome of one sample. Wall-clock timings are kept out of the
/// serialized record so persisted results stay reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub cell: usize,
    pub sample: usize,
    pub family: Family,
    pub config: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ModelParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph6: Option<String>,
    pub n: usize,
    pub m: usize,
    pub retries: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub metrics: Vec<MetricSummary>,
    pub correlations: Vec<PairTau>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<CentralityVector>>,
    #[serde(skip)]
    pub timings: Vec<MetricTiming>,
}

impl RunResult {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn distinct(&self, measure: Measure) -> Option<usize> {
        self.metrics
            .iter()
            .find(|s| s.measure == measure)
            .map(|s| s.distinct)
    }

    pub fn tau(&self, a: Measure, b: Measure) -> Option<f64> {
        self.correlations
            .iter()
            .find(|p| (p.a == a && p.b == b) || (p.a == b && p.b == a))
            .map(|p| p.tau)
    }
}

fn run_sample(plan: &ExperimentPlan, cell_index: usize, sample: usize, keep: bool) -> RunResult {
    let cell: &Cell = &plan.cells[cell_index];
    let seed = cell.seed(plan.base_seed, sample);
    let mut result = RunResult {
        cell: cell_index,
        sample,
        family: cell.family,
        config: cell.describe(),
        params: None,
        seed,
        graph6: None,
        n: 0,
        m: 0,
        retries: 0,
        error: None,
        metrics: Vec::new(),
        correlations: Vec::new(),
        vectors: None,
        timings: Vec::new(),
    };

    let graph: Graph = match &cell.source {
        CellSource::Model(params) => {
            result.params = Some(params.clone());
            let cfg = ModelConfig::new(params.clone(), seed.expect("model cells are seeded"));
            match ensure_connected(&cfg, plan.max_retries) {
                Ok(sample) => {
                    result.retries = sample.retries;
                    sample.graph
                }
                Err(e) => {
                    result.retries = plan.max_retries;
                    result.error = Some(e.to_string());
                    return result;
                }
            }
        }
        CellSource::Corpus { graphs, .. } => {
            let g = graphs[sample].clone();
            result.graph6 = to_graph6(&g).ok();
            g
        }
    };
    result.n = graph.n();
    result.m = graph.m();

    let ctx = CentralityContext::new(&graph);
    let mut vectors = Vec::with_capacity(plan.metrics.len());
    for &measure in &plan.metrics {
        let start = Instant::now();
        let computed = ctx.compute(measure);
        result.timings.push(MetricTiming {
            measure,
            seconds: start.elapsed().as_secs_f64(),
        });
        match computed {
            Ok(v) => vectors.push(v),
            Err(e) => {
                result.error = Some(e.to_string());
                return result;
            }
        }
    }

    // ties are judged at the same six-decimal accuracy as granularity
    let rounded: Vec<Vec<f64>> = vectors.iter().map(|v| round6_values(&v.values)).collect();
    result.metrics = vectors
        .iter()
        .map(|v| MetricSummary {
            measure: v.measure,
            distinct: distinct_count(&v.values),
        })
        .collect();
    if graph.n() >= 2 {
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                let tau = kendall_tau_b(&rounded[i], &rounded[j])
                    .expect("vectors share a length and are finite");
                result.correlations.push(PairTau {
                    a: vectors[i].measure,
                    b: vectors[j].measure,
                    tau,
                });
            }
        }
    }
    if keep {
        result.vectors = Some(vectors);
    }
    result
}

/// Runs every sample of every cell. Output is in cell/sample order and does
/// not depend on the worker count; failures are recorded per sample.
pub fn run_experiment(
    plan: &ExperimentPlan,
    options: &RunOptions,
) -> Result<Vec<RunResult>, HarnessError> {
    let jobs: Vec<(usize, usize)> = plan
        .cells
        .iter()
        .enumerate()
        .flat_map(|(c, cell)| (0..cell.samples).map(move |s| (c, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        jobs.par_iter()
            .map(|&(c, s)| run_sample(plan, c, s, options.keep_vectors))
            .collect()
    }))
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

/// Writes `results.jsonl`, `timings.csv` and `manifest.json` into `dir`.
pub fn write_results(
    dir: &Path,
    plan: &ExperimentPlan,
    results: &[RunResult],
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;

    let mut lines = String::new();
    for r in results {
        lines.push_str(&serde_json::to_string(r).expect("results serialize"));
        lines.push('\n');
    }
    write(&dir.join(RESULTS_FILE), &lines)?;

    let mut timings = String::from("cell,sample,metric,seconds\n");
    for r in results {
        for t in &r.timings {
            let _ = writeln!(
                timings,
                "{},{},{},{:.6}",
                r.cell,
                r.sample,
                t.measure.name(),
                t.seconds
            );
        }
    }
    write(&dir.join(TIMINGS_FILE), &timings)?;

    let cells: Vec<_> = plan
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let retries: Vec<usize> = results
                .iter()
                .filter(|r| r.cell == i)
                .map(|r| r.retries)
                .collect();
            json!({
                "index": i,
                "family": c.family,
                "combination": c.combination,
                "config": c.describe(),
                "samples": c.samples,
                "retries": retries,
            })
        })
        .collect();
    let manifest = json!({
        "base_seed": plan.base_seed,
        "metrics": plan.metrics,
        "confidence": plan.confidence,
        "max_retries": plan.max_retries,
        "connectivity_policy": "retry-with-derived-seed",
        "seed_derivation": "mix(base_seed, model id, combination, sample), retry r uses mix(seed, r)",
        "value_rounding": "6 decimals, half away from zero, before distinct counts and tau-b",
        "tau_b_constant_policy": "both vectors constant -> 1, exactly one constant -> 0",
        "total_networks": plan.total_networks(),
        "failed_samples": results.iter().filter(|r| !r.is_ok()).count(),
        "cells": cells,
        "config": plan.config,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&dir.join(MANIFEST_FILE), &(text + "\n"))
}

/// Reads `results.jsonl` back; the confidence level comes from the
/// manifest when present.
pub fn load_results(dir: &Path) -> Result<(Vec<RunResult>, Option<f64>), HarnessError> {
    let path = dir.join(RESULTS_FILE);
    let text = fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
    let mut results = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: RunResult = serde_json::from_str(line).map_err(|e| HarnessError::BadResults {
            path: path.display().to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        results.push(r);
    }
    let confidence = fs::read_to_string(dir.join(MANIFEST_FILE))
        .ok()
        .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok())
        .and_then(|v| v["confidence"].as_f64());
    Ok((results, confidence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{plan_from_config, ExperimentConfig};

    fn plan(text: &str) -> ExperimentPlan {
        plan_from_config(&ExperimentConfig::from_json(text, Path::new(".")).unwrap()).unwrap()
    }

    #[test]
    fn one_cell_two_samples() {
        let p = plan(r#"{"models": [{"model": "er", "n": 100, "p": 0.3}], "samples_per_cell": 2}"#);
        let results = run_experiment(&p, &RunOptions::default()).unwrap();
        assert_eq!(results.len(), 2);
        for r in &results {
            assert!(r.is_ok(), "{:?}", r.error);
            assert_eq!(r.metrics.len(), 8);
            assert_eq!(r.correlations.len(), 28);
            assert!(r.correlations.iter().all(|c| (-1.0..=1.0).contains(&c.tau)));
            assert_eq!(r.timings.len(), 8);
            assert!(r.vectors.is_none());
        }
        assert_ne!(results[0].seed, results[1].seed);
    }

    #[test]
    fn failures_are_recorded_per_sample() {
        let p = plan(
            r#"{"models": [{"model": "er", "n": 12, "p": [0.0, 1.0]}],
                        "samples_per_cell": 2, "max_retries": 3}"#,
        );
        let results = run_experiment(&p, &RunOptions::default()).unwrap();
        assert_eq!(results.len(), 4);
        assert!(results[..2].iter().all(|r| !r.is_ok() && r.retries == 3));
        assert!(results[2..].iter().all(RunResult::is_ok));
        assert!(results[0].error.as_deref().unwrap().contains("seed="));
    }

    #[test]
    fn metric_subset_and_vectors() {
        let p = plan(
            r#"{"models": [{"model": "sf", "n": 30, "k": 2}], "samples_per_cell": 1,
                        "metrics": ["degree", "closeness", "eccentricity"]}"#,
        );
        let opts = RunOptions {
            workers: 1,
            keep_vectors: true,
        };
        let r = &run_experiment(&p, &opts).unwrap()[0];
        assert_eq!(r.correlations.len(), 3);
        assert_eq!(r.vectors.as_ref().unwrap().len(), 3);
        assert_eq!(r.correlations[0].a, Measure::Closeness);
    }

    #[test]
    fn persisted_results_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = plan(
            r#"{"models": [{"model": "sw", "n": 40, "k": 4, "p": 0.2}],
                        "samples_per_cell": 2, "confidence": 0.95}"#,
        );
        let results = run_experiment(&p, &RunOptions::default()).unwrap();
        write_results(dir.path(), &p, &results).unwrap();
        let (back, confidence) = load_results(dir.path()).unwrap();
        assert_eq!(confidence, Some(0.95));
        let strip = |rs: &[RunResult]| -> Vec<RunResult> {
            rs.iter()
                .cloned()
                .map(|mut r| {
                    r.timings.clear();
                    r
                })
                .collect()
        };
        assert_eq!(strip(&results), back);
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap())
                .unwrap();
        assert_eq!(manifest["connectivity_policy"], "retry-with-derived-seed");
        assert_eq!(manifest["cells"][0]["retries"].as_array().unwrap().len(), 2);
    }
}
