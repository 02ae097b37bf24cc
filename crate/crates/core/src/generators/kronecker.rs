//! Stochastic Kronecker graphs from a 2x2 initiator.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{invalid, rng_from_seed, GeneratorError};
use crate::graph::{Graph, GraphBuilder};

/// Named 2x2 initiator, row-major `[p00, p01, p10, p11]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerInitiator {
    pub name: String,
    pub p: [f64; 4],
}

impl KroneckerInitiator {
    pub fn new(name: impl Into<String>, p: [f64; 4]) -> Self {
        KroneckerInitiator {
            name: name.into(),
            p,
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        match self.p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            Some(bad) => Err(invalid("initiator entry", bad, "must lie in [0, 1]")),
            None => Ok(()),
        }
    }

    #[inline]
    fn entry(&self, row: usize, col: usize) -> f64 {
        self.p[2 * row + col]
    }

    /// Probability of the ordered pair `(i, j)` at Kronecker power `k`:
    /// the product of initiator entries picked by the bits of `i` and `j`.
    pub fn pair_probability(&self, i: usize, j: usize, k: u32) -> f64 {
        (0..k)
            .map(|level| self.entry((i >> level) & 1, (j >> level) & 1))
            .product()
    }
}

/// `2^k` vertices; each pair `i < j` links with the ordered-pair probability
/// of `(i, j)`. Self-loops are never sampled.
pub fn gen_kg(initiator: &KroneckerInitiator, k: u32, seed: u64) -> Result<Graph, GeneratorError> {
    initiator.validate()?;
    if k == 0 || k > 16 {
        return Err(invalid("k", k, "need 1 <= k <= 16"));
    }
    let n = 1usize << k;
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < initiator.pair_probability(i, j, k) {
                b.add_edge(i, j);
            }
        }
    }
    Ok(b.build())
}

/// Parses a JSON object mapping initiator name to four probabilities.
/// Entries come back sorted by name.
pub fn parse_initiators(text: &str) -> Result<Vec<KroneckerInitiator>, GeneratorError> {
    let raw: BTreeMap<String, [f64; 4]> =
        serde_json::from_str(text).map_err(|e| GeneratorError::Initiators(e.to_string()))?;
    let list: Vec<KroneckerInitiator> = raw
        .into_iter()
        .map(|(name, p)| KroneckerInitiator { name, p })
        .collect();
    for init in &list {
        init.validate()
            .map_err(|e| GeneratorError::Initiators(format!("{}: {e}", init.name)))?;
    }
    Ok(list)
}

pub fn load_initiators(path: &Path) -> Result<Vec<KroneckerInitiator>, GeneratorError> {
    let text = std::fs::read_to_string(path).map_err(|e| GeneratorError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_initiators(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_is_power_of_two() {
        let init = KroneckerInitiator::new("half", [0.5; 4]);
        assert_eq!(gen_kg(&init, 3, 0).unwrap().n(), 8);
    }

    #[test]
    fn all_ones_gives_complete_graph() {
        let init = KroneckerInitiator::new("ones", [1.0; 4]);
        assert_eq!(gen_kg(&init, 3, 7).unwrap(), Graph::complete(8));
    }

    #[test]
    fn identity_initiator_blocks_pairs() {
        let init = KroneckerInitiator::new("identity", [1.0, 0.0, 0.0, 1.0]);
        // 00 vs 11 differ in both bits
        assert_eq!(init.pair_probability(0, 3, 2), 0.0);
        for seed in 0..20 {
            let g = gen_kg(&init, 2, seed).unwrap();
            assert!(!g.has_edge(0, 3));
            assert_eq!(g.m(), 0);
        }
    }

    #[test]
    fn parse_rejects_bad_entries() {
        let ok = parse_initiators(r#"{"b": [0.9, 0.5, 0.5, 0.1], "a": [1, 0, 0, 1]}"#).unwrap();
        assert_eq!(ok[0].name, "a");
        assert_eq!(ok[1].p, [0.9, 0.5, 0.5, 0.1]);
        assert!(parse_initiators(r#"{"x": [0.9, 0.5, 0.5]}"#).is_err());
        assert!(parse_initiators(r#"{"x": [1.2, 0.5, 0.5, 0.1]}"#).is_err());
    }
}
