//! Seeded synthetic network models and the non-isomorphic graph corpus.
//!
//! Every generator is a pure function of its parameters and a 64-bit seed;
//! randomness comes from a ChaCha8 stream created per call.

mod corpus;
mod enumerate;
mod kronecker;
mod models;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub use corpus::{load_graph6_corpus, write_corpus_dir, CorpusSample, GraphCorpus};
pub use enumerate::{
    canonical_code, canonical_form, enumerate_all_nonisomorphic, enumerate_connected_nonisomorphic,
    MAX_ENUMERATION_N,
};
pub use kronecker::{gen_kg, load_initiators, parse_initiators, KroneckerInitiator};
pub use models::{gen_cs, gen_cs_covering, gen_er, gen_gr, gen_sf, gen_sw};

/// Default attempt budget for [`ensure_connected`].
pub const DEFAULT_MAX_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("invalid parameter {name}={value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },
    #[error("no connected sample for {config} after {attempts} attempts")]
    GenerationFailed { config: String, attempts: usize },
    #[error("enumeration supports n <= {max}, got {n}")]
    UnsupportedSize { n: usize, max: usize },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Corpus {
        path: String,
        line: usize,
        message: String,
    },
    #[error("initiator file: {0}")]
    Initiators(String),
}

pub(crate) fn invalid(
    name: &'static str,
    value: impl fmt::Display,
    reason: &'static str,
) -> GeneratorError {
    GeneratorError::InvalidParameter {
        name,
        value: value.to_string(),
        reason,
    }
}

/// Synthetic model identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Cs,
    Er,
    Gr,
    Sf,
    Sw,
    Kg,
}

impl Model {
    pub const ALL: [Model; 6] = [
        Model::Cs,
        Model::Er,
        Model::Gr,
        Model::Sf,
        Model::Sw,
        Model::Kg,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Model::Cs => "cs",
            Model::Er => "er",
            Model::Gr => "gr",
            Model::Sf => "sf",
            Model::Sw => "sw",
            Model::Kg => "kg",
        }
    }

    /// Stable numeric id mixed into derived seeds.
    pub fn id(self) -> u64 {
        match self {
            Model::Cs => 1,
            Model::Er => 2,
            Model::Gr => 3,
            Model::Sf => 4,
            Model::Sw => 5,
            Model::Kg => 6,
        }
    }

    pub fn from_key(key: &str) -> Option<Model> {
        Model::ALL.into_iter().find(|m| m.key() == key)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Model choice plus its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelParams {
    /// Overlapping communities: membership probability `p_c` per community,
    /// edge probability `p` for pairs sharing a community. With `covering`,
    /// a vertex that joins no community redraws its memberships.
    Cs {
        n: usize,
        p_c: f64,
        p: f64,
        c: usize,
        #[serde(default)]
        covering: bool,
    },
    Er {
        n: usize,
        p: f64,
    },
    /// Grid geography: `n` must be a perfect square.
    Gr {
        n: usize,
        kappa: f64,
    },
    Sf {
        n: usize,
        k: usize,
    },
    Sw {
        n: usize,
        k: usize,
        p: f64,
    },
    Kg {
        initiator: KroneckerInitiator,
        k: u32,
    },
}

impl ModelParams {
    pub fn model(&self) -> Model {
        match self {
            ModelParams::Cs { .. } => Model::Cs,
            ModelParams::Er { .. } => Model::Er,
            ModelParams::Gr { .. } => Model::Gr,
            ModelParams::Sf { .. } => Model::Sf,
            ModelParams::Sw { .. } => Model::Sw,
            ModelParams::Kg { .. } => Model::Kg,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            ModelParams::Cs { n, .. }
            | ModelParams::Er { n, .. }
            | ModelParams::Gr { n, .. }
            | ModelParams::Sf { n, .. }
            | ModelParams::Sw { n, .. } => n,
            ModelParams::Kg { k, .. } => 1usize << k,
        }
    }

    /// Checks documented parameter ranges without generating anything.
    pub fn validate(&self) -> Result<(), GeneratorError> {
        let prob = |name, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(invalid(name, p, "must lie in [0, 1]"))
            }
        };
        match self {
            ModelParams::Cs {
                p_c,
                p,
                c,
                covering,
                ..
            } => {
                prob("p_c", *p_c)?;
                prob("p", *p)?;
                if *c == 0 {
                    return Err(invalid("c", c, "need at least one community"));
                }
                if *covering && *p_c == 0.0 {
                    return Err(invalid("p_c", p_c, "covering memberships need p_c > 0"));
                }
                Ok(())
            }
            ModelParams::Er { p, .. } => prob("p", *p),
            ModelParams::Gr { n, kappa } => {
                if !(*kappa > 1.0) {
                    return Err(invalid("kappa", kappa, "must exceed 1"));
                }
                models::grid_side(*n).map(|_| ())
            }
            ModelParams::Sf { n, k } => {
                if *k < 2 || k >= n {
                    return Err(invalid("k", k, "need 2 <= k < n"));
                }
                Ok(())
            }
            ModelParams::Sw { n, k, p } => {
                prob("p", *p)?;
                if *k < 2 || k % 2 != 0 || k >= n {
                    return Err(invalid("k", k, "need an even k with 2 <= k < n"));
                }
                Ok(())
            }
            ModelParams::Kg { initiator, k } => {
                initiator.validate()?;
                if *k == 0 || *k > 16 {
                    return Err(invalid("k", k, "need 1 <= k <= 16"));
                }
                Ok(())
            }
        }
    }

    /// One sample with the given seed; may be disconnected.
    pub fn generate(&self, seed: u64) -> Result<Graph, GeneratorError> {
        match self {
            &ModelParams::Cs {
                n,
                p_c,
                p,
                c,
                covering,
            } => {
                if covering {
                    gen_cs_covering(n, p_c, p, c, seed)
                } else {
                    gen_cs(n, p_c, p, c, seed)
                }
            }
            &ModelParams::Er { n, p } => gen_er(n, p, seed),
            &ModelParams::Gr { n, kappa } => gen_gr(n, kappa, seed),
            &ModelParams::Sf { n, k } => gen_sf(n, k, seed),
            &ModelParams::Sw { n, k, p } => gen_sw(n, k, p, seed),
            ModelParams::Kg { initiator, k } => gen_kg(initiator, *k, seed),
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelParams::Cs {
                n,
                p_c,
                p,
                c,
                covering,
            } => write!(f, "cs(n={n}, p_c={p_c}, p={p}, c={c}, covering={covering})"),
            ModelParams::Er { n, p } => write!(f, "er(n={n}, p={p})"),
            ModelParams::Gr { n, kappa } => write!(f, "gr(n={n}, kappa={kappa})"),
            ModelParams::Sf { n, k } => write!(f, "sf(n={n}, k={k})"),
            ModelParams::Sw { n, k, p } => write!(f, "sw(n={n}, k={k}, p={p})"),
            ModelParams::Kg { initiator, k } => write!(f, "kg({}, k={k})", initiator.name),
        }
    }
}

/// Parameters plus the seed of one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    #[serde(flatten)]
    pub params: ModelParams,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(params: ModelParams, seed: u64) -> Self {
        ModelConfig { params, seed }
    }

    pub fn model(&self) -> Model {
        self.params.model()
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }
}

/// A connected sample and the number of disconnected draws discarded first.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectedSample {
    pub graph: Graph,
    pub retries: usize,
}

/// Draws samples with seeds `mix_seed(&[cfg.seed, attempt])` until one is
/// connected. `max_retries` bounds the total number of draws.
pub fn ensure_connected(
    cfg: &ModelConfig,
    max_retries: usize,
) -> Result<ConnectedSample, GeneratorError> {
    if max_retries == 0 {
        return Err(invalid("max_retries", 0, "need at least one attempt"));
    }
    cfg.params.validate()?;
    for attempt in 0..max_retries {
        let graph = cfg.params.generate(mix_seed(&[cfg.seed, attempt as u64]))?;
        if graph.is_connected() {
            return Ok(ConnectedSample {
                graph,
                retries: attempt,
            });
        }
    }
    Err(GeneratorError::GenerationFailed {
        config: format!("{} seed={}", cfg.params, cfg.seed),
        attempts: max_retries,
    })
}

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive 64-bit mix of several words:
/// `h_0 = 0`, `h_{i+1} = splitmix64(h_i ^ splitmix64(part_i + i))`.
pub fn mix_seed(parts: &[u64]) -> u64 {
    parts.iter().enumerate().fold(0u64, |h, (i, &p)| {
        splitmix64(h ^ splitmix64(p.wrapping_add(i as u64)))
    })
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
