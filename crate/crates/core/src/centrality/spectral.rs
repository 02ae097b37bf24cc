//! Eigenvector (power iteration on `A + I`) and subgraph (`diag(e^A)`).

use super::{CentralityError, CentralityVector, Measure};
use crate::graph::Graph;
use crate::linalg::{sym_eigen, DenseMatrix};

/// Stop once successive normalized iterates differ by less than this.
pub const EIGENVECTOR_TOLERANCE: f64 = 1e-12;
pub const EIGENVECTOR_MAX_ITERATIONS: usize = 1_000_000;

/// Power iteration on `A + I` with sum normalization.
///
/// The unit diagonal shifts the spectrum to make the dominant eigenvalue
/// strictly largest in magnitude, so the iteration also converges on
/// bipartite graphs.
#[derive(Debug, Clone)]
pub struct PowerIterationState {
    pub iterate: Vec<f64>,
    pub iterations: usize,
    pub last_delta: f64,
}

impl PowerIterationState {
    /// Normalized all-ones start vector.
    pub fn start(n: usize) -> Self {
        PowerIterationState {
            iterate: vec![1.0 / n as f64; n],
            iterations: 0,
            last_delta: f64::INFINITY,
        }
    }

    /// One multiplication by `A + I` followed by renormalization.
    pub fn step(&mut self, g: &Graph, scratch: &mut Vec<f64>) {
        let x = &self.iterate;
        scratch.clear();
        scratch
            .extend((0..g.n()).map(|v| x[v] + g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>()));
        let total: f64 = scratch.iter().sum();
        let mut delta: f64 = 0.0;
        for (old, new) in self.iterate.iter_mut().zip(scratch.iter()) {
            let new = new / total;
            delta = delta.max((new - *old).abs());
            *old = new;
        }
        self.iterations += 1;
        self.last_delta = delta;
    }

    pub fn converged(&self) -> bool {
        self.last_delta < EIGENVECTOR_TOLERANCE
    }
}

/// Fixed point of `E <- (A + I) E / |(A + I) E|_1`, started from all ones.
pub fn eigenvector(g: &Graph) -> Result<CentralityVector, CentralityError> {
    let n = g.n();
    if n == 0 {
        return Ok(CentralityVector {
            measure: Measure::Eigenvector,
            values: Vec::new(),
        });
    }
    let mut state = PowerIterationState::start(n);
    let mut scratch = Vec::with_capacity(n);
    while !state.converged() {
        if state.iterations == EIGENVECTOR_MAX_ITERATIONS {
            return Err(CentralityError::NoConvergence {
                iterations: state.iterations,
                delta: state.last_delta,
            });
        }
        state.step(g, &mut scratch);
    }
    CentralityVector::checked(Measure::Eigenvector, state.iterate)
}

/// Adjacency as a dense real matrix, optionally with `shift` on the diagonal.
pub(crate) fn adjacency_matrix(g: &Graph, shift: f64) -> DenseMatrix {
    let mut a = DenseMatrix::diagonal(&vec![shift; g.n()]);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

/// Weighted closed-walk count `(e^A)_kk = sum_j V_kj^2 exp(lambda_j)`.
pub fn subgraph(g: &Graph) -> Result<CentralityVector, CentralityError> {
    let eig = sym_eigen(&adjacency_matrix(g, 0.0))?;
    let weights: Vec<f64> = eig.values.iter().map(|l| l.exp()).collect();
    let values = (0..g.n())
        .map(|k| {
            eig.vectors
                .row(k)
                .iter()
                .zip(&weights)
                .map(|(v, w)| v * v * w)
                .sum()
        })
        .collect();
    CentralityVector::checked(Measure::Subgraph, values)
}
