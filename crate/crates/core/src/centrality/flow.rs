//! Measures built on Laplacian inverses: information and walk (current-flow)
//! betweenness.

use super::{CentralityError, CentralityVector, Measure, ROW_SUM_TOLERANCE};
use crate::graph::Graph;
use crate::linalg::{invert, DenseMatrix};

/// `B = (D - A + U)^-1` together with its trace and common row sum.
#[derive(Debug, Clone)]
pub struct InformationIntermediate {
    pub b: DenseMatrix,
    pub trace: f64,
    /// Row sum of row 0; every row of `B` sums to the same value.
    pub row_sum: f64,
}

impl InformationIntermediate {
    pub fn new(g: &Graph) -> Result<Self, CentralityError> {
        let n = g.n();
        // D - A + U
        let mut m = DenseMatrix::from_fn(n, n, |_, _| 1.0);
        for v in 0..n {
            m[(v, v)] += g.degree(v) as f64;
        }
        for (u, v) in g.edges() {
            m[(u, v)] -= 1.0;
            m[(v, u)] -= 1.0;
        }
        let b = invert(&m)?;
        let trace = (0..n).map(|j| b[(j, j)]).sum();
        let row_sum = b.row(0).iter().sum();
        Ok(InformationIntermediate { b, trace, row_sum })
    }

    /// Largest `|sum(row i) - sum(row 0)|`.
    pub fn max_row_sum_deviation(&self) -> f64 {
        (0..self.b.rows())
            .map(|i| (self.b.row(i).iter().sum::<f64>() - self.row_sum).abs())
            .fold(0.0, f64::max)
    }
}

/// `1 / (b_kk + (T - 2R) / n)`.
pub fn information(g: &Graph) -> Result<CentralityVector, CentralityError> {
    if !g.is_connected() {
        return Err(CentralityError::Disconnected {
            measure: Measure::Information,
        });
    }
    let inter = InformationIntermediate::new(g)?;
    let deviation = inter.max_row_sum_deviation();
    if deviation > ROW_SUM_TOLERANCE {
        return Err(CentralityError::InconsistentRowSums { deviation });
    }
    let n = g.n() as f64;
    let offset = (inter.trace - 2.0 * inter.row_sum) / n;
    let values = (0..g.n())
        .map(|k| 1.0 / (inter.b[(k, k)] + offset))
        .collect();
    CentralityVector::checked(Measure::Information, values)
}

/// Inverse of the Laplacian with one row and column removed, padded back
/// with zeros at the removed index.
#[derive(Debug, Clone)]
pub struct FlowMatrix {
    pub t: DenseMatrix,
    pub removed: usize,
}

impl FlowMatrix {
    /// Grounds vertex 0.
    pub fn new(g: &Graph) -> Result<Self, CentralityError> {
        Self::grounded_at(g, 0)
    }

    pub fn grounded_at(g: &Graph, removed: usize) -> Result<Self, CentralityError> {
        let n = g.n();
        assert!(removed < n, "grounded vertex out of range");
        let index = |v: usize| if v < removed { v } else { v - 1 };
        let mut reduced = DenseMatrix::zeros(n - 1, n - 1);
        for v in (0..n).filter(|&v| v != removed) {
            reduced[(index(v), index(v))] = g.degree(v) as f64;
            for &u in g.neighbors(v) {
                if u != removed {
                    reduced[(index(v), index(u))] = -1.0;
                }
            }
        }
        let inv = invert(&reduced)?;
        let t = DenseMatrix::from_fn(n, n, |i, j| {
            if i == removed || j == removed {
                0.0
            } else {
                inv[(index(i), index(j))]
            }
        });
        Ok(FlowMatrix { t, removed })
    }
}

/// Random-walk betweenness.
///
/// For a unit current from `i` to `j`, the potential difference across edge
/// `(k, t)` is `D_kt[i] - D_kt[j]` with `D_kt[x] = T[k][x] - T[t][x]`, so the
/// per-edge sum over all pairs `i < j` of `|D[i] - D[j]|` reduces to a sorted
/// weighted sum. Pairs with `k` as an endpoint are subtracted out and count 1.
pub fn walk_betweenness(g: &Graph) -> Result<CentralityVector, CentralityError> {
    let n = g.n();
    if n < 2 {
        return Err(CentralityError::TooSmall {
            measure: Measure::WalkBetweenness,
            n,
            min: 2,
        });
    }
    if !g.is_connected() {
        return Err(CentralityError::Disconnected {
            measure: Measure::WalkBetweenness,
        });
    }
    let flow = FlowMatrix::new(g)?;
    let t = &flow.t;

    let mut values = vec![0.0; n];
    let mut diff = vec![0.0; n];
    let mut sorted = vec![0.0; n];
    let mut prefix = vec![0.0; n + 1];
    for (u, v) in g.edges() {
        for ((d, a), b) in diff.iter_mut().zip(t.row(u)).zip(t.row(v)) {
            *d = a - b;
        }
        sorted.copy_from_slice(&diff);
        sorted.sort_unstable_by(f64::total_cmp);
        for (r, x) in sorted.iter().enumerate() {
            prefix[r + 1] = prefix[r] + x;
        }
        let total = prefix[n];
        let pair_sum: f64 = sorted
            .iter()
            .enumerate()
            .map(|(r, x)| x * (2.0 * r as f64 - (n - 1) as f64))
            .sum();
        // sum_j |x - sorted[j]|
        let abs_dev = |x: f64| {
            let below = sorted.partition_point(|&s| s < x);
            let lo = prefix[below];
            x * below as f64 - lo + (total - lo) - x * (n - below) as f64
        };
        values[u] += 0.5 * (pair_sum - abs_dev(diff[u]));
        values[v] += 0.5 * (pair_sum - abs_dev(diff[v]));
    }
    let endpoint_pairs = (n - 1) as f64;
    for x in &mut values {
        *x += endpoint_pairs;
    }
    CentralityVector::checked(Measure::WalkBetweenness, values)
}
