//! Degree and the shortest-path measures.

use super::{CentralityContext, CentralityError, CentralityVector, Measure};
use crate::graph::{GeodesicData, Graph};

pub fn degree(g: &Graph) -> CentralityVector {
    CentralityVector {
        measure: Measure::Degree,
        values: g.degrees().into_iter().map(|d| d as f64).collect(),
    }
}

/// `1 / sum_i d(i, k)`.
pub fn closeness(g: &Graph) -> Result<CentralityVector, CentralityError> {
    CentralityContext::new(g).compute(Measure::Closeness)
}

/// `1 / max_i d(i, k)`; needs `n >= 2`.
pub fn eccentricity(g: &Graph) -> Result<CentralityVector, CentralityError> {
    CentralityContext::new(g).compute(Measure::Eccentricity)
}

/// Sum over unordered pairs `{i, j}` not containing `k` of the fraction of
/// `i`-`j` geodesics through `k`.
pub fn betweenness(g: &Graph) -> Result<CentralityVector, CentralityError> {
    CentralityContext::new(g).compute(Measure::Betweenness)
}

pub(super) fn closeness_from(geo: &GeodesicData) -> Result<CentralityVector, CentralityError> {
    let values = (0..geo.n())
        .map(|k| {
            let total: u64 = geo.dist_row(k).iter().map(|&d| d as u64).sum();
            1.0 / total as f64
        })
        .collect();
    CentralityVector::checked(Measure::Closeness, values)
}

pub(super) fn eccentricity_from(geo: &GeodesicData) -> Result<CentralityVector, CentralityError> {
    let n = geo.n();
    if n < 2 {
        return Err(CentralityError::TooSmall {
            measure: Measure::Eccentricity,
            n,
            min: 2,
        });
    }
    let values = (0..n)
        .map(|k| {
            let ecc = geo.dist_row(k).iter().copied().max().unwrap_or(0);
            1.0 / ecc as f64
        })
        .collect();
    CentralityVector::checked(Measure::Eccentricity, values)
}

/// Brandes dependency accumulation over the precomputed geodesic counts.
pub(super) fn betweenness_from(g: &Graph, geo: &GeodesicData) -> CentralityVector {
    let n = g.n();
    let mut values = vec![0.0; n];
    let mut delta = vec![0.0; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for s in 0..n {
        let dist = geo.dist_row(s);
        order.clear();
        order.extend(0..n);
        order.sort_unstable_by_key(|&v| std::cmp::Reverse(dist[v]));
        delta.iter_mut().for_each(|d| *d = 0.0);
        for &w in &order {
            if w == s {
                continue;
            }
            let coeff = (1.0 + delta[w]) / geo.sigma(s, w);
            for &v in g.neighbors(w) {
                if dist[v] + 1 == dist[w] {
                    delta[v] += geo.sigma(s, v) * coeff;
                }
            }
            values[w] += delta[w];
        }
    }
    // every unordered pair was accumulated from both endpoints
    for v in &mut values {
        *v /= 2.0;
    }
    CentralityVector {
        measure: Measure::Betweenness,
        values,
    }
}
