//! Exhaustive enumeration of non-isomorphic graphs on up to seven vertices.
//!
//! Every graph on `n` vertices arises from a graph on `n - 1` vertices by
//! adding vertex `n - 1` with some neighbor set, so extending each class
//! representative of size `n - 1` by all `2^(n-1)` neighbor sets and
//! deduplicating by canonical code visits every class on `n` vertices.
//! The canonical code is the minimum upper-triangle bit string over all
//! `n!` relabelings.

use std::collections::BTreeMap;

use super::GeneratorError;
use crate::graph::Graph;

pub const MAX_ENUMERATION_N: usize = 7;

/// Position of pair `(i, j)`, `i < j`, in column order
/// `(0,1), (0,2), (1,2), (0,3), ...`.
#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Bit string of the upper triangle, first pair in the most significant
/// position, so numeric order is lexicographic order.
fn code_under(edges: &[(usize, usize)], perm: &[usize], pairs: usize) -> u32 {
    edges.iter().fold(0u32, |code, &(u, v)| {
        let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
        code | 1 << (pairs - 1 - pair_index(a, b))
    })
}

fn canonical_with(g: &Graph, perms: &[Vec<usize>]) -> (u32, usize) {
    let n = g.n();
    let pairs = n * n.saturating_sub(1) / 2;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    perms
        .iter()
        .enumerate()
        .map(|(idx, perm)| (code_under(&edges, perm, pairs), idx))
        .min()
        .unwrap_or((0, 0))
}

fn graph_from_code(n: usize, code: u32) -> Graph {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if code >> (pairs - 1 - pair_index(i, j)) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("code describes a simple graph")
}

fn check_size(n: usize) -> Result<(), GeneratorError> {
    if n > MAX_ENUMERATION_N {
        return Err(GeneratorError::UnsupportedSize {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    Ok(())
}

/// Minimum upper-triangle code over all relabelings; equal iff isomorphic.
pub fn canonical_code(g: &Graph) -> Result<u32, GeneratorError> {
    check_size(g.n())?;
    Ok(canonical_with(g, &permutations(g.n())).0)
}

/// The relabeling of `g` that attains its canonical code.
pub fn canonical_form(g: &Graph) -> Result<Graph, GeneratorError> {
    let code = canonical_code(g)?;
    Ok(graph_from_code(g.n(), code))
}

/// One canonical representative per isomorphism class of graphs on `n`
/// vertices (connected or not), ordered by canonical code.
pub fn enumerate_all_nonisomorphic(n: usize) -> Result<Vec<Graph>, GeneratorError> {
    check_size(n)?;
    let mut classes: Vec<Graph> = vec![Graph::empty(0)];
    for size in 1..=n {
        let perms = permutations(size);
        let mut found: BTreeMap<u32, ()> = BTreeMap::new();
        for base in &classes {
            let base_edges: Vec<(usize, usize)> = base.edges().collect();
            for mask in 0u32..(1 << (size - 1)) {
                let new_vertex = size - 1;
                let edges = base_edges.iter().copied().chain(
                    (0..new_vertex)
                        .filter(|&v| mask >> v & 1 == 1)
                        .map(|v| (v, new_vertex)),
                );
                let g = Graph::from_edges(size, edges).expect("extension stays simple");
                found.insert(canonical_with(&g, &perms).0, ());
            }
        }
        classes = found
            .keys()
            .map(|&code| graph_from_code(size, code))
            .collect();
    }
    Ok(classes)
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, `1 <= n <= 7`.
pub fn enumerate_connected_nonisomorphic(n: usize) -> Result<Vec<Graph>, GeneratorError> {
    if n == 0 {
        return Err(super::invalid("n", n, "need at least one vertex"));
    }
    Ok(enumerate_all_nonisomorphic(n)?
        .into_iter()
        .filter(Graph::is_connected)
        .collect())
}
