//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::sync::OnceLock;

use netrank_core::generators::enumerate_connected_nonisomorphic;
use netrank_core::linalg::{solve_linear, sym_eigen};
use netrank_core::{DenseMatrix, Graph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Connected non-isomorphic graphs on 6 and 7 vertices.
pub fn corpus() -> &'static [Graph] {
    static CORPUS: OnceLock<Vec<Graph>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut graphs = enumerate_connected_nonisomorphic(6).unwrap();
        graphs.extend(enumerate_connected_nonisomorphic(7).unwrap());
        graphs
    })
}

/// Unweighted distances by repeated relaxation (Floyd-Warshall).
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for &j in g.neighbors(i) {
            d[i][j] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every shortest path from `s` to `t`, listed explicitly.
pub fn all_geodesics(g: &Graph, d: &[Vec<usize>], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(
        g: &Graph,
        d: &[Vec<usize>],
        t: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let here = *path.last().unwrap();
        if here == t {
            out.push(path.clone());
            return;
        }
        for &next in g.neighbors(here) {
            if d[next][t] + 1 == d[here][t] {
                path.push(next);
                walk(g, d, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, d, t, &mut vec![s], &mut out);
    out
}

/// The double sum over pairs of the fraction of geodesics having `k` as an
/// interior vertex.
pub fn brute_force_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let d = distances(g);
    let mut values = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            let paths = all_geodesics(g, &d, i, j);
            let total = paths.len() as f64;
            for (k, value) in values.iter_mut().enumerate() {
                if k == i || k == j {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&k)).count() as f64;
                *value += through / total;
            }
        }
    }
    values
}

/// Current-flow betweenness from one potential solve per pair: unit current
/// in at `s`, out at `t`, ground at the last vertex.
pub fn current_flow_by_pairs(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let ground = n - 1;
    let reduced = DenseMatrix::from_fn(n - 1, n - 1, |i, j| {
        if i == j {
            g.degree(i) as f64
        } else if g.has_edge(i, j) {
            -1.0
        } else {
            0.0
        }
    });
    let mut values = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let rhs = DenseMatrix::from_fn(n - 1, 1, |i, _| {
                (i == s) as i32 as f64 - (i == t) as i32 as f64
            });
            let x = solve_linear(&reduced, &rhs).unwrap();
            let potential = |v: usize| if v == ground { 0.0 } else { x[(v, 0)] };
            for (k, value) in values.iter_mut().enumerate() {
                if k == s || k == t {
                    *value += 1.0;
                    continue;
                }
                let through: f64 = g
                    .neighbors(k)
                    .iter()
                    .map(|&u| (potential(k) - potential(u)).abs())
                    .sum();
                *value += through / 2.0;
            }
        }
    }
    values
}

pub fn adjacency(g: &Graph, diagonal: f64) -> DenseMatrix {
    DenseMatrix::from_fn(g.n(), g.n(), |i, j| {
        if i == j {
            diagonal
        } else if g.has_edge(i, j) {
            1.0
        } else {
            0.0
        }
    })
}

/// L1-normalized eigenvector of the largest eigenvalue of `A + I`.
pub fn dominant_eigenvector(g: &Graph) -> Vec<f64> {
    let eig = sym_eigen(&adjacency(g, 1.0)).unwrap();
    let v = eig.vectors.column(g.n() - 1);
    let total: f64 = v.iter().map(|x| x.abs()).sum();
    v.iter().map(|x| x.abs() / total).collect()
}

/// Uniform random labeled tree from a random Pruefer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    assert!(n >= 2);
    if n == 2 {
        return Graph::path(2);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges).unwrap()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected<R: Rng>(n: usize, extra: f64, rng: &mut R) -> Graph {
    let tree = random_tree(n.max(2), rng);
    let mut edges: Vec<(usize, usize)> = tree.edges().collect();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen::<f64>() < extra {
                edges.push((u, v));
            }
        }
    }
    edges.shuffle(rng);
    Graph::from_edges(n.max(2), edges).unwrap()
}
