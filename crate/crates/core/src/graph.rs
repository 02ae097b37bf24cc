//! Simple undirected graphs on dense vertex labels `0..n`.
//!
//! A [`Graph`] is immutable once built. Generators assemble graphs through a
//! [`GraphBuilder`], which keeps a dense adjacency bitmap so duplicate checks
//! and rewiring stay O(1).

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("malformed edge `{text}`")]
    Malformed { text: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
}

impl GraphError {
    fn at_line(self, line: usize) -> Self {
        GraphError::AtLine {
            line,
            source: Box::new(self),
        }
    }
}

/// Simple undirected unweighted graph.
///
/// Neighbor lists are kept sorted, so two graphs with the same edge set
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut builder = GraphBuilder::new(n);
        for (u, v) in edges {
            builder.try_add_edge(u, v)?;
        }
        Ok(builder.build())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    /// Star with center 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (0, v))).expect("star is simple")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        Self::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity")
    }

    /// True iff a BFS from vertex 0 reaches every vertex. The empty graph is
    /// treated as disconnected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }

    /// Parses a line-oriented edge list.
    ///
    /// Blank lines and `#` comments are skipped. A `# n=<count>` header on the
    /// first line fixes the vertex count, so isolated vertices survive a round
    /// trip; `n_hint` overrides it. Without either, `n` is one more than the
    /// largest index seen.
    pub fn from_edge_list(text: &str, n_hint: Option<usize>) -> Result<Self, GraphError> {
        let mut header_n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if idx == 0 {
                    if let Some(count) = comment.trim().strip_prefix("n=") {
                        let count = count.trim().parse::<usize>().map_err(|_| {
                            GraphError::Malformed {
                                text: line.to_string(),
                            }
                            .at_line(line_no)
                        })?;
                        header_n = Some(count);
                    }
                }
                continue;
            }
            let mut tokens = line.split_whitespace();
            let parsed = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(a), Some(b), None) => a.parse::<usize>().ok().zip(b.parse::<usize>().ok()),
                _ => None,
            };
            let (u, v) = parsed.ok_or_else(|| {
                GraphError::Malformed {
                    text: line.to_string(),
                }
                .at_line(line_no)
            })?;
            edges.push((line_no, u, v));
        }

        let n = n_hint.or(header_n).unwrap_or_else(|| {
            edges
                .iter()
                .map(|&(_, u, v)| u.max(v) + 1)
                .max()
                .unwrap_or(0)
        });
        let mut builder = GraphBuilder::new(n);
        for (line_no, u, v) in edges {
            builder.try_add_edge(u, v).map_err(|e| e.at_line(line_no))?;
        }
        Ok(builder.build())
    }

    /// Canonical edge-list text: `# n=<count>` header, then one `u v` line per
    /// edge with `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(8 * self.m + 16);
        let _ = writeln!(out, "# n={}", self.n());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Mutable graph assembly with a dense adjacency bitmap.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    bits: Vec<bool>,
    degrees: Vec<usize>,
    m: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            bits: vec![false; n * n],
            degrees: vec![0; n],
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.n + v]
    }

    /// Adds `u-v`, failing on self-loops, duplicates or bad indices.
    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for vertex in [u, v] {
            if vertex >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge {
                u: u.min(v),
                v: u.max(v),
            });
        }
        self.set(u, v, true);
        self.m += 1;
        Ok(())
    }

    /// Adds `u-v` if it is a new non-loop edge; returns whether it was added.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.has_edge(u, v) {
            return false;
        }
        self.set(u, v, true);
        self.m += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || !self.has_edge(u, v) {
            return false;
        }
        self.set(u, v, false);
        self.m -= 1;
        true
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        self.bits[u * self.n + v] = on;
        self.bits[v * self.n + u] = on;
        if on {
            self.degrees[u] += 1;
            self.degrees[v] += 1;
        } else {
            self.degrees[u] -= 1;
            self.degrees[v] -= 1;
        }
    }

    pub fn build(self) -> Graph {
        let n = self.n;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                let row = &self.bits[u * n..(u + 1) * n];
                row.iter()
                    .enumerate()
                    .filter_map(|(v, &on)| on.then_some(v))
                    .collect()
            })
            .collect();
        Graph { adj, m: self.m }
    }
}

/// All-pairs hop distances and geodesic counts.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicData {
    n: usize,
    dist: Vec<u32>,
    sigma: Vec<f64>,
}

impl GeodesicData {
    /// Distance marker for vertex pairs in different components.
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.n + j]
    }

    /// Number of distinct shortest `i`-`j` paths (0 if unreachable).
    #[inline]
    pub fn sigma(&self, i: usize, j: usize) -> f64 {
        self.sigma[i * self.n + j]
    }

    pub fn dist_row(&self, i: usize) -> &[u32] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn has_unreachable(&self) -> bool {
        self.dist.contains(&Self::UNREACHABLE)
    }
}

/// One BFS per source; counts shortest paths along the way.
pub fn bfs_all_pairs(g: &Graph) -> GeodesicData {
    let n = g.n();
    let mut dist = vec![GeodesicData::UNREACHABLE; n * n];
    let mut sigma = vec![0.0; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let d = &mut dist[s * n..(s + 1) * n];
        let sg = &mut sigma[s * n..(s + 1) * n];
        d[s] = 0;
        sg[s] = 1.0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if d[w] == GeodesicData::UNREACHABLE {
                    d[w] = d[u] + 1;
                    queue.push_back(w);
                }
                if d[w] == d[u] + 1 {
                    sg[w] += sg[u];
                }
            }
        }
    }
    GeodesicData { n, dist, sigma }
}
