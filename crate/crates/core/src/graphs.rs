//! Undirected simple graphs with 1-based vertex labels.
//!
//! Every constructor here accepts arbitrary sizes; power-of-two restrictions
//! live in the theorem-level modules. Adjacency is kept as sorted neighbor
//! lists so iteration order is deterministic everywhere.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected edge `{u, v}` stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop {a}-{a}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    // adj[v - 1] = sorted neighbors of v
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on vertices `1..=vertex_count`. Duplicate edges are
    /// rejected, as are self-loops and out-of-range endpoints.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::InvalidParameter("a graph needs at least one vertex".into()));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        for (a, b) in edges {
            for x in [a, b] {
                if x == 0 || x > vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        count: vertex_count,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
            }
            adj[a - 1].push(b);
            adj[b - 1].push(a);
        }
        let mut edge_count = 0;
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return Err(Error::InvalidParameter(format!("duplicate edge at vertex {}", i + 1)));
            }
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.adj.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= self.adj.len()
    }

    fn check(&self, v: usize) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.adj.len(),
            })
        }
    }

    /// Sorted neighbors of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.contains(a) && self.contains(b) && self.adj[a - 1].binary_search(&b).is_ok()
    }

    /// All edges in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            let u = i + 1;
            list.iter().filter(move |&&v| v > u).map(move |&v| Edge { u, v })
        })
    }

    /// Returns the common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj[0].len();
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Renames vertices: vertex `v` becomes `new_label[v - 1]`, which must be
    /// a permutation of `1..=n`.
    pub fn relabel(&self, new_label: &[usize]) -> Result<Graph> {
        let n = self.vertex_count();
        if new_label.len() != n {
            return Err(Error::InvalidParameter(format!(
                "relabeling has {} entries for {n} vertices",
                new_label.len()
            )));
        }
        let mut seen = vec![false; n];
        for &l in new_label {
            if l == 0 || l > n || std::mem::replace(&mut seen[l - 1], true) {
                return Err(Error::InvalidParameter("relabeling is not a permutation".into()));
            }
        }
        Graph::from_edges(n, self.edges().map(|e| (new_label[e.u - 1], new_label[e.v - 1])))
    }

    /// Edge-list text: a `# vertices N` header, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# vertices {}\n", self.vertex_count());
        for e in self.edges() {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let n = header
            .strip_prefix("# vertices")
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return Err(Error::Parse(format!("bad edge line `{line}`"))),
            }
        }
        Graph::from_edges(n, edges)
    }
}

/// Path `P_n` on `1..=n`.
pub fn make_path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("path needs at least one vertex".into()));
    }
    Graph::from_edges(n, (1..n).map(|i| (i, i + 1)))
}

/// Cycle `C_n` on `1..=n` with the wrap edge `{1, n}`.
pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    Graph::from_edges(n, (1..n).map(|i| (i, i + 1)).chain(std::iter::once((1, n))))
}

/// Complete multipartite graph with parts numbered consecutively: part 1 holds
/// labels `1..=n_1`, part 2 the next `n_2`, and so on.
pub fn make_complete_multipartite(part_sizes: &[usize]) -> Result<Graph> {
    if part_sizes.len() < 2 {
        return Err(Error::InvalidParameter(
            "complete multipartite graph needs at least 2 parts".into(),
        ));
    }
    if part_sizes.contains(&0) {
        return Err(Error::InvalidParameter("parts must be nonempty".into()));
    }
    let n: usize = part_sizes.iter().sum();
    let mut part = Vec::with_capacity(n);
    for (i, &s) in part_sizes.iter().enumerate() {
        part.extend(std::iter::repeat_n(i, s));
    }
    let edges = (1..=n).flat_map(|u| {
        let part = &part;
        (u + 1..=n)
            .filter(move |&v| part[u - 1] != part[v - 1])
            .map(move |v| (u, v))
    });
    Graph::from_edges(n, edges.collect::<Vec<_>>())
}

/// Cartesian product of the factors with mixed-radix vertex ids: the tuple
/// `(x_1, .., x_n)` (0-based positions) gets id `1 + x_1 + n_1 x_2 + n_1 n_2 x_3 + ...`,
/// so the first factor varies fastest.
pub fn cartesian_product(factors: &[Graph]) -> Result<Graph> {
    if factors.is_empty() {
        return Err(Error::InvalidParameter("cartesian product of no factors".into()));
    }
    let total = factors
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(g.vertex_count()))
        .ok_or(Error::Overflow("product vertex count"))?;
    let mut edges = Vec::new();
    let mut stride = 1;
    for g in factors {
        let len = g.vertex_count();
        for index in 0..total {
            let x = (index / stride) % len;
            for &y in g.neighbors(x + 1) {
                let y = y - 1;
                if y > x {
                    edges.push((index + 1, index + (y - x) * stride + 1));
                }
            }
        }
        stride *= len;
    }
    Graph::from_edges(total, edges)
}

/// Hop distances from `source`; entry `v - 1` holds `dist(source, v)`.
pub fn bfs_distance(g: &Graph, source: usize) -> Result<Vec<usize>> {
    g.check(source)?;
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[source - 1] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u - 1];
        for &w in g.neighbors(u) {
            if dist[w - 1] == usize::MAX {
                dist[w - 1] = du + 1;
                queue.push_back(w);
            }
        }
    }
    if let Some(i) = dist.iter().position(|&d| d == usize::MAX) {
        return Err(Error::Disconnected(i + 1));
    }
    Ok(dist)
}

/// Full distance matrix, `[u - 1][v - 1]`.
pub fn all_pairs_distances(g: &Graph) -> Result<Vec<Vec<usize>>> {
    g.vertices().map(|s| bfs_distance(g, s)).collect()
}
