//! Finite simple undirected connected graphs and the edge-list format.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

pub type Vertex = usize;

/// An edge stored as `(u, v)` with `u < v`.
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    OutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: Vertex, v: Vertex },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCount { declared: usize, found: usize },
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
}

/// A connected, simple, undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Validates and builds a graph. Edges may be given in either orientation;
    /// they are stored sorted with `u < v`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        let numbered = edges.into_iter().enumerate().map(|(i, e)| (i + 1, e));
        Self::build(n, numbered)
    }

    fn build(n: usize, edges: impl IntoIterator<Item = (usize, Edge)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        for (line, (a, b)) in edges {
            for vertex in [a, b] {
                if vertex >= n {
                    return Err(GraphError::OutOfRange { line, vertex, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { line, vertex: a });
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge {
                    line,
                    u: e.0,
                    v: e.1,
                });
            }
        }
        let edges: Vec<Edge> = seen.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph { n, edges, adj };
        let components = g.component_count();
        if components != 1 {
            return Err(GraphError::Disconnected { components });
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("complete graph is valid")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is valid")
    }

    /// Hub `0` joined to the rim cycle `1..=rim`.
    pub fn wheel(rim: usize) -> Self {
        assert!(rim >= 3);
        let spokes = (1..=rim).map(|v| (0, v));
        let rim_edges = (1..=rim).map(|v| (v, v % rim + 1));
        Self::from_edges(rim + 1, spokes.chain(rim_edges)).expect("wheel is valid")
    }

    /// `K_{r,s}` with one part `0..r` and the other `r..r+s`.
    pub fn complete_bipartite(r: usize, s: usize) -> Self {
        let edges = (0..r).flat_map(|u| (r..r + s).map(move |v| (u, v)));
        Self::from_edges(r + s, edges).expect("complete bipartite graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_tree(&self) -> bool {
        self.m() + 1 == self.n
    }

    fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    /// BFS parent pointers from `root` (the root points to itself).
    pub(crate) fn bfs_parents(&self, root: Vertex) -> Vec<Vertex> {
        let mut parent = vec![usize::MAX; self.n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Shortest path from `a` to `b`, both ends included.
    pub fn path_between(&self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        let parent = self.bfs_parents(b);
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = parent[cur];
            path.push(cur);
        }
        path
    }

    /// Serializes in the edge-list format accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(GraphError::Malformed {
        line: 0,
        reason: "missing header".into(),
    })?;
    let [n, m] = parse_pair(hline, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let [u, v] = parse_pair(line, text)?;
        edges.push((line, (u, v)));
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCount {
            declared: m,
            found: edges.len(),
        });
    }
    Graph::build(n, edges)
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let malformed = |reason: &str| GraphError::Malformed {
        line,
        reason: reason.to_string(),
    };
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        it.next()
            .ok_or_else(|| malformed("expected two integers"))?
            .parse()
            .map_err(|_| malformed("not a non-negative integer"))
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(malformed("trailing tokens"));
    }
    Ok(pair)
}

/// A proper 2-colouring, class `0` or `1` per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoColouring(Vec<u8>);

impl TwoColouring {
    pub fn class_of(&self, v: Vertex) -> u8 {
        self.0[v]
    }

    pub fn classes(&self) -> &[u8] {
        &self.0
    }

    pub fn swapped(&self) -> TwoColouring {
        TwoColouring(self.0.iter().map(|c| 1 - c).collect())
    }

    /// Vertices in class `c`, ascending.
    pub fn class(&self, c: u8) -> Vec<Vertex> {
        (0..self.0.len()).filter(|&v| self.0[v] == c).collect()
    }
}

/// The two 2-colourings `(phi_0, phi_1)` of a bipartite graph, with
/// `phi_0` giving vertex 0 class 0. `None` when the graph has an odd cycle.
pub fn two_colourings(g: &Graph) -> Option<(TwoColouring, TwoColouring)> {
    let mut class = vec![u8::MAX; g.n()];
    class[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbours(u) {
            if class[w] == u8::MAX {
                class[w] = 1 - class[u];
                queue.push_back(w);
            } else if class[w] == class[u] {
                return None;
            }
        }
    }
    let phi0 = TwoColouring(class);
    let phi1 = phi0.swapped();
    Some((phi0, phi1))
}

pub fn is_bipartite(g: &Graph) -> bool {
    two_colourings(g).is_some()
}
