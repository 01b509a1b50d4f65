//! Finite simple graphs with stable vertex indices and named landmarks.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense vertex index.
pub type Vertex = usize;

/// Membership set over `0..len` with bitset storage.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for v in 0..len {
            s.insert(v);
        }
        s
    }

    pub fn from_iter_with_len(len: usize, items: impl IntoIterator<Item = Vertex>) -> Self {
        let mut s = Self::new(len);
        for v in items {
            s.insert(v);
        }
        s
    }

    /// Universe size.
    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        v < self.len && self.words[v >> 6] & (1 << (v & 63)) != 0
    }

    #[inline]
    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(v < self.len, "vertex {v} out of range 0..{}", self.len);
        let w = &mut self.words[v >> 6];
        let bit = 1u64 << (v & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: Vertex) -> bool {
        if v >= self.len {
            return false;
        }
        let w = &mut self.words[v >> 6];
        let bit = 1u64 << (v & 63);
        let present = *w & bit != 0;
        *w &= !bit;
        present
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

/// A finite simple graph, directed or undirected.
///
/// Adjacency lists are kept sorted so that every traversal is deterministic.
/// For directed graphs `neighbors` returns out-neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    adj: Vec<Vec<Vertex>>,
    labels: BTreeMap<String, Vertex>,
}

impl Graph {
    /// Validating constructor. Undirected edges may be given in either orientation,
    /// but each unordered pair at most once.
    pub fn build(
        directed: bool,
        n: usize,
        edges: &[(Vertex, Vertex)],
        labels: &[(String, Vertex)],
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = rustc_hash::FxHashSet::default();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u].push(v);
            if !directed {
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut map = BTreeMap::new();
        for (name, v) in labels {
            if *v >= n {
                return Err(GraphError::LabelOutOfRange {
                    name: name.clone(),
                    vertex: *v,
                    n,
                });
            }
            if map.insert(name.clone(), *v).is_some() {
                return Err(GraphError::DuplicateLabel(name.clone()));
            }
        }
        Ok(Self {
            directed,
            adj,
            labels: map,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges (unordered pairs when undirected).
    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.adj.iter().map(Vec::len).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edge list; undirected edges reported once with `u < v`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if self.directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn labels(&self) -> &BTreeMap<String, Vertex> {
        &self.labels
    }

    pub fn label(&self, name: &str) -> Option<Vertex> {
        self.labels.get(name).copied()
    }

    /// Label lookup that reports the missing name.
    pub fn landmark(&self, name: &str) -> Result<Vertex, GraphError> {
        self.label(name)
            .ok_or_else(|| GraphError::MissingLabel(name.to_string()))
    }

    /// Same vertices and edges with all directions dropped.
    pub fn to_undirected(&self) -> Result<Graph, GraphError> {
        let mut edges: Vec<(Vertex, Vertex)> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let labels: Vec<_> = self.labels.iter().map(|(k, &v)| (k.clone(), v)).collect();
        Graph::build(false, self.vertex_count(), &edges, &labels)
    }

    /// Induced subgraph on the vertices not in `removed`, with reindexing.
    /// Returns the new graph and the old-to-new index map.
    pub fn without_vertices(&self, removed: &VertexSet) -> (Graph, Vec<Option<Vertex>>) {
        let mut map = vec![None; self.vertex_count()];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if !removed.contains(v) {
                *slot = Some(next);
                next += 1;
            }
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter_map(|(u, v)| Some((map[u]?, map[v]?)))
            .collect();
        let labels: Vec<_> = self
            .labels
            .iter()
            .filter_map(|(k, &v)| Some((k.clone(), map[v]?)))
            .collect();
        let g = Graph::build(self.directed, next, &edges, &labels)
            .expect("induced subgraph of a valid graph is valid");
        (g, map)
    }

    /// Breadth-first distances respecting direction; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: Vertex) -> Result<Vec<Option<usize>>, GraphError> {
        self.bfs_avoiding(source, None)
    }

    /// BFS that never enters vertices of `blocked` (the source is always allowed).
    pub fn bfs_avoiding(
        &self,
        source: Vertex,
        blocked: Option<&VertexSet>,
    ) -> Result<Vec<Option<usize>>, GraphError> {
        let n = self.vertex_count();
        if source >= n {
            return Err(GraphError::VertexOutOfRange { vertex: source, n });
        }
        let mut dist = vec![None; n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() && !blocked.is_some_and(|b| b.contains(v)) {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Whether the underlying undirected graph is connected (empty and single-vertex graphs count).
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let und;
        let g = if self.directed {
            und = self.to_undirected().expect("valid");
            &und
        } else {
            self
        };
        g.bfs_distances(0)
            .expect("vertex 0 exists")
            .iter()
            .all(Option::is_some)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            directed: self.directed,
            n: self.vertex_count(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let edges: Vec<_> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        let labels: Vec<_> = json.labels.iter().map(|(k, &v)| (k.clone(), v)).collect();
        Graph::build(json.directed, json.n, &edges, &labels)
    }

    /// Graphviz rendering; labeled vertices carry their landmark names.
    pub fn to_dot(&self) -> String {
        let mut names: Vec<Vec<&str>> = vec![Vec::new(); self.vertex_count()];
        for (name, &v) in &self.labels {
            names[v].push(name);
        }
        let (kw, arrow) = if self.directed {
            ("digraph", "->")
        } else {
            ("graph", "--")
        };
        let mut out = format!("{kw} tron {{\n");
        for (v, ns) in names.iter().enumerate() {
            if ns.is_empty() {
                let _ = writeln!(out, "  {v};");
            } else {
                let _ = writeln!(out, "  {v} [label=\"{v}\\n{}\"];", ns.join(","));
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} {arrow} {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Serialized form: `{"directed": bool, "n": int, "edges": [[u,v],...], "labels": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub directed: bool,
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vertex>,
}

/// Incremental builder used by the generators. Edges are validated on `finish`.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    directed: bool,
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    labels: Vec<(String, Vertex)>,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            ..Self::default()
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    pub fn add_vertices(&mut self, count: usize) -> Vec<Vertex> {
        (0..count).map(|_| self.add_vertex()).collect()
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }

    /// Adds the edge unless the same pair is already present.
    pub fn add_edge_once(&mut self, u: Vertex, v: Vertex) {
        let same = |&(a, b): &(Vertex, Vertex)| {
            (a, b) == (u, v) || (!self.directed && (a, b) == (v, u))
        };
        if !self.edges.iter().any(same) {
            self.edges.push((u, v));
        }
    }

    /// Fresh path `from -> p_1 -> ... -> p_{len-1} -> to` of `len` edges. Returns the interior.
    pub fn add_path_between(&mut self, from: Vertex, to: Vertex, len: usize) -> Vec<Vertex> {
        assert!(len >= 1, "a path needs at least one edge");
        let interior = self.add_vertices(len - 1);
        let mut prev = from;
        for &p in &interior {
            self.add_edge(prev, p);
            prev = p;
        }
        self.add_edge(prev, to);
        interior
    }

    /// Fresh pendant path of `len` edges hanging off `from` (away from it when directed).
    pub fn add_tail(&mut self, from: Vertex, len: usize) -> Vec<Vertex> {
        let fresh = self.add_vertices(len);
        let mut prev = from;
        for &p in &fresh {
            self.add_edge(prev, p);
            prev = p;
        }
        fresh
    }

    pub fn label(&mut self, name: impl Into<String>, v: Vertex) {
        self.labels.push((name.into(), v));
    }

    /// Copies `g` in with its labels prefixed; returns the index offset.
    pub fn embed(&mut self, g: &Graph, label_prefix: Option<&str>) -> Vertex {
        assert_eq!(g.is_directed(), self.directed, "directedness mismatch");
        let offset = self.n;
        self.n += g.vertex_count();
        for (u, v) in g.edges() {
            self.edges.push((u + offset, v + offset));
        }
        if let Some(prefix) = label_prefix {
            for (name, &v) in g.labels() {
                self.labels.push((format!("{prefix}{name}"), v + offset));
            }
        }
        offset
    }

    pub fn finish(self) -> Result<Graph, GraphError> {
        Graph::build(self.directed, self.n, &self.edges, &self.labels)
    }
}
