//! Breadth-first utilities over adjacency lists that carry edge ids, so loops
//! and parallel edges are handled uniformly.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `adj[v]` lists `(neighbour, edge id)` pairs.
pub type Adjacency = Vec<Vec<(usize, usize)>>;

/// A length that may be unbounded: girths of forests, distances between
/// unreachable vertices, pieces in a fiber product with a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Length::Infinite)
    }
}

impl From<Option<usize>> for Length {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Length::Infinite, Length::Finite)
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => write!(f, "inf"),
        }
    }
}

// JSON: a number, or the string "inf".
impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Length::Finite(n) => s.serialize_u64(*n as u64),
            Length::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Length::Finite(n as usize)),
            Raw::S(s) if s == "inf" => Ok(Length::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad length {s:?}"))),
        }
    }
}

/// A closed walk: `edges[i]` joins `vertices[i]` and `vertices[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub struct BfsTree {
    pub dist: Vec<Option<usize>>,
    /// `(parent vertex, edge id)` on a shortest path back to the root.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl BfsTree {
    /// Vertices and edges from `v` back to the root.
    pub fn path_to_root(&self, mut v: usize) -> (Vec<usize>, Vec<usize>) {
        let mut verts = vec![v];
        let mut edges = Vec::new();
        while let Some((p, e)) = self.parent[v] {
            edges.push(e);
            verts.push(p);
            v = p;
        }
        (verts, edges)
    }
}

pub fn bfs(adj: &Adjacency, root: usize) -> BfsTree {
    let n = adj.len();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let mut queue = VecDeque::from([root]);
    dist[root] = Some(0);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &(w, e) in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                parent[w] = Some((u, e));
                queue.push_back(w);
            }
        }
    }
    BfsTree { dist, parent }
}

/// A shortest cycle, or `None` for a forest.
///
/// Runs a BFS from every vertex; the first non-tree edge found from root `r`
/// closes a cycle through `r` of length `dist(u) + dist(w) + 1`, and the
/// minimum over all roots is the girth. A minimizing closed walk is a simple cycle.
pub fn shortest_cycle(adj: &Adjacency) -> Option<Cycle> {
    let n = adj.len();
    let mut best: Option<(usize, usize, usize, usize, usize)> = None; // (len, root, u, w, edge)
    let mut dist = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent_edge[v] = usize::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        let mut queue = VecDeque::from([root]);
        'search: while let Some(u) = queue.pop_front() {
            if let Some((len, ..)) = best {
                if 2 * dist[u] + 1 >= len {
                    break 'search;
                }
            }
            for &(w, e) in &adj[u] {
                if e == parent_edge[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = e;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b.0) {
                        best = Some((len, root, u, w, e));
                    }
                }
            }
        }
    }
    let (_, root, u, w, e) = best?;
    let tree = bfs_with_parent_edges(adj, root);
    let (mut up, mut up_edges) = tree.path_to_root(u);
    up.reverse();
    up_edges.reverse();
    let (down, down_edges) = tree.path_to_root(w);
    // root .. u, then e to w, then w .. root (dropping the repeated root)
    let mut vertices = up;
    let mut edges = up_edges;
    edges.push(e);
    vertices.extend_from_slice(&down[..down.len() - 1]);
    edges.extend_from_slice(&down_edges);
    Some(Cycle { vertices, edges })
}

// Same traversal order as the search above, so the recovered tree paths match.
fn bfs_with_parent_edges(adj: &Adjacency, root: usize) -> BfsTree {
    bfs(adj, root)
}

pub fn girth(adj: &Adjacency) -> Length {
    shortest_cycle(adj).map(|c| c.len()).into()
}

/// Connected component index of every vertex, numbered in order of first vertex.
pub fn components(adj: &Adjacency) -> (usize, Vec<usize>) {
    let mut comp = vec![usize::MAX; adj.len()];
    let mut count = 0;
    for s in 0..adj.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (count, comp)
}
