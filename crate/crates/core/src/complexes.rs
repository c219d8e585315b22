//! Finite 2-complexes whose 1-skeleton is a simple graph and whose polygons are
//! attached along embedded cycles, plus the checks that decide whether such a
//! complex is spectacular.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Adjacency, Length};
use crate::homology::{self, HomologyReport};

/// Minimum distance required between distinct branch vertices.
pub const MIN_BRANCH_SEPARATION: usize = 5;
/// Minimum girth of the 1-skeleton.
pub const MIN_GIRTH: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("edge ({0}, {0}) is a loop")]
    Loop(usize),
    #[error("edge ({0}, {1}) appears twice")]
    ParallelEdge(usize, usize),
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("polygon must have at least 3 sides, got {0}")]
    PolygonTooShort(usize),
    #[error("polygon boundary passes through vertex {0} twice")]
    PolygonNotEmbedded(usize),
    #[error("polygon side ({0}, {1}) is not an edge of the graph")]
    PolygonEdgeMissing(usize, usize),
    #[error("polygon {0:?} attached twice")]
    DuplicatePolygon(Vec<usize>),
    #[error("subdivision factor must be at least 2, got {0}")]
    SubdivisionFactor(usize),
    #[error("pieces are only defined between distinct polygons")]
    SamePolygon,
    #[error("vertex list must be 0..n in order")]
    NonDenseVertices,
}

pub type Result<T> = std::result::Result<T, ComplexError>;

/// Simple graph on vertices `0..n`. Edges keep the orientation and order they
/// were given in; that orientation names the generators of presentations.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    adj: Adjacency,
}

impl PartialEq for SimpleGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for SimpleGraph {}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); vertex_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(ComplexError::VertexOutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(ComplexError::Loop(u));
            }
            if index.insert(key(u, v), i).is_some() {
                return Err(ComplexError::ParallelEdge(u, v));
            }
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        Ok(SimpleGraph {
            vertex_count,
            edges,
            index,
            adj,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SimpleGraph::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::new(n, edges).expect("cycle of length >= 3 is simple")
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        SimpleGraph::new(n, edges).expect("path is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in stored order and orientation.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adj
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn valence(&self, v: usize) -> usize {
        self.adj[v].len()
    }
}

/// Length of the shortest cycle, `Infinite` for forests.
pub fn girth(g: &SimpleGraph) -> Length {
    graph::girth(g.adjacency())
}

/// A shortest cycle as a vertex sequence.
pub fn shortest_cycle(g: &SimpleGraph) -> Option<Vec<usize>> {
    graph::shortest_cycle(g.adjacency()).map(|c| c.vertices)
}

/// A polygon boundary as a cyclic vertex sequence, stored as the least of its
/// rotations and reflections.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Polygon(Vec<usize>);

impl Polygon {
    pub fn new(cycle: Vec<usize>) -> Result<Self> {
        if cycle.len() < 3 {
            return Err(ComplexError::PolygonTooShort(cycle.len()));
        }
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::PolygonNotEmbedded(w[0]));
        }
        Ok(Polygon(canonical_cycle(&cycle)))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn perimeter(&self) -> usize {
        self.0.len()
    }

    /// Sides as consecutive vertex pairs in stored traversal order.
    pub fn sides(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }
}

fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut reversed = cycle.to_vec();
    reversed.reverse();
    let mut best: Option<Vec<usize>> = None;
    for seq in [cycle, &reversed[..]] {
        for r in 0..n {
            let cand: Vec<usize> = seq[r..].iter().chain(&seq[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// A simple graph with polygons attached along embedded cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ComplexJson", try_from = "ComplexJson")]
pub struct TwoComplex {
    graph: SimpleGraph,
    polygons: Vec<Polygon>,
    girth: Length,
}

impl TwoComplex {
    /// Validates every polygon side against the graph. Polygons end up sorted
    /// by canonical form.
    pub fn new(graph: SimpleGraph, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let mut polygons = Vec::with_capacity(cycles.len());
        for cycle in cycles {
            for &v in &cycle {
                if v >= graph.vertex_count() {
                    return Err(ComplexError::VertexOutOfRange {
                        vertex: v,
                        count: graph.vertex_count(),
                    });
                }
            }
            let p = Polygon::new(cycle)?;
            if let Some((u, v)) = p.sides().find(|&(u, v)| graph.edge_index(u, v).is_none()) {
                return Err(ComplexError::PolygonEdgeMissing(u, v));
            }
            polygons.push(p);
        }
        polygons.sort();
        if let Some(w) = polygons.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicatePolygon(w[0].0.clone()));
        }
        let girth = girth(&graph);
        Ok(TwoComplex { graph, polygons, girth })
    }

    /// A single polygon glued along a cycle graph of length `n`.
    pub fn single_polygon(n: usize) -> Self {
        TwoComplex::new(SimpleGraph::cycle(n), vec![(0..n).collect()]).expect("n >= 3")
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn girth(&self) -> Length {
        self.girth
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn polygon_count(&self) -> usize {
        self.polygons.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.polygon_count() as i64
    }

    /// Keeps only the polygons selected by `keep`.
    pub fn retain_polygons(&self, mut keep: impl FnMut(&Polygon) -> bool) -> TwoComplex {
        TwoComplex {
            graph: self.graph.clone(),
            polygons: self.polygons.iter().filter(|p| keep(p)).cloned().collect(),
            girth: self.girth,
        }
    }

    pub fn perimeters(&self) -> Vec<usize> {
        self.polygons.iter().map(Polygon::perimeter).collect()
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph K {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "  {v};");
        }
        for &(u, v) in self.graph.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Serialized form: `{"vertices": [..], "edges": [[u, v], ..], "polygons": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub polygons: Vec<Vec<usize>>,
}

impl From<TwoComplex> for ComplexJson {
    fn from(c: TwoComplex) -> Self {
        ComplexJson {
            vertices: (0..c.vertex_count()).collect(),
            edges: c.graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            polygons: c.polygons.into_iter().map(|p| p.0).collect(),
        }
    }
}

impl TryFrom<ComplexJson> for TwoComplex {
    type Error = ComplexError;

    fn try_from(j: ComplexJson) -> Result<Self> {
        if j.vertices.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(ComplexError::NonDenseVertices);
        }
        let graph = SimpleGraph::new(j.vertices.len(), j.edges.iter().map(|e| (e[0], e[1])).collect())?;
        TwoComplex::new(graph, j.polygons)
    }
}

/// Minimum distance between two distinct vertices of valence at least three,
/// with a shortest such path; `Infinite` when fewer than two are connected.
pub fn branch_separation(c: &TwoComplex) -> (Length, Option<Vec<usize>>) {
    let g = c.graph();
    let is_branch: Vec<bool> = (0..g.vertex_count()).map(|v| g.valence(v) >= 3).collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for s in (0..g.vertex_count()).filter(|&v| is_branch[v]) {
        let tree = graph::bfs(g.adjacency(), s);
        let hit = (0..g.vertex_count())
            .filter(|&t| t != s && is_branch[t])
            .filter_map(|t| tree.dist[t].map(|d| (d, t)))
            .min();
        if let Some((d, t)) = hit {
            if best.as_ref().is_none_or(|b| d < b.0) {
                let (mut path, _) = tree.path_to_root(t);
                path.reverse();
                best = Some((d, path));
            }
        }
    }
    match best {
        Some((d, path)) => (Length::Finite(d), Some(path)),
        None => (Length::Infinite, None),
    }
}

/// One connected component of `∂P ∩ ∂Q`, as a vertex path (a single vertex
/// when only a vertex is shared).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryPiece {
    pub vertices: Vec<usize>,
}

impl BoundaryPiece {
    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Components of `∂P ∩ ∂Q`, each oriented to its lexicographically smaller
/// reading, sorted.
pub fn boundary_pieces(p: &Polygon, q: &Polygon) -> Result<Vec<BoundaryPiece>> {
    if p == q {
        return Err(ComplexError::SamePolygon);
    }
    let q_sides: std::collections::HashSet<(usize, usize)> = q.sides().map(|(u, v)| key(u, v)).collect();
    let pv = p.vertices();
    let n = pv.len();
    let shared_vertex: Vec<bool> = pv.iter().map(|&v| q.contains(v)).collect();
    let shared_side: Vec<bool> = (0..n).map(|i| q_sides.contains(&key(pv[i], pv[(i + 1) % n]))).collect();

    let mut pieces = Vec::new();
    // Runs of shared sides; no run covers all of P because P != Q.
    if let Some(start) = (0..n).find(|&i| !shared_side[i]) {
        let mut i = (start + 1) % n;
        let mut steps = 0;
        while steps < n {
            if shared_side[i] {
                let mut path = vec![pv[i]];
                while shared_side[i] {
                    path.push(pv[(i + 1) % n]);
                    i = (i + 1) % n;
                    steps += 1;
                }
                pieces.push(path);
            } else {
                i = (i + 1) % n;
                steps += 1;
            }
        }
    }
    // Shared vertices with no shared side on either side of them.
    for i in 0..n {
        let prev_side = shared_side[(i + n - 1) % n];
        if shared_vertex[i] && !shared_side[i] && !prev_side {
            pieces.push(vec![pv[i]]);
        }
    }
    let mut out: Vec<BoundaryPiece> = pieces
        .into_iter()
        .map(|mut path| {
            let mut rev = path.clone();
            rev.reverse();
            if rev < path {
                path = rev;
            }
            BoundaryPiece { vertices: path }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Subdivides every edge into `m` edges. Original vertex ids are kept; new
/// vertices are numbered consecutively in sorted edge order, running from the
/// smaller endpoint to the larger.
pub fn subdivide_edges(c: &TwoComplex, m: usize) -> Result<TwoComplex> {
    if m < 2 {
        return Err(ComplexError::SubdivisionFactor(m));
    }
    let g = c.graph();
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&i| key(g.edges()[i].0, g.edges()[i].1));

    let mut next = g.vertex_count();
    // chain[i] runs from min endpoint to max endpoint of edge i, inclusive.
    let mut chains: Vec<Vec<usize>> = vec![Vec::new(); g.edge_count()];
    for &i in &order {
        let (a, b) = key(g.edges()[i].0, g.edges()[i].1);
        let mut chain = vec![a];
        chain.extend(next..next + m - 1);
        chain.push(b);
        next += m - 1;
        chains[i] = chain;
    }
    let mut edges = Vec::with_capacity(g.edge_count() * m);
    for (i, &(u, _)) in g.edges().iter().enumerate() {
        let chain = &chains[i];
        // keep the stored orientation along the chain
        if chain[0] == u {
            edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
        } else {
            edges.extend(chain.windows(2).rev().map(|w| (w[1], w[0])));
        }
    }
    let graph = SimpleGraph::new(next, edges)?;
    let polygons = c
        .polygons()
        .iter()
        .map(|p| {
            let mut cycle = Vec::with_capacity(p.perimeter() * m);
            for (u, v) in p.sides() {
                let chain = &chains[g.edge_index(u, v).unwrap()];
                if chain[0] == u {
                    cycle.extend_from_slice(&chain[..m]);
                } else {
                    cycle.extend(chain[1..].iter().rev());
                }
            }
            cycle
        })
        .collect();
    TwoComplex::new(graph, polygons)
}

/// Cones every polygon off its boundary. Polygon `i` gets cone vertex `V + i`
/// and contributes one triangle per side, so the result is simplicial.
pub fn conical_subdivision(c: &TwoComplex) -> TwoComplex {
    let n = c.vertex_count();
    let mut edges = c.graph().edges().to_vec();
    let mut triangles = Vec::new();
    for (i, p) in c.polygons().iter().enumerate() {
        let cone = n + i;
        edges.extend(p.vertices().iter().map(|&v| (v, cone)));
        triangles.extend(p.sides().map(|(u, v)| vec![cone, u, v]));
    }
    let graph = SimpleGraph::new(n + c.polygon_count(), edges).expect("cone edges are new");
    TwoComplex::new(graph, triangles).expect("cone triangles are distinct")
}

/// Evidence attached to a failed (or informative) condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    NoPolygons,
    ShortBranchPath {
        path: Vec<usize>,
    },
    ShortCycle {
        cycle: Vec<usize>,
    },
    ShortPerimeter {
        polygon: Vec<usize>,
        perimeter: usize,
        girth: usize,
    },
    OversizedPiece {
        first: Vec<usize>,
        second: Vec<usize>,
        piece: Vec<usize>,
    },
    Homology {
        report: HomologyReport,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionCheck>,
    pub spectacular: bool,
}

impl ConditionReport {
    pub fn passed(&self, condition: u8) -> bool {
        self.conditions
            .iter()
            .find(|c| c.condition == condition)
            .is_some_and(|c| c.passed)
    }

    pub fn failed_conditions(&self) -> Vec<u8> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.condition)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.conditions {
            let mark = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{} {}. {:<28} {}", mark, c.condition, c.name, c.detail);
        }
        let _ = writeln!(out, "spectacular: {}", self.spectacular);
        out
    }
}

/// Worst boundary overlap over all polygon pairs sharing an edge, measured by
/// `6 * edges - min(l_P, l_Q)`; condition 6 holds iff that is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub excess: i64,
    /// Polygon indices.
    pub first: usize,
    pub second: usize,
    pub piece: BoundaryPiece,
}

pub fn worst_overlap(c: &TwoComplex) -> Option<Overlap> {
    let mut by_edge: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in c.polygons().iter().enumerate() {
        for (u, v) in p.sides() {
            by_edge.entry(c.graph().edge_index(u, v).unwrap()).or_default().push(i);
        }
    }
    let mut pairs: Vec<(usize, usize)> = by_edge
        .values()
        .flat_map(|ps| {
            ps.iter()
                .enumerate()
                .flat_map(move |(k, &a)| ps[k + 1..].iter().map(move |&b| (a, b)))
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut worst: Option<Overlap> = None;
    for (a, b) in pairs {
        let (p, q) = (&c.polygons()[a], &c.polygons()[b]);
        let limit = p.perimeter().min(q.perimeter()) as i64;
        for piece in boundary_pieces(p, q).expect("polygons are distinct") {
            let excess = 6 * piece.edge_count() as i64 - limit;
            if worst.as_ref().is_none_or(|w| excess > w.excess) {
                worst = Some(Overlap {
                    excess,
                    first: a,
                    second: b,
                    piece,
                });
            }
        }
    }
    worst
}

/// Evaluates all seven conditions. Condition 2 also requires at least one
/// polygon, since the complex must be two-dimensional.
pub fn verify_spectacular(c: &TwoComplex) -> ConditionReport {
    let mut conditions = Vec::with_capacity(7);
    let mut push = |condition: u8, name: &str, passed: bool, detail: String, witness| {
        conditions.push(ConditionCheck {
            condition,
            name: name.to_string(),
            passed,
            detail,
            witness,
        })
    };

    // 1 and 2 are enforced when the complex is built.
    push(
        1,
        "simplicial 1-skeleton",
        true,
        format!("{} vertices, {} edges", c.vertex_count(), c.edge_count()),
        None,
    );
    let two_dim = c.polygon_count() > 0;
    push(
        2,
        "polygons embed",
        two_dim,
        format!("{} embedded polygons", c.polygon_count()),
        (!two_dim).then_some(Witness::NoPolygons),
    );

    let (sep, path) = branch_separation(c);
    let ok3 = sep >= Length::Finite(MIN_BRANCH_SEPARATION);
    push(
        3,
        "branch separation >= 5",
        ok3,
        format!("branch separation {sep}"),
        (!ok3).then(|| Witness::ShortBranchPath { path: path.unwrap() }),
    );

    let g = c.girth();
    let ok4 = g >= Length::Finite(MIN_GIRTH);
    push(
        4,
        "girth >= 13",
        ok4,
        format!("girth {g}"),
        (!ok4).then(|| Witness::ShortCycle {
            cycle: shortest_cycle(c.graph()).unwrap(),
        }),
    );

    // With infinite girth there are no cycles, hence no polygons to check.
    let short = c.polygons().iter().find(|p| match g {
        Length::Finite(g) => p.perimeter() <= 2 * g,
        Length::Infinite => true,
    });
    let min_perimeter = c.perimeters().into_iter().min();
    push(
        5,
        "perimeter > 2 * girth",
        short.is_none(),
        match min_perimeter {
            Some(l) => format!(
                "min perimeter {l} vs 2 * girth {}",
                g.finite().map_or("inf".into(), |g| (2 * g).to_string())
            ),
            None => "no polygons".into(),
        },
        short.map(|p| Witness::ShortPerimeter {
            polygon: p.vertices().to_vec(),
            perimeter: p.perimeter(),
            girth: g.finite().unwrap_or(0),
        }),
    );

    let worst = worst_overlap(c);
    let ok6 = worst.as_ref().is_none_or(|w| w.excess < 0);
    push(
        6,
        "polygon overlaps C'(1/6)",
        ok6,
        match &worst {
            Some(w) => format!("worst shared boundary path has {} edges", w.piece.edge_count()),
            None => "no polygons share an edge".into(),
        },
        worst.filter(|_| !ok6).map(|w| Witness::OversizedPiece {
            first: c.polygons()[w.first].vertices().to_vec(),
            second: c.polygons()[w.second].vertices().to_vec(),
            piece: w.piece.vertices,
        }),
    );

    let report = homology::homology(c);
    let ok7 = report.is_acyclic();
    push(
        7,
        "acyclic",
        ok7,
        report.summary(),
        (!ok7).then(|| Witness::Homology { report: report.clone() }),
    );

    let spectacular = conditions.iter().all(|c| c.passed);
    ConditionReport {
        conditions,
        spectacular,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_squares_sharing(shared: usize) -> TwoComplex {
        // squares 0-1-2-3 and a second square sharing `shared` consecutive edges of the first
        match shared {
            1 => {
                let g = SimpleGraph::new(6, vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5), (5, 0)]).unwrap();
                TwoComplex::new(g, vec![vec![0, 1, 2, 3], vec![0, 1, 4, 5]]).unwrap()
            }
            _ => {
                let g = SimpleGraph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 0)]).unwrap();
                TwoComplex::new(g, vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4]]).unwrap()
            }
        }
    }

    #[test]
    fn graph_validation() {
        assert_eq!(SimpleGraph::new(2, vec![(1, 1)]).unwrap_err(), ComplexError::Loop(1));
        assert_eq!(
            SimpleGraph::new(2, vec![(0, 1), (1, 0)]).unwrap_err(),
            ComplexError::ParallelEdge(1, 0)
        );
        assert!(matches!(
            SimpleGraph::new(2, vec![(0, 2)]),
            Err(ComplexError::VertexOutOfRange { vertex: 2, count: 2 })
        ));
    }

    #[test]
    fn polygon_canonical_form() {
        let a = Polygon::new(vec![3, 1, 2, 0]).unwrap();
        let b = Polygon::new(vec![0, 2, 1, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vertices(), &[0, 2, 1, 3]);
        assert_eq!(Polygon::new(vec![0, 1]).unwrap_err(), ComplexError::PolygonTooShort(2));
        assert_eq!(
            Polygon::new(vec![0, 1, 2, 1]).unwrap_err(),
            ComplexError::PolygonNotEmbedded(1)
        );
    }

    #[test]
    fn complex_validation() {
        let g = SimpleGraph::cycle(4);
        assert_eq!(
            TwoComplex::new(g.clone(), vec![vec![0, 2, 1, 3]]).unwrap_err(),
            ComplexError::PolygonEdgeMissing(0, 2)
        );
        assert!(matches!(
            TwoComplex::new(g, vec![vec![0, 1, 2, 3], vec![1, 2, 3, 0]]),
            Err(ComplexError::DuplicatePolygon(_))
        ));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&SimpleGraph::complete(9)), Length::Finite(3));
        assert_eq!(girth(&SimpleGraph::path(5)), Length::Infinite);
        let k9 = TwoComplex::new(SimpleGraph::complete(9), vec![]).unwrap();
        assert_eq!(subdivide_edges(&k9, 5).unwrap().girth(), Length::Finite(15));
    }

    #[test]
    fn branch_separation_examples() {
        let k9 = TwoComplex::new(SimpleGraph::complete(9), vec![]).unwrap();
        assert_eq!(branch_separation(&k9).0, Length::Finite(1));
        let sub = subdivide_edges(&k9, 5).unwrap();
        let (d, path) = branch_separation(&sub);
        assert_eq!(d, Length::Finite(5));
        assert_eq!(path.unwrap().len(), 6);
        assert_eq!(branch_separation(&TwoComplex::single_polygon(7)).0, Length::Infinite);
    }

    #[test]
    fn boundary_pieces_examples() {
        let c = two_squares_sharing(1);
        let (p, q) = (&c.polygons()[0], &c.polygons()[1]);
        let pieces = boundary_pieces(p, q).unwrap();
        assert_eq!(pieces, vec![BoundaryPiece { vertices: vec![0, 1] }]);
        assert_eq!(boundary_pieces(q, p).unwrap(), pieces);
        assert_eq!(boundary_pieces(p, p).unwrap_err(), ComplexError::SamePolygon);

        let c2 = two_squares_sharing(2);
        let pieces = boundary_pieces(&c2.polygons()[0], &c2.polygons()[1]).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].edge_count(), 2);

        let disjoint = TwoComplex::new(
            SimpleGraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap(),
            vec![vec![0, 1, 2], vec![3, 4, 5]],
        )
        .unwrap();
        let ps = disjoint.polygons();
        assert!(boundary_pieces(&ps[0], &ps[1]).unwrap().is_empty());
    }

    #[test]
    fn boundary_pieces_report_isolated_shared_vertices() {
        // two triangles meeting in vertex 0 only
        let g = SimpleGraph::new(5, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let c = TwoComplex::new(g, vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        let pieces = boundary_pieces(&c.polygons()[0], &c.polygons()[1]).unwrap();
        assert_eq!(pieces, vec![BoundaryPiece { vertices: vec![0] }]);
        assert_eq!(pieces[0].edge_count(), 0);
        // zero-edge components never violate condition 6
        assert!(verify_spectacular(&c).passed(6));
    }

    #[test]
    fn edge_subdivision_scales_perimeters() {
        let tri = TwoComplex::single_polygon(3);
        let s = subdivide_edges(&tri, 5).unwrap();
        assert_eq!(s.vertex_count(), 15);
        assert_eq!(s.edge_count(), 15);
        assert_eq!(s.perimeters(), vec![15]);
        assert_eq!(s.girth(), Length::Finite(15));
        assert_eq!(s.euler_characteristic(), tri.euler_characteristic());
        assert_eq!(
            subdivide_edges(&tri, 1).unwrap_err(),
            ComplexError::SubdivisionFactor(1)
        );
    }

    #[test]
    fn subdivision_keeps_edge_orientation() {
        let g = SimpleGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let tri = TwoComplex::new(g, vec![vec![0, 1, 2]]).unwrap();
        let s = subdivide_edges(&tri, 2).unwrap();
        // sorted edge order: (0,1) -> 3, (0,2) -> 4, (1,2) -> 5
        assert_eq!(s.graph().edges(), &[(0, 3), (3, 1), (1, 5), (5, 2), (2, 4), (4, 0)]);
    }

    #[test]
    fn conical_subdivision_of_a_triangle() {
        let tri = TwoComplex::single_polygon(3);
        let cone = conical_subdivision(&tri);
        assert_eq!(cone.vertex_count(), 4);
        assert_eq!(cone.polygon_count(), 3);
        assert!(cone.polygons().iter().all(|p| p.perimeter() == 3 && p.contains(3)));
        assert_eq!(cone.euler_characteristic(), 1);
    }

    #[test]
    fn single_polygon_fails_only_perimeter_condition() {
        let r = verify_spectacular(&TwoComplex::single_polygon(13));
        assert_eq!(r.failed_conditions(), vec![5]);
        assert!(!r.spectacular);
        assert!(matches!(
            r.conditions[4].witness,
            Some(Witness::ShortPerimeter {
                perimeter: 13,
                girth: 13,
                ..
            })
        ));
    }

    #[test]
    fn a_tree_is_not_spectacular() {
        let tree = TwoComplex::new(SimpleGraph::path(6), vec![]).unwrap();
        let r = verify_spectacular(&tree);
        assert!(!r.spectacular);
        assert_eq!(r.failed_conditions(), vec![2]);
        assert_eq!(r.conditions[1].witness, Some(Witness::NoPolygons));
    }

    #[test]
    fn overlapping_squares_violate_condition_six() {
        let r = verify_spectacular(&two_squares_sharing(2));
        assert!(!r.passed(6));
        match &r.conditions[5].witness {
            Some(Witness::OversizedPiece { piece, .. }) => assert_eq!(piece.len(), 3),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn verdict_is_conjunction() {
        for c in [
            two_squares_sharing(1),
            two_squares_sharing(2),
            TwoComplex::single_polygon(13),
            TwoComplex::single_polygon(40),
        ] {
            let r = verify_spectacular(&c);
            assert_eq!(r.conditions.len(), 7);
            assert_eq!(r.spectacular, r.conditions.iter().all(|x| x.passed));
            for skip in 0..7 {
                let partial = r.conditions.iter().enumerate().all(|(i, x)| i == skip || x.passed);
                assert!(partial || !r.spectacular);
            }
        }
    }

    #[test]
    fn json_round_trip_and_schema() {
        let c = two_squares_sharing(1);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with("{\"vertices\":[0,1,2,3,4,5],\"edges\":[[0,1]"));
        let back: TwoComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"vertices":[0,1,2],"edges":[[0,1],[1,0]],"polygons":[]}"#;
        assert!(serde_json::from_str::<TwoComplex>(bad).is_err());
        assert!(c.to_dot().contains("0 -- 1;"));
    }
}
