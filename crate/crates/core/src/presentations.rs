//! Labelled graphs, graphical presentations of the groups `H(S)` over a finite
//! window of degrees, and the graphical C'(1/6) condition, both checked
//! exhaustively on a window and certified for every degree at once.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{worst_overlap, Polygon, SimpleGraph, TwoComplex};
use crate::graph::{self, Adjacency, Cycle, Length};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("invalid label name {0:?}")]
    BadLabelName(String),
    #[error("label name {0:?} used twice")]
    DuplicateLabel(String),
    #[error("label {label} outside a label set of size {size}")]
    LabelOutOfRange { label: u32, size: usize },
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("degree 0 is not allowed")]
    ZeroDegree,
    #[error("degree {0} is listed in S but not in the window")]
    NotInWindow(i64),
    #[error("degree {0} appears twice")]
    RepeatedDegree(i64),
    #[error("a relator word must be nonempty")]
    EmptyRelator,
    #[error("family certificate needs {0}")]
    Precondition(String),
    #[error("bad presentation JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, PresentationError>;

/// A label; `tau` pairs `2k` with `2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl Label {
    pub fn positive(orbit: usize) -> Label {
        Label(2 * orbit as u32)
    }

    pub fn tau(self) -> Label {
        Label(self.0 ^ 1)
    }

    pub fn orbit(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

/// Labels named by orbit; the inverse of `x` prints as `~x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (k, name) in names.iter().enumerate() {
            let ok = !name.is_empty()
                && !name.starts_with('~')
                && !name.contains('^')
                && !name.chars().any(char::is_whitespace);
            if !ok {
                return Err(PresentationError::BadLabelName(name.clone()));
            }
            if index.insert(name.clone(), k).is_some() {
                return Err(PresentationError::DuplicateLabel(name.clone()));
            }
        }
        Ok(LabelSet { names, index })
    }

    /// `a1, a2, ...` for edges `0, 1, ...`.
    pub fn for_edges(count: usize) -> Self {
        LabelSet::new((1..=count).map(|k| format!("a{k}"))).expect("generated names are valid")
    }

    pub fn len(&self) -> usize {
        2 * self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn orbit_count(&self) -> usize {
        self.names.len()
    }

    pub fn contains(&self, l: Label) -> bool {
        (l.0 as usize) < self.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (0..self.len() as u32).map(Label)
    }

    pub fn name(&self, l: Label) -> String {
        let base = &self.names[l.orbit()];
        if l.is_positive() {
            base.clone()
        } else {
            format!("~{base}")
        }
    }

    pub fn tau_table(&self) -> Vec<u32> {
        self.labels().map(|l| l.tau().0).collect()
    }

    /// Accepts `x`, `~x` and `x^-1`.
    pub fn parse_label(&self, token: &str) -> Result<Label> {
        let (base, inverse) = if let Some(rest) = token.strip_prefix('~') {
            (rest, true)
        } else if let Some(rest) = token.strip_suffix("^-1") {
            (rest, true)
        } else {
            (token, false)
        };
        let k = *self
            .index
            .get(base)
            .ok_or_else(|| PresentationError::UnknownLabel(token.to_string()))?;
        let l = Label::positive(k);
        Ok(if inverse { l.tau() } else { l })
    }

    /// Whitespace-separated label names.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.split_whitespace()
            .map(|t| self.parse_label(t))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Label>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].tau())
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Label> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.tau()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.tau()).collect())
    }

    /// `g₁ⁿ g₂ⁿ ⋯ g_lⁿ`, with negative `n` using inverses.
    pub fn power_product(tuple: &[Label], n: i64) -> Word {
        let reps = n.unsigned_abs() as usize;
        Word(
            tuple
                .iter()
                .flat_map(|&g| std::iter::repeat_n(if n < 0 { g.tau() } else { g }, reps))
                .collect(),
        )
    }
}

/// Why a labelled graph is not reduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NotReduced {
    LowValence { vertex: usize, valence: usize },
    RepeatedOutLabel { vertex: usize, label: Label },
}

/// An undirected multigraph whose edge `i = (u, v, l)` reads `l` from `u` to
/// `v` and `tau(l)` back. Directed edge `2i` runs `u -> v`, `2i + 1` runs `v -> u`.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, Label)>,
    out: Vec<Vec<usize>>,
    by_label: HashMap<Label, Vec<usize>>,
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for LabeledGraph {}

impl LabeledGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, Label)>) -> Result<Self> {
        let mut out = vec![Vec::new(); vertex_count];
        let mut by_label: HashMap<Label, Vec<usize>> = HashMap::new();
        for (i, &(u, v, l)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(PresentationError::VertexOutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            out[u].push(2 * i);
            out[v].push(2 * i + 1);
            by_label.entry(l).or_default().push(2 * i);
            by_label.entry(l.tau()).or_default().push(2 * i + 1);
        }
        Ok(LabeledGraph {
            vertex_count,
            edges,
            out,
            by_label,
        })
    }

    /// A cycle reading `w` once around from vertex 0.
    pub fn cycle_from_word(w: &Word) -> Result<Self> {
        let k = w.len();
        if k == 0 {
            return Err(PresentationError::EmptyRelator);
        }
        LabeledGraph::new(k, w.0.iter().enumerate().map(|(i, &l)| (i, (i + 1) % k, l)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, Label)] {
        &self.edges
    }

    pub fn source(&self, d: usize) -> usize {
        let (u, v, _) = self.edges[d / 2];
        if d.is_multiple_of(2) {
            u
        } else {
            v
        }
    }

    pub fn target(&self, d: usize) -> usize {
        self.source(d ^ 1)
    }

    pub fn label(&self, d: usize) -> Label {
        let l = self.edges[d / 2].2;
        if d.is_multiple_of(2) {
            l
        } else {
            l.tau()
        }
    }

    /// Directed edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Directed edges reading `l`, in edge order.
    pub fn edges_with_label(&self, l: Label) -> &[usize] {
        self.by_label.get(&l).map_or(&[], Vec::as_slice)
    }

    /// The first directed edge out of `v` reading `l`.
    pub fn step(&self, v: usize, l: Label) -> Option<usize> {
        self.out[v].iter().copied().find(|&d| self.label(d) == l)
    }

    pub fn labels_used(&self) -> BTreeSet<Label> {
        self.edges.iter().map(|e| e.2).collect()
    }

    pub fn adjacency(&self) -> Adjacency {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }

    pub fn girth(&self) -> Length {
        graph::girth(&self.adjacency())
    }

    pub fn shortest_cycle(&self) -> Option<Cycle> {
        graph::shortest_cycle(&self.adjacency())
    }

    pub fn component_count(&self) -> usize {
        graph::components(&self.adjacency()).0
    }

    pub fn not_reduced(&self) -> Option<NotReduced> {
        for v in 0..self.vertex_count {
            let valence = self.out[v].len();
            if valence <= 1 {
                return Some(NotReduced::LowValence { vertex: v, valence });
            }
            let mut seen = BTreeSet::new();
            for &d in &self.out[v] {
                let label = self.label(d);
                if !seen.insert(label) {
                    return Some(NotReduced::RepeatedOutLabel { vertex: v, label });
                }
            }
        }
        None
    }

    pub fn is_reduced(&self) -> bool {
        self.not_reduced().is_none()
    }

    /// Replaces each edge by a path of `|n|` edges all reading the edge's
    /// label (`n > 0`) or its inverse (`n < 0`) in the original direction.
    /// Original vertices keep their ids; new ones follow in edge order.
    pub fn degree_subdivision(&self, n: i64) -> Result<LabeledGraph> {
        if n == 0 {
            return Err(PresentationError::ZeroDegree);
        }
        let k = n.unsigned_abs() as usize;
        let mut next = self.vertex_count;
        let mut edges = Vec::with_capacity(self.edges.len() * k);
        for &(u, v, l) in &self.edges {
            let l = if n < 0 { l.tau() } else { l };
            let mut prev = u;
            for _ in 1..k {
                edges.push((prev, next, l));
                prev = next;
                next += 1;
            }
            edges.push((prev, v, l));
        }
        LabeledGraph::new(next, edges)
    }

    /// Longest prefix of `w` readable from `start`: its length and end vertex.
    pub fn trace(&self, start: usize, w: &Word) -> (usize, usize) {
        let mut v = start;
        for (i, &l) in w.0.iter().enumerate() {
            match self.step(v, l) {
                Some(d) => v = self.target(d),
                None => return (i, v),
            }
        }
        (w.len(), v)
    }

    pub fn to_dot(&self, labels: &LabelSet, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  {v};");
        }
        for &(u, v, l) in &self.edges {
            let _ = writeln!(out, "  {u} -> {v} [label=\"{}\"];", labels.name(l));
        }
        out.push_str("}\n");
        out
    }
}

/// See [`LabeledGraph::trace`].
pub fn trace_word(lg: &LabeledGraph, start: usize, w: &Word) -> (usize, usize) {
    lg.trace(start, w)
}

/// Label of the directed edge `u -> v` under the tautological labelling.
pub fn directed_label(g: &SimpleGraph, u: usize, v: usize) -> Option<Label> {
    let e = g.edge_index(u, v)?;
    let l = Label::positive(e);
    Some(if g.edges()[e].0 == u { l } else { l.tau() })
}

/// Labels `a1, a2, ...` on the edges of `g`, each read along its stored orientation.
pub fn tautological_labelling(g: &SimpleGraph) -> (LabelSet, LabeledGraph) {
    let labels = LabelSet::for_edges(g.edge_count());
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (u, v, Label::positive(i)))
        .collect();
    let lg = LabeledGraph::new(g.vertex_count(), edges).expect("edges are in range");
    (labels, lg)
}

/// The boundary of `p` as a cycle graph carrying the tautological labels of `g`.
pub fn polygon_labelling(g: &SimpleGraph, p: &Polygon) -> LabeledGraph {
    let word = Word(
        p.sides()
            .map(|(u, v)| directed_label(g, u, v).expect("sides are edges"))
            .collect(),
    );
    LabeledGraph::cycle_from_word(&word).expect("polygons are nonempty")
}

/// Labels read along a cycle given by its vertices.
pub fn cycle_labels(g: &SimpleGraph, cycle: &[usize]) -> Option<Vec<Label>> {
    let k = cycle.len();
    (0..k)
        .map(|i| directed_label(g, cycle[i], cycle[(i + 1) % k]))
        .collect()
}

/// Pairs of directed edges with equal labels, one undirected product edge per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberProduct {
    /// Vertex pairs incident to at least one product edge; the rest are isolated.
    pub pairs: Vec<(usize, usize)>,
    /// `(from, to, label)` over indices into `pairs`.
    pub edges: Vec<(usize, usize, Label)>,
    /// Set when both factors are the same labelled graph.
    pub same_graph: bool,
}

impl FiberProduct {
    pub fn on_diagonal(&self, pair: usize) -> bool {
        self.same_graph && self.pairs[pair].0 == self.pairs[pair].1
    }

    fn adjacency(&self) -> Adjacency {
        let mut adj = vec![Vec::new(); self.pairs.len()];
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }
}

pub fn fiber_product(lg1: &LabeledGraph, lg2: &LabeledGraph) -> FiberProduct {
    product(lg1, lg2, lg1 == lg2, false)
}

fn product(lg1: &LabeledGraph, lg2: &LabeledGraph, same: bool, drop_diagonal: bool) -> FiberProduct {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut edges = Vec::new();
    let mut id = |p: (usize, usize), pairs: &mut Vec<(usize, usize)>| {
        *index.entry(p).or_insert_with(|| {
            pairs.push(p);
            pairs.len() - 1
        })
    };
    let mut labels: Vec<Label> = lg1.by_label.keys().copied().filter(|l| l.is_positive()).collect();
    labels.sort_unstable();
    for l in labels {
        for &d1 in lg1.edges_with_label(l) {
            for &d2 in lg2.edges_with_label(l) {
                let from = (lg1.source(d1), lg2.source(d2));
                let to = (lg1.target(d1), lg2.target(d2));
                if drop_diagonal && same && from.0 == from.1 && to.0 == to.1 {
                    continue;
                }
                let a = id(from, &mut pairs);
                let b = id(to, &mut pairs);
                edges.push((a, b, l));
            }
        }
    }
    FiberProduct {
        pairs,
        edges,
        same_graph: same,
    }
}

/// The longest piece between two relators and a word realising it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub length: Length,
    /// Read in the first factor; absent for unbounded pieces.
    pub word: Option<Word>,
}

/// Longest reduced path in the fiber product off the diagonal.
///
/// In a product of reduced graphs reduced paths are exactly the
/// non-backtracking ones, so a component containing a cycle gives arbitrarily
/// long pieces and a tree component contributes its diameter.
pub fn max_piece_length(lg1: &LabeledGraph, lg2: &LabeledGraph) -> Piece {
    piece_between(lg1, lg2, lg1 == lg2)
}

fn piece_between(lg1: &LabeledGraph, lg2: &LabeledGraph, same: bool) -> Piece {
    let fp = product(lg1, lg2, same, true);
    let adj = fp.adjacency();
    let (count, comp) = graph::components(&adj);
    let mut sizes = vec![(0usize, 0usize); count];
    for &c in &comp {
        sizes[c].0 += 1;
    }
    for &(a, _, _) in &fp.edges {
        sizes[comp[a]].1 += 1;
    }
    if sizes.iter().any(|&(v, e)| e >= v) {
        return Piece {
            length: Length::Infinite,
            word: None,
        };
    }
    let mut best: Option<(usize, usize, usize)> = None; // (length, from, to)
    let mut done = vec![false; count];
    for v in 0..fp.pairs.len() {
        if done[comp[v]] {
            continue;
        }
        done[comp[v]] = true;
        let a = farthest(&graph::bfs(&adj, v).dist);
        let from_a = graph::bfs(&adj, a);
        let b = farthest(&from_a.dist);
        let len = from_a.dist[b].unwrap();
        if best.is_none_or(|(l, ..)| len > l) {
            best = Some((len, a, b));
        }
    }
    let Some((len, a, b)) = best else {
        return Piece {
            length: Length::Finite(0),
            word: Some(Word::default()),
        };
    };
    // walk from a to b: path_to_root(b) lists b back to a
    let (verts, path) = graph::bfs(&adj, a).path_to_root(b);
    let mut word: Vec<Label> = path
        .iter()
        .zip(verts.iter())
        .map(|(&e, &at)| {
            let (from, _, l) = fp.edges[e];
            // traversing towards the root from `at`
            if from == at {
                l
            } else {
                l.tau()
            }
        })
        .collect();
    // that reads b -> a; reverse to read a -> b
    word.reverse();
    let word = Word(word.into_iter().map(Label::tau).collect());
    Piece {
        length: Length::Finite(len),
        word: Some(word),
    }
}

fn farthest(dist: &[Option<usize>]) -> usize {
    let mut best = 0;
    for (v, d) in dist.iter().enumerate() {
        if d.is_some() && (dist[best].is_none() || d > &dist[best]) {
            best = v;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelatorOrigin {
    /// Degree-`degree` subdivision of the boundary of polygon `polygon`.
    Polygon { degree: i64, polygon: usize },
    /// Degree-`degree` subdivision of the whole 1-skeleton.
    Skeleton { degree: i64 },
    /// Supplied directly.
    Given { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub origin: RelatorOrigin,
    pub graph: LabeledGraph,
    pub girth: Length,
}

impl Relator {
    pub fn new(origin: RelatorOrigin, graph: LabeledGraph) -> Self {
        let girth = graph.girth();
        Relator { origin, graph, girth }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseParameters {
    pub girth: Length,
    pub perimeters: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicalPresentation {
    labels: LabelSet,
    relators: Vec<Relator>,
    base: Option<BaseParameters>,
    window: Vec<i64>,
    s: Vec<i64>,
    certificate: Option<FamilyCertificate>,
}

impl GraphicalPresentation {
    pub fn from_relators(labels: LabelSet, graphs: Vec<LabeledGraph>) -> Result<Self> {
        let relators = graphs
            .into_iter()
            .enumerate()
            .map(|(index, g)| Relator::new(RelatorOrigin::Given { index }, g))
            .collect();
        GraphicalPresentation::assemble(labels, relators, None, Vec::new(), Vec::new(), None)
    }

    /// One cycle relator per word.
    pub fn from_words(labels: LabelSet, words: &[Word]) -> Result<Self> {
        let graphs = words
            .iter()
            .map(LabeledGraph::cycle_from_word)
            .collect::<Result<Vec<_>>>()?;
        GraphicalPresentation::from_relators(labels, graphs)
    }

    fn assemble(
        labels: LabelSet,
        relators: Vec<Relator>,
        base: Option<BaseParameters>,
        window: Vec<i64>,
        s: Vec<i64>,
        certificate: Option<FamilyCertificate>,
    ) -> Result<Self> {
        for r in &relators {
            if let Some(&(_, _, l)) = r.graph.edges().iter().find(|e| !labels.contains(e.2)) {
                return Err(PresentationError::LabelOutOfRange {
                    label: l.0,
                    size: labels.len(),
                });
            }
        }
        Ok(GraphicalPresentation {
            labels,
            relators,
            base,
            window,
            s,
            certificate,
        })
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn base(&self) -> Option<&BaseParameters> {
        self.base.as_ref()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn s(&self) -> &[i64] {
        &self.s
    }

    /// The all-degree certificate of the complex this was materialised from.
    pub fn certificate(&self) -> Option<&FamilyCertificate> {
        self.certificate.as_ref()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.relators.iter().enumerate() {
            out.push_str(&r.graph.to_dot(&self.labels, &format!("R{i}")));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} labels, {} relators", self.labels.orbit_count(), self.relators.len());
        if !self.window.is_empty() {
            let _ = write!(out, ", window {:?}, S = {:?}", self.window, self.s);
        }
        out.push('\n');
        for (i, r) in self.relators.iter().enumerate() {
            let origin = match r.origin {
                RelatorOrigin::Polygon { degree, polygon } => format!("polygon {polygon}, degree {degree}"),
                RelatorOrigin::Skeleton { degree } => format!("1-skeleton, degree {degree}"),
                RelatorOrigin::Given { index } => format!("given #{index}"),
            };
            let _ = writeln!(
                out,
                "  R{i}: {origin}: {} vertices, {} edges, girth {}",
                r.graph.vertex_count(),
                r.graph.edge_count(),
                r.girth
            );
        }
        out
    }
}

/// Graphical presentation of `H(S)` truncated to the degrees in `window`: for
/// each `n` in the window (ascending), one relator per polygon when `n ∉ S`
/// and the whole 1-skeleton when `n ∈ S`, all degree-`n` subdivided and
/// tautologically labelled.
pub fn materialize_hs(k: &TwoComplex, window: &[i64], s: &[i64]) -> Result<GraphicalPresentation> {
    let window = normalize_degrees(window)?;
    let s = normalize_degrees(s)?;
    if let Some(&n) = s.iter().find(|n| !window.contains(n)) {
        return Err(PresentationError::NotInWindow(n));
    }
    let (labels, skeleton) = tautological_labelling(k.graph());
    let boundaries: Vec<LabeledGraph> = k.polygons().iter().map(|p| polygon_labelling(k.graph(), p)).collect();
    let mut relators = Vec::new();
    for &n in &window {
        if s.contains(&n) {
            relators.push(Relator::new(
                RelatorOrigin::Skeleton { degree: n },
                skeleton.degree_subdivision(n)?,
            ));
        } else {
            for (polygon, b) in boundaries.iter().enumerate() {
                relators.push(Relator::new(
                    RelatorOrigin::Polygon { degree: n, polygon },
                    b.degree_subdivision(n)?,
                ));
            }
        }
    }
    let base = BaseParameters {
        girth: k.girth(),
        perimeters: k.perimeters(),
    };
    let certificate = certify_c16_family(k).ok();
    GraphicalPresentation::assemble(labels, relators, Some(base), window, s, certificate)
}

fn normalize_degrees(v: &[i64]) -> Result<Vec<i64>> {
    let mut out = v.to_vec();
    out.sort_unstable();
    if out.contains(&0) {
        return Err(PresentationError::ZeroDegree);
    }
    if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
        return Err(PresentationError::RepeatedDegree(w[0]));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPiece {
    pub first: usize,
    pub second: usize,
    pub piece: Length,
    pub word: Option<String>,
    pub girths: [Length; 2],
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct C16Report {
    /// Always `"exhaustive"`: every relator pair of this finite presentation was examined.
    pub guarantee: String,
    pub relators: usize,
    pub pairs: Vec<PairPiece>,
    pub worst: Option<PairPiece>,
    pub passed: bool,
}

impl C16Report {
    pub fn failures(&self) -> impl Iterator<Item = &PairPiece> {
        self.pairs.iter().filter(|p| !p.passed)
    }

    pub fn to_text(&self) -> String {
        let verdict = if self.passed { "holds" } else { "fails" };
        let mut out = format!(
            "C'(1/6) {verdict} ({} relators, {} pairs, exhaustive)\n",
            self.relators,
            self.pairs.len()
        );
        if let Some(w) = &self.worst {
            let _ = writeln!(
                out,
                "  worst pair R{} / R{}: piece {} vs girths {} and {}{}",
                w.first,
                w.second,
                w.piece,
                w.girths[0],
                w.girths[1],
                w.word.as_ref().map(|s| format!(" [{s}]")).unwrap_or_default()
            );
        }
        out
    }
}

/// `6 * piece < girth`, with unbounded girth always winning over a finite piece.
fn short_enough(piece: Length, girth: Length) -> bool {
    match (piece, girth) {
        (Length::Infinite, _) => false,
        (Length::Finite(_), Length::Infinite) => true,
        (Length::Finite(p), Length::Finite(g)) => 6 * p < g,
    }
}

/// Examines every unordered relator pair, self-pairs included.
pub fn check_c16(p: &GraphicalPresentation) -> C16Report {
    let n = p.relators.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let results: Vec<PairPiece> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ri, rj) = (&p.relators[i], &p.relators[j]);
            let piece = piece_between(&ri.graph, &rj.graph, i == j);
            let passed = short_enough(piece.length, ri.girth) && short_enough(piece.length, rj.girth);
            PairPiece {
                first: i,
                second: j,
                piece: piece.length,
                word: piece.word.map(|w| p.labels.format_word(&w)),
                girths: [ri.girth, rj.girth],
                passed,
            }
        })
        .collect();
    // worst: largest 6*piece - min girth
    let score = |pp: &PairPiece| -> (bool, i128) {
        let g = pp.girths[0].min(pp.girths[1]);
        match (pp.piece, g) {
            (Length::Infinite, _) => (true, 0),
            (Length::Finite(x), Length::Finite(g)) => (false, 6 * x as i128 - g as i128),
            (Length::Finite(x), Length::Infinite) => (false, x as i128 - i64::MAX as i128),
        }
    };
    let worst = results.iter().fold(None::<&PairPiece>, |acc, pp| match acc {
        Some(w) if score(w) >= score(pp) => Some(w),
        _ => Some(pp),
    });
    C16Report {
        guarantee: "exhaustive".into(),
        relators: n,
        passed: results.iter().all(|r| r.passed),
        worst: worst.cloned(),
        pairs: results,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseBound {
    /// Longest piece, per unit of degree.
    pub piece: String,
    /// Girth it must stay below a sixth of, per unit of degree.
    pub limit: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonPairWitness {
    pub first: usize,
    pub second: usize,
    pub shared: Vec<usize>,
    pub shared_edges: usize,
    pub min_perimeter: usize,
}

/// C'(1/6) for the presentation of `H(S)` over every degree window and every
/// `S` at once, from three bounds on pieces between degree-`m` and degree-`n`
/// relators: different degrees share at most `2 min(|m|, |n|)`, a relator
/// with itself shares at most `|m| - 1`, and two polygon relators of one degree
/// share `|m|` times a component of their common boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCertificate {
    /// Always `"all degrees"`.
    pub guarantee: String,
    pub girth: usize,
    pub min_perimeter: usize,
    pub cross_degree: CaseBound,
    pub self_overlap: CaseBound,
    pub polygon_pairs: CaseBound,
    pub witness: Option<PolygonPairWitness>,
    pub valid: bool,
}

impl FamilyCertificate {
    pub fn to_text(&self) -> String {
        let mark = |b: bool| if b { "ok" } else { "FAILS" };
        format!(
            "C'(1/6) certificate for all degrees: {}\n  girth {}, shortest perimeter {}\n  different degrees: {} < {}/6  {}\n  same relator: {} < {}/6  {}\n  polygon pairs: {} < {}/6  {}\n",
            if self.valid { "valid" } else { "invalid" },
            self.girth,
            self.min_perimeter,
            self.cross_degree.piece,
            self.cross_degree.limit,
            mark(self.cross_degree.holds),
            self.self_overlap.piece,
            self.self_overlap.limit,
            mark(self.self_overlap.holds),
            self.polygon_pairs.piece,
            self.polygon_pairs.limit,
            mark(self.polygon_pairs.holds),
        )
    }
}

/// Fails only when the complex has no cycle or no polygon; an unmet bound
/// yields an invalid certificate instead.
pub fn certify_c16_family(k: &TwoComplex) -> Result<FamilyCertificate> {
    let g = k
        .girth()
        .finite()
        .ok_or_else(|| PresentationError::Precondition("a 1-skeleton with a cycle".into()))?;
    let min_perimeter = k
        .perimeters()
        .into_iter()
        .min()
        .ok_or_else(|| PresentationError::Precondition("at least one polygon".into()))?;
    // 2|m| < g|m|/6 for all m
    let cross_degree = CaseBound {
        piece: "2".into(),
        limit: format!("{g}"),
        holds: 12 < g,
    };
    // |m| - 1 < g|m|/6 for all m, i.e. (6 - g)|m| < 6
    let self_overlap = CaseBound {
        piece: "1 - 1/|m|".into(),
        limit: format!("{g}"),
        holds: g >= 6,
    };
    let overlap = worst_overlap(k);
    let witness = overlap.as_ref().map(|o| PolygonPairWitness {
        first: o.first,
        second: o.second,
        shared: o.piece.vertices.clone(),
        shared_edges: o.piece.edge_count(),
        min_perimeter: (o.excess + 6 * o.piece.edge_count() as i64) as usize,
    });
    let polygon_pairs = CaseBound {
        piece: witness.as_ref().map_or("0".into(), |w| w.shared_edges.to_string()),
        limit: witness.as_ref().map_or(min_perimeter, |w| w.min_perimeter).to_string(),
        holds: overlap.as_ref().is_none_or(|o| o.excess < 0),
    };
    let valid = cross_degree.holds && self_overlap.holds && polygon_pairs.holds;
    Ok(FamilyCertificate {
        guarantee: "all degrees".into(),
        girth: g,
        min_perimeter,
        cross_degree,
        self_overlap,
        polygon_pairs,
        witness: if valid { None } else { witness },
        valid,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelatorJson {
    origin: RelatorOrigin,
    vertices: Vec<usize>,
    edges: Vec<(usize, usize, String)>,
    girth: Length,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationJson {
    schema: u32,
    labels: Vec<String>,
    tau: Vec<u32>,
    window: Vec<i64>,
    s: Vec<i64>,
    base: Option<BaseParameters>,
    certificate: Option<FamilyCertificate>,
    relators: Vec<RelatorJson>,
}

impl Serialize for GraphicalPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let labels = &self.labels;
        PresentationJson {
            schema: 1,
            labels: labels.labels().map(|l| labels.name(l)).collect(),
            tau: labels.tau_table(),
            window: self.window.clone(),
            s: self.s.clone(),
            base: self.base.clone(),
            certificate: self.certificate.clone(),
            relators: self
                .relators
                .iter()
                .map(|r| RelatorJson {
                    origin: r.origin,
                    vertices: (0..r.graph.vertex_count()).collect(),
                    edges: r
                        .graph
                        .edges()
                        .iter()
                        .map(|&(u, v, l)| (u, v, labels.name(l)))
                        .collect(),
                    girth: r.girth,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphicalPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PresentationJson::deserialize(d)?;
        from_json(j).map_err(serde::de::Error::custom)
    }
}

fn from_json(j: PresentationJson) -> Result<GraphicalPresentation> {
    let bad = |m: &str| PresentationError::Json(m.to_string());
    if j.schema != 1 {
        return Err(bad("unsupported schema version"));
    }
    if !j.labels.len().is_multiple_of(2) {
        return Err(bad("label list must pair every label with its inverse"));
    }
    let names: Vec<String> = j.labels.iter().step_by(2).cloned().collect();
    let labels = LabelSet::new(names)?;
    if labels.labels().any(|l| labels.name(l) != j.labels[l.0 as usize]) || j.tau != labels.tau_table() {
        return Err(bad("labels must alternate name, ~name with tau swapping each pair"));
    }
    let mut relators = Vec::with_capacity(j.relators.len());
    for r in j.relators {
        if r.vertices.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(bad("relator vertices must be 0..n in order"));
        }
        let edges = r
            .edges
            .iter()
            .map(|(u, v, name)| labels.parse_label(name).map(|l| (*u, *v, l)))
            .collect::<Result<Vec<_>>>()?;
        let graph = LabeledGraph::new(r.vertices.len(), edges)?;
        let rel = Relator::new(r.origin, graph);
        if rel.girth != r.girth {
            return Err(bad("stored girth does not match the relator graph"));
        }
        relators.push(rel);
    }
    GraphicalPresentation::assemble(labels, relators, j.base, j.window, j.s, j.certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::subdivide_edges;

    fn genus_two() -> (LabelSet, LabeledGraph) {
        let labels = LabelSet::new(["a", "b", "c", "d", "e", "f"]).unwrap();
        let w = |s: &str| labels.parse_word(s).unwrap();
        // theta graph: x = 0, y = 1, three commutator paths from x to y
        let mut edges = Vec::new();
        let mut next = 2;
        for path in ["a b ~a ~b", "c d ~c ~d", "e f ~e ~f"] {
            let word = w(path);
            let mut prev = 0;
            for (i, &l) in word.labels().iter().enumerate() {
                let to = if i == 3 { 1 } else { next };
                if i < 3 {
                    next += 1;
                }
                edges.push((prev, to, l));
                prev = to;
            }
        }
        (labels.clone(), LabeledGraph::new(next, edges).unwrap())
    }

    #[test]
    fn label_parsing() {
        let labels = LabelSet::new(["x", "y"]).unwrap();
        let w = labels.parse_word("x ~y y^-1  x").unwrap();
        assert_eq!(w, Word(vec![Label(0), Label(3), Label(3), Label(0)]));
        assert_eq!(labels.format_word(&w), "x ~y ~y x");
        assert!(labels.parse_word("z").is_err());
        assert!(LabelSet::new(["x", "x"]).is_err());
        assert!(LabelSet::new(["~x"]).is_err());
        assert_eq!(labels.parse_word("").unwrap(), Word::default());
    }

    #[test]
    fn free_reduction() {
        let labels = LabelSet::new(["x", "y"]).unwrap();
        let w = labels.parse_word("x y ~y ~x y").unwrap();
        assert_eq!(labels.format_word(&w.free_reduce()), "y");
        assert!(!w.is_reduced());
        assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn tautological_triangle_and_path() {
        let (labels, lg) = tautological_labelling(&SimpleGraph::cycle(3));
        assert_eq!(labels.len(), 6);
        assert!(lg.is_reduced());
        let (labels, _) = tautological_labelling(&SimpleGraph::complete(9));
        assert_eq!(labels.len(), 72);
        let (_, path) = tautological_labelling(&SimpleGraph::path(3));
        assert!(matches!(
            path.not_reduced(),
            Some(NotReduced::LowValence { vertex: 0, valence: 1 })
        ));
    }

    #[test]
    fn degree_subdivisions() {
        let (labels, tri) = tautological_labelling(&SimpleGraph::cycle(3));
        assert_eq!(tri.degree_subdivision(1).unwrap(), tri);
        assert!(tri.degree_subdivision(0).is_err());
        let neg = tri.degree_subdivision(-1).unwrap();
        assert!(neg
            .edges()
            .iter()
            .zip(tri.edges())
            .all(|(a, b)| a.2 == b.2.tau() && a.0 == b.0));
        let two = tri.degree_subdivision(2).unwrap();
        assert_eq!(two.girth(), Length::Finite(6));
        assert!(two.is_reduced());
        let w = labels.parse_word("a1 a1 a2 a2 a3 a3").unwrap();
        assert_eq!(two.trace(0, &w), (6, 0));
    }

    #[test]
    fn tracing() {
        let (labels, tri) = tautological_labelling(&SimpleGraph::cycle(3));
        assert_eq!(tri.trace(0, &Word::default()), (0, 0));
        assert_eq!(tri.trace(0, &labels.parse_word("a1 a2 a3").unwrap()), (3, 0));
        assert_eq!(tri.trace(0, &labels.parse_word("a1 ~a1").unwrap()).0, 2);
        assert_eq!(tri.trace(0, &labels.parse_word("a2").unwrap()).0, 0);
    }

    #[test]
    fn products_of_disjoint_alphabets_are_empty() {
        let labels = LabelSet::new(["a", "b", "c", "d"]).unwrap();
        let g1 = LabeledGraph::cycle_from_word(&labels.parse_word("a b a b").unwrap()).unwrap();
        let g2 = LabeledGraph::cycle_from_word(&labels.parse_word("c d c").unwrap()).unwrap();
        assert!(fiber_product(&g1, &g2).edges.is_empty());
        assert_eq!(max_piece_length(&g1, &g2).length, Length::Finite(0));
        let fp = fiber_product(&g1, &g1);
        assert!(fp.same_graph);
        assert!((0..fp.pairs.len()).any(|i| fp.on_diagonal(i)));
        // (ab)^2 is periodic, so shifting by two gives an off-diagonal cycle
        assert_eq!(max_piece_length(&g1, &g1).length, Length::Infinite);
    }

    #[test]
    fn pieces_between_subdivided_cycles() {
        let (_, tri) = tautological_labelling(&SimpleGraph::cycle(5));
        let two = tri.degree_subdivision(2).unwrap();
        let three = tri.degree_subdivision(3).unwrap();
        let piece = max_piece_length(&two, &three);
        assert_eq!(piece.length, Length::Finite(4));
        let w = piece.word.unwrap();
        assert!((0..two.vertex_count()).any(|v| two.trace(v, &w).0 == 4));
        assert!((0..three.vertex_count()).any(|v| three.trace(v, &w).0 == 4));
        assert_eq!(max_piece_length(&three, &three).length, Length::Finite(2));
        assert_eq!(max_piece_length(&three, &two).length, Length::Finite(4));
    }

    #[test]
    fn genus_two_relators() {
        let (labels, theta) = genus_two();
        assert!(theta.is_reduced());
        assert_eq!(theta.girth(), Length::Finite(8));
        assert_eq!(max_piece_length(&theta, &theta).length, Length::Finite(1));
        let p = GraphicalPresentation::from_relators(labels.clone(), vec![theta]).unwrap();
        assert!(check_c16(&p).passed);

        let words = [
            labels.parse_word("a b ~a ~b d c ~d ~c").unwrap(),
            labels.parse_word("a b ~a ~b f e ~f ~e").unwrap(),
        ];
        let classical = GraphicalPresentation::from_words(labels, &words).unwrap();
        let report = check_c16(&classical);
        assert!(!report.passed);
        let worst = report.worst.unwrap();
        assert_eq!((worst.first, worst.second, worst.piece), (0, 1, Length::Finite(4)));
    }

    #[test]
    fn materialized_counts() {
        let k = TwoComplex::single_polygon(13);
        let p = materialize_hs(&k, &[1, 2, 3], &[2]).unwrap();
        assert_eq!(p.relators().len(), 3);
        assert_eq!(p.relators()[1].origin, RelatorOrigin::Skeleton { degree: 2 });
        assert_eq!(p.relators()[2].girth, Length::Finite(39));
        assert!(check_c16(&p).passed);
        assert!(p.certificate().unwrap().valid);
        assert_eq!(
            materialize_hs(&k, &[1, 2], &[3]).unwrap_err(),
            PresentationError::NotInWindow(3)
        );
        assert_eq!(
            materialize_hs(&k, &[0, 1], &[]).unwrap_err(),
            PresentationError::ZeroDegree
        );
    }

    #[test]
    fn certificate_rejects_girth_twelve() {
        let k = subdivide_edges(&TwoComplex::single_polygon(3), 4).unwrap();
        let cert = certify_c16_family(&k).unwrap();
        assert!(!cert.valid);
        assert!(!cert.cross_degree.holds);
        assert!(cert.polygon_pairs.holds);
        let tree = TwoComplex::new(SimpleGraph::path(4), vec![]).unwrap();
        assert!(certify_c16_family(&tree).is_err());
    }

    #[test]
    fn presentation_json_round_trip() {
        let k = TwoComplex::single_polygon(13);
        let p = materialize_hs(&k, &[-1, 2], &[2]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: GraphicalPresentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(json.starts_with("{\"schema\":1,\"labels\":[\"a1\",\"~a1\""));
    }
}
