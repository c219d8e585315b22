//! Dehn reduction over graphical C'(1/6) presentations: a word is replaced
//! whenever more than half of a relator cycle can be read in it, and it
//! represents the identity exactly when this reaches the empty word.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{shortest_cycle, TwoComplex};
use crate::graph;
use crate::homology::{smith_normal_form, IntMatrix, SmithForm};
use crate::presentations::{
    check_c16, cycle_labels, materialize_hs, C16Report, FamilyCertificate, GraphicalPresentation, Label, LabelSet,
    LabeledGraph, PresentationError, RelatorOrigin, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("presentation refused: {0}")]
    Refused(String),
    #[error("word of length {length} exceeds the budget {budget}")]
    Budget { length: usize, budget: usize },
    #[error("S must be a subset of T")]
    NotNested,
    #[error("the complex has no cycle to read a tuple from")]
    NoCycle,
    #[error("empty range {0}..{1}")]
    EmptyRange(i64, i64),
}

pub type Result<T> = std::result::Result<T, WordError>;

/// Default cap on the length of words built from tuples.
pub const DEFAULT_WORD_BUDGET: usize = 1024;

/// What guarantees the Dehn property for a reducer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Certificate covering every degree of the family the presentation came from.
    Certificate { certificate: Box<FamilyCertificate> },
    /// Every relator pair of this presentation was checked.
    Exhaustive { relators: usize, pairs: usize },
}

/// One replacement: `matched` letters from `position` read a path from
/// `start` to `end` in relator `relator`, replaced by a shorter path back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub relator: usize,
    pub origin: RelatorOrigin,
    pub position: usize,
    pub start: usize,
    pub end: usize,
    pub matched: usize,
    pub replacement: Word,
    pub result: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: Word,
    pub steps: Vec<Step>,
    pub final_word: Word,
    pub trivial: bool,
    /// Relators with girth above this (twice the reduced input length) were never consulted.
    pub girth_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepView {
    pub relator: usize,
    pub origin: RelatorOrigin,
    pub position: usize,
    pub start: usize,
    pub end: usize,
    pub matched: usize,
    pub replacement: String,
    pub result: String,
}

/// A trace with words spelled out by label name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceView {
    pub initial: String,
    pub steps: Vec<StepView>,
    #[serde(rename = "final")]
    pub final_word: String,
    pub trivial: bool,
    pub girth_budget: usize,
}

impl ReductionTrace {
    pub fn view(&self, labels: &LabelSet) -> TraceView {
        TraceView {
            initial: labels.format_word(&self.initial),
            steps: self
                .steps
                .iter()
                .map(|s| StepView {
                    relator: s.relator,
                    origin: s.origin,
                    position: s.position,
                    start: s.start,
                    end: s.end,
                    matched: s.matched,
                    replacement: labels.format_word(&s.replacement),
                    result: labels.format_word(&s.result),
                })
                .collect(),
            final_word: labels.format_word(&self.final_word),
            trivial: self.trivial,
            girth_budget: self.girth_budget,
        }
    }
}

impl TraceView {
    pub fn to_text(&self) -> String {
        let mut out = format!("word: {}\n", or_empty(&self.initial));
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "  step {}: R{} reads {} letters at {} ({} -> {}), replaced by [{}] -> {}\n",
                i + 1,
                s.relator,
                s.matched,
                s.position,
                s.start,
                s.end,
                s.replacement,
                or_empty(&s.result)
            ));
        }
        out.push_str(&format!(
            "result: {} ({})\n",
            or_empty(&self.final_word),
            if self.trivial { "trivial" } else { "nontrivial" }
        ));
        out
    }
}

fn or_empty(s: &str) -> &str {
    if s.is_empty() {
        "(empty)"
    } else {
        s
    }
}

/// One Dehn step with the deterministic scan order: leftmost position, then
/// longest match, then lowest relator index, then lowest start edge.
///
/// `w` must be freely reduced. Only relators of girth at most `2|w|` can
/// contribute: a match of length `j` with a return of length `< j` closes a
/// cycle shorter than `2j`.
pub fn dehn_step(p: &GraphicalPresentation, w: &Word) -> Option<Step> {
    let len = w.len();
    let eligible: Vec<usize> = (0..p.relators().len())
        .filter(|&r| p.relators()[r].girth.finite().is_some_and(|g| g <= 2 * len))
        .collect();
    for i in 0..len {
        let mut best: Option<(usize, usize, usize, usize, Word)> = None; // (matched, relator, start, end, return)
        for &r in &eligible {
            let rel = &p.relators()[r];
            let g = rel.girth.finite().unwrap();
            let lg = &rel.graph;
            for &d in lg.edges_with_label(w.0[i]) {
                let start = lg.source(d);
                let mut v = lg.target(d);
                let mut j = 1;
                while i + j < len {
                    match lg.step(v, w.0[i + j]) {
                        Some(next) => {
                            v = lg.target(next);
                            j += 1;
                        }
                        None => break,
                    }
                }
                if 2 * j <= g || best.as_ref().is_some_and(|b| j <= b.0) {
                    continue;
                }
                if let Some(back) = return_path(lg, start, v, j) {
                    best = Some((j, r, start, v, back));
                }
            }
        }
        if let Some((matched, relator, start, end, replacement)) = best {
            let mut out = w.0[..i].to_vec();
            out.extend_from_slice(&replacement.0);
            out.extend_from_slice(&w.0[i + matched..]);
            return Some(Step {
                relator,
                origin: p.relators()[relator].origin,
                position: i,
                start,
                end,
                matched,
                replacement,
                result: Word(out).free_reduce(),
            });
        }
    }
    None
}

/// Label word of a shortest path `end -> start` of length below `limit`.
fn return_path(lg: &LabeledGraph, start: usize, end: usize, limit: usize) -> Option<Word> {
    if start == end {
        return Some(Word::default());
    }
    // BFS from `start`; the path start -> end read backwards is the return.
    let mut parent: Vec<Option<usize>> = vec![None; lg.vertex_count()];
    let mut dist = vec![usize::MAX; lg.vertex_count()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if dist[u] + 1 >= limit {
            break;
        }
        for &d in lg.out_edges(u) {
            let t = lg.target(d);
            if dist[t] == usize::MAX {
                dist[t] = dist[u] + 1;
                parent[t] = Some(d);
                if t == end {
                    let mut labels = Vec::new();
                    let mut x = end;
                    while let Some(d) = parent[x] {
                        labels.push(lg.label(d).tau());
                        x = lg.source(d);
                    }
                    return Some(Word(labels));
                }
                queue.push_back(t);
            }
        }
    }
    None
}

/// A presentation together with evidence that it has the Dehn property.
#[derive(Debug, Clone)]
pub struct DehnReducer<'a> {
    presentation: &'a GraphicalPresentation,
    evidence: Evidence,
}

impl<'a> DehnReducer<'a> {
    /// Uses the family certificate when one is attached and valid, otherwise
    /// checks every relator pair; refuses if neither succeeds.
    pub fn new(p: &'a GraphicalPresentation) -> Result<Self> {
        if let Some(cert) = p.certificate().filter(|c| c.valid) {
            return Ok(DehnReducer {
                presentation: p,
                evidence: Evidence::Certificate {
                    certificate: Box::new(cert.clone()),
                },
            });
        }
        let report = check_c16(p);
        DehnReducer::with_report(p, &report)
    }

    /// Reuses an exhaustive report already computed for `p`.
    pub fn with_report(p: &'a GraphicalPresentation, report: &C16Report) -> Result<Self> {
        if report.relators != p.relators().len() {
            return Err(WordError::Refused("report belongs to another presentation".into()));
        }
        if !report.passed {
            let detail = report.worst.as_ref().map_or(String::new(), |w| {
                format!(
                    ": relators {} and {} share a piece of length {}",
                    w.first, w.second, w.piece
                )
            });
            return Err(WordError::Refused(format!("graphical C'(1/6) fails{detail}")));
        }
        Ok(DehnReducer {
            presentation: p,
            evidence: Evidence::Exhaustive {
                relators: report.relators,
                pairs: report.pairs.len(),
            },
        })
    }

    pub fn presentation(&self) -> &GraphicalPresentation {
        self.presentation
    }

    pub fn evidence(&self) -> &Evidence {
        &self.evidence
    }

    /// Free reduction, then Dehn steps until none applies.
    pub fn reduce(&self, w: &Word) -> ReductionTrace {
        let mut current = w.free_reduce();
        let girth_budget = 2 * current.len();
        let mut steps = Vec::new();
        while let Some(step) = dehn_step(self.presentation, &current) {
            current = step.result.clone();
            steps.push(step);
        }
        ReductionTrace {
            initial: w.clone(),
            steps,
            trivial: current.is_empty(),
            final_word: current,
            girth_budget,
        }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.reduce(w).trivial
    }
}

/// Decides `w = 1`, refusing presentations without C'(1/6) evidence.
pub fn is_trivial(p: &GraphicalPresentation, w: &Word) -> Result<(bool, ReductionTrace)> {
    let trace = DehnReducer::new(p)?.reduce(w);
    Ok((trace.trivial, trace))
}

/// Labels read once around a shortest cycle of the 1-skeleton.
pub fn girth_cycle_tuple(k: &TwoComplex) -> Result<Vec<Label>> {
    let cycle = shortest_cycle(k.graph()).ok_or(WordError::NoCycle)?;
    Ok(cycle_labels(k.graph(), &cycle).expect("cycle edges exist"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RInvariant {
    pub tuple: String,
    pub range: [i64; 2],
    pub members: Vec<i64>,
    pub window: Vec<i64>,
    pub s: Vec<i64>,
    pub longest_word: usize,
    /// Largest relator girth any reduction could consult.
    pub girth_budget: usize,
    pub evidence: Evidence,
}

impl RInvariant {
    pub fn to_text(&self) -> String {
        let members: Vec<String> = self.members.iter().map(i64::to_string).collect();
        let basis = match &self.evidence {
            Evidence::Certificate { .. } => "all-degree certificate".to_string(),
            Evidence::Exhaustive { pairs, .. } => format!("exhaustive check of {pairs} pairs"),
        };
        format!(
            "R = {{{}}} for n in {}..{} (window {:?}, S = {:?})\n  longest word {}, girth budget {}, C'(1/6) by {basis}\n",
            members.join(", "),
            self.range[0],
            self.range[1],
            self.window,
            self.s,
            self.longest_word,
            self.girth_budget
        )
    }
}

/// `{n in range : g₁ⁿ⋯g_lⁿ = 1}` in the windowed presentation of `H(S)`.
pub fn r_invariant(
    k: &TwoComplex,
    window: &[i64],
    s: &[i64],
    tuple: &[Label],
    range: (i64, i64),
    budget: usize,
) -> Result<RInvariant> {
    if range.0 > range.1 {
        return Err(WordError::EmptyRange(range.0, range.1));
    }
    let longest = range.0.unsigned_abs().max(range.1.unsigned_abs()) as usize * tuple.len();
    if longest > budget {
        return Err(WordError::Budget {
            length: longest,
            budget,
        });
    }
    let p = materialize_hs(k, window, s)?;
    let reducer = DehnReducer::new(&p)?;
    let members = (range.0..=range.1)
        .filter(|&n| reducer.is_trivial(&Word::power_product(tuple, n)))
        .collect();
    Ok(RInvariant {
        tuple: p.labels().format_word(&Word(tuple.to_vec())),
        range: [range.0, range.1],
        members,
        window: p.window().to_vec(),
        s: p.s().to_vec(),
        longest_word: longest,
        girth_budget: 2 * longest,
        evidence: reducer.evidence().clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWitness {
    pub degree: i64,
    pub trivial_in_s: bool,
    pub trivial_in_t: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWitnessReport {
    pub s: Vec<i64>,
    pub t: Vec<i64>,
    pub witnesses: Vec<KernelWitness>,
    pub passed: bool,
}

/// For each `n` in `T \ S`, the girth-cycle word `a₁ⁿ⋯a_gⁿ` must be
/// nontrivial in `H(S)` and trivial in `H(T)`.
pub fn kernel_witness_check(
    k: &TwoComplex,
    window: &[i64],
    s: &[i64],
    t: &[i64],
    budget: usize,
) -> Result<KernelWitnessReport> {
    let s_set: BTreeSet<i64> = s.iter().copied().collect();
    let t_set: BTreeSet<i64> = t.iter().copied().collect();
    if !s_set.is_subset(&t_set) {
        return Err(WordError::NotNested);
    }
    let degrees: Vec<i64> = t_set.difference(&s_set).copied().collect();
    if degrees.is_empty() {
        return Ok(KernelWitnessReport {
            s: s_set.into_iter().collect(),
            t: t_set.into_iter().collect(),
            witnesses: Vec::new(),
            passed: true,
        });
    }
    let tuple = girth_cycle_tuple(k)?;
    let ps = materialize_hs(k, window, s)?;
    let pt = materialize_hs(k, window, t)?;
    let (rs, rt) = (DehnReducer::new(&ps)?, DehnReducer::new(&pt)?);
    let mut witnesses = Vec::new();
    for n in degrees {
        let length = n.unsigned_abs() as usize * tuple.len();
        if length > budget {
            return Err(WordError::Budget { length, budget });
        }
        let w = Word::power_product(&tuple, n);
        witnesses.push(KernelWitness {
            degree: n,
            trivial_in_s: rs.is_trivial(&w),
            trivial_in_t: rt.is_trivial(&w),
        });
    }
    Ok(KernelWitnessReport {
        passed: witnesses.iter().all(|w| !w.trivial_in_s && w.trivial_in_t),
        s: s_set.into_iter().collect(),
        t: t_set.into_iter().collect(),
        witnesses,
    })
}

/// Abelianisation of a presentation: `Z^orbits` modulo the images of all
/// relator cycles, with the relation lattice in Smith form.
#[derive(Debug, Clone)]
pub struct Abelianization {
    generators: usize,
    smith: SmithForm,
}

impl Abelianization {
    pub fn of(p: &GraphicalPresentation) -> Self {
        let n = p.labels().orbit_count();
        let mut rows: BTreeSet<Vec<i64>> = BTreeSet::new();
        for r in p.relators() {
            rows.extend(cycle_space(&r.graph, n));
        }
        let rows: Vec<Vec<i64>> = rows.into_iter().collect();
        let m = if rows.is_empty() {
            IntMatrix::zeros(0, n)
        } else {
            IntMatrix::from_rows(&rows)
        };
        Abelianization {
            generators: n,
            smith: smith_normal_form(&m),
        }
    }

    pub fn image(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.generators];
        for &l in w.labels() {
            v[l.orbit()] += if l.is_positive() { 1 } else { -1 };
        }
        v
    }

    /// Whether `w` maps to zero.
    pub fn kills(&self, w: &Word) -> bool {
        let v = self.image(w);
        let vv = &self.smith.v;
        (0..self.generators).all(|j| {
            let y: BigInt = (0..self.generators).map(|i| BigInt::from(v[i]) * &vv[(i, j)]).sum();
            match self.smith.diagonal.get(j) {
                Some(d) => y.is_multiple_of(d),
                None => y.is_zero(),
            }
        })
    }

    pub fn free_rank(&self) -> usize {
        self.generators - self.smith.rank
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.smith
            .diagonal
            .iter()
            .filter(|d| *d != &BigInt::from(1))
            .cloned()
            .collect()
    }
}

/// Abelianised fundamental cycles of a labelled graph.
fn cycle_space(lg: &LabeledGraph, generators: usize) -> Vec<Vec<i64>> {
    let adj = lg.adjacency();
    let (count, comp) = graph::components(&adj);
    let mut potential: Vec<Option<Vec<i64>>> = vec![None; lg.vertex_count()];
    let mut tree_edge = vec![false; lg.edge_count()];
    for c in 0..count {
        let root = comp.iter().position(|&x| x == c).unwrap();
        let tree = graph::bfs(&adj, root);
        let mut order: Vec<usize> = (0..lg.vertex_count()).filter(|&v| tree.dist[v].is_some()).collect();
        order.sort_by_key(|&v| tree.dist[v]);
        for v in order {
            let value = match tree.parent[v] {
                None => vec![0; generators],
                Some((u, e)) => {
                    tree_edge[e] = true;
                    let (a, _, l) = lg.edges()[e];
                    let mut val = potential[u].clone().unwrap();
                    let sign = if l.is_positive() { 1 } else { -1 };
                    val[l.orbit()] += if a == u { sign } else { -sign };
                    val
                }
            };
            potential[v] = Some(value);
        }
    }
    lg.edges()
        .iter()
        .enumerate()
        .filter(|&(e, _)| !tree_edge[e])
        .map(|(_, &(u, v, l))| {
            let (pu, pv) = (potential[u].as_ref().unwrap(), potential[v].as_ref().unwrap());
            let mut row: Vec<i64> = pu.iter().zip(pv).map(|(a, b)| a - b).collect();
            row[l.orbit()] += if l.is_positive() { 1 } else { -1 };
            row
        })
        .filter(|row| row.iter().any(|&x| x != 0))
        .collect()
}
