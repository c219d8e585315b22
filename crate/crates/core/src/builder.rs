//! The construction pipeline: attach d-gons to the complete graph on the
//! projective line along orbits of a conjugacy class of PGL(2,q), keep the
//! polygons through a base vertex, then subdivide every edge.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{
    subdivide_edges, verify_spectacular, ComplexError, ConditionReport, Polygon, SimpleGraph, TwoComplex,
};
use crate::finite_geometry::{self, classes_of_order, epsilon_for, make_field, orbits, GeometryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("polygon order must be at least 3, got {0}")]
    OrderTooSmall(u64),
    #[error("epsilon must be +1 or -1, got {0}")]
    BadEpsilon(i8),
    #[error("{d} does not divide q{epsilon:+} = {}", *q as i64 + *epsilon as i64)]
    OrderDoesNotDivide { d: u64, q: u32, epsilon: i8 },
    #[error("subdivision factor must be at least 1")]
    ZeroSubdivision,
    #[error("class index {index} out of range: {count} classes of order {d}")]
    ClassIndex { index: usize, count: usize, d: u64 },
    #[error("no element of order {d} in PGL(2,{q})")]
    NoElementOfOrder { d: u64, q: u32 },
    #[error("base vertex {v0} out of range (complex has {count} vertices)")]
    BaseVertex { v0: usize, count: usize },
    #[error("expected {expected} polygons, built {built}")]
    PolygonCount { expected: u64, built: usize },
}

pub type Result<T> = std::result::Result<T, BuildError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildRecipe {
    pub p: u32,
    pub e: u32,
    pub d: u64,
    pub epsilon: i8,
    /// Index into the order-`d` classes sorted by least element.
    pub class_index: usize,
    pub v0: usize,
    pub subdivision: usize,
}

impl Default for BuildRecipe {
    fn default() -> Self {
        BuildRecipe {
            p: 2,
            e: 3,
            d: 7,
            epsilon: -1,
            class_index: 0,
            v0: 0,
            subdivision: 5,
        }
    }
}

impl BuildRecipe {
    /// Recipe for `GF(q)` and order `d`, with epsilon inferred and other fields defaulted.
    pub fn for_order(q: u32, d: u64) -> Result<Self> {
        let (p, e) = finite_geometry::prime_power(q)?;
        if d < 3 {
            return Err(BuildError::OrderTooSmall(d));
        }
        let epsilon = epsilon_for(q, d).ok_or(BuildError::OrderDoesNotDivide { d, q, epsilon: 1 })?;
        Ok(BuildRecipe {
            p,
            e,
            d,
            epsilon,
            ..BuildRecipe::default()
        })
    }

    pub fn with_subdivision(mut self, m: usize) -> Self {
        self.subdivision = m;
        self
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(BuildError::OrderTooSmall(self.d));
        }
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(BuildError::BadEpsilon(self.epsilon));
        }
        let q = self.q();
        if (q as i64 + self.epsilon as i64) % self.d as i64 != 0 {
            return Err(BuildError::OrderDoesNotDivide {
                d: self.d,
                q,
                epsilon: self.epsilon,
            });
        }
        if self.subdivision == 0 {
            return Err(BuildError::ZeroSubdivision);
        }
        Ok(())
    }

    /// `q(q² - 1) / 2d`
    pub fn expected_polygons(&self) -> u64 {
        let q = self.q() as u64;
        q * (q * q - 1) / (2 * self.d)
    }
}

/// Complete graph on the projective line with one polygon per orbit of size
/// `d`, for one element out of every inverse pair in the chosen class.
pub fn build_k1(r: &BuildRecipe) -> Result<TwoComplex> {
    r.validate()?;
    let field = make_field(r.p, r.e)?;
    let classes = classes_of_order(&field, r.d)?;
    if classes.is_empty() {
        return Err(BuildError::NoElementOfOrder { d: r.d, q: r.q() });
    }
    let class = classes.get(r.class_index).ok_or(BuildError::ClassIndex {
        index: r.class_index,
        count: classes.len(),
        d: r.d,
    })?;
    let mut processed = BTreeSet::new();
    let mut cycles = Vec::new();
    for x in class {
        if processed.contains(&field.inverse(x)?) {
            continue;
        }
        processed.insert(*x);
        cycles.extend(orbits(&field, x)?.into_iter().filter(|o| o.len() as u64 == r.d));
    }
    let n = r.q() as usize + 1;
    let k1 = TwoComplex::new(SimpleGraph::complete(n), cycles)?;
    let expected = r.expected_polygons();
    if k1.polygon_count() as u64 != expected {
        return Err(BuildError::PolygonCount {
            expected,
            built: k1.polygon_count(),
        });
    }
    Ok(k1)
}

/// Keeps the polygons whose boundary passes through `v0`.
pub fn build_k2(k1: &TwoComplex, v0: usize) -> Result<TwoComplex> {
    if v0 >= k1.vertex_count() {
        return Err(BuildError::BaseVertex {
            v0,
            count: k1.vertex_count(),
        });
    }
    Ok(k1.retain_polygons(|p| p.contains(v0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildStage {
    K1,
    K2,
    Full,
}

pub fn build_stage(r: &BuildRecipe, stage: BuildStage) -> Result<TwoComplex> {
    let k1 = build_k1(r)?;
    if stage == BuildStage::K1 {
        return Ok(k1);
    }
    let k2 = build_k2(&k1, r.v0)?;
    if stage == BuildStage::K2 || r.subdivision == 1 {
        return Ok(k2);
    }
    Ok(subdivide_edges(&k2, r.subdivision)?)
}

/// The subdivided complex with its seven-condition report. A subdivision
/// factor of 1 leaves the second stage untouched.
pub fn build_spectacular(r: &BuildRecipe) -> Result<(TwoComplex, ConditionReport)> {
    let k = build_stage(r, BuildStage::Full)?;
    let report = verify_spectacular(&k);
    Ok((k, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleWitness {
    pub triple: [usize; 3],
    /// Indices of the polygons containing the triple consecutively.
    pub polygons: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    /// No ordered triple lies consecutively on two polygons.
    pub holds: bool,
    /// Consecutive ordered triples summed over polygons (2 x perimeter each).
    pub incidences: usize,
    /// Ordered triples of distinct vertices, `n(n-1)(n-2)`.
    pub ordered_triples: usize,
    pub counterexample: Option<TripleWitness>,
}

impl TripleReport {
    /// Every ordered triple of distinct vertices lies on exactly one polygon.
    pub fn is_exact_cover(&self) -> bool {
        self.holds && self.incidences == self.ordered_triples
    }
}

/// Counts polygons through each consecutive ordered triple `(u, v, w)`.
pub fn check_triples(c: &TwoComplex) -> TripleReport {
    let mut seen: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
    let mut incidences = 0;
    for (k, p) in c.polygons().iter().enumerate() {
        for t in consecutive_triples(p) {
            seen.entry(t).or_default().push(k);
            incidences += 1;
        }
    }
    let counterexample = seen
        .into_iter()
        .filter(|(_, ps)| ps.len() > 1)
        .min()
        .map(|(triple, polygons)| TripleWitness { triple, polygons });
    let n = c.vertex_count();
    TripleReport {
        holds: counterexample.is_none(),
        incidences,
        ordered_triples: n * n.saturating_sub(1) * n.saturating_sub(2),
        counterexample,
    }
}

fn consecutive_triples(p: &Polygon) -> impl Iterator<Item = [usize; 3]> + '_ {
    let vs = p.vertices();
    let n = vs.len();
    (0..n).flat_map(move |i| {
        let t = [vs[(i + n - 1) % n], vs[i], vs[(i + 1) % n]];
        [t, [t[2], t[1], t[0]]]
    })
}

/// A vertex bijection `f` carrying edges onto edges and polygons onto
/// polygons, if one exists.
///
/// Backtracking over vertex images; whenever three consecutive vertices of a
/// polygon are placed and their image lies on a single polygon of `b`, the
/// rest of that polygon is forced.
pub fn find_isomorphism(a: &TwoComplex, b: &TwoComplex) -> Option<Vec<usize>> {
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.polygon_count() != b.polygon_count()
    {
        return None;
    }
    let mut pa = a.perimeters();
    let mut pb = b.perimeters();
    pa.sort_unstable();
    pb.sort_unstable();
    if pa != pb {
        return None;
    }
    let mut b_triples: HashMap<[usize; 3], Vec<(usize, usize, bool)>> = HashMap::new();
    for (k, p) in b.polygons().iter().enumerate() {
        let vs = p.vertices();
        let n = vs.len();
        for i in 0..n {
            let t = [vs[(i + n - 1) % n], vs[i], vs[(i + 1) % n]];
            b_triples.entry(t).or_default().push((k, i, true));
            b_triples.entry([t[2], t[1], t[0]]).or_default().push((k, i, false));
        }
    }
    let search = IsoSearch { a, b, b_triples };
    let n = a.vertex_count();
    search.extend(vec![None; n], vec![false; n])
}

struct IsoSearch<'a> {
    a: &'a TwoComplex,
    b: &'a TwoComplex,
    b_triples: HashMap<[usize; 3], Vec<(usize, usize, bool)>>,
}

impl IsoSearch<'_> {
    fn extend(&self, mut f: Vec<Option<usize>>, mut used: Vec<bool>) -> Option<Vec<usize>> {
        if !self.propagate(&mut f, &mut used) {
            return None;
        }
        let Some(v) = f.iter().position(Option::is_none) else {
            let f: Vec<usize> = f.into_iter().map(Option::unwrap).collect();
            return self.verify(&f).then_some(f);
        };
        let ga = self.a.graph();
        let gb = self.b.graph();
        for w in 0..f.len() {
            if used[w] || ga.valence(v) != gb.valence(w) {
                continue;
            }
            let consistent = (0..f.len()).all(|u| match f[u] {
                Some(fu) => ga.edge_index(u, v).is_some() == gb.edge_index(fu, w).is_some(),
                None => true,
            });
            if !consistent {
                continue;
            }
            let (mut f2, mut used2) = (f.clone(), used.clone());
            f2[v] = Some(w);
            used2[w] = true;
            if let Some(found) = self.extend(f2, used2) {
                return Some(found);
            }
        }
        None
    }

    fn assign(f: &mut [Option<usize>], used: &mut [bool], v: usize, w: usize) -> Option<bool> {
        match f[v] {
            Some(x) if x == w => Some(false),
            Some(_) => None,
            None if used[w] => None,
            None => {
                f[v] = Some(w);
                used[w] = true;
                Some(true)
            }
        }
    }

    /// Returns false on a contradiction.
    fn propagate(&self, f: &mut [Option<usize>], used: &mut [bool]) -> bool {
        let mut changed = true;
        while changed {
            changed = false;
            for p in self.a.polygons() {
                let vs = p.vertices();
                let n = vs.len();
                for i in 0..n {
                    let t = [vs[(i + n - 1) % n], vs[i], vs[(i + 1) % n]];
                    let (Some(x), Some(y), Some(z)) = (f[t[0]], f[t[1]], f[t[2]]) else {
                        continue;
                    };
                    let hits = self.b_triples.get(&[x, y, z]).map_or(&[][..], Vec::as_slice);
                    let &[(k, j, forward)] = hits else {
                        if hits.is_empty() {
                            return false;
                        }
                        continue;
                    };
                    let ws = self.b.polygons()[k].vertices();
                    if ws.len() != n {
                        return false;
                    }
                    for s in 0..n {
                        let target = if forward {
                            ws[(j + s) % n]
                        } else {
                            ws[(j + n - s % n) % n]
                        };
                        match Self::assign(f, used, vs[(i + s) % n], target) {
                            None => return false,
                            Some(fresh) => changed |= fresh,
                        }
                    }
                }
            }
        }
        true
    }

    fn verify(&self, f: &[usize]) -> bool {
        let gb = self.b.graph();
        if !self
            .a
            .graph()
            .edges()
            .iter()
            .all(|&(u, v)| gb.edge_index(f[u], f[v]).is_some())
        {
            return false;
        }
        let mut mapped: Vec<Polygon> = self
            .a
            .polygons()
            .iter()
            .filter_map(|p| Polygon::new(p.vertices().iter().map(|&v| f[v]).collect()).ok())
            .collect();
        mapped.sort();
        mapped == self.b.polygons()
    }
}
