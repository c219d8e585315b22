//! Integral homology of 2-complexes through Smith normal form.
//!
//! Two routes compute invariant factors: [`smith_normal_form`] works on a dense
//! matrix and records the unimodular transforms, while the sparse route used by
//! [`homology`] eliminates unit pivots first and only densifies whatever is left.
//! Entries are arbitrary precision throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complexes::TwoComplex;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= k * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let delta = k * s;
                self.data[dst * self.cols + j] -= delta;
            }
        }
    }

    /// col[dst] -= k * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let delta = k * s;
                self.data[i * self.cols + dst] -= delta;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = -std::mem::take(x);
        }
    }
}

/// `u * m * v` is diagonal with entries `diagonal` (then zeros); `u` and `v`
/// are unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal matrix `u * m * v` with the shape of `m`.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.rows());
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

struct SnfCalc {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl SnfCalc {
    /// Smallest nonzero |entry| in the trailing block, ties in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &BigInt)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(_, _, b)| x.abs() < b.abs()) {
                    best = Some((i, j, x));
                    if x.abs().is_one() {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.a.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.a.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }

    fn sub_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.sub_row(dst, src, k);
        if let Some(u) = &mut self.u {
            u.sub_row(dst, src, k);
        }
    }

    fn sub_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.sub_col(dst, src, k);
        if let Some(v) = &mut self.v {
            v.sub_col(dst, src, k);
        }
    }

    fn run(&mut self) -> Vec<BigInt> {
        let (rows, cols) = (self.a.rows, self.a.cols);
        let mut diagonal = Vec::new();
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.pivot(t) else {
                    return diagonal;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.a[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..rows {
                    if !self.a[(i, t)].is_zero() {
                        let k = &self.a[(i, t)] / &p;
                        self.sub_row(i, t, &k);
                        dirty |= !self.a[(i, t)].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[(t, j)].is_zero() {
                        let k = &self.a[(t, j)] / &p;
                        self.sub_col(j, t, &k);
                        dirty |= !self.a[(t, j)].is_zero();
                    }
                }
                if dirty {
                    continue;
                }
                if !p.abs().is_one() {
                    let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !self.a[(i, j)].is_multiple_of(&p)));
                    if let Some(i) = bad {
                        // row t += row i, then the next pass produces a smaller pivot
                        self.sub_row(t, i, &BigInt::from(-1));
                        continue;
                    }
                }
                break;
            }
            if self.a[(t, t)].is_negative() {
                self.a.negate_row(t);
                if let Some(u) = &mut self.u {
                    u.negate_row(t);
                }
            }
            diagonal.push(self.a[(t, t)].clone());
        }
        diagonal
    }
}

/// Dense Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut calc = SnfCalc {
        a: m.clone(),
        u: Some(IntMatrix::identity(m.rows())),
        v: Some(IntMatrix::identity(m.cols())),
    };
    let diagonal = calc.run();
    SmithForm {
        rank: diagonal.len(),
        diagonal,
        u: calc.u.unwrap(),
        v: calc.v.unwrap(),
    }
}

fn dense_invariant_factors(m: IntMatrix) -> Vec<BigInt> {
    SnfCalc { a: m, u: None, v: None }.run()
}

/// Sparse integer matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: vec![BTreeMap::new(); rows],
        }
    }

    pub fn add(&mut self, i: usize, j: usize, x: i64) {
        let e = self.entries[i].entry(j).or_insert_with(BigInt::zero);
        *e += x;
        if e.is_zero() {
            self.entries[i].remove(&j);
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (&j, x) in row {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let mut s = SparseMatrix::new(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    s.entries[i].insert(j, m[(i, j)].clone());
                }
            }
        }
        s
    }
}

/// Nonzero invariant factors (ascending divisibility chain) by sparse elimination.
///
/// Unit pivots are taken greedily, cheapest `(row len - 1) * (col len - 1)`
/// first; eliminating a unit pivot leaves the invariant factors of the rest
/// unchanged apart from one factor 1. The residue without unit entries goes
/// through the dense algorithm.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut rows = m.entries.clone();
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            cols[j].insert(i);
        }
    }
    let mut alive = vec![true; m.rows];
    let mut units = 0usize;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            for (&j, x) in row {
                if x.abs().is_one() {
                    let cost = (row.len() - 1) * (cols[j].len() - 1);
                    if best.is_none_or(|b| cost < b.0) {
                        best = Some((cost, i, j));
                    }
                }
            }
        }
        let Some((_, p, c)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[p]);
        let sign = pivot_row[&c].clone();
        let others: Vec<usize> = cols[c].iter().copied().filter(|&r| r != p).collect();
        for r in others {
            let k = &rows[r][&c] * &sign;
            for (&j, x) in &pivot_row {
                let e = rows[r].entry(j).or_insert_with(BigInt::zero);
                *e -= &k * x;
                if e.is_zero() {
                    rows[r].remove(&j);
                    cols[j].remove(&r);
                } else {
                    cols[j].insert(r);
                }
            }
        }
        for &j in pivot_row.keys() {
            cols[j].remove(&p);
        }
        alive[p] = false;
        units += 1;
    }

    let live_rows: Vec<usize> = (0..m.rows).filter(|&i| alive[i] && !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&j| !cols[j].is_empty()).collect();
    let mut factors = vec![BigInt::one(); units];
    if !live_rows.is_empty() {
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut rest = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (k, &i) in live_rows.iter().enumerate() {
            for (j, x) in &rows[i] {
                rest[(k, col_pos[j])] = x.clone();
            }
        }
        factors.extend(dense_invariant_factors(rest));
    }
    factors
}

/// Dense boundary maps: `∂₁` is vertices x edges with each edge oriented from
/// its smaller vertex id to its larger; `∂₂` is edges x polygons with signs read
/// along each stored polygon cycle.
pub fn boundary_matrices(c: &TwoComplex) -> (IntMatrix, IntMatrix) {
    let (d1, d2) = sparse_boundaries(c);
    (d1.to_dense(), d2.to_dense())
}

pub fn sparse_boundaries(c: &TwoComplex) -> (SparseMatrix, SparseMatrix) {
    let g = c.graph();
    let mut d1 = SparseMatrix::new(g.vertex_count(), g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        d1.add(u.min(v), e, -1);
        d1.add(u.max(v), e, 1);
    }
    let mut d2 = SparseMatrix::new(g.edge_count(), c.polygon_count());
    for (k, p) in c.polygons().iter().enumerate() {
        for (a, b) in p.sides() {
            let e = g.edge_index(a, b).expect("polygon sides are edges");
            d2.add(e, k, if a < b { 1 } else { -1 });
        }
    }
    (d1, d2)
}

mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Num {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let nums: Vec<Num> = v
            .iter()
            .map(|x| i64::try_from(x).map_or_else(|_| Num::Big(x.to_string()), Num::Small))
            .collect();
        nums.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Num>::deserialize(d)?
            .into_iter()
            .map(|n| match n {
                Num::Small(x) => Ok(BigInt::from(x)),
                Num::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

/// Betti numbers and torsion coefficients in degrees 0, 1, 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub betti: [usize; 3],
    #[serde(with = "bigint_list")]
    pub torsion_h0: Vec<BigInt>,
    #[serde(with = "bigint_list")]
    pub torsion_h1: Vec<BigInt>,
    #[serde(with = "bigint_list")]
    pub torsion_h2: Vec<BigInt>,
}

impl HomologyReport {
    pub fn torsion(&self, degree: usize) -> &[BigInt] {
        match degree {
            0 => &self.torsion_h0,
            1 => &self.torsion_h1,
            2 => &self.torsion_h2,
            _ => &[],
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti == [1, 0, 0]
            && self.torsion_h0.is_empty()
            && self.torsion_h1.is_empty()
            && self.torsion_h2.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti[0] as i64 - self.betti[1] as i64 + self.betti[2] as i64
    }

    /// e.g. `H0 = Z, H1 = Z/2, H2 = Z^8`.
    pub fn summary(&self) -> String {
        (0..3)
            .map(|k| {
                let mut parts = Vec::new();
                match self.betti[k] {
                    0 => {}
                    1 => parts.push("Z".to_string()),
                    b => parts.push(format!("Z^{b}")),
                }
                parts.extend(self.torsion(k).iter().map(|t| format!("Z/{t}")));
                let group = if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                };
                format!("H{k} = {group}")
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn homology(c: &TwoComplex) -> HomologyReport {
    let (d1, d2) = sparse_boundaries(c);
    let f1 = invariant_factors(&d1);
    let f2 = invariant_factors(&d2);
    let (v, e, f) = (c.vertex_count(), c.edge_count(), c.polygon_count());
    let (r1, r2) = (f1.len(), f2.len());
    HomologyReport {
        betti: [v - r1, e - r1 - r2, f - r2],
        // ∂₁ has unit invariant factors only: every column is a difference of two basis vectors.
        torsion_h0: f1.into_iter().filter(|x| !x.is_one()).collect(),
        torsion_h1: f2.into_iter().filter(|x| !x.is_one()).collect(),
        torsion_h2: Vec::new(),
    }
}

pub fn is_acyclic(c: &TwoComplex) -> bool {
    homology(c).is_acyclic()
}
