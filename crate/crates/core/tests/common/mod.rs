//! Test-only oracles, written independently of the library algorithms.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use spectacular::presentations::{Label, LabeledGraph};
use spectacular::TwoComplex;

/// Rank by fraction-free Gaussian elimination, and the determinant when square.
pub fn bareiss(rows: &[Vec<BigInt>]) -> (usize, Option<BigInt>) {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    let mut sign = 1i32;
    let mut col = 0;
    while rank < n && col < m {
        let Some(p) = (rank..n).find(|&i| !a[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for i in rank + 1..n {
            for j in col + 1..m {
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        col += 1;
    }
    let det = (n == m).then(|| {
        if rank < n {
            BigInt::zero()
        } else {
            let d = a[n - 1][n - 1].clone();
            if sign < 0 {
                -d
            } else {
                d
            }
        }
    });
    (rank, det)
}

pub fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Boundary matrices built directly from the complex, rows are cells of the lower dimension.
pub fn boundary_rows(c: &TwoComplex) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let g = c.graph();
    let mut d1 = vec![vec![BigInt::zero(); g.edge_count()]; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        d1[u.max(v)][e] += 1;
        d1[u.min(v)][e] -= 1;
    }
    let mut d2 = vec![vec![BigInt::zero(); c.polygon_count()]; g.edge_count()];
    for (f, p) in c.polygons().iter().enumerate() {
        let vs = p.vertices();
        for i in 0..vs.len() {
            let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
            let e = g
                .edges()
                .iter()
                .position(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a))
                .unwrap();
            d2[e][f] += if a < b { 1 } else { -1 };
        }
    }
    (d1, d2)
}

/// Rational Betti numbers from ranks of the boundary maps.
pub fn rational_betti(c: &TwoComplex) -> [usize; 3] {
    let (d1, d2) = boundary_rows(c);
    let r1 = bareiss(&d1).0;
    let r2 = if c.polygon_count() == 0 { 0 } else { bareiss(&d2).0 };
    [c.vertex_count() - r1, c.edge_count() - r1 - r2, c.polygon_count() - r2]
}

/// Number of polygons through each consecutive ordered triple, by direct search.
pub fn triple_multiplicities(c: &TwoComplex) -> HashMap<(usize, usize, usize), usize> {
    let n = c.vertex_count();
    let mut out = HashMap::new();
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                if u == v || v == w || u == w {
                    continue;
                }
                let count = c
                    .polygons()
                    .iter()
                    .filter(|p| {
                        let vs = p.vertices();
                        let k = vs.len();
                        vs.iter().position(|&x| x == v).is_some_and(|i| {
                            let (prev, next) = (vs[(i + k - 1) % k], vs[(i + 1) % k]);
                            (prev == u && next == w) || (prev == w && next == u)
                        })
                    })
                    .count();
                if count > 0 {
                    out.insert((u, v, w), count);
                }
            }
        }
    }
    out
}

/// All non-backtracking paths of length `len` as (label word, directed edge sequence).
fn paths(g: &LabeledGraph, len: usize) -> Vec<(Vec<Label>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..2 * g.edge_count()).map(|d| vec![d]).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for p in frontier {
            let last = *p.last().unwrap();
            for &d in g.out_edges(g.target(last)) {
                if d != last ^ 1 {
                    let mut q = p.clone();
                    q.push(d);
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    for p in frontier {
        out.push((p.iter().map(|&d| g.label(d)).collect(), p));
    }
    out
}

/// Longest label word readable in both graphs (at two different places when
/// `same`), searching lengths up to `cap`; `None` if a piece of length `cap` exists.
pub fn piece_by_enumeration(g1: &LabeledGraph, g2: &LabeledGraph, same: bool, cap: usize) -> Option<usize> {
    let mut best = 0;
    for len in 1..=cap {
        let p1 = paths(g1, len);
        let found = if same {
            let mut seen: HashMap<Vec<Label>, HashSet<Vec<usize>>> = HashMap::new();
            for (w, p) in p1 {
                seen.entry(w).or_default().insert(p);
            }
            seen.values().any(|s| s.len() > 1)
        } else {
            let words: HashSet<Vec<Label>> = p1.into_iter().map(|(w, _)| w).collect();
            paths(g2, len).iter().any(|(w, _)| words.contains(w))
        };
        if !found {
            return Some(best);
        }
        best = len;
    }
    None
}

pub fn is_positive(x: &BigInt) -> bool {
    x.is_positive()
}
