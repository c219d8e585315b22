//! Finite fields GF(q), the projective line over them and PGL(2,q) acting on it.
//!
//! Field elements are stored as integers in `0..q` whose base-`p` digits are the
//! coefficients of a polynomial in the generator `x` (digit `i` is the coefficient
//! of `x^i`). Arithmetic goes through precomputed tables, which is fine for the
//! small fields needed here.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Largest field order accepted by [`make_field`].
pub const DEFAULT_FIELD_BOUND: u32 = 64;

/// Largest group order [`pgl_elements`] will enumerate.
pub const PGL_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the bound {bound}")]
    FieldTooLarge { p: u32, e: u32, bound: u32 },
    #[error("|PGL(2,{q})| = {order} exceeds the enumeration budget {budget}")]
    EnumerationBudget { q: u32, order: u64, budget: u64 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("element order {order} is not admissible over GF({q}): need d >= 3 dividing q+1 or q-1")]
    OrderNotAdmissible { order: u64, q: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Identifies a field by characteristic and degree.
///
/// Moduli are chosen deterministically, so `(p, e)` pins down the field
/// completely and is enough to detect mixing values from different fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    pub p: u32,
    pub e: u32,
}

/// An element of a finite field, encoded by its coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct Field {
    id: FieldId,
    q: u32,
    /// Monic modulus, coefficients from `x^0` up to `x^e`.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.id.p)
            .field("e", &self.id.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, e)`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(GeometryError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a divisor");
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(GeometryError::NotPrimePower(q));
    }
    Ok((p, e))
}

/// Builds GF(p^e) with the default order bound.
pub fn make_field(p: u32, e: u32) -> Result<Field> {
    make_field_with_bound(p, e, DEFAULT_FIELD_BOUND)
}

pub fn make_field_with_bound(p: u32, e: u32, bound: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(GeometryError::NotPrime(p));
    }
    if e == 0 {
        return Err(GeometryError::ZeroDegree);
    }
    let q = (p as u64).checked_pow(e).filter(|&q| q <= bound as u64);
    let q = q.ok_or(GeometryError::FieldTooLarge { p, e, bound })? as u32;

    let modulus = if e == 1 { vec![0, 1] } else { least_irreducible(p, e) };
    Ok(Field::from_modulus(p, e, q, modulus))
}

/// Lexicographically least monic irreducible polynomial of degree `e` over GF(p).
///
/// Candidates are scanned by their lower coefficients read as a base-`p`
/// number with `x^{e-1}` most significant.
fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    (0..count)
        .map(|code| {
            let mut coeffs = digits(code, p, e as usize);
            coeffs.push(1);
            coeffs
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("irreducible polynomials exist in every degree")
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(num: &[u32], monic_div: &[u32], p: u32) -> Vec<u32> {
    let mut rem = num.to_vec();
    let dd = monic_div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in monic_div.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = (rem[idx] + p - (lead * c) % p) % p;
            }
        }
        rem.pop();
    }
    rem
}

impl Field {
    fn from_modulus(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let n = q as usize;
        let e_us = e as usize;
        let vecs: Vec<Vec<u32>> = (0..q).map(|x| digits(x, p, e_us)).collect();
        let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);

        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let sum: Vec<u32> = (0..e_us).map(|i| (vecs[a][i] + vecs[b][i]) % p).collect();
                add[a * n + b] = encode(&sum);

                let mut prod = vec![0u32; 2 * e_us - 1];
                for i in 0..e_us {
                    for j in 0..e_us {
                        prod[i + j] = (prod[i + j] + vecs[a][i] * vecs[b][j]) % p;
                    }
                }
                let reduced = if e == 1 {
                    prod
                } else {
                    let mut r = poly_rem(&prod, &modulus, p);
                    r.resize(e_us, 0);
                    r
                };
                mul[a * n + b] = encode(&reduced);
            }
        }
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u32)
            .collect();
        let inv = (0..n)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (0..n).find(|&b| mul[a * n + b] == 1).unwrap() as u32
                }
            })
            .collect();
        Field {
            id: FieldId { p, e },
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.id.p
    }

    pub fn degree(&self) -> u32 {
        self.id.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    /// Coefficient vector of `a`, lowest degree first.
    pub fn coefficients(&self, a: FieldElem) -> Vec<u32> {
        digits(a.0, self.id.p, self.id.e as usize)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[(a.0 * self.q + b.0) as usize])
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[(a.0 * self.q + b.0) as usize])
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (!a.is_zero()).then(|| FieldElem(self.inv[a.0 as usize]))
    }

    fn check(&self, id: FieldId) -> Result<()> {
        if id == self.id {
            Ok(())
        } else {
            Err(GeometryError::FieldMismatch)
        }
    }

    pub fn point(&self, x: FieldElem, y: FieldElem) -> Option<ProjPoint> {
        if x.is_zero() && y.is_zero() {
            return None;
        }
        Some(match self.inv(y) {
            Some(yi) => ProjPoint {
                field: self.id,
                x: self.mul(x, yi),
                y: FieldElem::ONE,
            },
            None => ProjPoint::infinity(self.id),
        })
    }

    /// Position of `pt` in [`proj_line`] order; this is the vertex id downstream.
    pub fn vertex_id(&self, pt: &ProjPoint) -> usize {
        if pt.is_infinity() {
            0
        } else {
            1 + pt.x.0 as usize
        }
    }

    pub fn map(&self, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Option<ProjMap> {
        let det = self.sub(self.mul(a, d), self.mul(b, c));
        if det.is_zero() {
            return None;
        }
        Some(self.normalize([a, b, c, d]))
    }

    fn normalize(&self, m: [FieldElem; 4]) -> ProjMap {
        let lead = m.iter().copied().find(|x| !x.is_zero()).expect("invertible matrix");
        let s = self.inv(lead).unwrap();
        ProjMap {
            field: self.id,
            entries: m.map(|x| self.mul(x, s)),
        }
    }

    pub fn identity(&self) -> ProjMap {
        ProjMap {
            field: self.id,
            entries: [FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE],
        }
    }

    /// Matrix product `m1 * m2`, acting as "first `m2`, then `m1`".
    pub fn compose(&self, m1: &ProjMap, m2: &ProjMap) -> Result<ProjMap> {
        self.check(m1.field)?;
        self.check(m2.field)?;
        let [a, b, c, d] = m1.entries;
        let [e, f, g, h] = m2.entries;
        let s = |x, y, z, w| self.add(self.mul(x, y), self.mul(z, w));
        Ok(self.normalize([s(a, e, b, g), s(a, f, b, h), s(c, e, d, g), s(c, f, d, h)]))
    }

    pub fn inverse(&self, m: &ProjMap) -> Result<ProjMap> {
        self.check(m.field)?;
        let [a, b, c, d] = m.entries;
        Ok(self.normalize([d, self.neg(b), self.neg(c), a]))
    }

    /// Möbius action `(x : y) -> (ax + by : cx + dy)`.
    pub fn act(&self, m: &ProjMap, pt: &ProjPoint) -> Result<ProjPoint> {
        self.check(m.field)?;
        self.check(pt.field)?;
        let [a, b, c, d] = m.entries;
        let x = self.add(self.mul(a, pt.x), self.mul(b, pt.y));
        let y = self.add(self.mul(c, pt.x), self.mul(d, pt.y));
        Ok(self.point(x, y).expect("invertible map sends points to points"))
    }
}

/// A point of the projective line in normalized coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    field: FieldId,
    x: FieldElem,
    y: FieldElem,
}

impl ProjPoint {
    pub fn infinity(field: FieldId) -> Self {
        ProjPoint {
            field,
            x: FieldElem::ONE,
            y: FieldElem::ZERO,
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn coords(&self) -> (FieldElem, FieldElem) {
        (self.x, self.y)
    }

    pub fn field(&self) -> FieldId {
        self.field
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |p: &ProjPoint| (p.field, !p.is_infinity(), p.x);
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of PGL(2,q): a 2x2 invertible matrix scaled so that its first
/// nonzero entry (scanning a, b, c, d) is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMap {
    field: FieldId,
    entries: [FieldElem; 4],
}

impl ProjMap {
    /// Entries `[a, b, c, d]` of the matrix `[[a, b], [c, d]]`.
    pub fn entries(&self) -> [FieldElem; 4] {
        self.entries
    }

    pub fn field(&self) -> FieldId {
        self.field
    }
}

/// All q+1 points: infinity first, then the affine points `(x : 1)` by `x`.
pub fn proj_line(field: &Field) -> Vec<ProjPoint> {
    std::iter::once(ProjPoint::infinity(field.id()))
        .chain(field.elements().map(|x| ProjPoint {
            field: field.id(),
            x,
            y: FieldElem::ONE,
        }))
        .collect()
}

pub fn pgl_order(q: u32) -> u64 {
    let q = q as u64;
    q * (q * q - 1)
}

/// Every element of PGL(2,q) in canonical form, sorted.
pub fn pgl_elements(field: &Field) -> Result<Vec<ProjMap>> {
    let q = field.order();
    let order = pgl_order(q);
    if order > PGL_ENUMERATION_BUDGET {
        return Err(GeometryError::EnumerationBudget {
            q,
            order,
            budget: PGL_ENUMERATION_BUDGET,
        });
    }
    let mut out = Vec::with_capacity(order as usize);
    let (zero, one) = (FieldElem::ZERO, FieldElem::ONE);
    // a = 1, or a = 0 and b = 1.
    for b in field.elements() {
        for c in field.elements() {
            for d in field.elements() {
                if let Some(m) = field.map(one, b, c, d) {
                    if m.entries == [one, b, c, d] {
                        out.push(m);
                    }
                }
            }
        }
    }
    for c in field.elements() {
        for d in field.elements() {
            if let Some(m) = field.map(zero, one, c, d) {
                out.push(m);
            }
        }
    }
    out.sort();
    debug_assert_eq!(out.len() as u64, order);
    Ok(out)
}

pub fn element_order(field: &Field, m: &ProjMap) -> Result<u64> {
    let id = field.identity();
    let mut power = *m;
    let mut k = 1;
    while power != id {
        power = field.compose(&power, m)?;
        k += 1;
    }
    Ok(k)
}

/// Returns ε with `d | q + ε`, if `d >= 3` admits one.
pub fn epsilon_for(q: u32, d: u64) -> Option<i8> {
    if d < 3 {
        return None;
    }
    let q = q as u64;
    if (q + 1).is_multiple_of(d) {
        Some(1)
    } else if (q - 1).is_multiple_of(d) {
        Some(-1)
    } else {
        None
    }
}

/// Conjugacy class of `m`, computed by conjugating with every group element.
///
/// Only the identity and elements whose order `d >= 3` divides `q ± 1` are accepted.
pub fn conjugacy_class(field: &Field, m: &ProjMap) -> Result<BTreeSet<ProjMap>> {
    let order = element_order(field, m)?;
    if order == 1 {
        return Ok(BTreeSet::from([*m]));
    }
    if epsilon_for(field.order(), order).is_none() {
        return Err(GeometryError::OrderNotAdmissible {
            order,
            q: field.order(),
        });
    }
    conjugacy_class_unchecked(field, m, &pgl_elements(field)?)
}

fn conjugacy_class_unchecked(field: &Field, m: &ProjMap, group: &[ProjMap]) -> Result<BTreeSet<ProjMap>> {
    group
        .iter()
        .map(|g| {
            let gm = field.compose(g, m)?;
            field.compose(&gm, &field.inverse(g)?)
        })
        .collect()
}

/// All conjugacy classes of elements of order `d`, sorted by least element.
pub fn classes_of_order(field: &Field, d: u64) -> Result<Vec<BTreeSet<ProjMap>>> {
    if epsilon_for(field.order(), d).is_none() {
        return Err(GeometryError::OrderNotAdmissible {
            order: d,
            q: field.order(),
        });
    }
    let group = pgl_elements(field)?;
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for m in &group {
        if seen.contains(m) || element_order(field, m)? != d {
            continue;
        }
        let class = conjugacy_class_unchecked(field, m, &group)?;
        seen.extend(class.iter().copied());
        classes.push(class);
    }
    Ok(classes)
}

/// Orbit sizes of `<m>` on the projective line, ascending.
pub fn cycle_structure(field: &Field, m: &ProjMap) -> Result<Vec<usize>> {
    Ok(orbits(field, m)?.iter().map(Vec::len).collect())
}

/// Orbits of `<m>` on the projective line as vertex-id cycles `v, m(v), m²(v), ...`,
/// each starting at its least vertex, sorted by length then start.
pub fn orbits(field: &Field, m: &ProjMap) -> Result<Vec<Vec<usize>>> {
    let points = proj_line(field);
    let mut seen = vec![false; points.len()];
    let mut out = Vec::new();
    for start in &points {
        let sid = field.vertex_id(start);
        if seen[sid] {
            continue;
        }
        let mut cycle = vec![sid];
        seen[sid] = true;
        let mut cur = field.act(m, start)?;
        while cur != *start {
            let id = field.vertex_id(&cur);
            seen[id] = true;
            cycle.push(id);
            cur = field.act(m, &cur)?;
        }
        out.push(cycle);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}
