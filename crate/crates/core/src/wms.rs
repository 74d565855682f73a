//! The orbit set `Um_m(R) / E_m(R)` with its group law on normalized
//! representatives, and an exhaustive oracle over finite rings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{apply_right_row, ElementaryOp};
use crate::ring::{Elem, Ring, RingDescriptor};
use crate::rng;
use crate::umrow::{RowPath, UmRow};

/// Guard on `|R|^m` for exhaustive enumeration.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Rows of length `m` over a finite ring, encoded as integers in base `|R|`
/// (first coordinate most significant), with cached arithmetic tables.
pub struct FiniteRows {
    ring: Ring,
    m: usize,
    elems: Vec<Elem>,
    index: HashMap<Elem, usize>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    avoids: Vec<bool>,
    unimodular: Vec<bool>,
    weights: Vec<u64>,
}

impl FiniteRows {
    pub fn new(ring: &Ring, m: usize) -> Result<Self> {
        let elems = ring
            .elements()
            .ok_or_else(|| Error::UnsupportedRing("exhaustive orbits need a finite ring".into()))?;
        let q = elems.len();
        if q > 64 {
            return Err(Error::TooLarge(format!("ring with {q} elements")));
        }
        let total = (q as u64)
            .checked_pow(m as u32)
            .filter(|&t| t <= ENUMERATION_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("{q}^{m} rows")))?;
        let index: HashMap<Elem, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let look = |e: Elem| index[&e];
        let add: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| look(ring.add(a, b))).collect())
            .collect();
        let mul: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| look(ring.mul(a, b))).collect())
            .collect();
        let neg = elems.iter().map(|a| look(ring.neg(a))).collect();
        let zero = look(ring.zero());
        let one = look(ring.one());
        let avoids = match ring.descriptor().minimal_primes.is_some() || !ring.is_quotient() {
            true => elems
                .iter()
                .map(|e| ring.avoids_minimal_primes(e))
                .collect::<Result<Vec<_>>>()?,
            false => Vec::new(),
        };
        let mut weights = vec![1u64; m];
        for k in (0..m.saturating_sub(1)).rev() {
            weights[k] = weights[k + 1] * q as u64;
        }

        // principal ideals as bitmasks, then row ideals by repeated sums
        let principal: Vec<u64> = (0..q)
            .map(|a| (0..q).fold(0u64, |acc, r| acc | 1 << mul[r][a]))
            .collect();
        let ideal_sum = |x: u64, y: u64| -> u64 {
            let mut out = 0u64;
            for i in (0..q).filter(|i| x >> i & 1 == 1) {
                for j in (0..q).filter(|j| y >> j & 1 == 1) {
                    out |= 1 << add[i][j];
                }
            }
            out
        };
        let mut unimodular = vec![false; total as usize];
        let mut sum_cache: HashMap<(u64, u64), u64> = HashMap::new();
        let mut digits = vec![0usize; m];
        for (code, flag) in unimodular.iter_mut().enumerate() {
            let mut rest = code as u64;
            for k in (0..m).rev() {
                digits[k] = (rest % q as u64) as usize;
                rest /= q as u64;
            }
            let mut acc = 1u64 << zero;
            for &d in &digits {
                let p = principal[d];
                acc = *sum_cache.entry((acc, p)).or_insert_with(|| ideal_sum(acc, p));
            }
            *flag = acc >> one & 1 == 1;
        }
        Ok(FiniteRows {
            ring: ring.clone(),
            m,
            elems,
            index,
            add,
            mul,
            neg,
            zero,
            one,
            avoids,
            unimodular,
            weights,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn row_len(&self) -> usize {
        self.m
    }

    fn q(&self) -> usize {
        self.elems.len()
    }

    pub fn total(&self) -> usize {
        self.unimodular.len()
    }

    pub fn is_unimodular(&self, code: usize) -> bool {
        self.unimodular[code]
    }

    pub fn decode(&self, code: usize) -> Vec<usize> {
        let q = self.q() as u64;
        let mut out = vec![0; self.m];
        let mut rest = code as u64;
        for k in (0..self.m).rev() {
            out[k] = (rest % q) as usize;
            rest /= q;
        }
        out
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.weights)
            .map(|(&d, &w)| d as u64 * w)
            .sum::<u64>() as usize
    }

    pub fn row(&self, code: usize) -> Vec<Elem> {
        self.decode(code).into_iter().map(|d| self.elems[d].clone()).collect()
    }

    pub fn code_of(&self, row: &[Elem]) -> Result<usize> {
        if row.len() != self.m {
            return Err(Error::SizeMismatch(format!("row of length {}, expected {}", row.len(), self.m)));
        }
        let digits = row
            .iter()
            .map(|e| {
                self.index
                    .get(e)
                    .copied()
                    .ok_or_else(|| Error::Invalid("element not in ring".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.encode(&digits))
    }

    /// Image of `code` under `e_ij(elems[r])`, 0-based `i`, `j`.
    fn step(&self, code: usize, digits: &[usize], i: usize, j: usize, r: usize) -> usize {
        let nj = self.add[digits[j]][self.mul[digits[i]][r]];
        let w = self.weights[j];
        (code as u64 - digits[j] as u64 * w + nj as u64 * w) as usize
    }

    /// All `(op, image)` pairs for nonzero parameters.
    fn neighbours(&self, code: usize) -> Vec<((usize, usize, usize), usize)> {
        let d = self.decode(code);
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in (0..self.m).filter(|&j| j != i) {
                for r in (0..self.q()).filter(|&r| r != self.zero) {
                    out.push(((i, j, r), self.step(code, &d, i, j, r)));
                }
            }
        }
        out
    }

    fn op(&self, (i, j, r): (usize, usize, usize)) -> ElementaryOp {
        ElementaryOp {
            i: i + 1,
            j: j + 1,
            t: self.elems[r].clone(),
        }
    }

    pub fn is_generic(&self, code: usize) -> Result<bool> {
        if self.avoids.is_empty() {
            return Err(Error::MissingMinimalPrimes);
        }
        let d = self.decode(code);
        Ok(self.avoids[self.mul[d[self.m - 2]][d[self.m - 1]]])
    }

    /// The partner `(1 - a_1, a_2, ..)` of a row.
    fn partner(&self, code: usize) -> usize {
        let mut d = self.decode(code);
        d[0] = self.add[self.one][self.neg[d[0]]];
        self.encode(&d)
    }

    /// `(a_1 b_1, a_2, ..)` for the normalized pair `(a, partner(a))`.
    fn product_with_partner(&self, code: usize) -> usize {
        let mut d = self.decode(code);
        let b1 = self.add[self.one][self.neg[d[0]]];
        d[0] = self.mul[d[0]][b1];
        self.encode(&d)
    }

    /// Breadth-first search over the orbit of `start`; returns the members in
    /// discovery order with parent links.
    fn bfs(&self, start: usize) -> (Vec<usize>, HashMap<usize, Option<(usize, (usize, usize, usize))>>) {
        let mut parent = HashMap::from([(start, None)]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            for (op, next) in self.neighbours(cur) {
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((cur, op)));
                    order.push(next);
                    queue.push_back(next);
                }
            }
        }
        (order, parent)
    }

    fn ops_to(&self, parent: &HashMap<usize, Option<(usize, (usize, usize, usize))>>, target: usize) -> Vec<ElementaryOp> {
        let mut ops = Vec::new();
        let mut cur = target;
        while let Some(Some((prev, op))) = parent.get(&cur) {
            ops.push(self.op(*op));
            cur = *prev;
        }
        ops.reverse();
        ops
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Partition of all unimodular rows of length `m` into `E_m(R)`-orbits.
/// Classes are numbered by their smallest row code.
pub struct OrbitPartition {
    rows: FiniteRows,
    classes: Vec<Vec<usize>>,
    class_of: HashMap<usize, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionJson {
    pub ring: RingDescriptor,
    pub m: usize,
    pub orbit_count: usize,
    pub unimodular_rows: usize,
    pub classes: Vec<ClassJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassJson {
    pub id: usize,
    pub size: usize,
    pub representative: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Exhaustive orbit partition by union-find over single elementary moves.
pub fn enumerate_orbits(ring: &Ring, m: usize) -> Result<OrbitPartition> {
    let rows = FiniteRows::new(ring, m)?;
    let mut uf = UnionFind::new(rows.total());
    for code in (0..rows.total()).filter(|&c| rows.is_unimodular(c)) {
        for (_, next) in rows.neighbours(code) {
            uf.union(code, next);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for code in (0..rows.total()).filter(|&c| rows.is_unimodular(c)) {
        by_root.entry(uf.find(code)).or_default().push(code);
    }
    let classes: Vec<Vec<usize>> = by_root.into_values().collect();
    let class_of = classes
        .iter()
        .enumerate()
        .flat_map(|(id, c)| c.iter().map(move |&code| (code, id)))
        .collect();
    Ok(OrbitPartition {
        rows,
        classes,
        class_of,
    })
}

impl OrbitPartition {
    pub fn rows(&self) -> &FiniteRows {
        &self.rows
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn class_rows(&self, id: usize) -> Vec<Vec<Elem>> {
        self.classes[id].iter().map(|&c| self.rows.row(c)).collect()
    }

    pub fn class_of(&self, row: &[Elem]) -> Result<Option<usize>> {
        Ok(self.class_of.get(&self.rows.code_of(row)?).copied())
    }

    fn class_of_code(&self, code: usize) -> Option<usize> {
        self.class_of.get(&code).copied()
    }

    /// Every single elementary move keeps a row inside its class.
    pub fn is_action_closed(&self) -> bool {
        self.class_of.iter().all(|(&code, &id)| {
            self.rows
                .neighbours(code)
                .into_iter()
                .all(|(_, next)| self.class_of_code(next) == Some(id))
        })
    }

    pub fn to_json(&self) -> PartitionJson {
        let ring = self.rows.ring();
        PartitionJson {
            ring: ring.descriptor().clone(),
            m: self.rows.row_len(),
            orbit_count: self.count(),
            unimodular_rows: self.class_of.len(),
            classes: self
                .classes
                .iter()
                .enumerate()
                .map(|(id, c)| ClassJson {
                    id,
                    size: c.len(),
                    representative: ring.format_all(&self.rows.row(c[0])),
                    rows: c.iter().map(|&code| ring.format_all(&self.rows.row(code))).collect(),
                })
                .collect(),
        }
    }
}

/// Exhaustive check of the group law on orbit classes.
#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub ring: RingDescriptor,
    pub m: usize,
    pub orbit_count: usize,
    pub orbit_sizes: Vec<usize>,
    pub normalized_pairs_checked: usize,
    pub product_rows_unimodular: bool,
    pub well_defined: bool,
    pub every_pair_realized: bool,
    pub commutative: bool,
    pub associative: bool,
    pub neutral: Option<usize>,
    pub inverses: bool,
    /// `table[a][b]`: class of the product, when well defined.
    pub table: Vec<Vec<Option<usize>>>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.product_rows_unimodular
            && self.well_defined
            && self.every_pair_realized
            && self.commutative
            && self.associative
            && self.neutral.is_some()
            && self.inverses
    }
}

/// Run the product over every normalized pair and check the abelian group
/// axioms on the induced table.
pub fn verify_group_axioms(ring: &Ring, m: usize) -> Result<GroupReport> {
    let part = enumerate_orbits(ring, m)?;
    Ok(group_report(&part))
}

pub fn group_report(part: &OrbitPartition) -> GroupReport {
    let rows = &part.rows;
    let k = part.count();
    let mut products: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    let mut checked = 0;
    let mut unimodular_products = true;
    for (&a, &ca) in &part.class_of {
        let b = rows.partner(a);
        let Some(cb) = part.class_of_code(b) else {
            continue;
        };
        checked += 1;
        match part.class_of_code(rows.product_with_partner(a)) {
            Some(cp) => {
                products.entry((ca, cb)).or_default().insert(cp);
            }
            None => unimodular_products = false,
        }
    }
    let well_defined = products.values().all(|s| s.len() == 1);
    let mut table = vec![vec![None; k]; k];
    for (&(a, b), s) in &products {
        if s.len() == 1 {
            table[a][b] = s.first().copied();
        }
    }
    let every_pair_realized = table.iter().all(|r| r.iter().all(Option::is_some));
    let commutative = (0..k).all(|a| (0..k).all(|b| table[a][b] == table[b][a]));
    let mul = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(a), Some(b)) => table[a][b],
        _ => None,
    };
    let associative = (0..k).all(|a| {
        (0..k).all(|b| {
            (0..k).all(|c| {
                let l = mul(table[a][b], Some(c));
                l.is_some() && l == mul(Some(a), table[b][c])
            })
        })
    });
    let mut e1 = vec![rows.zero; rows.row_len()];
    e1[0] = rows.one;
    let neutral = part
        .class_of_code(rows.encode(&e1))
        .filter(|&e| (0..k).all(|a| table[e][a] == Some(a) && table[a][e] == Some(a)));
    let inverses = neutral.is_some_and(|e| (0..k).all(|a| (0..k).any(|b| table[a][b] == Some(e))));
    GroupReport {
        ring: rows.ring().descriptor().clone(),
        m: rows.row_len(),
        orbit_count: k,
        orbit_sizes: part.sizes(),
        normalized_pairs_checked: checked,
        product_rows_unimodular: unimodular_products,
        well_defined,
        every_pair_realized,
        commutative,
        associative,
        neutral,
        inverses,
        table,
    }
}

/// Per orbit: how many rows are generic and how many components they form
/// under elementary moves that stay generic.
#[derive(Clone, Debug, Serialize)]
pub struct GenericLocusReport {
    pub generic_rows: Vec<usize>,
    pub components: Vec<usize>,
}

impl GenericLocusReport {
    pub fn passed(&self) -> bool {
        self.generic_rows.iter().all(|&g| g > 0) && self.components.iter().all(|&c| c == 1)
    }
}

pub fn generic_locus_report(part: &OrbitPartition) -> Result<GenericLocusReport> {
    let rows = &part.rows;
    let mut generic = vec![false; rows.total()];
    for &code in part.class_of.keys() {
        generic[code] = rows.is_generic(code)?;
    }
    let mut uf = UnionFind::new(rows.total());
    for &code in part.class_of.keys().filter(|&&c| generic[c]) {
        for (_, next) in rows.neighbours(code) {
            if generic[next] {
                uf.union(code, next);
            }
        }
    }
    let mut generic_rows = Vec::new();
    let mut components = Vec::new();
    for class in &part.classes {
        let members: Vec<usize> = class.iter().copied().filter(|&c| generic[c]).collect();
        let roots: BTreeSet<usize> = members.iter().map(|&c| uf.find(c)).collect();
        generic_rows.push(members.len());
        components.push(roots.len());
    }
    Ok(GenericLocusReport {
        generic_rows,
        components,
    })
}

/// Rows `a`, `b` with `a_1 + b_1 = 1` and `a_i = b_i` for `i > 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedPair {
    a: UmRow,
    b: UmRow,
}

impl NormalizedPair {
    pub fn new(a: UmRow, b: UmRow) -> Result<Self> {
        if !is_normalized(&a, &b) {
            return Err(Error::Invalid("rows are not a normalized pair".into()));
        }
        Ok(NormalizedPair { a, b })
    }

    pub fn a(&self) -> &UmRow {
        &self.a
    }

    pub fn b(&self) -> &UmRow {
        &self.b
    }
}

pub fn is_normalized(a: &UmRow, b: &UmRow) -> bool {
    let r = a.ring();
    a.ring() == b.ring()
        && a.len() == b.len()
        && r.is_one(&r.add(a.at(1), b.at(1)))
        && a.entries()[1..] == b.entries()[1..]
}

/// A normalized pair together with the paths from the inputs.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub pair: NormalizedPair,
    pub path_a: RowPath,
    pub path_b: RowPath,
}

/// `(a_1 b_1, a_2, .., a_{n+1})`, re-certified.
pub fn group_law(p: &NormalizedPair) -> Result<UmRow> {
    let r = p.a.ring();
    let mut entries = p.a.entries().to_vec();
    entries[0] = r.mul(p.a.at(1), p.b.at(1));
    UmRow::new(r, entries).map_err(|e| match e {
        Error::NotUnimodular => Error::InternalInvariantViolation("product row is not unimodular".into()),
        e => e,
    })
}

/// Representatives of the orbits of `a` and `b` forming a normalized pair.
///
/// Finite rings are searched exhaustively. Over other rings a few
/// constructions are tried around random elementary moves; failure is
/// reported as `NormalizationNotFound` and proves nothing.
pub fn normalize_pair(a: &UmRow, b: &UmRow, budget: u64, seed: u64) -> Result<Normalization> {
    if a.ring() != b.ring() || a.len() != b.len() {
        return Err(Error::SizeMismatch("rows differ in ring or length".into()));
    }
    if is_normalized(a, b) {
        return Ok(Normalization {
            pair: NormalizedPair::new(a.clone(), b.clone())?,
            path_a: RowPath::point(a.clone()),
            path_b: RowPath::point(b.clone()),
        });
    }
    if a.ring().elements().is_some() {
        return normalize_finite(a, b);
    }
    normalize_search(a, b, budget, seed)
}

fn normalize_finite(a: &UmRow, b: &UmRow) -> Result<Normalization> {
    let rows = FiniteRows::new(a.ring(), a.len())?;
    let ca = rows.code_of(a.entries())?;
    let cb = rows.code_of(b.entries())?;
    let (order_a, parent_a) = rows.bfs(ca);
    let (_, parent_b) = rows.bfs(cb);
    for &x in &order_a {
        let y = rows.partner(x);
        if parent_b.contains_key(&y) {
            let path_a = RowPath::walk(a, &rows.ops_to(&parent_a, x))?;
            let path_b = RowPath::walk(b, &rows.ops_to(&parent_b, y))?;
            return Ok(Normalization {
                pair: NormalizedPair::new(path_a.end().clone(), path_b.end().clone())?,
                path_a,
                path_b,
            });
        }
    }
    Err(Error::InternalInvariantViolation(
        "exhaustive search found no normalized representatives".into(),
    ))
}

/// Ops taking a row with unimodular tail (or, after one move, any row with
/// a unit entry) to `(1, 0, .., 0)`.
fn ops_to_e1(row: &UmRow) -> Result<Option<Vec<ElementaryOp>>> {
    let r = row.ring();
    let mut ops = Vec::new();
    let mut cur = row.entries().to_vec();
    let tail_cert = |cur: &[Elem]| -> Result<Option<Vec<Elem>>> { r.express(&r.one(), &cur[1..]) };
    let mut cert = tail_cert(&cur)?;
    if cert.is_none() {
        if r.inverse(&cur[0]).is_none() {
            let Some(op) = unit_first_entry(r, &cur)? else {
                return Ok(None);
            };
            cur = apply_right_row(r, &cur, &op)?;
            ops.push(op);
        }
        let v = r.inverse(&cur[0]).expect("unit first entry");
        let op = ElementaryOp::new(1, 2, r.mul(&r.sub(&r.one(), &cur[1]), &v))?;
        cur = apply_right_row(r, &cur, &op)?;
        ops.push(op);
        cert = tail_cert(&cur)?;
    }
    let Some(y) = cert else {
        return Ok(None);
    };
    let gap = r.sub(&r.one(), &cur[0]);
    for (k, yk) in y.iter().enumerate() {
        let t = r.mul(yk, &gap);
        if !r.is_zero(&t) {
            let op = ElementaryOp::new(k + 2, 1, t)?;
            cur = apply_right_row(r, &cur, &op)?;
            ops.push(op);
        }
    }
    for j in 2..=cur.len() {
        let t = r.neg(&cur[j - 1]);
        if !r.is_zero(&t) {
            let op = ElementaryOp::new(1, j, t)?;
            cur = apply_right_row(r, &cur, &op)?;
            ops.push(op);
        }
    }
    debug_assert!(r.is_one(&cur[0]) && cur[1..].iter().all(|e| r.is_zero(e)));
    Ok(Some(ops))
}

/// One move `e_k1(c)` making the first entry a unit: either an exact
/// solve of `a_1 + c a_k = 1`, or a small constant `c`.
fn unit_first_entry(r: &Ring, row: &[Elem]) -> Result<Option<ElementaryOp>> {
    let gap = r.sub(&r.one(), &row[0]);
    for k in 1..row.len() {
        if let Some(c) = r.express(&gap, &row[k..=k])? {
            return Ok(Some(ElementaryOp::new(k + 1, 1, c[0].clone())?));
        }
    }
    for c in [1, -1, 2, -2, 3, -3] {
        let c = r.from_i64(c);
        for k in 1..row.len() {
            if r.is_unit(&r.add_mul(&row[0], &c, &row[k])) {
                return Ok(Some(ElementaryOp::new(k + 1, 1, c)?));
            }
        }
    }
    Ok(None)
}

/// A path from `from` to `to` through `(1, 0, .., 0)`, when both are
/// visibly in the neutral class.
fn neutral_path(from: &UmRow, to: &UmRow) -> Result<Option<RowPath>> {
    let (Some(up), Some(down)) = (ops_to_e1(from)?, ops_to_e1(to)?) else {
        return Ok(None);
    };
    let r = from.ring();
    let mut ops = up;
    ops.extend(down.iter().rev().map(|o| o.inverse(r)));
    let p = RowPath::walk(from, &ops)?;
    Ok((p.end().entries() == to.entries()).then_some(p))
}

/// Equal tails: shift `a_1` by the tail ideal so that `a_1 + b_1 = 1`.
fn match_first_entries(a: &UmRow, b: &UmRow) -> Result<Option<Vec<ElementaryOp>>> {
    if a.entries()[1..] != b.entries()[1..] {
        return Ok(None);
    }
    let r = a.ring();
    let gap = r.sub(&r.sub(&r.one(), a.at(1)), b.at(1));
    let Some(c) = r.express(&gap, &a.entries()[1..])? else {
        return Ok(None);
    };
    let mut ops = Vec::new();
    for (k, ck) in c.into_iter().enumerate() {
        if !r.is_zero(&ck) {
            ops.push(ElementaryOp::new(k + 2, 1, ck)?);
        }
    }
    Ok(Some(ops))
}

fn try_constructions(a: &UmRow, b: &UmRow) -> Result<Option<(RowPath, RowPath)>> {
    if let Some(ops) = match_first_entries(a, b)? {
        return Ok(Some((RowPath::walk(a, &ops)?, RowPath::point(b.clone()))));
    }
    let r = a.ring();
    // b visibly neutral: keep a, move b to (1 - a_1, a_2, ..)
    let mut partner_of_a = a.entries().to_vec();
    partner_of_a[0] = r.sub(&r.one(), a.at(1));
    if let Ok(target) = UmRow::new(r, partner_of_a) {
        if let Some(pb) = neutral_path(b, &target)? {
            return Ok(Some((RowPath::point(a.clone()), pb)));
        }
    }
    let mut partner_of_b = b.entries().to_vec();
    partner_of_b[0] = r.sub(&r.one(), b.at(1));
    if let Ok(target) = UmRow::new(r, partner_of_b) {
        if let Some(pa) = neutral_path(a, &target)? {
            return Ok(Some((pa, RowPath::point(b.clone()))));
        }
    }
    Ok(None)
}

fn normalize_search(a: &UmRow, b: &UmRow, budget: u64, seed: u64) -> Result<Normalization> {
    let r = a.ring();
    let mut rng = rng::stream(seed, "normalize-pair");
    let mut pa = RowPath::point(a.clone());
    let mut pb = RowPath::point(b.clone());
    let len = a.len();
    for attempt in 0..budget {
        if let Some((xa, xb)) = try_constructions(pa.end(), pb.end())? {
            let path_a = concat_rows(&pa, &xa)?;
            let path_b = concat_rows(&pb, &xb)?;
            return Ok(Normalization {
                pair: NormalizedPair::new(path_a.end().clone(), path_b.end().clone())?,
                path_a,
                path_b,
            });
        }
        // random constant move on one side, alternating
        use rand::Rng as _;
        let i = rng.gen_range(1..=len);
        let j = (i + rng.gen_range(1..len) - 1) % len + 1;
        let t = r.sample_constant(&mut rng, 1 + attempt / 8);
        if r.is_zero(&t) {
            continue;
        }
        let op = ElementaryOp::new(i, j, t)?;
        let side = if attempt % 2 == 0 { &mut pa } else { &mut pb };
        let next = RowPath::walk(side.end(), &[op])?;
        *side = concat_rows(side, &next)?;
    }
    Err(Error::NormalizationNotFound(budget))
}

fn concat_rows(p: &RowPath, q: &RowPath) -> Result<RowPath> {
    if p.end().entries() != q.start().entries() {
        return Err(Error::InternalInvariantViolation("row paths do not meet".into()));
    }
    let mut out = p.clone();
    out.rows.extend(q.rows.iter().skip(1).cloned());
    out.steps.extend(q.steps.iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orbit_counts() {
        let z4 = Ring::integers_mod(4).unwrap();
        let p = enumerate_orbits(&z4, 2).unwrap();
        assert_eq!(p.count(), 1);
        assert_eq!(p.sizes(), vec![12]);
        let f2 = Ring::prime_field(2).unwrap();
        let p = enumerate_orbits(&f2, 2).unwrap();
        assert_eq!(p.sizes(), vec![3]);
        assert!(p.is_action_closed());
    }

    #[test]
    fn group_axioms_small() {
        let f3 = Ring::prime_field(3).unwrap();
        let rep = verify_group_axioms(&f3, 4).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.orbit_count, 1);
    }

    #[test]
    fn normalize_over_f5() {
        let f5 = Ring::prime_field(5).unwrap();
        let a = UmRow::parse(&f5, &["1", "0", "0", "0"]).unwrap();
        let b = UmRow::parse(&f5, &["0", "1", "0", "0"]).unwrap();
        let n = normalize_pair(&a, &b, 0, 0).unwrap();
        assert!(n.path_a.verify(false) && n.path_b.verify(false));
        assert_eq!(n.path_a.end(), n.pair.a());
        assert!(is_normalized(n.pair.a(), n.pair.b()));
        let same = normalize_pair(&a, &a, 0, 0).unwrap();
        assert!(is_normalized(same.pair.a(), same.pair.b()));
        let done = normalize_pair(n.pair.a(), n.pair.b(), 0, 0).unwrap();
        assert_eq!(done.path_a.len() + done.path_b.len(), 0);
    }

    #[test]
    fn group_law_with_neutral_partner() {
        let r = Ring::rational_polynomials(&["x", "y", "z"]).unwrap();
        let a = UmRow::parse(&r, &["1", "x", "z", "1-x"]).unwrap();
        let b = UmRow::parse(&r, &["0", "x", "z", "1-x"]).unwrap();
        let p = NormalizedPair::new(a, b.clone()).unwrap();
        assert_eq!(group_law(&p).unwrap().entries(), b.entries());
    }

    #[test]
    fn normalize_over_polynomials() {
        let r = Ring::rational_polynomials(&["x", "y", "z"]).unwrap();
        let a = UmRow::parse(&r, &["x", "y", "z", "1+x"]).unwrap();
        let b = UmRow::parse(&r, &["1", "x", "y", "z"]).unwrap();
        let n = normalize_pair(&a, &b, 50, 0).unwrap();
        assert!(is_normalized(n.pair.a(), n.pair.b()));
        assert!(n.path_a.verify(false) && n.path_b.verify(false));
        assert_eq!(n.path_a.start(), &a);
        assert_eq!(n.path_b.start(), &b);
    }
}
