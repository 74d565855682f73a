//! Elementary paths in `SL_k(F)`, open sets given by nonvanishing
//! constraints, and a seeded meet-in-the-middle search connecting two points
//! of an open set.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{matrix_to_params, ElementaryOp, MatrixJson, OpJson, RootSchedule, SqMatrix};
use crate::ring::poly::Poly;
use crate::ring::{Elem, Ring};
use crate::rng;

/// Variable name for the matrix entry at 1-based position `(i, j)`.
pub fn entry_var(i: usize, j: usize) -> String {
    format!("m_{i}_{j}")
}

/// Intersection of the loci where each constraint polynomial is nonzero.
/// Constraints are polynomials in `m_1_1 .. m_k_k` over the coefficient field.
#[derive(Clone, Debug)]
pub struct OpenSet {
    size: usize,
    constraints: Vec<Poly>,
    sources: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenSetJson {
    pub constraints: Vec<String>,
}

impl OpenSet {
    pub fn new<S: AsRef<str>>(ring: &Ring, size: usize, constraints: &[S]) -> Result<Self> {
        if !ring.is_field() {
            return Err(Error::UnsupportedRing("open sets live in SL over a field".into()));
        }
        let names: Vec<String> = (1..=size)
            .flat_map(|i| (1..=size).map(move |j| entry_var(i, j)))
            .collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let vars = ring.polynomials_over_coefficients(&refs)?;
        let mut polys = Vec::new();
        for c in constraints {
            polys.push(vars.parse(c.as_ref())?.poly().clone());
        }
        Ok(OpenSet {
            size,
            constraints: polys,
            sources: constraints.iter().map(|c| c.as_ref().to_string()).collect(),
        })
    }

    /// All of `SL_size`.
    pub fn all(ring: &Ring, size: usize) -> Result<Self> {
        Self::new::<&str>(ring, size, &[])
    }

    /// The locus where every entry is nonzero.
    pub fn nonzero_entries(ring: &Ring, size: usize) -> Result<Self> {
        let cs: Vec<String> = (1..=size)
            .flat_map(|i| (1..=size).map(move |j| entry_var(i, j)))
            .collect();
        Self::new(ring, size, &cs)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn constraints(&self) -> &[String] {
        &self.sources
    }

    pub fn contains(&self, g: &SqMatrix) -> bool {
        if g.size() != self.size || !g.is_sl() {
            return false;
        }
        let entries = g.entries();
        let ring = g.ring();
        self.constraints
            .iter()
            .all(|c| !ring.is_zero(&ring.eval_poly(c, &entries)))
    }

    pub fn to_json(&self) -> OpenSetJson {
        OpenSetJson {
            constraints: self.sources.clone(),
        }
    }

    pub fn from_json(ring: &Ring, size: usize, j: &OpenSetJson) -> Result<Self> {
        Self::new(ring, size, &j.constraints)
    }
}

/// Points `g_1 .. g_m` with `g_{k+1} = g_k * steps[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElemPath {
    pub points: Vec<SqMatrix>,
    pub steps: Vec<ElementaryOp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub points: Vec<MatrixJson>,
    pub steps: Vec<OpJson>,
}

impl ElemPath {
    pub fn point(g: SqMatrix) -> Self {
        ElemPath {
            points: vec![g],
            steps: Vec::new(),
        }
    }

    /// Start at `g` and apply `ops` in turn, recording every point.
    pub fn walk(g: &SqMatrix, ops: &[ElementaryOp]) -> Result<Self> {
        let mut path = Self::point(g.clone());
        for op in ops {
            path.push(op.clone())?;
        }
        Ok(path)
    }

    pub fn push(&mut self, op: ElementaryOp) -> Result<()> {
        let next = self.end().times_op(&op)?;
        self.points.push(next);
        self.steps.push(op);
        Ok(())
    }

    pub fn start(&self) -> &SqMatrix {
        &self.points[0]
    }

    pub fn end(&self) -> &SqMatrix {
        self.points.last().expect("paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Index of the first point or step that fails, if any. Step `k`
    /// failing is reported as index `k + 1` (the point it should produce).
    pub fn first_failure(&self, open: Option<&OpenSet>) -> Option<usize> {
        if self.points.is_empty() || self.steps.len() + 1 != self.points.len() {
            return Some(0);
        }
        let ring = self.points[0].ring();
        let size = self.points[0].size();
        for (k, p) in self.points.iter().enumerate() {
            if p.ring() != ring || p.size() != size || !p.is_sl() {
                return Some(k);
            }
            if let Some(u) = open {
                if !u.contains(p) {
                    return Some(k);
                }
            }
            if k > 0 {
                match self.points[k - 1].times_op(&self.steps[k - 1]) {
                    Ok(q) if q == *p => {}
                    _ => return Some(k),
                }
            }
        }
        None
    }

    pub fn verify(&self, open: Option<&OpenSet>) -> bool {
        self.first_failure(open).is_none()
    }

    pub fn reversed(&self) -> ElemPath {
        let ring = self.start().ring().clone();
        ElemPath {
            points: self.points.iter().rev().cloned().collect(),
            steps: self.steps.iter().rev().map(|s| s.inverse(&ring)).collect(),
        }
    }

    /// `self` followed by `other`; the end of `self` must be the start of `other`.
    pub fn concat(&self, other: &ElemPath) -> Result<ElemPath> {
        if self.end() != other.start() {
            return Err(Error::Invalid("paths do not share an endpoint".into()));
        }
        let mut out = self.clone();
        out.points.extend(other.points.iter().skip(1).cloned());
        out.steps.extend(other.steps.iter().cloned());
        Ok(out)
    }

    pub fn to_json(&self) -> PathJson {
        let ring = self.start().ring().clone();
        PathJson {
            points: self.points.iter().map(|p| p.to_json(false)).collect(),
            steps: self.steps.iter().map(|s| s.to_json(&ring)).collect(),
        }
    }

    pub fn from_json(ring: &Ring, j: &PathJson) -> Result<Self> {
        if j.points.is_empty() {
            return Err(Error::Invalid("a path has at least one point".into()));
        }
        Ok(ElemPath {
            points: j
                .points
                .iter()
                .map(|m| SqMatrix::from_json(ring, m))
                .collect::<Result<_>>()?,
            steps: j
                .steps
                .iter()
                .map(|s| ElementaryOp::from_json(ring, s))
                .collect::<Result<_>>()?,
        })
    }
}

fn require_infinite_field(ring: &Ring) -> Result<()> {
    if !ring.is_field() {
        return Err(Error::UnsupportedRing("path search needs a field".into()));
    }
    if !ring.contains_infinite_field() {
        return Err(Error::FiniteFieldUnsupported);
    }
    Ok(())
}

/// Walk from `p` along `schedule` with parameters `t`, skipping zero
/// parameters. `None` if some point leaves `open`.
pub fn walk_schedule(
    p: &SqMatrix,
    schedule: &RootSchedule,
    t: &[Elem],
    open: &OpenSet,
) -> Result<Option<ElemPath>> {
    let ring = p.ring();
    let mut path = ElemPath::point(p.clone());
    for op in schedule.ops(t)? {
        if ring.is_zero(&op.t) {
            continue;
        }
        path.push(op)?;
        if !open.contains(path.end()) {
            return Ok(None);
        }
    }
    Ok(Some(path))
}

/// The direct factorization path from `x` to `y`, if `x^{-1} y` is in
/// generic position and every intermediate point stays in `open`.
fn direct_path(x: &SqMatrix, y: &SqMatrix, open: &OpenSet) -> Result<Option<ElemPath>> {
    let d = x.sl_inverse()?.mul(y)?;
    let t = match matrix_to_params(&d) {
        Ok(t) => t,
        Err(Error::NotGenericPosition { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let path = walk_schedule(x, &RootSchedule::for_size(x.size()), &t, open)?;
    Ok(path.filter(|p| p.end() == y))
}

/// If `y = x * e_ij(t)` for a single elementary matrix, that operation.
fn single_step(x: &SqMatrix, y: &SqMatrix) -> Result<Option<ElementaryOp>> {
    let ring = x.ring();
    let d = x.sl_inverse()?.mul(y)?;
    let n = d.size();
    let mut found = None;
    for i in 0..n {
        for j in 0..n {
            let e = d.get(i, j);
            let expect_one = i == j;
            if expect_one {
                if !ring.is_one(e) {
                    return Ok(None);
                }
            } else if !ring.is_zero(e) {
                if found.is_some() {
                    return Ok(None);
                }
                found = Some(ElementaryOp::new(i + 1, j + 1, e.clone())?);
            }
        }
    }
    Ok(found)
}

fn magnitude(attempt: u64) -> u64 {
    1 + attempt / 8
}

/// One random endpoint reachable from `p` by an `N`-step elementary path
/// inside `open`. Spends at most `budget` samples.
pub fn reachable_sample(p: &SqMatrix, open: &OpenSet, seed: u64, budget: u64) -> Result<(SqMatrix, ElemPath)> {
    require_infinite_field(p.ring())?;
    if !open.contains(p) {
        return Err(Error::NotInOpenSet("start point".into()));
    }
    let mut rng = rng::stream(seed, "reachable");
    let schedule = RootSchedule::for_size(p.size());
    for attempt in 0..budget {
        let t = sample_params(p.ring(), &schedule, &mut rng, magnitude(attempt));
        if let Some(path) = walk_schedule(p, &schedule, &t, open)? {
            return Ok((path.end().clone(), path));
        }
    }
    Err(Error::BudgetExhausted(budget))
}

fn sample_params(ring: &Ring, schedule: &RootSchedule, rng: &mut rng::Stream, mag: u64) -> Vec<Elem> {
    (0..schedule.len()).map(|_| ring.sample_constant(rng, mag)).collect()
}

/// A verified elementary path from `p` to `q` inside `open`.
///
/// Tries a single step, then the direct factorization of `p^{-1} q`, then
/// meets in the middle: random reachable points `x` from `p` and `y` from
/// `q` are sampled until the factorization path `x -> y` stays in `open`.
/// Each round costs one unit of `budget`.
pub fn connect(p: &SqMatrix, q: &SqMatrix, open: &OpenSet, budget: u64, seed: u64) -> Result<ElemPath> {
    require_infinite_field(p.ring())?;
    if p.size() != q.size() || p.size() != open.size() || p.ring() != q.ring() {
        return Err(Error::SizeMismatch("points and open set disagree".into()));
    }
    if !open.contains(p) {
        return Err(Error::NotInOpenSet("p".into()));
    }
    if !open.contains(q) {
        return Err(Error::NotInOpenSet("q".into()));
    }
    if p == q {
        return Ok(ElemPath::point(p.clone()));
    }
    if let Some(op) = single_step(p, q)? {
        return ElemPath::walk(p, &[op]);
    }
    if let Some(path) = direct_path(p, q, open)? {
        return Ok(path);
    }
    let ring = p.ring();
    let schedule = RootSchedule::for_size(p.size());
    let mut from_p = rng::stream(seed, "connect/p");
    let mut from_q = rng::stream(seed, "connect/q");
    for attempt in 0..budget {
        let mag = magnitude(attempt);
        let tp = sample_params(ring, &schedule, &mut from_p, mag);
        let tq = sample_params(ring, &schedule, &mut from_q, mag);
        let Some(px) = walk_schedule(p, &schedule, &tp, open)? else {
            continue;
        };
        let Some(qy) = walk_schedule(q, &schedule, &tq, open)? else {
            continue;
        };
        let Some(bridge) = direct_path(px.end(), qy.end(), open)? else {
            continue;
        };
        let path = px.concat(&bridge)?.concat(&qy.reversed())?;
        if !path.verify(Some(open)) {
            return Err(Error::InternalInvariantViolation("assembled path fails to verify".into()));
        }
        return Ok(path);
    }
    Err(Error::BudgetExhausted(budget))
}

/// Upper bound on enumerated matrices for the exhaustive finite-field search.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

/// All points of `SL_size(F) ∩ open` over a finite field, in a fixed order.
pub fn enumerate_open_set(ring: &Ring, open: &OpenSet) -> Result<Vec<SqMatrix>> {
    let elems = ring
        .elements()
        .filter(|_| ring.is_field())
        .ok_or_else(|| Error::UnsupportedRing("exhaustive search needs a finite field".into()))?;
    let k = open.size();
    let q = elems.len() as u64;
    let total = q
        .checked_pow((k * k) as u32)
        .filter(|&t| t <= EXHAUSTIVE_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{q}^{} matrices", k * k)))?;
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut rows = vec![Vec::with_capacity(k); k];
        for r in rows.iter_mut() {
            for _ in 0..k {
                r.push(elems[(idx % q) as usize].clone());
                idx /= q;
            }
        }
        let g = SqMatrix::from_rows(ring, rows)?;
        if open.contains(&g) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Breadth-first search for an elementary path from `p` to `q` inside
/// `open` over a finite field. `None` certifies that no such path exists.
pub fn exhaustive_path(p: &SqMatrix, q: &SqMatrix, open: &OpenSet) -> Result<Option<ElemPath>> {
    let ring = p.ring();
    let points = enumerate_open_set(ring, open)?;
    let nonzero: Vec<Elem> = ring
        .elements()
        .expect("finite")
        .into_iter()
        .filter(|e| !ring.is_zero(e))
        .collect();
    let index: HashMap<Vec<Elem>, usize> = points.iter().enumerate().map(|(i, g)| (g.entries(), i)).collect();
    let (Some(&src), Some(&dst)) = (index.get(&p.entries()), index.get(&q.entries())) else {
        return Err(Error::NotInOpenSet("endpoint".into()));
    };
    let k = p.size();
    let mut parent: Vec<Option<(usize, ElementaryOp)>> = vec![None; points.len()];
    let mut seen = vec![false; points.len()];
    seen[src] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(cur) = queue.pop_front() {
        if cur == dst {
            break;
        }
        for i in 1..=k {
            for j in (1..=k).filter(|&j| j != i) {
                for t in &nonzero {
                    let op = ElementaryOp::new(i, j, t.clone())?;
                    let next = points[cur].times_op(&op)?;
                    if let Some(&n) = index.get(&next.entries()) {
                        if !seen[n] {
                            seen[n] = true;
                            parent[n] = Some((cur, op));
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
    }
    if !seen[dst] {
        return Ok(None);
    }
    let mut ops = Vec::new();
    let mut cur = dst;
    while let Some((prev, op)) = parent[cur].clone() {
        ops.push(op);
        cur = prev;
    }
    ops.reverse();
    Ok(Some(ElemPath::walk(p, &ops)?))
}

/// Connected components of `SL_size(F) ∩ open` under single elementary
/// steps that stay inside `open`, over a finite field.
pub fn exhaustive_components(ring: &Ring, open: &OpenSet) -> Result<Vec<Vec<SqMatrix>>> {
    let points = enumerate_open_set(ring, open)?;
    let mut comps = Vec::new();
    let mut done = vec![false; points.len()];
    for s in 0..points.len() {
        if done[s] {
            continue;
        }
        let mut comp = Vec::new();
        for (t, g) in points.iter().enumerate() {
            if t == s || (!done[t] && exhaustive_path(&points[s], g, open)?.is_some()) {
                done[t] = true;
                comp.push(g.clone());
            }
        }
        comps.push(comp);
    }
    Ok(comps)
}
