//! Unimodular rows, the generic locus, prime avoidance, and moving a row
//! into the generic locus along constant elementary operations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{apply_right_row, ElementaryOp, OpJson};
use crate::ring::{Elem, Height, Ideal, Ring, RingDescriptor};
use crate::rng;

/// A unimodular row `(a_1, .., a_{n+1})`, `n >= 3`, with `sum a_i x_i = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct UmRow {
    ring: Ring,
    entries: Vec<Elem>,
    certificate: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingDescriptor>,
    pub entries: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<String>>,
}

pub const MIN_ROW_LEN: usize = 4;

impl UmRow {
    pub fn new(ring: &Ring, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() < MIN_ROW_LEN {
            return Err(Error::SizeMismatch(format!(
                "rows need at least {MIN_ROW_LEN} entries, got {}",
                entries.len()
            )));
        }
        let certificate = ring.solve_unimodular(&entries)?;
        Ok(UmRow {
            ring: ring.clone(),
            entries,
            certificate,
        })
    }

    /// A row with a caller-supplied certificate, checked exactly.
    pub fn with_certificate(ring: &Ring, entries: Vec<Elem>, certificate: Vec<Elem>) -> Result<Self> {
        if entries.len() < MIN_ROW_LEN || certificate.len() != entries.len() {
            return Err(Error::SizeMismatch("row and certificate lengths".into()));
        }
        if !ring.is_one(&ring.dot(&entries, &certificate)) {
            return Err(Error::Invalid("certificate does not sum to 1".into()));
        }
        Ok(UmRow {
            ring: ring.clone(),
            entries,
            certificate,
        })
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, entries: &[S]) -> Result<Self> {
        Self::new(ring, ring.parse_all(entries)?)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn certificate(&self) -> &[Elem] {
        &self.certificate
    }

    /// Row length `n + 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `n`, one less than the length.
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    /// 1-based entry.
    pub fn at(&self, i: usize) -> &Elem {
        &self.entries[i - 1]
    }

    pub fn certificate_holds(&self) -> bool {
        self.ring.is_one(&self.ring.dot(&self.entries, &self.certificate))
    }

    pub fn format(&self) -> Vec<String> {
        self.ring.format_all(&self.entries)
    }

    pub fn to_json(&self, with_ring: bool) -> RowJson {
        RowJson {
            ring: with_ring.then(|| self.ring.descriptor().clone()),
            entries: self.ring.format_all(&self.entries),
            certificate: Some(self.ring.format_all(&self.certificate)),
        }
    }

    pub fn from_json(ring: &Ring, j: &RowJson) -> Result<Self> {
        if let Some(d) = &j.ring {
            if d != ring.descriptor() {
                return Err(Error::Invalid("row ring differs from the supplied ring".into()));
            }
        }
        let entries = ring.parse_all(&j.entries)?;
        match &j.certificate {
            Some(c) => Self::with_certificate(ring, entries, ring.parse_all(c)?),
            None => Self::new(ring, entries),
        }
    }
}

/// Whether `a_n * a_{n+1}` avoids every minimal prime.
pub fn is_generic(a: &UmRow) -> Result<bool> {
    let r = a.ring();
    let n = a.n();
    r.avoids_minimal_primes(&r.mul(a.at(n), a.at(n + 1)))
}

/// `a * op`, with a fresh certificate.
pub fn act(a: &UmRow, op: &ElementaryOp) -> Result<UmRow> {
    let entries = apply_right_row(a.ring(), a.entries(), op)?;
    match UmRow::new(a.ring(), entries) {
        Err(Error::NotUnimodular) => Err(Error::InternalInvariantViolation(
            "elementary action broke unimodularity".into(),
        )),
        other => other,
    }
}

/// Rows `a, a g_1, a g_1 g_2, ..` joined by elementary steps.
#[derive(Clone, Debug, PartialEq)]
pub struct RowPath {
    pub rows: Vec<UmRow>,
    pub steps: Vec<ElementaryOp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowPathJson {
    pub rows: Vec<RowJson>,
    pub steps: Vec<OpJson>,
}

impl RowPath {
    pub fn point(a: UmRow) -> Self {
        RowPath {
            rows: vec![a],
            steps: Vec::new(),
        }
    }

    pub fn walk(a: &UmRow, ops: &[ElementaryOp]) -> Result<Self> {
        let mut p = Self::point(a.clone());
        for op in ops {
            let next = act(p.end(), op)?;
            p.rows.push(next);
            p.steps.push(op.clone());
        }
        Ok(p)
    }

    pub fn start(&self) -> &UmRow {
        &self.rows[0]
    }

    pub fn end(&self) -> &UmRow {
        self.rows.last().expect("paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every step replays exactly and every certificate holds. With
    /// `constants_only`, every parameter must lie in the coefficient field.
    pub fn verify(&self, constants_only: bool) -> bool {
        if self.rows.is_empty() || self.rows.len() != self.steps.len() + 1 {
            return false;
        }
        let ring = self.rows[0].ring();
        if !self.rows.iter().all(|r| r.certificate_holds() && r.ring() == ring) {
            return false;
        }
        self.steps.iter().enumerate().all(|(k, op)| {
            (!constants_only || ring.is_constant(&op.t))
                && apply_right_row(ring, self.rows[k].entries(), op).ok().as_deref()
                    == Some(self.rows[k + 1].entries())
        })
    }

    pub fn to_json(&self) -> RowPathJson {
        let ring = self.start().ring();
        RowPathJson {
            rows: self.rows.iter().map(|r| r.to_json(false)).collect(),
            steps: self.steps.iter().map(|s| s.to_json(ring)).collect(),
        }
    }

    pub fn from_json(ring: &Ring, j: &RowPathJson) -> Result<Self> {
        if j.rows.is_empty() {
            return Err(Error::Invalid("a path has at least one row".into()));
        }
        Ok(RowPath {
            rows: j.rows.iter().map(|r| UmRow::from_json(ring, r)).collect::<Result<_>>()?,
            steps: j
                .steps
                .iter()
                .map(|s| ElementaryOp::from_json(ring, s))
                .collect::<Result<_>>()?,
        })
    }
}

/// Move `a` into the generic locus by elementary operations with constant
/// parameters that shift the last two entries.
pub fn make_generic(a: &UmRow, seed: u64, budget: u64) -> Result<RowPath> {
    let ring = a.ring();
    if !ring.contains_infinite_field() {
        return Err(Error::NotInfiniteField);
    }
    if is_generic(a)? {
        return Ok(RowPath::point(a.clone()));
    }
    let len = a.len();
    let mut rng = rng::stream(seed, "make-generic");
    for attempt in 0..budget {
        let mag = 1 + attempt / 16;
        let mut ops = Vec::new();
        for target in [len - 1, len] {
            for i in (1..=len).filter(|&i| i != target) {
                let t = ring.sample_constant(&mut rng, mag);
                if !ring.is_zero(&t) {
                    ops.push(ElementaryOp::new(i, target, t)?);
                }
            }
        }
        let mut entries = a.entries().to_vec();
        for op in &ops {
            entries = apply_right_row(ring, &entries, op)?;
        }
        let n = len - 1;
        if ring.avoids_minimal_primes(&ring.mul(&entries[n - 1], &entries[n]))? {
            return RowPath::walk(a, &ops);
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// Default number of candidate shifts tried per level over infinite rings.
pub const AVOIDANCE_BUDGET: u64 = 2_000;

/// Largest exhaustive search over a finite ring.
pub const FINITE_SEARCH_LIMIT: u64 = 10_000_000;

/// For a unimodular row `(a_1, .., a_{m+1})`, coefficients `lambda` such
/// that `(a_1 + lambda_1 a_{m+1}, .., a_m + lambda_m a_{m+1})` has height
/// at least `m` or is the unit ideal.
pub fn prime_avoidance(ring: &Ring, row: &[Elem]) -> Result<Vec<Elem>> {
    prime_avoidance_over(ring, &[], row, AVOIDANCE_BUDGET, 0)
}

fn shifted(ring: &Ring, row: &[Elem], lambda: &[Elem]) -> Vec<Elem> {
    let last = row.last().expect("nonempty row");
    lambda
        .iter()
        .zip(row)
        .map(|(l, a)| ring.add_mul(a, l, last))
        .collect()
}

fn meets_target(ring: &Ring, base: &[Elem], gens: &[Elem]) -> Result<bool> {
    let mut all = base.to_vec();
    all.extend(gens.iter().cloned());
    Ok(ring.height(&Ideal::new(all))?.at_least(base.len() + gens.len()))
}

/// Height of `(a_1 + lambda_1 a_{m+1}, .., a_m + lambda_m a_{m+1})`.
pub fn shifted_height(ring: &Ring, row: &[Elem], lambda: &[Elem]) -> Result<Height> {
    ring.height(&Ideal::new(shifted(ring, row, lambda)))
}

/// Prime avoidance relative to a base ideal: `lambda` such that
/// `base + (a_i + lambda_i a_{m+1})` has height at least `|base| + m`
/// or is the unit ideal. The row together with `base` must generate `R`.
///
/// Finite rings are searched exhaustively. Otherwise the shifts are built
/// one coordinate at a time: `b_k = a_k + sum_{j>k} c_kj a_j + c_k a_{m+1}`
/// with constant `c` drawn from growing boxes (zero first), each level
/// validated by an exact height computation; `lambda` is recovered by
/// back-substitution.
pub fn prime_avoidance_over(ring: &Ring, base: &[Elem], row: &[Elem], budget: u64, seed: u64) -> Result<Vec<Elem>> {
    if row.len() < 2 {
        return Err(Error::SizeMismatch("prime avoidance needs m + 1 >= 2 entries".into()));
    }
    let mut full = base.to_vec();
    full.extend(row.iter().cloned());
    if !ring.is_unit_ideal(&Ideal::new(full))? {
        return Err(Error::NotUnimodular);
    }
    let m = row.len() - 1;
    if let Some(elems) = ring.elements() {
        return exhaustive_avoidance(ring, base, row, &elems);
    }
    let last = &row[m];
    let mut rng = rng::stream(seed, "prime-avoidance");
    // b[k] and the coefficients used to build it
    let mut built: Vec<Elem> = Vec::with_capacity(m);
    let mut upper: Vec<Vec<Elem>> = Vec::with_capacity(m);
    let mut shift: Vec<Elem> = Vec::with_capacity(m);
    for k in 0..m {
        let mut found = false;
        for attempt in 0..budget {
            let mag = 1 + attempt / 8;
            let (cs, c): (Vec<Elem>, Elem) = if attempt == 0 {
                (vec![ring.zero(); m - k - 1], ring.zero())
            } else if attempt <= 2 * (m as u64) {
                // try a bare shift by the last entry before mixing coordinates
                (vec![ring.zero(); m - k - 1], ring.sample_constant(&mut rng, mag))
            } else {
                (
                    (k + 1..m).map(|_| ring.sample_constant(&mut rng, mag)).collect(),
                    ring.sample_constant(&mut rng, mag),
                )
            };
            let mut b = ring.add_mul(&row[k], &c, last);
            for (cj, aj) in cs.iter().zip(&row[k + 1..m]) {
                b = ring.add_mul(&b, cj, aj);
            }
            let mut cand = built.clone();
            cand.push(b.clone());
            if meets_target(ring, base, &cand)? {
                built.push(b);
                upper.push(cs);
                shift.push(c);
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::BudgetExhausted(budget));
        }
    }
    // lambda = U^{-1} c with U unitriangular
    let mut lambda = vec![ring.zero(); m];
    for k in (0..m).rev() {
        let mut l = shift[k].clone();
        for (off, ckj) in upper[k].iter().enumerate() {
            let j = k + 1 + off;
            l = ring.sub(&l, &ring.mul(ckj, &lambda[j]));
        }
        lambda[k] = l;
    }
    if !meets_target(ring, base, &shifted(ring, row, &lambda))? {
        return Err(Error::InternalInvariantViolation("back-substituted shifts fail the height check".into()));
    }
    Ok(lambda)
}

fn exhaustive_avoidance(ring: &Ring, base: &[Elem], row: &[Elem], elems: &[Elem]) -> Result<Vec<Elem>> {
    let m = row.len() - 1;
    let q = elems.len() as u64;
    let total = q
        .checked_pow(m as u32)
        .filter(|&t| t <= FINITE_SEARCH_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{q}^{m} shift vectors")))?;
    for idx in 0..total {
        // lexicographic, first coordinate most significant
        let mut rest = idx;
        let mut lambda = vec![ring.zero(); m];
        for slot in lambda.iter_mut().rev() {
            *slot = elems[(rest % q) as usize].clone();
            rest /= q;
        }
        if meets_target(ring, base, &shifted(ring, row, &lambda))? {
            return Ok(lambda);
        }
    }
    Err(Error::InternalInvariantViolation(
        "exhaustive avoidance found no shift for a unimodular row".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn qxyz() -> Ring {
        Ring::rational_polynomials(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn genericity_examples() {
        let r = qxyz();
        assert!(is_generic(&UmRow::parse(&r, &["x", "y", "z", "1+x"]).unwrap()).unwrap());
        let z30 = Ring::integers_mod(30).unwrap();
        assert!(is_generic(&UmRow::parse(&z30, &["1", "0", "7", "11"]).unwrap()).unwrap());
        assert!(!is_generic(&UmRow::parse(&z30, &["1", "0", "6", "7"]).unwrap()).unwrap());
        assert_eq!(
            UmRow::parse(&z30, &["2", "0", "6", "4"]).unwrap_err(),
            Error::NotUnimodular
        );
        assert!(UmRow::parse(&z30, &["1", "0", "6"]).is_err());
    }

    #[test]
    fn action_examples() {
        let r = qxyz();
        let a = UmRow::parse(&r, &["x", "y", "z", "1+x"]).unwrap();
        let b = act(&a, &ElementaryOp::new(4, 1, r.one()).unwrap()).unwrap();
        assert_eq!(b.format(), vec!["2*x + 1", "y", "z", "x + 1"]);
        assert!(b.certificate_holds());
        let op = ElementaryOp::new(2, 3, r.parse("x*y").unwrap()).unwrap();
        assert_eq!(act(&act(&a, &op).unwrap(), &op.inverse(&r)).unwrap().entries(), a.entries());
        assert_eq!(act(&a, &ElementaryOp::new(1, 2, r.zero()).unwrap()).unwrap().entries(), a.entries());
    }

    #[test]
    fn avoidance_examples() {
        let z30 = Ring::integers_mod(30).unwrap();
        let l = prime_avoidance(&z30, &z30.parse_all(&["6", "5"]).unwrap()).unwrap();
        assert_eq!(l, vec![z30.one()]);

        let qxy = Ring::rational_polynomials(&["x", "y"]).unwrap();
        let l = prime_avoidance(&qxy, &qxy.parse_all(&["x", "y", "1"]).unwrap()).unwrap();
        assert!(l.iter().all(|e| qxy.is_zero(e)));

        let r = qxyz();
        let row = r.parse_all(&["0", "0", "1", "1"]).unwrap();
        let l = prime_avoidance(&r, &row).unwrap();
        assert!(shifted_height(&r, &row, &l).unwrap().at_least(3));
    }

    #[test]
    fn avoidance_needs_mixing_when_shifts_alone_fail() {
        // (x, x, 1 - x): shifting by the last entry alone keeps both
        // generators proportional only if the shifts agree
        let r = Ring::rational_polynomials(&["x"]).unwrap();
        let row = r.parse_all(&["x", "x", "1 - x"]).unwrap();
        let l = prime_avoidance(&r, &row).unwrap();
        assert_eq!(shifted_height(&r, &row, &l).unwrap(), Height::UnitIdeal);
    }

    #[test]
    fn avoidance_over_base_ideal() {
        let r = qxyz();
        let row = r.parse_all(&["x", "y", "1+x"]).unwrap();
        let base = vec![r.parse("z").unwrap()];
        let mu = prime_avoidance_over(&r, &base, &row, 100, 0).unwrap();
        let mut gens = base.clone();
        gens.extend(shifted(&r, &row, &mu));
        assert!(r.height(&Ideal::new(gens)).unwrap().at_least(3));
    }

    #[test]
    fn make_generic_examples() {
        let r = qxyz();
        let a = UmRow::parse(&r, &["1", "0", "0", "0"]).unwrap();
        let p = make_generic(&a, 0, 100).unwrap();
        assert!(p.verify(true));
        assert!(is_generic(p.end()).unwrap());
        let g = UmRow::parse(&r, &["x", "y", "z", "1+x"]).unwrap();
        assert_eq!(make_generic(&g, 0, 100).unwrap().len(), 0);
        let z30 = Ring::integers_mod(30).unwrap();
        let b = UmRow::parse(&z30, &["1", "0", "6", "0"]).unwrap();
        assert_eq!(make_generic(&b, 0, 100), Err(Error::NotInfiniteField));
    }

    #[test]
    fn make_generic_on_a_reducible_ring() {
        let d = RingDescriptor::quotient(
            RingDescriptor::polynomial(RingDescriptor::rationals(), &["x", "y"]),
            &["x*y"],
            Some(1),
            Some(vec![vec!["x"], vec!["y"]]),
        );
        let r = Ring::from_descriptor(&d).unwrap();
        let a = UmRow::parse(&r, &["1", "0", "x", "y"]).unwrap();
        assert!(!is_generic(&a).unwrap());
        let p = make_generic(&a, 5, 200).unwrap();
        assert!(p.verify(true));
        assert!(is_generic(p.end()).unwrap());
    }
}
