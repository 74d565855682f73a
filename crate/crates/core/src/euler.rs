//! Euler-class data `(J, omega)`, formal sums of them, and witness chains
//! built from the defining relations: disconnected sums, complete
//! intersections and elementary actions.
//!
//! Equality of formal sums is never decided here. A [`RelationWitness`] is a
//! list of relation applications that transforms `lhs - rhs` into zero, and
//! [`verify_witness`] replays it with exact ideal computations.
//!
//! Rows have length `n + 1`. For a row `b` and shifts `mu` of length `n - 1`,
//! `D(b, mu)` denotes the datum of
//! `(b_1 + mu_1 b_{n+1}, .., b_{n-1} + mu_{n-1} b_{n+1}, b_n, b_{n+1})`:
//! `J = (b_k + mu_k b_{n+1}, b_n)` with
//! `omega = (b_k + mu_k b_{n+1}, b_n b_{n+1})`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{apply_right_row, ElementaryOp, OpJson};
use crate::ring::{ComaximalCert, Elem, Height, Ideal, IdealKey, Ring};
use crate::rng;
use crate::umrow::{is_generic, make_generic, prime_avoidance_over, RowPath, UmRow, AVOIDANCE_BUDGET};
use crate::wms::{group_law, is_normalized, NormalizedPair};

/// A pair `(J, omega)`: `n` generators of `J` and `n` residues presenting
/// `(R/J)^n -> J/J^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerDatum {
    ring: Ring,
    gens: Vec<Elem>,
    omega: Vec<Elem>,
}

/// Canonical form of a nonzero datum: the ideal and `omega mod J^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DatumKey(IdealKey, Vec<Elem>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumJson {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub omega: Vec<String>,
}

fn square(ring: &Ring, i: &Ideal) -> Ideal {
    ring.ideal_product(i, i)
}

impl EulerDatum {
    pub fn new(ring: &Ring, gens: Vec<Elem>, omega: Vec<Elem>) -> Result<Self> {
        if gens.is_empty() || gens.len() != omega.len() {
            return Err(Error::SizeMismatch("a datum needs n generators and n residues".into()));
        }
        Ok(EulerDatum {
            ring: ring.clone(),
            gens,
            omega,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn omega(&self) -> &[Elem] {
        &self.omega
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(self.gens.clone())
    }

    /// `J = R`: the datum represents zero.
    pub fn is_zero(&self) -> Result<bool> {
        self.ring.is_unit_ideal(&self.ideal())
    }

    /// Height `n` (or unit), `omega` inside `J`, and `J` inside `(omega) + J^2`.
    pub fn validate(&self) -> Result<()> {
        let r = &self.ring;
        let j = self.ideal();
        match r.height(&j)? {
            Height::UnitIdeal => return Ok(()),
            Height::Finite(h) if h != self.n() => {
                return Err(Error::Invalid(format!("ideal has height {h}, expected {}", self.n())))
            }
            Height::Finite(_) => {}
        }
        if !r.all_in(&self.omega, &j)? {
            return Err(Error::Invalid("omega does not lie in J".into()));
        }
        let mut cover = self.omega.clone();
        cover.extend(square(r, &j).gens().iter().cloned());
        if !r.all_in(&self.gens, &Ideal::new(cover))? {
            return Err(Error::Invalid("omega does not generate J modulo J^2".into()));
        }
        Ok(())
    }

    /// `None` for the zero datum.
    pub fn key(&self) -> Result<Option<DatumKey>> {
        if self.is_zero()? {
            return Ok(None);
        }
        let j = self.ideal();
        let reduced = self.ring.reduce_modulo(&self.omega, &square(&self.ring, &j))?;
        Ok(Some(DatumKey(self.ring.ideal_key(&j)?, reduced)))
    }

    pub fn to_json(&self) -> DatumJson {
        DatumJson {
            j: self.ring.format_all(&self.gens),
            omega: self.ring.format_all(&self.omega),
        }
    }

    pub fn from_json(ring: &Ring, j: &DatumJson) -> Result<Self> {
        Self::new(ring, ring.parse_all(&j.j)?, ring.parse_all(&j.omega)?)
    }
}

/// A signed list of data. Literal comparison only; equality in the Euler
/// class group is established by witnesses.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FormalSum {
    pub terms: Vec<(i8, EulerDatum)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub sign: i8,
    pub datum: DatumJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SumJson {
    pub terms: Vec<TermJson>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum::default()
    }

    /// A single term, or the empty sum when `J = R`.
    pub fn single(d: EulerDatum) -> Result<Self> {
        let mut s = Self::zero();
        s.push(1, d)?;
        Ok(s)
    }

    /// Append a term; zero data are dropped.
    pub fn push(&mut self, sign: i8, d: EulerDatum) -> Result<()> {
        if !d.is_zero()? {
            self.terms.push((sign, d));
        }
        Ok(())
    }

    pub fn plus(mut self, other: &FormalSum) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn negated(&self) -> Self {
        FormalSum {
            terms: self.terms.iter().map(|(s, d)| (-s, d.clone())).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Net multiplicities of canonical keys coincide.
    pub fn literally_equal(&self, other: &FormalSum) -> Result<bool> {
        let mut net: HashMap<DatumKey, i64> = HashMap::new();
        for (s, d) in &self.terms {
            if let Some(k) = d.key()? {
                *net.entry(k).or_default() += *s as i64;
            }
        }
        for (s, d) in &other.terms {
            if let Some(k) = d.key()? {
                *net.entry(k).or_default() -= *s as i64;
            }
        }
        Ok(net.values().all(|&v| v == 0))
    }

    pub fn to_json(&self) -> SumJson {
        SumJson {
            terms: self
                .terms
                .iter()
                .map(|(s, d)| TermJson {
                    sign: *s,
                    datum: d.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(ring: &Ring, j: &SumJson) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &j.terms {
            check_sign(t.sign)?;
            terms.push((t.sign, EulerDatum::from_json(ring, &t.datum)?));
        }
        Ok(FormalSum { terms })
    }
}

fn check_sign(s: i8) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("sign must be 1 or -1, got {s}")))
    }
}

/// One relation application. `sign` selects which signed occurrence of the
/// data the step rewrites.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// `(J, w_J) = (K, w_K) + (L, w_L)` with `J = KL`, `K + L = R`.
    /// `split` rewrites the left side into the right, otherwise the reverse.
    DisconnectedSum {
        sign: i8,
        split: bool,
        merged: EulerDatum,
        parts: Box<(EulerDatum, EulerDatum)>,
        cert: ComaximalCert,
    },
    /// `(J, w) = 0` when `lift` generates `J` and reduces to `w` mod `J^2`.
    CompleteIntersection { sign: i8, datum: EulerDatum, lift: Vec<Elem> },
    /// `(J, w) = (J, w g)` for `g` the product of `ops` over `R/J`.
    ElementaryAction {
        sign: i8,
        from: EulerDatum,
        to: EulerDatum,
        ops: Vec<ElementaryOp>,
    },
    /// Remove `+D` and `-D`.
    LiteralCancel { datum: EulerDatum },
    /// Add `+D` and `-D`.
    InsertPair { datum: EulerDatum },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RelationWitness {
    pub chain: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertJson {
    pub k: String,
    pub l: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StepJson {
    DisconnectedSum {
        sign: i8,
        direction: String,
        merged: DatumJson,
        parts: Vec<DatumJson>,
        certificate: CertJson,
    },
    CompleteIntersection {
        sign: i8,
        datum: DatumJson,
        lift: Vec<String>,
    },
    ElementaryAction {
        sign: i8,
        from: DatumJson,
        to: DatumJson,
        ops: Vec<OpJson>,
    },
    LiteralCancel {
        datum: DatumJson,
    },
    InsertPair {
        datum: DatumJson,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub chain: Vec<StepJson>,
}

impl RelationWitness {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn to_json(&self, ring: &Ring) -> WitnessJson {
        let chain = self
            .chain
            .iter()
            .map(|s| match s {
                Step::DisconnectedSum {
                    sign,
                    split,
                    merged,
                    parts,
                    cert,
                } => StepJson::DisconnectedSum {
                    sign: *sign,
                    direction: if *split { "split" } else { "merge" }.into(),
                    merged: merged.to_json(),
                    parts: vec![parts.0.to_json(), parts.1.to_json()],
                    certificate: CertJson {
                        k: ring.format(&cert.k),
                        l: ring.format(&cert.l),
                    },
                },
                Step::CompleteIntersection { sign, datum, lift } => StepJson::CompleteIntersection {
                    sign: *sign,
                    datum: datum.to_json(),
                    lift: ring.format_all(lift),
                },
                Step::ElementaryAction { sign, from, to, ops } => StepJson::ElementaryAction {
                    sign: *sign,
                    from: from.to_json(),
                    to: to.to_json(),
                    ops: ops.iter().map(|o| o.to_json(ring)).collect(),
                },
                Step::LiteralCancel { datum } => StepJson::LiteralCancel { datum: datum.to_json() },
                Step::InsertPair { datum } => StepJson::InsertPair { datum: datum.to_json() },
            })
            .collect();
        WitnessJson { chain }
    }

    pub fn from_json(ring: &Ring, j: &WitnessJson) -> Result<Self> {
        let d = |x: &DatumJson| EulerDatum::from_json(ring, x);
        let mut chain = Vec::new();
        for s in &j.chain {
            chain.push(match s {
                StepJson::DisconnectedSum {
                    sign,
                    direction,
                    merged,
                    parts,
                    certificate,
                } => {
                    check_sign(*sign)?;
                    let split = match direction.as_str() {
                        "split" => true,
                        "merge" => false,
                        other => return Err(Error::Invalid(format!("unknown direction {other:?}"))),
                    };
                    let [k, l] = parts.as_slice() else {
                        return Err(Error::Invalid("a disconnected sum has two parts".into()));
                    };
                    Step::DisconnectedSum {
                        sign: *sign,
                        split,
                        merged: d(merged)?,
                        parts: Box::new((d(k)?, d(l)?)),
                        cert: ComaximalCert {
                            k: ring.parse(&certificate.k)?,
                            l: ring.parse(&certificate.l)?,
                        },
                    }
                }
                StepJson::CompleteIntersection { sign, datum, lift } => {
                    check_sign(*sign)?;
                    Step::CompleteIntersection {
                        sign: *sign,
                        datum: d(datum)?,
                        lift: ring.parse_all(lift)?,
                    }
                }
                StepJson::ElementaryAction { sign, from, to, ops } => {
                    check_sign(*sign)?;
                    Step::ElementaryAction {
                        sign: *sign,
                        from: d(from)?,
                        to: d(to)?,
                        ops: ops
                            .iter()
                            .map(|o| ElementaryOp::from_json(ring, o))
                            .collect::<Result<_>>()?,
                    }
                }
                StepJson::LiteralCancel { datum } => Step::LiteralCancel { datum: d(datum)? },
                StepJson::InsertPair { datum } => Step::InsertPair { datum: d(datum)? },
            });
        }
        Ok(RelationWitness { chain })
    }
}

/// Outcome of replaying a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub ok: bool,
    /// 0-based index of the failing step; `None` if the inputs themselves
    /// were rejected or the chain ended with leftover terms.
    pub failed_step: Option<usize>,
    pub reason: Option<String>,
}

struct State {
    n: Option<usize>,
    terms: Vec<(i8, DatumKey)>,
}

impl State {
    fn admit(&mut self, d: &EulerDatum) -> Result<Option<DatumKey>> {
        match self.n {
            Some(n) if n != d.n() => return Err(Error::Invalid("data of different sizes".into())),
            _ => self.n = Some(d.n()),
        }
        d.validate()?;
        d.key()
    }

    fn add(&mut self, sign: i8, d: &EulerDatum) -> Result<()> {
        if let Some(k) = self.admit(d)? {
            self.terms.push((sign, k));
        }
        Ok(())
    }

    fn remove(&mut self, sign: i8, d: &EulerDatum) -> Result<()> {
        let Some(k) = self.admit(d)? else {
            return Ok(());
        };
        match self.terms.iter().position(|(s, x)| *s == sign && *x == k) {
            Some(p) => {
                self.terms.remove(p);
                Ok(())
            }
            None => Err(Error::Invalid(format!("no term with sign {sign} matches the datum"))),
        }
    }

    fn is_zero(&self) -> bool {
        let mut net: HashMap<&DatumKey, i64> = HashMap::new();
        for (s, k) in &self.terms {
            *net.entry(k).or_default() += *s as i64;
        }
        net.values().all(|&v| v == 0)
    }
}

fn differences_in(ring: &Ring, a: &[Elem], b: &[Elem], ideal: &Ideal) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let diffs: Vec<Elem> = a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect();
    ring.all_in(&diffs, ideal)
}

fn apply_step(ring: &Ring, state: &mut State, step: &Step) -> Result<()> {
    let fail = |m: &str| Err(Error::Invalid(m.to_string()));
    match step {
        Step::DisconnectedSum {
            sign,
            split,
            merged,
            parts,
            cert,
        } => {
            check_sign(*sign)?;
            let (k, l) = (&parts.0, &parts.1);
            let (ki, li, ji) = (k.ideal(), l.ideal(), merged.ideal());
            if !ring.verify_comaximal(&ki, &li, cert)? {
                return fail("comaximality certificate does not verify");
            }
            if !ring.ideal_eq(&ji, &ring.ideal_product(&ki, &li))? {
                return fail("J is not the product KL");
            }
            if !differences_in(ring, merged.omega(), k.omega(), &square(ring, &ki))? {
                return fail("omega_J and omega_K differ outside K^2");
            }
            if !differences_in(ring, merged.omega(), l.omega(), &square(ring, &li))? {
                return fail("omega_J and omega_L differ outside L^2");
            }
            if *split {
                state.remove(*sign, merged)?;
                state.add(*sign, k)?;
                state.add(*sign, l)?;
            } else {
                state.remove(*sign, k)?;
                state.remove(*sign, l)?;
                state.add(*sign, merged)?;
            }
        }
        Step::CompleteIntersection { sign, datum, lift } => {
            check_sign(*sign)?;
            let j = datum.ideal();
            if lift.len() != datum.n() || !ring.ideal_eq(&Ideal::new(lift.clone()), &j)? {
                return fail("lift does not generate J");
            }
            if !differences_in(ring, lift, datum.omega(), &square(ring, &j))? {
                return fail("lift does not reduce to omega modulo J^2");
            }
            state.remove(*sign, datum)?;
        }
        Step::ElementaryAction { sign, from, to, ops } => {
            check_sign(*sign)?;
            let j = from.ideal();
            if !ring.ideal_eq(&j, &to.ideal())? {
                return fail("elementary action changes the ideal");
            }
            let mut w = from.omega().to_vec();
            for op in ops {
                w = apply_right_row(ring, &w, op)?;
            }
            if !differences_in(ring, to.omega(), &w, &square(ring, &j))? {
                return fail("target omega is not omega * g modulo J^2");
            }
            state.remove(*sign, from)?;
            state.add(*sign, to)?;
        }
        Step::LiteralCancel { datum } => {
            state.remove(1, datum)?;
            state.remove(-1, datum)?;
        }
        Step::InsertPair { datum } => {
            state.add(1, datum)?;
            state.add(-1, datum)?;
        }
    }
    Ok(())
}

/// Replay `w` on `lhs - rhs`; true iff every step checks and nothing remains.
pub fn verify_witness(w: &RelationWitness, lhs: &FormalSum, rhs: &FormalSum) -> WitnessCheck {
    let reject = |step, reason: String| WitnessCheck {
        ok: false,
        failed_step: step,
        reason: Some(reason),
    };
    let Some(ring) = lhs
        .terms
        .first()
        .or(rhs.terms.first())
        .map(|(_, d)| d.ring().clone())
        .or_else(|| first_ring(w))
    else {
        return if w.is_empty() {
            WitnessCheck {
                ok: true,
                failed_step: None,
                reason: None,
            }
        } else {
            reject(Some(0), "steps given but no data to act on".into())
        };
    };
    let mut state = State {
        n: None,
        terms: Vec::new(),
    };
    for (s, d) in &lhs.terms {
        if let Err(e) = check_sign(*s).and_then(|_| state.add(*s, d)) {
            return reject(None, format!("left side: {e}"));
        }
    }
    for (s, d) in &rhs.terms {
        if let Err(e) = check_sign(*s).and_then(|_| state.add(-*s, d)) {
            return reject(None, format!("right side: {e}"));
        }
    }
    for (idx, step) in w.chain.iter().enumerate() {
        if let Err(e) = apply_step(&ring, &mut state, step) {
            return reject(Some(idx), e.to_string());
        }
    }
    if !state.is_zero() {
        return reject(None, format!("{} terms left after the chain", state.terms.len()));
    }
    WitnessCheck {
        ok: true,
        failed_step: None,
        reason: None,
    }
}

fn first_ring(w: &RelationWitness) -> Option<Ring> {
    w.chain.first().map(|s| match s {
        Step::DisconnectedSum { merged, .. } => merged.ring().clone(),
        Step::CompleteIntersection { datum, .. } => datum.ring().clone(),
        Step::ElementaryAction { from, .. } => from.ring().clone(),
        Step::LiteralCancel { datum } | Step::InsertPair { datum } => datum.ring().clone(),
    })
}

// ---------------------------------------------------------------------------
// Data attached to rows

/// `D(b, mu)`.
pub fn datum_for(ring: &Ring, b: &[Elem], mu: &[Elem]) -> Result<EulerDatum> {
    let n = b.len() - 1;
    if mu.len() != n - 1 {
        return Err(Error::SizeMismatch(format!("expected {} shifts, got {}", n - 1, mu.len())));
    }
    let mut gens: Vec<Elem> = (0..n - 1).map(|k| ring.add_mul(&b[k], &mu[k], &b[n])).collect();
    let mut omega = gens.clone();
    gens.push(b[n - 1].clone());
    omega.push(ring.mul(&b[n - 1], &b[n]));
    EulerDatum::new(ring, gens, omega)
}

/// The row with its last two entries exchanged.
pub fn swap_last(b: &[Elem]) -> Vec<Elem> {
    let mut out = b.to_vec();
    let m = out.len();
    out.swap(m - 2, m - 1);
    out
}

/// `phi_0(a)`: the datum of `J = (a_1, .., a_n)` with
/// `omega = (a_1, .., a_{n-1}, a_n a_{n+1})`, or zero when `J = R`.
pub fn phi0(a: &UmRow) -> Result<FormalSum> {
    let ring = a.ring();
    let n = a.n();
    let d = datum_for(ring, a.entries(), &vec![ring.zero(); n - 1])?;
    match ring.height(&d.ideal())? {
        Height::UnitIdeal => Ok(FormalSum::zero()),
        Height::Finite(h) if h == n => FormalSum::single(d),
        Height::Finite(h) => Err(Error::HeightPreconditionFailed(format!(
            "(a_1, .., a_n) has height {h}, need {n}"
        ))),
    }
}

fn shifts_valid(ring: &Ring, b: &[Elem], mu: &[Elem]) -> Result<bool> {
    let n = b.len() - 1;
    Ok(ring.height(&datum_for(ring, b, mu)?.ideal())?.at_least(n))
}

/// Shifts `mu` making `D(b, mu)` have height `n` (or be the unit ideal),
/// trying zero first.
pub fn mu_for(ring: &Ring, b: &[Elem], seed: u64) -> Result<Vec<Elem>> {
    let n = b.len() - 1;
    let mut row: Vec<Elem> = b[..n - 1].to_vec();
    row.push(b[n].clone());
    prime_avoidance_over(ring, &b[n - 1..n], &row, AVOIDANCE_BUDGET, seed)
}

/// Valid shifts drawn at random first, falling back to [`mu_for`].
pub fn sample_mu(a: &UmRow, seed: u64, budget: u64) -> Result<Vec<Elem>> {
    let ring = a.ring();
    let n = a.n();
    let mut stream = rng::stream(seed, "sample-mu");
    for attempt in 0..budget {
        let mu: Vec<Elem> = (0..n - 1)
            .map(|_| ring.sample_constant(&mut stream, 2 + attempt / 4))
            .collect();
        if shifts_valid(ring, a.entries(), &mu)? {
            return Ok(mu);
        }
    }
    mu_for(ring, a.entries(), seed)
}

fn dimension_hypothesis(a: &UmRow) -> Result<()> {
    let n = a.n();
    let d = a.ring().krull_dim().ok_or(Error::MissingDimension)?;
    if n < 3 || d < 3 || d > 2 * n - 3 {
        return Err(Error::DimensionHypothesisViolated(format!(
            "need n >= 3 and 3 <= d <= 2n - 3, have n = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// `phi` on a generic row, with the shifts that produced it.
#[derive(Clone, Debug)]
pub struct PhiValue {
    pub row: UmRow,
    pub mu: Vec<Elem>,
    pub value: FormalSum,
}

pub fn phi_generic(a: &UmRow, seed: u64) -> Result<PhiValue> {
    dimension_hypothesis(a)?;
    if !is_generic(a)? {
        return Err(Error::NotGeneric);
    }
    let ring = a.ring();
    let mu = mu_for(ring, a.entries(), seed)?;
    let value = FormalSum::single(datum_for(ring, a.entries(), &mu)?)?;
    Ok(PhiValue {
        row: a.clone(),
        mu,
        value,
    })
}

/// `phi` on any row: move into the generic locus, then evaluate there.
#[derive(Clone, Debug)]
pub struct PhiResult {
    pub path: RowPath,
    pub generic: PhiValue,
}

pub fn phi(a: &UmRow, seed: u64, budget: u64) -> Result<PhiResult> {
    dimension_hypothesis(a)?;
    let path = make_generic(a, seed, budget)?;
    let generic = phi_generic(path.end(), seed)?;
    Ok(PhiResult { path, generic })
}

// ---------------------------------------------------------------------------
// Witness construction

fn construction(e: Error) -> Error {
    match e {
        Error::WitnessConstructionFailed(_) | Error::BudgetExhausted(_) => e,
        other => Error::WitnessConstructionFailed(other.to_string()),
    }
}

/// `y` with `x y = 1` modulo `J`.
fn inverse_mod(ring: &Ring, x: &Elem, j: &Ideal) -> Result<Elem> {
    let mut gens = vec![x.clone()];
    gens.extend(j.gens().iter().cloned());
    let c = ring
        .express(&ring.one(), &gens)?
        .ok_or_else(|| Error::WitnessConstructionFailed("element is not a unit modulo J".into()))?;
    Ok(c[0].clone())
}

fn op(i: usize, j: usize, t: Elem) -> ElementaryOp {
    ElementaryOp { i, j, t }
}

struct Builder<'a> {
    ring: &'a Ring,
    seed: u64,
    calls: u64,
}

impl Builder<'_> {
    fn next_seed(&mut self) -> u64 {
        self.calls += 1;
        self.seed.wrapping_add(self.calls.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn lambda_for(&mut self, b: &[Elem]) -> Result<Vec<Elem>> {
        let s = self.next_seed();
        mu_for(self.ring, &swap_last(b), s)
    }

    fn mu_for(&mut self, b: &[Elem]) -> Result<Vec<Elem>> {
        let s = self.next_seed();
        mu_for(self.ring, b, s)
    }

    /// An elementary action step unless the datum is zero.
    fn action(&self, sign: i8, from: EulerDatum, to: EulerDatum, ops: Vec<ElementaryOp>) -> Result<Vec<Step>> {
        if from.is_zero()? {
            return Ok(Vec::new());
        }
        let ops = ops.into_iter().filter(|o| !self.ring.is_zero(&o.t)).collect();
        Ok(vec![Step::ElementaryAction { sign, from, to, ops }])
    }

    /// `sign * (D(swap b, lambda) + D(b, mu)) -> 0`.
    fn lemma(&self, b: &[Elem], lambda: &[Elem], mu: &[Elem], sign: i8) -> Result<Vec<Step>> {
        let r = self.ring;
        let n = b.len() - 1;
        let (an, an1) = (&b[n - 1], &b[n]);
        let d1 = datum_for(r, &swap_last(b), lambda)?;
        let d2 = datum_for(r, b, mu)?;
        let (j1, j2) = (d1.ideal(), d2.ideal());
        for (name, j) in [("J1", &j1), ("J2", &j2)] {
            if !r.height(j)?.at_least(n) {
                return Err(Error::WitnessConstructionFailed(format!("{name} has height below {n}")));
            }
        }
        let bs: Vec<Elem> = (0..n - 1)
            .map(|k| r.add_mul(&r.add_mul(&b[k], &lambda[k], an), &mu[k], an1))
            .collect();
        let mut omega = bs.clone();
        omega.push(r.mul(an, an1));
        let d1p = EulerDatum::new(r, d1.gens().to_vec(), omega.clone())?;
        let d2p = EulerDatum::new(r, d2.gens().to_vec(), omega.clone())?;
        let merged = EulerDatum::new(r, omega.clone(), omega.clone())?;
        let (z1, z2) = (d1.is_zero()?, d2.is_zero()?);
        let mut steps = Vec::new();
        if !z1 {
            let u = inverse_mod(r, an, &j1)?;
            let ops = (1..n).map(|k| op(n, k, r.mul(&mu[k - 1], &u))).collect();
            steps.extend(self.action(sign, d1, d1p.clone(), ops)?);
        }
        if !z2 {
            let v = inverse_mod(r, an1, &j2)?;
            let ops = (1..n).map(|k| op(n, k, r.mul(&lambda[k - 1], &v))).collect();
            steps.extend(self.action(sign, d2, d2p.clone(), ops)?);
        }
        match (z1, z2) {
            (false, false) => {
                let cert = r.comaximal(&j1, &j2)?;
                steps.push(Step::DisconnectedSum {
                    sign,
                    split: false,
                    merged: merged.clone(),
                    parts: Box::new((d1p, d2p)),
                    cert,
                });
                steps.push(Step::CompleteIntersection {
                    sign,
                    datum: merged,
                    lift: omega,
                });
            }
            (true, false) => steps.push(Step::CompleteIntersection {
                sign,
                datum: d2p,
                lift: omega,
            }),
            (false, true) => steps.push(Step::CompleteIntersection {
                sign,
                datum: d1p,
                lift: omega,
            }),
            (true, true) => {}
        }
        Ok(steps)
    }

    /// `sign * D(b, mu) -> -sign * D(swap b, lambda)`.
    fn flip(&self, b: &[Elem], lambda: &[Elem], mu: &[Elem], sign: i8) -> Result<Vec<Step>> {
        let x = datum_for(self.ring, &swap_last(b), lambda)?;
        let mut steps = Vec::new();
        if !x.is_zero()? {
            steps.push(Step::InsertPair { datum: x });
        }
        steps.extend(self.lemma(b, lambda, mu, sign)?);
        Ok(steps)
    }

    /// `sign * D(b, mu1) -> sign * D(b, mu2)`.
    fn change_mu(&mut self, b: &[Elem], mu1: &[Elem], mu2: &[Elem], sign: i8) -> Result<Vec<Step>> {
        let r = self.ring;
        if datum_for(r, b, mu1)?.key()? == datum_for(r, b, mu2)?.key()? {
            return Ok(Vec::new());
        }
        let lambda = self.lambda_for(b)?;
        let mut steps = self.flip(b, &lambda, mu1, sign)?;
        steps.extend(self.flip(&swap_last(b), mu2, &lambda, -sign)?);
        Ok(steps)
    }

    /// `sign * D(b, mu) -> sign * D(b e, mu_end)`; returns the steps, the
    /// moved row and `mu_end`.
    fn transport(&mut self, b: &[Elem], e: &ElementaryOp, mu: &[Elem], sign: i8) -> Result<(Vec<Step>, Vec<Elem>, Vec<Elem>)> {
        let r = self.ring;
        let n = b.len() - 1;
        let (i, j, t) = (e.i, e.j, &e.t);
        let bp = apply_right_row(r, b, e)?;
        let from = datum_for(r, b, mu)?;
        if r.is_zero(t) {
            return Ok((Vec::new(), bp, mu.to_vec()));
        }
        if j < n && i < n {
            let mut star = mu.to_vec();
            star[j - 1] = r.add_mul(&mu[j - 1], t, &mu[i - 1]);
            let to = datum_for(r, &bp, &star)?;
            return Ok((self.action(sign, from, to, vec![e.clone()])?, bp, star));
        }
        if j < n && i == n {
            let to = datum_for(r, &bp, mu)?;
            let ops = if from.is_zero()? {
                Vec::new()
            } else {
                let v = inverse_mod(r, &b[n], &from.ideal())?;
                vec![op(n, j, r.mul(t, &v))]
            };
            return Ok((self.action(sign, from, to, ops)?, bp, mu.to_vec()));
        }
        if j < n && i == n + 1 {
            let mut star = mu.to_vec();
            star[j - 1] = r.sub(&mu[j - 1], t);
            return Ok((Vec::new(), bp, star));
        }
        if j == n + 1 && i == n {
            let to = datum_for(r, &bp, mu)?;
            let ops = if from.is_zero()? {
                Vec::new()
            } else {
                let v = inverse_mod(r, &b[n], &from.ideal())?;
                (1..n).map(|k| op(n, k, r.mul(&r.mul(&mu[k - 1], t), &v))).collect()
            };
            return Ok((self.action(sign, from, to, ops)?, bp, mu.to_vec()));
        }
        if j == n + 1 {
            return self.transport_into_last(b, i, t, mu, sign);
        }
        // j == n: mirror through the swapped row
        let lambda = self.lambda_for(b)?;
        let mut steps = self.flip(b, &lambda, mu, sign)?;
        let c = swap_last(b);
        let inner = op(if i == n + 1 { n } else { i }, n + 1, t.clone());
        let (more, cp, lambda_end) = self.transport(&c, &inner, &lambda, -sign)?;
        steps.extend(more);
        let bp_check = swap_last(&cp);
        if bp_check != bp {
            return Err(Error::InternalInvariantViolation("mirrored move lands elsewhere".into()));
        }
        let mu_hat = self.mu_for(&bp)?;
        steps.extend(self.flip(&cp, &mu_hat, &lambda_end, -sign)?);
        Ok((steps, bp, mu_hat))
    }

    /// The move `e_{i,n+1}(t)` with `i < n`.
    fn transport_into_last(&mut self, b: &[Elem], i: usize, t: &Elem, mu: &[Elem], sign: i8) -> Result<(Vec<Step>, Vec<Elem>, Vec<Elem>)> {
        let r = self.ring;
        let n = b.len() - 1;
        let lambda = self.lambda_for(b)?;
        let s = lambda[i - 1].clone();
        let mut steps = Vec::new();

        // clear the i-th shift: b~ = b e_{n,i}(s)
        let (st, bt, mu_t) = self.transport(b, &op(n, i, s.clone()), mu, sign)?;
        steps.extend(st);
        let mut lambda_t = lambda.clone();
        lambda_t[i - 1] = r.zero();

        // through the swapped datum, where the move is exact
        steps.extend(self.flip(&bt, &lambda_t, &mu_t, sign)?);
        let btp = apply_right_row(r, &bt, &op(i, n + 1, t.clone()))?;
        let from = datum_for(r, &swap_last(&bt), &lambda_t)?;
        let to = datum_for(r, &swap_last(&btp), &lambda_t)?;
        steps.extend(self.action(-sign, from, to, vec![op(i, n, r.mul(t, &b[n - 1]))])?);
        let mu_hat = self.mu_for(&btp)?;
        steps.extend(self.flip(&swap_last(&btp), &mu_hat, &lambda_t, -sign)?);

        // undo the auxiliary moves
        let (st, btpp, mu_hat) = self.transport(&btp, &op(n, n + 1, r.neg(&r.mul(t, &s))), &mu_hat, sign)?;
        steps.extend(st);
        let (st, bp, mu_hat) = self.transport(&btpp, &op(n, i, r.neg(&s)), &mu_hat, sign)?;
        steps.extend(st);
        if bp != apply_right_row(r, b, &op(i, n + 1, t.clone()))? {
            return Err(Error::InternalInvariantViolation("auxiliary moves do not cancel".into()));
        }
        Ok((steps, bp, mu_hat))
    }
}

fn finish(lhs: FormalSum, rhs: FormalSum, chain: Vec<Step>) -> Result<Certified> {
    let witness = RelationWitness { chain };
    let check = verify_witness(&witness, &lhs, &rhs);
    if !check.ok {
        return Err(Error::WitnessConstructionFailed(format!(
            "self-check failed at step {:?}: {}",
            check.failed_step,
            check.reason.unwrap_or_default()
        )));
    }
    Ok(Certified { lhs, rhs, witness })
}

/// A witness together with the identity it proves.
#[derive(Clone, Debug)]
pub struct Certified {
    pub lhs: FormalSum,
    pub rhs: FormalSum,
    pub witness: RelationWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifiedJson {
    pub lhs: SumJson,
    pub rhs: SumJson,
    pub witness: WitnessJson,
}

impl Certified {
    pub fn verify(&self) -> WitnessCheck {
        verify_witness(&self.witness, &self.lhs, &self.rhs)
    }

    pub fn to_json(&self, ring: &Ring) -> CertifiedJson {
        CertifiedJson {
            lhs: self.lhs.to_json(),
            rhs: self.rhs.to_json(),
            witness: self.witness.to_json(ring),
        }
    }

    pub fn from_json(ring: &Ring, j: &CertifiedJson) -> Result<Self> {
        Ok(Certified {
            lhs: FormalSum::from_json(ring, &j.lhs)?,
            rhs: FormalSum::from_json(ring, &j.rhs)?,
            witness: RelationWitness::from_json(ring, &j.witness)?,
        })
    }
}

/// `D(swap a, lambda) + D(a, mu) = 0`.
pub fn lemma_vanishing_witness(a: &UmRow, lambda: &[Elem], mu: &[Elem]) -> Result<Certified> {
    let ring = a.ring();
    let b = a.entries();
    let mut lhs = FormalSum::zero();
    lhs.push(1, datum_for(ring, &swap_last(b), lambda).map_err(construction)?)?;
    lhs.push(1, datum_for(ring, b, mu).map_err(construction)?)?;
    let builder = Builder { ring, seed: 0, calls: 0 };
    let chain = builder.lemma(b, lambda, mu, 1).map_err(construction)?;
    finish(lhs, FormalSum::zero(), chain)
}

/// `phi(a) + phi(a with the last two entries swapped) = 0`, each side
/// evaluated by [`phi_generic`].
pub fn antisymmetry_witness(a: &UmRow, seed: u64) -> Result<Certified> {
    let ring = a.ring();
    let swapped = UmRow::new(ring, swap_last(a.entries()))?;
    let pa = phi_generic(a, seed)?;
    let ps = phi_generic(&swapped, seed)?;
    let builder = Builder { ring, seed, calls: 0 };
    let chain = builder.lemma(a.entries(), &ps.mu, &pa.mu, 1).map_err(construction)?;
    finish(pa.value.plus(&ps.value), FormalSum::zero(), chain)
}

/// `D(a, mu1) = D(a, mu2)` for two valid choices of shifts.
pub fn mu_independence_witness(a: &UmRow, mu1: &[Elem], mu2: &[Elem], seed: u64) -> Result<Certified> {
    let ring = a.ring();
    let b = a.entries();
    let d1 = datum_for(ring, b, mu1)?;
    let d2 = datum_for(ring, b, mu2)?;
    let mut builder = Builder { ring, seed, calls: 0 };
    let mut chain = builder.change_mu(b, mu1, mu2, 1).map_err(construction)?;
    if !d2.is_zero()? {
        chain.push(Step::LiteralCancel { datum: d2.clone() });
    }
    finish(FormalSum::single(d1)?, FormalSum::single(d2)?, chain)
}

/// Witness that `phi_generic(a) = phi_generic(a * op)`.
#[derive(Clone, Debug)]
pub struct PhiStep {
    pub before: PhiValue,
    pub after: PhiValue,
    pub certified: Certified,
}

pub fn check_phi_step(a: &UmRow, e: &ElementaryOp, seed: u64) -> Result<PhiStep> {
    let ring = a.ring();
    let ap = crate::umrow::act(a, e)?;
    if !is_generic(a)? {
        return Err(Error::NotApplicable("start row is not generic".into()));
    }
    if !is_generic(&ap)? {
        return Err(Error::NotApplicable("end row is not generic".into()));
    }
    let before = phi_generic(a, seed)?;
    let after = phi_generic(&ap, seed)?;
    let mut builder = Builder { ring, seed, calls: 0 };
    let (mut chain, bp, mu_end) = builder.transport(a.entries(), e, &before.mu, 1).map_err(construction)?;
    chain.extend(builder.change_mu(&bp, &mu_end, &after.mu, 1).map_err(construction)?);
    let target = datum_for(ring, &bp, &after.mu)?;
    if !target.is_zero()? {
        chain.push(Step::LiteralCancel { datum: target });
    }
    let certified = finish(before.value.clone(), after.value.clone(), chain)?;
    Ok(PhiStep {
        before,
        after,
        certified,
    })
}

/// Witness for `phi_0(a) + phi_0(b) = phi_0(a_1 b_1, a_2, ..)` on a
/// normalized pair, after shifting by multiples of `a_{n+1}` when needed.
#[derive(Clone, Debug)]
pub struct HomCheck {
    pub a: UmRow,
    pub b: UmRow,
    pub product: UmRow,
    pub certified: Certified,
}

pub fn hom_check(a: &UmRow, b: &UmRow, seed: u64) -> Result<HomCheck> {
    if !is_normalized(a, b) {
        return Err(Error::Invalid("rows are not a normalized pair".into()));
    }
    let ring = a.ring();
    let n = a.n();
    let last = a.at(n + 1).clone();
    let mut stream = rng::stream(seed, "hom-check");
    let mut adjusted = None;
    for attempt in 0..AVOIDANCE_BUDGET {
        let shifts: Vec<Elem> = if attempt == 0 {
            vec![ring.zero(); n - 1]
        } else {
            (0..n - 1)
                .map(|_| ring.sample_constant(&mut stream, 1 + attempt / 8))
                .collect()
        };
        let mut ae = a.entries().to_vec();
        let mut be = b.entries().to_vec();
        ae[0] = ring.add_mul(&ae[0], &shifts[0], &last);
        be[0] = ring.sub(&be[0], &ring.mul(&shifts[0], &last));
        for k in 1..n - 1 {
            ae[k] = ring.add_mul(&ae[k], &shifts[k], &last);
            be[k] = ae[k].clone();
        }
        let zero = vec![ring.zero(); n - 1];
        if shifts_valid(ring, &ae, &zero)? && shifts_valid(ring, &be, &zero)? {
            adjusted = Some((UmRow::new(ring, ae)?, UmRow::new(ring, be)?));
            break;
        }
    }
    let (a2, b2) = adjusted.ok_or_else(|| {
        Error::HeightPreconditionFailed("no shift by a_{n+1} gives phi_0 on both rows".into())
    })?;
    let product = group_law(&NormalizedPair::new(a2.clone(), b2.clone())?)?;
    let zero = vec![ring.zero(); n - 1];
    let da = datum_for(ring, a2.entries(), &zero)?;
    let db = datum_for(ring, b2.entries(), &zero)?;
    let dc = datum_for(ring, product.entries(), &zero)?;
    let mut lhs = FormalSum::zero();
    lhs.push(1, da.clone())?;
    lhs.push(1, db.clone())?;
    let rhs = FormalSum::single(dc.clone())?;
    let mut chain = Vec::new();
    match (da.is_zero()?, db.is_zero()?) {
        (false, false) => {
            let cert = ring.comaximal(&da.ideal(), &db.ideal()).map_err(construction)?;
            chain.push(Step::DisconnectedSum {
                sign: 1,
                split: false,
                merged: dc.clone(),
                parts: Box::new((da, db)),
                cert,
            });
            chain.push(Step::LiteralCancel { datum: dc });
        }
        (false, true) => chain.push(Step::LiteralCancel { datum: da }),
        (true, false) => chain.push(Step::LiteralCancel { datum: db }),
        (true, true) => {}
    }
    let certified = finish(lhs, rhs, chain)?;
    Ok(HomCheck {
        a: a2,
        b: b2,
        product,
        certified,
    })
}
