//! Exact commutative rings described at run time.
//!
//! Every ring is a polynomial ring (possibly in zero variables) over a
//! coefficient domain, modulo a fixed reduced Groebner basis of relations.
//! Elements are kept in normal form, so two elements are equal exactly when
//! their representations are identical.

pub mod coeff;
pub mod groebner;
mod ideal;
mod parse;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use coeff::{is_prime, Coeff, CoeffField};
use parse::ParseTarget;
use poly::{Monomial, Poly};

pub use ideal::{ComaximalCert, Height, Ideal, IdealKey};

/// JSON form of a ring.
///
/// ```json
/// {"kind": "quotient",
///  "base": {"kind": "polynomial-ring", "base": {"kind": "prime-field", "modulus": 2}, "vars": ["x"]},
///  "relations": ["x^2"], "krull_dim": 0, "minimal_primes": [["x"]]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDescriptor {
    pub kind: RingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<RingDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krull_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_primes: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinite: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingKind {
    Rationals,
    PrimeField,
    RationalFunctionField,
    IntegersMod,
    PolynomialRing,
    Quotient,
}

impl RingDescriptor {
    fn bare(kind: RingKind) -> Self {
        RingDescriptor {
            kind,
            modulus: None,
            base: None,
            var: None,
            vars: None,
            relations: None,
            krull_dim: None,
            minimal_primes: None,
            infinite: None,
        }
    }

    pub fn rationals() -> Self {
        Self::bare(RingKind::Rationals)
    }

    pub fn prime_field(p: u64) -> Self {
        RingDescriptor {
            modulus: Some(p),
            ..Self::bare(RingKind::PrimeField)
        }
    }

    pub fn integers_mod(n: u64) -> Self {
        RingDescriptor {
            modulus: Some(n),
            ..Self::bare(RingKind::IntegersMod)
        }
    }

    pub fn rational_function_field(base: RingDescriptor, var: &str) -> Self {
        RingDescriptor {
            base: Some(Box::new(base)),
            var: Some(var.to_string()),
            ..Self::bare(RingKind::RationalFunctionField)
        }
    }

    pub fn polynomial(base: RingDescriptor, vars: &[&str]) -> Self {
        RingDescriptor {
            base: Some(Box::new(base)),
            vars: Some(vars.iter().map(|v| v.to_string()).collect()),
            ..Self::bare(RingKind::PolynomialRing)
        }
    }

    pub fn quotient(
        poly_ring: RingDescriptor,
        relations: &[&str],
        krull_dim: Option<usize>,
        minimal_primes: Option<Vec<Vec<&str>>>,
    ) -> Self {
        RingDescriptor {
            base: Some(Box::new(poly_ring)),
            relations: Some(relations.iter().map(|r| r.to_string()).collect()),
            krull_dim,
            minimal_primes: minimal_primes
                .map(|ps| ps.into_iter().map(|p| p.into_iter().map(String::from).collect()).collect()),
            ..Self::bare(RingKind::Quotient)
        }
    }
}

/// A ring element in canonical form. Arithmetic goes through [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem(pub(crate) Poly);

impl Elem {
    pub fn poly(&self) -> &Poly {
        &self.0
    }
}

#[derive(Debug)]
struct RingData {
    descriptor: RingDescriptor,
    coeffs: CoeffField,
    vars: Vec<String>,
    /// Reduced Groebner basis of the relation ideal (empty unless quotient).
    relations: Vec<Poly>,
    krull_dim: Option<usize>,
    minimal_primes: Option<Vec<Vec<Elem>>>,
    is_quotient: bool,
}

/// Shared handle to an immutable ring.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({:?})", self.0.descriptor.kind)
    }
}

impl PartialEq for Ring {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.descriptor == o.0.descriptor
    }
}

fn coeff_field_of(d: &RingDescriptor) -> Result<CoeffField> {
    match d.kind {
        RingKind::Rationals => Ok(CoeffField::Rationals),
        RingKind::PrimeField => {
            let p = d.modulus.ok_or_else(|| Error::Invalid("prime-field needs \"modulus\"".into()))?;
            if !is_prime(p) {
                return Err(Error::Invalid(format!("{p} is not prime")));
            }
            Ok(CoeffField::Prime(p))
        }
        RingKind::RationalFunctionField => {
            let base = d
                .base
                .as_ref()
                .ok_or_else(|| Error::Invalid("rational-function-field needs \"base\"".into()))?;
            let var = d
                .var
                .clone()
                .ok_or_else(|| Error::Invalid("rational-function-field needs \"var\"".into()))?;
            let base = coeff_field_of(base)?;
            if !matches!(base, CoeffField::Rationals | CoeffField::Prime(_)) {
                return Err(Error::Invalid(
                    "rational function fields are built over the rationals or a prime field".into(),
                ));
            }
            Ok(CoeffField::RationalFunctions {
                base: Box::new(base),
                var,
            })
        }
        _ => Err(Error::Invalid(format!("{:?} is not a coefficient field", d.kind))),
    }
}

fn check_ident(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("bad variable name {name:?}")))
    }
}

impl Ring {
    pub fn from_descriptor(d: &RingDescriptor) -> Result<Ring> {
        let (coeffs, vars, rel_src, is_quotient) = match d.kind {
            RingKind::Rationals | RingKind::PrimeField | RingKind::RationalFunctionField => {
                (coeff_field_of(d)?, Vec::new(), Vec::new(), false)
            }
            RingKind::IntegersMod => {
                let n = d.modulus.ok_or_else(|| Error::Invalid("integers-mod needs \"modulus\"".into()))?;
                if n < 2 {
                    return Err(Error::Invalid("integers-mod needs modulus >= 2".into()));
                }
                if n > u32::MAX as u64 {
                    return Err(Error::Invalid("modulus too large".into()));
                }
                (CoeffField::IntegersMod(n), Vec::new(), Vec::new(), false)
            }
            RingKind::PolynomialRing => {
                let base = d.base.as_ref().ok_or_else(|| Error::Invalid("polynomial-ring needs \"base\"".into()))?;
                let vars = d.vars.clone().ok_or_else(|| Error::Invalid("polynomial-ring needs \"vars\"".into()))?;
                (coeff_field_of(base)?, vars, Vec::new(), false)
            }
            RingKind::Quotient => {
                let base = d.base.as_ref().ok_or_else(|| Error::Invalid("quotient needs \"base\"".into()))?;
                if base.kind != RingKind::PolynomialRing {
                    return Err(Error::Invalid("quotient base must be a polynomial-ring".into()));
                }
                let inner = base.base.as_ref().ok_or_else(|| Error::Invalid("polynomial-ring needs \"base\"".into()))?;
                let vars = base.vars.clone().ok_or_else(|| Error::Invalid("polynomial-ring needs \"vars\"".into()))?;
                let rels = d.relations.clone().unwrap_or_default();
                (coeff_field_of(inner)?, vars, rels, true)
            }
        };
        for v in &vars {
            check_ident(v)?;
            if coeffs.generator_name() == Some(v.as_str()) {
                return Err(Error::Invalid(format!("variable {v:?} clashes with the coefficient generator")));
            }
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v:?}")));
            }
        }
        if vars.len() > 40 {
            return Err(Error::Invalid("too many variables".into()));
        }
        // ambient polynomial ring first, to parse relations
        let ambient = Ring(Arc::new(RingData {
            descriptor: d.clone(),
            coeffs: coeffs.clone(),
            vars: vars.clone(),
            relations: Vec::new(),
            krull_dim: None,
            minimal_primes: None,
            is_quotient: false,
        }));
        let rel_polys = rel_src
            .iter()
            .map(|s| ambient.parse(s).map(|e| e.0))
            .collect::<Result<Vec<_>>>()?;
        let relations = if rel_polys.is_empty() {
            Vec::new()
        } else {
            groebner::groebner(&rel_polys, &coeffs, vars.len())
        };
        if relations.iter().any(|g| g.is_constant()) {
            return Err(Error::Invalid("relations generate the unit ideal".into()));
        }

        let natural_dim = if is_quotient {
            let lms: Vec<Monomial> = relations.iter().map(|g| g.lm().clone()).collect();
            groebner::staircase_dimension(&lms, vars.len())
        } else {
            Some(vars.len())
        };
        let krull_dim = match (d.krull_dim, is_quotient) {
            (Some(k), _) if Some(k) != natural_dim => {
                return Err(Error::Invalid(format!(
                    "declared krull_dim {k} disagrees with the ring (dimension {natural_dim:?})"
                )))
            }
            (Some(k), _) => Some(k),
            (None, true) => None,
            (None, false) => natural_dim,
        };
        if let Some(inf) = d.infinite {
            if inf != coeffs.is_infinite() {
                return Err(Error::Invalid("declared \"infinite\" flag disagrees with the ring".into()));
            }
        }

        let mut ring = Ring(Arc::new(RingData {
            descriptor: d.clone(),
            coeffs,
            vars,
            relations,
            krull_dim,
            minimal_primes: None,
            is_quotient,
        }));
        if let Some(primes) = &d.minimal_primes {
            let mut parsed = Vec::new();
            for p in primes {
                let gens = p.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
                // the prime, lifted to the ambient ring, must contain the relations
                let lifted: Vec<Poly> = p
                    .iter()
                    .map(|s| ambient.parse(s).map(|e| e.0))
                    .collect::<Result<_>>()?;
                let gb = groebner::groebner(&lifted, &ring.0.coeffs, ring.nvars());
                if gb.iter().any(|g| g.is_constant()) {
                    return Err(Error::Invalid("declared minimal prime is the unit ideal".into()));
                }
                for r in &rel_polys {
                    if !groebner::normal_form(r, &gb, &ring.0.coeffs).is_zero() {
                        return Err(Error::Invalid(format!(
                            "declared minimal prime {p:?} does not contain the relation ideal"
                        )));
                    }
                }
                parsed.push(gens);
            }
            let data = Arc::get_mut(&mut ring.0).expect("unique");
            data.minimal_primes = Some(parsed);
        }
        Ok(ring)
    }

    pub fn rationals() -> Ring {
        Ring::from_descriptor(&RingDescriptor::rationals()).expect("valid")
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        Ring::from_descriptor(&RingDescriptor::prime_field(p))
    }

    pub fn integers_mod(n: u64) -> Result<Ring> {
        Ring::from_descriptor(&RingDescriptor::integers_mod(n))
    }

    /// Polynomial ring over the rationals in the given variables.
    pub fn rational_polynomials(vars: &[&str]) -> Result<Ring> {
        Ring::from_descriptor(&RingDescriptor::polynomial(RingDescriptor::rationals(), vars))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.descriptor
    }

    pub fn coeffs(&self) -> &CoeffField {
        &self.0.coeffs
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn krull_dim(&self) -> Option<usize> {
        self.0.krull_dim
    }

    pub fn is_quotient(&self) -> bool {
        self.0.is_quotient
    }

    /// Reduced Groebner basis of the relation ideal.
    pub fn relations(&self) -> &[Poly] {
        &self.0.relations
    }

    pub fn declared_minimal_primes(&self) -> Option<&[Vec<Elem>]> {
        self.0.minimal_primes.as_deref()
    }

    /// Whether the ring contains an infinite field (its coefficient field).
    pub fn contains_infinite_field(&self) -> bool {
        self.0.coeffs.is_infinite()
    }

    /// Descriptor of the coefficient field (or `Z/n`) as a ring on its own.
    pub fn coefficient_descriptor(&self) -> RingDescriptor {
        fn of(c: &CoeffField) -> RingDescriptor {
            match c {
                CoeffField::Rationals => RingDescriptor::rationals(),
                CoeffField::Prime(p) => RingDescriptor::prime_field(*p),
                CoeffField::IntegersMod(n) => RingDescriptor::integers_mod(*n),
                CoeffField::RationalFunctions { base, var } => RingDescriptor::rational_function_field(of(base), var),
            }
        }
        of(&self.0.coeffs)
    }

    /// Polynomial ring in `vars` over the coefficient field of `self`.
    pub fn polynomials_over_coefficients(&self, vars: &[&str]) -> Result<Ring> {
        Ring::from_descriptor(&RingDescriptor::polynomial(self.coefficient_descriptor(), vars))
    }

    /// A field: no variables and field coefficients.
    pub fn is_field(&self) -> bool {
        self.nvars() == 0 && self.0.coeffs.is_field()
    }

    /// Rings whose ideal arithmetic runs through Groebner bases.
    pub(crate) fn gb_capable(&self) -> bool {
        self.0.coeffs.is_field()
    }

    pub fn is_domain(&self) -> bool {
        self.0.coeffs.is_field() && !self.0.is_quotient
    }

    pub(crate) fn normalize(&self, p: Poly) -> Elem {
        if self.0.relations.is_empty() {
            Elem(p)
        } else {
            Elem(groebner::normal_form(&p, &self.0.relations, &self.0.coeffs))
        }
    }

    pub fn zero(&self) -> Elem {
        Elem(Poly::zero())
    }

    pub fn one(&self) -> Elem {
        self.constant(self.0.coeffs.one())
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.constant(self.0.coeffs.from_i64(v))
    }

    pub fn constant(&self, c: Coeff) -> Elem {
        self.normalize(Poly::constant(&self.0.coeffs, c, self.nvars()))
    }

    pub fn var(&self, name: &str) -> Option<Elem> {
        let i = self.0.vars.iter().position(|v| v == name)?;
        Some(self.normalize(Poly::monomial(
            &self.0.coeffs,
            Monomial::var(self.nvars(), i),
            self.0.coeffs.one(),
        )))
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.add(&b.0, &self.0.coeffs))
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.sub(&b.0, &self.0.coeffs))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(a.0.neg(&self.0.coeffs))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.normalize(a.0.mul(&b.0, &self.0.coeffs))
    }

    /// `a + b * c`
    pub fn add_mul(&self, a: &Elem, b: &Elem, c: &Elem) -> Elem {
        self.add(a, &self.mul(b, c))
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn sum<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Elem {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Dot product of two equally long vectors.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(self.zero(), |acc, (x, y)| self.add(&acc, &self.mul(x, y)))
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.0.is_zero()
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    /// Whether the element lies in the coefficient field (a constant).
    pub fn is_constant(&self, a: &Elem) -> bool {
        a.0.is_constant()
    }

    pub fn as_constant(&self, a: &Elem) -> Option<Coeff> {
        a.0.as_constant(&self.0.coeffs)
    }

    /// Multiplicative inverse, when the element is a unit.
    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        if let Some(c) = self.as_constant(a) {
            if let Some(inv) = self.0.coeffs.inv(&c) {
                return Some(self.constant(inv));
            }
            if !self.0.is_quotient {
                return None;
            }
        }
        if !self.0.is_quotient {
            return None;
        }
        self.solve_unimodular(std::slice::from_ref(a))
            .ok()
            .map(|mut v| v.remove(0))
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.inverse(a).is_some()
    }

    /// A random constant drawn from a box that grows with `magnitude`.
    pub fn sample_constant<R: Rng + ?Sized>(&self, rng: &mut R, magnitude: u64) -> Elem {
        self.constant(self.0.coeffs.sample(rng, magnitude))
    }

    /// Parse an element from its textual form.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        parse::parse_with(self, s)
    }

    pub fn parse_all<S: AsRef<str>>(&self, items: &[S]) -> Result<Vec<Elem>> {
        items.iter().map(|s| self.parse(s.as_ref())).collect()
    }

    /// Canonical string form, e.g. `3*x^2*y - 1/2`.
    pub fn format(&self, a: &Elem) -> String {
        let k = &self.0.coeffs;
        if a.0.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in a.0.terms() {
            let neg = k.is_negative(c);
            let abs = if neg { k.neg(c) } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                out.push_str(&k.format(&abs));
            } else if k.is_one(&abs) {
                out.push_str(&mono);
            } else if k.is_compound(&abs) {
                out.push_str(&format!("({})*{}", k.format(&abs), mono));
            } else {
                out.push_str(&format!("{}*{}", k.format(&abs), mono));
            }
        }
        out
    }

    pub fn format_all(&self, v: &[Elem]) -> Vec<String> {
        v.iter().map(|e| self.format(e)).collect()
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.0.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.0.vars[i], e)),
            }
        }
        parts.join("*")
    }

    /// All elements of a finite ring in a fixed order, or `None` if the ring is infinite.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        let coeffs = self.0.coeffs.elements()?;
        if self.nvars() == 0 {
            return Some(coeffs.into_iter().map(|c| self.constant(c)).collect());
        }
        if !self.0.is_quotient {
            return None;
        }
        let lms: Vec<Monomial> = self.0.relations.iter().map(|g| g.lm().clone()).collect();
        let std = groebner::standard_monomials(&lms, self.nvars())?;
        let q = coeffs.len();
        let total = (q as u128).checked_pow(std.len() as u32)?;
        if total > 1 << 24 {
            return None;
        }
        let mut out = Vec::with_capacity(total as usize);
        for mut idx in 0..total as usize {
            let mut terms = Vec::new();
            for m in std.iter().rev() {
                let c = &coeffs[idx % q];
                idx /= q;
                if !self.0.coeffs.is_zero(c) {
                    terms.push((m.clone(), c.clone()));
                }
            }
            terms.sort_by(|a, b| b.0.cmp(&a.0));
            out.push(Elem(Poly { terms }));
        }
        Some(out)
    }

    /// Evaluate a polynomial with coefficients in this ring's coefficient field
    /// at the given elements of `self`.
    pub fn eval_poly(&self, p: &Poly, values: &[Elem]) -> Elem {
        p.eval_with(
            values,
            self.zero(),
            |c| self.constant(c.clone()),
            |a, b| self.add(a, b),
            |a, b| self.mul(a, b),
        )
    }
}

impl ParseTarget for Ring {
    type Value = Elem;

    fn integer(&self, v: &BigInt) -> Elem {
        self.constant(self.0.coeffs.from_bigint(v))
    }

    fn ident(&self, name: &str) -> Option<Elem> {
        if let Some(v) = self.var(name) {
            return Some(v);
        }
        if self.0.coeffs.generator_name() == Some(name) {
            return self.0.coeffs.generator().map(|g| self.constant(g));
        }
        None
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Ring::add(self, a, b)
    }

    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        Ring::sub(self, a, b)
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Ring::mul(self, a, b)
    }

    fn neg(&self, a: &Elem) -> Elem {
        Ring::neg(self, a)
    }

    fn div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        self.inverse(b).map(|inv| Ring::mul(self, a, &inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxyz() -> Ring {
        Ring::rational_polynomials(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let r = qxyz();
        let e = r.parse("3*x^2*y - 1/2").unwrap();
        assert_eq!(r.format(&e), "3*x^2*y - 1/2");
        let f = r.parse("(x + y)*(x - y)").unwrap();
        assert_eq!(r.format(&f), "x^2 - y^2");
        assert!(r.parse("x + w").is_err());
        assert!(r.parse("1/x").is_err());
    }

    #[test]
    fn integers_mod_display() {
        let r = Ring::integers_mod(30).unwrap();
        assert_eq!(r.format(&r.parse("-1").unwrap()), "29");
        assert_eq!(r.format(&r.parse("7*13").unwrap()), "1");
        assert_eq!(r.inverse(&r.from_i64(7)), Some(r.from_i64(13)));
        assert_eq!(r.inverse(&r.from_i64(6)), None);
    }

    #[test]
    fn function_field_coefficients() {
        let d = RingDescriptor::polynomial(
            RingDescriptor::rational_function_field(RingDescriptor::prime_field(5), "t"),
            &["x"],
        );
        let r = Ring::from_descriptor(&d).unwrap();
        let e = r.parse("(t + 1)*x + 1/t").unwrap();
        assert_eq!(r.format(&e), "(t + 1)*x + 1/(t)");
        assert_eq!(r.parse(&r.format(&e)).unwrap(), e);
        assert!(r.contains_infinite_field());
    }

    #[test]
    fn quotient_ring_elements() {
        let d = RingDescriptor::quotient(
            RingDescriptor::polynomial(RingDescriptor::prime_field(2), &["x"]),
            &["x^2"],
            Some(0),
            Some(vec![vec!["x"]]),
        );
        let r = Ring::from_descriptor(&d).unwrap();
        let els = r.elements().unwrap();
        assert_eq!(els.len(), 4);
        let x = r.var("x").unwrap();
        assert!(r.is_zero(&r.mul(&x, &x)));
        let u = r.parse("1 + x").unwrap();
        assert_eq!(r.inverse(&u), Some(u.clone()));
        assert_eq!(r.inverse(&x), None);
    }

    #[test]
    fn descriptor_validation() {
        let bad = RingDescriptor::quotient(
            RingDescriptor::polynomial(RingDescriptor::prime_field(2), &["x"]),
            &["x^2"],
            Some(0),
            Some(vec![vec!["x + 1"]]),
        );
        assert!(Ring::from_descriptor(&bad).is_err());
        assert!(Ring::prime_field(6).is_err());
        let json = r#"{"kind":"polynomial-ring","base":{"kind":"rationals"},"vars":["x"],"krull_dim":2}"#;
        let d: RingDescriptor = serde_json::from_str(json).unwrap();
        assert!(Ring::from_descriptor(&d).is_err());
    }
}
