//! Ideal membership, unimodular certificates, heights and minimal-prime avoidance.

use serde::Serialize;

use super::coeff::{ext_gcd_i128, prime_factors, Coeff};
use super::groebner;
use super::poly::{Monomial, Poly};
use super::{Elem, Ring, RingKind};
use crate::error::{Error, Result};

/// A finitely generated ideal. An empty generator list is stored as `(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    gens: Vec<Elem>,
}

impl Ideal {
    pub fn new(gens: Vec<Elem>) -> Self {
        if gens.is_empty() {
            Ideal {
                gens: vec![Elem(Poly::zero())],
            }
        } else {
            Ideal { gens }
        }
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    /// Generators with zeros pruned.
    pub fn nonzero_gens(&self) -> Vec<Elem> {
        self.gens.iter().filter(|g| !g.0.is_zero()).cloned().collect()
    }
}

/// Height of an ideal; the unit ideal is kept apart from the numeric case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Height {
    Finite(usize),
    UnitIdeal,
}

impl Height {
    /// `height >= m` or unit.
    pub fn at_least(&self, m: usize) -> bool {
        match self {
            Height::UnitIdeal => true,
            Height::Finite(h) => *h >= m,
        }
    }
}

/// `k + l = 1` with `k` in the first ideal and `l` in the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComaximalCert {
    pub k: Elem,
    pub l: Elem,
}

/// Canonical form of an ideal, comparable for equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IdealKey {
    Gcd(u64),
    Basis(Vec<Poly>),
}

impl Ring {
    fn zmod_n(&self) -> Option<u64> {
        match self.coeffs() {
            super::coeff::CoeffField::IntegersMod(n) if !self.gb_capable() => Some(*n),
            _ => None,
        }
    }

    fn residue(e: &Elem) -> u64 {
        match e.0.terms().first() {
            None => 0,
            Some((_, Coeff::Res(v))) => *v,
            _ => unreachable!("integers-mod elements are residues"),
        }
    }

    /// Groebner basis of `gens + relations` in the ambient polynomial ring.
    pub(crate) fn ambient_gb(&self, gens: &[Elem]) -> Vec<Poly> {
        let mut all: Vec<Poly> = gens.iter().map(|g| g.0.clone()).collect();
        all.extend(self.relations().iter().cloned());
        groebner::groebner(&all, self.coeffs(), self.nvars())
    }

    /// `(g, x)` with `g = gcd(gens, n)` and `sum x_i gens_i = g (mod n)`.
    fn zmod_bezout(&self, n: u64, gens: &[Elem]) -> (u64, Vec<i128>) {
        let mut g = n as i128;
        let mut coef = vec![0i128; gens.len()];
        for (i, a) in gens.iter().enumerate() {
            let a = Self::residue(a) as i128;
            let (g2, s, t) = ext_gcd_i128(g, a);
            for c in coef.iter_mut() {
                *c = (*c * s).rem_euclid(n as i128);
            }
            coef[i] = (coef[i] + t).rem_euclid(n as i128);
            g = g2;
        }
        (g as u64, coef)
    }

    /// Cofactors `c` with `sum c_i gens_i = f`, or `None` if `f` is not in the ideal.
    pub fn express(&self, f: &Elem, gens: &[Elem]) -> Result<Option<Vec<Elem>>> {
        if let Some(n) = self.zmod_n() {
            let (g, coef) = self.zmod_bezout(n, gens);
            let fv = Self::residue(f);
            if fv % g != 0 {
                return Ok(None);
            }
            let q = (fv / g) as i128;
            return Ok(Some(
                coef.iter()
                    .map(|c| self.constant(Coeff::Res(((c * q).rem_euclid(n as i128)) as u64)))
                    .collect(),
            ));
        }
        if !self.gb_capable() {
            return Err(Error::UnsupportedRing("no membership solver for this ring".into()));
        }
        if f.0.is_zero() {
            return Ok(Some(vec![self.zero(); gens.len()]));
        }
        let mut all: Vec<Poly> = gens.iter().map(|g| g.0.clone()).collect();
        all.extend(self.relations().iter().cloned());
        let k = self.coeffs();
        let nv = self.nvars();
        let cof = if f.0.is_constant() {
            let basis = groebner::tracked_groebner(&all, k, nv, true);
            match basis.first() {
                Some(t) if basis.len() == 1 && t.poly.is_constant() => {
                    // t.poly is 1; scale by f
                    let c = f.0.as_constant(k).expect("constant");
                    t.cofactors
                        .iter()
                        .map(|p| p.mul_term(&Monomial::one(nv), &c, k))
                        .collect::<Vec<_>>()
                }
                _ => return Ok(None),
            }
        } else {
            let basis = groebner::tracked_groebner(&all, k, nv, false);
            let (cof, rem) = groebner::tracked_divide(&f.0, &basis, all.len(), k);
            if !rem.is_zero() {
                return Ok(None);
            }
            cof
        };
        let out: Vec<Elem> = cof.into_iter().take(gens.len()).map(|p| self.normalize(p)).collect();
        debug_assert_eq!(self.dot(&out, gens), *f);
        Ok(Some(out))
    }

    /// Coefficients `x` with `sum a_i x_i = 1`.
    pub fn solve_unimodular(&self, row: &[Elem]) -> Result<Vec<Elem>> {
        if self.is_field() {
            // any invertible entry
            return match row.iter().position(|a| !a.0.is_zero()) {
                Some(i) => {
                    let inv = self
                        .coeffs()
                        .inv(&self.as_constant(&row[i]).expect("field element"))
                        .expect("nonzero field element");
                    let mut x = vec![self.zero(); row.len()];
                    x[i] = self.constant(inv);
                    Ok(x)
                }
                None => Err(Error::NotUnimodular),
            };
        }
        self.express(&self.one(), row)?.ok_or(Error::NotUnimodular)
    }

    pub fn ideal_membership(&self, f: &Elem, ideal: &Ideal) -> Result<bool> {
        if let Some(n) = self.zmod_n() {
            let (g, _) = self.zmod_bezout(n, ideal.gens());
            return Ok(Self::residue(f) % g == 0);
        }
        if !self.gb_capable() {
            return Err(Error::UnsupportedRing("no membership test for this ring".into()));
        }
        let gb = self.ambient_gb(ideal.gens());
        Ok(groebner::normal_form(&f.0, &gb, self.coeffs()).is_zero())
    }

    /// Membership of many elements against one ideal, sharing the basis.
    pub fn all_in(&self, fs: &[Elem], ideal: &Ideal) -> Result<bool> {
        if self.zmod_n().is_some() {
            for f in fs {
                if !self.ideal_membership(f, ideal)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        if !self.gb_capable() {
            return Err(Error::UnsupportedRing("no membership test for this ring".into()));
        }
        let gb = self.ambient_gb(ideal.gens());
        Ok(fs
            .iter()
            .all(|f| groebner::normal_form(&f.0, &gb, self.coeffs()).is_zero()))
    }

    /// Canonical representatives of `fs` modulo `ideal`: equal outputs iff
    /// congruent inputs.
    pub fn reduce_modulo(&self, fs: &[Elem], ideal: &Ideal) -> Result<Vec<Elem>> {
        if let Some(n) = self.zmod_n() {
            let (g, _) = self.zmod_bezout(n, ideal.gens());
            return Ok(fs
                .iter()
                .map(|f| self.constant(Coeff::Res(Self::residue(f) % g)))
                .collect());
        }
        if !self.gb_capable() {
            return Err(Error::UnsupportedRing("no normal forms for this ring".into()));
        }
        let gb = self.ambient_gb(ideal.gens());
        Ok(fs
            .iter()
            .map(|f| self.normalize(groebner::normal_form(&f.0, &gb, self.coeffs())))
            .collect())
    }

    /// Reduced Groebner basis (graded reverse lexicographic order).
    pub fn groebner_basis(&self, ideal: &Ideal) -> Result<Ideal> {
        let kind = self.descriptor().kind;
        if !matches!(kind, RingKind::PolynomialRing | RingKind::Quotient) {
            return Err(Error::UnsupportedRing(format!("{kind:?} has no Groebner bases")));
        }
        let gb = self.ambient_gb(ideal.gens());
        let gens: Vec<Elem> = gb
            .into_iter()
            .map(|g| self.normalize(g))
            .filter(|g| !g.0.is_zero())
            .collect();
        Ok(Ideal::new(gens))
    }

    /// Canonical key: equal keys iff equal ideals.
    pub fn ideal_key(&self, ideal: &Ideal) -> Result<IdealKey> {
        if let Some(n) = self.zmod_n() {
            return Ok(IdealKey::Gcd(self.zmod_bezout(n, ideal.gens()).0));
        }
        if !self.gb_capable() {
            return Err(Error::UnsupportedRing("no canonical ideal form".into()));
        }
        Ok(IdealKey::Basis(self.ambient_gb(ideal.gens())))
    }

    pub fn ideal_eq(&self, a: &Ideal, b: &Ideal) -> Result<bool> {
        Ok(self.ideal_key(a)? == self.ideal_key(b)?)
    }

    pub fn ideal_product(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for x in a.gens() {
            for y in b.gens() {
                gens.push(self.mul(x, y));
            }
        }
        Ideal::new(gens)
    }

    pub fn is_unit_ideal(&self, ideal: &Ideal) -> Result<bool> {
        self.ideal_membership(&self.one(), ideal)
    }

    /// `declared_krull_dim - dim(R/I)`, assuming `R` equidimensional and catenary.
    pub fn height(&self, ideal: &Ideal) -> Result<Height> {
        if let Some(n) = self.zmod_n() {
            let (g, _) = self.zmod_bezout(n, ideal.gens());
            return Ok(if g == 1 { Height::UnitIdeal } else { Height::Finite(0) });
        }
        if !self.gb_capable() {
            return Err(Error::UnsupportedRing("no height computation for this ring".into()));
        }
        let gb = self.ambient_gb(ideal.gens());
        let lms: Vec<Monomial> = gb.iter().map(|g| g.lm().clone()).collect();
        match groebner::staircase_dimension(&lms, self.nvars()) {
            None => Ok(Height::UnitIdeal),
            Some(dim) => {
                let d = self.krull_dim().ok_or(Error::MissingDimension)?;
                Ok(Height::Finite(d.saturating_sub(dim)))
            }
        }
    }

    /// Whether `f` lies in no minimal prime of the ring.
    pub fn avoids_minimal_primes(&self, f: &Elem) -> Result<bool> {
        if let super::coeff::CoeffField::IntegersMod(n) = self.coeffs() {
            if self.nvars() == 0 {
                let v = Self::residue(f);
                return Ok(prime_factors(*n).iter().all(|p| v % p != 0));
            }
        }
        if !self.is_quotient() {
            return Ok(!f.0.is_zero());
        }
        let primes = self.declared_minimal_primes().ok_or(Error::MissingMinimalPrimes)?;
        for p in primes {
            if self.ideal_membership(f, &Ideal::new(p.clone()))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Certificate that `K + L = (1)`.
    pub fn comaximal(&self, k_ideal: &Ideal, l_ideal: &Ideal) -> Result<ComaximalCert> {
        let mut row: Vec<Elem> = k_ideal.gens().to_vec();
        row.extend(l_ideal.gens().iter().cloned());
        let x = match self.solve_unimodular(&row) {
            Ok(x) => x,
            Err(Error::NotUnimodular) => return Err(Error::NotComaximal),
            Err(e) => return Err(e),
        };
        let nk = k_ideal.gens().len();
        let k = self.dot(&x[..nk], k_ideal.gens());
        let l = self.dot(&x[nk..], l_ideal.gens());
        Ok(ComaximalCert { k, l })
    }

    /// Re-check a comaximality certificate from scratch.
    pub fn verify_comaximal(&self, k_ideal: &Ideal, l_ideal: &Ideal, cert: &ComaximalCert) -> Result<bool> {
        Ok(self.is_one(&self.add(&cert.k, &cert.l))
            && self.ideal_membership(&cert.k, k_ideal)?
            && self.ideal_membership(&cert.l, l_ideal)?)
    }
}
