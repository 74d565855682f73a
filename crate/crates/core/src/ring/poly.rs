//! Sparse multivariate polynomials ordered by graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::coeff::{Coeff, CoeffField};

/// Exponent vector. `Ord` is graded reverse lexicographic with the
/// declared variable order (`x_1 > x_2 > ... > x_v`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(o.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables occurring in the monomial.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&o.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Terms sorted by decreasing monomial, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    pub(crate) terms: Vec<(Monomial, Coeff)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(k: &CoeffField, c: Coeff, nvars: usize) -> Self {
        if k.is_zero(&c) {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(nvars), c)],
            }
        }
    }

    pub fn monomial(k: &CoeffField, m: Monomial, c: Coeff) -> Self {
        if k.is_zero(&c) {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Coeff {
        &self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant coefficient if the polynomial is a constant.
    pub fn as_constant(&self, k: &CoeffField) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(k.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    fn from_map(map: BTreeMap<Monomial, Coeff>) -> Self {
        Poly {
            terms: map.into_iter().rev().collect(),
        }
    }

    pub fn add(&self, o: &Poly, k: &CoeffField) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = k.add(ca, cb);
                    if !k.is_zero(&c) {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(o.terms[j..].iter().cloned());
        Poly { terms: out }
    }

    pub fn neg(&self, k: &CoeffField) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), k.neg(c))).collect(),
        }
    }

    pub fn sub(&self, o: &Poly, k: &CoeffField) -> Poly {
        self.add(&o.neg(k), k)
    }

    pub fn scale(&self, c: &Coeff, k: &CoeffField) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, x)| {
                    let y = k.mul(x, c);
                    (!k.is_zero(&y)).then(|| (m.clone(), y))
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Coeff, k: &CoeffField) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, x)| {
                    let y = k.mul(x, c);
                    (!k.is_zero(&y)).then(|| (m.mul(mono), y))
                })
                .collect(),
        }
    }

    pub fn mul(&self, o: &Poly, k: &CoeffField) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut acc: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let c = k.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(x) => *x = k.add(x, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !k.is_zero(c));
        Poly::from_map(acc)
    }

    /// Scale so the leading coefficient is one. Field coefficients only.
    pub fn monic(&self, k: &CoeffField) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&k.inv(c).expect("field coefficients"), k),
        }
    }

    /// Substitute values for the variables, evaluating with the supplied closures.
    pub fn eval_with<T: Clone>(
        &self,
        values: &[T],
        zero: T,
        lift: impl Fn(&Coeff) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = mul(&t, &values[i]);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_order() {
        // x > y > z; x*z > y^2 is false in grevlex (y^2 > x*z).
        let m = |v: &[u32]| Monomial(v.to_vec());
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[0, 1, 0]) > m(&[0, 0, 1]));
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
        assert!(m(&[2, 0, 0]) > m(&[1, 1, 0]));
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
    }

    #[test]
    fn multiplication_cancels() {
        let k = CoeffField::Rationals;
        let x = Poly::monomial(&k, Monomial::var(1, 0), k.one());
        let one = Poly::constant(&k, k.one(), 1);
        let p = x.sub(&one, &k).mul(&x.add(&one, &k), &k);
        let x2 = x.mul(&x, &k);
        assert_eq!(p, x2.sub(&one, &k));
    }
}
