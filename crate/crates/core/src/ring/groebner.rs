//! Buchberger's algorithm over a coefficient field, with an optional
//! variant that tracks how each basis element is built from the inputs.

use std::collections::HashSet;

use super::coeff::CoeffField;
use super::poly::{Monomial, Poly};

/// Fully reduce `f` modulo `basis` (which need not be monic or reduced).
pub fn normal_form(f: &Poly, basis: &[Poly], k: &CoeffField) -> Poly {
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, super::coeff::Coeff)> = Vec::new();
    while let Some((m, c)) = p.lead().cloned() {
        match basis.iter().find(|g| !g.is_zero() && g.lm().divides(&m)) {
            Some(g) => {
                let q = k.mul(&c, &k.inv(g.lc()).expect("field coefficients"));
                let mono = g.lm().quotient_of(&m);
                p = p.sub(&g.mul_term(&mono, &q, k), k);
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    Poly { terms: rem }
}

/// Division with quotients: `f = sum q_i * basis_i + r` with `r` reduced.
pub fn divide(f: &Poly, basis: &[Poly], k: &CoeffField) -> (Vec<Poly>, Poly) {
    let mut quotients = vec![Poly::zero(); basis.len()];
    let mut p = f.clone();
    let mut rem = Vec::new();
    while let Some((m, c)) = p.lead().cloned() {
        match basis.iter().position(|g| !g.is_zero() && g.lm().divides(&m)) {
            Some(i) => {
                let g = &basis[i];
                let q = k.mul(&c, &k.inv(g.lc()).expect("field coefficients"));
                let mono = g.lm().quotient_of(&m);
                p = p.sub(&g.mul_term(&mono, &q, k), k);
                quotients[i] = quotients[i].add(&Poly::monomial(k, mono, q), k);
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    (quotients, Poly { terms: rem })
}

fn s_poly(f: &Poly, g: &Poly, k: &CoeffField) -> Poly {
    let l = f.lm().lcm(g.lm());
    let a = f.lm().quotient_of(&l);
    let b = g.lm().quotient_of(&l);
    let cf = k.inv(f.lc()).expect("field coefficients");
    let cg = k.inv(g.lc()).expect("field coefficients");
    f.mul_term(&a, &cf, k).sub(&g.mul_term(&b, &cg, k), k)
}

struct PairQueue {
    pending: Vec<(usize, usize)>,
    set: HashSet<(usize, usize)>,
}

impl PairQueue {
    fn new() -> Self {
        PairQueue {
            pending: Vec::new(),
            set: HashSet::new(),
        }
    }

    fn push(&mut self, i: usize, j: usize) {
        let key = (i.min(j), i.max(j));
        if self.set.insert(key) {
            self.pending.push(key);
        }
    }

    fn contains(&self, i: usize, j: usize) -> bool {
        self.set.contains(&(i.min(j), i.max(j)))
    }

    /// Remove the pair with the smallest lcm (normal selection strategy).
    fn pop(&mut self, lms: &[Monomial]) -> Option<(usize, usize)> {
        if self.pending.is_empty() {
            return None;
        }
        let mut best = 0;
        let mut best_lcm = lms[self.pending[0].0].lcm(&lms[self.pending[0].1]);
        for (idx, &(i, j)) in self.pending.iter().enumerate().skip(1) {
            let l = lms[i].lcm(&lms[j]);
            if l < best_lcm {
                best = idx;
                best_lcm = l;
            }
        }
        let p = self.pending.swap_remove(best);
        self.set.remove(&p);
        Some(p)
    }
}

fn chain_criterion(i: usize, j: usize, lms: &[Monomial], queue: &PairQueue) -> bool {
    let l = lms[i].lcm(&lms[j]);
    (0..lms.len()).any(|t| {
        t != i && t != j && lms[t].divides(&l) && !queue.contains(i, t) && !queue.contains(j, t)
    })
}

/// Reduced Groebner basis (monic, sorted by decreasing leading monomial).
/// The unit ideal returns `[1]`, the zero ideal returns `[]`.
pub fn groebner(gens: &[Poly], k: &CoeffField, nvars: usize) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = normal_form(g, &basis, k);
        if !r.is_zero() {
            if r.is_constant() {
                return vec![Poly::constant(k, k.one(), nvars)];
            }
            basis.push(r.monic(k));
        }
    }
    let mut lms: Vec<Monomial> = basis.iter().map(|g| g.lm().clone()).collect();
    let mut queue = PairQueue::new();
    for j in 0..basis.len() {
        for i in 0..j {
            queue.push(i, j);
        }
    }
    while let Some((i, j)) = queue.pop(&lms) {
        if lms[i].coprime(&lms[j]) || chain_criterion(i, j, &lms, &queue) {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], k);
        let r = normal_form(&s, &basis, k);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![Poly::constant(k, k.one(), nvars)];
        }
        let r = r.monic(k);
        let idx = basis.len();
        lms.push(r.lm().clone());
        basis.push(r);
        for t in 0..idx {
            queue.push(t, idx);
        }
    }
    reduce_basis(basis, k)
}

fn reduce_basis(basis: Vec<Poly>, k: &CoeffField) -> Vec<Poly> {
    // minimal: drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        reduced.push(normal_form(&minimal[i], &others, k).monic(k));
    }
    reduced.sort_by(|a, b| b.lm().cmp(a.lm()));
    reduced
}

/// A Groebner basis element together with cofactors expressing it in the inputs.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub poly: Poly,
    pub cofactors: Vec<Poly>,
}

fn combine(a: &[Poly], b: &[Poly], k: &CoeffField) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x.add(y, k)).collect()
}

fn scale_all(v: &[Poly], m: &Monomial, c: &super::coeff::Coeff, k: &CoeffField) -> Vec<Poly> {
    v.iter().map(|p| p.mul_term(m, c, k)).collect()
}

fn tracked_reduce(f: &Tracked, basis: &[Tracked], k: &CoeffField) -> Tracked {
    let mut p = f.poly.clone();
    let mut cof = f.cofactors.clone();
    let mut rem = Vec::new();
    while let Some((m, c)) = p.lead().cloned() {
        match basis.iter().find(|g| g.poly.lm().divides(&m)) {
            Some(g) => {
                let q = k.mul(&c, &k.inv(g.poly.lc()).expect("field coefficients"));
                let mono = g.poly.lm().quotient_of(&m);
                p = p.sub(&g.poly.mul_term(&mono, &q, k), k);
                let nq = k.neg(&q);
                cof = combine(&cof, &scale_all(&g.cofactors, &mono, &nq, k), k);
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    Tracked {
        poly: Poly { terms: rem },
        cofactors: cof,
    }
}

fn tracked_monic(t: Tracked, k: &CoeffField, nvars: usize) -> Tracked {
    let inv = k.inv(t.poly.lc()).expect("field coefficients");
    let one = Monomial::one(nvars);
    Tracked {
        poly: t.poly.scale(&inv, k),
        cofactors: scale_all(&t.cofactors, &one, &inv, k),
    }
}

/// A (not necessarily reduced) Groebner basis with cofactors. When
/// `stop_on_unit` is set the computation returns as soon as a nonzero
/// constant appears, yielding the single element `1` with its cofactors.
pub fn tracked_groebner(
    gens: &[Poly],
    k: &CoeffField,
    nvars: usize,
    stop_on_unit: bool,
) -> Vec<Tracked> {
    let n = gens.len();
    let unit_vec = |i: usize| -> Vec<Poly> {
        (0..n)
            .map(|j| {
                if i == j {
                    Poly::constant(k, k.one(), nvars)
                } else {
                    Poly::zero()
                }
            })
            .collect()
    };
    let mut basis: Vec<Tracked> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let t = tracked_reduce(
            &Tracked {
                poly: g.clone(),
                cofactors: unit_vec(i),
            },
            &basis,
            k,
        );
        if t.poly.is_zero() {
            continue;
        }
        let t = tracked_monic(t, k, nvars);
        if t.poly.is_constant() && stop_on_unit {
            return vec![t];
        }
        basis.push(t);
    }
    let mut lms: Vec<Monomial> = basis.iter().map(|g| g.poly.lm().clone()).collect();
    let mut queue = PairQueue::new();
    for j in 0..basis.len() {
        for i in 0..j {
            queue.push(i, j);
        }
    }
    while let Some((i, j)) = queue.pop(&lms) {
        if lms[i].coprime(&lms[j]) || chain_criterion(i, j, &lms, &queue) {
            continue;
        }
        let (f, g) = (&basis[i], &basis[j]);
        let l = f.poly.lm().lcm(g.poly.lm());
        let a = f.poly.lm().quotient_of(&l);
        let b = g.poly.lm().quotient_of(&l);
        let cf = k.inv(f.poly.lc()).expect("field coefficients");
        let cg = k.neg(&k.inv(g.poly.lc()).expect("field coefficients"));
        let s = Tracked {
            poly: f.poly.mul_term(&a, &cf, k).add(&g.poly.mul_term(&b, &cg, k), k),
            cofactors: combine(
                &scale_all(&f.cofactors, &a, &cf, k),
                &scale_all(&g.cofactors, &b, &cg, k),
                k,
            ),
        };
        let r = tracked_reduce(&s, &basis, k);
        if r.poly.is_zero() {
            continue;
        }
        let r = tracked_monic(r, k, nvars);
        if r.poly.is_constant() && stop_on_unit {
            return vec![r];
        }
        let idx = basis.len();
        lms.push(r.poly.lm().clone());
        basis.push(r);
        for t in 0..idx {
            queue.push(t, idx);
        }
    }
    basis
}

/// Tracked division of `f` by a tracked basis: returns cofactors `c` with
/// `f - sum c_i * gens_i` equal to the returned remainder.
pub fn tracked_divide(
    f: &Poly,
    basis: &[Tracked],
    ngens: usize,
    k: &CoeffField,
) -> (Vec<Poly>, Poly) {
    let start = Tracked {
        poly: f.clone(),
        cofactors: vec![Poly::zero(); ngens],
    };
    let r = tracked_reduce(&start, basis, k);
    // tracked_reduce accumulates -(quotient combination); flip the sign.
    let cof = r.cofactors.iter().map(|p| p.neg(k)).collect();
    (cof, r.poly)
}

/// Krull dimension of `P/I` read off the leading monomials of a Groebner
/// basis of `I`: the largest set of variables containing the support of
/// no leading monomial. Returns `None` for the unit ideal.
pub fn staircase_dimension(lms: &[Monomial], nvars: usize) -> Option<usize> {
    if lms.iter().any(|m| m.is_one()) {
        return None;
    }
    let supports: Vec<u64> = lms
        .iter()
        .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    let mut best = 0;
    for set in 0u64..(1u64 << nvars) {
        let size = set.count_ones() as usize;
        if size <= best {
            continue;
        }
        if supports.iter().all(|&s| s & !set != 0) {
            best = size;
        }
    }
    Some(best)
}

/// Monomials outside the leading-term ideal, if there are finitely many.
pub fn standard_monomials(lms: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    if lms.iter().any(|m| m.is_one()) {
        return Some(Vec::new());
    }
    // zero-dimensional iff every variable has a pure power among the leading monomials
    let mut bounds = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let b = lms
            .iter()
            .filter(|m| m.support().all(|i| i == v))
            .map(|m| m.0[v])
            .min()?;
        bounds.push(b);
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        let m = Monomial(cur.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        let mut i = 0;
        loop {
            if i == nvars {
                out.sort_by(|a, b| b.cmp(a));
                return Some(out);
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::coeff::Coeff;

    fn var(i: usize, n: usize) -> Poly {
        Poly::monomial(&CoeffField::Rationals, Monomial::var(n, i), CoeffField::Rationals.one())
    }

    fn c(v: i64, n: usize) -> Poly {
        let k = CoeffField::Rationals;
        Poly::constant(&k, k.from_i64(v), n)
    }

    #[test]
    fn linear_elimination() {
        let k = CoeffField::Rationals;
        let (x, y) = (var(0, 2), var(1, 2));
        let gb = groebner(&[x.add(&y, &k), x.sub(&y, &k)], &k, 2);
        assert_eq!(gb, vec![x, y]);
    }

    #[test]
    fn principal_reduction() {
        let k = CoeffField::Rationals;
        let x = var(0, 1);
        let x2m1 = x.mul(&x, &k).sub(&c(1, 1), &k);
        let xm1 = x.sub(&c(1, 1), &k);
        assert_eq!(groebner(&[x2m1, xm1.clone()], &k, 1), vec![xm1]);
    }

    #[test]
    fn tracked_unit_cofactors() {
        let k = CoeffField::Rationals;
        let (x, y, z) = (var(0, 3), var(1, 3), var(2, 3));
        let gens = vec![x.clone(), y, z, x.add(&c(1, 3), &k)];
        let t = tracked_groebner(&gens, &k, 3, true);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].poly, c(1, 3));
        let total = gens
            .iter()
            .zip(&t[0].cofactors)
            .fold(Poly::zero(), |acc, (g, f)| acc.add(&g.mul(f, &k), &k));
        assert_eq!(total, c(1, 3));
        assert_eq!(t[0].cofactors[0], c(-1, 3));
        assert_eq!(t[0].cofactors[3], c(1, 3));
    }

    #[test]
    fn staircase() {
        let m = |v: &[u32]| Monomial(v.to_vec());
        assert_eq!(staircase_dimension(&[m(&[1, 0, 0]), m(&[0, 1, 0])], 3), Some(1));
        assert_eq!(staircase_dimension(&[m(&[1, 1, 0])], 3), Some(2));
        assert_eq!(staircase_dimension(&[], 3), Some(3));
        assert_eq!(staircase_dimension(&[m(&[0, 0, 0])], 3), None);
        let std = standard_monomials(&[m(&[2])], 1).unwrap();
        assert_eq!(std, vec![m(&[1]), m(&[0])]);
        let _ = Coeff::Res(0);
    }
}
