//! Coefficient domains: the rationals, prime fields, `Z/n`, and rational
//! function fields in one variable over the first two.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffField {
    Rationals,
    Prime(u64),
    /// `Z/n`; a field only when `n` is prime.
    IntegersMod(u64),
    RationalFunctions { base: Box<CoeffField>, var: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Rat(BigRational),
    Res(u64),
    Fun(RatFn),
}

/// A reduced quotient `num / den` of univariate polynomials with `den` monic.
/// Polynomials are dense, lowest degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    num: Vec<Coeff>,
    den: Vec<Coeff>,
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd_i128(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub(crate) fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl CoeffField {
    pub fn is_field(&self) -> bool {
        match self {
            CoeffField::IntegersMod(n) => is_prime(*n),
            _ => true,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CoeffField::Rationals | CoeffField::RationalFunctions { .. })
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            CoeffField::Prime(p) | CoeffField::IntegersMod(p) => Some(*p),
            _ => None,
        }
    }

    pub fn cardinality(&self) -> Option<u64> {
        self.modulus()
    }

    /// Name of the transcendental generator of a rational function field.
    pub fn generator_name(&self) -> Option<&str> {
        match self {
            CoeffField::RationalFunctions { var, .. } => Some(var),
            _ => None,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            CoeffField::Rationals => Coeff::Rat(BigRational::zero()),
            CoeffField::Prime(_) | CoeffField::IntegersMod(_) => Coeff::Res(0),
            CoeffField::RationalFunctions { base, .. } => Coeff::Fun(RatFn {
                num: Vec::new(),
                den: vec![base.one()],
            }),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            CoeffField::Rationals => Coeff::Rat(BigRational::from_integer(v.clone())),
            CoeffField::Prime(n) | CoeffField::IntegersMod(n) => {
                let r = v.mod_floor(&BigInt::from(*n));
                Coeff::Res(r.to_u64().expect("residue fits"))
            }
            CoeffField::RationalFunctions { base, .. } => {
                let c = base.from_bigint(v);
                if base.is_zero(&c) {
                    self.zero()
                } else {
                    Coeff::Fun(RatFn {
                        num: vec![c],
                        den: vec![base.one()],
                    })
                }
            }
        }
    }

    /// The generator `t` of a rational function field.
    pub fn generator(&self) -> Option<Coeff> {
        match self {
            CoeffField::RationalFunctions { base, .. } => Some(Coeff::Fun(RatFn {
                num: vec![base.zero(), base.one()],
                den: vec![base.one()],
            })),
            _ => None,
        }
    }

    pub fn is_zero(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Res(v) => *v == 0,
            Coeff::Fun(f) => f.num.is_empty(),
        }
    }

    pub fn is_one(&self, c: &Coeff) -> bool {
        *c == self.one()
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (CoeffField::Prime(n) | CoeffField::IntegersMod(n), Coeff::Res(x), Coeff::Res(y)) => {
                Coeff::Res(((*x as u128 + *y as u128) % *n as u128) as u64)
            }
            (CoeffField::RationalFunctions { base, .. }, Coeff::Fun(x), Coeff::Fun(y)) => {
                let num = up_add(
                    base,
                    &up_mul(base, &x.num, &y.den),
                    &up_mul(base, &y.num, &x.den),
                );
                let den = up_mul(base, &x.den, &y.den);
                Coeff::Fun(ratfn_normalize(base, num, den))
            }
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffField::Rationals, Coeff::Rat(x)) => Coeff::Rat(-x),
            (CoeffField::Prime(n) | CoeffField::IntegersMod(n), Coeff::Res(x)) => {
                Coeff::Res(if *x == 0 { 0 } else { n - x })
            }
            (CoeffField::RationalFunctions { base, .. }, Coeff::Fun(x)) => Coeff::Fun(RatFn {
                num: up_neg(base, &x.num),
                den: x.den.clone(),
            }),
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (CoeffField::Prime(n) | CoeffField::IntegersMod(n), Coeff::Res(x), Coeff::Res(y)) => {
                Coeff::Res(((*x as u128 * *y as u128) % *n as u128) as u64)
            }
            (CoeffField::RationalFunctions { base, .. }, Coeff::Fun(x), Coeff::Fun(y)) => {
                let num = up_mul(base, &x.num, &y.num);
                let den = up_mul(base, &x.den, &y.den);
                Coeff::Fun(ratfn_normalize(base, num, den))
            }
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (CoeffField::Rationals, Coeff::Rat(x)) => Some(Coeff::Rat(x.recip())),
            (CoeffField::Prime(n) | CoeffField::IntegersMod(n), Coeff::Res(x)) => {
                mod_inverse(*x, *n).map(Coeff::Res)
            }
            (CoeffField::RationalFunctions { base, .. }, Coeff::Fun(x)) => Some(Coeff::Fun(
                ratfn_normalize(base, x.den.clone(), x.num.clone()),
            )),
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    pub fn pow(&self, a: &Coeff, mut e: u32) -> Coeff {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// All elements of a finite coefficient ring, in residue order.
    pub fn elements(&self) -> Option<Vec<Coeff>> {
        self.modulus().map(|n| (0..n).map(Coeff::Res).collect())
    }

    /// Whether a constant is "negative" for display purposes.
    pub fn is_negative(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Rat(r) => r.is_negative(),
            Coeff::Res(_) => false,
            Coeff::Fun(f) => f.num.last().is_some_and(|lc| match lc {
                Coeff::Rat(r) => r.is_negative(),
                _ => false,
            }),
        }
    }

    /// Whether the textual form of `c` needs parentheses when it multiplies a monomial.
    pub(crate) fn is_compound(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Fun(f) => f.den.len() > 1 || f.num.iter().filter(|x| !is_zero_base(x)).count() > 1,
            _ => false,
        }
    }

    pub fn format(&self, c: &Coeff) -> String {
        match (self, c) {
            (_, Coeff::Rat(r)) => fmt_rational(r),
            (_, Coeff::Res(v)) => v.to_string(),
            (CoeffField::RationalFunctions { base, var }, Coeff::Fun(f)) => {
                let num = fmt_unipoly(base, &f.num, var);
                if f.den.len() == 1 {
                    num
                } else {
                    let den = fmt_unipoly(base, &f.den, var);
                    let n_terms = f.num.iter().filter(|x| !base.is_zero(x)).count();
                    let num = if n_terms > 1 || num.starts_with('-') {
                        format!("({num})")
                    } else {
                        num
                    };
                    format!("{num}/({den})")
                }
            }
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    /// A random element from a box that grows with `magnitude`.
    ///
    /// Rationals draw integers in `[-magnitude, magnitude]`; function fields
    /// draw polynomials in the generator of degree at most `magnitude / 3`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, magnitude: u64) -> Coeff {
        let m = magnitude.max(1) as i64;
        match self {
            CoeffField::Rationals => self.from_i64(rng.gen_range(-m..=m)),
            CoeffField::Prime(n) | CoeffField::IntegersMod(n) => Coeff::Res(rng.gen_range(0..*n)),
            CoeffField::RationalFunctions { base, .. } => {
                let deg = (magnitude / 3) as usize;
                let num: Vec<Coeff> = (0..=deg).map(|_| base.sample(rng, magnitude)).collect();
                Coeff::Fun(ratfn_normalize(base, num, vec![base.one()]))
            }
        }
    }
}

fn is_zero_base(c: &Coeff) -> bool {
    match c {
        Coeff::Rat(r) => r.is_zero(),
        Coeff::Res(v) => *v == 0,
        Coeff::Fun(f) => f.num.is_empty(),
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_unipoly(base: &CoeffField, p: &[Coeff], var: &str) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (deg, c) in p.iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let neg = base.is_negative(c);
        let abs = if neg { base.neg(c) } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match deg {
            0 => String::new(),
            1 => var.to_string(),
            d => format!("{var}^{d}"),
        };
        if mono.is_empty() {
            out.push_str(&base.format(&abs));
        } else if base.is_one(&abs) {
            out.push_str(&mono);
        } else {
            let _ = write!(out, "{}*{}", base.format(&abs), mono);
        }
    }
    out
}

fn trim(mut v: Vec<Coeff>, base: &CoeffField) -> Vec<Coeff> {
    while v.last().is_some_and(|c| base.is_zero(c)) {
        v.pop();
    }
    v
}

fn up_add(base: &CoeffField, a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    let n = a.len().max(b.len());
    let zero = base.zero();
    let v = (0..n)
        .map(|i| base.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(v, base)
}

fn up_neg(base: &CoeffField, a: &[Coeff]) -> Vec<Coeff> {
    a.iter().map(|c| base.neg(c)).collect()
}

fn up_mul(base: &CoeffField, a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if base.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = base.add(&out[i + j], &base.mul(x, y));
        }
    }
    trim(out, base)
}

fn up_scale(base: &CoeffField, a: &[Coeff], c: &Coeff) -> Vec<Coeff> {
    trim(a.iter().map(|x| base.mul(x, c)).collect(), base)
}

fn up_divrem(base: &CoeffField, a: &[Coeff], b: &[Coeff]) -> (Vec<Coeff>, Vec<Coeff>) {
    let lc_inv = base.inv(b.last().expect("nonzero divisor")).expect("field");
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![base.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let q = base.mul(rem.last().unwrap(), &lc_inv);
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] = base.sub(&rem[shift + i], &base.mul(&q, c));
        }
        quo[shift] = q;
        rem = trim(rem, base);
    }
    (trim(quo, base), rem)
}

fn up_monic(base: &CoeffField, a: &[Coeff]) -> Vec<Coeff> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => up_scale(base, a, &base.inv(lc).expect("field")),
    }
}

fn up_gcd(base: &CoeffField, a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = up_divrem(base, &x, &y);
        x = y;
        y = r;
    }
    up_monic(base, &x)
}

fn ratfn_normalize(base: &CoeffField, num: Vec<Coeff>, den: Vec<Coeff>) -> RatFn {
    let num = trim(num, base);
    let den = trim(den, base);
    assert!(!den.is_empty(), "division by zero in rational function field");
    if num.is_empty() {
        return RatFn {
            num,
            den: vec![base.one()],
        };
    }
    let g = up_gcd(base, &num, &den);
    let (num, _) = up_divrem(base, &num, &g);
    let (den, _) = up_divrem(base, &den, &g);
    let lc_inv = base.inv(den.last().unwrap()).expect("field");
    RatFn {
        num: up_scale(base, &num, &lc_inv),
        den: up_scale(base, &den, &lc_inv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt() -> CoeffField {
        CoeffField::RationalFunctions {
            base: Box::new(CoeffField::Rationals),
            var: "t".into(),
        }
    }

    #[test]
    fn modular_inverse_and_units() {
        let z30 = CoeffField::IntegersMod(30);
        assert_eq!(z30.inv(&Coeff::Res(7)), Some(Coeff::Res(13)));
        assert_eq!(z30.inv(&Coeff::Res(6)), None);
        assert!(!z30.is_field());
        assert!(CoeffField::Prime(31).is_field());
    }

    #[test]
    fn rational_functions_reduce() {
        let f = qt();
        let t = f.generator().unwrap();
        let one = f.one();
        // (t^2 - 1) / (t - 1) = t + 1
        let num = f.sub(&f.mul(&t, &t), &one);
        let den = f.sub(&t, &one);
        let q = f.mul(&num, &f.inv(&den).unwrap());
        assert_eq!(q, f.add(&t, &one));
        assert_eq!(f.format(&q), "t + 1");
        let r = f.inv(&f.add(&t, &one)).unwrap();
        assert_eq!(f.format(&r), "1/(t + 1)");
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(30), vec![2, 3, 5]);
        assert_eq!(prime_factors(36), vec![2, 3]);
        assert_eq!(prime_factors(31), vec![31]);
    }
}
