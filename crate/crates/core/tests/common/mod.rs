//! Shared generators and independent oracles for the integration tests.
//!
//! The oracles work on plain `BigRational` matrices and `u64` residues so
//! that they share no arithmetic with the library.

#![allow(dead_code)]

use std::path::PathBuf;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unimodular_lab::matrix::{ElementaryOp, SqMatrix};
use unimodular_lab::umrow::UmRow;
use unimodular_lab::{Elem, Ring};

pub type Q = BigRational;
pub type QMat = Vec<Vec<Q>>;

pub fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("data");
    p.push(name);
    p.display().to_string()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn to_q(ring: &Ring, e: &Elem) -> Q {
    Q::from_str(&ring.format(e)).expect("rational element")
}

pub fn matrix_q(g: &SqMatrix) -> QMat {
    g.rows()
        .iter()
        .map(|r| r.iter().map(|e| to_q(g.ring(), e)).collect())
        .collect()
}

pub fn identity_q(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect())
        .collect()
}

/// Right multiplication by `e_ij(t)`: column `j` += `t` * column `i`.
pub fn col_op(m: &mut QMat, i: usize, j: usize, t: &Q) {
    for row in m.iter_mut() {
        let add = &row[i - 1] * t;
        row[j - 1] += add;
    }
}

pub fn apply_ops_q(m: &QMat, ring: &Ring, ops: &[ElementaryOp]) -> QMat {
    let mut out = m.clone();
    for o in ops {
        col_op(&mut out, o.i, o.j, &to_q(ring, &o.t));
    }
    out
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det_q(m: &QMat) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut det = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return q(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            let f = &a[r][c] / &piv;
            for k in c..n {
                let sub = &f * &a[c][k];
                a[r][k] -= sub;
            }
        }
    }
    det
}

/// Straightforward re-implementation of the generic-position reduction:
/// `Ok(ts)` with the parameters of every step, or `Err(step)` with the
/// 1-based index of the step whose pivot vanished.
pub fn reduce_q(m: &QMat) -> Result<Vec<(usize, usize, Q)>, usize> {
    reduce_q_with(m, false)
}

/// As [`reduce_q`], but with `strict` a zero pivot is rejected even when the
/// diagonal entry is already one (the parameter is then not determined).
pub fn reduce_q_with(m: &QMat, strict: bool) -> Result<Vec<(usize, usize, Q)>, usize> {
    let n = m.len();
    let mut a = m.clone();
    let mut ops = Vec::new();
    for k in 1..n {
        let gkk = a[k - 1][k - 1].clone();
        if strict && a[k - 1][n - 1].is_zero() {
            return Err(ops.len() + 1);
        }
        let t = if gkk.is_one() {
            q(0)
        } else {
            let piv = a[k - 1][n - 1].clone();
            if piv.is_zero() {
                return Err(ops.len() + 1);
            }
            (q(1) - gkk) / piv
        };
        col_op(&mut a, n, k, &t);
        ops.push((n, k, t));
        for j in (1..=n).filter(|&j| j != k) {
            let t = -a[k - 1][j - 1].clone();
            col_op(&mut a, k, j, &t);
            ops.push((k, j, t));
        }
    }
    for j in 1..n {
        let t = -a[n - 1][j - 1].clone();
        col_op(&mut a, n, j, &t);
        ops.push((n, j, t));
    }
    assert_eq!(a, identity_q(n), "oracle reduction must end at the identity");
    Ok(ops)
}

/// Random product of `len` elementary matrices with small integer entries.
pub fn random_sl(ring: &Ring, size: usize, len: usize, r: &mut ChaCha8Rng) -> SqMatrix {
    let mut g = SqMatrix::identity(ring, size);
    for _ in 0..len {
        let i = r.gen_range(1..=size);
        let mut j = r.gen_range(1..=size);
        while j == i {
            j = r.gen_range(1..=size);
        }
        let t = ring.from_i64(r.gen_range(-3..=3));
        g.apply_right(&ElementaryOp::new(i, j, t).unwrap()).unwrap();
    }
    g
}

/// Nonzero rational `p/d` with small numerator and denominator.
pub fn random_rational(ring: &Ring, r: &mut ChaCha8Rng) -> Elem {
    let p: i64 = [-9, -7, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 7, 9][r.gen_range(0..14)];
    let d: i64 = r.gen_range(1..=5);
    ring.parse(&format!("{p}/{d}")).unwrap()
}

/// Whether `gcd(row, n) = 1` over `Z/n`.
pub fn unit_ideal_mod(values: &[u64], n: u64) -> bool {
    values.iter().fold(n, |g, &v| g.gcd(&v)) == 1
}

pub fn residues(ring: &Ring, row: &[Elem]) -> Vec<u64> {
    row.iter().map(|e| ring.format(e).parse().unwrap()).collect()
}

/// Random unimodular row over `Z/n`: random entries until the gcd is one.
pub fn random_row_mod(ring: &Ring, n: u64, len: usize, r: &mut ChaCha8Rng) -> Vec<Elem> {
    loop {
        let v: Vec<u64> = (0..len).map(|_| r.gen_range(0..n)).collect();
        if unit_ideal_mod(&v, n) {
            return v.iter().map(|&x| ring.from_i64(x as i64)).collect();
        }
    }
}

pub fn qxyz() -> Ring {
    Ring::rational_polynomials(&["x", "y", "z"]).unwrap()
}

/// A small random parameter: an integer or a signed variable.
pub fn small_poly(ring: &Ring, r: &mut ChaCha8Rng) -> Elem {
    let vars = ["x", "y", "z"];
    match r.gen_range(0..5) {
        0 | 1 => ring.from_i64(r.gen_range(-2..=2)),
        k => {
            let v = ring.var(vars[k - 2]).unwrap();
            if r.gen_bool(0.5) {
                v
            } else {
                ring.neg(&v)
            }
        }
    }
}

/// Random unimodular row over `Q[x,y,z]` of length `len`: the standard row
/// `(1, 0, .., 0)` moved by a few elementary operations with small parameters.
pub fn random_row_poly(ring: &Ring, len: usize, steps: usize, r: &mut ChaCha8Rng) -> Vec<Elem> {
    let mut entries = vec![ring.zero(); len];
    entries[0] = ring.one();
    for _ in 0..steps {
        let i = r.gen_range(1..=len);
        let mut j = r.gen_range(1..=len);
        while j == i {
            j = r.gen_range(1..=len);
        }
        let t = small_poly(ring, r);
        let add = ring.mul(&entries[i - 1], &t);
        entries[j - 1] = ring.add(&entries[j - 1], &add);
    }
    entries
}

/// Generic rows over `Q[x,y,z]` derived from the worked example by a few
/// elementary moves.
pub fn random_generic_row(ring: &Ring, r: &mut ChaCha8Rng) -> UmRow {
    let bases: [[&str; 4]; 4] = [
        ["x", "y", "z", "1 + x"],
        ["y", "z", "x", "1 - y"],
        ["x + y", "z", "y", "1 + x"],
        ["x", "y - 1", "z", "x + 2"],
    ];
    loop {
        let base = UmRow::parse(ring, &bases[r.gen_range(0..bases.len())]).unwrap();
        let mut entries = base.entries().to_vec();
        for _ in 0..r.gen_range(0..=2) {
            let i = r.gen_range(1..=4);
            let mut j = r.gen_range(1..=4);
            while j == i {
                j = r.gen_range(1..=4);
            }
            let t = ring.from_i64(r.gen_range(-2..=2));
            let add = ring.mul(&entries[i - 1], &t);
            entries[j - 1] = ring.add(&entries[j - 1], &add);
        }
        let row = UmRow::new(ring, entries).unwrap();
        if unimodular_lab::umrow::is_generic(&row).unwrap() {
            return row;
        }
    }
}
