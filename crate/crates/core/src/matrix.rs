//! Square matrices, elementary operations `e_ij(t)` acting on the right,
//! and the reduction of a matrix in general position to the identity in
//! exactly `(n+1)^2 - 1` elementary operations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingDescriptor};

/// `I + t * E_ij` with 1-based indices `i != j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryOp {
    pub i: usize,
    pub j: usize,
    pub t: Elem,
}

impl ElementaryOp {
    pub fn new(i: usize, j: usize, t: Elem) -> Result<Self> {
        if i == j || i == 0 || j == 0 {
            return Err(Error::Invalid(format!("bad elementary position ({i}, {j})")));
        }
        Ok(ElementaryOp { i, j, t })
    }

    pub fn inverse(&self, ring: &Ring) -> ElementaryOp {
        ElementaryOp {
            i: self.i,
            j: self.j,
            t: ring.neg(&self.t),
        }
    }

    pub fn to_matrix(&self, ring: &Ring, size: usize) -> Result<SqMatrix> {
        let mut m = SqMatrix::identity(ring, size);
        m.apply_right(self)?;
        Ok(m)
    }

    fn check_size(&self, size: usize) -> Result<()> {
        if self.i > size || self.j > size {
            return Err(Error::SizeMismatch(format!(
                "e_{}{} does not act on size {size}",
                self.i, self.j
            )));
        }
        Ok(())
    }

    pub fn to_json(&self, ring: &Ring) -> OpJson {
        OpJson {
            i: self.i,
            j: self.j,
            t: ring.format(&self.t),
        }
    }

    pub fn from_json(ring: &Ring, j: &OpJson) -> Result<Self> {
        ElementaryOp::new(j.i, j.j, ring.parse(&j.t)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpJson {
    pub i: usize,
    pub j: usize,
    pub t: String,
}

/// `row * e_ij(t)`: only coordinate `j` changes, `a_j <- a_j + a_i * t`.
pub fn apply_right_row(ring: &Ring, row: &[Elem], op: &ElementaryOp) -> Result<Vec<Elem>> {
    op.check_size(row.len())?;
    let mut out = row.to_vec();
    out[op.j - 1] = ring.add_mul(&row[op.j - 1], &row[op.i - 1], &op.t);
    Ok(out)
}

/// A square matrix over a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct SqMatrix {
    ring: Ring,
    rows: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingDescriptor>,
    pub rows: Vec<Vec<String>>,
}

impl SqMatrix {
    pub fn identity(ring: &Ring, size: usize) -> Self {
        let rows = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| if i == j { ring.one() } else { ring.zero() })
                    .collect()
            })
            .collect();
        SqMatrix {
            ring: ring.clone(),
            rows,
        }
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch("matrix is not square".into()));
        }
        Ok(SqMatrix {
            ring: ring.clone(),
            rows,
        })
    }

    /// A matrix that must have determinant one.
    pub fn sl(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let m = Self::from_rows(ring, rows)?;
        if !m.is_sl() {
            return Err(Error::NotSl);
        }
        Ok(m)
    }

    pub fn parse(ring: &Ring, rows: &[Vec<&str>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ring, rows)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// 0-based entry.
    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.rows[i][j]
    }

    /// All entries, row by row.
    pub fn entries(&self) -> Vec<Elem> {
        self.rows.iter().flatten().cloned().collect()
    }

    pub fn mul(&self, o: &SqMatrix) -> Result<SqMatrix> {
        let n = self.size();
        if o.size() != n {
            return Err(Error::SizeMismatch(format!("{n} vs {}", o.size())));
        }
        let r = &self.ring;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(r.zero(), |acc, k| r.add_mul(&acc, &self.rows[i][k], &o.rows[k][j])))
                    .collect()
            })
            .collect();
        Ok(SqMatrix {
            ring: r.clone(),
            rows,
        })
    }

    /// Right multiplication by `op` in place: column `j` += `t` * column `i`.
    pub fn apply_right(&mut self, op: &ElementaryOp) -> Result<()> {
        op.check_size(self.size())?;
        let (ci, cj) = (op.i - 1, op.j - 1);
        for row in self.rows.iter_mut() {
            row[cj] = self.ring.add_mul(&row[cj], &row[ci], &op.t);
        }
        Ok(())
    }

    pub fn times_op(&self, op: &ElementaryOp) -> Result<SqMatrix> {
        let mut m = self.clone();
        m.apply_right(op)?;
        Ok(m)
    }

    pub fn det(&self) -> Elem {
        let idx: Vec<usize> = (0..self.size()).collect();
        self.minor_det(0, &idx)
    }

    // Laplace expansion along row `row` over the remaining columns.
    fn minor_det(&self, row: usize, cols: &[usize]) -> Elem {
        let r = &self.ring;
        if cols.is_empty() {
            return r.one();
        }
        if cols.len() == 1 {
            return self.rows[row][cols[0]].clone();
        }
        let mut acc = r.zero();
        for (pos, &c) in cols.iter().enumerate() {
            let a = &self.rows[row][c];
            if r.is_zero(a) {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = r.mul(a, &self.minor_det(row + 1, &rest));
            acc = if pos % 2 == 0 { r.add(&acc, &term) } else { r.sub(&acc, &term) };
        }
        acc
    }

    pub fn is_sl(&self) -> bool {
        self.ring.is_one(&self.det())
    }

    /// Inverse of a determinant-one matrix (its adjugate).
    pub fn sl_inverse(&self) -> Result<SqMatrix> {
        if !self.is_sl() {
            return Err(Error::NotSl);
        }
        let n = self.size();
        let r = &self.ring;
        let mut rows = vec![vec![r.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let sub: Vec<Vec<Elem>> = (0..n)
                    .filter(|&a| a != j)
                    .map(|a| {
                        (0..n)
                            .filter(|&b| b != i)
                            .map(|b| self.rows[a][b].clone())
                            .collect()
                    })
                    .collect();
                let d = if sub.is_empty() {
                    r.one()
                } else {
                    SqMatrix {
                        ring: r.clone(),
                        rows: sub,
                    }
                    .det()
                };
                rows[i][j] = if (i + j) % 2 == 0 { d } else { r.neg(&d) };
            }
        }
        Ok(SqMatrix {
            ring: r.clone(),
            rows,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == SqMatrix::identity(&self.ring, self.size())
    }

    pub fn to_json(&self, with_ring: bool) -> MatrixJson {
        MatrixJson {
            ring: with_ring.then(|| self.ring.descriptor().clone()),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|e| self.ring.format(e)).collect())
                .collect(),
        }
    }

    pub fn from_json(ring: &Ring, j: &MatrixJson) -> Result<Self> {
        if let Some(d) = &j.ring {
            if d != ring.descriptor() {
                return Err(Error::Invalid("matrix ring differs from the supplied ring".into()));
            }
        }
        let rows = j
            .rows
            .iter()
            .map(|r| ring.parse_all(r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ring, rows)
    }
}

/// Product `e_1 * e_2 * ... * e_k` of elementary matrices.
pub fn ops_product(ring: &Ring, size: usize, ops: &[ElementaryOp]) -> Result<SqMatrix> {
    let mut m = SqMatrix::identity(ring, size);
    for op in ops {
        m.apply_right(op)?;
    }
    Ok(m)
}

/// Positions `alpha_1 .. alpha_N` for the parametrization
/// `(t_1..t_N) -> e_{alpha_1}(t_1) ... e_{alpha_N}(t_N)`.
///
/// This is the clearing order of [`reduce_generic`] read backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSchedule {
    size: usize,
    positions: Vec<(usize, usize)>,
}

impl RootSchedule {
    /// The order in which [`reduce_generic`] emits operations: for each
    /// `k < size` a column shift `(size, k)` followed by `size - 1` row
    /// clearings `(k, j)`, then the last row `(size, j)`.
    pub fn reduction_order(size: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(size * size - 1);
        for k in 1..size {
            out.push((size, k));
            for j in (1..=size).filter(|&j| j != k) {
                out.push((k, j));
            }
        }
        for j in 1..size {
            out.push((size, j));
        }
        out
    }

    pub fn for_size(size: usize) -> Self {
        let mut positions = Self::reduction_order(size);
        positions.reverse();
        RootSchedule { size, positions }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    /// The elementary operations `e_{alpha_k}(t_k)`.
    pub fn ops(&self, t: &[Elem]) -> Result<Vec<ElementaryOp>> {
        if t.len() != self.len() {
            return Err(Error::SizeMismatch(format!(
                "expected {} parameters, got {}",
                self.len(),
                t.len()
            )));
        }
        Ok(self
            .positions
            .iter()
            .zip(t)
            .map(|(&(i, j), t)| ElementaryOp { i, j, t: t.clone() })
            .collect())
    }
}

/// Reduce `g` (determinant one) to the identity: returns `o_1..o_N` with
/// `g * o_1 * ... * o_N = I`. Fails at the first step whose pivot is not
/// invertible.
pub fn reduce_generic(g: &SqMatrix) -> Result<Vec<ElementaryOp>> {
    if !g.is_sl() {
        return Err(Error::NotSl);
    }
    let ring = g.ring().clone();
    let m = g.size();
    let mut cur = g.clone();
    let mut ops = Vec::with_capacity(m * m - 1);
    let mut push = |cur: &mut SqMatrix, op: ElementaryOp| -> Result<()> {
        cur.apply_right(&op)?;
        ops.push(op);
        Ok(())
    };
    for k in 1..m {
        // make g_kk = 1 using the last column
        let gkk = cur.get(k - 1, k - 1).clone();
        let t = if ring.is_one(&gkk) {
            ring.zero()
        } else {
            let pivot = cur.get(k - 1, m - 1);
            let inv = ring
                .inverse(pivot)
                .ok_or(Error::NotGenericPosition { step: ops_len(k, m) })?;
            ring.mul(&ring.sub(&ring.one(), &gkk), &inv)
        };
        push(&mut cur, ElementaryOp { i: m, j: k, t })?;
        for j in (1..=m).filter(|&j| j != k) {
            let t = ring.neg(cur.get(k - 1, j - 1));
            push(&mut cur, ElementaryOp { i: k, j, t })?;
        }
    }
    for j in 1..m {
        let t = ring.neg(cur.get(m - 1, j - 1));
        push(&mut cur, ElementaryOp { i: m, j, t })?;
    }
    if !cur.is_identity() {
        return Err(Error::InternalInvariantViolation(
            "reduction did not reach the identity".into(),
        ));
    }
    Ok(ops)
}

// 1-based index of the pivot step for row k.
fn ops_len(k: usize, m: usize) -> usize {
    (k - 1) * m + 1
}

/// `e_{alpha_1}(t_1) ... e_{alpha_N}(t_N)`.
pub fn params_to_matrix(ring: &Ring, schedule: &RootSchedule, t: &[Elem]) -> Result<SqMatrix> {
    ops_product(ring, schedule.size(), &schedule.ops(t)?)
}

/// The parameters `t` with `params_to_matrix(schedule, t) = g`, obtained by
/// reversing and negating the output of [`reduce_generic`].
pub fn matrix_to_params(g: &SqMatrix) -> Result<Vec<Elem>> {
    let ops = reduce_generic(g)?;
    let ring = g.ring();
    Ok(ops.iter().rev().map(|o| ring.neg(&o.t)).collect())
}
