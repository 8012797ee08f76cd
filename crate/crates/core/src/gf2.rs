//! Dense linear algebra over GF(2).

use std::fmt;

use thiserror::Error;

use crate::bits::BitVec;
use crate::pauli::PauliOperator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        BinaryMatrix { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    /// Build from row vectors that all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length differs from column count");
        BinaryMatrix { cols, rows }
    }

    pub fn from_nested(entries: &[Vec<u8>]) -> Self {
        let cols = entries.first().map_or(0, Vec::len);
        let rows = entries
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                BitVec::from_bools(&r.iter().map(|&b| b != 0).collect::<Vec<_>>())
            })
            .collect();
        BinaryMatrix { cols, rows }
    }

    pub fn to_nested(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| (0..self.cols).map(|j| r.get(j) as u8).collect()).collect()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_bools(&self.rows.iter().map(|r| r.get(j)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Matrix-vector product `M v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Row-vector product `u M`.
    pub fn left_mul_vec(&self, u: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.cols);
        for i in u.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    pub fn mul(&self, other: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, other.rows.len());
        BinaryMatrix { cols: other.cols, rows: self.rows.iter().map(|r| other.left_mul_vec(r)).collect() }
    }

    pub fn select_columns(&self, cols: &[usize]) -> BinaryMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| BitVec::from_bools(&cols.iter().map(|&j| r.get(j)).collect::<Vec<_>>()))
            .collect();
        BinaryMatrix { cols: cols.len(), rows }
    }

    pub fn select_rows(&self, rows: &[usize]) -> BinaryMatrix {
        BinaryMatrix { cols: self.cols, rows: rows.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    pub fn rank(&self) -> usize {
        let mut basis = SpanBasis::new(self.cols);
        self.rows.iter().filter(|r| basis.insert(r)).count()
    }

    pub fn apply(&mut self, op: RowOp) {
        match op {
            RowOp::Swap(a, b) => self.rows.swap(a, b),
            RowOp::Add { from, to } => {
                let src = self.rows[from].clone();
                self.rows[to].xor_assign(&src);
            }
        }
    }

    /// Replay a logged sequence of row operations.
    pub fn replay(&self, ops: &[RowOp]) -> BinaryMatrix {
        let mut m = self.clone();
        for &op in ops {
            m.apply(op);
        }
        m
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    /// Row `to` becomes row `to` plus row `from`.
    Add { from: usize, to: usize },
}

#[derive(Debug, Clone)]
pub struct RowReduction {
    pub reduced: BinaryMatrix,
    pub ops: Vec<RowOp>,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

/// Gauss-Jordan elimination to reduced row-echelon form with an operation log.
pub fn row_reduce_mod2(m: &BinaryMatrix) -> RowReduction {
    let mut r = m.clone();
    let mut ops = Vec::new();
    let mut pivot_columns = Vec::new();
    let mut next = 0;
    for col in 0..m.cols {
        if next == r.rows.len() {
            break;
        }
        let Some(p) = (next..r.rows.len()).find(|&i| r.rows[i].get(col)) else {
            continue;
        };
        if p != next {
            r.apply(RowOp::Swap(p, next));
            ops.push(RowOp::Swap(p, next));
        }
        for i in 0..r.rows.len() {
            if i != next && r.rows[i].get(col) {
                let op = RowOp::Add { from: next, to: i };
                r.apply(op);
                ops.push(op);
            }
        }
        pivot_columns.push(col);
        next += 1;
    }
    RowReduction { reduced: r, ops, rank: next, pivot_columns }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Solution {
    pub particular: BitVec,
    pub null_basis: Vec<BitVec>,
}

/// Solve `A x = b`. Returns `Ok(None)` for an inconsistent system.
pub fn solve_gf2(a: &BinaryMatrix, b: &BitVec) -> Result<Option<Gf2Solution>, Gf2Error> {
    if a.n_rows() != b.len() {
        return Err(Gf2Error::Dimension(format!("{} rows vs right-hand side of length {}", a.n_rows(), b.len())));
    }
    let cols = a.n_cols();
    let aug_rows = a
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.extended(1);
            row.set(cols, b.get(i));
            row
        })
        .collect();
    let red = row_reduce_mod2(&BinaryMatrix::from_rows(cols + 1, aug_rows));
    if red.pivot_columns.last() == Some(&cols) {
        return Ok(None);
    }
    let mut particular = BitVec::zeros(cols);
    for (i, &pc) in red.pivot_columns.iter().enumerate() {
        if red.reduced.get(i, cols) {
            particular.set(pc, true);
        }
    }
    let null_basis = null_from_rref(&red.reduced, &red.pivot_columns, cols);
    Ok(Some(Gf2Solution { particular, null_basis }))
}

/// Basis of `{ x : A x = 0 }`.
pub fn nullspace(a: &BinaryMatrix) -> Vec<BitVec> {
    let red = row_reduce_mod2(a);
    null_from_rref(&red.reduced, &red.pivot_columns, a.n_cols())
}

fn null_from_rref(reduced: &BinaryMatrix, pivots: &[usize], cols: usize) -> Vec<BitVec> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::unit(cols, f);
            for (i, &pc) in pivots.iter().enumerate() {
                if reduced.get(i, f) {
                    v.set(pc, true);
                }
            }
            v
        })
        .collect()
}

/// Incrementally built basis that remembers how each reduced vector was
/// assembled from the inserted vectors.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    inserted: usize,
    // (pivot bit, reduced vector, combination of inserted indices)
    rows: Vec<(usize, BitVec, Vec<usize>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis { dim, inserted: 0, rows: Vec::new() }
    }

    pub fn from_vectors<'a>(dim: usize, vs: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut b = SpanBasis::new(dim);
        for v in vs {
            b.insert(v);
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v`; returns the residual and the inserted indices whose sum
    /// was removed (sorted ascending).
    pub fn reduce(&self, v: &BitVec) -> (BitVec, Vec<usize>) {
        debug_assert_eq!(v.len(), self.dim);
        let mut r = v.clone();
        let mut combo = BitVec::zeros(self.inserted.max(1));
        for (p, row, c) in &self.rows {
            if r.get(*p) {
                r.xor_assign(row);
                for &i in c {
                    combo.flip(i);
                }
            }
        }
        let combo = if self.inserted == 0 { Vec::new() } else { combo.iter_ones().collect() };
        (r, combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Insert the next vector (it receives the next insertion index).
    /// Returns whether it was independent of the previous ones.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (mut r, combo) = self.reduce(v);
        let Some(p) = r.first_one() else {
            return false;
        };
        let mut c = combo;
        c.push(idx);
        // keep rows fully reduced on pivot bits so reduce() is order-independent
        for (_, row, rc) in self.rows.iter_mut() {
            if row.get(p) {
                row.xor_assign(&r);
                let mut set: std::collections::BTreeSet<usize> = rc.iter().copied().collect();
                for &i in &c {
                    if !set.remove(&i) {
                        set.insert(i);
                    }
                }
                *rc = set.into_iter().collect();
            }
        }
        r.set(p, true);
        self.rows.push((p, r, c));
        true
    }
}

/// Result of [`in_span`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanMembership {
    /// Membership of the unsigned operator in the GF(2) span.
    pub member: bool,
    /// Indices of basis elements whose product matches the candidate up to phase.
    pub combination: Option<Vec<usize>>,
    /// With sign tracking: whether the ordered product equals the candidate exactly.
    pub sign_matches: Option<bool>,
}

/// Decide whether `candidate` lies in the group generated by `basis`.
///
/// The combination is multiplied in ascending index order when `track_sign`
/// is set; for a commuting basis the order is irrelevant.
pub fn in_span(candidate: &PauliOperator, basis: &[PauliOperator], track_sign: bool) -> SpanMembership {
    let n = candidate.n();
    let vecs: Vec<BitVec> = basis.iter().map(PauliOperator::symplectic).collect();
    let span = SpanBasis::from_vectors(2 * n, &vecs);
    let (res, combo) = span.reduce(&candidate.symplectic());
    if !res.is_zero() {
        return SpanMembership { member: false, combination: None, sign_matches: None };
    }
    let sign_matches = track_sign.then(|| {
        let prod = PauliOperator::product(n, combo.iter().map(|&i| &basis[i]));
        prod.phase() == candidate.phase()
    });
    SpanMembership { member: true, combination: Some(combo), sign_matches }
}
