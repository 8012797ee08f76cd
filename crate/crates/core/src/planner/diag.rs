//! Connectivity matrix and its diagonalization by generator replacements.

use crate::bits::BitVec;
use crate::gf2::{row_reduce_mod2, solve_gf2, BinaryMatrix, RowOp, SpanBasis};
use crate::pauli::PauliOperator;

use super::PlanError;

/// Which side a logged operation acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenOp {
    Source(RowOp),
    Target(RowOp),
}

/// Generator list that logs every elementary operation applied to it.
#[derive(Debug, Clone)]
pub(crate) struct GenList {
    pub ops: Vec<PauliOperator>,
}

impl GenList {
    /// `g_to <- g_to * g_from`.
    pub fn apply(&mut self, op: RowOp) {
        match op {
            RowOp::Swap(a, b) => self.ops.swap(a, b),
            RowOp::Add { from, to } => {
                let f = self.ops[from].clone();
                self.ops[to] = self.ops[to].mul_unchecked(&f);
            }
        }
    }

    /// Replace the list by `T * list` for an invertible `T`, returning the
    /// elementary operations used.
    pub fn transform(&mut self, t: &BinaryMatrix) -> Vec<RowOp> {
        let red = row_reduce_mod2(t);
        assert_eq!(red.rank, t.n_rows(), "basis change must be invertible");
        let ops: Vec<RowOp> = red.ops.iter().rev().copied().collect();
        for &op in &ops {
            self.apply(op);
        }
        ops
    }
}

/// `M[i][j] = 1` iff `source[i]` anticommutes with `target[j]`.
pub fn connectivity_matrix(source: &[PauliOperator], target: &[PauliOperator]) -> Result<BinaryMatrix, PlanError> {
    if source.len() != target.len() {
        return Err(PlanError::SizeMismatch(format!(
            "{} source generators vs {} target generators",
            source.len(),
            target.len()
        )));
    }
    let n = source.first().or(target.first()).map_or(0, PauliOperator::n);
    if source.iter().chain(target).any(|g| g.n() != n) {
        return Err(PlanError::SizeMismatch("generators act on different qubit counts".into()));
    }
    let rows = source
        .iter()
        .map(|g| BitVec::from_bools(&target.iter().map(|h| g.anticommutes(h)).collect::<Vec<_>>()))
        .collect();
    Ok(BinaryMatrix::from_rows(target.len(), rows))
}

/// Output of [`diagonalize`].
#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// Transformed source generators; slot `i` keeps its position.
    pub source: Vec<PauliOperator>,
    /// Transformed target generators, permuted so that `matrix` is diagonal.
    pub target: Vec<PauliOperator>,
    pub matrix: BinaryMatrix,
    pub op_log: Vec<GenOp>,
    /// `(slot, original target index)` for each diagonal one.
    pub pairs: Vec<(usize, usize)>,
    /// Original target index held at each position of `target`.
    pub target_origin: Vec<usize>,
}

/// Largest null space enumerated when minimizing a row combination.
const COMBO_LIMIT: usize = 20;

/// Pick independent pivot columns: preferred indices first (in index order),
/// then by ascending generator weight and index.
fn pivot_columns(m: &BinaryMatrix, target: &[PauliOperator], preferred: &[usize]) -> Vec<usize> {
    let mt = m.transpose();
    let mut order: Vec<usize> = Vec::new();
    let mut pref: Vec<usize> = preferred.iter().copied().filter(|&j| j < target.len()).collect();
    pref.sort_unstable();
    pref.dedup();
    order.extend(&pref);
    let mut rest: Vec<usize> = (0..target.len()).filter(|j| !pref.contains(j)).collect();
    rest.sort_by_key(|&j| (target[j].weight(), j));
    order.extend(rest);
    let mut basis = SpanBasis::new(m.n_rows());
    let mut pivots: Vec<usize> = order.into_iter().filter(|&j| !mt.row(j).is_zero() && basis.insert(mt.row(j))).collect();
    pivots.sort_unstable();
    pivots
}

/// Smallest combination of rows whose restriction to the pivot columns is the
/// unit vector of pivot `k`; ties prefer combinations using later rows.
fn min_combination(restricted: &BinaryMatrix, k: usize) -> BitVec {
    let a = restricted.transpose();
    let target = BitVec::unit(restricted.n_cols(), k);
    let sol = solve_gf2(&a, &target).expect("dimensions agree").expect("pivot columns are independent");
    let prefer = |c: &BitVec, best: &BitVec| {
        let (wc, wb) = (c.count_ones(), best.count_ones());
        wc < wb || (wc == wb && later_first(c, best))
    };
    let mut best = sol.particular.clone();
    if sol.null_basis.len() <= COMBO_LIMIT {
        let mut cur = sol.particular.clone();
        for step in 1u64..(1u64 << sol.null_basis.len()) {
            cur.xor_assign(&sol.null_basis[step.trailing_zeros() as usize]);
            if prefer(&cur, &best) {
                best = cur.clone();
            }
        }
    } else {
        // greedy descent; exact minimization is out of reach here
        loop {
            let improved = sol.null_basis.iter().map(|b| best.xor(b)).find(|c| prefer(c, &best));
            match improved {
                Some(c) => best = c,
                None => break,
            }
        }
    }
    best
}

/// True when `a` beats `b` reading the highest index as most significant.
fn later_first(a: &BitVec, b: &BitVec) -> bool {
    for i in (0..a.len()).rev() {
        match (a.get(i), b.get(i)) {
            (true, false) => return true,
            (false, true) => return false,
            _ => {}
        }
    }
    false
}

/// Distinct slots, one inside each combination's support, for which the
/// combinations restricted to the slots are invertible. Later indices first.
fn assign_slots(combos: &[BitVec]) -> Option<Vec<usize>> {
    fn go(combos: &[BitVec], k: usize, used: &mut Vec<usize>, budget: &mut usize) -> bool {
        if k == combos.len() {
            let rows: Vec<BitVec> = combos
                .iter()
                .map(|c| BitVec::from_bools(&used.iter().map(|&s| c.get(s)).collect::<Vec<_>>()))
                .collect();
            return BinaryMatrix::from_rows(used.len(), rows).rank() == used.len();
        }
        let mut support: Vec<usize> = combos[k].iter_ones().collect();
        support.reverse();
        for s in support {
            if used.contains(&s) {
                continue;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            used.push(s);
            if go(combos, k + 1, used, budget) {
                return true;
            }
            used.pop();
        }
        false
    }
    let mut used = Vec::new();
    let mut budget = 100_000;
    go(combos, 0, &mut used, &mut budget).then_some(used)
}

/// Diagonalize the connectivity matrix by multiplying source generators
/// together (rows) and target generators together (columns).
///
/// Target generators chosen as pivots are never modified; `preferred`
/// lists target indices to try first when choosing them.
pub fn diagonalize(
    source: &[PauliOperator],
    target: &[PauliOperator],
    preferred: &[usize],
) -> Result<Diagonalization, PlanError> {
    let m = connectivity_matrix(source, target)?;
    let size = source.len();
    let pivots = pivot_columns(&m, target, preferred);
    let restricted = m.select_columns(&pivots);
    let combos: Vec<BitVec> = (0..pivots.len()).map(|k| min_combination(&restricted, k)).collect();
    let slots = match assign_slots(&combos) {
        Some(s) => s,
        None => {
            // fall back to an elimination-based choice of slots
            let red = row_reduce_mod2(&BinaryMatrix::from_rows(size, combos.clone()).transpose());
            let cols: Vec<usize> = red.pivot_columns.clone();
            assign_slots_exact(&combos, &cols).ok_or_else(|| PlanError::Internal("no invertible slot assignment".into()))?
        }
    };

    // new source rows as combinations of the original rows
    let mut source_rows = vec![BitVec::zeros(size); size];
    for (k, &s) in slots.iter().enumerate() {
        source_rows[s] = combos[k].clone();
    }
    for r in 0..size {
        if slots.contains(&r) {
            continue;
        }
        let mut row = BitVec::unit(size, r);
        for (k, _) in pivots.iter().enumerate() {
            if restricted.get(r, k) {
                row.xor_assign(&combos[k]);
            }
        }
        source_rows[r] = row;
    }

    // target: clear non-pivot columns using the pivot columns, then reorder
    let combo_rows: Vec<BitVec> = combos.iter().map(|c| m.left_mul_vec(c)).collect();
    let kernel_cols: Vec<usize> = (0..size).filter(|j| !pivots.contains(j)).collect();
    let mut origin = vec![usize::MAX; size];
    for (k, &s) in slots.iter().enumerate() {
        origin[s] = pivots[k];
    }
    let mut free_positions = (0..size).filter(|i| !slots.contains(i));
    let mut target_rows = vec![BitVec::zeros(size); size];
    for (k, &s) in slots.iter().enumerate() {
        target_rows[s] = BitVec::unit(size, pivots[k]);
    }
    for &q in &kernel_cols {
        let pos = free_positions.next().expect("kernel count matches");
        origin[pos] = q;
        let mut row = BitVec::unit(size, q);
        for (k, &p) in pivots.iter().enumerate() {
            if combo_rows[k].get(q) {
                row.set(p, !row.get(p));
            }
        }
        target_rows[pos] = row;
    }

    let mut src = GenList { ops: source.to_vec() };
    let mut tgt = GenList { ops: target.to_vec() };
    let mut op_log: Vec<GenOp> = src.transform(&BinaryMatrix::from_rows(size, source_rows)).into_iter().map(GenOp::Source).collect();
    op_log.extend(tgt.transform(&BinaryMatrix::from_rows(size, target_rows)).into_iter().map(GenOp::Target));
    let matrix = connectivity_matrix(&src.ops, &tgt.ops)?;
    for i in 0..size {
        for j in 0..size {
            if i != j && matrix.get(i, j) {
                return Err(PlanError::Internal(format!("diagonalization left an entry at ({i}, {j})")));
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = slots.iter().zip(&pivots).map(|(&s, &p)| (s, p)).collect();
    pairs.sort_by_key(|&(_, p)| p);
    Ok(Diagonalization { source: src.ops, target: tgt.ops, matrix, op_log, pairs, target_origin: origin })
}

fn assign_slots_exact(combos: &[BitVec], cols: &[usize]) -> Option<Vec<usize>> {
    // perfect matching between combinations and an invertible column set
    fn go(combos: &[BitVec], cols: &[usize], k: usize, used: &mut Vec<usize>) -> bool {
        if k == combos.len() {
            return true;
        }
        for &c in cols.iter().rev() {
            if combos[k].get(c) && !used.contains(&c) {
                used.push(c);
                if go(combos, cols, k + 1, used) {
                    return true;
                }
                used.pop();
            }
        }
        false
    }
    let mut used = Vec::new();
    go(combos, cols, 0, &mut used).then_some(used)
}

/// Replay a logged operation sequence on the original generator lists.
pub fn replay(source: &[PauliOperator], target: &[PauliOperator], log: &[GenOp]) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    let mut src = GenList { ops: source.to_vec() };
    let mut tgt = GenList { ops: target.to_vec() };
    for op in log {
        match op {
            GenOp::Source(o) => src.apply(*o),
            GenOp::Target(o) => tgt.apply(*o),
        }
    }
    (src.ops, tgt.ops)
}
