//! Minimum-weight Pauli search shared by complement synthesis and distance
//! computation.
//!
//! Two exact strategies produce the same answer (minimum weight, ties broken
//! by the dense string with `I < X < Y < Z`):
//! * weight-ordered enumeration of supports with per-qubit syndrome tables,
//! * exhaustive enumeration of a small affine solution space.

use std::cmp::Ordering;

use crate::bits::BitVec;
use crate::code::commutation_rows;
use crate::gf2::solve_gf2;
use crate::pauli::{Pauli, PauliOperator};

/// Execution strategy for the bulk scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled.
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

/// Largest affine solution space enumerated exhaustively.
pub const COSET_LIMIT: usize = 18;

const LETTERS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// Per-qubit anticommutation patterns against a list of constraint operators.
pub struct SyndromeTable {
    n: usize,
    words: usize,
    table: Vec<u64>,
}

impl SyndromeTable {
    pub fn new(n: usize, constraints: &[PauliOperator]) -> Self {
        let words = constraints.len().div_ceil(64).max(1);
        let mut table = vec![0u64; n * 3 * words];
        for (c, op) in constraints.iter().enumerate() {
            for q in 0..n {
                for (li, &p) in LETTERS.iter().enumerate() {
                    if anticommutes_single(op.get(q), p) {
                        table[(q * 3 + li) * words + c / 64] |= 1u64 << (c % 64);
                    }
                }
            }
        }
        SyndromeTable { n, words, table }
    }

    #[inline]
    fn entry(&self, q: usize, letter: usize) -> &[u64] {
        let start = (q * 3 + letter) * self.words;
        &self.table[start..start + self.words]
    }

    pub fn encode(&self, bits: &BitVec) -> Vec<u64> {
        let mut v = vec![0u64; self.words];
        for i in bits.iter_ones() {
            v[i / 64] |= 1u64 << (i % 64);
        }
        v
    }
}

fn anticommutes_single(a: Pauli, b: Pauli) -> bool {
    a != Pauli::I && b != Pauli::I && a != b
}

/// `a` precedes `b` in the tie-break order (weight, then dense string).
pub fn better(a: &PauliOperator, b: &PauliOperator) -> bool {
    match a.weight().cmp(&b.weight()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.lex_cmp(b) == Ordering::Less,
    }
}

fn pick(a: Option<PauliOperator>, b: Option<PauliOperator>) -> Option<PauliOperator> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

struct Dfs<'a, F> {
    table: &'a SyndromeTable,
    target: &'a [u64],
    accept: &'a F,
    weight: usize,
    letters: Vec<(usize, usize)>,
    best: Option<PauliOperator>,
}

impl<F: Fn(&PauliOperator) -> bool> Dfs<'_, F> {
    fn run(&mut self, start: usize, acc: &mut [u64]) {
        if self.letters.len() == self.weight {
            if acc == self.target {
                let mut op = PauliOperator::identity(self.table.n);
                for &(q, l) in &self.letters {
                    op.set(q, LETTERS[l]);
                }
                if (self.accept)(&op) && self.best.as_ref().is_none_or(|b| better(&op, b)) {
                    self.best = Some(op);
                }
            }
            return;
        }
        let remaining = self.weight - self.letters.len();
        for q in start..=self.table.n - remaining {
            for l in 0..3 {
                xor_into(acc, self.table.entry(q, l));
                self.letters.push((q, l));
                self.run(q + 1, acc);
                self.letters.pop();
                xor_into(acc, self.table.entry(q, l));
            }
        }
    }
}

#[inline]
fn xor_into(acc: &mut [u64], v: &[u64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= *b;
    }
}

/// Best accepted operator of exactly `weight` whose syndrome equals `target`.
fn scan_weight<F>(table: &SyndromeTable, target: &[u64], weight: usize, accept: &F, par: Parallelism) -> Option<PauliOperator>
where
    F: Fn(&PauliOperator) -> bool + Sync,
{
    if weight == 0 {
        let id = PauliOperator::identity(table.n);
        return (target.iter().all(|&w| w == 0) && accept(&id)).then_some(id);
    }
    if weight > table.n {
        return None;
    }
    let first_qubit = |q: usize| -> Option<PauliOperator> {
        let mut best = None;
        for l in 0..3 {
            let mut acc = table.entry(q, l).to_vec();
            let mut dfs = Dfs { table, target, accept, weight, letters: vec![(q, l)], best: None };
            dfs.run(q + 1, &mut acc);
            best = pick(best, dfs.best);
        }
        best
    };
    let firsts = 0..=table.n - weight;
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            firsts.into_par_iter().map(first_qubit).reduce(|| None, pick)
        }
        _ => firsts.map(first_qubit).fold(None, pick),
    }
}

/// Weight-ordered search for the best operator with the given anticommutation
/// pattern against `constraints` that also satisfies `accept`.
pub fn search_by_weight<F>(
    constraints: &[PauliOperator],
    n: usize,
    target: &BitVec,
    max_weight: usize,
    accept: F,
    par: Parallelism,
) -> Option<PauliOperator>
where
    F: Fn(&PauliOperator) -> bool + Sync,
{
    let table = SyndromeTable::new(n, constraints);
    let target = table.encode(target);
    (0..=max_weight.min(n)).find_map(|w| scan_weight(&table, &target, w, &accept, par))
}

/// Exhaustive scan of the affine space `particular + span(null_basis)` of
/// symplectic vectors.
pub fn search_coset(particular: &BitVec, null_basis: &[BitVec], par: Parallelism) -> PauliOperator {
    let d = null_basis.len();
    assert!(d <= 40, "coset of dimension {d} is too large to enumerate");
    let chunk_bits = d.min(6);
    let chunks = 1usize << chunk_bits;
    let inner = d - chunk_bits;
    let scan_chunk = |c: usize| -> PauliOperator {
        let mut v = particular.clone();
        for (i, b) in null_basis[inner..].iter().enumerate() {
            if (c >> i) & 1 == 1 {
                v.xor_assign(b);
            }
        }
        let mut best = PauliOperator::from_symplectic(&v);
        // Gray code walk over the low `inner` basis vectors
        for step in 1u64..(1u64 << inner) {
            let flip = step.trailing_zeros() as usize;
            v.xor_assign(&null_basis[flip]);
            let cand = PauliOperator::from_symplectic(&v);
            if better(&cand, &best) {
                best = cand;
            }
        }
        best
    };
    let reduce = |a: PauliOperator, b: PauliOperator| if better(&b, &a) { b } else { a };
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            (0..chunks).into_par_iter().map(scan_chunk).reduce_with(reduce).expect("non-empty")
        }
        _ => (0..chunks).map(scan_chunk).reduce(reduce).expect("non-empty"),
    }
}

/// Minimum-weight operator (ties: lexicographically smallest) whose
/// anticommutation with `constraints[i]` equals `target[i]`.
/// Returns `None` when the system is inconsistent.
pub fn min_weight_with_syndrome(
    constraints: &[PauliOperator],
    n: usize,
    target: &BitVec,
    par: Parallelism,
) -> Option<PauliOperator> {
    if constraints.is_empty() {
        return Some(PauliOperator::identity(n));
    }
    let sol = solve_gf2(&commutation_rows(constraints), target).expect("dimensions agree")?;
    if sol.null_basis.len() <= COSET_LIMIT {
        Some(search_coset(&sol.particular, &sol.null_basis, par))
    } else {
        search_by_weight(constraints, n, target, n, |_| true, par)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s, None).unwrap()
    }

    #[test]
    fn both_strategies_agree_on_small_systems() {
        let cons = vec![p("ZZZ"), p("ZZI"), p("ZII"), p("IXX")];
        for pattern in 0..16u32 {
            let target = BitVec::from_bools(&(0..4).map(|i| pattern >> i & 1 == 1).collect::<Vec<_>>());
            let sol = solve_gf2(&commutation_rows(&cons), &target).unwrap();
            let by_weight = search_by_weight(&cons, 3, &target, 3, |_| true, Parallelism::Sequential);
            match sol {
                None => assert!(by_weight.is_none()),
                Some(s) => {
                    let coset = search_coset(&s.particular, &s.null_basis, Parallelism::Sequential);
                    assert_eq!(Some(coset.clone()), by_weight);
                    let par = search_coset(&s.particular, &s.null_basis, Parallelism::Parallel);
                    assert_eq!(coset, par);
                }
            }
        }
    }

    #[test]
    fn complement_of_three_qubit_example() {
        // anticommute with Z1Z2Z3, commute with Z1 and X2X3
        let cons = vec![p("ZZZ"), p("ZII"), p("IXX")];
        let target = BitVec::from_indices(3, [0]);
        let best = min_weight_with_syndrome(&cons, 3, &target, Parallelism::Sequential).unwrap();
        assert_eq!(best, p("IIX"));
    }

    #[test]
    fn weight_cap_is_respected() {
        let cons = vec![p("ZZZ")];
        let target = BitVec::from_indices(1, [0]);
        let r = search_by_weight(&cons, 3, &target, 0, |_| true, Parallelism::Sequential);
        assert!(r.is_none());
    }
}
