//! Sorting transformed generators into the shared (A), mutually logical (B)
//! and anticommuting (C) blocks, and synthesizing complementary operators.

use crate::bits::BitVec;
use crate::code::StabilizerCode;
use crate::gf2::{in_span, BinaryMatrix, RowOp, SpanBasis};
use crate::pauli::PauliOperator;
use crate::search::{min_weight_with_syndrome, Parallelism};

use super::diag::{diagonalize, GenList, GenOp};
use super::PlanError;

/// A generator paired with its complementary operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementPair {
    pub slot: usize,
    pub generator: PauliOperator,
    pub complement: PauliOperator,
}

/// Anticommuting source/target pair occupying one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticommutingPair {
    pub slot: usize,
    pub source: PauliOperator,
    pub target: PauliOperator,
    /// Index of `target` in the original target generator list.
    pub target_index: usize,
}

#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub n: usize,
    /// Transformed source generators; slot `i` is `source_generators[i]`.
    pub source_generators: Vec<PauliOperator>,
    /// Transformed target generators aligned slot by slot with the source.
    pub target_generators: Vec<PauliOperator>,
    pub block_a: Vec<(usize, PauliOperator)>,
    pub block_b: Vec<ComplementPair>,
    pub block_b_target: Vec<ComplementPair>,
    pub block_c: Vec<AnticommutingPair>,
    pub op_log: Vec<GenOp>,
}

impl BlockDecomposition {
    pub fn a(&self) -> usize {
        self.block_a.len()
    }

    pub fn b(&self) -> usize {
        self.block_b.len()
    }

    pub fn c(&self) -> usize {
        self.block_c.len()
    }

    /// Product of the two complements for each B slot, normalized to sign +.
    pub fn complement_products(&self) -> Vec<PauliOperator> {
        self.block_b
            .iter()
            .zip(&self.block_b_target)
            .map(|(s, t)| s.complement.mul_unchecked(&t.complement).unsigned())
            .collect()
    }
}

/// Options controlling the decomposition.
#[derive(Debug, Clone, Default)]
pub struct DecomposeOptions {
    /// Target generator indices to prefer as diagonal pivots.
    pub preferred_pivots: Vec<usize>,
    pub parallelism: Parallelism,
}

struct Sides {
    src: GenList,
    tgt: GenList,
    log: Vec<GenOp>,
}

impl Sides {
    fn source_add(&mut self, from: usize, to: usize) {
        let op = RowOp::Add { from, to };
        self.src.apply(op);
        self.log.push(GenOp::Source(op));
    }
}

/// Split kernel slots into those whose generator lies in `other`'s span (A)
/// and the rest (B). A generator may be multiplied by earlier B generators to
/// land in the span; those multiplications are returned.
fn split_shared(list: &[PauliOperator], kernel: &[usize], other: &[PauliOperator]) -> (Vec<usize>, Vec<usize>, Vec<RowOp>) {
    let n = list.first().map_or(0, PauliOperator::n);
    let other_span = SpanBasis::from_vectors(2 * n, other.iter().map(PauliOperator::symplectic).collect::<Vec<_>>().iter());
    let mut residuals = SpanBasis::new(2 * n);
    let (mut a, mut b, mut ops) = (Vec::new(), Vec::new(), Vec::new());
    for &slot in kernel {
        let (res, _) = other_span.reduce(&list[slot].symplectic());
        let (rest, combo) = residuals.reduce(&res);
        if rest.is_zero() {
            ops.extend(combo.iter().map(|&i| RowOp::Add { from: b[i], to: slot }));
            a.push(slot);
        } else {
            residuals.insert(&res);
            b.push(slot);
        }
    }
    (a, b, ops)
}

fn syndrome(op: &PauliOperator, against: &[PauliOperator]) -> BitVec {
    BitVec::from_bools(&against.iter().map(|g| op.anticommutes(g)).collect::<Vec<_>>())
}

/// Decompose the pair of generator lists into blocks A, B and C.
///
/// Both codes must act on the same number of qubits and encode the same
/// number of logical qubits.
pub fn decompose_blocks(
    source: &StabilizerCode,
    target: &StabilizerCode,
    options: &DecomposeOptions,
) -> Result<BlockDecomposition, PlanError> {
    if source.n() != target.n() {
        return Err(PlanError::SizeMismatch(format!("{} vs {} qubits; pad the shorter code first", source.n(), target.n())));
    }
    if source.k() != target.k() {
        return Err(PlanError::LogicalMismatch(source.k(), target.k()));
    }
    for code in [source, target] {
        let report = code.validate();
        if !report.is_valid() {
            return Err(PlanError::Code(crate::code::CodeError::Invalid(report)));
        }
    }
    let n = source.n();
    let diag = diagonalize(source.generators(), target.generators(), &options.preferred_pivots)?;
    let size = diag.source.len();
    let mut sides = Sides {
        src: GenList { ops: diag.source.clone() },
        tgt: GenList { ops: diag.target.clone() },
        log: diag.op_log.clone(),
    };
    let c_slots: Vec<usize> = (0..size).filter(|&i| diag.matrix.get(i, i)).collect();
    let kernel: Vec<usize> = (0..size).filter(|&i| !diag.matrix.get(i, i)).collect();

    // shared generators first, on both sides
    let (a_src, b_src, ops) = split_shared(&sides.src.ops, &kernel, &sides.tgt.ops);
    for op in ops {
        sides.src.apply(op);
        sides.log.push(GenOp::Source(op));
    }
    let (a_tgt, b_tgt, ops) = split_shared(&sides.tgt.ops, &kernel, &sides.src.ops);
    for op in ops {
        sides.tgt.apply(op);
        sides.log.push(GenOp::Target(op));
    }
    if a_src.len() != a_tgt.len() {
        return Err(PlanError::Internal("shared blocks have different sizes".into()));
    }

    // re-express the target so that shared slots hold the source elements
    // and B' generators sit at the source B slots
    let mut t_rows = vec![BitVec::zeros(size); size];
    for &s in &c_slots {
        t_rows[s] = BitVec::unit(size, s);
    }
    for (&s, &t) in b_src.iter().zip(&b_tgt) {
        t_rows[s] = BitVec::unit(size, t);
    }
    for &s in &a_src {
        let g = &sides.src.ops[s];
        let m = in_span(g, &sides.tgt.ops, true);
        let combo = m.combination.ok_or_else(|| PlanError::Internal("shared generator left the target span".into()))?;
        if m.sign_matches != Some(true) {
            return Err(PlanError::SignConflict(g.to_string()));
        }
        t_rows[s] = BitVec::from_indices(size, combo);
    }
    let ops = sides.tgt.transform(&BinaryMatrix::from_rows(size, t_rows));
    sides.log.extend(ops.into_iter().map(GenOp::Target));
    debug_assert!(a_src.iter().all(|&s| sides.src.ops[s] == sides.tgt.ops[s]));

    // complements on the source side, with the two fix-up rules
    let b_slots = b_src;
    let mut complements: Vec<PauliOperator> = Vec::with_capacity(b_slots.len());
    for (j, &slot) in b_slots.iter().enumerate() {
        let mut constraints = vec![sides.src.ops[slot].clone()];
        constraints.extend(sides.tgt.ops.iter().cloned());
        let want = BitVec::unit(constraints.len(), 0);
        let mut comp = min_weight_with_syndrome(&constraints, n, &want, options.parallelism)
            .ok_or_else(|| PlanError::Internal("no complementary operator exists".into()))?;
        for (k, &other) in b_slots[..j].iter().enumerate() {
            if comp.anticommutes(&complements[k]) {
                comp = comp.mul_unchecked(&sides.src.ops[other]).unsigned();
            }
        }
        for i in 0..size {
            if i != slot && !a_src.contains(&i) && comp.anticommutes(&sides.src.ops[i]) {
                sides.source_add(slot, i);
            }
        }
        complements.push(comp);
    }

    // target complements: pick the one making the measured product lightest
    let mut target_complements = Vec::with_capacity(b_slots.len());
    for (j, &slot) in b_slots.iter().enumerate() {
        let mut constraints: Vec<PauliOperator> = sides.src.ops.clone();
        constraints.extend(sides.tgt.ops.iter().cloned());
        let mut want = syndrome(&complements[j], &constraints);
        want.flip(size + slot);
        let p = min_weight_with_syndrome(&constraints, n, &want, options.parallelism)
            .ok_or_else(|| PlanError::Internal("no target complementary operator exists".into()))?;
        target_complements.push(p.mul_unchecked(&complements[j]).unsigned());
    }

    let source_generators = sides.src.ops;
    let target_generators = sides.tgt.ops;
    let block_a = a_src.iter().map(|&s| (s, source_generators[s].clone())).collect();
    let block_b = b_slots
        .iter()
        .zip(&complements)
        .map(|(&s, c)| ComplementPair { slot: s, generator: source_generators[s].clone(), complement: c.clone() })
        .collect();
    let block_b_target = b_slots
        .iter()
        .zip(&target_complements)
        .map(|(&s, c)| ComplementPair { slot: s, generator: target_generators[s].clone(), complement: c.clone() })
        .collect();
    let block_c = c_slots
        .iter()
        .map(|&s| AnticommutingPair {
            slot: s,
            source: source_generators[s].clone(),
            target: target_generators[s].clone(),
            target_index: diag.target_origin[s],
        })
        .collect();
    Ok(BlockDecomposition {
        n,
        source_generators,
        target_generators,
        block_a,
        block_b,
        block_b_target,
        block_c,
        op_log: sides.log,
    })
}

/// Flip target generator signs so that every element shared by both groups
/// carries the same sign in each. Returns `None` when both sign choices are
/// forced inconsistently (never for generic inputs, since the constraints
/// are on independent combinations).
pub fn align_shared_signs(source: &StabilizerCode, target: &StabilizerCode) -> Option<StabilizerCode> {
    let n = source.n();
    let m = target.generators().len();
    let src_span = SpanBasis::from_vectors(2 * n, source.generators().iter().map(PauliOperator::symplectic).collect::<Vec<_>>().iter());
    // the intersection: target combinations that land in the source span
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let tgt_vecs: Vec<BitVec> = target.generators().iter().map(PauliOperator::symplectic).collect();
    let tgt_span_basis = crate::gf2::nullspace(&BinaryMatrix::from_rows(
        m,
        // columns are target generators; rows are the residual coordinates mod the source span
        {
            let residuals: Vec<BitVec> = tgt_vecs.iter().map(|v| src_span.reduce(v).0).collect();
            (0..2 * n)
                .map(|bit| BitVec::from_bools(&residuals.iter().map(|r| r.get(bit)).collect::<Vec<_>>()))
                .collect()
        },
    ));
    for combo in tgt_span_basis {
        let prod = PauliOperator::product(n, combo.iter_ones().map(|i| &target.generators()[i]));
        let mem = in_span(&prod, source.generators(), true);
        rows.push(combo);
        rhs.push(mem.sign_matches == Some(false));
    }
    if rows.is_empty() {
        return Some(target.clone());
    }
    let sol = crate::gf2::solve_gf2(&BinaryMatrix::from_rows(m, rows), &BitVec::from_bools(&rhs)).ok()??;
    let gens = target
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| if sol.particular.get(i) { g.negated() } else { g.clone() })
        .collect();
    Some(target.with_generators(gens))
}
