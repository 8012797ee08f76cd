//! Breadth-first search for plans whose measurements come from a fixed set.

use std::collections::HashSet;

use crate::bits::BitVec;
use crate::code::StabilizerCode;
use crate::gf2::{in_span, row_reduce_mod2, BinaryMatrix, SpanBasis};
use crate::pauli::PauliOperator;
use crate::search::Parallelism;

use super::diag::GenList;
use super::plan::{pad_to_match, MeasurementStep, RewirePlan};
use super::PlanError;

/// Measurable operators and the maximum plan length explored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    pub allowed: Vec<PauliOperator>,
    pub depth_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(RewirePlan),
    /// Some target generator is outside the span of the allowed operators
    /// and the source generators, so no plan exists at any depth.
    NecessaryConditionFails,
    NotFoundWithinBound,
}

/// Exhaustive search applies when `n <= MAX_QUBITS` or `|W| <= MAX_ALLOWED`.
pub const MAX_QUBITS: usize = 10;
pub const MAX_ALLOWED: usize = 16;

type Fingerprint = Vec<(Vec<u64>, u8)>;

/// Signed reduced row-echelon form of the generated group.
fn fingerprint(gens: &[PauliOperator]) -> Fingerprint {
    let n = gens.first().map_or(0, PauliOperator::n);
    let m = BinaryMatrix::from_rows(2 * n, gens.iter().map(PauliOperator::symplectic).collect());
    let red = row_reduce_mod2(&m);
    let mut list = GenList { ops: gens.to_vec() };
    for &op in &red.ops {
        list.apply(op);
    }
    list.ops.iter().map(|g| (g.symplectic().words().to_vec(), g.phase())).collect()
}

/// Replace the first generator anticommuting with `w`, after multiplying
/// the other anticommuting generators by it. Returns the new list and the
/// replaced generator.
fn measure_step(gens: &[PauliOperator], w: &PauliOperator) -> Option<(Vec<PauliOperator>, PauliOperator)> {
    let first = gens.iter().position(|g| g.anticommutes(w))?;
    let pivot = gens[first].clone();
    let mut next: Vec<PauliOperator> = gens
        .iter()
        .enumerate()
        .map(|(j, g)| if j != first && g.anticommutes(w) { g.mul_unchecked(&pivot) } else { g.clone() })
        .collect();
    next[first] = w.clone();
    Some((next, pivot))
}

/// Search for a plan from `source` to `target` using only measurements from
/// `constraints.allowed` (either sign), up to `constraints.depth_bound` steps.
pub fn constrained_path_search(
    source: &StabilizerCode,
    target: &StabilizerCode,
    constraints: &ConstraintSet,
    par: Parallelism,
) -> Result<SearchOutcome, PlanError> {
    let (source, target) = pad_to_match(source, target);
    let n = source.n();
    if n > MAX_QUBITS && constraints.allowed.len() > MAX_ALLOWED {
        return Err(PlanError::Guard(format!("n={n} and |W|={}", constraints.allowed.len())));
    }
    if source.k() != target.k() {
        return Err(PlanError::LogicalMismatch(source.k(), target.k()));
    }
    let mut allowed = Vec::new();
    for w in &constraints.allowed {
        if w.n() > n {
            return Err(PlanError::SizeMismatch(format!("allowed operator {w} acts on {} qubits", w.n())));
        }
        let w = w.padded(n - w.n());
        if !w.is_hermitian() {
            return Err(PlanError::Internal(format!("allowed operator {w} is not Hermitian")));
        }
        allowed.push(w);
    }

    let reach = SpanBasis::from_vectors(
        2 * n,
        allowed.iter().chain(source.generators()).map(PauliOperator::symplectic).collect::<Vec<BitVec>>().iter(),
    );
    if !target.generators().iter().all(|g| reach.contains(&g.symplectic())) {
        return Ok(SearchOutcome::NecessaryConditionFails);
    }

    let goal = fingerprint(target.generators());
    let start = source.generators().to_vec();
    let finish = |path: Vec<(PauliOperator, PauliOperator)>| {
        let mut codes = vec![source.clone()];
        let mut cur = start.clone();
        let mut steps = Vec::new();
        for (w, _) in path {
            let (next, old) = measure_step(&cur, &w).expect("path steps anticommute");
            steps.push(MeasurementStep { measure: w, correction: old });
            codes.push(StabilizerCode::new(n, next.clone(), format!("{}@{}", source.label(), codes.len())));
            cur = next;
        }
        // the last list generates the target group; present it as the target
        if let Some(last) = codes.last_mut() {
            if !steps.is_empty() {
                *last = last.clone().with_label(target.label());
            }
        }
        SearchOutcome::Found(RewirePlan {
            from_label: source.label().to_string(),
            to_label: target.label().to_string(),
            steps,
            intermediate_codes: codes,
        })
    };
    if fingerprint(&start) == goal {
        return Ok(finish(Vec::new()));
    }

    let moves: Vec<PauliOperator> = allowed.iter().flat_map(|w| [w.clone(), w.negated()]).collect();
    let mut visited: HashSet<Fingerprint> = HashSet::from([fingerprint(&start)]);
    let mut frontier: Vec<(Vec<PauliOperator>, Vec<(PauliOperator, PauliOperator)>)> = vec![(start.clone(), Vec::new())];
    for _ in 0..constraints.depth_bound {
        let expand = |(gens, path): &(Vec<PauliOperator>, Vec<(PauliOperator, PauliOperator)>)| {
            moves
                .iter()
                .filter_map(|w| {
                    let (next, old) = measure_step(gens, w)?;
                    let mut p = path.clone();
                    p.push((w.clone(), old));
                    Some((fingerprint(&next), next, p))
                })
                .collect::<Vec<_>>()
        };
        let children: Vec<Vec<_>> = match par {
            #[cfg(feature = "parallel")]
            Parallelism::Parallel => {
                use rayon::prelude::*;
                frontier.par_iter().map(expand).collect()
            }
            _ => frontier.iter().map(expand).collect(),
        };
        let mut next_frontier = Vec::new();
        for (fp, gens, path) in children.into_iter().flatten() {
            if !visited.insert(fp.clone()) {
                continue;
            }
            if fp == goal {
                return Ok(finish(path));
            }
            next_frontier.push((gens, path));
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    Ok(SearchOutcome::NotFoundWithinBound)
}

/// Group-level check that `after` arises from `before` by measuring
/// `step.measure` and correcting with `step.correction`.
pub(crate) fn adjacent(before: &StabilizerCode, after: &StabilizerCode, step: &MeasurementStep) -> bool {
    let gens = before.generators();
    if !step.measure.anticommutes(&step.correction) {
        return false;
    }
    let mem = in_span(&step.correction, gens, true);
    if mem.sign_matches != Some(true) {
        return false;
    }
    let Some((next, _)) = measure_step(gens, &step.measure) else {
        return false;
    };
    fingerprint(&next) == fingerprint(after.generators())
}
