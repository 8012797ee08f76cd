//! Stabilizer-tableau simulation of measurement-based rewiring.

mod cat;
pub mod dense;
mod exec;

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::BitVec;
use crate::code::{commutation_rows, StabilizerCode};
use crate::gf2::{row_reduce_mod2, solve_gf2, BinaryMatrix};
use crate::pauli::{Pauli, PauliOperator};

pub use cat::{cat_state_measure, single_error_footprint, CatOutcome};
pub use exec::{
    apply_rewire_step, execute_all_branches, execute_plan, extract_logical_action, transport, transcript, verify_unitary_properties,
    Branch, LogicalAction, MeasurementRecord, PlanRun, UnitaryReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("operator {0} is not Hermitian")]
    NotHermitian(String),
    #[error("operator acts on {found} qubits, state has {expected}")]
    Size { expected: usize, found: usize },
    #[error("fixings are contradictory: {0}")]
    Contradictory(String),
    #[error("precondition violated before step {step}: {op} is not stabilized with +1")]
    Precondition { step: usize, op: String },
    #[error("operators {0} and {1} commute")]
    Commuting(String, String),
    #[error("cannot measure a weight-0 operator")]
    WeightZero,
    #[error("{0} is not in the span of the logical and stabilizer operators")]
    NotInSpan(String),
    #[error("{0}")]
    Code(String),
}

/// Where random measurement outcomes come from.
#[derive(Debug, Clone)]
pub struct OutcomeSource {
    rng: ChaCha8Rng,
    forced: VecDeque<bool>,
}

impl OutcomeSource {
    pub fn seeded(seed: u64) -> Self {
        OutcomeSource { rng: ChaCha8Rng::seed_from_u64(seed), forced: VecDeque::new() }
    }

    /// Random outcomes are taken from `forced` first (`true` means −1),
    /// then from the seeded generator.
    pub fn forced(outcomes: impl IntoIterator<Item = bool>, seed: u64) -> Self {
        OutcomeSource { rng: ChaCha8Rng::seed_from_u64(seed), forced: outcomes.into_iter().collect() }
    }

    pub fn push_forced(&mut self, minus: bool) {
        self.forced.push_back(minus);
    }

    fn next(&mut self) -> bool {
        self.forced.pop_front().unwrap_or_else(|| self.rng.gen_bool(0.5))
    }
}

/// Stabilizer state on `n` qubits: `n` commuting stabilizer rows and their
/// destabilizer partners.
#[derive(Debug, Clone)]
pub struct StabilizerState {
    n: usize,
    stabilizers: Vec<PauliOperator>,
    destabilizers: Vec<PauliOperator>,
    outcomes: OutcomeSource,
}

fn check_hermitian(p: &PauliOperator, n: usize) -> Result<(), SimError> {
    if p.n() != n {
        return Err(SimError::Size { expected: n, found: p.n() });
    }
    if !p.is_hermitian() {
        return Err(SimError::NotHermitian(p.to_string()));
    }
    Ok(())
}

impl StabilizerState {
    /// The all-zeros computational basis state.
    pub fn zero(n: usize, outcomes: OutcomeSource) -> Self {
        StabilizerState {
            n,
            stabilizers: (0..n).map(|q| PauliOperator::single(n, q, Pauli::Z)).collect(),
            destabilizers: (0..n).map(|q| PauliOperator::single(n, q, Pauli::X)).collect(),
            outcomes,
        }
    }

    /// State stabilized by `n` independent commuting operators.
    pub fn from_stabilizers(stabilizers: Vec<PauliOperator>, outcomes: OutcomeSource) -> Result<Self, SimError> {
        let n = stabilizers.first().map_or(0, PauliOperator::n);
        if stabilizers.len() != n {
            return Err(SimError::Code(format!("{} stabilizers for {n} qubits", stabilizers.len())));
        }
        let rows = commutation_rows(&stabilizers);
        let mut destabilizers: Vec<PauliOperator> = Vec::with_capacity(n);
        for i in 0..n {
            let sol = solve_gf2(&rows, &BitVec::unit(n, i))
                .expect("dimensions agree")
                .ok_or_else(|| SimError::Code("stabilizers are dependent".into()))?;
            let mut d = PauliOperator::from_symplectic(&sol.particular);
            for j in 0..i {
                if d.anticommutes(&destabilizers[j]) {
                    d = d.mul_unchecked(&stabilizers[j]).unsigned();
                }
            }
            destabilizers.push(d);
        }
        let s = StabilizerState { n, stabilizers, destabilizers, outcomes };
        s.debug_check();
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliOperator] {
        &self.destabilizers
    }

    pub fn outcomes_mut(&mut self) -> &mut OutcomeSource {
        &mut self.outcomes
    }

    pub fn set_outcomes(&mut self, outcomes: OutcomeSource) {
        self.outcomes = outcomes;
    }

    fn debug_check(&self) {
        #[cfg(debug_assertions)]
        for i in 0..self.n {
            for j in 0..self.n {
                debug_assert!(self.stabilizers[i].commutes_unchecked(&self.stabilizers[j]));
                debug_assert!(self.destabilizers[i].commutes_unchecked(&self.destabilizers[j]));
                debug_assert_eq!(self.destabilizers[i].anticommutes(&self.stabilizers[j]), i == j);
            }
        }
    }

    /// `Some(±1)` when `±p` stabilizes the state, `None` when the outcome
    /// would be random. Does not change the state.
    pub fn expectation(&self, p: &PauliOperator) -> Result<Option<i8>, SimError> {
        check_hermitian(p, self.n)?;
        if self.stabilizers.iter().any(|s| s.anticommutes(p)) {
            return Ok(None);
        }
        let prod = PauliOperator::product(
            self.n,
            (0..self.n).filter(|&i| self.destabilizers[i].anticommutes(p)).map(|i| &self.stabilizers[i]),
        );
        debug_assert_eq!(prod.unsigned(), p.unsigned());
        Ok(Some(if prod.phase() == p.phase() { 1 } else { -1 }))
    }

    /// Projective measurement of `p`; returns ±1.
    pub fn measure(&mut self, p: &PauliOperator) -> Result<i8, SimError> {
        if let Some(v) = self.expectation(p)? {
            return Ok(v);
        }
        let i = self.stabilizers.iter().position(|s| s.anticommutes(p)).expect("random outcome");
        let pivot = self.stabilizers[i].clone();
        for j in 0..self.n {
            if j != i && self.stabilizers[j].anticommutes(p) {
                self.stabilizers[j] = self.stabilizers[j].mul_unchecked(&pivot);
            }
            if j != i && self.destabilizers[j].anticommutes(p) {
                self.destabilizers[j] = self.destabilizers[j].mul_unchecked(&pivot);
            }
        }
        let minus = self.outcomes.next();
        self.destabilizers[i] = pivot;
        self.stabilizers[i] = if minus { p.negated() } else { p.clone() };
        self.debug_check();
        Ok(if minus { -1 } else { 1 })
    }

    /// Apply the Pauli `p` as a gate: flips the sign of every row it
    /// anticommutes with.
    pub fn apply_pauli(&mut self, p: &PauliOperator) {
        for row in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            if row.anticommutes(p) {
                *row = row.negated();
            }
        }
    }

    fn each_row(&mut self, f: impl Fn(&mut PauliOperator)) {
        for row in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            f(row);
        }
    }

    pub fn h(&mut self, q: usize) {
        self.each_row(|r| r.conjugate_h(q));
    }

    pub fn s(&mut self, q: usize) {
        self.each_row(|r| r.conjugate_s(q));
    }

    pub fn sdg(&mut self, q: usize) {
        self.each_row(|r| r.conjugate_sdg(q));
    }

    pub fn cx(&mut self, a: usize, b: usize) {
        self.each_row(|r| r.conjugate_cx(a, b));
    }

    /// Controlled-Z between `a` and `b`.
    pub fn cz(&mut self, a: usize, b: usize) {
        self.h(b);
        self.cx(a, b);
        self.h(b);
    }

    /// Controlled-Y with control `a` and target `b`.
    pub fn cy(&mut self, a: usize, b: usize) {
        self.sdg(b);
        self.cx(a, b);
        self.s(b);
    }

    /// Append `m` qubits in the zero state.
    pub fn extend(&mut self, m: usize) {
        let n2 = self.n + m;
        for row in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            *row = row.padded(m);
        }
        for q in self.n..n2 {
            self.stabilizers.push(PauliOperator::single(n2, q, Pauli::Z));
            self.destabilizers.push(PauliOperator::single(n2, q, Pauli::X));
        }
        self.n = n2;
    }

    /// Drop the trailing qubits from `keep` on. Each dropped qubit must be in
    /// a Z eigenstate, so the state factorizes.
    pub fn truncate(&mut self, keep: usize) -> Result<(), SimError> {
        let n = self.n;
        let mut kept = Vec::new();
        let fixed: Vec<PauliOperator> = (keep..n)
            .map(|q| {
                let z = PauliOperator::single(n, q, Pauli::Z);
                match self.expectation(&z) {
                    Ok(Some(-1)) => Ok(z.negated()),
                    Ok(Some(_)) => Ok(z),
                    _ => Err(SimError::Code(format!("qubit {} is not in a Z eigenstate", q + 1))),
                }
            })
            .collect::<Result<_, _>>()?;
        for s in &self.stabilizers {
            let mut row = s.clone();
            for (q, z) in (keep..n).zip(&fixed) {
                if row.z().get(q) {
                    row = row.mul_unchecked(z);
                }
            }
            if !row.is_identity() {
                kept.push(row.restricted(&(0..keep).collect::<Vec<_>>()));
            }
        }
        let independent = canonical_form(&kept);
        let outcomes = self.outcomes.clone();
        *self = StabilizerState::from_stabilizers(independent, outcomes)?;
        Ok(())
    }

    /// Row-reduced stabilizer rows with signs; equal for equal states.
    pub fn canonical(&self) -> Vec<PauliOperator> {
        canonical_form(&self.stabilizers)
    }
}

/// Signed reduced row-echelon form of a commuting generator list.
pub fn canonical_form(gens: &[PauliOperator]) -> Vec<PauliOperator> {
    let n = gens.first().map_or(0, PauliOperator::n);
    let red = row_reduce_mod2(&BinaryMatrix::from_rows(2 * n, gens.iter().map(PauliOperator::symplectic).collect()));
    let mut g = gens.to_vec();
    for &op in &red.ops {
        match op {
            crate::gf2::RowOp::Swap(a, b) => g.swap(a, b),
            crate::gf2::RowOp::Add { from, to } => g[to] = g[to].mul_unchecked(&g[from]),
        }
    }
    g.truncate(red.rank);
    g
}

/// Prepare a state in the codespace of `code` with every generator and
/// every fixing at +1. Each operator is measured in turn and, on −1,
/// flipped by a Pauli that commutes with everything fixed before it.
pub fn prepare_codespace(
    code: &StabilizerCode,
    fixings: &[PauliOperator],
    outcomes: OutcomeSource,
) -> Result<StabilizerState, SimError> {
    let n = code.n();
    let mut state = StabilizerState::zero(n, outcomes);
    let mut fixed: Vec<PauliOperator> = Vec::new();
    for op in code.generators().iter().chain(fixings) {
        check_hermitian(op, n)?;
        if fixed.iter().any(|f| f.anticommutes(op)) {
            return Err(SimError::Contradictory(format!("{op} anticommutes with an earlier operator")));
        }
        if state.measure(op)? == -1 {
            let mut cons = fixed.clone();
            cons.push(op.clone());
            let want = BitVec::unit(cons.len(), cons.len() - 1);
            let sol = solve_gf2(&commutation_rows(&cons), &want)
                .expect("dimensions agree")
                .ok_or_else(|| SimError::Contradictory(format!("{op} is forced to -1")))?;
            state.apply_pauli(&PauliOperator::from_symplectic(&sol.particular));
        }
        fixed.push(op.clone());
    }
    Ok(state)
}
