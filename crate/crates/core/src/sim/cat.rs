//! Indirect measurement through an `m`-qubit cat-state ancilla register.

use crate::pauli::{Pauli, PauliOperator};

use super::{SimError, StabilizerState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatOutcome {
    /// Eigenvalue of the measured operator, ±1.
    pub outcome: i8,
    /// Individual ancilla readouts, ±1.
    pub ancilla_outcomes: Vec<i8>,
}

/// Measure `p` on `state` with one cat-state ancilla per support qubit,
/// each ancilla coupling to exactly one data qubit. `inject_x` places an X
/// error on that ancilla just before its controlled gate. Ancillas are
/// discarded afterwards.
pub fn cat_state_measure(
    state: &mut StabilizerState,
    p: &PauliOperator,
    inject_x: Option<usize>,
) -> Result<CatOutcome, SimError> {
    let n = state.n();
    if p.n() != n {
        return Err(SimError::Size { expected: n, found: p.n() });
    }
    if !p.is_hermitian() {
        return Err(SimError::NotHermitian(p.to_string()));
    }
    let support = p.support();
    let m = support.len();
    if m == 0 {
        return Err(SimError::WeightZero);
    }
    state.extend(m);
    let anc = |j: usize| n + j;
    state.h(anc(0));
    for j in 1..m {
        state.cx(anc(0), anc(j));
    }
    for (j, &q) in support.iter().enumerate() {
        if inject_x == Some(j) {
            state.apply_pauli(&PauliOperator::single(n + m, anc(j), Pauli::X));
        }
        match p.get(q) {
            Pauli::X => state.cx(anc(j), q),
            Pauli::Z => state.cz(anc(j), q),
            Pauli::Y => state.cy(anc(j), q),
            Pauli::I => unreachable!("support qubit"),
        }
    }
    let mut ancilla_outcomes = Vec::with_capacity(m);
    for j in 0..m {
        state.h(anc(j));
        ancilla_outcomes.push(state.measure(&PauliOperator::single(n + m, anc(j), Pauli::Z))?);
    }
    state.truncate(n)?;
    let parity: i8 = ancilla_outcomes.iter().product();
    let sign = if p.is_negative() { -1 } else { 1 };
    Ok(CatOutcome { outcome: sign * parity, ancilla_outcomes })
}

/// Lowest-weight Pauli `E` (weight at most `max_weight`) with
/// `E · reference = other` as stabilizer states.
pub fn single_error_footprint(
    reference: &StabilizerState,
    other: &StabilizerState,
    max_weight: usize,
) -> Option<PauliOperator> {
    let n = reference.n();
    let target = other.canonical();
    let mut frontier = vec![PauliOperator::identity(n)];
    for w in 0..=max_weight.min(n) {
        if w > 0 {
            frontier = frontier
                .iter()
                .flat_map(|e| {
                    let last = e.support().last().map_or(0, |&l| l + 1);
                    (last..n).flat_map(move |q| {
                        [Pauli::X, Pauli::Y, Pauli::Z].into_iter().map(move |l| {
                            let mut f = e.clone();
                            f.set(q, l);
                            f
                        })
                    })
                })
                .collect();
        }
        for e in &frontier {
            let mut s = reference.clone();
            s.apply_pauli(e);
            if s.canonical() == target {
                return Some(e.clone());
            }
        }
    }
    None
}
