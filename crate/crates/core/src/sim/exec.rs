//! Plan execution, logical transport and the rewiring unitary.

use std::fmt::Write as _;

use crate::bits::BitVec;
use crate::code::StabilizerCode;
use crate::gf2::{in_span, BinaryMatrix};
use crate::pauli::PauliOperator;
use crate::planner::{MeasurementStep, RewirePlan};
use crate::search::Parallelism;

use super::{dense, SimError, StabilizerState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub step: usize,
    pub measured: PauliOperator,
    pub outcome: i8,
    pub corrected: bool,
}

impl std::fmt::Display for MeasurementRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "step={} op={} outcome={} corrected={}",
            self.step,
            self.measured,
            if self.outcome > 0 { "+1" } else { "-1" },
            self.corrected
        )
    }
}

/// Transcript text with the seed in the header.
pub fn transcript(seed: u64, records: &[MeasurementRecord]) -> String {
    let mut s = format!("# seed={seed}\n");
    for r in records {
        let _ = writeln!(s, "{r}");
    }
    s
}

/// Measure `step.measure` and apply `step.correction` on −1. With
/// `pre_code`, every generator of that code must be at +1 beforehand;
/// otherwise only the correction is checked.
pub fn apply_rewire_step(
    state: &mut StabilizerState,
    step: &MeasurementStep,
    index: usize,
    pre_code: Option<&StabilizerCode>,
) -> Result<MeasurementRecord, SimError> {
    let required: Vec<&PauliOperator> = match pre_code {
        Some(c) => c.generators().iter().collect(),
        None => vec![&step.correction],
    };
    for g in required {
        if state.expectation(g)? != Some(1) {
            return Err(SimError::Precondition { step: index, op: g.to_string() });
        }
    }
    if !step.measure.anticommutes(&step.correction) {
        return Err(SimError::Commuting(step.measure.to_string(), step.correction.to_string()));
    }
    let outcome = state.measure(&step.measure)?;
    if outcome == -1 {
        state.apply_pauli(&step.correction);
    }
    Ok(MeasurementRecord { step: index, measured: step.measure.clone(), outcome, corrected: outcome == -1 })
}

/// Conjugation by `U = (1 + g' g)/sqrt(2)`: `σ g g'` when `σ` anticommutes
/// with `g g'`, else `σ`.
pub fn transport(sigma: &PauliOperator, g: &PauliOperator, g_new: &PauliOperator) -> PauliOperator {
    let gg = g.mul_unchecked(g_new);
    if sigma.anticommutes(&gg) {
        sigma.mul_unchecked(&gg)
    } else {
        sigma.clone()
    }
}

#[derive(Debug, Clone)]
pub struct PlanRun {
    pub records: Vec<MeasurementRecord>,
    /// The input logical pairs after transport through every step.
    pub logicals: Vec<(PauliOperator, PauliOperator)>,
}

/// Run every step of `plan` on `state`, transporting `logicals` alongside.
pub fn execute_plan(
    state: &mut StabilizerState,
    plan: &RewirePlan,
    logicals: &[(PauliOperator, PauliOperator)],
) -> Result<PlanRun, SimError> {
    let mut records = Vec::with_capacity(plan.len());
    let mut logicals = logicals.to_vec();
    for (i, step) in plan.steps.iter().enumerate() {
        records.push(apply_rewire_step(state, step, i, plan.intermediate_codes.get(i))?);
        for (x, z) in logicals.iter_mut() {
            *x = transport(x, &step.correction, &step.measure);
            *z = transport(z, &step.correction, &step.measure);
        }
    }
    Ok(PlanRun { records, logicals })
}

/// One leaf of the outcome tree.
#[derive(Debug, Clone)]
pub struct Branch {
    pub records: Vec<MeasurementRecord>,
    pub state: StabilizerState,
}

/// Run `plan` along every outcome branch. Steps whose outcome is already
/// determined do not branch.
pub fn execute_all_branches(
    state: &StabilizerState,
    plan: &RewirePlan,
    par: Parallelism,
) -> Result<Vec<Branch>, SimError> {
    fn go(
        state: StabilizerState,
        plan: &RewirePlan,
        i: usize,
        records: Vec<MeasurementRecord>,
        par: Parallelism,
    ) -> Result<Vec<Branch>, SimError> {
        let Some(step) = plan.steps.get(i) else {
            return Ok(vec![Branch { records, state }]);
        };
        let run = |minus: bool| -> Result<Vec<Branch>, SimError> {
            let mut s = state.clone();
            s.outcomes_mut().push_forced(minus);
            let rec = apply_rewire_step(&mut s, step, i, plan.intermediate_codes.get(i))?;
            let mut r = records.clone();
            r.push(rec);
            go(s, plan, i + 1, r, par)
        };
        if state.expectation(&step.measure)?.is_some() {
            return run(false);
        }
        let (plus, minus) = match par {
            #[cfg(feature = "parallel")]
            Parallelism::Parallel => rayon::join(|| run(false), || run(true)),
            _ => (run(false), run(true)),
        };
        let mut out = plus?;
        out.extend(minus?);
        Ok(out)
    }
    go(state.clone(), plan, 0, Vec::new(), par)
}

/// Action of a transport on logical coordinates: row `i` gives transported
/// logical `i` (order `X̄1..X̄k, Z̄1..Z̄k`) in terms of the reference logicals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalAction {
    pub symplectic: BinaryMatrix,
    /// `true` marks a −1 sign.
    pub signs: Vec<bool>,
}

impl LogicalAction {
    pub fn identity(k: usize) -> Self {
        LogicalAction { symplectic: BinaryMatrix::identity(2 * k), signs: vec![false; 2 * k] }
    }

    pub fn k(&self) -> usize {
        self.signs.len() / 2
    }

    pub fn is_identity(&self) -> bool {
        *self == LogicalAction::identity(self.k())
    }

    /// Whether the matrix preserves the symplectic form.
    pub fn is_symplectic(&self) -> bool {
        let k = self.k();
        let form = |a: &BitVec, b: &BitVec| (0..k).fold(false, |acc, j| acc ^ (a.get(j) & b.get(k + j)) ^ (a.get(k + j) & b.get(j)));
        (0..2 * k).all(|i| {
            (0..2 * k).all(|j| {
                let expect = (i + k == j) || (j + k == i);
                form(self.symplectic.row(i), self.symplectic.row(j)) == expect
            })
        })
    }
}

/// Express each transported logical as `± W(a, b) S`, with `W` the
/// Hermitian product `i^{a·b} X̄^a Z̄^b` of `after`'s logicals and `S` in
/// its stabilizer group.
pub fn extract_logical_action(
    after: &StabilizerCode,
    transported: &[(PauliOperator, PauliOperator)],
) -> Result<LogicalAction, SimError> {
    let after_logicals = match after.logicals() {
        Some(l) => l.to_vec(),
        None => after.compute_logicals().map_err(|e| SimError::Code(e.to_string()))?,
    };
    let k = after_logicals.len();
    if transported.len() != k {
        return Err(SimError::Code(format!("{} transported pairs for k={k}", transported.len())));
    }
    let basis: Vec<PauliOperator> = after_logicals
        .iter()
        .map(|(x, _)| x.clone())
        .chain(after_logicals.iter().map(|(_, z)| z.clone()))
        .chain(after.generators().iter().cloned())
        .collect();
    let ops: Vec<&PauliOperator> = transported.iter().map(|(x, _)| x).chain(transported.iter().map(|(_, z)| z)).collect();
    let mut rows = Vec::with_capacity(2 * k);
    let mut signs = Vec::with_capacity(2 * k);
    for op in ops {
        let mem = in_span(op, &basis, false);
        let combo = mem.combination.ok_or_else(|| SimError::NotInSpan(op.to_string()))?;
        let prod = PauliOperator::product(op.n(), combo.iter().map(|&i| &basis[i]));
        let row = BitVec::from_indices(2 * k, combo.iter().copied().filter(|&i| i < 2 * k));
        let overlap = (0..k).filter(|&j| row.get(j) && row.get(k + j)).count() as u8;
        match (op.phase() + 4 - (prod.phase() + overlap) % 4) % 4 {
            0 => signs.push(false),
            2 => signs.push(true),
            _ => return Err(SimError::NotHermitian(op.to_string())),
        }
        rows.push(row);
    }
    Ok(LogicalAction { symplectic: BinaryMatrix::from_rows(2 * k, rows), signs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryReport {
    /// Images of all single-qubit Paulis are Hermitian and keep their
    /// commutation relations.
    pub symplectic_ok: bool,
    /// `U g U† = g'` exactly.
    pub maps_g_to_g_new: bool,
    /// Dense `‖U U† − 1‖` and the largest deviation of `U σ U†` from the
    /// symplectic image, over every Pauli `σ`; only for `n <= 3`.
    pub dense: Option<(f64, f64)>,
}

impl UnitaryReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.symplectic_ok && self.maps_g_to_g_new && self.dense.is_none_or(|(u, c)| u <= tol && c <= tol)
    }
}

pub fn verify_unitary_properties(g: &PauliOperator, g_new: &PauliOperator) -> Result<UnitaryReport, SimError> {
    for p in [g, g_new] {
        if !p.is_hermitian() {
            return Err(SimError::NotHermitian(p.to_string()));
        }
    }
    if g.n() != g_new.n() {
        return Err(SimError::Size { expected: g.n(), found: g_new.n() });
    }
    if !g.anticommutes(g_new) {
        return Err(SimError::Commuting(g.to_string(), g_new.to_string()));
    }
    let n = g.n();
    let singles: Vec<PauliOperator> = (0..n)
        .flat_map(|q| [crate::pauli::Pauli::X, crate::pauli::Pauli::Z].map(|p| PauliOperator::single(n, q, p)))
        .collect();
    let images: Vec<PauliOperator> = singles.iter().map(|s| transport(s, g, g_new)).collect();
    let symplectic_ok = images.iter().all(PauliOperator::is_hermitian)
        && (0..singles.len()).all(|i| {
            (0..singles.len()).all(|j| singles[i].anticommutes(&singles[j]) == images[i].anticommutes(&images[j]))
        });
    let maps_g_to_g_new = &transport(g, g, g_new) == g_new;
    let dense = (n <= 3).then(|| {
        let u = dense::rewire_unitary(g, g_new);
        let ud = dense::adjoint(&u);
        let unitary_dev = dense::max_deviation(&dense::matmul(&u, &ud), &dense::identity(1 << n));
        let mut conj_dev: f64 = 0.0;
        for code in 0..(1usize << (2 * n)) {
            let sigma = PauliOperator::from_symplectic(&BitVec::from_indices(
                2 * n,
                (0..2 * n).filter(|b| (code >> b) & 1 == 1),
            ));
            let lhs = dense::matmul(&dense::matmul(&u, &dense::pauli_matrix(&sigma)), &ud);
            let rhs = dense::pauli_matrix(&transport(&sigma, g, g_new));
            conj_dev = conj_dev.max(dense::max_deviation(&lhs, &rhs));
        }
        (unitary_dev, conj_dev)
    });
    Ok(UnitaryReport { symplectic_ok, maps_g_to_g_new, dense })
}
