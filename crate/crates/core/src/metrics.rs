//! Code distance, distance profiles along plans and subsystem-code bounds.

use std::fmt;

use thiserror::Error;

use crate::bits::BitVec;
use crate::code::{CodeError, StabilizerCode, SubsystemCode};
use crate::gf2::SpanBasis;
use crate::pauli::PauliOperator;
use crate::planner::{BlockDecomposition, RewirePlan};
use crate::search::{search_by_weight, Parallelism};

/// Largest `b` for which all `2^b` subsystem codes are enumerated.
pub const MAX_ENUMERATED_B: usize = 12;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("code {0} encodes no logical qubits")]
    NoLogicals(String),
    #[error("decomposition has b={0}; expected b=0")]
    NonEmptyB(usize),
    #[error("b={0} exceeds the enumeration limit {MAX_ENUMERATED_B}")]
    TooManyB(usize),
    #[error("size mismatch: {0} vs {1} qubits")]
    Size(usize, usize),
    #[error("plan carries no intermediate codes")]
    NoIntermediates,
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub label: String,
    /// `None` when no logical of weight `<= searched_weight` exists.
    pub distance: Option<usize>,
    pub witness: Option<PauliOperator>,
    pub searched_weight: usize,
}

impl DistanceReport {
    /// Number of correctable errors, `(d - 1) / 2`.
    pub fn correctable(&self) -> Option<usize> {
        self.distance.map(|d| d.saturating_sub(1) / 2)
    }

    /// Lower bound on the distance implied by the report.
    pub fn at_least(&self) -> usize {
        self.distance.unwrap_or(self.searched_weight + 1)
    }
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.distance {
            Some(d) => d.to_string(),
            None => format!(">{}", self.searched_weight),
        };
        let w = self.witness.as_ref().map_or("none".to_string(), |w| w.compact());
        write!(f, "code={} distance={d} witness={w} searched={}", self.label, self.searched_weight)
    }
}

/// Lowest-weight operator commuting with `commutant` and outside the span
/// of `excluded`, ties broken by the dense string.
fn dressed_search(
    label: &str,
    n: usize,
    commutant: &[PauliOperator],
    excluded: &[PauliOperator],
    max_weight: usize,
    par: Parallelism,
) -> DistanceReport {
    let span = SpanBasis::from_vectors(2 * n, excluded.iter().map(PauliOperator::symplectic).collect::<Vec<_>>().iter());
    let witness = search_by_weight(
        commutant,
        n,
        &BitVec::zeros(commutant.len()),
        max_weight,
        |p| !span.contains(&p.symplectic()),
        par,
    );
    DistanceReport {
        label: label.to_string(),
        distance: witness.as_ref().map(PauliOperator::weight),
        witness,
        searched_weight: max_weight,
    }
}

pub fn code_distance(code: &StabilizerCode, max_weight: usize, par: Parallelism) -> Result<DistanceReport, MetricsError> {
    if code.k() == 0 {
        return Err(MetricsError::NoLogicals(code.label().to_string()));
    }
    Ok(dressed_search(code.label(), code.n(), code.generators(), code.generators(), max_weight, par))
}

/// One report per intermediate code of `plan`.
pub fn path_distance_profile(
    plan: &RewirePlan,
    max_weight: usize,
    par: Parallelism,
) -> Result<Vec<DistanceReport>, MetricsError> {
    if plan.intermediate_codes.is_empty() {
        return Err(MetricsError::NoIntermediates);
    }
    plan.intermediate_codes.iter().map(|c| code_distance(c, max_weight, par)).collect()
}

fn c_generators(decomp: &BlockDecomposition) -> Vec<PauliOperator> {
    decomp.block_c.iter().flat_map(|c| [c.source.clone(), c.target.clone()]).collect()
}

/// The subsystem code whose gauge fixings are both codes of a `b = 0`
/// decomposition: stabilizer `G_A`, gauge group `G_A, G_C, G_C'`.
pub fn joint_subsystem_code(decomp: &BlockDecomposition) -> Result<SubsystemCode, MetricsError> {
    if decomp.b() != 0 {
        return Err(MetricsError::NonEmptyB(decomp.b()));
    }
    Ok(enumerate_subsystem_codes(decomp)?.remove(0))
}

/// The `2^b` subsystem codes: for each choice of source or target element
/// in every B slot, stabilizer `G_A` and gauge group generated by `G_A`,
/// the chosen B elements, the complement products, `G_C` and `G_C'`.
/// Choice bit `j` of the list index selects the target element of slot `j`.
pub fn enumerate_subsystem_codes(decomp: &BlockDecomposition) -> Result<Vec<SubsystemCode>, MetricsError> {
    let b = decomp.b();
    if b > MAX_ENUMERATED_B {
        return Err(MetricsError::TooManyB(b));
    }
    let stabilizers: Vec<PauliOperator> = decomp.block_a.iter().map(|(_, g)| g.clone()).collect();
    let products = decomp.complement_products();
    let cs = c_generators(decomp);
    (0..1usize << b)
        .map(|choice| {
            let chosen = (0..b).map(|j| {
                if (choice >> j) & 1 == 1 {
                    decomp.block_b_target[j].generator.clone()
                } else {
                    decomp.block_b[j].generator.clone()
                }
            });
            let gauge: Vec<PauliOperator> =
                stabilizers.iter().cloned().chain(chosen).chain(products.iter().cloned()).chain(cs.iter().cloned()).collect();
            Ok(SubsystemCode::new(decomp.n, stabilizers.clone(), gauge, format!("subsystem_{choice}"))?)
        })
        .collect()
}

/// Minimum weight of a dressed logical: commutes with the stabilizers and
/// lies outside the gauge group.
pub fn subsystem_distance(sc: &SubsystemCode, max_weight: usize, par: Parallelism) -> Result<DistanceReport, MetricsError> {
    if sc.k_logical() == 0 {
        return Err(MetricsError::NoLogicals(sc.label().to_string()));
    }
    Ok(dressed_search(sc.label(), sc.n(), sc.stabilizer_generators(), sc.gauge_generators(), max_weight, par))
}

/// Whether `code` is a gauge fixing of `sc`: its generators lie in the gauge
/// group and its stabilizer group contains that of `sc`. Sign-blind.
pub fn is_gauge_fixing(code: &StabilizerCode, sc: &SubsystemCode) -> Result<bool, MetricsError> {
    if code.n() != sc.n() {
        return Err(MetricsError::Size(code.n(), sc.n()));
    }
    let n = code.n();
    let span = |ops: &[PauliOperator]| {
        SpanBasis::from_vectors(2 * n, ops.iter().map(PauliOperator::symplectic).collect::<Vec<_>>().iter())
    };
    let gauge = span(sc.gauge_generators());
    let own = span(code.generators());
    Ok(code.generators().iter().all(|g| gauge.contains(&g.symplectic()))
        && sc.stabilizer_generators().iter().all(|s| own.contains(&s.symplectic())))
}
