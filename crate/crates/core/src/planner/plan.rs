//! Measurement plans: construction from a block decomposition and the
//! line-oriented plan file format.

use std::fmt::Write as _;

use crate::code::{Placement, StabilizerCode};
use crate::pauli::PauliOperator;

use super::blocks::{decompose_blocks, BlockDecomposition, DecomposeOptions};
use super::constrained::adjacent;
use super::PlanError;
use crate::search::Parallelism;

/// Measure `measure`; on outcome −1 apply `correction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementStep {
    pub measure: PauliOperator,
    pub correction: PauliOperator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewirePlan {
    pub from_label: String,
    pub to_label: String,
    pub steps: Vec<MeasurementStep>,
    /// `steps.len() + 1` codes; may be empty for plans read without them.
    pub intermediate_codes: Vec<StabilizerCode>,
}

impl RewirePlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn initial_code(&self) -> Option<&StabilizerCode> {
        self.intermediate_codes.first()
    }

    pub fn final_code(&self) -> Option<&StabilizerCode> {
        self.intermediate_codes.last()
    }

    /// Check the structural invariants: each step swaps exactly one generator
    /// for an anticommuting one, and every intermediate code is valid.
    pub fn check(&self) -> Result<(), PlanError> {
        if self.intermediate_codes.len() != self.steps.len() + 1 {
            return Err(PlanError::Internal(format!(
                "{} steps but {} codes",
                self.steps.len(),
                self.intermediate_codes.len()
            )));
        }
        for (i, code) in self.intermediate_codes.iter().enumerate() {
            let report = code.validate();
            if !report.is_valid() {
                return Err(PlanError::Internal(format!("code {i} is invalid: {report}")));
            }
        }
        for (i, step) in self.steps.iter().enumerate() {
            let (before, after) = (&self.intermediate_codes[i], &self.intermediate_codes[i + 1]);
            let changed: Vec<usize> = (0..before.generators().len())
                .filter(|&j| before.generator(j) != after.generator(j))
                .collect();
            let literal = match changed[..] {
                [j] => {
                    let (old, new) = (before.generator(j), after.generator(j));
                    old == &step.correction && new == &step.measure && old.anticommutes(new)
                }
                _ => false,
            };
            if !literal && !adjacent(before, after, step) {
                return Err(PlanError::Internal(format!("step {i} does not match its codes")));
            }
        }
        Ok(())
    }

    /// Concatenate plans end to end. Each plan must start in the group the
    /// previous one ends in.
    pub fn chain(plans: &[RewirePlan]) -> Result<RewirePlan, PlanError> {
        let (first, rest) = plans.split_first().ok_or_else(|| PlanError::Internal("no plans to chain".into()))?;
        let mut out = first.clone();
        for next in rest {
            match (out.final_code(), next.initial_code()) {
                (Some(a), Some(b)) if a.same_group(b, true) => {}
                _ => {
                    return Err(PlanError::SizeMismatch(format!(
                        "plan {} does not start where {} ends",
                        next.from_label, out.to_label
                    )))
                }
            }
            out.steps.extend(next.steps.iter().cloned());
            out.intermediate_codes.extend(next.intermediate_codes[1..].iter().cloned());
            out.to_label.clone_from(&next.to_label);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("from={} to={} steps={}\n", self.from_label, self.to_label, self.steps.len());
        for step in &self.steps {
            let _ = writeln!(s, "measure {} correct {}", step.measure, step.correction);
        }
        for code in &self.intermediate_codes {
            s.push_str("intermediate:\n");
            s.push_str(&code.to_text());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<RewirePlan, PlanError> {
        let err = |line: usize, reason: &str| PlanError::Format { line, reason: reason.to_string() };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| err(0, "empty plan file"))?;
        let mut from = None;
        let mut to = None;
        let mut count = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("from", v)) => from = Some(v.to_string()),
                Some(("to", v)) => to = Some(v.to_string()),
                Some(("steps", v)) => count = Some(v.parse::<usize>().map_err(|_| err(hline, "bad step count"))?),
                _ => return Err(err(hline, "expected from=<label> to=<label> steps=<N>")),
            }
        }
        let (Some(from_label), Some(to_label), Some(count)) = (from, to, count) else {
            return Err(err(hline, "expected from=<label> to=<label> steps=<N>"));
        };
        let mut steps = Vec::new();
        let mut blocks: Vec<(usize, String)> = Vec::new();
        for (line, l) in lines {
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if l == "intermediate:" {
                blocks.push((line, String::new()));
            } else if let Some((_, buf)) = blocks.last_mut() {
                buf.push_str(l);
                buf.push('\n');
            } else {
                let toks: Vec<&str> = l.split_whitespace().collect();
                let [ "measure", m, "correct", c ] = toks[..] else {
                    return Err(err(line, "expected: measure <pauli> correct <pauli>"));
                };
                let parse = |s: &str| PauliOperator::parse(s, None).map_err(|e| err(line, &e.to_string()));
                steps.push(MeasurementStep { measure: parse(m)?, correction: parse(c)? });
            }
        }
        if steps.len() != count {
            return Err(err(hline, &format!("header promises {count} steps, found {}", steps.len())));
        }
        let intermediate_codes = blocks
            .into_iter()
            .map(|(line, body)| {
                StabilizerCode::from_text(&body).map_err(|e| err(line, &e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !intermediate_codes.is_empty() && intermediate_codes.len() != steps.len() + 1 {
            return Err(err(hline, "intermediate code count must be steps + 1"));
        }
        Ok(RewirePlan { from_label, to_label, steps, intermediate_codes })
    }
}

/// Build the measurement sequence: each B slot takes two steps (the
/// complement product, then the target generator), then each C slot one
/// step, in order of the original target index.
pub fn build_plan(decomp: &BlockDecomposition, from_label: &str, to_label: &str) -> RewirePlan {
    let n = decomp.n;
    let mut current = decomp.source_generators.clone();
    let mut codes = vec![StabilizerCode::new(n, current.clone(), format!("{from_label}@0"))];
    let mut steps = Vec::new();
    let mut push = |slot: usize, new: PauliOperator, current: &mut Vec<PauliOperator>| {
        let old = std::mem::replace(&mut current[slot], new.clone());
        steps.push(MeasurementStep { measure: new, correction: old });
        codes.push(StabilizerCode::new(n, current.clone(), format!("{from_label}@{}", codes.len())));
    };
    for (j, p) in decomp.complement_products().into_iter().enumerate() {
        let slot = decomp.block_b[j].slot;
        push(slot, p, &mut current);
        push(slot, decomp.block_b_target[j].generator.clone(), &mut current);
    }
    let mut cs: Vec<_> = decomp.block_c.iter().collect();
    cs.sort_by_key(|c| c.target_index);
    for c in cs {
        push(c.slot, c.target.clone(), &mut current);
    }
    if let Some(last) = codes.last_mut() {
        *last = last.clone().with_label(to_label);
    }
    if let Some(first) = codes.first_mut() {
        *first = first.clone().with_label(from_label);
    }
    RewirePlan { from_label: from_label.to_string(), to_label: to_label.to_string(), steps, intermediate_codes: codes }
}

/// How the diagonal pivots are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Pivots by ascending target generator weight.
    #[default]
    Row,
    /// Pivots aligned with those of the opposite-direction row reduction,
    /// so that the measured target generators carry the indices that were
    /// pivots when reducing the other way.
    Column,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PlanOptions {
    pub reduction: Reduction,
    pub parallelism: Parallelism,
}

/// Pad the shorter code with ancillas in the Z state at the end.
pub fn pad_to_match(a: &StabilizerCode, b: &StabilizerCode) -> (StabilizerCode, StabilizerCode) {
    let n = a.n().max(b.n());
    (a.pad_with_ancillas(n - a.n(), Placement::End), b.pad_with_ancillas(n - b.n(), Placement::End))
}

/// Decompose with the chosen pivot rule.
pub fn decompose_with(source: &StabilizerCode, target: &StabilizerCode, options: &PlanOptions) -> Result<BlockDecomposition, PlanError> {
    let (source, target) = pad_to_match(source, target);
    let preferred = match options.reduction {
        Reduction::Row => Vec::new(),
        Reduction::Column => {
            let reverse = super::diag::diagonalize(target.generators(), source.generators(), &[])?;
            reverse.pairs.iter().map(|&(_, p)| p).collect()
        }
    };
    decompose_blocks(&source, &target, &DecomposeOptions { preferred_pivots: preferred, parallelism: options.parallelism })
}

/// Plan a path between two codes, padding the shorter one first.
pub fn plan_between(source: &StabilizerCode, target: &StabilizerCode, options: &PlanOptions) -> Result<RewirePlan, PlanError> {
    let decomp = decompose_with(source, target, options)?;
    let plan = build_plan(&decomp, source.label(), target.label());
    plan.check()?;
    Ok(plan)
}
