//! Stabilizer and subsystem code data model.

use std::fmt;

use thiserror::Error;

use crate::bits::BitVec;
use crate::gf2::{in_span, nullspace, row_reduce_mod2, BinaryMatrix, SpanBasis};
use crate::pauli::{Pauli, PauliError, PauliOperator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code: {0}")]
    Invalid(ValidationReport),
    #[error("generator index {0} out of range")]
    Index(usize),
    #[error("cannot multiply a generator by itself (index {0})")]
    SameIndex(usize),
    #[error("malformed permutation: {0}")]
    Permutation(String),
    #[error("operator acts on {found} qubits, code has {expected}")]
    Size { expected: usize, found: usize },
    #[error("{0}")]
    Pauli(#[from] PauliError),
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    WrongLength { index: usize, found: usize },
    NotHermitian { index: usize },
    Anticommuting { i: usize, j: usize },
    RankDeficient { rank: usize, expected: usize },
    TooManyGenerators { count: usize, n: usize },
    LogicalCount { found: usize, expected: usize },
    LogicalNotCommuting { logical: String, generator: usize },
    LogicalPairing { a: String, b: String },
    LogicalInStabilizer { logical: String },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::WrongLength { index, found } => write!(f, "generator {index} acts on {found} qubits"),
            Issue::NotHermitian { index } => write!(f, "generator {index} is not Hermitian"),
            Issue::Anticommuting { i, j } => write!(f, "generators {i} and {j} anticommute"),
            Issue::RankDeficient { rank, expected } => {
                write!(f, "generators are dependent: rank {rank}, expected {expected}")
            }
            Issue::TooManyGenerators { count, n } => write!(f, "{count} generators on {n} qubits"),
            Issue::LogicalCount { found, expected } => write!(f, "{found} logical pairs, expected {expected}"),
            Issue::LogicalNotCommuting { logical, generator } => {
                write!(f, "logical {logical} anticommutes with generator {generator}")
            }
            Issue::LogicalPairing { a, b } => write!(f, "logicals {a} and {b} violate the pairing"),
            Issue::LogicalInStabilizer { logical } => write!(f, "logical {logical} lies in the stabilizer group"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.issues.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Where ancilla qubits go when padding a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    #[default]
    End,
    Start,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    n: usize,
    generators: Vec<PauliOperator>,
    logicals: Option<Vec<(PauliOperator, PauliOperator)>>,
    label: String,
}

/// Symplectic form of two `(x | z)` vectors of length `2n`.
pub(crate) fn symplectic_product(a: &BitVec, b: &BitVec) -> bool {
    let n = a.len() / 2;
    let mut acc = false;
    for i in a.iter_ones() {
        let j = if i < n { i + n } else { i - n };
        acc ^= b.get(j);
    }
    acc
}

/// Rows `(z | x)` so that `C v` gives the commutation pattern of `v`.
pub(crate) fn commutation_rows(ops: &[PauliOperator]) -> BinaryMatrix {
    let n = ops.first().map_or(0, PauliOperator::n);
    BinaryMatrix::from_rows(2 * n, ops.iter().map(|g| g.z().concat(g.x())).collect())
}

impl StabilizerCode {
    /// Construct without validation; `k` is `n` minus the generator count.
    pub fn new(n: usize, generators: Vec<PauliOperator>, label: impl Into<String>) -> Self {
        StabilizerCode { n, generators, logicals: None, label: label.into() }
    }

    /// Construct and validate.
    pub fn checked(n: usize, generators: Vec<PauliOperator>, label: impl Into<String>) -> Result<Self, CodeError> {
        let code = StabilizerCode::new(n, generators, label);
        let report = code.validate();
        if report.is_valid() {
            Ok(code)
        } else {
            Err(CodeError::Invalid(report))
        }
    }

    /// Parse generators from Pauli text (dense or sparse) on `n` qubits.
    pub fn from_strs(n: usize, label: &str, gens: &[&str]) -> Result<Self, CodeError> {
        let generators =
            gens.iter().map(|s| PauliOperator::parse(s, Some(n))).collect::<Result<Vec<_>, _>>()?;
        StabilizerCode::checked(n, generators, label)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n.saturating_sub(self.generators.len())
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &PauliOperator {
        &self.generators[i]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn logicals(&self) -> Option<&[(PauliOperator, PauliOperator)]> {
        self.logicals.as_deref()
    }

    pub fn with_logicals(mut self, logicals: Vec<(PauliOperator, PauliOperator)>) -> Self {
        self.logicals = Some(logicals);
        self
    }

    /// Attach computed logical pairs unless some are already present.
    pub fn ensure_logicals(self) -> Result<Self, CodeError> {
        if self.logicals.is_some() {
            return Ok(self);
        }
        let l = self.compute_logicals()?;
        Ok(self.with_logicals(l))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let gens = &self.generators;
        if gens.len() > self.n {
            issues.push(Issue::TooManyGenerators { count: gens.len(), n: self.n });
        }
        let before = issues.len();
        for (i, g) in gens.iter().enumerate() {
            if g.n() != self.n {
                issues.push(Issue::WrongLength { index: i, found: g.n() });
            } else if !g.is_hermitian() {
                issues.push(Issue::NotHermitian { index: i });
            }
        }
        if issues.len() > before {
            return ValidationReport { issues };
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].anticommutes(&gens[j]) {
                    issues.push(Issue::Anticommuting { i, j });
                }
            }
        }
        let rank = self.stabilizer_matrix().rank();
        if rank != gens.len() {
            issues.push(Issue::RankDeficient { rank, expected: gens.len() });
        }
        if let Some(logicals) = &self.logicals {
            self.check_logicals(logicals, &mut issues);
        }
        ValidationReport { issues }
    }

    fn check_logicals(&self, logicals: &[(PauliOperator, PauliOperator)], issues: &mut Vec<Issue>) {
        if logicals.len() != self.k() {
            issues.push(Issue::LogicalCount { found: logicals.len(), expected: self.k() });
        }
        let flat: Vec<&PauliOperator> = logicals.iter().flat_map(|(x, z)| [x, z]).collect();
        if flat.iter().any(|l| l.n() != self.n) {
            issues.push(Issue::LogicalCount { found: logicals.len(), expected: self.k() });
            return;
        }
        for l in &flat {
            for (gi, g) in self.generators.iter().enumerate() {
                if l.anticommutes(g) {
                    issues.push(Issue::LogicalNotCommuting { logical: l.to_string(), generator: gi });
                }
            }
            if in_span(l, &self.generators, false).member {
                issues.push(Issue::LogicalInStabilizer { logical: l.to_string() });
            }
        }
        for a in 0..flat.len() {
            for b in a + 1..flat.len() {
                let partners = a / 2 == b / 2;
                if flat[a].anticommutes(flat[b]) != partners {
                    issues.push(Issue::LogicalPairing { a: flat[a].to_string(), b: flat[b].to_string() });
                }
            }
        }
    }

    /// Stacked `(x | z)` rows of the generators.
    pub fn stabilizer_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(2 * self.n, self.generators.iter().map(PauliOperator::symplectic).collect())
    }

    /// Whether `op` lies in the stabilizer group (optionally including its sign).
    pub fn contains(&self, op: &PauliOperator, track_sign: bool) -> bool {
        let r = in_span(op, &self.generators, track_sign);
        r.member && r.sign_matches.unwrap_or(true)
    }

    /// Whether both codes generate the same group.
    pub fn same_group(&self, other: &StabilizerCode, track_sign: bool) -> bool {
        self.n == other.n
            && self.generators.len() == other.generators.len()
            && other.generators.iter().all(|g| self.contains(g, track_sign))
    }

    /// Deterministic logical pairs: canonical normalizer basis reduced modulo
    /// the stabilizer, then symplectic Gram-Schmidt.
    pub fn compute_logicals(&self) -> Result<Vec<(PauliOperator, PauliOperator)>, CodeError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(CodeError::Invalid(report));
        }
        let n = self.n;
        let normalizer = if self.generators.is_empty() {
            (0..2 * n).map(|i| BitVec::unit(2 * n, i)).collect()
        } else {
            let basis = nullspace(&commutation_rows(&self.generators));
            row_reduce_mod2(&BinaryMatrix::from_rows(2 * n, basis)).reduced.rows().to_vec()
        };
        let mut span = SpanBasis::from_vectors(2 * n, self.generators.iter().map(PauliOperator::symplectic).collect::<Vec<_>>().iter());
        let mut reps: Vec<BitVec> = Vec::new();
        for v in normalizer {
            if v.is_zero() {
                continue;
            }
            if span.insert(&v) {
                reps.push(v);
            }
        }
        let mut pairs = Vec::new();
        while !reps.is_empty() {
            let a = reps.remove(0);
            let Some(pos) = reps.iter().position(|w| symplectic_product(&a, w)) else {
                unreachable!("normalizer quotient is symplectic");
            };
            let b = reps.remove(pos);
            for u in reps.iter_mut() {
                let ub = symplectic_product(u, &b);
                let ua = symplectic_product(u, &a);
                if ub {
                    u.xor_assign(&a);
                }
                if ua {
                    u.xor_assign(&b);
                }
            }
            let (mut xl, mut zl) = (PauliOperator::from_symplectic(&a), PauliOperator::from_symplectic(&b));
            if xl.x().is_zero() && !zl.x().is_zero() {
                std::mem::swap(&mut xl, &mut zl);
            }
            pairs.push((xl, zl));
        }
        Ok(pairs)
    }

    /// Replace generator `i` by `g_i g_j`.
    pub fn replace_generator(&self, i: usize, j: usize) -> Result<StabilizerCode, CodeError> {
        let m = self.generators.len();
        if i >= m {
            return Err(CodeError::Index(i));
        }
        if j >= m {
            return Err(CodeError::Index(j));
        }
        if i == j {
            return Err(CodeError::SameIndex(i));
        }
        let mut out = self.clone();
        out.generators[i] = self.generators[i].mul_unchecked(&self.generators[j]);
        Ok(out)
    }

    /// Add `m` ancilla qubits, each stabilized by its own single-qubit `Z`.
    pub fn pad_with_ancillas(&self, m: usize, placement: Placement) -> StabilizerCode {
        if m == 0 {
            return self.clone();
        }
        let n2 = self.n + m;
        let shift: Vec<usize> = match placement {
            Placement::End => (0..self.n).collect(),
            Placement::Start => (m..n2).collect(),
        };
        let lift = |p: &PauliOperator| {
            let mut out = PauliOperator::identity(n2);
            for q in 0..self.n {
                out.set(shift[q], p.get(q));
            }
            if p.is_negative() {
                out.negated()
            } else {
                out
            }
        };
        let mut generators: Vec<PauliOperator> = self.generators.iter().map(lift).collect();
        let ancillas: Vec<usize> = match placement {
            Placement::End => (self.n..n2).collect(),
            Placement::Start => (0..m).collect(),
        };
        generators.extend(ancillas.into_iter().map(|q| PauliOperator::single(n2, q, Pauli::Z)));
        StabilizerCode {
            n: n2,
            generators,
            logicals: self.logicals.as_ref().map(|ls| ls.iter().map(|(x, z)| (lift(x), lift(z))).collect()),
            label: self.label.clone(),
        }
    }

    /// Move the factor on qubit `q` to qubit `perm[q]` (0-based).
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<StabilizerCode, CodeError> {
        if perm.len() != self.n {
            return Err(CodeError::Permutation(format!("length {} for {} qubits", perm.len(), self.n)));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(CodeError::Permutation(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(StabilizerCode {
            n: self.n,
            generators: self.generators.iter().map(|g| g.permuted(perm)).collect(),
            logicals: self
                .logicals
                .as_ref()
                .map(|ls| ls.iter().map(|(x, z)| (x.permuted(perm), z.permuted(perm))).collect()),
            label: self.label.clone(),
        })
    }

    /// Same code with the generator list replaced.
    pub fn with_generators(&self, generators: Vec<PauliOperator>) -> StabilizerCode {
        StabilizerCode { n: self.n, generators, logicals: None, label: self.label.clone() }
    }

    /// Serialize in the line-oriented code file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={} k={} label={}\n", self.n, self.k(), self.label);
        for g in &self.generators {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        if let Some(ls) = &self.logicals {
            s.push_str("logicals:\n");
            for (x, z) in ls {
                s.push_str(&format!("{x}\n{z}\n"));
            }
        }
        s
    }

    /// Parse the code file format. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<StabilizerCode, CodeError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(CodeError::Format { line: 0, reason: "empty file".into() })?;
        let herr = |reason: &str| CodeError::Format { line: hline, reason: reason.to_string() };
        let rest = header.strip_prefix("n=").ok_or_else(|| herr("header must start with n=<int>"))?;
        let (n_str, rest) = rest.split_once(' ').ok_or_else(|| herr("missing k=<int>"))?;
        let rest = rest.trim_start().strip_prefix("k=").ok_or_else(|| herr("missing k=<int>"))?;
        let (k_str, label) = match rest.split_once(' ') {
            Some((k, l)) => (k, l.trim_start().strip_prefix("label=").ok_or_else(|| herr("missing label="))?),
            None => (rest, ""),
        };
        let n: usize = n_str.parse().map_err(|_| herr("bad n"))?;
        let k: usize = k_str.parse().map_err(|_| herr("bad k"))?;
        if k > n {
            return Err(herr("k exceeds n"));
        }
        let mut generators = Vec::new();
        let mut logical_ops = Vec::new();
        let mut in_logicals = false;
        for (line, l) in lines {
            if l == "logicals:" {
                in_logicals = true;
                continue;
            }
            let op = PauliOperator::parse(l, Some(n))
                .map_err(|e| CodeError::Format { line, reason: e.to_string() })?;
            if in_logicals {
                logical_ops.push(op);
            } else {
                generators.push(op);
            }
        }
        if generators.len() != n - k {
            return Err(CodeError::Format {
                line: hline,
                reason: format!("header promises {} generators, found {}", n - k, generators.len()),
            });
        }
        if logical_ops.len() % 2 == 1 {
            return Err(CodeError::Format { line: hline, reason: "odd number of logical lines".into() });
        }
        let mut code = StabilizerCode::new(n, generators, label);
        if in_logicals {
            let pairs = logical_ops.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
            code = code.with_logicals(pairs);
        }
        Ok(code)
    }
}

/// Subsystem code: a stabilizer group inside a larger, possibly non-abelian
/// gauge group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemCode {
    n: usize,
    stabilizer_generators: Vec<PauliOperator>,
    gauge_generators: Vec<PauliOperator>,
    s: usize,
    r_gauge: usize,
    k_logical: usize,
    label: String,
}

impl SubsystemCode {
    /// Build and check that every stabilizer lies in the gauge group and
    /// commutes with every gauge generator.
    pub fn new(
        n: usize,
        stabilizer_generators: Vec<PauliOperator>,
        gauge_generators: Vec<PauliOperator>,
        label: impl Into<String>,
    ) -> Result<Self, CodeError> {
        let mut issues = Vec::new();
        for (i, s) in stabilizer_generators.iter().enumerate() {
            if s.n() != n {
                return Err(CodeError::Size { expected: n, found: s.n() });
            }
            for (j, g) in gauge_generators.iter().enumerate() {
                if g.n() != n {
                    return Err(CodeError::Size { expected: n, found: g.n() });
                }
                if s.anticommutes(g) {
                    issues.push(Issue::Anticommuting { i, j });
                }
            }
            if !in_span(s, &gauge_generators, false).member {
                issues.push(Issue::LogicalNotCommuting { logical: s.to_string(), generator: i });
            }
        }
        if !issues.is_empty() {
            return Err(CodeError::Invalid(ValidationReport { issues }));
        }
        let s = BinaryMatrix::from_rows(2 * n, stabilizer_generators.iter().map(PauliOperator::symplectic).collect())
            .rank();
        let gauge_basis: Vec<BitVec> = {
            let mut b = SpanBasis::new(2 * n);
            gauge_generators.iter().map(PauliOperator::symplectic).filter(|v| b.insert(v)).collect()
        };
        let omega = BinaryMatrix::from_rows(
            gauge_basis.len(),
            gauge_basis
                .iter()
                .map(|a| BitVec::from_bools(&gauge_basis.iter().map(|b| symplectic_product(a, b)).collect::<Vec<_>>()))
                .collect(),
        );
        let r_gauge = omega.rank() / 2;
        let k_logical = n.saturating_sub(s + r_gauge);
        Ok(SubsystemCode { n, stabilizer_generators, gauge_generators, s, r_gauge, k_logical, label: label.into() })
    }

    /// A stabilizer code viewed as a subsystem code with no gauge qubits.
    pub fn from_stabilizer(code: &StabilizerCode) -> Self {
        SubsystemCode::new(code.n(), code.generators().to_vec(), code.generators().to_vec(), code.label())
            .expect("a valid stabilizer code is a valid subsystem code")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizer_generators(&self) -> &[PauliOperator] {
        &self.stabilizer_generators
    }

    pub fn gauge_generators(&self) -> &[PauliOperator] {
        &self.gauge_generators
    }

    /// Rank of the stabilizer group.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of gauge qubits.
    pub fn r_gauge(&self) -> usize {
        self.r_gauge
    }

    /// Logical qubits `n - s - r`, recorded as derived metadata.
    pub fn k_logical(&self) -> usize {
        self.k_logical
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// GF(2) rank of the gauge generators.
    pub fn gauge_rank(&self) -> usize {
        BinaryMatrix::from_rows(2 * self.n, self.gauge_generators.iter().map(PauliOperator::symplectic).collect())
            .rank()
    }
}
