//! Pauli operators in binary symplectic form.
//!
//! An operator is stored as `i^phase * P_1 ⊗ ... ⊗ P_n` where each factor is
//! chosen from `{I, X, Y, Z}` by its `(x, z)` bit pair (`Y` is `(1, 1)`).
//! Hermitian operators have an even phase, i.e. an overall sign of ±1.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitVec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("operator is not Hermitian (phase i^{0})")]
    NotHermitian(u8),
    #[error("cannot parse Pauli operator {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    /// Hermitian operator from its bit-vectors; `negative` selects the −1 sign.
    pub fn from_bits(x: BitVec, z: BitVec, negative: bool) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch(x.len(), z.len()));
        }
        Ok(PauliOperator { x, z, phase: if negative { 2 } else { 0 } })
    }

    /// Operator with an arbitrary `i^phase` prefactor. Used for intermediate
    /// products; most callers want [`PauliOperator::from_bits`].
    pub fn with_phase(x: BitVec, z: BitVec, phase: u8) -> Self {
        assert_eq!(x.len(), z.len());
        PauliOperator { x, z, phase: phase % 4 }
    }

    /// Operator acting as `p` on qubit `q` (0-based) and identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut op = PauliOperator::identity(n);
        op.set(q, p);
        op
    }

    /// Tensor product of the listed letters, sign +1.
    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut op = PauliOperator::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            op.set(q, p);
        }
        op
    }

    /// Operator with letter `p` on every qubit of `support` (0-based).
    pub fn uniform(n: usize, support: impl IntoIterator<Item = usize>, p: Pauli) -> Self {
        let mut op = PauliOperator::identity(n);
        for q in support {
            op.set(q, p);
        }
        op
    }

    /// Parse dense (`-XIZZY`) or sparse (`X1 X3 Z5`, `Z1Z2`) text.
    ///
    /// Sparse input needs `n` unless the largest index should define it.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self, PauliError> {
        let err = |reason: &str| PauliError::Parse { text: text.to_string(), reason: reason.to_string() };
        let mut s = text.trim();
        let mut negative = false;
        if let Some(rest) = s.strip_prefix('+') {
            s = rest;
        } else if let Some(rest) = s.strip_prefix('-').or_else(|| s.strip_prefix('\u{2212}')) {
            negative = true;
            s = rest;
        }
        let s = s.trim();
        if s.is_empty() {
            return Err(err("empty operator"));
        }
        let op = if !s.chars().any(|c| c.is_ascii_digit()) && !s.contains(char::is_whitespace) {
            let mut letters = Vec::with_capacity(s.len());
            for c in s.chars() {
                letters.push(Pauli::from_letter(c).ok_or_else(|| err("expected only I, X, Y, Z"))?);
            }
            if s == "I" && n.is_some_and(|n| n != 1) {
                PauliOperator::identity(n.unwrap_or(1))
            } else {
                if let Some(n) = n {
                    if n != letters.len() {
                        return Err(err(&format!("expected {n} qubits, found {}", letters.len())));
                    }
                }
                PauliOperator::from_paulis(&letters)
            }
        } else {
            let mut factors: Vec<(usize, Pauli)> = Vec::new();
            let mut chars = s.chars().peekable();
            while let Some(c) = chars.next() {
                if c.is_whitespace() {
                    continue;
                }
                let p = Pauli::from_letter(c).ok_or_else(|| err("expected a Pauli letter"))?;
                let mut digits = String::new();
                while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                    digits.push(d);
                    chars.next();
                }
                if digits.is_empty() {
                    if p == Pauli::I {
                        continue;
                    }
                    return Err(err("sparse factor without a qubit index"));
                }
                let idx: usize = digits.parse().map_err(|_| err("bad qubit index"))?;
                if idx == 0 {
                    return Err(err("qubit indices are 1-based"));
                }
                factors.push((idx - 1, p));
            }
            let needed = factors.iter().map(|&(q, _)| q + 1).max().unwrap_or(0);
            let n = match n {
                Some(n) if n < needed => return Err(err(&format!("index {needed} exceeds {n} qubits"))),
                Some(n) => n,
                None => needed.max(1),
            };
            let mut op = PauliOperator::identity(n);
            for (q, p) in factors {
                if op.get(q) != Pauli::I {
                    return Err(err(&format!("qubit {} listed twice", q + 1)));
                }
                op.set(q, p);
            }
            op
        };
        Ok(if negative { op.negated() } else { op })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z(&self) -> &BitVec {
        &self.z
    }

    /// Exponent `e` of the `i^e` prefactor.
    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// True for a Hermitian operator with sign −1.
    #[inline]
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    /// Sign of a Hermitian operator.
    pub fn sign(&self) -> Result<i8, PauliError> {
        match self.phase {
            0 => Ok(1),
            2 => Ok(-1),
            p => Err(PauliError::NotHermitian(p)),
        }
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn weight(&self) -> usize {
        self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).iter_ones().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn negated(&self) -> Self {
        PauliOperator { x: self.x.clone(), z: self.z.clone(), phase: (self.phase + 2) % 4 }
    }

    /// Same tensor factors with sign +1.
    pub fn unsigned(&self) -> Self {
        PauliOperator { x: self.x.clone(), z: self.z.clone(), phase: 0 }
    }

    /// Multiply by `i^k`.
    pub fn times_i(&self, k: u8) -> Self {
        PauliOperator { x: self.x.clone(), z: self.z.clone(), phase: (self.phase + k) % 4 }
    }

    /// Symplectic vector `(x | z)` of length 2n.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Inverse of [`PauliOperator::symplectic`], sign +1.
    pub fn from_symplectic(v: &BitVec) -> Self {
        let n = v.len() / 2;
        PauliOperator { x: v.slice(0, n), z: v.slice(n, n), phase: 0 }
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    /// Symplectic-form commutation test; panics in debug builds on length mismatch.
    #[inline]
    pub fn commutes_unchecked(&self, other: &PauliOperator) -> bool {
        debug_assert_eq!(self.n(), other.n());
        let mut acc = 0u64;
        let (ax, az, bx, bz) = (self.x.words(), self.z.words(), other.x.words(), other.z.words());
        for i in 0..ax.len() {
            acc ^= (ax[i] & bz[i]) ^ (az[i] & bx[i]);
        }
        acc.count_ones() % 2 == 0
    }

    #[inline]
    pub fn anticommutes(&self, other: &PauliOperator) -> bool {
        !self.commutes_unchecked(other)
    }

    /// Phase-exact product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        self.check_len(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn mul_unchecked(&self, other: &PauliOperator) -> PauliOperator {
        debug_assert_eq!(self.n(), other.n());
        let (ax, az, bx, bz) = (self.x.words(), self.z.words(), other.x.words(), other.z.words());
        let mut plus = 0i64;
        let mut minus = 0i64;
        for i in 0..ax.len() {
            let a_x = ax[i] & !az[i];
            let a_y = ax[i] & az[i];
            let a_z = !ax[i] & az[i];
            let b_x = bx[i] & !bz[i];
            let b_y = bx[i] & bz[i];
            let b_z = !bx[i] & bz[i];
            // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
            plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones() as i64;
            minus += ((a_y & b_x) | (a_z & b_y) | (a_x & b_z)).count_ones() as i64;
        }
        let phase = (self.phase as i64 + other.phase as i64 + plus - minus).rem_euclid(4) as u8;
        PauliOperator { x: self.x.xor(&other.x), z: self.z.xor(&other.z), phase }
    }

    /// Phase-exact product of a sequence (left to right); identity when empty.
    pub fn product<'a>(n: usize, ops: impl IntoIterator<Item = &'a PauliOperator>) -> PauliOperator {
        ops.into_iter().fold(PauliOperator::identity(n), |acc, op| acc.mul_unchecked(op))
    }

    /// Conjugate by a Hadamard on qubit `q`: X and Z swap, Y gains a sign.
    pub fn conjugate_h(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.phase = (self.phase + 2) % 4;
        }
        self.x.set(q, z);
        self.z.set(q, x);
    }

    /// Conjugate by the phase gate on `q`: X -> Y, Y -> -X.
    pub fn conjugate_s(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.phase = (self.phase + 2) % 4;
        }
        self.z.set(q, z ^ x);
    }

    /// Conjugate by the inverse phase gate on `q`: X -> -Y, Y -> X.
    pub fn conjugate_sdg(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && !z {
            self.phase = (self.phase + 2) % 4;
        }
        self.z.set(q, z ^ x);
    }

    /// Conjugate by a controlled-NOT with control `a` and target `b`.
    pub fn conjugate_cx(&mut self, a: usize, b: usize) {
        let (xa, za, xb, zb) = (self.x.get(a), self.z.get(a), self.x.get(b), self.z.get(b));
        if xa && zb && (xb == za) {
            self.phase = (self.phase + 2) % 4;
        }
        self.x.set(b, xb ^ xa);
        self.z.set(a, za ^ zb);
    }

    /// Append `extra` identity factors.
    pub fn padded(&self, extra: usize) -> PauliOperator {
        PauliOperator { x: self.x.extended(extra), z: self.z.extended(extra), phase: self.phase }
    }

    /// Operator whose qubit `perm[q]` carries this operator's factor on qubit `q`.
    pub fn permuted(&self, perm: &[usize]) -> PauliOperator {
        let mut out = PauliOperator::identity(self.n());
        out.phase = self.phase;
        for q in 0..self.n() {
            out.set(perm[q], self.get(q));
        }
        out
    }

    /// Restriction to the listed qubits, in order.
    pub fn restricted(&self, qubits: &[usize]) -> PauliOperator {
        let mut out = PauliOperator::identity(qubits.len());
        out.phase = self.phase;
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out
    }

    /// Dense letters without a sign.
    pub fn letters(&self) -> String {
        (0..self.n()).map(|q| self.get(q).letter()).collect()
    }

    /// Sparse form such as `X1 X3 Z5`; identity prints as `I`.
    pub fn sparse(&self) -> String {
        let body: Vec<String> = (0..self.n())
            .filter_map(|q| match self.get(q) {
                Pauli::I => None,
                p => Some(format!("{}{}", p.letter(), q + 1)),
            })
            .collect();
        let body = if body.is_empty() { "I".to_string() } else { body.join(" ") };
        format!("{}{}", phase_prefix(self.phase), body)
    }

    /// Compact sparse form such as `Z1Z2Z3`.
    pub fn compact(&self) -> String {
        self.sparse().replace(' ', "")
    }

    /// Order on the dense unsigned string with `I < X < Y < Z`.
    pub fn lex_cmp(&self, other: &PauliOperator) -> Ordering {
        for q in 0..self.n().min(other.n()) {
            match self.get(q).cmp(&other.get(q)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.n().cmp(&other.n())
    }

    fn check_len(&self, other: &PauliOperator) -> Result<(), PauliError> {
        if self.n() != other.n() {
            Err(PauliError::LengthMismatch(self.n(), other.n()))
        } else {
            Ok(())
        }
    }
}

fn phase_prefix(phase: u8) -> &'static str {
    match phase {
        0 => "",
        1 => "i",
        2 => "-",
        _ => "-i",
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", phase_prefix(self.phase), self.letters())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for PauliOperator {
    type Err = PauliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PauliOperator::parse(s, None)
    }
}

impl std::ops::Mul for &PauliOperator {
    type Output = PauliOperator;
    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.multiply(rhs).expect("qubit count mismatch in Pauli product")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s, None).unwrap()
    }

    #[test]
    fn parse_dense_and_sparse_agree() {
        assert_eq!(p("XIZ"), PauliOperator::parse("X1 Z3", Some(3)).unwrap());
        assert_eq!(p("XIZ"), PauliOperator::parse("X1Z3", Some(3)).unwrap());
        assert_eq!(p("-XIZZY").to_string(), "-XIZZY");
        assert_eq!(p("\u{2212}XZ"), p("-XZ"));
        assert_eq!(p("+Y"), p("Y"));
        assert_eq!(PauliOperator::parse("I", Some(4)).unwrap(), PauliOperator::identity(4));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PauliOperator::parse("XQ", None).is_err());
        assert!(PauliOperator::parse("X0", None).is_err());
        assert!(PauliOperator::parse("X5", Some(3)).is_err());
        assert!(PauliOperator::parse("X1 Z1", None).is_err());
        assert!(PauliOperator::parse("XX", Some(3)).is_err());
        assert!(PauliOperator::parse("", None).is_err());
    }

    #[test]
    fn sparse_printing() {
        assert_eq!(p("XIXIZ").sparse(), "X1 X3 Z5");
        assert_eq!(p("-IZ").sparse(), "-Z2");
        assert_eq!(PauliOperator::identity(3).sparse(), "I");
        assert_eq!(p("ZZZ").compact(), "Z1Z2Z3");
    }

    #[test]
    fn single_qubit_products() {
        // XY = iZ, YX = -iZ, XZ = -iY, ZX = iY
        assert_eq!(p("X").mul_unchecked(&p("Y")), p("Z").times_i(1));
        assert_eq!(p("Y").mul_unchecked(&p("X")), p("Z").times_i(3));
        assert_eq!(p("X").mul_unchecked(&p("Z")), p("Y").times_i(3));
        assert_eq!(p("Z").mul_unchecked(&p("X")), p("Y").times_i(1));
        assert_eq!(p("Y").mul_unchecked(&p("Y")), p("I"));
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes_unchecked(&p("Z")));
        assert!(!p("ZZI").commutes_unchecked(&p("IXX")));
        assert!(p("ZZZ").commutes_unchecked(&p("IXX")));
        assert!(p("ZZ").commutes(&p("ZZZ")).is_err());
    }

    #[test]
    fn weight_and_support() {
        assert_eq!(PauliOperator::identity(5).weight(), 0);
        assert_eq!(p("XIXIXIX").weight(), 4);
        assert_eq!(p("IIIIIIZ").weight(), 1);
        assert_eq!(p("IYIZ").support(), vec![1, 3]);
    }

    #[test]
    fn lex_order_puts_identity_first() {
        assert_eq!(p("IX").lex_cmp(&p("XI")), Ordering::Less);
        assert_eq!(p("XZ").lex_cmp(&p("YI")), Ordering::Less);
        assert_eq!(p("ZI").lex_cmp(&p("ZI")), Ordering::Equal);
    }

    #[test]
    fn permute_and_restrict() {
        let op = p("XYZ");
        assert_eq!(op.permuted(&[2, 0, 1]), p("YZX"));
        assert_eq!(op.restricted(&[2, 0]), p("ZX"));
        assert_eq!(op.padded(2), p("XYZII"));
    }
}
