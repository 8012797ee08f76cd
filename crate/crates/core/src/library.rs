//! Code fixtures: Steane, Reed-Muller, surface-code patches with defects,
//! the twist fixture, the small worked examples and random codes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::{CodeError, Placement, StabilizerCode};
use crate::gf2::SpanBasis;
use crate::pauli::{Pauli, PauliOperator};

fn code(n: usize, label: &str, gens: &[&str]) -> StabilizerCode {
    StabilizerCode::from_strs(n, label, gens).expect("fixture generators parse")
}

pub fn steane() -> StabilizerCode {
    code(7, "steane", &["X1X3X5X7", "X2X3X6X7", "X4X5X6X7", "Z1Z3Z5Z7", "Z2Z3Z6Z7", "Z4Z5Z6Z7"])
}

/// Steane code on 15 qubits, qubits 8..15 fixed by single `Z` stabilizers.
pub fn padded_steane() -> StabilizerCode {
    steane().pad_with_ancillas(8, Placement::End).with_label("steane15")
}

pub fn reed_muller() -> StabilizerCode {
    code(
        15,
        "reed_muller15",
        &[
            "X1X3X5X7X9X11X13X15",
            "X2X3X6X7X10X11X14X15",
            "X4X5X6X7X12X13X14X15",
            "X8X9X10X11X12X13X14X15",
            "Z1Z3Z5Z7Z9Z11Z13Z15",
            "Z2Z3Z6Z7Z10Z11Z14Z15",
            "Z4Z5Z6Z7Z12Z13Z14Z15",
            "Z8Z9Z10Z11Z12Z13Z14Z15",
            "Z1Z3Z9Z11",
            "Z2Z3Z10Z11",
            "Z3Z7Z11Z15",
            "Z1Z3Z5Z7",
            "Z2Z3Z6Z7",
            "Z4Z5Z6Z7",
        ],
    )
}

/// Plaquette type in the checkerboard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plaquette {
    Z,
    X,
}

/// Planar checkerboard patch of `rows x cols` square plaquettes with qubits
/// on the `(rows+1) x (cols+1)` vertices, numbered row-major from the top
/// left. Plaquette `(r, c)` is Z-type when `r + c` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLayout {
    pub rows: usize,
    pub cols: usize,
    /// Removed plaquettes.
    pub defects: Vec<(usize, usize)>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("defect ({0}, {1}) lies outside the patch")]
    OutOfRange(usize, usize),
    #[error("defect ({0}, {1}) listed twice")]
    Overlap(usize, usize),
}

impl SurfaceLayout {
    pub fn new(rows: usize, cols: usize) -> Self {
        SurfaceLayout { rows, cols, defects: Vec::new() }
    }

    pub fn with_defect(mut self, r: usize, c: usize) -> Self {
        self.defects.push((r, c));
        self
    }

    pub fn n(&self) -> usize {
        (self.rows + 1) * (self.cols + 1)
    }

    pub fn vertex(&self, r: usize, c: usize) -> usize {
        r * (self.cols + 1) + c
    }

    pub fn kind(&self, r: usize, c: usize) -> Plaquette {
        if (r + c) % 2 == 0 {
            Plaquette::Z
        } else {
            Plaquette::X
        }
    }

    /// Corner qubits of plaquette `(r, c)`.
    pub fn corners(&self, r: usize, c: usize) -> [usize; 4] {
        [self.vertex(r, c), self.vertex(r, c + 1), self.vertex(r + 1, c), self.vertex(r + 1, c + 1)]
    }

    pub fn stabilizer(&self, r: usize, c: usize) -> PauliOperator {
        let p = match self.kind(r, c) {
            Plaquette::Z => Pauli::Z,
            Plaquette::X => Pauli::X,
        };
        PauliOperator::uniform(self.n(), self.corners(r, c), p)
    }
}

/// One generator per intact plaquette, in row-major plaquette order.
pub fn build_surface_code(layout: &SurfaceLayout, label: &str) -> Result<StabilizerCode, LayoutError> {
    for (i, &(r, c)) in layout.defects.iter().enumerate() {
        if r >= layout.rows || c >= layout.cols {
            return Err(LayoutError::OutOfRange(r, c));
        }
        if layout.defects[..i].contains(&(r, c)) {
            return Err(LayoutError::Overlap(r, c));
        }
    }
    let mut gens = Vec::new();
    for r in 0..layout.rows {
        for c in 0..layout.cols {
            if !layout.defects.contains(&(r, c)) {
                gens.push(layout.stabilizer(r, c));
            }
        }
    }
    Ok(StabilizerCode::new(layout.n(), gens, label))
}

/// Relabeling that sends the listed vertices to qubits `0, 1, ...` and the
/// remaining vertices, in order, after them.
fn front_permutation(n: usize, front: &[usize]) -> Vec<usize> {
    let mut perm = vec![usize::MAX; n];
    for (i, &v) in front.iter().enumerate() {
        perm[v] = i;
    }
    let mut next = front.len();
    for p in perm.iter_mut() {
        if *p == usize::MAX {
            *p = next;
            next += 1;
        }
    }
    perm
}

/// Moving a Z-type defect to the diagonally adjacent plaquette on a 4x4
/// patch. Qubits are relabeled so the two plaquettes are `{1,2,3,4}` and
/// `{4,5,6,7}` (1-based), the shared corner being qubit 4.
pub fn defect_hop_pair() -> (StabilizerCode, StabilizerCode) {
    let layout = SurfaceLayout::new(4, 4);
    let (p, q) = ((1, 1), (2, 2));
    let [a, b, c, shared] = layout.corners(p.0, p.1);
    let [_, e, f, g] = layout.corners(q.0, q.1);
    let perm = front_permutation(layout.n(), &[a, b, c, shared, e, f, g]);
    let left = build_surface_code(&layout.clone().with_defect(q.0, q.1), "defect_hop_left").expect("valid layout");
    let right = build_surface_code(&layout.with_defect(p.0, p.1), "defect_hop_right").expect("valid layout");
    (left.permute_qubits(&perm).expect("permutation"), right.permute_qubits(&perm).expect("permutation"))
}

/// Layout used for the e-to-m conversion: a 4x5 patch where the Z plaquette
/// `(1, 3)` and the neighbouring X plaquette `(2, 3)` trade places as the
/// removed stabilizer.
pub fn e_to_m_layout() -> SurfaceLayout {
    SurfaceLayout::new(4, 5)
}

pub fn e_to_m_pair() -> (StabilizerCode, StabilizerCode) {
    let layout = e_to_m_layout();
    let left = build_surface_code(&layout.clone().with_defect(1, 3), "e_to_m_left").expect("valid layout");
    let right = build_surface_code(&layout.with_defect(2, 3), "e_to_m_right").expect("valid layout");
    (left, right)
}

/// The twist-shortening move. `g0'` carries sign −1 so that
/// `g0 g1 = g0' g1'` holds exactly, not just up to sign.
pub fn twist_pair() -> (StabilizerCode, StabilizerCode) {
    (
        code(7, "twist_left", &["Z1Z2X4X5", "X2X3Z5Y6X7"]),
        code(7, "twist_right", &["-Z1Z2X4Y5Z6", "X2X3X6X7"]),
    )
}

pub fn toy_2q() -> (StabilizerCode, StabilizerCode) {
    (code(2, "toy_2q_a", &["Z1"]), code(2, "toy_2q_b", &["Z2"]))
}

pub fn toy_3q() -> (StabilizerCode, StabilizerCode) {
    (code(3, "toy_3q_a", &["Z1Z2", "Z3"]), code(3, "toy_3q_b", &["Z1", "X2X3"]))
}

/// Steane code and the same code with qubits 3 and 4 exchanged.
pub fn qubit_swap_pair() -> (StabilizerCode, StabilizerCode) {
    let mut perm: Vec<usize> = (0..7).collect();
    perm.swap(2, 3);
    let b = steane().permute_qubits(&perm).expect("transposition").with_label("qubit_swap_b");
    (steane().with_label("qubit_swap_a"), b)
}

/// The low-distance intermediate code listed for the qubit-swap example.
pub fn qubit_swap_mid() -> StabilizerCode {
    code(7, "qubit_swap_mid", &["Z1Z4Z5Z7", "X1X2X5X6", "X1X3X4X6", "Z1Z3Z5Z7", "Z1Z2Z5Z6", "Z1Z3Z4Z6"])
}

/// Every named fixture, in a stable order.
pub fn fixtures() -> Vec<(&'static str, StabilizerCode)> {
    let (c2a, c2b) = toy_2q();
    let (c3a, c3b) = toy_3q();
    let (da, db) = qubit_swap_pair();
    let (f1l, f1r) = defect_hop_pair();
    let (f3l, f3r) = twist_pair();
    vec![
        ("steane", steane()),
        ("steane15", padded_steane()),
        ("reed_muller15", reed_muller()),
        ("toy_2q_a", c2a),
        ("toy_2q_b", c2b),
        ("toy_3q_a", c3a),
        ("toy_3q_b", c3b),
        ("qubit_swap_a", da),
        ("qubit_swap_mid", qubit_swap_mid()),
        ("qubit_swap_b", db),
        ("defect_hop_left", f1l),
        ("defect_hop_right", f1r),
        ("twist_left", f3l),
        ("twist_right", f3r),
    ]
}

pub fn fixture(name: &str) -> Option<StabilizerCode> {
    fixtures().into_iter().find(|(n, _)| *n == name).map(|(_, c)| c)
}

/// Write every fixture as `<dir>/<name>.code`.
pub fn export_fixtures(dir: &std::path::Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, c) in fixtures() {
        std::fs::write(dir.join(format!("{name}.code")), c.to_text())?;
    }
    Ok(())
}

/// Random valid code with `n - k` commuting independent generators, all
/// with sign +. Generators are drawn with a bias towards low weight.
pub fn random_code(n: usize, k: usize, rng: &mut impl Rng) -> Result<StabilizerCode, CodeError> {
    assert!(k <= n, "k exceeds n");
    let mut gens: Vec<PauliOperator> = Vec::new();
    let mut span = SpanBasis::new(2 * n);
    let density = rng.gen_range(0.2..0.8);
    while gens.len() < n - k {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            if rng.gen_bool(density) {
                p.set(q, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]);
            }
        }
        if p.is_identity() || gens.iter().any(|g| g.anticommutes(&p)) || span.contains(&p.symplectic()) {
            continue;
        }
        span.insert(&p.symplectic());
        gens.push(p);
    }
    StabilizerCode::checked(n, gens, format!("random_n{n}_k{k}"))
}

/// Seeded pair of random codes with equal `n` and `k`.
pub fn random_pair(seed: u64, max_n: usize) -> (StabilizerCode, StabilizerCode) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(0..n.min(3) + 1).min(n);
    let a = random_code(n, k, &mut rng).expect("random code is valid").with_label("rand_a");
    let b = random_code(n, k, &mut rng).expect("random code is valid").with_label("rand_b");
    (a, b)
}
