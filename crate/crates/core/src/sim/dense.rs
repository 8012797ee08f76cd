//! Dense state-vector helpers for cross-checks at very small `n`.
//!
//! Qubit `q` is bit `q` of the basis-state index.

use num_complex::Complex64;

use crate::pauli::PauliOperator;

pub type Matrix = Vec<Vec<Complex64>>;

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Matrix of a Pauli operator, phase included.
pub fn pauli_matrix(p: &PauliOperator) -> Matrix {
    let n = p.n();
    assert!(n <= 10, "dense matrices are limited to small n");
    let dim = 1usize << n;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut row = col;
        let mut k = p.phase();
        for q in 0..n {
            let bit = (col >> q) & 1 == 1;
            match (p.x().get(q), p.z().get(q)) {
                (true, false) => row ^= 1 << q,
                (false, true) => k += if bit { 2 } else { 0 },
                (true, true) => {
                    // Y|0> = i|1>, Y|1> = -i|0>
                    row ^= 1 << q;
                    k += if bit { 3 } else { 1 };
                }
                (false, false) => {}
            }
        }
        m[row][col] = i_pow(k);
    }
    m
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    (0..dim)
        .map(|i| (0..dim).map(|j| (0..dim).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn adjoint(a: &Matrix) -> Matrix {
    let dim = a.len();
    (0..dim).map(|i| (0..dim).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Matrix, s: Complex64) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn apply(a: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Largest entry-wise deviation.
pub fn max_deviation(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

/// `U = (1 + g' g) / sqrt(2)`.
pub fn rewire_unitary(g: &PauliOperator, g_new: &PauliOperator) -> Matrix {
    let prod = matmul(&pauli_matrix(g_new), &pauli_matrix(g));
    let dim = prod.len();
    scale(&add(&identity(dim), &prod), Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
}

/// State vector stabilized by the given `n` generators.
pub fn stabilizer_vector(gens: &[PauliOperator], n: usize) -> Vec<Complex64> {
    let dim = 1usize << n;
    let projectors: Vec<Matrix> = gens
        .iter()
        .map(|g| scale(&add(&identity(dim), &pauli_matrix(g)), Complex64::new(0.5, 0.0)))
        .collect();
    for start in 0..dim {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[start] = Complex64::new(1.0, 0.0);
        for p in &projectors {
            v = apply(p, &v);
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
    panic!("generators admit no common +1 eigenvector")
}

/// Distance between two normalized vectors after removing the global phase.
pub fn phase_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 1e-12 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}
