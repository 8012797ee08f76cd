//! Independent dense-matrix oracle. Built from Kronecker products of the
//! printed letters, with the first letter as the most significant factor.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use rewire::pauli::PauliOperator;

pub type M = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn letter(ch: char) -> M {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match ch {
        'I' => vec![vec![l, o], vec![o, l]],
        'X' => vec![vec![o, l], vec![l, o]],
        'Y' => vec![vec![o, -i], vec![i, o]],
        'Z' => vec![vec![l, o], vec![o, -l]],
        _ => panic!("bad letter {ch}"),
    }
}

pub fn kron(a: &M, b: &M) -> M {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Dense matrix of a Pauli operator, read from its printed form.
pub fn pauli(p: &PauliOperator) -> M {
    let text = p.to_string();
    let (prefactor, body) = if let Some(rest) = text.strip_prefix("-i") {
        (c(0.0, -1.0), rest)
    } else if let Some(rest) = text.strip_prefix('i') {
        (c(0.0, 1.0), rest)
    } else if let Some(rest) = text.strip_prefix('-') {
        (c(-1.0, 0.0), rest)
    } else {
        (c(1.0, 0.0), text.as_str())
    };
    let mut m = vec![vec![prefactor]];
    for ch in body.chars() {
        m = kron(&m, &letter(ch));
    }
    m
}

pub fn eye(d: usize) -> M {
    (0..d).map(|i| (0..d).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn mul(a: &M, b: &M) -> M {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn dagger(a: &M) -> M {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn lin(a: &M, s: C, b: &M, t: C) -> M {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u * s + v * t).collect()).collect()
}

pub fn act(a: &M, v: &[C]) -> Vec<C> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn close(a: &M, b: &M, tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| x.iter().zip(y).all(|(u, v)| (u - v).norm() <= tol))
}

pub fn normalize(v: Vec<C>) -> Vec<C> {
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// `(1 + P)/2`.
pub fn plus_projector(p: &PauliOperator) -> M {
    let d = 1 << p.n();
    lin(&eye(d), c(0.5, 0.0), &pauli(p), c(0.5, 0.0))
}

/// The unique state stabilized by `n` independent commuting operators.
pub fn state(gens: &[PauliOperator]) -> Vec<C> {
    let n = gens[0].n();
    let d = 1 << n;
    for start in 0..d {
        let mut v = vec![c(0.0, 0.0); d];
        v[start] = c(1.0, 0.0);
        for g in gens {
            v = act(&plus_projector(g), &v);
        }
        if v.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-8 {
            return normalize(v);
        }
    }
    panic!("no common eigenvector")
}

/// Equality of normalized vectors up to a global phase.
pub fn same_ray(a: &[C], b: &[C], tol: f64) -> bool {
    let overlap: C = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (overlap.norm() - 1.0).abs() <= tol && {
        let ph = overlap / overlap.norm();
        a.iter().zip(b).all(|(x, y)| (x * ph - y).norm() <= tol)
    }
}

/// `U = (1 + g' g)/sqrt(2)`.
pub fn rewire_u(g: &PauliOperator, g_new: &PauliOperator) -> M {
    let d = 1 << g.n();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    lin(&eye(d), c(r, 0.0), &mul(&pauli(g_new), &pauli(g)), c(r, 0.0))
}

/// Every Pauli on `n` qubits with sign +1.
pub fn all_paulis(n: usize) -> Vec<PauliOperator> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out.iter().flat_map(|s| ["I", "X", "Y", "Z"].map(|l| format!("{s}{l}"))).collect();
    }
    out.iter().map(|s| PauliOperator::parse(s, None).unwrap()).collect()
}

/// Random Hermitian Pauli with a random sign.
pub fn random_pauli(n: usize, rng: &mut impl rand::Rng) -> PauliOperator {
    let s: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect();
    let p = PauliOperator::parse(&s, None).unwrap();
    if rng.gen_bool(0.5) {
        p.negated()
    } else {
        p
    }
}

/// Rank over GF(2) of symplectic rows, by plain elimination on bools.
pub fn rank(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] {
                let pivot = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn bools(p: &PauliOperator) -> Vec<bool> {
    let s = p.symplectic();
    (0..s.len()).map(|i| s.get(i)).collect()
}

fn commute_bools(a: &[bool], b: &[bool]) -> bool {
    let n = a.len() / 2;
    (0..n).filter(|&q| (a[q] & b[n + q]) ^ (a[n + q] & b[q])).count() % 2 == 0
}

/// Smallest weight of an operator commuting with `commutant` and outside
/// the span of `excluded`, by enumerating supports of growing size.
pub fn brute_distance(n: usize, commutant: &[PauliOperator], excluded: &[PauliOperator], max_w: usize) -> Option<usize> {
    let com: Vec<Vec<bool>> = commutant.iter().map(bools).collect();
    let exc: Vec<Vec<bool>> = excluded.iter().map(bools).collect();
    let base = rank(&exc);
    for w in 1..=max_w.min(n) {
        let mut support: Vec<usize> = (0..w).collect();
        loop {
            for letters in 0..3usize.pow(w as u32) {
                let mut v = vec![false; 2 * n];
                let mut l = letters;
                for &q in &support {
                    match l % 3 {
                        0 => v[q] = true,
                        1 => {
                            v[q] = true;
                            v[n + q] = true;
                        }
                        _ => v[n + q] = true,
                    }
                    l /= 3;
                }
                if com.iter().all(|c| commute_bools(c, &v)) {
                    let mut ext = exc.clone();
                    ext.push(v);
                    if rank(&ext) > base {
                        return Some(w);
                    }
                }
            }
            if !next_combination(&mut support, n) {
                break;
            }
        }
    }
    None
}

fn next_combination(s: &mut [usize], n: usize) -> bool {
    let w = s.len();
    for i in (0..w).rev() {
        if s[i] < n - w + i {
            s[i] += 1;
            for j in i + 1..w {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
