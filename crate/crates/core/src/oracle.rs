//! Brute-force reference routes, kept deliberately independent of the
//! simulator kernels: circuit unitaries via explicit Kronecker products,
//! Pauli words as matrices, and a Jacobi eigensolver for exact
//! diagonalization. Test suites lean on these as second opinions.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, PauliLetter, PauliString, PauliSum, Sign};
use crate::matrix::Matrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_letter_matrix(letter: PauliLetter) -> Matrix {
    match letter {
        PauliLetter::I => Matrix::identity(2),
        PauliLetter::X => Matrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]),
        PauliLetter::Y => Matrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]]),
        PauliLetter::Z => Matrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]]),
    }
}

/// The 2^n × 2^n matrix of a signed Pauli word (qubit 0 as the leftmost,
/// most significant tensor factor).
pub fn pauli_matrix(p: &PauliString) -> Matrix {
    let mut m = Matrix::identity(1);
    for k in 0..p.len() {
        m = m.kron(&pauli_letter_matrix(p.letter(k)));
    }
    let sign = match p.sign() {
        Sign::Plus => c(1.0, 0.0),
        Sign::PlusI => c(0.0, 1.0),
        Sign::Minus => c(-1.0, 0.0),
        Sign::MinusI => c(0.0, -1.0),
    };
    m.scale(sign)
}

pub fn pauli_sum_matrix(a: &PauliSum) -> Matrix {
    let n = a.n_qubits();
    let mut m = Matrix::zeros(1 << n, 1 << n);
    for (coeff, p) in a.terms() {
        m = m.add(&pauli_matrix(p).scale(c(*coeff, 0.0)));
    }
    m
}

fn single_qubit_matrix(g: &Gate) -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        Gate::H { .. } => Matrix::from_rows(&[&[c(s, 0.0), c(s, 0.0)], &[c(s, 0.0), c(-s, 0.0)]]),
        Gate::X { .. } => pauli_letter_matrix(PauliLetter::X),
        Gate::Y { .. } => pauli_letter_matrix(PauliLetter::Y),
        Gate::Z { .. } => pauli_letter_matrix(PauliLetter::Z),
        Gate::S { .. } => phase_matrix(std::f64::consts::FRAC_PI_2),
        Gate::Sdg { .. } => phase_matrix(-std::f64::consts::FRAC_PI_2),
        Gate::T { .. } => phase_matrix(std::f64::consts::FRAC_PI_4),
        Gate::Tdg { .. } => phase_matrix(-std::f64::consts::FRAC_PI_4),
        Gate::Rz { phase, .. } => phase_matrix(phase.radians_concrete()),
        _ => panic!("not a single-qubit gate"),
    }
}

fn phase_matrix(theta: f64) -> Matrix {
    Matrix::from_rows(&[
        &[c(1.0, 0.0), c(0.0, 0.0)],
        &[c(0.0, 0.0), Complex64::from_polar(1.0, theta)],
    ])
}

/// Kronecker chain with `factors[q]` at qubit `q` and identity elsewhere.
fn embed(n: usize, factors: &[(usize, Matrix)]) -> Matrix {
    let mut m = Matrix::identity(1);
    for q in 0..n {
        match factors.iter().find(|(k, _)| *k == q) {
            Some((_, f)) => m = m.kron(f),
            None => m = m.kron(&Matrix::identity(2)),
        }
    }
    m
}

/// Full unitary of one gate on an `n`-qubit register, via projector
/// decomposition for the controlled gates.
pub fn gate_matrix(g: &Gate, n: usize) -> Matrix {
    let p0 = Matrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
    let p1 = Matrix::from_rows(&[&[c(0.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
    match g {
        Gate::Cx { qubits } => {
            let x = pauli_letter_matrix(PauliLetter::X);
            embed(n, &[(qubits[0], p0)])
                .add(&embed(n, &[(qubits[0], p1), (qubits[1], x)]))
        }
        Gate::Cz { qubits } => {
            let z = pauli_letter_matrix(PauliLetter::Z);
            embed(n, &[(qubits[0], p0)])
                .add(&embed(n, &[(qubits[0], p1), (qubits[1], z)]))
        }
        one_qubit => embed(n, &[(one_qubit.qubits()[0], single_qubit_matrix(one_qubit))]),
    }
}

/// Circuit unitary as an explicit matrix product of per-gate Kronecker
/// embeddings — the slow route, independent of the statevector kernels.
pub fn circuit_matrix(circuit: &Circuit) -> Matrix {
    let n = circuit.n_qubits;
    let mut u = Matrix::identity(1 << n);
    for g in &circuit.gates {
        u = gate_matrix(g, n).mul(&u);
    }
    u
}

pub fn matrix_vector(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Uniformly random Pauli word with sign ±1, deterministic under `seed`.
pub fn random_pauli(n: usize, seed: u64) -> PauliString {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let letters: Vec<PauliLetter> = (0..n)
        .map(|_| match rng.gen_range(0..4) {
            0 => PauliLetter::I,
            1 => PauliLetter::X,
            2 => PauliLetter::Y,
            _ => PauliLetter::Z,
        })
        .collect();
    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
    PauliString::from_letters(&letters, sign)
}

/// All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending. Panics if the input has an imaginary or asymmetric part.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            assert!(m[(i, j)].im.abs() < 1e-12, "matrix must be real");
            a[i][j] = m[(i, j)].re;
        }
    }
    for i in 0..n {
        for j in 0..n {
            assert!((a[i][j] - a[j][i]).abs() < 1e-10, "matrix must be symmetric");
        }
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
                let (s, co) = theta.sin_cos();
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = co * akp - s * akq;
                    a[k][q] = s * akp + co * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = co * apk - s * aqk;
                    a[q][k] = s * apk + co * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Smallest eigenvalue of a Hermitian Pauli sum (real symmetric in every
/// case this crate constructs).
pub fn ground_energy(a: &PauliSum) -> f64 {
    symmetric_eigenvalues(&pauli_sum_matrix(a))[0]
}
