//! Test-side reference implementations built from plain Pauli matrices and
//! dense diagonalization, independent of the library's sector machinery.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, SymmetricEigen};

pub type C = Complex<f64>;
pub type M = DMatrix<C>;

pub fn c(re: f64) -> C {
    Complex::new(re, 0.0)
}

pub fn pauli(axis: usize) -> M {
    let i = Complex::i();
    match axis {
        0 => M::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        1 => M::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]),
        _ => M::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
    }
}

pub fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

/// `op` on qubit `site` of `n` (site 0 is the most significant factor).
pub fn on_site(op: &M, site: usize, n: usize) -> M {
    let mut out = M::identity(1, 1);
    for k in 0..n {
        out = kron(&out, &if k == site { op.clone() } else { M::identity(2, 2) });
    }
    out
}

/// Σ_i (σ_x σ_x + σ_y σ_y)/4 between qubit 0 and each other qubit, as a real matrix.
pub fn flip_flop(n_spins: usize) -> DMatrix<f64> {
    let mut h = M::zeros(1 << n_spins, 1 << n_spins);
    for i in 1..n_spins {
        for a in 0..2 {
            h += on_site(&pauli(a), 0, n_spins) * on_site(&pauli(a), i, n_spins) * c(0.25);
        }
    }
    h.map(|z| z.re)
}

/// exp(−iθH) for a real symmetric H.
pub fn propagator(h: &DMatrix<f64>, theta: f64) -> M {
    let eig = SymmetricEigen::new(h.clone());
    let v = eig.eigenvectors.map(c);
    let d = M::from_diagonal(&eig.eigenvalues.map(|e| Complex::from_polar(1.0, -theta * e)));
    &v * d * v.adjoint()
}

pub fn conj(u: &M, rho: &M) -> M {
    u * rho * u.adjoint()
}

/// Diagonal qubit with ⟨σ_z⟩ = p.
pub fn qubit(p: f64) -> M {
    M::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5 * (1.0 + p)), c(0.5 * (1.0 - p))]))
}

pub fn product(pols: &[f64]) -> M {
    pols.iter().fold(M::identity(1, 1), |acc, &p| kron(&acc, &qubit(p)))
}

pub fn expect(rho: &M, op: &M) -> f64 {
    (rho * op).trace().re
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix through its real 2d×2d embedding,
/// each returned once.
pub fn hermitian_eigenvalues(m: &M) -> Vec<f64> {
    let d = m.nrows();
    let mut big = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for r in 0..d {
        for col in 0..d {
            let z = m[(r, col)];
            big[(r, col)] = z.re;
            big[(r + d, col + d)] = z.re;
            big[(r, col + d)] = -z.im;
            big[(r + d, col)] = z.im;
        }
    }
    let mut vals: Vec<f64> = SymmetricEigen::new(big).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals.iter().step_by(2).copied().collect()
}

pub fn entropy_nats(m: &M) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .filter(|&l| l > 1e-300)
        .map(|l| -l * l.ln())
        .sum()
}

/// Partial trace of a two-qubit matrix over qubit `traced` (0 or 1).
pub fn trace_out(rho: &M, traced: usize) -> M {
    let mut out = M::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            for k in 0..2 {
                let (r, col) = if traced == 0 { (2 * k + a, 2 * k + b) } else { (2 * a + k, 2 * b + k) };
                out[(a, b)] += rho[(r, col)];
            }
        }
    }
    out
}
