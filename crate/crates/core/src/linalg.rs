//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::scalar::{cabs, cplx, creal, lit, CMatrix, Real};

pub fn identity<T: Real>(dim: usize) -> CMatrix<T> {
    CMatrix::identity(dim, dim)
}

pub fn dagger<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.adjoint()
}

pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, first factor most significant.
pub fn kron_all<T: Real>(factors: &[CMatrix<T>]) -> CMatrix<T> {
    factors
        .iter()
        .fold(identity::<T>(1), |acc, f| kron(&acc, f))
}

pub fn commutator<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a * b - b * a
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.diagonal().iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
}

/// Real part of Tr(a·b) without forming the product.
pub fn trace_product_re<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let n = a.nrows();
    let mut acc = T::zero();
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc.max(cabs(*x - *y)))
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermiticity_defect<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            worst = worst.max(cabs(m[(i, j)] - m[(j, i)].conj()));
        }
    }
    worst
}

/// Symmetrize `(m + m†)/2` to wash out rounding drift.
pub fn hermitize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()).map(|z| z * lit::<T>(0.5))
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and
/// matching eigenvector columns.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = m.nrows();
    if n == 1 {
        return (vec![m[(0, 0)].re], identity(1));
    }
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    hermitian_eigen(m).0
}

/// Real symmetric eigen-decomposition, ascending.
pub fn symmetric_eigen<T: Real>(m: &DMatrix<T>) -> (Vec<T>, DMatrix<T>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `V · diag(exp(−iθλ)) · V†`.
pub fn spectral_unitary<T: Real>(values: &[T], vectors: &CMatrix<T>, theta: T) -> CMatrix<T> {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        let phase = -theta * lambda;
        let factor = cplx(phase.cos(), phase.sin());
        for r in 0..n {
            scaled[(r, c)] *= factor;
        }
    }
    scaled * vectors.adjoint()
}

/// `exp(−iθH)` for Hermitian `H`.
pub fn expm_hermitian<T: Real>(h: &CMatrix<T>, theta: T) -> CMatrix<T> {
    let (values, vectors) = hermitian_eigen(h);
    spectral_unitary(&values, &vectors, theta)
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &CMatrix<T>) -> T {
    m.clone()
        .singular_values()
        .iter()
        .fold(T::zero(), |acc, &s| acc.max(s))
}

pub fn conjugate<T: Real>(u: &CMatrix<T>, rho: &CMatrix<T>) -> CMatrix<T> {
    u * rho * u.adjoint()
}

/// `A · M · Bᵀ` for real `A`, `B`, done as real products on the parts of `M`.
pub fn real_congruence<T: Real>(a: &DMatrix<T>, m: &CMatrix<T>, b: &DMatrix<T>) -> CMatrix<T> {
    let re = a * m.map(|z| z.re) * b.transpose();
    let im = a * m.map(|z| z.im) * b.transpose();
    re.zip_map(&im, cplx)
}

pub fn from_real<T: Real>(m: &DMatrix<T>) -> CMatrix<T> {
    m.map(creal)
}

/// Spin-1/2 operators (σ/2) in the (|0⟩ = up, |1⟩ = down) basis.
pub fn spin_half<T: Real>() -> [CMatrix<T>; 3] {
    let h = lit::<T>(0.5);
    let z = T::zero();
    let sx = CMatrix::from_row_slice(2, 2, &[creal(z), creal(h), creal(h), creal(z)]);
    let sy = CMatrix::from_row_slice(2, 2, &[creal(z), cplx(z, -h), cplx(z, h), creal(z)]);
    let sz = CMatrix::from_row_slice(2, 2, &[creal(h), creal(z), creal(z), creal(-h)]);
    [sx, sy, sz]
}

/// Embed a single-site operator at `site` of an `n`-qubit register.
pub fn embed_qubit<T: Real>(op: &CMatrix<T>, site: usize, n: usize) -> CMatrix<T> {
    let factors: Vec<CMatrix<T>> = (0..n)
        .map(|k| if k == site { op.clone() } else { identity(2) })
        .collect();
    kron_all(&factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_reconstructs_hermitian() {
        let m = CMatrix::<f64>::from_row_slice(
            3,
            3,
            &[
                Complex::new(2.0, 0.0),
                Complex::new(0.5, -0.3),
                Complex::new(0.0, 1.0),
                Complex::new(0.5, 0.3),
                Complex::new(-1.0, 0.0),
                Complex::new(0.2, 0.0),
                Complex::new(0.0, -1.0),
                Complex::new(0.2, 0.0),
                Complex::new(0.7, 0.0),
            ],
        );
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            3,
            vals.iter().map(|&v| Complex::new(v, 0.0)),
        ));
        let back = &vecs * diag * vecs.adjoint();
        assert!(max_abs_diff(&back, &m) < 1e-13);
    }

    #[test]
    fn spin_half_algebra() {
        let [sx, sy, sz] = spin_half::<f64>();
        let lhs = commutator(&sx, &sy);
        let rhs = sz.map(|z| z * Complex::new(0.0, 1.0));
        assert!(max_abs_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let h = CMatrix::<f64>::zeros(4, 4);
        assert!(max_abs_diff(&expm_hermitian(&h, 1.3), &identity(4)) < 1e-15);
    }
}
