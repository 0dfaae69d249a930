use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cabs, creal, lit, to_f64, CMatrix, Real};

/// Density operator over an explicit tensor factorization, battery first.
///
/// Basis index ordering is row-major over `dims`: the first subsystem is the
/// most significant digit. For spin-1/2 factors digit 0 is |0⟩ (spin up) and
/// digit 1 is |1⟩ (spin down).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    dims: Vec<usize>,
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validated constructor: Hermitian, unit trace, positive semidefinite.
    pub fn new(dims: Vec<usize>, matrix: CMatrix<T>) -> Result<Self> {
        let state = Self::from_matrix_unchecked(dims, matrix)?;
        state.validate()?;
        Ok(state)
    }

    /// Checks only that the shape matches `dims`.
    pub fn from_matrix_unchecked(dims: Vec<usize>, matrix: CMatrix<T>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension("subsystem dimensions must be positive".into()));
        }
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, dims {:?} require {total}x{total}",
                matrix.nrows(),
                matrix.ncols(),
                dims
            )));
        }
        Ok(Self { dims, matrix })
    }

    pub fn diagonal(dims: Vec<usize>, populations: &[T]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if populations.len() != total {
            return Err(Error::Dimension(format!(
                "{} populations for dimension {total}",
                populations.len()
            )));
        }
        let mut m = CMatrix::zeros(total, total);
        for (i, &p) in populations.iter().enumerate() {
            m[(i, i)] = creal(p);
        }
        Self::new(dims, m)
    }

    /// |ψ⟩⟨ψ| of a (not necessarily normalized) state vector.
    pub fn pure(dims: Vec<usize>, amplitudes: &[Complex<T>]) -> Result<Self> {
        let norm2 = amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        if norm2 <= T::zero() {
            return Err(Error::Domain("zero state vector".into()));
        }
        let n = amplitudes.len();
        let m = CMatrix::from_fn(n, n, |r, c| amplitudes[r] * amplitudes[c].conj() / creal(norm2));
        Self::new(dims, m)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let total: usize = dims.iter().product();
        let p = T::one() / lit::<T>(total as f64);
        let m = CMatrix::from_diagonal_element(total, total, creal(p));
        Self { dims, matrix: m }
    }

    /// Product of single-qubit diagonal states with polarizations ⟨σ_z⟩,
    /// built as a literal Kronecker product.
    pub fn qubit_product(polarizations: &[T]) -> Result<Self> {
        if polarizations.is_empty() {
            return Err(Error::Dimension("need at least one qubit".into()));
        }
        if let Some(p) = polarizations.iter().find(|p| !(p.abs() <= T::one())) {
            return Err(Error::InvalidState(format!("qubit polarization {} outside [-1, 1]", to_f64(*p))));
        }
        let half = lit::<T>(0.5);
        let factors: Vec<CMatrix<T>> = polarizations
            .iter()
            .map(|&p| {
                let mut m = CMatrix::zeros(2, 2);
                m[(0, 0)] = creal(half * (T::one() + p));
                m[(1, 1)] = creal(half * (T::one() - p));
                m
            })
            .collect();
        Self::from_matrix_unchecked(vec![2; polarizations.len()], linalg::kron_all(&factors))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> Complex<T> {
        linalg::trace(&self.matrix)
    }

    pub fn purity(&self) -> T {
        linalg::trace_product_re(&self.matrix, &self.matrix)
    }

    /// Re Tr(ρ·op).
    pub fn expectation(&self, op: &CMatrix<T>) -> T {
        linalg::trace_product_re(&self.matrix, op)
    }

    pub fn population(&self, index: usize) -> T {
        self.matrix[(index, index)].re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn validate(&self) -> Result<()> {
        let herm = to_f64(linalg::hermiticity_defect(&self.matrix));
        if herm > T::HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = self.trace();
        let tr_err = to_f64(cabs(tr - creal(T::one())));
        if tr_err > T::TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {} != 1", tr.re)));
        }
        let min_eig = self
            .eigenvalues()
            .first()
            .copied()
            .map(to_f64)
            .unwrap_or(0.0);
        if min_eig < -T::NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(())
    }

    /// ρ ⊗ σ.
    pub fn kron(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            matrix: linalg::kron(&self.matrix, &other.matrix),
        }
    }

    /// U ρ U†.
    pub fn conjugated(&self, u: &CMatrix<T>) -> Self {
        Self {
            dims: self.dims.clone(),
            matrix: linalg::conjugate(u, &self.matrix),
        }
    }

    pub fn map_matrix(&self, f: impl FnOnce(&CMatrix<T>) -> CMatrix<T>) -> Self {
        Self {
            dims: self.dims.clone(),
            matrix: f(&self.matrix),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }

    /// Partial trace keeping the listed subsystems (in ascending order).
    pub fn reduced(&self, keep: &[usize]) -> Result<Self> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::Domain("keep set is empty".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.dims.len()) {
            return Err(Error::Domain(format!(
                "subsystem {bad} out of range for {} subsystems",
                self.dims.len()
            )));
        }
        let traced: Vec<usize> = (0..self.dims.len()).filter(|k| !keep.contains(k)).collect();
        let kept_offsets = digit_offsets(&self.dims, &keep);
        let traced_offsets = digit_offsets(&self.dims, &traced);
        let d = kept_offsets.len();
        let mut out = CMatrix::zeros(d, d);
        for (a, &ra) in kept_offsets.iter().enumerate() {
            for (b, &rb) in kept_offsets.iter().enumerate() {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &t in &traced_offsets {
                    acc += self.matrix[(ra + t, rb + t)];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(Self {
            dims: keep.iter().map(|&k| self.dims[k]).collect(),
            matrix: out,
        })
    }
}

/// Partial trace over the complement of `keep`.
pub fn reduced_state<T: Real>(state: &DensityMatrix<T>, keep: &[usize]) -> Result<DensityMatrix<T>> {
    state.reduced(keep)
}

/// Full-index offsets contributed by every multi-index over `subsystems`,
/// enumerated row-major in the given subsystem order.
fn digit_offsets(dims: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut offsets = vec![0usize];
    for &s in subsystems {
        let mut next = Vec::with_capacity(offsets.len() * dims[s]);
        for &base in &offsets {
            for digit in 0..dims[s] {
                next.push(base + digit * strides[s]);
            }
        }
        offsets = next;
    }
    offsets
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn product_state_reduces_to_factor() {
        let a = DensityMatrix::<f64>::diagonal(vec![2], &[0.7, 0.3]).unwrap();
        let b = DensityMatrix::<f64>::diagonal(vec![3], &[0.2, 0.5, 0.3]).unwrap();
        let ab = a.kron(&b);
        assert!(ab.reduced(&[0]).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(ab.reduced(&[1]).unwrap().max_abs_diff(&b) < 1e-15);
        assert_eq!(ab.reduced(&[1]).unwrap().dims(), &[3]);
    }

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let s = 0.5f64.sqrt();
        let bell = DensityMatrix::pure(vec![2, 2], &[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        for k in 0..2 {
            let r = bell.reduced(&[k]).unwrap();
            assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(vec![2])) < 1e-15);
        }
    }

    #[test]
    fn middle_subsystem_of_three() {
        let a = DensityMatrix::<f64>::diagonal(vec![2], &[0.9, 0.1]).unwrap();
        let b = DensityMatrix::<f64>::diagonal(vec![2], &[0.6, 0.4]).unwrap();
        let c3 = DensityMatrix::<f64>::diagonal(vec![2], &[0.25, 0.75]).unwrap();
        let abc = a.kron(&b).kron(&c3);
        assert!(abc.reduced(&[1]).unwrap().max_abs_diff(&b) < 1e-15);
        assert!(abc.reduced(&[2, 0]).unwrap().max_abs_diff(&a.kron(&c3)) < 1e-15);
        assert!((abc.reduced(&[0, 2]).unwrap().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reduced_rejects_bad_indices() {
        let s = DensityMatrix::<f64>::maximally_mixed(vec![2, 2]);
        assert!(matches!(s.reduced(&[2]), Err(Error::Domain(_))));
        assert!(matches!(s.reduced(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn validation_catches_unphysical_matrices() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(matches!(
            DensityMatrix::new(vec![2], m),
            Err(Error::InvalidState(_))
        ));
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.2), c(0.5)]);
        assert!(DensityMatrix::new(vec![2], m).is_err());
        let m = CMatrix::from_row_slice(2, 2, &[c(0.6), c(0.0), c(0.0), c(0.6)]);
        assert!(DensityMatrix::new(vec![2], m).is_err());
    }

    #[test]
    fn single_precision_works() {
        let a = DensityMatrix::<f32>::qubit_product(&[0.5, -0.25]).unwrap();
        assert!((a.reduced(&[1]).unwrap().population(1) - 0.625).abs() < 1e-6);
    }
}
