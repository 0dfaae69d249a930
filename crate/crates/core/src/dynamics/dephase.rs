use super::hamiltonian::doubled_magnetization;
use crate::scalar::{creal, Real};
use crate::spin::{DensityMatrix, SectorState};

/// Gradient dephasing: coherences between different total z-magnetizations
/// are removed, populations and same-magnetization coherences survive.
pub trait Dephase: Sized {
    fn dephase(&self) -> Self;
}

impl<T: Real> Dephase for DensityMatrix<T> {
    fn dephase(&self) -> Self {
        let m = doubled_magnetization(self.dims());
        self.map_matrix(|rho| {
            let mut out = rho.clone();
            for r in 0..out.nrows() {
                for c in 0..out.ncols() {
                    if m[r] != m[c] {
                        out[(r, c)] = creal(T::zero());
                    }
                }
            }
            out
        })
    }
}

impl<T: Real> Dephase for SectorState<T> {
    fn dephase(&self) -> Self {
        self.map_blocks(|b| {
            let m = doubled_magnetization(&[2, b.ladder_dim()]);
            let mut out = b.matrix.clone();
            for r in 0..out.nrows() {
                for c in 0..out.ncols() {
                    if m[r] != m[c] {
                        out[(r, c)] = creal(T::zero());
                    }
                }
            }
            out
        })
    }
}

pub fn dephase<S: Dephase>(state: &S) -> S {
    state.dephase()
}
