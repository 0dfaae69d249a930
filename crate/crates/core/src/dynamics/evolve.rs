use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::hamiltonian::{flip_flop_real, Hamiltonian};
use super::MAX_FULL_QUBITS;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cplx, lit, CMatrix, Real};
use crate::spin::{total_spins, DensityMatrix, HalfInt, SectorState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationMode {
    Exact,
    Trotterized,
}

/// How to propagate for a charging phase θ = 2πJτ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorSpec {
    pub theta: f64,
    pub n0: usize,
    pub mode: PropagationMode,
}

impl PropagatorSpec {
    pub fn exact(theta: f64) -> Self {
        Self {
            theta,
            n0: 1,
            mode: PropagationMode::Exact,
        }
    }

    pub fn trotterized(theta: f64, n0: usize) -> Result<Self> {
        let spec = Self {
            theta,
            n0,
            mode: PropagationMode::Trotterized,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n0 == 0 {
            return Err(Error::Domain("n0 must be at least 1".into()));
        }
        if !self.theta.is_finite() {
            return Err(Error::Domain("theta must be finite".into()));
        }
        Ok(())
    }
}

/// Block-wise exact propagation of sector states.
///
/// Each spin-j interaction block is diagonalized once; propagators for any θ
/// are then a phase rescaling of the cached eigenvectors.
#[derive(Debug, Clone)]
pub struct SectorEvolver<T: Real> {
    n_chargers: usize,
    spectra: BTreeMap<HalfInt, (Vec<T>, CMatrix<T>)>,
}

impl<T: Real> SectorEvolver<T> {
    pub fn new(n_chargers: usize) -> Self {
        let spectra = total_spins(n_chargers)
            .into_iter()
            .map(|j| (j, Hamiltonian::<T>::interaction_sector(j).eigen()))
            .collect();
        Self { n_chargers, spectra }
    }

    pub fn n_chargers(&self) -> usize {
        self.n_chargers
    }

    /// exp(−iθ(S_xJ_x + S_yJ_y)) for spin j.
    pub fn propagator(&self, j: HalfInt, theta: T) -> Result<CMatrix<T>> {
        let (values, vectors) = self
            .spectra
            .get(&j)
            .ok_or_else(|| Error::Domain(format!("j = {j} not present for {} chargers", self.n_chargers)))?;
        Ok(linalg::spectral_unitary(values, vectors, theta))
    }

    pub fn evolve(&self, state: &SectorState<T>, theta: T) -> Result<SectorState<T>> {
        self.at(theta).evolve(state)
    }

    /// Propagators for one fixed θ, for repeated application.
    pub fn at(&self, theta: T) -> SectorPropagator<T> {
        SectorPropagator {
            n_chargers: self.n_chargers,
            unitaries: self
                .spectra
                .iter()
                .map(|(&j, (values, vectors))| (j, linalg::spectral_unitary(values, vectors, theta)))
                .collect(),
        }
    }
}

/// Block unitaries exp(−iθH_j) for a fixed θ.
#[derive(Debug, Clone)]
pub struct SectorPropagator<T: Real> {
    n_chargers: usize,
    unitaries: BTreeMap<HalfInt, CMatrix<T>>,
}

impl<T: Real> SectorPropagator<T> {
    pub fn evolve(&self, state: &SectorState<T>) -> Result<SectorState<T>> {
        if state.n_chargers() != self.n_chargers {
            return Err(Error::Dimension(format!(
                "evolver built for {} chargers, state has {}",
                self.n_chargers,
                state.n_chargers()
            )));
        }
        Ok(state.map_blocks(|b| linalg::conjugate(&self.unitaries[&b.j], &b.matrix)))
    }
}

/// Evolve a sector state under the flip-flop interaction for phase θ.
pub fn evolve_exact<T: Real>(state: &SectorState<T>, theta: T) -> SectorState<T> {
    SectorEvolver::new(state.n_chargers())
        .evolve(state, theta)
        .expect("evolver matches the state it was built from")
}

struct MagnetizationBlock<T: Real> {
    indices: Vec<usize>,
    values: Vec<T>,
    vectors: DMatrix<T>,
    vectors_t: DMatrix<T>,
}

/// Exact full-space propagation, diagonalizing H_BC per total-magnetization
/// subspace. Meant as an independent check on [`SectorEvolver`].
pub struct FullEvolver<T: Real> {
    n_spins: usize,
    blocks: Vec<MagnetizationBlock<T>>,
}

impl<T: Real> FullEvolver<T> {
    pub fn new(n_spins: usize) -> Result<Self> {
        if n_spins < 2 {
            return Err(Error::Domain("need a battery and at least one charger".into()));
        }
        if n_spins > MAX_FULL_QUBITS {
            return Err(Error::Resource(format!(
                "full-space evolution limited to 2^{MAX_FULL_QUBITS} dimensions, got 2^{n_spins}"
            )));
        }
        let dim = 1usize << n_spins;
        let mut blocks = Vec::with_capacity(n_spins + 1);
        for downs in 0..=n_spins {
            let indices: Vec<usize> = (0..dim).filter(|x| x.count_ones() as usize == downs).collect();
            let local = |x: usize| indices.binary_search(&x).expect("flip-flop preserves magnetization");
            let h = restricted_flip_flop::<T>(n_spins, &indices, local);
            let (values, vectors) = linalg::symmetric_eigen(&h);
            blocks.push(MagnetizationBlock {
                indices,
                values,
                vectors_t: vectors.transpose(),
                vectors,
            });
        }
        Ok(Self { n_spins, blocks })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    fn block_unitaries(&self, theta: T) -> Vec<CMatrix<T>> {
        self.blocks
            .iter()
            .map(|b| linalg::spectral_unitary(&b.values, &linalg::from_real(&b.vectors), theta))
            .collect()
    }

    /// Dense propagator exp(−iθH_BC).
    pub fn propagator(&self, theta: T) -> CMatrix<T> {
        let dim = 1usize << self.n_spins;
        let mut u = CMatrix::zeros(dim, dim);
        for (b, ub) in self.blocks.iter().zip(self.block_unitaries(theta)) {
            for (r, &gr) in b.indices.iter().enumerate() {
                for (c, &gc) in b.indices.iter().enumerate() {
                    u[(gr, gc)] = ub[(r, c)];
                }
            }
        }
        u
    }

    pub fn evolve(&self, state: &DensityMatrix<T>, theta: T) -> Result<DensityMatrix<T>> {
        if state.dims().len() != self.n_spins || state.dims().iter().any(|&d| d != 2) {
            return Err(Error::Dimension(format!(
                "expected {} qubits, state dims {:?}",
                self.n_spins,
                state.dims()
            )));
        }
        if theta == T::zero() {
            return Ok(state.clone());
        }
        let rho = state.matrix();
        let zero = T::zero();
        let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
        for a in &self.blocks {
            for b in &self.blocks {
                let sub = CMatrix::from_fn(a.indices.len(), b.indices.len(), |r, c| {
                    rho[(a.indices[r], b.indices[c])]
                });
                if sub.iter().all(|z| z.re == zero && z.im == zero) {
                    continue;
                }
                // rotate into the eigenbases, apply the phases, rotate back
                let mut w = linalg::real_congruence(&a.vectors_t, &sub, &b.vectors_t);
                for c in 0..w.ncols() {
                    for r in 0..w.nrows() {
                        w[(r, c)] *= phase(-theta * (a.values[r] - b.values[c]));
                    }
                }
                let evolved = linalg::real_congruence(&a.vectors, &w, &b.vectors);
                for (r, &gr) in a.indices.iter().enumerate() {
                    for (c, &gc) in b.indices.iter().enumerate() {
                        out[(gr, gc)] = evolved[(r, c)];
                    }
                }
            }
        }
        DensityMatrix::from_matrix_unchecked(state.dims().to_vec(), out)
    }
}

fn restricted_flip_flop<T: Real>(n_spins: usize, indices: &[usize], local: impl Fn(usize) -> usize) -> DMatrix<T> {
    let half = lit::<T>(0.5);
    let battery_bit = 1usize << (n_spins - 1);
    let mut m = DMatrix::zeros(indices.len(), indices.len());
    for (a, &x) in indices.iter().enumerate() {
        for site in 1..n_spins {
            let bit = 1usize << (n_spins - 1 - site);
            if (x & battery_bit != 0) != (x & bit != 0) {
                m[(local(x ^ battery_bit ^ bit), a)] = half;
            }
        }
    }
    m
}

/// Evolve a full-space state of battery + chargers under H_BC for phase θ.
pub fn evolve_full<T: Real>(state: &DensityMatrix<T>, theta: T) -> Result<DensityMatrix<T>> {
    FullEvolver::new(state.dims().len())?.evolve(state, theta)
}

/// exp(−iθH_BC) on battery + `n_chargers`, by dense diagonalization of the
/// whole matrix. Only for small validation cases.
pub fn exact_propagator_dense<T: Real>(n_chargers: usize, theta: T) -> Result<CMatrix<T>> {
    if n_chargers + 1 > 10 {
        return Err(Error::Resource("dense propagator limited to 10 spins".into()));
    }
    let h = linalg::from_real(&flip_flop_real::<T>(n_chargers + 1));
    Ok(linalg::expm_hermitian(&h, theta))
}

/// Propagate according to `spec` on the full space.
pub fn propagate_full<T: Real>(state: &DensityMatrix<T>, spec: &PropagatorSpec) -> Result<DensityMatrix<T>> {
    spec.validate()?;
    match spec.mode {
        PropagationMode::Exact => evolve_full(state, lit(spec.theta)),
        PropagationMode::Trotterized => super::trotter::u_xy_trotter(state, spec),
    }
}

pub(crate) fn phase<T: Real>(angle: T) -> nalgebra::Complex<T> {
    cplx(angle.cos(), angle.sin())
}
