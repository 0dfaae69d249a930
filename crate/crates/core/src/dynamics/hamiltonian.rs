use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cabs, creal, lit, CMatrix, Real};
use crate::spin::{ladder_operators, HalfInt};

/// Which physical piece of the star Hamiltonian a matrix contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// ħω_B(1/2 − S_z).
    Battery,
    /// ħω_C I_z.
    Charger,
    /// Flip-flop S_xI_x + S_yI_y.
    Interaction,
}

/// Dense Hermitian Hamiltonian over an explicit factorization.
///
/// Matrix entries are in units of `angular_unit` rad/s. Interaction-frame
/// builders use the coupling scale 2πJ, so their time variable is θ = 2πJτ;
/// the unit is `None` until a coupling is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T: Real> {
    matrix: CMatrix<T>,
    dims: Vec<usize>,
    terms: Vec<Term>,
    angular_unit: Option<f64>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(matrix: CMatrix<T>, dims: Vec<usize>, terms: Vec<Term>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::Dimension(format!(
                "Hamiltonian is {}x{}, dims require {total}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = crate::scalar::to_f64(linalg::hermiticity_defect(&matrix));
        if defect > T::HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("Hamiltonian not Hermitian ({defect:e})")));
        }
        Ok(Self {
            matrix,
            dims,
            terms,
            angular_unit: None,
        })
    }

    /// Diagonal Hamiltonian with the given energies.
    pub fn diagonal(energies: &[T]) -> Self {
        let d = energies.len();
        let matrix = CMatrix::from_fn(d, d, |r, c| if r == c { creal(energies[r]) } else { creal(T::zero()) });
        Self {
            matrix,
            dims: vec![d],
            terms: Vec::new(),
            angular_unit: None,
        }
    }

    /// H_B = 1/2 − S_z = diag(0, 1) in units of ħω_B.
    pub fn battery() -> Self {
        let mut h = Self::diagonal(&[T::zero(), T::one()]);
        h.terms = vec![Term::Battery];
        h
    }

    /// H_BC = Σ_i (S_x I_x^i + S_y I_y^i) on battery + `n_chargers` spins.
    pub fn interaction_full(n_chargers: usize) -> Result<Self> {
        let n_spins = n_chargers + 1;
        if n_spins > super::MAX_FULL_QUBITS {
            return Err(Error::Resource(format!(
                "full space limited to {} spins",
                super::MAX_FULL_QUBITS
            )));
        }
        let real = flip_flop_real::<T>(n_spins);
        Self::new(linalg::from_real(&real), vec![2; n_spins], vec![Term::Interaction])
    }

    /// S_x ⊗ J_x + S_y ⊗ J_y on battery ⊗ (spin-j ladder).
    pub fn interaction_sector(j: HalfInt) -> Self {
        let [sx, sy, _] = linalg::spin_half::<T>();
        let [jx, jy, _] = ladder_operators::<T>(j);
        let matrix = linalg::kron(&sx, &jx) + linalg::kron(&sy, &jy);
        Self {
            matrix,
            dims: vec![2, j.ladder_dim()],
            terms: vec![Term::Interaction],
            angular_unit: None,
        }
    }

    /// H_B + H_C on the full space, in units of ħω_B, with ω_C/ω_B = `gamma`.
    pub fn local_full(n_chargers: usize, gamma: T) -> Result<Self> {
        let n_spins = n_chargers + 1;
        if n_spins > super::MAX_FULL_QUBITS {
            return Err(Error::Resource("too many spins for the full space".into()));
        }
        let [_, _, sz] = linalg::spin_half::<T>();
        let mut h = linalg::embed_qubit(&(linalg::identity::<T>(2).map(|z| z * creal(lit::<T>(0.5))) - &sz), 0, n_spins);
        for site in 1..n_spins {
            h += linalg::embed_qubit(&sz, site, n_spins).map(|z| z * creal(gamma));
        }
        Self::new(h, vec![2; n_spins], vec![Term::Battery, Term::Charger])
    }

    /// Sum of two Hamiltonians on the same factorization.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::Dimension("Hamiltonians act on different spaces".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        terms.sort_unstable();
        terms.dedup();
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
            dims: self.dims.clone(),
            terms,
            angular_unit: self.angular_unit,
        })
    }

    /// Attach the coupling J (Hz): one matrix unit becomes 2πJ rad/s.
    pub fn with_coupling_hz(mut self, j_hz: f64) -> Self {
        self.angular_unit = Some(2.0 * std::f64::consts::PI * j_hz);
        self
    }

    pub fn angular_unit(&self) -> Option<f64> {
        self.angular_unit
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eigen(&self) -> (Vec<T>, CMatrix<T>) {
        linalg::hermitian_eigen(&self.matrix)
    }

    /// ‖[H, M_total]‖_max with M_total the summed z-magnetization of all factors.
    pub fn magnetization_commutator(&self) -> T {
        let m = total_magnetization(&self.dims);
        let mut worst = T::zero();
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let v = self.matrix[(r, c)] * creal(lit::<T>(m[c] - m[r]));
                worst = worst.max(cabs(v));
            }
        }
        worst
    }
}

/// Total z-magnetization of each basis index for a factorization whose
/// factors are spin ladders in descending-m order.
pub fn total_magnetization(dims: &[usize]) -> Vec<f64> {
    doubled_magnetization(dims).into_iter().map(|m| m as f64 / 2.0).collect()
}

/// Twice the total z-magnetization of each basis index (exact integers).
pub fn doubled_magnetization(dims: &[usize]) -> Vec<i64> {
    let mut out = vec![0i64];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d);
        for &base in &out {
            for k in 0..d {
                next.push(base + (d as i64 - 1) - 2 * k as i64);
            }
        }
        out = next;
    }
    out
}

/// Real flip-flop matrix Σ_i (S_x I_x^i + S_y I_y^i) on `n_spins` qubits,
/// battery as the most significant bit.
pub(crate) fn flip_flop_real<T: Real>(n_spins: usize) -> DMatrix<T> {
    let dim = 1usize << n_spins;
    let half = lit::<T>(0.5);
    let battery_bit = 1usize << (n_spins - 1);
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for site in 1..n_spins {
            let bit = 1usize << (n_spins - 1 - site);
            // S+I- + S-I+ connects states whose battery and charger bits differ
            if (x & battery_bit != 0) != (x & bit != 0) {
                let y = x ^ battery_bit ^ bit;
                m[(y, x)] = half;
            }
        }
    }
    m
}
