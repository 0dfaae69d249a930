//! Pulse-sequence propagator for the flip-flop interaction.
//!
//! A ZZ evolution sandwiched between global π/2 rotations about x (or y)
//! becomes an S_yI_y (or S_xI_x) evolution; alternating the two gives a
//! first-order product formula for S_xI_x + S_yI_y.

use super::evolve::{phase, PropagatorSpec};
use super::MAX_FULL_QUBITS;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cplx, creal, lit, CMatrix, Real};
use crate::spin::DensityMatrix;

/// exp(−i(π/2)(Σ σ_a/2)) as a product of single-spin rotations, a ∈ {x, y}.
fn global_rotation<T: Real>(n_spins: usize, axis: usize) -> CMatrix<T> {
    let c = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
    let z = T::zero();
    let single = match axis {
        // cos(π/4) − i sin(π/4) σ_x
        0 => CMatrix::from_row_slice(2, 2, &[creal(c), cplx(z, -c), cplx(z, -c), creal(c)]),
        // cos(π/4) − i sin(π/4) σ_y
        _ => CMatrix::from_row_slice(2, 2, &[creal(c), creal(-c), creal(c), creal(c)]),
    };
    linalg::kron_all(&vec![single; n_spins])
}

/// Diagonal of exp(−i φ S_z I_z), I_z summed over the chargers.
fn zz_diagonal<T: Real>(n_spins: usize, phi: T) -> Vec<nalgebra::Complex<T>> {
    let dim = 1usize << n_spins;
    let battery_bit = 1usize << (n_spins - 1);
    (0..dim)
        .map(|x| {
            let s = if x & battery_bit == 0 { 0.5 } else { -0.5 };
            let downs = (x & (battery_bit - 1)).count_ones() as f64;
            let iz = 0.5 * (n_spins - 1) as f64 - downs;
            phase(-phi * lit::<T>(s * iz))
        })
        .collect()
}

/// One Trotter step Y·ZZ·Y†·X·ZZ·X† raised to the n0-th power.
pub fn trotter_propagator<T: Real>(n_spins: usize, spec: &PropagatorSpec) -> Result<CMatrix<T>> {
    spec.validate()?;
    if n_spins < 2 || n_spins > MAX_FULL_QUBITS.min(12) {
        return Err(Error::Resource(format!(
            "dense Trotter propagator supports 2..=12 spins, got {n_spins}"
        )));
    }
    let x = global_rotation::<T>(n_spins, 0);
    let y = global_rotation::<T>(n_spins, 1);
    let zz = zz_diagonal::<T>(n_spins, lit::<T>(spec.theta / spec.n0 as f64));
    let apply_zz = |m: &CMatrix<T>| {
        let mut out = m.clone();
        for (r, mut row) in out.row_iter_mut().enumerate() {
            row *= zz[r];
        }
        out
    };
    let step = &y * apply_zz(&y.adjoint()) * &x * apply_zz(&x.adjoint());
    let mut u = linalg::identity::<T>(1usize << n_spins);
    for _ in 0..spec.n0 {
        u = &step * u;
    }
    Ok(u)
}

/// Apply the Trotterized flip-flop propagator described by `spec`.
pub fn u_xy_trotter<T: Real>(state: &DensityMatrix<T>, spec: &PropagatorSpec) -> Result<DensityMatrix<T>> {
    if state.dims().iter().any(|&d| d != 2) {
        return Err(Error::Dimension("Trotter path needs a qubit register".into()));
    }
    let u = trotter_propagator::<T>(state.dims().len(), spec)?;
    Ok(state.conjugated(&u))
}
