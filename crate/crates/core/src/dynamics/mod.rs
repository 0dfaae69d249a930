//! Time evolution under the star flip-flop interaction.
//!
//! θ = 2πJτ is the time variable everywhere; seconds only appear at I/O.

mod dephase;
mod evolve;
mod hamiltonian;
mod trotter;

pub use dephase::{dephase, Dephase};
pub use evolve::{
    evolve_exact, evolve_full, exact_propagator_dense, propagate_full, FullEvolver, PropagationMode,
    PropagatorSpec, SectorEvolver, SectorPropagator,
};
pub use hamiltonian::{doubled_magnetization, total_magnetization, Hamiltonian, Term};
pub use trotter::{trotter_propagator, u_xy_trotter};

/// Largest spin count (battery included) on the full tensor-product space.
pub const MAX_FULL_QUBITS: usize = 15;
