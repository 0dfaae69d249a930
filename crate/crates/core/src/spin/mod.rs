//! Spin states: full tensor-product density matrices and the compressed
//! permutation-symmetric sector form.

pub mod density;
pub mod dicke;
pub mod sector;

pub use density::{reduced_state, DensityMatrix};
pub use dicke::{binomial, collective_operators, dicke_multiplicity, ladder_operators, total_spins, HalfInt};
pub use sector::{
    battery_reduced, equilibrium_state, thermal_state, thermal_state_full, SectorBlock, SectorState,
    MAX_EXPAND_CHARGERS,
};
