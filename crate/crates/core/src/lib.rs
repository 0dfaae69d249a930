//! Star-topology spin quantum batteries: one battery spin-1/2 exchange-coupled
//! to N charger spins.
//!
//! The charger ensemble is handled in its permutation-symmetric block form
//! ([`SectorState`]), so a 36-charger star costs a few dozen small matrices
//! instead of a 2^37-dimensional density matrix. Full tensor-product states
//! ([`DensityMatrix`]) remain available for small N as an independent check.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below pin the common choices.

pub mod cli;
pub mod config;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod protocols;
pub mod scalar;
pub mod spin;

pub use config::{ConfigFile, SystemConfig};
pub use correlations::{
    correlation_trace, quantum_discord, two_spin_reduced, von_neumann_entropy, CorrelationTrace, DiscordOptions,
    DiscordResult, Units,
};
pub use dynamics::{
    dephase, evolve_exact, evolve_full, u_xy_trotter, Dephase, Hamiltonian, PropagationMode, PropagatorSpec,
};
pub use error::{Error, Result};
pub use metrics::{
    advantage_report, battery_energy, ergotropy, ergotropy_ratio, passive_state, AdvantageReport, BatteryReading,
};
pub use protocols::{
    asymptotic_charge, charge_sweep, fit_exponential, parallel_baseline, qcbl_run, relax_polarization,
    AsymptoticRun, ChargingTrace, FitModel, FitResult,
};
pub use scalar::Real;
pub use spin::{
    battery_reduced, collective_operators, dicke_multiplicity, reduced_state, thermal_state, DensityMatrix, HalfInt,
    SectorState,
};

pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type SectorState64 = SectorState<f64>;
pub type SectorState32 = SectorState<f32>;
pub type Hamiltonian64 = Hamiltonian<f64>;
pub type Hamiltonian32 = Hamiltonian<f32>;
