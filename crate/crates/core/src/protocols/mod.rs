//! Experiment-level protocols built from the spin, dynamics and metrics layers.

mod asymptotic;
mod charging;
mod fit;
mod qcbl;

pub use asymptotic::{
    asymptotic_charge, relax_polarization, saturation_sweep, unitary_max, AsymptoticRun, SaturationSweep,
};
pub use charging::{
    charge_sweep, energized_state, parallel_baseline, parallel_pack_power, theta_bar, theta_grid, ChargingTrace,
};
pub use fit::{fit_exponential, FitModel, FitResult};
pub use qcbl::{qcbl_run, storage_decay, QcblTrace, StorageDecay};
