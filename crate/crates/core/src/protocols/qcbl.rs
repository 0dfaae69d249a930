//! Charger → battery → load: charge, store, then discharge into a load spin.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::asymptotic::relax_polarization;
use super::charging::{energized_state, theta_bar};
use super::fit::{fit_exponential, FitModel, FitResult};
use crate::config::SystemConfig;
use crate::dynamics::{Dephase, FullEvolver, SectorEvolver};
use crate::error::{Error, Result};
use crate::metrics::qubit_with_polarization;
use crate::spin::DensityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct QcblTrace {
    /// Discharge parameter J_BL·τ′.
    pub j_bl_tau: Vec<f64>,
    pub e_b: Vec<f64>,
    pub e_l: Vec<f64>,
    /// Storage time τ_s in seconds.
    pub storage_s: f64,
    /// Battery energy right after charging, before storage.
    pub e_b_charged: f64,
}

/// ⟨σ_z⟩ of the battery after charging at θ̄ and dephasing.
fn charged_polarization(config: &SystemConfig) -> Result<f64> {
    let n = config.n_chargers;
    let charged = SectorEvolver::<f64>::new(n)
        .evolve(&energized_state(config)?, theta_bar(n))?
        .dephase();
    Ok(charged.battery_polarization())
}

fn stored_polarization(config: &SystemConfig, p_charged: f64, tau_s: f64) -> Result<f64> {
    if tau_s == 0.0 {
        return Ok(p_charged);
    }
    let t1_b = config
        .t1_battery_s
        .ok_or_else(|| Error::Config("t1_battery_s is required for a storage delay".into()))?;
    relax_polarization(p_charged, config.epsilon, tau_s, t1_b)
}

/// Battery/load readout after exchanging for J_BL·τ′ = `x`.
fn discharge(p_battery: f64, x: f64, epsilon: f64, evolver: &FullEvolver<f64>) -> Result<(f64, f64)> {
    let state = qubit_with_polarization(p_battery).kron(&DensityMatrix::maximally_mixed(vec![2]));
    let out = evolver.evolve(&state, 2.0 * PI * x)?.dephase();
    let p_b = out.population(0) + out.population(1) - out.population(2) - out.population(3);
    let p_l = out.population(0) - out.population(1) + out.population(2) - out.population(3);
    Ok((0.5 * (1.0 - p_b / epsilon), 0.5 * (1.0 - p_l / epsilon)))
}

fn check(config: &SystemConfig) -> Result<()> {
    config.validate()?;
    config.coupling_j_bl()?;
    if config.epsilon == 0.0 {
        return Err(Error::Domain("load energy needs epsilon != 0".into()));
    }
    Ok(())
}

/// Charge at θ̄, store for `tau_s` seconds, then exchange with a maximally
/// mixed load for each J_BL·τ′ in `j_bl_tau`.
pub fn qcbl_run(config: &SystemConfig, j_bl_tau: &[f64], tau_s: f64) -> Result<QcblTrace> {
    check(config)?;
    let p_charged = charged_polarization(config)?;
    let p_stored = stored_polarization(config, p_charged, tau_s)?;
    let evolver = FullEvolver::<f64>::new(2)?;
    let rows = j_bl_tau
        .par_iter()
        .map(|&x| discharge(p_stored, x, config.epsilon, &evolver))
        .collect::<Result<Vec<_>>>()?;
    Ok(QcblTrace {
        j_bl_tau: j_bl_tau.to_vec(),
        e_b: rows.iter().map(|r| r.0).collect(),
        e_l: rows.iter().map(|r| r.1).collect(),
        storage_s: tau_s,
        e_b_charged: 0.5 * (1.0 - p_charged / config.epsilon),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StorageDecay {
    pub tau_s: Vec<f64>,
    /// Load energy at J_BL·τ′ = 1/2 (complete swap).
    pub e_l: Vec<f64>,
    /// e_L(τ_s) = a·e^(−τ_s/T_s) + c.
    pub fit: FitResult,
}

/// Load energy after a full swap as a function of storage time.
pub fn storage_decay(config: &SystemConfig, tau_s: &[f64]) -> Result<StorageDecay> {
    check(config)?;
    let p_charged = charged_polarization(config)?;
    let evolver = FullEvolver::<f64>::new(2)?;
    let e_l = tau_s
        .iter()
        .map(|&t| {
            let p = stored_polarization(config, p_charged, t)?;
            Ok(discharge(p, 0.5, config.epsilon, &evolver)?.1)
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_exponential(tau_s, &e_l, FitModel::DecayWithOffset)?;
    Ok(StorageDecay {
        tau_s: tau_s.to_vec(),
        e_l,
        fit,
    })
}
