use std::f64::consts::PI;

use rayon::prelude::*;

use crate::config::SystemConfig;
use crate::dynamics::{Dephase, SectorEvolver};
use crate::error::{Error, Result};
use crate::metrics::{charging_power, peak_location, BatteryReading};
use crate::spin::{equilibrium_state, SectorState};

/// θ̄ = π/√N, the charging phase of a fully polarized star.
pub fn theta_bar(n_chargers: usize) -> f64 {
    PI / (n_chargers as f64).sqrt()
}

/// `points_per_period + 1` samples over [0, 2θ̄], one full period of the
/// pure-state energy oscillation.
pub fn theta_grid(n_chargers: usize, points_per_period: usize) -> Vec<f64> {
    let span = 2.0 * theta_bar(n_chargers);
    (0..=points_per_period)
        .map(|k| span * k as f64 / points_per_period as f64)
        .collect()
}

/// Battery energy sampled along a charging sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargingTrace {
    pub config: SystemConfig,
    pub theta: Vec<f64>,
    /// Normalized energy (1 − ⟨σ_z⟩/ε)/2.
    pub e_b: Vec<f64>,
    /// Battery ergotropy in units of ħω_B.
    pub ergotropy: Vec<f64>,
    pub ergotropy_ratio: Option<Vec<f64>>,
}

impl ChargingTrace {
    /// θ/θ̄.
    pub fn tau_normalized(&self) -> Vec<f64> {
        let bar = theta_bar(self.config.n_chargers);
        self.theta.iter().map(|t| t / bar).collect()
    }

    /// Sample times in seconds, τ = θ/(2πJ).
    pub fn tau_s(&self) -> Result<Vec<f64>> {
        let scale = 2.0 * PI * self.config.coupling_j()?;
        Ok(self.theta.iter().map(|t| t / scale).collect())
    }

    /// Interpolated (θ̄, e_B^max).
    pub fn peak(&self) -> Result<(f64, f64)> {
        peak_location(&self.theta, &self.e_b)
    }

    /// E_max/τ̄ in units of ħω_B·2πJ.
    pub fn power(&self) -> Result<f64> {
        let (theta, e) = self.peak()?;
        Ok(charging_power(e, theta))
    }
}

/// Chargers energized by a π pulse applied to the thermal equilibrium state.
pub fn energized_state(config: &SystemConfig) -> Result<SectorState<f64>> {
    Ok(equilibrium_state::<f64>(config)?.invert_chargers())
}

/// Equilibrium → π on chargers → exp(−iθH_BC) → gradient dephasing → e_B,
/// for each θ in `thetas`.
pub fn charge_sweep(config: &SystemConfig, thetas: &[f64]) -> Result<ChargingTrace> {
    config.validate()?;
    if config.epsilon == 0.0 {
        return Err(Error::Domain("normalized energy is undefined for epsilon = 0".into()));
    }
    if thetas.len() < 3 {
        return Err(Error::Domain("a charging trace needs at least 3 samples".into()));
    }
    let start = energized_state(config)?;
    let evolver = SectorEvolver::<f64>::new(config.n_chargers);
    let readings = thetas
        .par_iter()
        .map(|&theta| {
            let state = evolver.evolve(&start, theta)?.dephase();
            BatteryReading::from_state(theta, &state.battery_reduced(), config.epsilon)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChargingTrace {
        config: config.clone(),
        theta: thetas.to_vec(),
        e_b: readings.iter().map(|r| r.e_b).collect(),
        ergotropy: readings.iter().map(|r| r.ergotropy).collect(),
        ergotropy_ratio: Some(readings.iter().map(|r| r.ergotropy_ratio).collect()),
    })
}

/// One charger per battery: the N = 1 sweep with otherwise identical parameters.
pub fn parallel_baseline(config: &SystemConfig, thetas: &[f64]) -> Result<ChargingTrace> {
    let single = SystemConfig {
        n_chargers: 1,
        ..config.clone()
    };
    charge_sweep(&single, thetas)
}

/// Power of N independently charged batteries each holding E_max/N:
/// N·(E_max/N)/τ̄_1.
pub fn parallel_pack_power(collective_e_max: f64, single: &ChargingTrace) -> Result<f64> {
    let (tau_bar_1, _) = single.peak()?;
    Ok(charging_power(collective_e_max, tau_bar_1))
}
