//! Repeated charging with longitudinal relaxation between cycles.
//!
//! Each cycle is delay Δ → π on the chargers → exp(−iθ̄H_BC) → gradient.
//! After the gradient the state is diagonal; relaxation acts on the battery
//! polarization and the mean charger polarization, and the chargers are
//! rebuilt as a product state of that polarization before the next pulse.

use rayon::prelude::*;

use super::charging::theta_bar;
use super::fit::{fit_exponential, FitModel, FitResult};
use crate::config::SystemConfig;
use crate::dynamics::{Dephase, SectorEvolver, SectorPropagator};
use crate::error::{Error, Result};
use crate::spin::SectorState;

/// m_eq + (m − m_eq)·e^(−dt/T1).
pub fn relax_polarization(m: f64, m_eq: f64, dt: f64, t1: f64) -> Result<f64> {
    if !(t1 > 0.0) {
        return Err(Error::Domain(format!("T1 must be positive, got {t1}")));
    }
    if !(dt >= 0.0) {
        return Err(Error::Domain(format!("delay must be non-negative, got {dt}")));
    }
    let rate = -dt / t1;
    Ok(m * rate.exp() - m_eq * rate.exp_m1())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRun {
    /// Delay Δ in seconds.
    pub delta: f64,
    pub iterations: usize,
    pub e_b_per_iteration: Vec<f64>,
    /// Saturation fit of e_B against nΔ.
    pub fit: FitResult,
    /// Whether every cycle charged at least as far as the previous one, to 1e-12.
    pub monotone: bool,
}

impl AsymptoticRun {
    /// e_B after the last cycle.
    pub fn saturation(&self) -> f64 {
        *self.e_b_per_iteration.last().unwrap_or(&f64::NAN)
    }
}

struct Cycle {
    propagator: SectorPropagator<f64>,
    n: usize,
    epsilon: f64,
    charger_eq: f64,
}

impl Cycle {
    fn new(config: &SystemConfig) -> Self {
        let n = config.n_chargers;
        Self {
            propagator: SectorEvolver::new(n).at(theta_bar(n)),
            n,
            epsilon: config.epsilon,
            charger_eq: config.charger_purity(),
        }
    }

    /// π on chargers, charge, dephase; returns the new (p_B, p_C).
    fn run(&self, p_b: f64, p_c: f64) -> Result<(f64, f64)> {
        let start = SectorState::product(self.n, p_b, -p_c)?;
        let out = self.propagator.evolve(&start)?.dephase();
        Ok((out.battery_polarization(), out.charger_polarization()))
    }

    fn energy(&self, p_b: f64) -> f64 {
        0.5 * (1.0 - p_b / self.epsilon)
    }
}

/// e_B of one charging shot at θ̄ from thermal equilibrium.
pub fn unitary_max(config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    let cycle = Cycle::new(config);
    let (p_b, _) = cycle.run(config.epsilon, cycle.charger_eq)?;
    Ok(cycle.energy(p_b))
}

/// Run `iterations` charging cycles separated by a relaxation delay `delta`.
pub fn asymptotic_charge(config: &SystemConfig, delta: f64, iterations: usize) -> Result<AsymptoticRun> {
    config.validate()?;
    if config.epsilon == 0.0 {
        return Err(Error::Domain("asymptotic charging needs epsilon != 0".into()));
    }
    let (t1_b, t1_c) = config.relaxation_times()?;
    if t1_b <= t1_c {
        log::warn!("battery T1 ({t1_b} s) does not exceed charger T1 ({t1_c} s)");
    }
    if iterations == 0 {
        return Err(Error::Domain("at least one iteration is required".into()));
    }
    let cycle = Cycle::new(config);
    let (mut p_b, mut p_c) = (config.epsilon, cycle.charger_eq);
    let mut energies = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        p_b = relax_polarization(p_b, config.epsilon, delta, t1_b)?;
        p_c = relax_polarization(p_c, cycle.charger_eq, delta, t1_c)?;
        (p_b, p_c) = cycle.run(p_b, p_c)?;
        energies.push(cycle.energy(p_b));
    }
    let times: Vec<f64> = (1..=iterations).map(|k| k as f64 * delta).collect();
    let fit = if iterations >= 4 {
        fit_exponential(&times, &energies, FitModel::Saturation)?
    } else {
        FitResult {
            model: FitModel::Saturation,
            amplitude: f64::NAN,
            time_constant: f64::NAN,
            offset: 0.0,
            residual_rms: f64::NAN,
            converged: false,
        }
    };
    if !fit.converged {
        log::warn!("saturation fit did not converge for delta = {delta} s");
    }
    let monotone = energies.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    Ok(AsymptoticRun {
        delta,
        iterations,
        e_b_per_iteration: energies,
        fit,
        monotone,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationSweep {
    pub runs: Vec<AsymptoticRun>,
    pub unitary_max: f64,
}

impl SaturationSweep {
    pub fn deltas(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.delta).collect()
    }

    pub fn saturation(&self) -> Vec<f64> {
        self.runs.iter().map(AsymptoticRun::saturation).collect()
    }

    /// `(Δ, e_B(nΔ))` of the largest saturation value.
    pub fn best(&self) -> (f64, f64) {
        self.runs
            .iter()
            .map(|r| (r.delta, r.saturation()))
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
    }

    /// True when the best Δ is neither the first nor the last sample.
    pub fn has_interior_maximum(&self) -> bool {
        let s = self.saturation();
        let k = s
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc })
            .0;
        s.len() >= 3 && k > 0 && k + 1 < s.len()
    }
}

/// `asymptotic_charge` for each Δ, in input order.
pub fn saturation_sweep(config: &SystemConfig, deltas: &[f64], iterations: usize) -> Result<SaturationSweep> {
    let runs = deltas
        .par_iter()
        .map(|&d| asymptotic_charge(config, d, iterations))
        .collect::<Result<Vec<_>>>()?;
    Ok(SaturationSweep {
        runs,
        unitary_max: unitary_max(config)?,
    })
}
