//! Entanglement entropy and battery/charger quantum discord.
//!
//! Entropies are evaluated through their deficit from the maximally mixed
//! value, log d − S = Σ λ ln(dλ), computed from the spectrum of ρ − 1/d.
//! Near-thermal states at NMR polarizations have deficits around ε² and
//! would otherwise drown in rounding.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::SystemConfig;
use crate::dynamics::{Dephase, SectorEvolver, MAX_FULL_QUBITS};
use crate::error::{Error, Result};
use crate::linalg;
use crate::metrics::normalized_energy;
use crate::scalar::{creal, lit, to_f64, Real};
use crate::spin::{equilibrium_state, DensityMatrix};

/// Largest charger count accepted by the correlation diagnostics.
pub const MAX_CORRELATION_CHARGERS: usize = MAX_FULL_QUBITS - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Bits,
    Nats,
}

impl Units {
    /// Multiplier converting nats to these units.
    pub fn from_nats(self) -> f64 {
        match self {
            Units::Bits => 1.0 / LN_2,
            Units::Nats => 1.0,
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        })
    }
}

impl FromStr for Units {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(Units::Bits),
            "nats" => Ok(Units::Nats),
            other => Err(Error::Config(format!("unknown units '{other}' (bits|nats)"))),
        }
    }
}

/// `(1/d, δ_k)`: the spectrum of ρ written as 1/d + δ_k.
fn centered_spectrum<T: Real>(rho: &DensityMatrix<T>) -> (f64, Vec<f64>) {
    let d = rho.dim();
    let inv = lit::<T>(1.0 / d as f64);
    let shifted = rho.matrix() - linalg::identity::<T>(d).map(|z| z * creal(inv));
    let deltas = linalg::hermitian_eigenvalues(&shifted).into_iter().map(to_f64).collect();
    (1.0 / d as f64, deltas)
}

/// log d − S(ρ) in nats.
pub fn entropy_deficit<T: Real>(rho: &DensityMatrix<T>) -> f64 {
    let (inv_d, deltas) = centered_spectrum(rho);
    let d = 1.0 / inv_d;
    deltas
        .iter()
        .map(|&delta| inv_d * excess(d * delta))
        .sum::<f64>()
        .max(0.0)
}

/// (1 + x)·ln(1 + x) − x, by series near zero. The −x terms sum to zero
/// over a traceless spectrum.
fn excess(x: f64) -> f64 {
    if x <= -1.0 {
        return 1.0;
    }
    if x.abs() > 1e-2 {
        return (1.0 + x) * x.ln_1p() - x;
    }
    let mut sum = 0.0;
    let mut power = x * x;
    for k in 2..12 {
        let k = k as f64;
        sum += power / (k * (k - 1.0));
        power *= -x;
    }
    sum
}

/// −Σ λ log λ, with 0·log 0 = 0.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>, units: Units) -> f64 {
    let (inv_d, deltas) = centered_spectrum(rho);
    let d = 1.0 / inv_d;
    let near_mixed = deltas.iter().all(|&x| (d * x).abs() < 0.5);
    let nats = if near_mixed {
        d.ln() - entropy_deficit(rho)
    } else {
        deltas
            .iter()
            .map(|&delta| {
                let lambda = inv_d + delta;
                if lambda <= 0.0 {
                    0.0
                } else {
                    -lambda * lambda.ln()
                }
            })
            .sum()
    };
    nats.clamp(0.0, d.ln()) * units.from_nats()
}

/// Battery ⊗ one-charger reduced state of a full-space star state.
///
/// Every charger must give the same pair state; a mismatch above 1e-10 is
/// reported as an invalid state.
pub fn two_spin_reduced<T: Real>(state: &DensityMatrix<T>, charger_index: usize) -> Result<DensityMatrix<T>> {
    let n_spins = state.dims().len();
    if n_spins > MAX_FULL_QUBITS {
        return Err(Error::Resource(format!(
            "full-space state with {n_spins} spins exceeds the {MAX_FULL_QUBITS}-spin cap"
        )));
    }
    if n_spins < 2 || charger_index + 1 >= n_spins {
        return Err(Error::Domain(format!(
            "charger {charger_index} out of range for {} chargers",
            n_spins.saturating_sub(1)
        )));
    }
    let pair = state.reduced(&[0, charger_index + 1])?;
    let reference = if charger_index == 0 { pair.clone() } else { state.reduced(&[0, 1])? };
    let mismatch = to_f64(pair.max_abs_diff(&reference));
    if mismatch > 1e-10 {
        return Err(Error::InvalidState(format!(
            "pair states differ between chargers by {mismatch:e}"
        )));
    }
    Ok(pair)
}

/// Outcome of a discord optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    /// Discord clamped at zero.
    pub value: f64,
    /// Unclamped optimum.
    pub raw: f64,
    pub units: Units,
    pub converged: bool,
    /// Tangent-plane gradient of the classical-correlation objective at the optimum.
    pub residual_gradient: f64,
    /// Measurement axis on the charger qubit.
    pub direction: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptions {
    /// Points of the coarse Fibonacci grid on the sphere.
    pub directions: usize,
    pub units: Units,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            directions: 400,
            units: Units::Bits,
        }
    }
}

/// Two-qubit state in Pauli coordinates: ρ = (1 + a·σ⊗1 + 1⊗b·σ + Σ T_ij σ_i⊗σ_j)/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPair {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochPair {
    pub fn from_state<T: Real>(rho: &DensityMatrix<T>) -> Result<Self> {
        if rho.dims() != [2, 2] {
            return Err(Error::Dimension(format!("expected two qubits, got {:?}", rho.dims())));
        }
        let s = linalg::spin_half::<T>();
        let pauli: Vec<_> = s.iter().map(|m| m.map(|z| z * creal(lit::<T>(2.0)))).collect();
        let id = linalg::identity::<T>(2);
        let mut out = Self {
            a: [0.0; 3],
            b: [0.0; 3],
            t: [[0.0; 3]; 3],
        };
        for i in 0..3 {
            out.a[i] = to_f64(rho.expectation(&linalg::kron(&pauli[i], &id)));
            out.b[i] = to_f64(rho.expectation(&linalg::kron(&id, &pauli[i])));
            for j in 0..3 {
                out.t[i][j] = to_f64(rho.expectation(&linalg::kron(&pauli[i], &pauli[j])));
            }
        }
        Ok(out)
    }

    /// Σ_± p_± (ln 2 − S(ρ_A|±)) for a projective measurement of B along `n`.
    pub fn conditional_deficit(&self, n: [f64; 3]) -> f64 {
        let nb = dot(n, self.b);
        let tn = [dot(self.t[0], n), dot(self.t[1], n), dot(self.t[2], n)];
        [1.0, -1.0]
            .iter()
            .map(|&s| {
                let p = 0.5 * (1.0 + s * nb);
                if p <= 0.0 {
                    return 0.0;
                }
                let v = [self.a[0] + s * tn[0], self.a[1] + s * tn[1], self.a[2] + s * tn[2]];
                let r = (0.5 * dot(v, v).sqrt() / p).min(1.0);
                p * qubit_deficit(r)
            })
            .sum()
    }
}

fn dot(x: [f64; 3], y: [f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// ln 2 − S for a qubit of Bloch length r.
pub fn qubit_deficit(r: f64) -> f64 {
    if r >= 1.0 {
        return LN_2;
    }
    0.5 * (excess(r) + excess(-r))
}

/// Near-uniform directions on the unit sphere.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

/// Orthonormal tangent vectors at `n`.
fn tangent_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = normalize(cross(n, helper));
    (u, cross(n, u))
}

fn cross(x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ]
}

fn rotate(n: [f64; 3], dir: [f64; 3], angle: f64) -> [f64; 3] {
    let (c, s) = (angle.cos(), angle.sin());
    normalize([n[0] * c + dir[0] * s, n[1] * c + dir[1] * s, n[2] * c + dir[2] * s])
}

fn tangent_gradient(f: &impl Fn([f64; 3]) -> f64, n: [f64; 3]) -> f64 {
    let h = 1e-5;
    let (u, v) = tangent_frame(n);
    let gu = (f(rotate(n, u, h)) - f(rotate(n, u, -h))) / (2.0 * h);
    let gv = (f(rotate(n, v, h)) - f(rotate(n, v, -h))) / (2.0 * h);
    gu.hypot(gv)
}

/// Quantum discord of a two-qubit state, measuring the charger (second) qubit.
///
/// D = [ln 4 − S_AB − (ln 2 − S_B)] − max_n Σ p_± (ln 2 − S_A|±) in deficit
/// form. The maximum is bracketed on a Fibonacci grid and polished by a
/// shrinking pattern search on the sphere.
pub fn quantum_discord<T: Real>(rho: &DensityMatrix<T>, options: &DiscordOptions) -> Result<DiscordResult> {
    if options.directions < 400 {
        return Err(Error::Domain("discord search needs at least 400 directions".into()));
    }
    let bloch = BlochPair::from_state(rho)?;
    let def_ab = entropy_deficit(rho);
    let def_b = entropy_deficit(&rho.reduced(&[1])?);
    let objective = |n: [f64; 3]| bloch.conditional_deficit(n);

    let grid = fibonacci_sphere(options.directions);
    let spacing = (4.0 * PI / options.directions as f64).sqrt();
    let (mut best_n, mut best) = grid
        .iter()
        .map(|&n| (n, objective(n)))
        .fold(([0.0, 0.0, 1.0], f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });

    let mut step = spacing;
    let mut iterations = 0;
    while step > 1e-9 && iterations < 10_000 {
        iterations += 1;
        let (u, v) = tangent_frame(best_n);
        let mut improved = false;
        for dir in [u, v, [-u[0], -u[1], -u[2]], [-v[0], -v[1], -v[2]]] {
            let candidate = rotate(best_n, dir, step);
            let value = objective(candidate);
            if value > best {
                best = value;
                best_n = candidate;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let converged = step <= 1e-9;
    let residual_gradient = tangent_gradient(&objective, best_n) * options.units.from_nats();
    let raw = (def_ab - def_b - best) * options.units.from_nats();
    Ok(DiscordResult {
        value: raw.max(0.0),
        raw,
        units: options.units,
        converged,
        residual_gradient,
        direction: best_n,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTrace {
    pub theta_samples: Vec<f64>,
    /// Battery energy on the fully polarized path.
    pub e_b_pure: Vec<f64>,
    /// Normalized battery energy on the configured mixed path.
    pub e_b_mixed: Vec<f64>,
    /// Battery entanglement entropy on the pure path.
    pub entropy: Vec<f64>,
    /// Battery/charger discord on the mixed path, divided by its sweep maximum.
    pub discord: Vec<f64>,
    pub discord_raw: Vec<f64>,
    pub discord_converged: Vec<bool>,
    pub entropy_units: Units,
    pub discord_units: Units,
}

/// Entropy on the pure path (ε = γ = 1) and discord on the configured mixed
/// path, both after energizing the chargers and evolving for each θ.
pub fn correlation_trace(
    config: &SystemConfig,
    theta_samples: &[f64],
    entropy_units: Units,
    discord_options: &DiscordOptions,
) -> Result<CorrelationTrace> {
    config.validate()?;
    let n = config.n_chargers;
    if n > MAX_CORRELATION_CHARGERS {
        return Err(Error::Resource(format!(
            "correlation diagnostics support at most {MAX_CORRELATION_CHARGERS} chargers, got {n}"
        )));
    }
    let pure_config = SystemConfig::pure(n)?;
    let pure0 = equilibrium_state::<f64>(&pure_config)?.invert_chargers();
    let mixed0 = equilibrium_state::<f64>(config)?.invert_chargers();
    let evolver = SectorEvolver::<f64>::new(n);
    let epsilon = config.epsilon;

    let rows = theta_samples
        .par_iter()
        .map(|&theta| -> Result<_> {
            let pure = evolver.evolve(&pure0, theta)?;
            let mixed = evolver.evolve(&mixed0, theta)?;
            let rho_b_pure = pure.battery_reduced();
            let e_pure = normalized_energy(&rho_b_pure.dephase(), 1.0)?;
            let e_mixed = normalized_energy(&mixed.dephase().battery_reduced(), epsilon)?;
            let entropy = von_neumann_entropy(&rho_b_pure, entropy_units);
            let discord = quantum_discord(&mixed.battery_charger_pair(), discord_options)?;
            Ok((e_pure, e_mixed, entropy, discord))
        })
        .collect::<Result<Vec<_>>>()?;

    let discord_raw: Vec<f64> = rows.iter().map(|r| r.3.value).collect();
    let peak = discord_raw.iter().copied().fold(0.0, f64::max);
    Ok(CorrelationTrace {
        theta_samples: theta_samples.to_vec(),
        e_b_pure: rows.iter().map(|r| r.0).collect(),
        e_b_mixed: rows.iter().map(|r| r.1).collect(),
        entropy: rows.iter().map(|r| r.2).collect(),
        discord: discord_raw
            .iter()
            .map(|&d| if peak > 0.0 { d / peak } else { 0.0 })
            .collect(),
        discord_converged: rows.iter().map(|r| r.3.converged).collect(),
        discord_raw,
        entropy_units,
        discord_units: discord_options.units,
    })
}
