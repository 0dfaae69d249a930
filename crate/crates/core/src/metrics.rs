//! Battery observables: energy, polarization, ergotropy and charging speed-up.

use crate::config::SystemConfig;
use crate::dynamics::Hamiltonian;
use crate::error::{Error, Result};
use crate::linalg;
use crate::protocols::ChargingTrace;
use crate::scalar::{creal, lit, to_f64, CMatrix, Real};
use crate::spin::DensityMatrix;

fn require_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.dims() != [2] {
        return Err(Error::Dimension(format!(
            "expected a single qubit, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Excited-state population ⟨1|ρ_B|1⟩ (energy in units of ħω_B).
pub fn battery_energy<T: Real>(rho_b: &DensityMatrix<T>) -> Result<T> {
    require_qubit(rho_b)?;
    Ok(rho_b.population(1))
}

/// ⟨σ_z⟩ of a single qubit.
pub fn polarization<T: Real>(rho_b: &DensityMatrix<T>) -> Result<T> {
    require_qubit(rho_b)?;
    Ok(rho_b.population(0) - rho_b.population(1))
}

/// m_B = ⟨σ_z⟩ / ε.
pub fn normalized_polarization<T: Real>(rho_b: &DensityMatrix<T>, epsilon: T) -> Result<T> {
    if epsilon == T::zero() {
        return Err(Error::Domain("normalized polarization needs epsilon != 0".into()));
    }
    Ok(polarization(rho_b)? / epsilon)
}

/// e_B = (1 − m_B)/2; equals [`battery_energy`] when ε = 1.
pub fn normalized_energy<T: Real>(rho_b: &DensityMatrix<T>, epsilon: T) -> Result<T> {
    Ok((T::one() - normalized_polarization(rho_b, epsilon)?) * lit(0.5))
}

/// One sample of a charging run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryReading {
    pub theta: f64,
    pub e_b: f64,
    pub m_b: f64,
    /// Ergotropy in units of ħω_B.
    pub ergotropy: f64,
    pub ergotropy_ratio: f64,
}

impl BatteryReading {
    pub fn from_state<T: Real>(theta: f64, rho_b: &DensityMatrix<T>, epsilon: f64) -> Result<Self> {
        let m_b = to_f64(normalized_polarization(rho_b, lit(epsilon))?);
        Ok(Self {
            theta,
            e_b: 0.5 * (1.0 - m_b),
            m_b,
            ergotropy: to_f64(ergotropy(rho_b, &Hamiltonian::battery())?),
            ergotropy_ratio: to_f64(ergotropy_ratio(rho_b)?),
        })
    }
}

/// State with the spectrum of `rho` placed on the eigenbasis of `h`,
/// largest population on the lowest energy.
pub fn passive_state<T: Real>(rho: &DensityMatrix<T>, h: &Hamiltonian<T>) -> Result<DensityMatrix<T>> {
    if rho.dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} vs Hamiltonian dimension {}",
            rho.dim(),
            h.dim()
        )));
    }
    let mut populations = rho.eigenvalues();
    // hermitian_eigen sorts ascending; reversing keeps ties in a fixed order
    populations.reverse();
    let (_, basis) = h.eigen();
    let mut scaled = basis.clone();
    for (c, &p) in populations.iter().enumerate() {
        for r in 0..scaled.nrows() {
            scaled[(r, c)] *= creal(p);
        }
    }
    DensityMatrix::from_matrix_unchecked(rho.dims().to_vec(), scaled * basis.adjoint())
}

/// Tr(ρH) − Tr(ρ_p H), clamped at zero.
pub fn ergotropy<T: Real>(rho: &DensityMatrix<T>, h: &Hamiltonian<T>) -> Result<T> {
    if rho.dim() != h.dim() {
        return Err(Error::Dimension("state and Hamiltonian dimensions differ".into()));
    }
    let mut populations = rho.eigenvalues();
    populations.reverse();
    let (energies, _) = h.eigen();
    let passive_energy = populations
        .iter()
        .zip(&energies)
        .fold(T::zero(), |acc, (&p, &e)| acc + p * e);
    let energy = linalg::trace_product_re(rho.matrix(), h.matrix());
    Ok((energy - passive_energy).max(T::zero()))
}

/// Signed eigen-polarization ε′ of a qubit: Bloch length carrying the sign of ⟨σ_z⟩.
pub fn eigen_polarization<T: Real>(rho_b: &DensityMatrix<T>) -> Result<T> {
    let z = polarization(rho_b)?;
    let off = rho_b.matrix()[(0, 1)];
    let length = (z * z + lit::<T>(4.0) * off.norm_sqr()).sqrt();
    Ok(if z < T::zero() { -length } else { length })
}

/// ℰ / (−ε′ E_B) for the battery qubit, 2/(1 − ε′) once inverted, 0 while passive.
pub fn ergotropy_ratio<T: Real>(rho_b: &DensityMatrix<T>) -> Result<T> {
    let eps = eigen_polarization(rho_b)?;
    let erg = ergotropy(rho_b, &Hamiltonian::battery())?;
    let energy = battery_energy(rho_b)?;
    if eps >= T::zero() || erg == T::zero() {
        return Ok(T::zero());
    }
    Ok(erg / (-eps * energy))
}

/// Location and height of the maximum of sampled data, refined by a
/// parabola through the discrete argmax and its neighbours.
pub fn peak_location(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::Analysis("need at least three matched samples".into()));
    }
    let (k, _) = y
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    if k == 0 || k + 1 == y.len() {
        return Err(Error::Analysis(format!(
            "maximum at the boundary sample x = {}",
            x[k]
        )));
    }
    let (x0, x1, x2) = (x[k - 1], x[k], x[k + 1]);
    let (y0, y1, y2) = (y[k - 1], y[k], y[k + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if curvature >= 0.0 {
        return Ok((x1, y1));
    }
    // Newton parabola expanded about x1
    let slope_at_x1 = d01 + curvature * (x1 - x0);
    let shift = -slope_at_x1 / (2.0 * curvature);
    let xp = x1 + shift;
    let yp = y1 + slope_at_x1 * shift + curvature * shift * shift;
    Ok((xp, yp))
}

/// P = E_max / τ̄.
pub fn charging_power(e_max: f64, tau_bar: f64) -> f64 {
    e_max / tau_bar
}

/// round(Γ² + 1).
pub fn cluster_size_estimate(gamma: f64) -> u64 {
    (gamma * gamma + 1.0).round() as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageReport {
    pub n: usize,
    /// Charging time of a single charger, in units of 1/(2πJ).
    pub tau_bar_1: f64,
    /// Charging time of the N-charger star, in units of 1/(2πJ).
    pub tau_bar_n: f64,
    pub gamma_advantage: f64,
    pub cluster_size_estimate: u64,
}

impl AdvantageReport {
    /// `(τ̄_1, τ̄_N)` in seconds.
    pub fn times_s(&self, coupling_j_hz: f64) -> (f64, f64) {
        let scale = 2.0 * std::f64::consts::PI * coupling_j_hz;
        (self.tau_bar_1 / scale, self.tau_bar_n / scale)
    }
}

/// Γ = τ̄_1/τ̄_N from the energy maxima of a collective and a single-charger sweep.
pub fn advantage_report(
    config: &SystemConfig,
    collective: &ChargingTrace,
    single: &ChargingTrace,
) -> Result<AdvantageReport> {
    if collective.config.n_chargers != config.n_chargers || single.config.n_chargers != 1 {
        return Err(Error::Analysis(
            "traces do not match the requested charger counts".into(),
        ));
    }
    let (tau_bar_n, _) = peak_location(&collective.theta, &collective.e_b)?;
    let (tau_bar_1, _) = peak_location(&single.theta, &single.e_b)?;
    let gamma_advantage = tau_bar_1 / tau_bar_n;
    Ok(AdvantageReport {
        n: config.n_chargers,
        tau_bar_1,
        tau_bar_n,
        gamma_advantage,
        cluster_size_estimate: cluster_size_estimate(gamma_advantage),
    })
}

/// Diagonal single-qubit state with ⟨σ_z⟩ = `p`.
pub(crate) fn qubit_with_polarization<T: Real>(p: T) -> DensityMatrix<T> {
    let half = lit::<T>(0.5);
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = creal(half * (T::one() + p));
    m[(1, 1)] = creal(half * (T::one() - p));
    DensityMatrix::from_matrix_unchecked(vec![2], m).expect("2x2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_of_basis_states() {
        assert_eq!(battery_energy(&qubit_with_polarization(1.0f64)).unwrap(), 0.0);
        assert_eq!(battery_energy(&qubit_with_polarization(-1.0f64)).unwrap(), 1.0);
        let eps = 1e-5f64;
        let e = battery_energy(&qubit_with_polarization(eps)).unwrap();
        assert!((e - (1.0 - eps) / 2.0).abs() < 1e-16);
    }

    #[test]
    fn normalized_energy_identity() {
        let rho = qubit_with_polarization(-0.4f64);
        let m = normalized_polarization(&rho, 0.5).unwrap();
        let e = normalized_energy(&rho, 0.5).unwrap();
        assert!((e - (1.0 - m) / 2.0).abs() < 1e-15);
        assert!(normalized_energy(&rho, 0.0).is_err());
    }

    #[test]
    fn passive_qubit_flip() {
        let rho = DensityMatrix::<f64>::diagonal(vec![2], &[0.25, 0.75]).unwrap();
        let p = passive_state(&rho, &Hamiltonian::battery()).unwrap();
        assert!((p.population(0) - 0.75).abs() < 1e-15);
        assert!((ergotropy(&rho, &Hamiltonian::battery()).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(ergotropy(&p, &Hamiltonian::battery()).unwrap(), 0.0);
    }

    #[test]
    fn ratio_limits() {
        assert_eq!(ergotropy_ratio(&qubit_with_polarization(0.3f64)).unwrap(), 0.0);
        let r = ergotropy_ratio(&qubit_with_polarization(-1e-5f64)).unwrap();
        assert!((r - 2.0 / (1.0 + 1e-5)).abs() < 1e-9);
        let r = ergotropy_ratio(&qubit_with_polarization(-1.0f64)).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parabola_peak_is_exact_for_quadratics() {
        let x: Vec<f64> = (0..11).map(|k| k as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|&t| 2.0 - 3.0 * (t - 0.437).powi(2)).collect();
        let (xp, yp) = peak_location(&x, &y).unwrap();
        assert!((xp - 0.437).abs() < 1e-12);
        assert!((yp - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_maximum_is_an_error() {
        let x = [0.0, 1.0, 2.0, 3.0];
        assert!(matches!(peak_location(&x, &[4.0, 3.0, 2.0, 1.0]), Err(Error::Analysis(_))));
        assert!(peak_location(&x, &[1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn cluster_estimate_rounds() {
        assert_eq!(cluster_size_estimate(6.0), 37);
        assert_eq!(cluster_size_estimate(1.0), 2);
    }

    #[test]
    fn single_precision_ergotropy() {
        let rho = qubit_with_polarization(-0.5f32);
        assert!((ergotropy(&rho, &Hamiltonian::battery()).unwrap() - 0.5).abs() < 1e-6);
    }
}
