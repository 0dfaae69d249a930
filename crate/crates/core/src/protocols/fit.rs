//! Exponential saturation and decay fits.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{DMatrix, DVector, Dyn, Owned};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// a(1 − e^(−x/T)).
    Saturation,
    /// a·e^(−x/T).
    Decay,
    /// a·e^(−x/T) + c.
    DecayWithOffset,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub amplitude: f64,
    pub time_constant: f64,
    /// Zero unless the model carries an offset.
    pub offset: f64,
    pub residual_rms: f64,
    pub converged: bool,
}

impl FitResult {
    pub fn evaluate(&self, x: f64) -> f64 {
        let e = (-x / self.time_constant).exp();
        match self.model {
            FitModel::Saturation => self.amplitude * (1.0 - e),
            FitModel::Decay | FitModel::DecayWithOffset => self.amplitude * e + self.offset,
        }
    }

    /// residual RMS / |amplitude|.
    pub fn relative_rms(&self) -> f64 {
        self.residual_rms / self.amplitude.abs()
    }

    fn failed(model: FitModel) -> Self {
        Self {
            model,
            amplitude: f64::NAN,
            time_constant: f64::NAN,
            offset: 0.0,
            residual_rms: f64::NAN,
            converged: false,
        }
    }
}

/// Parameters are (a, k, [c]) with k = 1/T.
struct Problem<'a> {
    x: &'a [f64],
    y: &'a [f64],
    model: FitModel,
    p: DVector<f64>,
}

impl Problem<'_> {
    fn model_value(&self, x: f64) -> f64 {
        let (a, k) = (self.p[0], self.p[1]);
        let e = (-k * x).exp();
        match self.model {
            FitModel::Saturation => a * (1.0 - e),
            FitModel::Decay => a * e,
            FitModel::DecayWithOffset => a * e + self.p[2],
        }
    }
}

impl LeastSquaresProblem<f64, Dyn, Dyn> for Problem<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, p: &DVector<f64>) {
        self.p.copy_from(p);
    }

    fn params(&self) -> DVector<f64> {
        self.p.clone()
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        Some(DVector::from_iterator(
            self.x.len(),
            self.x.iter().zip(self.y).map(|(&x, &y)| self.model_value(x) - y),
        ))
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let (a, k) = (self.p[0], self.p[1]);
        let cols = self.p.len();
        let mut jac = DMatrix::zeros(self.x.len(), cols);
        for (r, &x) in self.x.iter().enumerate() {
            let e = (-k * x).exp();
            match self.model {
                FitModel::Saturation => {
                    jac[(r, 0)] = 1.0 - e;
                    jac[(r, 1)] = a * x * e;
                }
                FitModel::Decay | FitModel::DecayWithOffset => {
                    jac[(r, 0)] = e;
                    jac[(r, 1)] = -a * x * e;
                    if cols == 3 {
                        jac[(r, 2)] = 1.0;
                    }
                }
            }
        }
        Some(jac)
    }
}

/// Least-squares slope of ln z against x, intercept free or pinned at zero.
fn log_linear(x: &[f64], z: &[f64], through_origin: bool) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(z)
        .filter(|(_, &v)| v > 0.0 && v.is_finite())
        .map(|(&x, &v)| (x, v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    if through_origin {
        let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = pts.iter().map(|(x, l)| x * l).sum();
        return (sxx > 0.0).then(|| (sxy / sxx, 0.0));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(x, l)| (x - mx) * (l - ml)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, ml - slope * mx))
}

fn initial_guess(x: &[f64], y: &[f64], model: FitModel) -> Option<DVector<f64>> {
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    match model {
        FitModel::Saturation => {
            let a0 = if hi.abs() >= lo.abs() { hi * 1.05 } else { lo * 1.05 };
            let z: Vec<f64> = y.iter().map(|&v| 1.0 - v / a0).collect();
            let (slope, _) = log_linear(x, &z, true)?;
            Some(DVector::from_vec(vec![a0, -slope]))
        }
        FitModel::Decay => {
            let (slope, intercept) = log_linear(x, y, false)?;
            Some(DVector::from_vec(vec![intercept.exp(), -slope]))
        }
        FitModel::DecayWithOffset => {
            let c0 = lo - 0.05 * (hi - lo);
            let z: Vec<f64> = y.iter().map(|&v| v - c0).collect();
            let (slope, intercept) = log_linear(x, &z, false)?;
            Some(DVector::from_vec(vec![intercept.exp(), -slope, c0]))
        }
    }
}

/// Fit an exponential model by Levenberg–Marquardt, started from a
/// log-linear estimate. Degenerate data give `converged = false`.
pub fn fit_exponential(x: &[f64], y: &[f64], model: FitModel) -> Result<FitResult> {
    if x.len() != y.len() {
        return Err(Error::Dimension("x and y lengths differ".into()));
    }
    if x.len() < 4 {
        return Err(Error::Domain("an exponential fit needs at least 4 points".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Domain("fit data must be finite".into()));
    }
    let spread = y.iter().fold(0.0f64, |m, &v| m.max((v - y[0]).abs()));
    if spread == 0.0 {
        return Ok(FitResult::failed(model));
    }
    let Some(p0) = initial_guess(x, y, model) else {
        return Ok(FitResult::failed(model));
    };
    if p0.iter().any(|v| !v.is_finite()) || p0[1] <= 0.0 {
        return Ok(FitResult::failed(model));
    }
    let problem = Problem { x, y, model, p: p0 };
    let (solved, report) = LevenbergMarquardt::new().with_patience(500).minimize(problem);
    let p = &solved.p;
    let residuals = solved.residuals().unwrap_or_else(|| DVector::zeros(x.len()));
    let residual_rms = (residuals.norm_squared() / x.len() as f64).sqrt();
    let k = p[1];
    let converged = report.termination.was_successful() && k.is_finite() && k > 0.0 && p[0].is_finite();
    Ok(FitResult {
        model,
        amplitude: p[0],
        time_constant: 1.0 / k,
        offset: if p.len() == 3 { p[2] } else { 0.0 },
        residual_rms,
        converged,
    })
}
