//! Scalar abstraction shared by the linear-algebra layers.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, DMatrix, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the simulator can run on.
///
/// The tolerance constants are the validation thresholds used when a
/// [`DensityMatrix`](crate::DensityMatrix) is checked for physicality.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static {
    /// Largest tolerated `|ρ_ij − conj(ρ_ji)|`.
    const HERMITIAN_TOL: f64;
    /// Largest tolerated `|Tr ρ − 1|`.
    const TRACE_TOL: f64;
    /// Most negative eigenvalue still accepted as rounding noise.
    const NEGATIVE_EIGENVALUE_TOL: f64;
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-12;
    const TRACE_TOL: f64 = 1e-12;
    const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-5;
    const TRACE_TOL: f64 = 1e-5;
    const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-4;
}

/// Dense complex matrix over `T`.
pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Lossy literal conversion; every `Real` can represent the f64 constants used here.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// |z| for a generic complex scalar.
#[inline]
pub(crate) fn cabs<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}
