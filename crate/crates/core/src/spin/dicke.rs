//! Angular-momentum bookkeeping for the permutation-symmetric charger ensemble.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{cplx, creal, lit, CMatrix, Real};

/// Non-negative half-integer, stored doubled (j = 3/2 is `HalfInt(3)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(u32);

impl HalfInt {
    pub const fn from_doubled(twice: u32) -> Self {
        Self(twice)
    }

    /// `None` unless `2j` is a non-negative integer.
    pub fn from_f64(j: f64) -> Option<Self> {
        let twice = 2.0 * j;
        (twice >= 0.0 && (twice - twice.round()).abs() < 1e-9).then(|| Self(twice.round() as u32))
    }

    pub const fn doubled(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// 2j + 1.
    pub const fn ladder_dim(self) -> usize {
        self.0 as usize + 1
    }

    /// m of ladder index `k` (descending order, k = 0 is m = j).
    pub fn m_at(self, k: usize) -> f64 {
        self.value() - k as f64
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn check_pair(n: usize, j: HalfInt) -> Result<usize> {
    let twice = j.doubled() as usize;
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if twice > n || !(n - twice).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "j = {j} is not a total spin of {n} spin-1/2 particles"
        )));
    }
    Ok((n - twice) / 2)
}

/// Exact binomial coefficient; `None` on overflow or k > n.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(c)
}

/// Number of spin-j irreps in n spin-1/2 particles:
/// d_{n,j} = C(n, n/2 − j) − C(n, n/2 − j − 1).
pub fn dicke_multiplicity(n: usize, j: HalfInt) -> Result<u128> {
    let k = check_pair(n, j)?;
    let overflow = || Error::Resource(format!("C({n}, {k}) overflows 128 bits"));
    let upper = binomial(n, k).ok_or_else(overflow)?;
    let lower = if k == 0 {
        0
    } else {
        binomial(n, k - 1).ok_or_else(overflow)?
    };
    Ok(upper - lower)
}

/// Allowed total spins, descending: n/2, n/2 − 1, …, (n mod 2)/2.
pub fn total_spins(n: usize) -> Vec<HalfInt> {
    (0..=n / 2)
        .map(|k| HalfInt::from_doubled((n - 2 * k) as u32))
        .collect()
}

/// (J_x, J_y, J_z) on the (2j+1)-dim ladder, descending m.
pub fn ladder_operators<T: Real>(j: HalfInt) -> [CMatrix<T>; 3] {
    let d = j.ladder_dim();
    let jj = j.value() * (j.value() + 1.0);
    let mut raise = CMatrix::<T>::zeros(d, d);
    for k in 1..d {
        let m = j.m_at(k);
        raise[(k - 1, k)] = creal(lit((jj - m * (m + 1.0)).sqrt()));
    }
    let lower = raise.adjoint();
    let half = lit::<T>(0.5);
    let jx = (&raise + &lower).map(|z| z * half);
    let jy = (&raise - &lower).map(|z| z * cplx(T::zero(), -half));
    let jz = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            creal(lit(j.m_at(r)))
        } else {
            creal(T::zero())
        }
    });
    [jx, jy, jz]
}

/// Collective charger operators for total spin `j` of `n` chargers.
pub fn collective_operators<T: Real>(n: usize, j: HalfInt) -> Result<[CMatrix<T>; 3]> {
    check_pair(n, j)?;
    Ok(ladder_operators(j))
}
