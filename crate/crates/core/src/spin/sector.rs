//! Block-diagonal representation of permutation-invariant star states.
//!
//! A state of one battery and N chargers that commutes with every charger
//! permutation decomposes as ⊕_j (A_j ⊗ 1_{d_{N,j}}), where A_j acts on
//! battery ⊗ (spin-j ladder). Only the A_j are stored; the exact integer
//! multiplicities d_{N,j} are folded in when observables are extracted.

use nalgebra::{Complex, DMatrix, DVector};

use super::density::DensityMatrix;
use super::dicke::{dicke_multiplicity, ladder_operators, total_spins, HalfInt};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{creal, lit, CMatrix, Real};

/// Largest charger count [`SectorState::expand`] accepts.
pub const MAX_EXPAND_CHARGERS: usize = 10;

/// One total-spin-j block over battery ⊗ ladder, dims `[2, 2j+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBlock<T: Real> {
    pub j: HalfInt,
    pub multiplicity: u128,
    /// Unnormalized; Σ_j multiplicity·Tr(matrix) = 1.
    pub matrix: CMatrix<T>,
}

impl<T: Real> SectorBlock<T> {
    pub fn ladder_dim(&self) -> usize {
        self.j.ladder_dim()
    }

    fn weight(&self) -> T {
        lit(self.multiplicity as f64)
    }

    /// Total z-magnetization of block basis index `(battery, k)`.
    pub fn magnetization(&self, index: usize) -> f64 {
        let d = self.ladder_dim();
        let battery = if index / d == 0 { 0.5 } else { -0.5 };
        battery + self.j.m_at(index % d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorState<T: Real> {
    n_chargers: usize,
    blocks: Vec<SectorBlock<T>>,
}

fn diag2<T: Real>(p0: T, p1: T) -> CMatrix<T> {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = creal(p0);
    m[(1, 1)] = creal(p1);
    m
}

fn check_polarization<T: Real>(p: T, what: &str) -> Result<()> {
    if p.abs() > T::one() {
        return Err(Error::Domain(format!("{what} polarization {p} outside [-1, 1]")));
    }
    Ok(())
}

impl<T: Real> SectorState<T> {
    /// Diagonal product state: battery with ⟨σ_z⟩ = `battery_pol`, every
    /// charger with ⟨σ_z⟩ = `charger_pol`.
    pub fn product(n_chargers: usize, battery_pol: T, charger_pol: T) -> Result<Self> {
        if n_chargers == 0 {
            return Err(Error::Domain("need at least one charger".into()));
        }
        check_polarization(battery_pol, "battery")?;
        check_polarization(charger_pol, "charger")?;
        let half = lit::<T>(0.5);
        let battery = diag2(half * (T::one() + battery_pol), half * (T::one() - battery_pol));
        let up = half * (T::one() + charger_pol);
        let down = half * (T::one() - charger_pol);
        let blocks = total_spins(n_chargers)
            .into_iter()
            .map(|j| {
                let d = j.ladder_dim();
                // |j, m⟩ has N/2 + m up spins and N/2 − m down spins
                let n_up0 = (n_chargers + j.doubled() as usize) / 2;
                let ladder = CMatrix::from_fn(d, d, |r, c| {
                    if r == c {
                        let n_up = n_up0 - r;
                        let n_down = n_chargers - n_up;
                        creal(up.powi(n_up as i32) * down.powi(n_down as i32))
                    } else {
                        creal(T::zero())
                    }
                });
                Ok(SectorBlock {
                    j,
                    multiplicity: dicke_multiplicity(n_chargers, j)?,
                    matrix: linalg::kron(&battery, &ladder),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_chargers, blocks })
    }

    pub fn from_blocks(n_chargers: usize, blocks: Vec<SectorBlock<T>>) -> Result<Self> {
        let expected = total_spins(n_chargers);
        if blocks.len() != expected.len()
            || blocks.iter().zip(&expected).any(|(b, &j)| {
                b.j != j || b.matrix.nrows() != 2 * j.ladder_dim() || b.matrix.ncols() != 2 * j.ladder_dim()
            })
        {
            return Err(Error::Dimension("blocks do not match the spins of N chargers".into()));
        }
        for b in &blocks {
            if b.multiplicity != dicke_multiplicity(n_chargers, b.j)? {
                return Err(Error::Domain(format!("wrong multiplicity for j = {}", b.j)));
            }
        }
        Ok(Self { n_chargers, blocks })
    }

    pub fn n_chargers(&self) -> usize {
        self.n_chargers
    }

    pub fn blocks(&self) -> &[SectorBlock<T>] {
        &self.blocks
    }

    /// Apply `f` to every block matrix.
    pub fn map_blocks(&self, mut f: impl FnMut(&SectorBlock<T>) -> CMatrix<T>) -> Self {
        Self {
            n_chargers: self.n_chargers,
            blocks: self
                .blocks
                .iter()
                .map(|b| SectorBlock {
                    j: b.j,
                    multiplicity: b.multiplicity,
                    matrix: f(b),
                })
                .collect(),
        }
    }

    /// Σ_j d_j Tr(A_j).
    pub fn trace(&self) -> T {
        self.blocks.iter().fold(T::zero(), |acc, b| {
            acc + b.weight() * linalg::trace(&b.matrix).re
        })
    }

    /// Σ_j d_j Re Tr(A_j · op_j).
    pub fn expectation(&self, mut op: impl FnMut(HalfInt) -> CMatrix<T>) -> T {
        self.blocks.iter().fold(T::zero(), |acc, b| {
            acc + b.weight() * linalg::trace_product_re(&b.matrix, &op(b.j))
        })
    }

    pub fn purity(&self) -> T {
        self.blocks.iter().fold(T::zero(), |acc, b| {
            acc + b.weight() * linalg::trace_product_re(&b.matrix, &b.matrix)
        })
    }

    /// Tr_C: the 2×2 battery state.
    pub fn battery_reduced(&self) -> DensityMatrix<T> {
        let mut out = CMatrix::zeros(2, 2);
        for b in &self.blocks {
            let d = b.ladder_dim();
            let w = creal(b.weight());
            for r in 0..2 {
                for c in 0..2 {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for k in 0..d {
                        acc += b.matrix[(r * d + k, c * d + k)];
                    }
                    out[(r, c)] += acc * w;
                }
            }
        }
        DensityMatrix::from_matrix_unchecked(vec![2], out).expect("2x2 battery state")
    }

    /// ⟨σ_z⟩ of the battery.
    pub fn battery_polarization(&self) -> T {
        let b = self.battery_reduced();
        b.population(0) - b.population(1)
    }

    /// Mean single-charger ⟨σ_z⟩ = 2⟨J_z⟩/N.
    pub fn charger_polarization(&self) -> T {
        let two_over_n = lit::<T>(2.0 / self.n_chargers as f64);
        self.expectation(|j| {
            let [_, _, jz] = ladder_operators::<T>(j);
            linalg::kron(&linalg::identity(2), &jz)
        }) * two_over_n
    }

    /// Reduced state of the battery and one charger (dims `[2, 2]`).
    ///
    /// Uses permutation symmetry: ⟨σ_a ⊗ σ_b^{(1)}⟩ = ⟨σ_a ⊗ 2J_b⟩ / N, so
    /// no full-space expansion is needed.
    pub fn battery_charger_pair(&self) -> DensityMatrix<T> {
        let s = linalg::spin_half::<T>();
        let two = lit::<T>(2.0);
        let mut pauli: Vec<CMatrix<T>> = vec![linalg::identity(2)];
        pauli.extend(s.iter().map(|m| m.map(|z| z * creal(two))));
        let inv_n = lit::<T>(1.0 / self.n_chargers as f64);
        let mut out = CMatrix::<T>::zeros(4, 4);
        let quarter = lit::<T>(0.25);
        for (a, pa) in pauli.iter().enumerate() {
            for b in 0..4 {
                let coeff = if a == 0 && b == 0 {
                    T::one()
                } else if b == 0 {
                    self.expectation(|j| linalg::kron(pa, &linalg::identity(j.ladder_dim())))
                } else {
                    self.expectation(|j| {
                        let jb = &ladder_operators::<T>(j)[b - 1];
                        linalg::kron(pa, &jb.map(|z| z * creal(two)))
                    }) * inv_n
                };
                out += linalg::kron(pa, &pauli[b]).map(|z| z * creal(coeff * quarter));
            }
        }
        DensityMatrix::from_matrix_unchecked(vec![2, 2], out).expect("4x4 pair state")
    }

    /// Conjugate every block by `1 ⊗ exp(−iπ J_x)`: a π pulse on all chargers.
    pub fn invert_chargers(&self) -> Self {
        self.map_blocks(|b| {
            let [jx, _, _] = ladder_operators::<T>(b.j);
            let pulse = linalg::kron(&linalg::identity(2), &linalg::expm_hermitian(&jx, T::pi()));
            linalg::conjugate(&pulse, &b.matrix)
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(T::zero(), |acc, (a, b)| acc.max(linalg::max_abs_diff(&a.matrix, &b.matrix)))
    }

    /// The equivalent density matrix on the full 2^(N+1)-dim space.
    ///
    /// Built from an explicit Clebsch–Gordan basis: highest-weight vectors
    /// from the J² eigenspace at M = j, lowered with J₋.
    pub fn expand(&self) -> Result<DensityMatrix<T>> {
        let n = self.n_chargers;
        if n > MAX_EXPAND_CHARGERS {
            return Err(Error::Resource(format!(
                "expansion limited to {MAX_EXPAND_CHARGERS} chargers, got {n}"
            )));
        }
        let dc = 1usize << n;
        let mut full = CMatrix::<T>::zeros(2 * dc, 2 * dc);
        for block in &self.blocks {
            let basis = coupled_basis::<T>(n, block.j)?;
            let d = block.ladder_dim();
            let mult = block.multiplicity as usize;
            let id_mult = linalg::identity::<T>(mult);
            for r in 0..2 {
                for c in 0..2 {
                    let sub = block.matrix.view((r * d, c * d), (d, d)).into_owned();
                    let lifted = linalg::real_congruence(&basis, &linalg::kron(&sub, &id_mult), &basis);
                    let mut view = full.view_mut((r * dc, c * dc), (dc, dc));
                    view += lifted;
                }
            }
        }
        DensityMatrix::from_matrix_unchecked(vec![2; n + 1], full)
    }
}

/// Columns |j, m_k, α⟩ in the charger computational basis, ordered with the
/// ladder index k major and the multiplicity copy α minor.
fn coupled_basis<T: Real>(n: usize, j: HalfInt) -> Result<DMatrix<T>> {
    let d = j.ladder_dim();
    let mult = dicke_multiplicity(n, j)? as usize;
    let dim = 1usize << n;
    let bit = |site: usize| 1usize << (n - 1 - site);
    let n_down = (n - j.doubled() as usize) / 2;
    let sector: Vec<usize> = (0..dim).filter(|x| x.count_ones() as usize == n_down).collect();
    let pos = |x: usize| sector.binary_search(&x).ok();

    // J² = 3N/4 + Σ_{i<l} (P_il − 1/2)
    let s = sector.len();
    let mut j2 = DMatrix::<T>::zeros(s, s);
    for (a, &x) in sector.iter().enumerate() {
        let mut diag = 0.75 * n as f64;
        for i in 0..n {
            for l in (i + 1)..n {
                let bi = x & bit(i) != 0;
                let bl = x & bit(l) != 0;
                if bi == bl {
                    diag += 0.5;
                } else {
                    diag -= 0.5;
                    let y = x ^ bit(i) ^ bit(l);
                    let b = pos(y).expect("swap stays in sector");
                    j2[(a, b)] += T::one();
                }
            }
        }
        j2[(a, a)] += lit(diag);
    }
    let (values, vectors) = linalg::symmetric_eigen(&j2);
    let target = j.value() * (j.value() + 1.0);
    let highest: Vec<DVector<T>> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (crate::scalar::to_f64(v) - target).abs() < 0.25)
        .map(|(c, _)| {
            let mut full = DVector::<T>::zeros(dim);
            for (a, &x) in sector.iter().enumerate() {
                full[x] = vectors[(a, c)];
            }
            full
        })
        .collect();
    if highest.len() != mult {
        return Err(Error::Domain(format!(
            "found {} highest-weight vectors for j = {j}, expected {mult}",
            highest.len()
        )));
    }

    let mut out = DMatrix::<T>::zeros(dim, d * mult);
    for (alpha, hw) in highest.into_iter().enumerate() {
        let mut v = hw;
        for k in 0..d {
            out.set_column(k * mult + alpha, &v);
            if k + 1 < d {
                let m = j.m_at(k);
                let norm = lit::<T>((target - m * (m - 1.0)).sqrt());
                let mut lowered = DVector::<T>::zeros(dim);
                for x in 0..dim {
                    if v[x] == T::zero() {
                        continue;
                    }
                    for site in 0..n {
                        if x & bit(site) == 0 {
                            lowered[x | bit(site)] += v[x];
                        }
                    }
                }
                v = lowered / norm;
            }
        }
    }
    Ok(out)
}

/// Thermal equilibrium before any pulse: battery ⟨σ_z⟩ = ε, chargers ⟨σ_z⟩ = γε.
pub fn equilibrium_state<T: Real>(config: &SystemConfig) -> Result<SectorState<T>> {
    config.validate()?;
    SectorState::product(
        config.n_chargers,
        lit(config.epsilon),
        lit(config.charger_purity()),
    )
}

/// Energized initial state ρ_B(0) ⊗ ρ_C(0): battery populations (1±ε)/2 on
/// (|0⟩, |1⟩), each charger (1∓γε)/2, i.e. charger populations inverted
/// relative to equilibrium.
pub fn thermal_state<T: Real>(config: &SystemConfig) -> Result<SectorState<T>> {
    config.validate()?;
    SectorState::product(
        config.n_chargers,
        lit(config.epsilon),
        lit(-config.charger_purity()),
    )
}

/// Full-space counterpart of [`thermal_state`], as a literal tensor product.
pub fn thermal_state_full<T: Real>(config: &SystemConfig) -> Result<DensityMatrix<T>> {
    config.validate()?;
    if config.n_chargers + 1 > crate::dynamics::MAX_FULL_QUBITS {
        return Err(Error::Resource(format!(
            "full space limited to {} spins",
            crate::dynamics::MAX_FULL_QUBITS
        )));
    }
    let mut pols = vec![lit::<T>(config.epsilon)];
    pols.extend(std::iter::repeat_n(lit::<T>(-config.charger_purity()), config.n_chargers));
    DensityMatrix::qubit_product(&pols)
}

/// Battery reduced state of a sector state.
pub fn battery_reduced<T: Real>(state: &SectorState<T>) -> DensityMatrix<T> {
    state.battery_reduced()
}
