//! su(1,1) ladder operators of the well, in two representations.
//!
//! On the level space spanned by |j⟩, j = 1, 2, ..., the ladder operators act
//! as K±|j⟩ = j|j±1⟩ and K₀|j⟩ = j|j⟩ (the image of K₋|1⟩ is ψ₀ ∝ sin(0) ≡ 0,
//! so level one is annihilated without any flag). On the grid they are the
//! differential operators K± = ±sin(y)d/dy + cos(y)K₀ in the rescaled
//! coordinate y = πx/L.
//!
//! In this representation the matrix elements make K₊ and K₋† differ by
//! exactly one on every ladder entry; [`adjoint_defect`] measures that as a
//! first-class diagnostic instead of symmetrizing it away, because every
//! downstream formula (coherent states, squeezing, Mandel Q, the driven
//! Jaynes-Cummings coupling) is written in terms of these literal matrices.

use std::io::{self, Write};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::factorization::analytic_eigenfunction;
use crate::grid::{Boundary, Grid, GridError, GridFunction};
use crate::units::WellParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su11Error {
    #[error("level vectors have different truncation: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("level index {level} outside 1..={j_max}")]
    LevelOutOfRange { level: usize, j_max: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Complex coefficients over well levels j = 1..J_max.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelVector {
    coeffs: Array1<C64>,
}

impl LevelVector {
    pub fn zeros(j_max: usize) -> Self {
        assert!(j_max >= 1);
        Self { coeffs: Array1::zeros(j_max) }
    }

    /// Unit vector on a single level (1-based).
    pub fn basis_state(j_max: usize, level: usize) -> Result<Self, Su11Error> {
        if level == 0 || level > j_max {
            return Err(Su11Error::LevelOutOfRange { level, j_max });
        }
        let mut v = Self::zeros(j_max);
        v.coeffs[level - 1] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs: Array1::from_vec(coeffs) }
    }

    pub fn j_max(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of a 1-based level.
    pub fn coeff(&self, level: usize) -> C64 {
        self.coeffs[level - 1]
    }

    pub fn coeffs(&self) -> &Array1<C64> {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        Self { coeffs: self.coeffs.mapv(|c| c / n) }
    }

    /// Hermitian inner product Σ conj(a_j)·b_j.
    pub fn inner(&self, other: &LevelVector) -> Result<C64, Su11Error> {
        if self.j_max() != other.j_max() {
            return Err(Su11Error::SizeMismatch(self.j_max(), other.j_max()));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn add(&self, other: &LevelVector) -> Result<Self, Su11Error> {
        if self.j_max() != other.j_max() {
            return Err(Su11Error::SizeMismatch(self.j_max(), other.j_max()));
        }
        Ok(Self { coeffs: &self.coeffs + &other.coeffs })
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { coeffs: self.coeffs.mapv(|v| v * c) }
    }

    /// Occupation |c_J|² of the top level, the truncation-tail indicator.
    pub fn top_level_occupation(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1].norm_sqr()
    }
}

/// Labels for the dense level-space operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    KPlus,
    KMinus,
    KZero,
    Hamiltonian,
    X1,
    Y1,
    X2,
    Y2,
    Custom,
}

/// Dense complex matrix acting on [`LevelVector`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelOperator {
    label: OperatorLabel,
    entries: Array2<C64>,
}

impl LevelOperator {
    pub fn new(label: OperatorLabel, entries: Array2<C64>) -> Self {
        assert!(entries.is_square(), "level operators are square");
        Self { label, entries }
    }

    pub fn label(&self) -> OperatorLabel {
        self.label
    }

    pub fn j_max(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    /// Matrix element between 1-based levels: ⟨row|O|col⟩.
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[[row - 1, col - 1]]
    }

    pub fn apply(&self, v: &LevelVector) -> Result<LevelVector, Su11Error> {
        if v.j_max() != self.j_max() {
            return Err(Su11Error::SizeMismatch(self.j_max(), v.j_max()));
        }
        Ok(LevelVector { coeffs: self.entries.dot(&v.coeffs) })
    }

    pub fn matmul(&self, other: &LevelOperator) -> LevelOperator {
        assert_eq!(self.j_max(), other.j_max(), "operator size mismatch");
        LevelOperator {
            label: OperatorLabel::Custom,
            entries: self.entries.dot(&other.entries),
        }
    }

    pub fn add(&self, other: &LevelOperator) -> LevelOperator {
        LevelOperator {
            label: OperatorLabel::Custom,
            entries: &self.entries + &other.entries,
        }
    }

    pub fn sub(&self, other: &LevelOperator) -> LevelOperator {
        LevelOperator {
            label: OperatorLabel::Custom,
            entries: &self.entries - &other.entries,
        }
    }

    pub fn scaled(&self, c: C64) -> LevelOperator {
        LevelOperator { label: OperatorLabel::Custom, entries: self.entries.mapv(|v| v * c) }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> LevelOperator {
        LevelOperator {
            label: OperatorLabel::Custom,
            entries: self.entries.t().mapv(|v| v.conj()),
        }
    }

    pub fn commutator(&self, other: &LevelOperator) -> LevelOperator {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Largest |entry| over rows and columns ≤ `levels` (1-based cap).
    pub fn max_abs_on_block(&self, levels: usize) -> f64 {
        let m = levels.min(self.j_max());
        let mut worst = 0.0_f64;
        for r in 0..m {
            for c in 0..m {
                worst = worst.max(self.entries[[r, c]].norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Expectation ⟨v|O|v⟩ without normalizing v.
    pub fn expectation(&self, v: &LevelVector) -> Result<C64, Su11Error> {
        let ov = self.apply(v)?;
        v.inner(&ov)
    }

    /// Dense CSV with interleaved re/im columns for external inspection.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let n = self.j_max();
        let mut header = Vec::with_capacity(2 * n);
        for c in 1..=n {
            header.push(format!("re_{c}"));
            header.push(format!("im_{c}"));
        }
        writeln!(out, "{}", header.join(","))?;
        for r in 0..n {
            let mut row = Vec::with_capacity(2 * n);
            for c in 0..n {
                row.push(format!("{}", self.entries[[r, c]].re));
                row.push(format!("{}", self.entries[[r, c]].im));
            }
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// The truncated matrices of K₊, K₋, K₀: (K₊)_{j+1,j} = j, (K₋)_{j,j+1} = j+1,
/// (K₀)_{jj} = j. K₊ on the top level truncates to zero.
pub fn ladder_matrices(j_max: usize) -> (LevelOperator, LevelOperator, LevelOperator) {
    assert!(j_max >= 2, "need at least two levels");
    let mut kp = Array2::<C64>::zeros((j_max, j_max));
    let mut km = Array2::<C64>::zeros((j_max, j_max));
    let mut k0 = Array2::<C64>::zeros((j_max, j_max));
    for i in 0..j_max {
        let level = (i + 1) as f64;
        k0[[i, i]] = C64::new(level, 0.0);
        if i + 1 < j_max {
            kp[[i + 1, i]] = C64::new(level, 0.0); // K₊|j⟩ = j|j+1⟩
            km[[i, i + 1]] = C64::new(level + 1.0, 0.0); // K₋|j+1⟩ = (j+1)|j⟩
        }
    }
    (
        LevelOperator::new(OperatorLabel::KPlus, kp),
        LevelOperator::new(OperatorLabel::KMinus, km),
        LevelOperator::new(OperatorLabel::KZero, k0),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderDirection {
    Raise,
    Lower,
}

/// K± as a differential operator, ±sin(y)·f' + cos(y)·j·f in y = πx/L, with
/// K₀ replaced by its eigenvalue `level_hint` on f. The hint is required
/// because K₀ is not local on arbitrary grid data: the caller must pass an
/// eigenlevel ψ_j together with its index.
pub fn apply_position_ladder(
    f: &GridFunction,
    direction: LadderDirection,
    level_hint: usize,
    params: &WellParams,
) -> Result<GridFunction, GridError> {
    let df = f.differentiate(Boundary::Dirichlet)?;
    let b = std::f64::consts::PI / params.width;
    let dy_scale = 1.0 / b; // d/dy = (L/π) d/dx
    let sign = match direction {
        LadderDirection::Raise => 1.0,
        LadderDirection::Lower => -1.0,
    };
    let grid = f.grid();
    let mut values = Vec::with_capacity(grid.n_points());
    for (i, x) in grid.points().enumerate() {
        let y = b * x;
        let v = df.values()[i] * (sign * y.sin() * dy_scale)
            + f.values()[i] * (y.cos() * level_hint as f64);
        values.push(v);
    }
    GridFunction::from_values(grid, values)
}

/// H = (π²ħ²/2mL²)(K₊K₋ + K₀), checked against the two equivalent forms
/// (π²ħ²/2mL²)(K₋K₊ − K₀) and (π²ħ²/4mL²){K₊, K₋} on levels below the
/// truncation edge, where all three are exact.
pub fn hamiltonian_fock(j_max: usize, params: &WellParams) -> LevelOperator {
    let (kp, km, k0) = ladder_matrices(j_max);
    let scale = C64::new(params.energy_scale(), 0.0);
    let form1 = kp.matmul(&km).add(&k0).scaled(scale);
    let form2 = km.matmul(&kp).sub(&k0).scaled(scale);
    let form3 = kp
        .matmul(&km)
        .add(&km.matmul(&kp))
        .scaled(C64::new(0.5 * params.energy_scale(), 0.0));
    let block = j_max - 1;
    assert_eq!(
        form1.sub(&form2).max_abs_on_block(block),
        0.0,
        "K₊K₋+K₀ and K₋K₊−K₀ forms must agree below the truncation edge"
    );
    assert_eq!(
        form1.sub(&form3).max_abs_on_block(block),
        0.0,
        "anticommutator form must agree below the truncation edge"
    );
    LevelOperator::new(OperatorLabel::Hamiltonian, form1.entries)
}

/// max |K₊ − K₋†| over levels below the truncation edge. This equals one in
/// the orthonormal eigenbasis — (K₊)_{j+1,j} = j while (K₋†)_{j+1,j} = j+1 —
/// so the adjointness K±† = K∓ fails for the literal matrices; the commutators
/// of the algebra hold regardless.
pub fn adjoint_defect(j_max: usize) -> f64 {
    assert!(j_max >= 3, "need at least three levels");
    let (kp, km, _) = ladder_matrices(j_max);
    kp.sub(&km.adjoint()).max_abs_on_block(j_max - 1)
}

/// Expansion coefficients ⟨ψ_k, f⟩ of a grid function over the analytic
/// eigenlevels, k = 1..j_max, by quadrature.
pub fn expand_in_levels(
    f: &GridFunction,
    j_max: usize,
    params: &WellParams,
) -> Result<LevelVector, Su11Error> {
    let grid = f.grid();
    let mut coeffs = Vec::with_capacity(j_max);
    for k in 1..=j_max {
        let psi = analytic_eigenfunction(k, grid, params);
        coeffs.push(psi.inner_product(f)?);
    }
    Ok(LevelVector::from_coeffs(coeffs))
}
