//! Barut-Girardello and Gilmore-Perelomov coherent states of the well.
//!
//! The BG state is the right eigenstate of K₋, with level coefficients
//! N(|α|²)·α^j/(j+1)! on level j+1 and N = S(|α|²)^{-1/2} from
//! [`crate::special::bg_norm_series`]. The GP state is the harmonious-state
//! orbit √(1−|α|²)·Σ α^j|j+1⟩, defined for |α| < 1, with the displacement
//! amplitude ξ mapped to α = (ξ/|ξ|)·tanh|ξ|.
//!
//! The BG family resolves the identity with the weight
//! w(x) = 2x·K₀(2√x)/(π·N²(x)): after the analytic angular integral, the
//! requirement reduces level by level to the inverse moment problem
//! 2∫₀^∞ x^{j+1} K₀(2√x) dx = Γ(j+2)², which [`moment_check`] verifies by
//! adaptive quadrature in the Bessel variable t = 2√x. The weight and the
//! product w·N² are exposed separately — N² appears on both sides of the
//! moment identity and is easy to double-count.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::quad::{self, QuadError};
use crate::special::{bessel_k0, bg_norm_series, ln_gamma, SpecialError};
use crate::su11::{LevelVector, Su11Error};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoherentError {
    #[error("operation requires the {expected} family, spec carries {got}")]
    WrongFamily { expected: Family, got: Family },
    #[error("Gilmore-Perelomov amplitude must satisfy |alpha| < 1, got |alpha| = {0}")]
    AmplitudeOutOfDisk(f64),
    #[error("truncation insufficient: tail bound {bound:e} exceeds tolerance {tol:e}")]
    TruncationInsufficient { bound: f64, tol: f64 },
    #[error("moment order {0} exceeds the double-precision headroom (12)")]
    MomentOrder(usize),
    #[error("weight argument must be positive, got {0}")]
    WeightDomain(f64),
    #[error(transparent)]
    Su11(#[from] Su11Error),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Coherent-state family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BarutGirardello,
    GilmorePerelomov,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::BarutGirardello => write!(f, "bg"),
            Family::GilmorePerelomov => write!(f, "gp"),
        }
    }
}

/// Family, amplitude, truncation and tail tolerance of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    pub family: Family,
    pub alpha: C64,
    pub j_max: usize,
    pub tail_tol: f64,
}

impl CoherentSpec {
    pub fn bg(alpha: C64, j_max: usize) -> Self {
        Self { family: Family::BarutGirardello, alpha, j_max, tail_tol: 1e-12 }
    }

    pub fn gp(alpha: C64, j_max: usize) -> Self {
        Self { family: Family::GilmorePerelomov, alpha, j_max, tail_tol: 1e-12 }
    }

    pub fn with_tail_tol(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    /// Occupation bound of the top retained level at this truncation.
    pub fn tail_bound(&self) -> f64 {
        let x = self.alpha.norm_sqr();
        match self.family {
            Family::BarutGirardello => {
                let mut log_fact = 0.0_f64; // ln(J_max!)
                for k in 1..=self.j_max {
                    log_fact += (k as f64).ln();
                }
                let n_sq = 1.0 / bg_norm_series(x);
                if x == 0.0 {
                    return 0.0;
                }
                (x.ln() * (self.j_max as f64 - 1.0) - 2.0 * log_fact).exp() * n_sq
            }
            Family::GilmorePerelomov => {
                (1.0 - x) * x.powi(self.j_max as i32 - 1)
            }
        }
    }

    fn check_tail(&self) -> Result<(), CoherentError> {
        let bound = self.tail_bound();
        if bound > self.tail_tol {
            return Err(CoherentError::TruncationInsufficient { bound, tol: self.tail_tol });
        }
        Ok(())
    }
}

/// |α⟩_BG with coefficients N(|α|²)·α^j/(j+1)! on level j+1, j = 0..J_max−2;
/// the top level is left empty so the K₋ eigenvalue relation is clean below
/// the truncation edge. Unit norm to within the tail tolerance.
pub fn bg_state(spec: &CoherentSpec) -> Result<LevelVector, CoherentError> {
    if spec.family != Family::BarutGirardello {
        return Err(CoherentError::WrongFamily {
            expected: Family::BarutGirardello,
            got: spec.family,
        });
    }
    spec.check_tail()?;
    let x = spec.alpha.norm_sqr();
    let n = bg_norm_series(x).sqrt().recip();
    let mut coeffs = vec![C64::new(0.0, 0.0); spec.j_max];
    let mut c = C64::new(n, 0.0); // level 1: N·α⁰/1!
    coeffs[0] = c;
    for level in 2..spec.j_max {
        c = c * spec.alpha / (level as f64);
        coeffs[level - 1] = c;
    }
    Ok(LevelVector::from_coeffs(coeffs))
}

/// |α⟩_GP with coefficients √(1−|α|²)·α^j on level j+1. Requires |α| < 1.
pub fn gp_state(spec: &CoherentSpec) -> Result<LevelVector, CoherentError> {
    if spec.family != Family::GilmorePerelomov {
        return Err(CoherentError::WrongFamily {
            expected: Family::GilmorePerelomov,
            got: spec.family,
        });
    }
    let x = spec.alpha.norm_sqr();
    if x >= 1.0 {
        return Err(CoherentError::AmplitudeOutOfDisk(x.sqrt()));
    }
    spec.check_tail()?;
    let pref = (1.0 - x).sqrt();
    let mut coeffs = vec![C64::new(0.0, 0.0); spec.j_max];
    let mut c = C64::new(pref, 0.0);
    coeffs[0] = c;
    for level in 2..=spec.j_max {
        c *= spec.alpha;
        coeffs[level - 1] = c;
    }
    Ok(LevelVector::from_coeffs(coeffs))
}

/// Builds the state described by `spec`, whichever family it carries.
pub fn coherent_state(spec: &CoherentSpec) -> Result<LevelVector, CoherentError> {
    match spec.family {
        Family::BarutGirardello => bg_state(spec),
        Family::GilmorePerelomov => gp_state(spec),
    }
}

/// Displacement amplitude map α = (ξ/|ξ|)·tanh|ξ|; the modulus-tanh reading
/// keeps |α| < 1 for every ξ and reduces to tanh ξ on the positive axis.
/// ξ = 0 maps to 0.
pub fn displacement_alpha(xi: C64) -> C64 {
    let m = xi.norm();
    if m == 0.0 {
        return C64::new(0.0, 0.0);
    }
    xi / m * m.tanh()
}

/// Hermitian overlap ⟨a|b⟩ = Σ conj(a_j)·b_j.
pub fn overlap(a: &LevelVector, b: &LevelVector) -> Result<C64, CoherentError> {
    Ok(a.inner(b)?)
}

/// Residual ‖K₋|v⟩ − α|v⟩‖/|α| of the eigenvalue relation, restricted to
/// levels below the truncation edge.
pub fn bg_eigen_residual(v: &LevelVector, alpha: C64) -> Result<f64, CoherentError> {
    let j_max = v.j_max();
    let (_, km, _) = crate::su11::ladder_matrices(j_max);
    let lowered = km.apply(v)?;
    let mut sum = 0.0;
    for level in 1..j_max {
        sum += (lowered.coeff(level) - alpha * v.coeff(level)).norm_sqr();
    }
    Ok(sum.sqrt() / alpha.norm())
}

/// w(x) = 2x·K₀(2√x)/(π·N²(x)) with N²(x) = 1/S(x); since S is the
/// normalization series, this is 2x·K₀(2√x)·S(x)/π.
pub fn bg_weight(x: f64) -> Result<f64, CoherentError> {
    if !(x > 0.0) {
        return Err(CoherentError::WeightDomain(x));
    }
    Ok(bg_weight_kernel(x)? * bg_norm_series(x))
}

/// The normalization-free product w(x)·N²(x) = 2x·K₀(2√x)/π that actually
/// enters the moment identity.
pub fn bg_weight_kernel(x: f64) -> Result<f64, CoherentError> {
    if !(x > 0.0) {
        return Err(CoherentError::WeightDomain(x));
    }
    Ok(2.0 * x * bessel_k0(2.0 * x.sqrt())? / std::f64::consts::PI)
}

/// Both sides of the level-(j+1) moment identity.
#[derive(Debug, Clone, Copy)]
pub struct MomentCheck {
    /// 2∫₀^∞ x^{j+1} K₀(2√x) dx by adaptive quadrature.
    pub lhs: f64,
    /// Γ(j+2)².
    pub rhs: f64,
}

impl MomentCheck {
    pub fn relative_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs
    }
}

/// Verifies 2∫₀^∞ x^{j+1}K₀(2√x) dx = Γ(j+2)² for one moment order.
///
/// The substitution x = t²/4 turns the left side into
/// ∫₀^∞ (t²/4)^{j+1}·t·K₀(t) dt, which peaks at t ≈ 2j+3; the integral is
/// split there and carried to where the integrand has fallen below 1e-18 of
/// its peak.
pub fn moment_check(j: usize) -> Result<MomentCheck, CoherentError> {
    moment_check_with_budget(j, DEFAULT_RADIAL_BUDGET)
}

const DEFAULT_RADIAL_BUDGET: usize = 4000;

fn moment_check_with_budget(j: usize, max_panels: usize) -> Result<MomentCheck, CoherentError> {
    if j > 12 {
        return Err(CoherentError::MomentOrder(j));
    }
    // After x = t²/4: 2·x^{j+1}·K₀(2√x)·dx = (t/2)^{2j+3}·2·K₀(t)·dt.
    let power = 2 * j as i32 + 3;
    let integrand = move |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let k0 = bessel_k0(t).unwrap_or(0.0);
        (0.5 * t).powi(power) * 2.0 * k0
    };
    let split = 2.0 * (j as f64 + 2.0);
    let peak_t = (2 * j + 3) as f64;
    let peak = integrand(peak_t);
    let mut upper = peak_t + 50.0;
    while integrand(upper) > 1e-18 * peak {
        upper += 20.0;
    }
    let head = quad::integrate(&integrand, 0.0, split, 1e-11, max_panels)?;
    let tail = quad::integrate(&integrand, split, upper, 1e-11, max_panels)?;
    let rhs = (2.0 * ln_gamma(j as f64 + 2.0)?).exp();
    Ok(MomentCheck { lhs: head.value + tail.value, rhs })
}

/// Diagonal of ∫d²α w(|α|²)|α⟩⟨α| on levels 1..=j_levels.
///
/// The angular integral is analytic: it kills every off-diagonal term and
/// contributes 2π, leaving the radial moment ratio lhs/Γ(j+2)² per level.
/// All entries must be one. `radial_points` caps the adaptive refinement of
/// the radial quadrature.
pub fn identity_resolution_diag(
    j_levels: usize,
    radial_points: usize,
) -> Result<Vec<f64>, CoherentError> {
    if j_levels > 12 {
        return Err(CoherentError::MomentOrder(j_levels));
    }
    (0..j_levels)
        .map(|j| {
            let m = moment_check_with_budget(j, radial_points)?;
            Ok(m.lhs / m.rhs)
        })
        .collect()
}
