//! Squeezing, amplitude-squared squeezing and Mandel-Q diagnostics.
//!
//! The quadratures are built from the literal ladder matrices,
//! X₁ = (K₋+K₊)/2, Y₁ = (K₋−K₊)/(2i), X₂ = (K₋²+K₊²)/2, Y₂ = (K₋²−K₊²)/(2i),
//! without Hermitian symmetrization. X₁ and Y₁ are then not Hermitian, and an
//! expectation like ⟨Y₁⟩ can come out imaginary — but for real α every
//! variance and commutator modulus entering the squeezing parameters is real,
//! which is what makes the real-axis sweeps well defined. Imaginary residues
//! are asserted below 1e-12 and discarded.
//!
//! s_γ = (Δγ)²/(½|⟨[X,Y]⟩|) − 1, squeezing means −1 < s < 0.
//! Q = (⟨K₊²K₋²⟩ − ⟨K₊K₋⟩²)/⟨K₊K₋⟩ − 1, evaluated as probability-weighted
//! diagonal sums since K₊K₋|j⟩ = j(j−1)|j⟩ and K₊²K₋²|j⟩ = j(j−1)²(j−2)|j⟩.
//! Q is 0/0 at α = 0 exactly; the sweep flags the point and the α→0 limit is
//! [`MANDEL_Q_LIMIT_AT_ZERO`].

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use crate::coherent::{coherent_state, CoherentError, CoherentSpec, Family};
use crate::su11::{ladder_matrices, LevelOperator, LevelVector, OperatorLabel, Su11Error};

/// Limit of the Mandel parameter as α → 0, for both families.
pub const MANDEL_Q_LIMIT_AT_ZERO: f64 = -1.0;

/// Top-level occupation above which a sweep point is flagged as
/// truncation-contaminated.
pub const TRUNCATION_WARN_OCCUPATION: f64 = 1e-10;

const REALITY_TOL: f64 = 1e-12;
const SINGULAR_DENOMINATOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NonclassicalError {
    #[error("commutator denominator {0:e} below the singular threshold")]
    SingularDenominator(f64),
    #[error("⟨K₊K₋⟩ = {0:e} is singular (α = 0); the limit value is -1")]
    SingularExcitation(f64),
    #[error("expectation has imaginary residue {0:e} on a real-α state")]
    RealityViolation(f64),
    #[error("Gilmore-Perelomov sweep amplitude |{0}| >= 1")]
    GpAmplitude(f64),
    #[error(transparent)]
    Coherent(#[from] CoherentError),
    #[error(transparent)]
    Su11(#[from] Su11Error),
}

/// X₁, Y₁, X₂, Y₂ from the literal ladder matrices.
pub fn quadrature_operators(
    j_max: usize,
) -> (LevelOperator, LevelOperator, LevelOperator, LevelOperator) {
    assert!(j_max >= 4, "need at least four levels for the squared quadratures");
    let (kp, km, _) = ladder_matrices(j_max);
    let half = C64::new(0.5, 0.0);
    let half_over_i = C64::new(0.0, -0.5); // 1/(2i)
    let x1 = km.add(&kp).scaled(half);
    let y1 = km.sub(&kp).scaled(half_over_i);
    let kp2 = kp.matmul(&kp);
    let km2 = km.matmul(&km);
    let x2 = km2.add(&kp2).scaled(half);
    let y2 = km2.sub(&kp2).scaled(half_over_i);
    (
        LevelOperator::new(OperatorLabel::X1, x1.entries().clone()),
        LevelOperator::new(OperatorLabel::Y1, y1.entries().clone()),
        LevelOperator::new(OperatorLabel::X2, x2.entries().clone()),
        LevelOperator::new(OperatorLabel::Y2, y2.entries().clone()),
    )
}

fn real_part(z: C64) -> Result<f64, NonclassicalError> {
    if z.im.abs() > REALITY_TOL * z.re.abs().max(1.0) {
        return Err(NonclassicalError::RealityViolation(z.im));
    }
    Ok(z.re)
}

fn squeezing_pair(
    state: &LevelVector,
    x: &LevelOperator,
    y: &LevelOperator,
) -> Result<(f64, f64), NonclassicalError> {
    let comm = x.commutator(y);
    let denom = 0.5 * comm.expectation(state)?.norm();
    if denom < SINGULAR_DENOMINATOR {
        return Err(NonclassicalError::SingularDenominator(denom));
    }
    let mut out = [0.0; 2];
    for (slot, op) in [(0, x), (1, y)] {
        let mean = op.expectation(state)?;
        let second = op.matmul(op).expectation(state)?;
        let variance = real_part(second - mean * mean)?;
        out[slot] = variance / denom - 1.0;
    }
    Ok((out[0], out[1]))
}

/// First-order squeezing parameters (s_X1, s_Y1) of a normalized state.
pub fn squeezing(state: &LevelVector) -> Result<(f64, f64), NonclassicalError> {
    let (x1, y1, _, _) = quadrature_operators(state.j_max());
    squeezing_pair(state, &x1, &y1)
}

/// Amplitude-squared squeezing parameters (S_X2, S_Y2).
pub fn amplitude_squared_squeezing(
    state: &LevelVector,
) -> Result<(f64, f64), NonclassicalError> {
    let (_, _, x2, y2) = quadrature_operators(state.j_max());
    squeezing_pair(state, &x2, &y2)
}

/// Mandel parameter Q of a normalized state; singular (0/0) exactly at the
/// bare level-one state, where the limit is −1.
pub fn mandel_q(state: &LevelVector) -> Result<f64, NonclassicalError> {
    let mut n1 = 0.0; // ⟨K₊K₋⟩
    let mut n2 = 0.0; // ⟨K₊²K₋²⟩
    for level in 1..=state.j_max() {
        let p = state.coeff(level).norm_sqr();
        let j = level as f64;
        n1 += p * j * (j - 1.0);
        n2 += p * j * (j - 1.0) * (j - 1.0) * (j - 2.0);
    }
    if n1 <= SINGULAR_DENOMINATOR {
        return Err(NonclassicalError::SingularExcitation(n1));
    }
    Ok((n2 - n1 * n1) / n1 - 1.0)
}

/// Per-point validity flags of a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MetricFlags {
    /// α = 0: the state is the bare level-one state; Mandel Q is 0/0 there
    /// and every squeezing parameter sits exactly at its vacuum-analog zero.
    pub alpha_zero: bool,
    /// Top-level occupation exceeded [`TRUNCATION_WARN_OCCUPATION`].
    pub truncation_tail: bool,
}

impl MetricFlags {
    pub fn tokens(&self) -> String {
        let mut t = Vec::new();
        if self.alpha_zero {
            t.push("alpha_zero");
        }
        if self.truncation_tail {
            t.push("trunc_tail");
        }
        t.join(";")
    }

    pub fn is_clean(&self) -> bool {
        !self.alpha_zero && !self.truncation_tail
    }
}

/// One row of a metric sweep.
#[derive(Debug, Clone, Copy)]
pub struct MetricPoint {
    pub alpha: f64,
    pub s_x1: f64,
    pub s_y1: f64,
    pub s_x2: f64,
    pub s_y2: f64,
    /// None exactly at α = 0 (see [`MANDEL_Q_LIMIT_AT_ZERO`]).
    pub mandel_q: Option<f64>,
    pub flags: MetricFlags,
}

/// Evaluates all five metrics for each real amplitude, in parallel, with
/// deterministic output ordering. GP amplitudes must satisfy |α| < 1. The
/// sweep never aborts on the singular α = 0 point — it is flagged instead.
/// The environment variable `WELL_LADDER_THREADS` caps the worker count
/// (0 or unset = automatic).
pub fn metric_sweep(
    family: Family,
    alphas: &[f64],
    j_max: usize,
) -> Result<Vec<MetricPoint>, NonclassicalError> {
    if family == Family::GilmorePerelomov {
        if let Some(bad) = alphas.iter().find(|a| a.abs() >= 1.0) {
            return Err(NonclassicalError::GpAmplitude(*bad));
        }
    }
    let (x1, y1, x2, y2) = quadrature_operators(j_max);
    let eval = |&alpha: &f64| -> Result<MetricPoint, NonclassicalError> {
        // The tail tolerance is disabled here: a short truncation must flag
        // the point, not abort the sweep.
        let spec = CoherentSpec {
            family,
            alpha: C64::new(alpha, 0.0),
            j_max,
            tail_tol: f64::INFINITY,
        };
        let state = coherent_state(&spec)?;
        let mut flags = MetricFlags {
            alpha_zero: alpha == 0.0,
            truncation_tail: state.top_level_occupation() > TRUNCATION_WARN_OCCUPATION,
        };
        let (s_x1, s_y1) = squeezing_pair(&state, &x1, &y1)?;
        let (s_x2, s_y2) = squeezing_pair(&state, &x2, &y2)?;
        let mandel = match mandel_q(&state) {
            Ok(q) => Some(q),
            Err(NonclassicalError::SingularExcitation(_)) => {
                flags.alpha_zero = true;
                None
            }
            Err(e) => return Err(e),
        };
        Ok(MetricPoint { alpha, s_x1, s_y1, s_x2, s_y2, mandel_q: mandel, flags })
    };
    run_with_thread_cap(|| alphas.par_iter().map(eval).collect())
}

/// Runs a rayon job inside a pool sized by `WELL_LADDER_THREADS` (0 = auto).
fn run_with_thread_cap<R: Send>(job: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("WELL_LADDER_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    if cap == 0 {
        job()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(cap).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        }
    }
}

/// Uniformly spaced sweep amplitudes, endpoints included.
pub fn sweep_alphas(min: f64, max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 1 && max >= min);
    if steps == 1 {
        return vec![min];
    }
    let h = (max - min) / (steps - 1) as f64;
    (0..steps).map(|i| min + i as f64 * h).collect()
}

/// Default figure sweeps: 161 points on [−2, 2] for BG, on [−0.96, 0.96]
/// for GP.
pub fn default_sweep(family: Family) -> Vec<f64> {
    match family {
        Family::BarutGirardello => sweep_alphas(-2.0, 2.0, 161),
        Family::GilmorePerelomov => sweep_alphas(-0.96, 0.96, 161),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{bg_state, gp_state};

    fn bg(alpha: f64, j_max: usize) -> LevelVector {
        bg_state(&CoherentSpec::bg(C64::new(alpha, 0.0), j_max)).unwrap()
    }

    fn gp(alpha: f64, j_max: usize) -> LevelVector {
        gp_state(&CoherentSpec::gp(C64::new(alpha, 0.0), j_max).with_tail_tol(1e-6)).unwrap()
    }

    #[test]
    fn quadrature_structure() {
        let (x1, _y1, x2, _y2) = quadrature_operators(8);
        let e1 = LevelVector::basis_state(8, 1).unwrap();
        // X₁ has no diagonal
        assert_eq!(x1.expectation(&e1).unwrap(), C64::new(0.0, 0.0));
        // X₂ moves by exactly two levels
        let moved = x2.apply(&LevelVector::basis_state(8, 4).unwrap()).unwrap();
        for level in 1..=8usize {
            if level != 2 && level != 6 {
                assert_eq!(moved.coeff(level), C64::new(0.0, 0.0));
            }
        }
        assert!(moved.coeff(2).norm() > 0.0 && moved.coeff(6).norm() > 0.0);
    }

    #[test]
    fn commutator_x1y1_is_i_k0() {
        let j_max = 10;
        let (x1, y1, _, _) = quadrature_operators(j_max);
        let comm = x1.commutator(&y1);
        for j in 1..=j_max - 2 {
            let ej = LevelVector::basis_state(j_max, j).unwrap();
            let out = comm.apply(&ej).unwrap();
            let expect = C64::new(0.0, j as f64);
            assert!((out.coeff(j) - expect).norm() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn vacuum_analog_is_unsqueezed() {
        // pure level 1: ⟨X₁²⟩ = ½ (from K₋K₊|1⟩ = 2|1⟩), denominator ½ ⇒ s = 0
        let e1 = LevelVector::basis_state(16, 1).unwrap();
        let (sx, sy) = squeezing(&e1).unwrap();
        assert_eq!(sx, 0.0);
        assert_eq!(sy, 0.0);
        let (sx2, sy2) = amplitude_squared_squeezing(&e1).unwrap();
        assert!(sx2.abs() < 1e-14 && sy2.abs() < 1e-14);
        // ⟨X₂⟩ = ⟨Y₂⟩ = 0 on a basis state
        let (_, _, x2, y2) = quadrature_operators(16);
        assert_eq!(x2.expectation(&e1).unwrap().norm(), 0.0);
        assert_eq!(y2.expectation(&e1).unwrap().norm(), 0.0);
    }

    #[test]
    fn bg_squeezes_y1_only() {
        for alpha in [0.25, 0.7, 1.3, 2.0] {
            let v = bg(alpha, 64);
            let (sx, sy) = squeezing(&v).unwrap();
            assert!(sx > 0.0, "alpha={alpha} sx={sx}");
            assert!(sy < 0.0 && sy > -1.0, "alpha={alpha} sy={sy}");
            let (sx2, sy2) = amplitude_squared_squeezing(&v).unwrap();
            assert!(sx2 > 0.0 && sy2 < 0.0, "alpha={alpha}");
        }
    }

    #[test]
    fn gp_squeezes_y1_only() {
        for alpha in [0.2, 0.5, 0.9] {
            let v = gp(alpha, 256);
            let (sx, sy) = squeezing(&v).unwrap();
            assert!(sx > 0.0 && sy < 0.0, "alpha={alpha}");
            let (sx2, sy2) = amplitude_squared_squeezing(&v).unwrap();
            assert!(sx2 > 0.0 && sy2 < 0.0, "alpha={alpha}");
        }
    }

    #[test]
    fn mandel_closed_forms() {
        // GP: ⟨K₊K₋⟩ = 2x/(1−x)² and Q = (6x²+4x)/(1−x)² − 1
        let v = gp(0.5_f64.sqrt(), 256); // x = 1/2
        let mut n1 = 0.0;
        for level in 1..=256usize {
            let j = level as f64;
            n1 += v.coeff(level).norm_sqr() * j * (j - 1.0);
        }
        assert!((n1 - 4.0).abs() < 1e-10, "n1={n1}");
        for x in [0.1, 0.25, 0.5, 0.81] {
            let v = gp(x.sqrt(), 512);
            let q = mandel_q(&v).unwrap();
            let oracle = (6.0 * x * x + 4.0 * x) / ((1.0 - x) * (1.0 - x)) - 1.0;
            assert!((q - oracle).abs() < 1e-8, "x={x}: {q} vs {oracle}");
        }
    }

    #[test]
    fn mandel_limits_and_singularity() {
        // BG: Q → −1 as α → 0 (the α²-order oracle is Q ≈ x/6 − 1)
        for alpha in [0.1, 0.05, 0.02] {
            let q = mandel_q(&bg(alpha, 32)).unwrap();
            let x = alpha * alpha;
            assert!((q - (x / 6.0 - 1.0)).abs() < x * x, "alpha={alpha} q={q}");
        }
        let e1 = LevelVector::basis_state(16, 1).unwrap();
        assert!(matches!(
            mandel_q(&e1),
            Err(NonclassicalError::SingularExcitation(_))
        ));
        assert_eq!(MANDEL_Q_LIMIT_AT_ZERO, -1.0);
    }

    #[test]
    fn bg_mandel_negative_gp_changes_sign() {
        for alpha in [0.25, 1.0, 2.0] {
            assert!(mandel_q(&bg(alpha, 64)).unwrap() < 0.0);
        }
        assert!(mandel_q(&gp(0.2, 256)).unwrap() < 0.0);
        assert!(mandel_q(&gp(0.7, 256)).unwrap() > 0.0);
    }

    #[test]
    fn sweep_structure_and_flags() {
        let alphas = sweep_alphas(-2.0, 2.0, 41);
        let rows = metric_sweep(Family::BarutGirardello, &alphas, 64).unwrap();
        assert_eq!(rows.len(), 41);
        let zero = rows.iter().find(|r| r.alpha == 0.0).unwrap();
        assert!(zero.flags.alpha_zero);
        assert!(zero.mandel_q.is_none());
        for r in &rows {
            assert_eq!(r.flags.alpha_zero, r.alpha == 0.0);
            if !r.flags.alpha_zero {
                assert!(r.s_y1 < 0.0 && r.s_x1 > 0.0, "alpha={}", r.alpha);
                assert!(r.mandel_q.unwrap() < 0.0);
            }
        }
        // deterministic ordering
        let again = metric_sweep(Family::BarutGirardello, &alphas, 64).unwrap();
        for (a, b) in rows.iter().zip(&again) {
            assert_eq!(a.alpha, b.alpha);
            assert_eq!(a.s_x1, b.s_x1);
        }
    }

    #[test]
    fn sweep_is_even_in_alpha() {
        let alphas = sweep_alphas(-0.9, 0.9, 19);
        let rows = metric_sweep(Family::GilmorePerelomov, &alphas, 256).unwrap();
        for i in 0..rows.len() {
            let j = rows.len() - 1 - i;
            assert!((rows[i].s_x1 - rows[j].s_x1).abs() < 1e-12);
            assert!((rows[i].s_y1 - rows[j].s_y1).abs() < 1e-12);
            assert!((rows[i].s_x2 - rows[j].s_x2).abs() < 1e-12);
            assert!((rows[i].s_y2 - rows[j].s_y2).abs() < 1e-12);
            match (rows[i].mandel_q, rows[j].mandel_q) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12),
                (None, None) => {}
                _ => panic!("asymmetric singularity"),
            }
        }
    }

    #[test]
    fn sweep_rejects_gp_outside_disk() {
        let err = metric_sweep(Family::GilmorePerelomov, &[0.5, 1.0], 64);
        assert!(matches!(err, Err(NonclassicalError::GpAmplitude(_))));
    }

    #[test]
    fn empty_sweep_is_empty() {
        let rows = metric_sweep(Family::BarutGirardello, &[], 64).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn truncation_flag_fires_when_short() {
        let rows = metric_sweep(Family::GilmorePerelomov, &[0.96], 32).unwrap();
        assert!(rows[0].flags.truncation_tail);
        let rows = metric_sweep(Family::GilmorePerelomov, &[0.5], 256).unwrap();
        assert!(!rows[0].flags.truncation_tail);
    }

    #[test]
    fn truncation_stability_on_doubling() {
        // BG at J = 64 → 128 over |α| ≤ 2
        for alpha in [0.5, 1.25, 2.0] {
            let a = metric_sweep(Family::BarutGirardello, &[alpha], 64).unwrap();
            let b = metric_sweep(Family::BarutGirardello, &[alpha], 128).unwrap();
            assert!((a[0].s_x1 - b[0].s_x1).abs() < 1e-8);
            assert!((a[0].mandel_q.unwrap() - b[0].mandel_q.unwrap()).abs() < 1e-8);
        }
        // GP needs J = 256 → 512 for the same margin at |α| ≤ 0.9
        for alpha in [0.5, 0.9] {
            let a = metric_sweep(Family::GilmorePerelomov, &[alpha], 256).unwrap();
            let b = metric_sweep(Family::GilmorePerelomov, &[alpha], 512).unwrap();
            assert!((a[0].s_x1 - b[0].s_x1).abs() < 1e-8, "alpha={alpha}");
            assert!(
                (a[0].mandel_q.unwrap() - b[0].mandel_q.unwrap()).abs() < 1e-8,
                "alpha={alpha}"
            );
        }
    }

    #[test]
    fn reality_guard_rejects_complex_amplitudes_gracefully() {
        // complex-α BG states have genuinely complex moments; the guard trips
        let v = bg_state(&CoherentSpec::bg(C64::new(0.8, 0.8), 64)).unwrap();
        match squeezing(&v) {
            Ok(_) | Err(NonclassicalError::RealityViolation(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
