//! Gilmore-Perelomov state generation through a driven Jaynes-Cummings model.
//!
//! A two-level atom couples to the well mode through the su(1,1) ladder
//! operators and to an external classical field of phase φ:
//!
//! H = λ(σ₋e^{iφ} + σ₊e^{−iφ}) + Λ(K₊σ₋ + K₋σ₊).
//!
//! In the strong-classical-drive regime the evolution factorizes as
//! U(t) = R†·T†(t)·U_eff·T(0)·R with R = exp[(π/4)(σ₊−σ₋)]·exp[(iφ/2)σ_z],
//! T(t) = exp(iλσ_z t) and U_eff = exp[−(iΛt/2)(K₊e^{−iφ} + K₋e^{iφ})σ_z].
//! U_eff is an su(1,1) displacement with ξ = −(iΛt/2)e^{−iφ}, so the field
//! branch conditioned on an atomic measurement collapses onto the
//! Gilmore-Perelomov state of amplitude α_eff = −i·e^{−iφ}·tanh(Λt/2); the
//! raw shorthand −(iΛt/2)e^{−iφ} leaves the unit disk for Λt > 2 and is
//! reported alongside, never used as a state amplitude.
//!
//! Two caveats of the literal K± matrices, surfaced rather than patched:
//!
//! - the generator of U_eff is not anti-Hermitian (K₊ ≠ K₋†), so neither
//!   propagator is exactly norm-preserving. The factored route contracts the
//!   initial state by exactly √(1−|α_eff|²); both defects are reported per
//!   run and conditional states are renormalized.
//! - the factorization drops atomic terms oscillating at twice the classical
//!   Rabi frequency; it converges to the exact propagator as λ/Λ grows.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::coherent::{gp_state, CoherentError, CoherentSpec};
use crate::linalg::expm;
use crate::su11::{ladder_matrices, LevelVector, Su11Error};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JcError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("truncation tail: top field level holds {occupation:e} > {limit:e}")]
    TruncationTail { occupation: f64, limit: f64 },
    #[error("atomic outcome has probability {0:e}; cannot condition on it")]
    ZeroProbabilityOutcome(f64),
    #[error("state sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Coherent(#[from] CoherentError),
    #[error(transparent)]
    Su11(#[from] Su11Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagator {
    Factored,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomOutcome {
    Excited,
    Ground,
}

/// Couplings, phase, time and truncation of a run. `lambda` is the classical
/// drive, `big_lambda` the quantized su(1,1) coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcConfig {
    pub lambda: f64,
    pub big_lambda: f64,
    pub phi: f64,
    pub t: f64,
    pub j_max: usize,
    pub propagator: Propagator,
}

const FIELD_TAIL_LIMIT: f64 = 1e-8;
const CONFIG_TAIL_LIMIT: f64 = 1e-10;

impl JcConfig {
    pub fn validate(&self) -> Result<(), JcError> {
        if !(self.big_lambda > 0.0) {
            return Err(JcError::Config(format!(
                "quantized coupling must be positive, got {}",
                self.big_lambda
            )));
        }
        if self.j_max < 2 {
            return Err(JcError::Config("need at least two field levels".into()));
        }
        if !(self.t >= 0.0 && self.t.is_finite() && self.phi.is_finite() && self.lambda.is_finite())
        {
            return Err(JcError::Config("couplings, phase and time must be finite".into()));
        }
        let x = self.alpha_eff().norm_sqr();
        let tail = (1.0 - x) * x.powi(self.j_max as i32 - 1);
        if tail > CONFIG_TAIL_LIMIT {
            return Err(JcError::Config(format!(
                "geometric tail {tail:e} exceeds {CONFIG_TAIL_LIMIT:e}; raise j_max"
            )));
        }
        Ok(())
    }

    /// Classical-to-quantized coupling ratio λ/Λ; the factored propagator is
    /// accurate when this is large.
    pub fn regime_ratio(&self) -> f64 {
        self.lambda / self.big_lambda
    }

    /// α_eff = −i·e^{−iφ}·tanh(Λt/2), always inside the unit disk.
    pub fn alpha_eff(&self) -> C64 {
        let mag = (0.5 * self.big_lambda * self.t).tanh();
        -C64::i() * (-C64::i() * self.phi).exp() * mag
    }

    /// The raw displacement shorthand −(iΛt/2)e^{−iφ} (reported only).
    pub fn alpha_raw(&self) -> C64 {
        -C64::i() * (-C64::i() * self.phi).exp() * (0.5 * self.big_lambda * self.t)
    }
}

/// Atom ⊗ field amplitud]: one field block per atomic level, basis ordered
/// (e ⊗ levels, g ⊗ levels), σ_z|e⟩ = +|e⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomFieldState {
    excited: Array1<C64>,
    ground: Array1<C64>,
}

impl AtomFieldState {
    pub fn new(excited: Vec<C64>, ground: Vec<C64>) -> Result<Self, JcError> {
        if excited.len() != ground.len() || excited.is_empty() {
            return Err(JcError::SizeMismatch(excited.len(), ground.len()));
        }
        Ok(Self { excited: Array1::from_vec(excited), ground: Array1::from_vec(ground) })
    }

    /// (|e⟩ + |g⟩)/√2 ⊗ |level 1⟩, the preparation the generation scheme
    /// starts from.
    pub fn initial_superposition(j_max: usize) -> Self {
        let mut e = Array1::zeros(j_max);
        let mut g = Array1::zeros(j_max);
        let w = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        e[0] = w;
        g[0] = w;
        Self { excited: e, ground: g }
    }

    pub fn j_max(&self) -> usize {
        self.excited.len()
    }

    pub fn excited_block(&self) -> &Array1<C64> {
        &self.excited
    }

    pub fn ground_block(&self) -> &Array1<C64> {
        &self.ground
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.excited.iter().chain(self.ground.iter()).map(|v| v.norm_sqr()).sum();
        s.sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero state");
        Self { excited: self.excited.mapv(|v| v / n), ground: self.ground.mapv(|v| v / n) }
    }

    pub fn inner(&self, other: &AtomFieldState) -> Result<C64, JcError> {
        if self.j_max() != other.j_max() {
            return Err(JcError::SizeMismatch(self.j_max(), other.j_max()));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in self.excited.iter().zip(other.excited.iter()) {
            acc += a.conj() * b;
        }
        for (a, b) in self.ground.iter().zip(other.ground.iter()) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    /// Occupation fraction of the top field level over both atomic branches.
    pub fn top_level_occupation(&self) -> f64 {
        let j = self.j_max() - 1;
        let total = self.norm();
        if total == 0.0 {
            return 0.0;
        }
        (self.excited[j].norm_sqr() + self.ground[j].norm_sqr()) / (total * total)
    }

    fn to_flat(&self) -> Array1<C64> {
        let j = self.j_max();
        let mut flat = Array1::zeros(2 * j);
        for i in 0..j {
            flat[i] = self.excited[i];
            flat[j + i] = self.ground[i];
        }
        flat
    }

    fn from_flat(flat: &Array1<C64>) -> Self {
        let j = flat.len() / 2;
        Self {
            excited: flat.slice(ndarray::s![0..j]).to_owned(),
            ground: flat.slice(ndarray::s![j..2 * j]).to_owned(),
        }
    }

    /// Left-multiplies by a 2×2 atomic matrix ⊗ identity on the field.
    fn apply_atomic(&self, m: [[C64; 2]; 2]) -> Self {
        let e = self.excited.mapv(|v| v * m[0][0]) + &self.ground.mapv(|v| v * m[0][1]);
        let g = self.excited.mapv(|v| v * m[1][0]) + &self.ground.mapv(|v| v * m[1][1]);
        Self { excited: e, ground: g }
    }
}

/// Dense 2J×2J Hamiltonian, blocks ordered (e, g):
/// the classical drive fills the off-diagonal blocks with λe^{∓iφ}·I and the
/// quantized coupling puts K₋ in the (e,g) block and K₊ in the (g,e) block.
pub fn build_jc_hamiltonian(cfg: &JcConfig) -> Array2<C64> {
    let j = cfg.j_max;
    let (kp, km, _) = ladder_matrices(j);
    let mut h = Array2::<C64>::zeros((2 * j, 2 * j));
    let phase = (-C64::i() * cfg.phi).exp();
    for r in 0..j {
        // λσ₊e^{−iφ}: g → e
        h[[r, j + r]] += cfg.lambda * phase;
        // λσ₋e^{iφ}: e → g
        h[[j + r, r]] += cfg.lambda * phase.conj();
        for c in 0..j {
            // ΛK₋σ₊: (e,g) block; ΛK₊σ₋: (g,e) block
            h[[r, j + c]] += cfg.big_lambda * km.entries()[[r, c]];
            h[[j + r, c]] += cfg.big_lambda * kp.entries()[[r, c]];
        }
    }
    h
}

fn check_tail(state: &AtomFieldState) -> Result<(), JcError> {
    let occupation = state.top_level_occupation();
    if occupation > FIELD_TAIL_LIMIT {
        return Err(JcError::TruncationTail { occupation, limit: FIELD_TAIL_LIMIT });
    }
    Ok(())
}

fn rotation_r(phi: f64) -> [[C64; 2]; 2] {
    let c = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let ep = (C64::i() * (phi / 2.0)).exp();
    let em = (-C64::i() * (phi / 2.0)).exp();
    [[c * ep, c * em], [-c * ep, c * em]]
}

fn rotation_r_dagger(phi: f64) -> [[C64; 2]; 2] {
    let r = rotation_r(phi);
    [
        [r[0][0].conj(), r[1][0].conj()],
        [r[0][1].conj(), r[1][1].conj()],
    ]
}

/// U(t) = R†·T†(t)·U_eff·T(0)·R with U_eff exponentiated over the full
/// 2J-dimensional generator by scaling and squaring.
pub fn factored_propagator(
    cfg: &JcConfig,
    state: &AtomFieldState,
) -> Result<AtomFieldState, JcError> {
    cfg.validate()?;
    if state.j_max() != cfg.j_max {
        return Err(JcError::SizeMismatch(state.j_max(), cfg.j_max));
    }
    let j = cfg.j_max;
    let (kp, km, _) = ladder_matrices(j);
    let phase = (-C64::i() * cfg.phi).exp();
    // M = K₊e^{−iφ} + K₋e^{iφ}
    let m = kp.entries().mapv(|v| v * phase) + &km.entries().mapv(|v| v * phase.conj());
    let pref = -C64::i() * (0.5 * cfg.big_lambda * cfg.t);
    let mut gen = Array2::<C64>::zeros((2 * j, 2 * j));
    for r in 0..j {
        for c in 0..j {
            gen[[r, c]] = pref * m[[r, c]]; // σ_z: +1 on the e block
            gen[[j + r, j + c]] = -pref * m[[r, c]];
        }
    }
    let u_eff = expm(&gen);

    let after_r = state.apply_atomic(rotation_r(cfg.phi)); // T(0) = I
    let flat = after_r.to_flat();
    let after_u = AtomFieldState::from_flat(&u_eff.dot(&flat));
    let t_phase = (C64::i() * (cfg.lambda * cfg.t)).exp();
    let zero = C64::new(0.0, 0.0);
    // T†(t) = diag(e^{−iλt}, e^{iλt})
    let after_t = after_u.apply_atomic([[t_phase.conj(), zero], [zero, t_phase]]);
    let out = after_t.apply_atomic(rotation_r_dagger(cfg.phi));
    check_tail(&out)?;
    Ok(out)
}

/// exp(−iHt) applied densely; valid at any coupling ratio.
pub fn exact_propagator(
    cfg: &JcConfig,
    state: &AtomFieldState,
) -> Result<AtomFieldState, JcError> {
    cfg.validate()?;
    if state.j_max() != cfg.j_max {
        return Err(JcError::SizeMismatch(state.j_max(), cfg.j_max));
    }
    let h = build_jc_hamiltonian(cfg);
    let gen = h.mapv(|v| -C64::i() * cfg.t * v);
    let u = expm(&gen);
    let out = AtomFieldState::from_flat(&u.dot(&state.to_flat()));
    check_tail(&out)?;
    Ok(out)
}

/// Runs the propagator selected by the configuration.
pub fn propagate(cfg: &JcConfig, state: &AtomFieldState) -> Result<AtomFieldState, JcError> {
    match cfg.propagator {
        Propagator::Factored => factored_propagator(cfg, state),
        Propagator::Exact => exact_propagator(cfg, state),
    }
}

/// The closed-form final state for the standard preparation: a superposition
/// of |±α_eff⟩ Gilmore-Perelomov states over both atomic branches,
///
/// (1/√2)[e^{−iφ/2}e^{−iλt}cos(φ/2)|α⟩ + i·e^{−iφ/2}e^{iλt}sin(φ/2)|−α⟩]|e⟩
/// + (1/√2)[e^{iφ/2}e^{−iλt}cos(φ/2)|α⟩ − i·e^{iφ/2}e^{iλt}sin(φ/2)|−α⟩]|g⟩.
pub fn analytic_final_state(cfg: &JcConfig) -> Result<AtomFieldState, JcError> {
    cfg.validate()?;
    let alpha = cfg.alpha_eff();
    let gp_p = gp_state(&CoherentSpec::gp(alpha, cfg.j_max).with_tail_tol(CONFIG_TAIL_LIMIT))?;
    let gp_m = gp_state(&CoherentSpec::gp(-alpha, cfg.j_max).with_tail_tol(CONFIG_TAIL_LIMIT))?;
    let half = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let cosw = C64::new((0.5 * cfg.phi).cos(), 0.0);
    let sinw = C64::new((0.5 * cfg.phi).sin(), 0.0);
    let e_lam_m = (-C64::i() * (cfg.lambda * cfg.t)).exp();
    let e_lam_p = (C64::i() * (cfg.lambda * cfg.t)).exp();
    let e_phi_m = (-C64::i() * (0.5 * cfg.phi)).exp();
    let e_phi_p = (C64::i() * (0.5 * cfg.phi)).exp();
    let i = C64::i();
    let mut excited = vec![C64::new(0.0, 0.0); cfg.j_max];
    let mut ground = vec![C64::new(0.0, 0.0); cfg.j_max];
    for level in 1..=cfg.j_max {
        let p = gp_p.coeff(level);
        let m = gp_m.coeff(level);
        excited[level - 1] =
            half * (e_phi_m * e_lam_m * cosw * p + i * e_phi_m * e_lam_p * sinw * m);
        ground[level - 1] =
            half * (e_phi_p * e_lam_m * cosw * p - i * e_phi_p * e_lam_p * sinw * m);
    }
    AtomFieldState::new(excited, ground)
}

/// Field state conditioned on detecting the atom in one level.
#[derive(Debug, Clone)]
pub struct ConditionalState {
    pub field: LevelVector,
    /// Outcome probability, from the renormalized total state.
    pub probability: f64,
    /// N± = 1/√probability; equals √2 when both outcomes are equally likely.
    pub normalization_constant: f64,
}

/// Projects onto an atomic outcome and renormalizes the field.
pub fn conditional_field_state(
    state: &AtomFieldState,
    outcome: AtomOutcome,
) -> Result<ConditionalState, JcError> {
    let block = match outcome {
        AtomOutcome::Excited => &state.excited,
        AtomOutcome::Ground => &state.ground,
    };
    let total = state.norm();
    let block_norm = block.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if block_norm <= 1e-14 || total <= 0.0 {
        return Err(JcError::ZeroProbabilityOutcome(block_norm * block_norm));
    }
    let probability = (block_norm / total).powi(2);
    let field = LevelVector::from_coeffs(block.iter().map(|v| v / block_norm).collect());
    Ok(ConditionalState {
        field,
        probability,
        normalization_constant: 1.0 / probability.sqrt(),
    })
}

/// |⟨a|b⟩|² over the squared norms, so unnormalized inputs are safe.
pub fn fidelity_levels(a: &LevelVector, b: &LevelVector) -> Result<f64, JcError> {
    if a.j_max() != b.j_max() {
        return Err(JcError::SizeMismatch(a.j_max(), b.j_max()));
    }
    let ip = a.inner(b)?;
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(JcError::ZeroProbabilityOutcome(0.0));
    }
    Ok((ip.norm() / (na * nb)).powi(2))
}

/// Atom-field fidelity |⟨a|b⟩|² over the squared norms.
pub fn fidelity_states(a: &AtomFieldState, b: &AtomFieldState) -> Result<f64, JcError> {
    let ip = a.inner(b)?;
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(JcError::ZeroProbabilityOutcome(0.0));
    }
    Ok((ip.norm() / (na * nb)).powi(2))
}

/// Everything the `jc` front end reports for one configuration.
#[derive(Debug, Clone)]
pub struct JcScenarioReport {
    pub config: JcConfig,
    pub alpha_eff: C64,
    pub alpha_raw: C64,
    pub regime_ratio: f64,
    pub norm_defect_factored: f64,
    pub norm_defect_exact: f64,
    pub probability_excited: f64,
    pub probability_ground: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub fidelity_excited_vs_gp: f64,
    pub fidelity_ground_vs_gp: f64,
    pub fidelity_factored_vs_exact: f64,
    pub fidelity_factored_vs_analytic: f64,
}

/// Propagates the standard preparation with both propagators and collects
/// the comparison figures. Probabilities and conditional fidelities come
/// from the propagator selected in the configuration; the conditional
/// reference is GP(±α_eff) per outcome (the + branch for the excited atom at
/// φ = 2π, both branches coinciding there).
pub fn run_scenario(cfg: &JcConfig) -> Result<JcScenarioReport, JcError> {
    cfg.validate()?;
    let initial = AtomFieldState::initial_superposition(cfg.j_max);
    let factored = factored_propagator(cfg, &initial)?;
    let exact = exact_propagator(cfg, &initial)?;
    let analytic = analytic_final_state(cfg)?;
    let selected = match cfg.propagator {
        Propagator::Factored => &factored,
        Propagator::Exact => &exact,
    };
    let cond_e = conditional_field_state(selected, AtomOutcome::Excited)?;
    let cond_g = conditional_field_state(selected, AtomOutcome::Ground)?;
    let alpha = cfg.alpha_eff();
    let gp_ref = gp_state(&CoherentSpec::gp(alpha, cfg.j_max).with_tail_tol(CONFIG_TAIL_LIMIT))?;
    Ok(JcScenarioReport {
        config: *cfg,
        alpha_eff: alpha,
        alpha_raw: cfg.alpha_raw(),
        regime_ratio: cfg.regime_ratio(),
        norm_defect_factored: (1.0 - factored.norm()).abs(),
        norm_defect_exact: (1.0 - exact.norm()).abs(),
        probability_excited: cond_e.probability,
        probability_ground: cond_g.probability,
        n_plus: cond_e.normalization_constant,
        n_minus: cond_g.normalization_constant,
        fidelity_excited_vs_gp: fidelity_levels(&cond_e.field, &gp_ref)?,
        fidelity_ground_vs_gp: fidelity_levels(&cond_g.field, &gp_ref)?,
        fidelity_factored_vs_exact: fidelity_states(&factored, &exact)?,
        fidelity_factored_vs_analytic: fidelity_states(&factored, &analytic)?,
    })
}
