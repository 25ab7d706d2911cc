//! Physical constants of the well.

use std::f64::consts::PI;

/// ħ, particle mass and well width. Defaults are ħ = m = 1, L = π, so the
/// rescaled coordinate y = πx/L coincides with x and E_j = j²/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellParams {
    pub hbar: f64,
    pub mass: f64,
    pub width: f64,
}

impl Default for WellParams {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, width: PI }
    }
}

impl WellParams {
    pub fn new(hbar: f64, mass: f64, width: f64) -> Self {
        assert!(
            hbar > 0.0 && mass > 0.0 && width > 0.0,
            "well parameters must be positive"
        );
        Self { hbar, mass, width }
    }

    /// π²ħ²/(2mL²), the energy quantum multiplying the level-space
    /// Hamiltonian forms.
    pub fn energy_scale(&self) -> f64 {
        let k = PI * self.hbar / self.width;
        k * k / (2.0 * self.mass)
    }

    /// E_j = j²π²ħ²/(2mL²).
    pub fn energy(&self, level: usize) -> f64 {
        let j = level as f64;
        j * j * self.energy_scale()
    }

    /// c_j = jπħ/L, the cotangent amplitude of the j-th superpotential.
    pub fn momentum_coefficient(&self, level: usize) -> f64 {
        level as f64 * PI * self.hbar / self.width
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_units_give_half_integer_squares() {
        let p = WellParams::default();
        assert_eq!(p.energy(1), 0.5);
        assert_eq!(p.energy(3), 4.5);
        assert_eq!(p.momentum_coefficient(2), 2.0);
    }

    #[test]
    fn energy_scales_with_width() {
        let p = WellParams::new(1.0, 1.0, 2.0 * PI);
        assert!((p.energy(1) - 0.125).abs() < 1e-15);
    }
}
