//! The experiments built from temporal cavities and beam splitters.
//!
//! Shipped probabilities always come from diagram sums through
//! [`crate::amplitude`]; closed forms appear only in tests.

pub mod ctc;
pub mod double_cavity;
pub mod game;
pub mod gyni;
pub mod interferometer;
pub mod switch;

use serde::{Deserialize, Serialize};

use crate::cavity::CavityCoeffs;

/// `R_0 = (1 + sqrt 5)/2`, the reflectivity with unit interferometer visibility.
pub const GOLDEN_REFLECTIVITY: f64 = 1.618_033_988_749_895;

/// `R_1 = 1 + sqrt 2`, where the GYNI gain reaches one half.
pub const GYNI_THRESHOLD: f64 = 1.0 + std::f64::consts::SQRT_2;

/// Times and phase-shifter setting of a two-cavity arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    /// Switch-on time of the first cavity.
    pub t_a: f64,
    /// Switch-on time of the second cavity.
    pub t_b: f64,
    /// Detection time.
    pub t_final: f64,
}

impl Default for Timing {
    fn default() -> Self {
        Timing {
            t_a: 0.0,
            t_b: 1.0,
            t_final: 3.0,
        }
    }
}

impl Timing {
    /// `xi = chi - 2E(t_B - t_A)` for a phase shifter `chi`.
    pub fn xi(&self, chi: f64, energy: f64) -> f64 {
        chi - 2.0 * energy * (self.t_b - self.t_a)
    }
}

/// `theta = xi + 2 arg r - arg t`.
pub fn theta_from_xi(xi: f64, cavity: &CavityCoeffs) -> f64 {
    xi + 2.0 * cavity.r_tot.arg() - cavity.t_tot.arg()
}

/// `xi = theta - 2 arg r + arg t`.
pub fn xi_from_theta(theta: f64, cavity: &CavityCoeffs) -> f64 {
    theta - 2.0 * cavity.r_tot.arg() + cavity.t_tot.arg()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let r0 = GOLDEN_REFLECTIVITY;
        assert!((r0 * r0 - r0 - 1.0).abs() < 1e-15);
        assert!((GYNI_THRESHOLD - 2.414_213_562_373_095).abs() < 1e-15);
    }

    #[test]
    fn phase_conversions_round_trip() {
        let c = CavityCoeffs::from_reflectivity(2.0).unwrap();
        let xi = Timing::default().xi(0.4, 1.3);
        assert!((xi - (0.4 - 2.6)).abs() < 1e-15);
        assert!((xi_from_theta(theta_from_xi(xi, &c), &c) - xi).abs() < 1e-15);
    }
}
