//! Retrocausal interferometer: a beam splitter, two cavities and three
//! detectors. `D1` sees the zigzag path interfere with direct
//! transmission; `D3` sees the other beam-splitter port.

use std::collections::BTreeMap;

use crate::amplitude::{
    cis, compose_path, normalize_report, DiagramTerm, ExperimentReport, VacuumSpec, BS_REFLECT, BS_TRANSMIT,
};
use crate::cavity::CavityCoeffs;
use crate::error::{ensure_finite, Result};

use super::xi_from_theta;

pub const D1_ONLY: &str = "D1_noD2D3";
pub const D1_D2_D3: &str = "D1_D2_D3";
pub const D3_ONLY: &str = "D3_noD1D2";

/// Detection probabilities at offset phase `theta`.
pub fn interferometer(c: &CavityCoeffs, theta: f64) -> Result<ExperimentReport> {
    ensure_finite("theta", theta)?;
    let xi = cis(xi_from_theta(theta, c));
    let (r, t, rp, tp) = (c.r_tot, c.t_tot, c.r_tot_prime, c.t_tot_prime);

    let zigzag = DiagramTerm::new([BS_REFLECT, rp, r, xi]);
    let direct = DiagramTerm::new([BS_TRANSMIT, t]);
    let other_port = DiagramTerm::new([BS_REFLECT, t]);

    let zigzag_pair = DiagramTerm::new([BS_REFLECT, rp, r, rp, xi]);
    let direct_pair = DiagramTerm::new([BS_TRANSMIT, t, rp]);
    let crossed_pair = DiagramTerm::new([BS_REFLECT, t, tp, rp, xi]).exchanged();

    let raw = BTreeMap::from([
        (D1_ONLY.to_string(), compose_path(&[zigzag, direct]).norm_sqr()),
        (
            D1_D2_D3.to_string(),
            compose_path(&[zigzag_pair, direct_pair, crossed_pair]).norm_sqr(),
        ),
        (D3_ONLY.to_string(), compose_path(&[other_port]).norm_sqr()),
    ]);
    normalize_report(raw, &VacuumSpec::uniform(c.reflectivity(), 2)?)
}

/// `V = 2 R sqrt(T) / (T + R^2)` with `T = 1 + R`.
pub fn visibility(reflectivity: f64) -> f64 {
    let t = 1.0 + reflectivity;
    2.0 * reflectivity * t.sqrt() / (t + reflectivity * reflectivity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::GOLDEN_REFLECTIVITY;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn unit_visibility_at_golden_reflectivity() {
        assert!((visibility(GOLDEN_REFLECTIVITY) - 1.0).abs() < 1e-15);
        for r in [0.0, 0.5, 1.0, 3.0, 100.0] {
            assert!(visibility(r) < 1.0);
        }
    }

    #[test]
    fn dark_port_at_minus_half_pi() {
        let c = CavityCoeffs::from_reflectivity(GOLDEN_REFLECTIVITY).unwrap();
        let rep = interferometer(&c, -FRAC_PI_2).unwrap();
        assert!(rep.get(D1_ONLY) < 1e-30);
        assert!((rep.sum_check - 1.0).abs() < 1e-12);
    }
}
