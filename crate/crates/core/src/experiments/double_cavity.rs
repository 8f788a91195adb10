//! Two identical cavities at `t_A < t_B`: an electron either crosses
//! both, zigzags back through time (`r' r`), or leaves a pair behind.

use std::collections::BTreeMap;

use crate::amplitude::{compose_path, normalize_report, DiagramTerm, ExperimentReport, PhaseFactor, VacuumSpec};
use crate::cavity::CavityCoeffs;
use crate::error::Result;

use super::Timing;

pub const REFLECTED: &str = "reflected";
pub const TRANSMITTED: &str = "transmitted";
pub const ELECTRON_PAIR: &str = "electron+pair";

/// Outcome probabilities for two cavities of reflectivity `R`.
pub fn double_cavity(reflectivity: f64) -> Result<ExperimentReport> {
    double_cavity_with(&CavityCoeffs::from_reflectivity(reflectivity)?, &Timing::default())
}

pub fn double_cavity_with(c: &CavityCoeffs, timing: &Timing) -> Result<ExperimentReport> {
    let final_phase = PhaseFactor::new(c.e, timing.t_final);
    let zigzag = PhaseFactor::new(2.0 * c.e, timing.t_b - timing.t_a);

    let reflected = DiagramTerm::new([c.r_tot_prime, c.r_tot])
        .with_phase(final_phase)
        .with_phase(zigzag);
    let transmitted = DiagramTerm::new([c.t_tot]).with_phase(final_phase);
    // Both diagrams end with an electron in the outgoing mode and a pair.
    let zigzag_then_pair = DiagramTerm::new([c.r_tot, c.r_tot_prime, c.r_tot]).with_phase(final_phase);
    let cross_then_pair = DiagramTerm::new([c.r_tot, c.t_tot, c.t_tot_prime])
        .with_phase(final_phase)
        .exchanged();

    let raw = BTreeMap::from([
        (REFLECTED.to_string(), compose_path(&[reflected]).norm_sqr()),
        (TRANSMITTED.to_string(), compose_path(&[transmitted]).norm_sqr()),
        (
            ELECTRON_PAIR.to_string(),
            compose_path(&[zigzag_then_pair, cross_then_pair]).norm_sqr(),
        ),
    ]);
    normalize_report(raw, &VacuumSpec::uniform(c.reflectivity(), 2)?)
}
