//! Shared inputs for the benchmarks.

use zigzag_core::CavityParams;

/// `(eA/m, m tau, k/m)` triples covering the low-field resonance, the
/// default pulse and the strong-field plateau.
pub const CAVITY_POINTS: [(f64, f64, f64); 3] = [(3.5, 1.5, 3.2), (10.0, 1.5, 10.0), (46.45, 1.5, 46.43)];

pub fn cavity_points() -> Vec<CavityParams> {
    CAVITY_POINTS
        .iter()
        .map(|&(ea, tau, k)| CavityParams::new(ea, tau, k).expect("valid benchmark point"))
        .collect()
}
