//! Quantum switch with fixed temporal order: the electron meets the
//! gates `A` then `B` on the forward path, while the zigzag path crosses
//! them backward in time as a negative-energy wave, in the order `B`, `A`
//! with inverted unitaries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::amplitude::{
    cis, compose_path, normalize_report, partial_report, DiagramTerm, ExperimentReport, VacuumSpec, BS_REFLECT,
    BS_TRANSMIT,
};
use crate::cavity::CavityCoeffs;
use crate::error::{ensure_finite, Error, Result};
use crate::linalg::C64;
use crate::spinor::{plane_wave, spin_matrix_element, EnergySign, Spin, Spinor2, UnitaryMatrix2};

pub const D2_ONLY: &str = "D2_noD1D3";
pub const D3_ONLY: &str = "D3_noD1D2";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SwitchSpec {
    pub ua: UnitaryMatrix2,
    pub ub: UnitaryMatrix2,
    pub psi0: Spinor2,
    pub xi: f64,
    pub cavity: CavityCoeffs,
    /// Magnitude of the momentum along the beam axis; must be non-zero
    /// for the negative-energy basis.
    pub momentum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SwitchReport {
    /// Electron detections; a subset of outcomes, not audited for completeness.
    pub detections: ExperimentReport,
    /// Vacuum-sector outcomes of the four pair channels; complete.
    pub vacuum_channels: ExperimentReport,
    pub c_forward: [C64; 2],
    pub c_backward: [C64; 2],
}

fn coefficients(spec: &SwitchSpec) -> Result<([C64; 2], [C64; 2])> {
    let p = spec.momentum;
    ensure_finite("momentum", p)?;
    if p == 0.0 {
        return Err(Error::DegenerateRestMode);
    }
    let chi = spec.psi0.normalized()?;
    let forward = plane_wave([0.0, 0.0, -p], EnergySign::Positive, chi, 1.0, 1.0)?;
    let backward = plane_wave([0.0, 0.0, p], EnergySign::Negative, chi, 1.0, 1.0)?;
    let ab = spec.ua.compose(&spec.ub);
    let ba = spec.ub.adjoint().compose(&spec.ua.adjoint());
    let mut cf = [C64::default(); 2];
    let mut cb = [C64::default(); 2];
    for (i, s) in Spin::ALL.into_iter().enumerate() {
        cf[i] = spin_matrix_element(s, &ab, &forward)?;
        cb[i] = spin_matrix_element(s, &ba, &backward)?;
    }
    Ok((cf, cb))
}

/// Weights of the vacuum-sector outcomes, relative to no pair at all.
fn vacuum_sector(c: &CavityCoeffs) -> BTreeMap<String, f64> {
    let (r, rp, t, tp) = (c.r_tot, c.r_tot_prime, c.t_tot, c.t_tot_prime);
    let w = |f: &[C64]| compose_path(&[DiagramTerm::new(f.iter().copied())]).norm_sqr();
    let mut m = BTreeMap::new();
    m.insert("none".to_string(), 1.0);
    for label in ["pair_a", "pair_b"] {
        m.insert(label.to_string(), w(&[r]));
    }
    for label in ["pair_c", "pair_d"] {
        m.insert(label.to_string(), w(&[r, t]));
    }
    m.insert("pair_e".to_string(), w(&[r, rp]));
    for label in ["pair_f", "pair_g"] {
        m.insert(label.to_string(), w(&[r, rp, t]));
    }
    m.insert("pair_h".to_string(), w(&[r, rp, t, tp]));
    m
}

pub fn quantum_switch(spec: &SwitchSpec) -> Result<SwitchReport> {
    ensure_finite("xi", spec.xi)?;
    let (cf, cb) = coefficients(spec)?;
    let c = &spec.cavity;
    let phase = cis(spec.xi);
    let vacuum = VacuumSpec::uniform(c.reflectivity(), 4)?;
    let mut d2 = 0.0;
    let mut d3 = 0.0;
    for s in 0..2 {
        let forward = |bs_out: C64| DiagramTerm::new([BS_TRANSMIT, c.t_tot, c.t_tot, bs_out, cf[s]]);
        let backward = |bs_out: C64| DiagramTerm::new([BS_REFLECT, c.r_tot, c.r_tot_prime, bs_out, phase, cb[s]]);
        d2 += compose_path(&[forward(BS_REFLECT), backward(BS_TRANSMIT)]).norm_sqr();
        d3 += compose_path(&[forward(BS_TRANSMIT), backward(BS_REFLECT)]).norm_sqr();
    }
    let detections = partial_report(
        BTreeMap::from([(D2_ONLY.to_string(), d2), (D3_ONLY.to_string(), d3)]),
        &vacuum,
    )?;
    let vacuum_channels = normalize_report(vacuum_sector(c), &vacuum)?;
    Ok(SwitchReport {
        detections,
        vacuum_channels,
        c_forward: cf,
        c_backward: cb,
    })
}
