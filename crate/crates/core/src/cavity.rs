//! Temporal Fabry-Perot cavity: the field is on during `0 < t < tau`.
//!
//! With `Delta = -E' tau` and `D = 1 - r(E',E) r(-E',-E) e^{2i Delta}`,
//!
//! ```text
//! r_tot  = r(E,E')   + t(E,E') r(E',E) t(-E',-E) e^{2i Delta} / D
//! t_tot  = t(E,E') t(E',E) e^{i Delta} / D
//! r'_tot = r(-E,-E') + t(-E,-E') r(-E',-E) t(E',E) e^{2i Delta} / D
//! t'_tot = t(-E,-E') t(-E',-E) e^{i Delta} / D
//! ```
//!
//! `r'_tot`, `t'_tot` describe a negative-energy wave entering from the
//! future. All phases are referenced to `t = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};
use crate::interface::InterfaceSet;
use crate::linalg::{real, C64, I, ONE};
use crate::optimize::{golden_max, linspace};

/// Default floor on `|D|` below which a resonance error is raised.
pub const RESONANCE_FLOOR: f64 = 1e-8;

/// Parameters of a rectangular field pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub ea: f64,
    pub tau: f64,
    pub p: f64,
    pub m: f64,
}

impl CavityParams {
    pub fn new(ea: f64, tau: f64, p: f64) -> Result<Self> {
        let params = CavityParams { ea, tau, p, m: 1.0 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("eA", self.ea)?;
        ensure_positive("tau", self.tau)?;
        ensure_finite("p", self.p)?;
        ensure_positive("m", self.m)?;
        Ok(())
    }

    /// True when `eA / (m^2 tau)` exceeds one.
    pub fn beyond_schwinger_limit(&self) -> bool {
        beyond_schwinger_limit(self.ea / self.m, self.m * self.tau)
    }
}

/// True when the mean field `eA/tau` exceeds the Schwinger scale `m^2`.
pub fn beyond_schwinger_limit(ea_over_m: f64, m_tau: f64) -> bool {
    ea_over_m / m_tau > 1.0
}

/// The four cavity coefficients and the kinematics they were built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CavityCoeffs {
    pub r_tot: C64,
    pub t_tot: C64,
    pub r_tot_prime: C64,
    pub t_tot_prime: C64,
    pub e: f64,
    pub e_prime: f64,
    pub delta: f64,
    pub denom_magnitude: f64,
}

impl CavityCoeffs {
    /// Coefficients of an idealised cavity with reflectivity `R`:
    /// `r = i sqrt(R)`, `t = sqrt(1+R)`, `r' = -r`, `t' = t`.
    ///
    /// These satisfy every cavity identity. The kinematic fields are
    /// nominal (`E = E' = 1`, `delta = 0`).
    pub fn from_reflectivity(reflectivity: f64) -> Result<Self> {
        ensure_non_negative("R", reflectivity)?;
        let r = I * reflectivity.sqrt();
        let t = real((1.0 + reflectivity).sqrt());
        Ok(CavityCoeffs {
            r_tot: r,
            t_tot: t,
            r_tot_prime: -r,
            t_tot_prime: t,
            e: 1.0,
            e_prime: 1.0,
            delta: 0.0,
            denom_magnitude: 1.0,
        })
    }

    pub fn reflectivity(&self) -> f64 {
        self.r_tot.norm_sqr()
    }

    pub fn transmissivity(&self) -> f64 {
        self.t_tot.norm_sqr()
    }

    pub fn phase_r(&self) -> f64 {
        self.r_tot.arg()
    }

    pub fn phase_t(&self) -> f64 {
        self.t_tot.arg()
    }
}

/// Compose the cavity from the four interface coefficient sets.
pub fn compose(params: &CavityParams, set: &InterfaceSet, floor: f64) -> Result<CavityCoeffs> {
    let delta = -set.enter.e_prime * params.tau;
    let phase = C64::from_polar(1.0, delta);
    let phase2 = phase * phase;
    let round_trip = set.exit.r * set.enter_reversed.r * phase2;
    let den = ONE - round_trip;
    let denom_magnitude = den.norm();
    if !(denom_magnitude >= floor) {
        return Err(Error::Resonance {
            denominator: denom_magnitude,
            floor,
            k: params.p,
            ea: params.ea,
            tau: params.tau,
        });
    }
    let r_tot = set.enter.r + set.enter.t * set.exit.r * set.enter_reversed.t * phase2 / den;
    let t_tot = set.enter.t * set.exit.t * phase / den;
    let r_tot_prime = set.exit_reversed.r + set.exit_reversed.t * set.enter_reversed.r * set.exit.t * phase2 / den;
    let t_tot_prime = set.exit_reversed.t * set.enter_reversed.t * phase / den;
    Ok(CavityCoeffs {
        r_tot,
        t_tot,
        r_tot_prime,
        t_tot_prime,
        e: set.enter.e,
        e_prime: set.enter.e_prime,
        delta,
        denom_magnitude,
    })
}

/// Cavity coefficients with the default resonance floor.
pub fn cavity_coefficients(params: &CavityParams) -> Result<CavityCoeffs> {
    cavity_coefficients_with_floor(params, RESONANCE_FLOOR)
}

pub fn cavity_coefficients_with_floor(params: &CavityParams, floor: f64) -> Result<CavityCoeffs> {
    params.validate()?;
    let set = InterfaceSet::solve(params.p, params.ea, params.m)?;
    compose(params, &set, floor)
}

/// `r_tot` summed over at most `bounces` internal round trips.
///
/// Converges to the closed form when `|r(E',E) r(-E',-E)| < 1`; with
/// larger internal reflectivity the partial sums diverge.
pub fn bounce_series(params: &CavityParams, bounces: usize) -> Result<C64> {
    params.validate()?;
    let set = InterfaceSet::solve(params.p, params.ea, params.m)?;
    let phase = C64::from_polar(1.0, -set.enter.e_prime * params.tau);
    let phase2 = phase * phase;
    let ratio = set.exit.r * set.enter_reversed.r * phase2;
    let lead = set.enter.t * set.exit.r * set.enter_reversed.t * phase2;
    let mut sum = set.enter.r;
    let mut term = lead;
    for _ in 0..bounces {
        sum += term;
        term *= ratio;
    }
    Ok(sum)
}

/// Residuals of the identities relating the four cavity coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SymmetryReport {
    /// `| |t|^2 - |r|^2 - 1 |`
    pub conservation: f64,
    /// `| |t|^2 + r' r* - 1 |`
    pub unitarity_diagonal: f64,
    /// `| r t* + r* t' |`
    pub unitarity_off_diagonal: f64,
    /// `| r' + r |`
    pub reflection_antisymmetry: f64,
    /// `| |t'| - |t| |`
    pub transmission_modulus: f64,
    /// `| |r r' - t t'| - 1 |`
    pub unit_determinant: f64,
    /// distance of `2 phi_r - phi_t - phi_t'` from `+-pi`, times `min(1, |r|)`
    pub phase_sum: f64,
    /// distance of `phi_t' - phi_t` from zero
    pub transmission_phase: f64,
    /// distance of `phi_r - phi_t` from `+-pi/2`, times `min(1, |r|)`
    pub quadrature: f64,
}

impl SymmetryReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.conservation,
            self.unitarity_diagonal,
            self.unitarity_off_diagonal,
            self.reflection_antisymmetry,
            self.transmission_modulus,
            self.unit_determinant,
            self.phase_sum,
            self.transmission_phase,
            self.quadrature,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Distance of angle `x` from the nearest of `targets`, modulo `2 pi`.
fn angle_distance(x: f64, targets: &[f64]) -> f64 {
    targets
        .iter()
        .map(|t| {
            let d = (x - t).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Below this `|r_tot|` the phase identities are vacuous and reported as zero.
const PHASE_FLOOR: f64 = 1e-12;

/// Check the cavity identities; violations are reported, never raised.
pub fn verify_symmetries(c: &CavityCoeffs) -> SymmetryReport {
    let (r, t, rp, tp) = (c.r_tot, c.t_tot, c.r_tot_prime, c.t_tot_prime);
    let scale = 1.0 + t.norm_sqr();
    let degenerate = r.norm() < PHASE_FLOOR;
    // The phase of a small r is ill-conditioned, so its angle distances are
    // weighted by min(1, |r|), which turns them into absolute errors.
    let weight = r.norm().min(1.0);
    let (phase_sum, quadrature) = if degenerate {
        (0.0, 0.0)
    } else {
        (
            weight * angle_distance(2.0 * r.arg() - t.arg() - tp.arg(), &[PI]),
            weight * angle_distance(r.arg() - t.arg(), &[FRAC_PI_2, -FRAC_PI_2]),
        )
    };
    SymmetryReport {
        conservation: (t.norm_sqr() - r.norm_sqr() - 1.0).abs() / scale,
        unitarity_diagonal: (t.norm_sqr() + rp * r.conj() - 1.0).norm() / scale,
        unitarity_off_diagonal: (r * t.conj() + r.conj() * tp).norm() / scale,
        reflection_antisymmetry: (rp + r).norm() / scale.sqrt(),
        transmission_modulus: (tp.norm() - t.norm()).abs() / scale.sqrt(),
        unit_determinant: ((r * rp - t * tp).norm() - 1.0).abs(),
        phase_sum,
        transmission_phase: angle_distance(tp.arg() - t.arg(), &[0.0]),
        quadrature,
    }
}

/// `eta = R^2 / (1+R)^2`.
pub fn eta(reflectivity: f64) -> f64 {
    let x = reflectivity / (1.0 + reflectivity);
    x * x
}

/// Uniform grid of kinetic momenta centred on `|k| = eA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KGrid {
    pub half_width: f64,
    pub count: usize,
    /// Smallest `|k|` sampled.
    pub min_k: f64,
}

impl Default for KGrid {
    fn default() -> Self {
        KGrid {
            half_width: 2.0,
            count: 1024,
            min_k: 1e-6,
        }
    }
}

impl KGrid {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("halfWidth", self.half_width)?;
        ensure_non_negative("minK", self.min_k)?;
        if self.count < 512 {
            return Err(Error::invalid(
                "count",
                format!("need at least 512 k points, got {}", self.count),
            ));
        }
        Ok(())
    }

    pub fn points(&self, ea: f64) -> Vec<f64> {
        let lo = (ea - self.half_width).max(self.min_k);
        let hi = (ea + self.half_width).max(lo + self.half_width);
        linspace(lo, hi, self.count)
    }
}

/// Location and height of the reflectivity peak at fixed `eA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RmaxPoint {
    pub ea_over_m: f64,
    pub k_star: f64,
    pub r_max: f64,
    pub eta: f64,
    pub denom_magnitude: f64,
    pub schwinger_flag: bool,
}

const K_TOL: f64 = 1e-10;

/// Maximise `R_tot` over `|k|` on the grid, then refine by golden section
/// between the neighbours of the best grid point.
pub fn find_rmax(m_tau: f64, ea_over_m: f64, grid: &KGrid) -> Result<RmaxPoint> {
    ensure_positive("mTau", m_tau)?;
    ensure_non_negative("eAOverM", ea_over_m)?;
    grid.validate()?;
    let eval = |k: f64| -> Result<CavityCoeffs> {
        cavity_coefficients(&CavityParams {
            ea: ea_over_m,
            tau: m_tau,
            p: k,
            m: 1.0,
        })
    };
    let ks = grid.points(ea_over_m);
    let mut best = 0;
    let mut best_r = f64::NEG_INFINITY;
    for (i, &k) in ks.iter().enumerate() {
        let r = eval(k)?.reflectivity();
        if r > best_r {
            best_r = r;
            best = i;
        }
    }
    let lo = ks[best.saturating_sub(1)];
    let hi = ks[(best + 1).min(ks.len() - 1)];
    let (k_ref, r_ref) = golden_max(|k| eval(k).map(|c| c.reflectivity()), lo, hi, K_TOL)?;
    let (k_star, r_max) = if r_ref >= best_r {
        (k_ref, r_ref)
    } else {
        (ks[best], best_r)
    };
    let at = eval(k_star)?;
    Ok(RmaxPoint {
        ea_over_m,
        k_star,
        r_max,
        eta: eta(r_max),
        denom_magnitude: at.denom_magnitude,
        schwinger_flag: beyond_schwinger_limit(ea_over_m, m_tau),
    })
}

/// `find_rmax` over a list of potentials, in parallel with ordered output.
pub fn rmax_scan(m_tau: f64, potentials: &[f64], grid: &KGrid) -> Result<Vec<RmaxPoint>> {
    potentials.par_iter().map(|&ea| find_rmax(m_tau, ea, grid)).collect()
}

/// The row of a scan with the largest `R_max` (first one on ties).
pub fn global_max(rows: &[RmaxPoint]) -> Option<RmaxPoint> {
    rows.iter()
        .copied()
        .fold(None, |acc: Option<RmaxPoint>, row| match acc {
            Some(b) if b.r_max >= row.r_max => Some(b),
            _ => Some(row),
        })
}
